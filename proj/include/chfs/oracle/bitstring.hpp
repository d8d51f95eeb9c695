// Copyright 2026 The CHFS Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace chfs {

/// Finite bit string; bit 0 is the leftmost character and the most
/// significant bit of to_uint().
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::vector<std::uint8_t> bits);

  /// Parses a string of '0' and '1'.
  static BitString parse(const std::string& text);
  /// The low width bits of value, most significant first.
  static BitString from_uint(std::uint64_t value, int width);

  int size() const { return static_cast<int>(bits_.size()); }
  bool empty() const { return bits_.empty(); }
  bool operator[](int i) const { return bits_[static_cast<std::size_t>(i)] != 0; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  /// Throws if size() > 64.
  std::uint64_t to_uint() const;
  std::string to_string() const;

  BitString concat(const BitString& other) const;

  friend bool operator==(const BitString&, const BitString&) = default;
  friend auto operator<=>(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Every bit string of the given width in increasing numeric order.
std::vector<BitString> all_bitstrings(int width);

}  // namespace chfs
