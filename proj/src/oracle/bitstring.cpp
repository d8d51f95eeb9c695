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

#include "chfs/oracle/bitstring.hpp"

#include <stdexcept>

namespace chfs {

BitString::BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) {
    if (b > 1) throw std::invalid_argument("BitString: bit value above 1");
  }
}

BitString BitString::parse(const std::string& text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("BitString: invalid character in '" + text +
                                  "'");
    }
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return BitString(std::move(bits));
}

BitString BitString::from_uint(std::uint64_t value, int width) {
  if (width < 0 || width > 64) {
    throw std::invalid_argument("BitString: width out of range");
  }
  if (width < 64 && (value >> width) != 0) {
    throw std::invalid_argument("BitString: value does not fit in width");
  }
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(width));
  for (int i = 0; i < width; ++i) {
    bits[static_cast<std::size_t>(i)] =
        static_cast<std::uint8_t>((value >> (width - 1 - i)) & 1U);
  }
  return BitString(std::move(bits));
}

std::uint64_t BitString::to_uint() const {
  if (bits_.size() > 64) {
    throw std::length_error("BitString: longer than 64 bits");
  }
  std::uint64_t v = 0;
  for (auto b : bits_) v = (v << 1) | b;
  return v;
}

std::string BitString::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
  return s;
}

BitString BitString::concat(const BitString& other) const {
  std::vector<std::uint8_t> bits = bits_;
  bits.insert(bits.end(), other.bits_.begin(), other.bits_.end());
  return BitString(std::move(bits));
}

std::vector<BitString> all_bitstrings(int width) {
  if (width < 0 || width > 24) {
    throw std::invalid_argument("all_bitstrings: width out of range");
  }
  std::vector<BitString> out;
  out.reserve(std::size_t{1} << width);
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << width); ++v) {
    out.push_back(BitString::from_uint(v, width));
  }
  return out;
}

}  // namespace chfs
