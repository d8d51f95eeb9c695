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

#include <string>

namespace chfs {

/// Output length of the oracle state attached to an input of a given length.
/// The logarithmic kinds are clamped below at 1 so every nonempty input gets
/// at least one qubit.
class LengthFunction {
 public:
  enum class Kind { Identity, FloorLog, TwoFloorLog, Constant };

  LengthFunction() = default;
  static LengthFunction identity() { return LengthFunction(Kind::Identity, 0); }
  static LengthFunction floor_log() { return LengthFunction(Kind::FloorLog, 0); }
  static LengthFunction two_floor_log() {
    return LengthFunction(Kind::TwoFloorLog, 0);
  }
  static LengthFunction constant(int c);

  /// Accepts "identity", "floor_log", "two_floor_log" and "constant:<c>".
  static LengthFunction parse(const std::string& text);

  int operator()(int input_length) const;

  Kind kind() const { return kind_; }
  int constant_value() const { return c_; }
  std::string to_string() const;

  friend bool operator==(const LengthFunction&, const LengthFunction&) = default;

 private:
  LengthFunction(Kind k, int c) : kind_(k), c_(c) {}
  Kind kind_ = Kind::Identity;
  int c_ = 0;
};

}  // namespace chfs
