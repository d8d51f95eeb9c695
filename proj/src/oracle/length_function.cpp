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

#include "chfs/oracle/length_function.hpp"

#include <bit>
#include <cstdint>
#include <stdexcept>

namespace chfs {

LengthFunction LengthFunction::constant(int c) {
  if (c < 1) throw std::invalid_argument("LengthFunction: constant must be >= 1");
  return LengthFunction(Kind::Constant, c);
}

LengthFunction LengthFunction::parse(const std::string& text) {
  if (text == "identity") return identity();
  if (text == "floor_log") return floor_log();
  if (text == "two_floor_log") return two_floor_log();
  const std::string prefix = "constant:";
  if (text.rfind(prefix, 0) == 0) {
    std::size_t used = 0;
    const std::string rest = text.substr(prefix.size());
    int c = 0;
    try {
      c = std::stoi(rest, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != rest.size()) {
      throw std::invalid_argument("LengthFunction: bad constant in '" + text +
                                  "'");
    }
    return constant(c);
  }
  throw std::invalid_argument("LengthFunction: unknown kind '" + text + "'");
}

int LengthFunction::operator()(int input_length) const {
  if (input_length < 1) {
    throw std::invalid_argument("LengthFunction: input length must be >= 1");
  }
  const auto len = static_cast<std::uint64_t>(input_length);
  switch (kind_) {
    case Kind::Identity:
      return input_length;
    case Kind::FloorLog: {
      const int v = static_cast<int>(std::bit_width(len)) - 1;
      return v < 1 ? 1 : v;
    }
    case Kind::TwoFloorLog: {
      const int v = static_cast<int>(std::bit_width(len * len)) - 1;
      return v < 1 ? 1 : v;
    }
    case Kind::Constant:
      return c_;
  }
  throw std::logic_error("LengthFunction: unreachable");
}

std::string LengthFunction::to_string() const {
  switch (kind_) {
    case Kind::Identity:
      return "identity";
    case Kind::FloorLog:
      return "floor_log";
    case Kind::TwoFloorLog:
      return "two_floor_log";
    case Kind::Constant:
      return "constant:" + std::to_string(c_);
  }
  return "?";
}

}  // namespace chfs
