// Copyright 2026 The gateforge Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gateforge {

/// Two operands that must share a dimension do not.
class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(const std::string& what, int lhs, int rhs)
      : std::invalid_argument(
            what + ": dimension mismatch (" + std::to_string(lhs) + " vs " +
            std::to_string(rhs) + ")"),
        lhs_(lhs),
        rhs_(rhs) {}

  int lhs() const noexcept { return lhs_; }
  int rhs() const noexcept { return rhs_; }

 private:
  int lhs_;
  int rhs_;
};

/// A matrix handed to a checked constructor is not in SU(d).
class NotSpecialUnitary : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An enumeration or search needed more net entries than it was allowed.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::size_t reached)
      : std::runtime_error(what + " (entries reached: " +
                           std::to_string(reached) + ")"),
        detail_(what),
        reached_(reached) {}

  std::size_t reached() const noexcept { return reached_; }
  /// The message without the entry count.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string detail_;
  std::size_t reached_;
};

}  // namespace gateforge
