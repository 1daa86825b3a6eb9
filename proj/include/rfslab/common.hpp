// Copyright 2026 The rfslab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rfslab {

using cplx = std::complex<double>;

enum class ErrorKind {
    InvalidPlacement,
    InvalidConfig,
    InvalidGroupData,
    DegenerateInput,
    Label,
    Size,
    Depth,
    Protocol,
    Certification,
    Integrity,
    Version,
    Io,
};

std::string_view error_kind_name(ErrorKind kind);

/// Every failure raised by the library carries one of the ErrorKind tags so
/// callers (and tests) can tell a bad placement apart from a bad group table.
class LabError : public std::runtime_error {
   public:
    LabError(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

   private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &what) { throw LabError(kind, what); }

inline constexpr double kPi = 3.14159265358979323846;

inline bool is_power_of_two(uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

}  // namespace rfslab
