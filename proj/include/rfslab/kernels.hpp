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

// Data-parallel kernels for dense state vectors.
//
// Every kernel exists twice: `serial::` is the reference implementation kept
// for testing, `parallel::` is the OpenMP version used by the library. Both
// perform identical floating-point operations in identical order (reductions
// use fixed blocks folded left to right), so their results agree bit for bit
// regardless of thread count.

#include <array>
#include <cstddef>
#include <span>

#include "rfslab/common.hpp"

namespace rfslab::kernels {

/// Row-major 4x4 matrix. Local basis index is 2*bit_i + bit_j.
using Gate4 = std::array<cplx, 16>;

/// Reductions are summed in fixed blocks of this many entries.
inline constexpr size_t kReduceBlock = 4096;

namespace serial {
void apply_two_qubit(std::span<cplx> amps, const Gate4 &gate, unsigned qi, unsigned qj);
void apply_hadamard_all(std::span<cplx> amps);
double sum_abs(std::span<const cplx> amps);
double sum_abs4(std::span<const cplx> amps);
double sum_norm2(std::span<const cplx> amps);
}  // namespace serial

namespace parallel {
void apply_two_qubit(std::span<cplx> amps, const Gate4 &gate, unsigned qi, unsigned qj);
void apply_hadamard_all(std::span<cplx> amps);
double sum_abs(std::span<const cplx> amps);
double sum_abs4(std::span<const cplx> amps);
double sum_norm2(std::span<const cplx> amps);
}  // namespace parallel

/// Sets the OpenMP worker count (no-op without OpenMP). Values < 1 are ignored.
void set_num_threads(int threads);
int num_threads();

}  // namespace rfslab::kernels
