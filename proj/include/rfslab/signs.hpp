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

#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "rfslab/common.hpp"

namespace rfslab {

/// A +-1 vector theta with |sum_k theta_k x_k| >= (2/pi) sum_k |x_k|.
struct SignSolution {
    double phi_star = 0.0;  ///< maximizer of g(phi) = sum_k |Re(e^{i phi} x_k)|, in [0, pi)
    std::vector<int8_t> theta;
    double value = 0.0;  ///< |sum_k theta_k x_k|
    double l1 = 0.0;     ///< sum_k |x_k|
    double g_at_phi = 0.0;  ///< g(phi_star), recomputed directly
};

/// g(phi) = sum_k |Re(e^{i phi} x_k)|
double phase_objective(std::span<const cplx> x, double phi);

/// Exact maximization of g over phi.
///
/// g has period pi and breakpoints where Re(e^{i phi} x_k) changes sign, at
/// phi = pi/2 - arg(x_k) (mod pi). Between consecutive breakpoints the signs are
/// fixed and g(phi) = A cos(phi) + B sin(phi), whose only interior critical
/// point is atan2(B, A). The sweep visits every interval once, updating (A, B)
/// as it crosses each breakpoint, and the best candidate (breakpoint or
/// interior critical point) is re-evaluated directly. Sign rule: theta_k is the
/// sign of Re(e^{i phi*} x_k), with exact zeros mapped to +1.
///
/// Throws DegenerateInput for an empty or all-zero vector.
SignSolution best_phase_signs(std::span<const cplx> x);

struct BruteForceSigns {
    std::vector<int8_t> theta;
    double value = 0.0;
};

/// Exhaustive max over all 2^d sign vectors (d <= 20). Ties go to the
/// lexicographically smallest theta, with +1 ordered before -1.
BruteForceSigns brute_force_signs(std::span<const cplx> x);

nlohmann::json to_json(const SignSolution &s);

}  // namespace rfslab
