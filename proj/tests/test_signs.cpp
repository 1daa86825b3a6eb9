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

#include <gtest/gtest.h>

#include <cmath>

#include "rfslab/rng.hpp"
#include "rfslab/signs.hpp"

namespace rfslab {
namespace {

// Exhaustive reference over theta with theta_0 = +1.
double reference_max(const std::vector<cplx> &x) {
    double best = 0.0;
    const size_t d = x.size();
    for (uint64_t mask = 0; mask < (uint64_t{1} << (d - 1)); ++mask) {
        cplx s = x[0];
        for (size_t k = 1; k < d; ++k) {
            s += ((mask >> (k - 1)) & 1) ? -x[k] : x[k];
        }
        best = std::max(best, std::abs(s));
    }
    return best;
}

std::vector<cplx> random_vector(size_t d, Rng &rng) {
    std::vector<cplx> x(d);
    for (auto &z : x) {
        z = rng.complex_normal();
    }
    return x;
}

TEST(Signs, ReachesExhaustiveMaximum) {
    Rng rng(8);
    for (int trial = 0; trial < 300; ++trial) {
        const auto x = random_vector(1 + rng.below(10), rng);
        const auto s = best_phase_signs(x);
        EXPECT_NEAR(s.value, reference_max(x), 1e-12 * (1 + s.value));
        EXPECT_NEAR(s.value, brute_force_signs(x).value, 1e-12 * (1 + s.value));
    }
}

TEST(Signs, TwoOverPiBound) {
    Rng rng(13);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto x = random_vector(1 + rng.below(16), rng);
        const auto s = best_phase_signs(x);
        double l1 = 0.0;
        for (const auto &z : x) {
            l1 += std::abs(z);
        }
        EXPECT_NEAR(s.l1, l1, 1e-12 * l1);
        EXPECT_GE(s.value, (2.0 / kPi) * l1 * (1 - 1e-12));
    }
}

TEST(Signs, ThetaReproducesValue) {
    Rng rng(4);
    const auto x = random_vector(9, rng);
    const auto s = best_phase_signs(x);
    ASSERT_EQ(s.theta.size(), x.size());
    cplx acc = 0.0;
    for (size_t k = 0; k < x.size(); ++k) {
        ASSERT_TRUE(s.theta[k] == 1 || s.theta[k] == -1);
        acc += static_cast<double>(s.theta[k]) * x[k];
    }
    EXPECT_NEAR(std::abs(acc), s.value, 1e-12 * s.value);
    EXPECT_NEAR(phase_objective(x, s.phi_star), s.g_at_phi, 1e-12 * s.value);
    EXPECT_GE(s.phi_star, 0.0);
    EXPECT_LT(s.phi_star, kPi);
}

TEST(Signs, EdgeCases) {
    const std::vector<cplx> one = {cplx(3.0, 4.0)};
    EXPECT_NEAR(best_phase_signs(one).value, 5.0, 1e-12);
    // Real vectors: signs align every entry, value = L1.
    const std::vector<cplx> real = {1.0, -2.0, 0.5, -0.25};
    EXPECT_NEAR(best_phase_signs(real).value, 3.75, 1e-12);
    // Collinear complex entries behave like the real case.
    const cplx w = std::polar(1.0, 0.7);
    const std::vector<cplx> line = {w, -2.0 * w, 3.0 * w};
    EXPECT_NEAR(best_phase_signs(line).value, 6.0, 1e-12);
    const std::vector<cplx> zeros(4, 0.0);
    EXPECT_THROW(best_phase_signs(zeros), LabError);
}

TEST(Signs, MixedScales) {
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        auto x = random_vector(1 + rng.below(12), rng);
        for (auto &z : x) {
            z *= std::pow(10.0, -6.0 + 12.0 * rng.uniform());
        }
        const auto s = best_phase_signs(x);
        const double ref = reference_max(x);
        EXPECT_LE(s.value, ref * (1 + 1e-12));
        EXPECT_GE(s.value, (2.0 / kPi) * s.l1 * (1 - 1e-12));
    }
}

}  // namespace
}  // namespace rfslab
