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

#include "rfslab/circuit.hpp"
#include "rfslab/dispersion.hpp"
#include "rfslab/group.hpp"
#include "rfslab/kernels.hpp"
#include "rfslab/unitary.hpp"

namespace rfslab {
namespace {

double dense_l1(const std::vector<cplx> &m, size_t dim, size_t a) {
    double s = 0.0;
    for (size_t x = 0; x < dim; ++x) {
        s += std::abs(m[a * dim + x]);
    }
    return s;
}

TEST(Dispersion, HadamardIsFlat) {
    for (unsigned n : {2u, 5u, 8u}) {
        const auto rep = certify_dispersing(HadamardAll(n), 1.0);
        ASSERT_EQ(rep.per_label_l1.size(), size_t{1} << n);
        for (double v : rep.per_label_l1) {
            EXPECT_NEAR(v, std::exp2(n / 2.0), 1e-9);
        }
        EXPECT_EQ(rep.alpha_achieved, 1.0);
    }
}

TEST(Dispersion, IdentityRowsHaveUnitL1) {
    const auto rep = certify_dispersing(IdentityUnitary(4), 0.25);
    for (double v : rep.per_label_l1) {
        EXPECT_NEAR(v, 1.0, 1e-15);
    }
    // threshold 0.25 * 4 = 1 is met by every row.
    EXPECT_EQ(rep.achieving_set.size(), 16u);
    EXPECT_TRUE(certify_dispersing(IdentityUnitary(4), 0.5).achieving_set.empty());
}

TEST(Dispersion, MatchesDenseRowSums) {
    const CircuitUnitary u(RandomCircuit::generate(5, 200, 4));
    const auto m = u.dense_matrix();
    const auto rep = certify_dispersing(u, 0.5);
    for (size_t a = 0; a < 32; ++a) {
        EXPECT_NEAR(rep.per_label_l1[a], dense_l1(m, 32, a), 1e-12);
        EXPECT_NEAR(l1_row(u, a), rep.per_label_l1[a], 1e-12);
        EXPECT_GE(rep.per_label_l1[a], 1.0 - 1e-12);
        EXPECT_LE(rep.per_label_l1[a], std::sqrt(32.0) + 1e-12);
    }
    for (auto a : rep.achieving_set) {
        EXPECT_GE(rep.per_label_l1[a], 0.5 * std::sqrt(32.0) - kThresholdSlack);
    }
}

TEST(Dispersion, SerialAndParallelAgreeBitwise) {
    const CircuitUnitary u(RandomCircuit::generate(6, 300, 8));
    for (int threads : {1, 3}) {
        kernels::set_num_threads(threads);
        const auto par = certify_dispersing(u, 0.6);
        const auto ser = certify_dispersing_serial(u, 0.6);
        EXPECT_EQ(par.per_label_l1, ser.per_label_l1);
        EXPECT_EQ(par.achieving_set, ser.achieving_set);
    }
    kernels::set_num_threads(0);
}

TEST(Dispersion, QftIsFlat) {
    const auto f = qft_cyclic(64);
    const DenseUnitary u(6, f.entries, "qft");
    for (double v : certify_dispersing(u, 1.0).per_label_l1) {
        EXPECT_NEAR(v, 8.0, 1e-9);
    }
}

TEST(PseudoDispersion, BestSampleBeatsBound) {
    const auto f = group_fourier(builtin_group("S3"));
    const auto rep = pseudo_search(f, 2, 0, 500, 77);
    EXPECT_DOUBLE_EQ(rep.bound, std::sqrt(3.0));
    EXPECT_GE(rep.best(), rep.bound);
    EXPECT_TRUE(rep.non_power_of_two);
    EXPECT_NEAR(rep.alpha, std::log2(4.0) / std::log2(6.0), 1e-12);
    // best_psi reproduces the best L1 value
    double s = 0.0;
    for (const auto &z : rep.best_psi) {
        s += std::abs(z);
    }
    EXPECT_NEAR(s, rep.best(), 1e-9);
    const auto again = pseudo_search(f, 2, 0, 500, 77);
    EXPECT_EQ(again.l1_values, rep.l1_values);
}

TEST(FourthMoment, HolderHoldsOnSamples) {
    Rng rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(100);
        for (auto &x : v) {
            x = std::abs(rng.normal()) * (1 + rng.below(5));
        }
        const auto c = fourth_moment_check(v);
        EXPECT_TRUE(c.pass);
        EXPECT_GE(c.lhs, c.rhs - 1e-12);
    }
}

TEST(Collision, UniformAndBasis) {
    EXPECT_NEAR(collision(PureState::uniform(5)), 1.0 / 32, 1e-15);
    EXPECT_EQ(collision(PureState::basis(5, 3)), 1.0);
}

}  // namespace
}  // namespace rfslab
