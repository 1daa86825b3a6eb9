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
#include "rfslab/group.hpp"
#include "rfslab/kernels.hpp"
#include "rfslab/rng.hpp"
#include "rfslab/state.hpp"
#include "rfslab/unitary.hpp"

namespace rfslab {
namespace {

// Reference: build the full 2^n x 2^n matrix of a gate on (i, j) by bit
// manipulation and multiply. Shares nothing with the kernels.
std::vector<cplx> dense_apply(const std::vector<cplx> &v, const TwoQubitGate &g, unsigned i, unsigned j) {
    const size_t dim = v.size();
    std::vector<cplx> out(dim, 0.0);
    for (size_t row = 0; row < dim; ++row) {
        for (size_t col = 0; col < dim; ++col) {
            const size_t rest_r = row & ~((size_t{1} << i) | (size_t{1} << j));
            const size_t rest_c = col & ~((size_t{1} << i) | (size_t{1} << j));
            if (rest_r != rest_c) {
                continue;
            }
            const int lr = static_cast<int>(2 * ((row >> i) & 1) + ((row >> j) & 1));
            const int lc = static_cast<int>(2 * ((col >> i) & 1) + ((col >> j) & 1));
            out[row] += g(lr, lc) * v[col];
        }
    }
    return out;
}

std::vector<cplx> random_vector(size_t dim, Rng &rng) {
    std::vector<cplx> v(dim);
    for (auto &z : v) {
        z = rng.complex_normal();
    }
    return v;
}

TEST(Rng, DeterministicAndSplittable) {
    Rng a(42), b(42);
    for (int k = 0; k < 100; ++k) {
        ASSERT_EQ(a.next_u64(), b.next_u64());
    }
    EXPECT_NE(Rng::child(7, 0).next_u64(), Rng::child(7, 1).next_u64());
    EXPECT_EQ(Rng::child(7, 3).next_u64(), Rng::child(7, 3).next_u64());
    EXPECT_THROW(a.below(0), LabError);
}

TEST(Rng, BelowIsRoughlyUniform) {
    Rng rng(5);
    std::vector<int> counts(10, 0);
    const int draws = 100000;
    for (int k = 0; k < draws; ++k) {
        const auto v = rng.below(10);
        ASSERT_LT(v, 10u);
        ++counts[v];
    }
    double chi2 = 0.0;
    for (int c : counts) {
        chi2 += (c - draws / 10.0) * (c - draws / 10.0) / (draws / 10.0);
    }
    EXPECT_LT(chi2, 27.88);  // chi^2_9 at 0.001
}

TEST(Rng, NormalMoments) {
    Rng rng(11);
    double s = 0.0, s2 = 0.0;
    const int draws = 200000;
    for (int k = 0; k < draws; ++k) {
        const double x = rng.normal();
        s += x;
        s2 += x * x;
    }
    EXPECT_NEAR(s / draws, 0.0, 0.01);
    EXPECT_NEAR(s2 / draws, 1.0, 0.01);
}

TEST(PureState, Validation) {
    EXPECT_NO_THROW(PureState::basis(3, 5));
    EXPECT_THROW(PureState::basis(3, 8), LabError);
    EXPECT_THROW(PureState::from_amplitudes(2, {1.0, 0.0, 0.0}), LabError);
    EXPECT_THROW(PureState::from_amplitudes(1, {1.0, 1.0}), LabError);
    const auto u = PureState::uniform(4);
    EXPECT_NEAR(u.norm2(), 1.0, 1e-15);
}

TEST(TwoQubitGate, KronPutsFirstFactorOnQubitI) {
    // X on qubit i: |0..0> -> bit i set.
    const std::array<cplx, 4> x = {0.0, 1.0, 1.0, 0.0};
    const auto g = TwoQubitGate::kron(x, kIdentity2);
    const auto s = apply_gate(PureState::basis(3, 0), g, 2, 0);
    EXPECT_NEAR(std::abs(s[4]), 1.0, 1e-15);
}

TEST(TwoQubitGate, HaarSamplesAreUnitary) {
    Rng rng(3);
    for (int k = 0; k < 200; ++k) {
        EXPECT_LE(sample_haar_two_qubit(rng).unitarity_error(), 1e-12);
    }
    kernels::Gate4 bad{};
    bad[0] = 2.0;
    EXPECT_THROW(TwoQubitGate::from_entries(bad), LabError);
}

TEST(TwoQubitGate, HaarFirstMoment) {
    // E|W_00|^2 = 1/4 and E|W_00|^4 = 2/(d(d+1)) = 1/10 for d = 4.
    Rng rng(9);
    double m2 = 0.0, m4 = 0.0;
    const int draws = 40000;
    for (int k = 0; k < draws; ++k) {
        const double p = std::norm(sample_haar_two_qubit(rng)(0, 0));
        m2 += p;
        m4 += p * p;
    }
    EXPECT_NEAR(m2 / draws, 0.25, 0.005);
    EXPECT_NEAR(m4 / draws, 0.1, 0.004);
}

TEST(Kernels, GateMatchesDenseReference) {
    Rng rng(21);
    for (unsigned n : {2u, 3u, 5u}) {
        for (unsigned i = 0; i < n; ++i) {
            for (unsigned j = 0; j < n; ++j) {
                if (i == j) {
                    continue;
                }
                const auto g = sample_haar_two_qubit(rng);
                auto v = random_vector(size_t{1} << n, rng);
                const auto want = dense_apply(v, g, i, j);
                kernels::serial::apply_two_qubit(v, g.entries, i, j);
                for (size_t k = 0; k < v.size(); ++k) {
                    ASSERT_NEAR(std::abs(v[k] - want[k]), 0.0, 1e-12) << "n=" << n << " i=" << i << " j=" << j;
                }
            }
        }
    }
}

TEST(Kernels, SerialAndParallelBitIdentical) {
    Rng rng(33);
    const unsigned n = 14;
    const auto base = random_vector(size_t{1} << n, rng);
    const auto g = sample_haar_two_qubit(rng);
    auto serial = base;
    kernels::serial::apply_two_qubit(serial, g.entries, 3, 11);
    kernels::serial::apply_hadamard_all(serial);
    for (int threads : {1, 2, 4}) {
        kernels::set_num_threads(threads);
        auto par = base;
        kernels::parallel::apply_two_qubit(par, g.entries, 3, 11);
        kernels::parallel::apply_hadamard_all(par);
        ASSERT_EQ(par, serial) << threads << " threads";
        EXPECT_EQ(kernels::parallel::sum_abs(par), kernels::serial::sum_abs(serial));
        EXPECT_EQ(kernels::parallel::sum_abs4(par), kernels::serial::sum_abs4(serial));
        EXPECT_EQ(kernels::parallel::sum_norm2(par), kernels::serial::sum_norm2(serial));
    }
    kernels::set_num_threads(0);
}

TEST(Kernels, InvalidPlacementRejected) {
    auto s = PureState::basis(3, 0);
    EXPECT_THROW(apply_gate_inplace(s, TwoQubitGate::identity(), 1, 1), LabError);
    EXPECT_THROW(apply_gate_inplace(s, TwoQubitGate::identity(), 0, 3), LabError);
}

TEST(RandomCircuit, RegenerationIsBitIdentical) {
    const auto a = RandomCircuit::generate(5, 40, 99);
    const auto b = RandomCircuit::generate(5, 40, 99);
    ASSERT_EQ(a.placements().size(), 40u);
    EXPECT_EQ(a.placements(), b.placements());
    for (const auto &p : a.placements()) {
        EXPECT_NE(p.i, p.j);
        EXPECT_LT(p.i, 5u);
        EXPECT_LT(p.j, 5u);
    }
    EXPECT_NE(RandomCircuit::generate(5, 40, 100).placements(), a.placements());
    EXPECT_THROW(RandomCircuit::generate(1, 4, 0), LabError);
}

TEST(RandomCircuit, UnevolveInvertsEvolve) {
    const auto c = RandomCircuit::generate(4, 60, 5);
    Rng rng(1);
    auto v = sample_unit_vector(16, rng);
    auto s = PureState::from_amplitudes(4, v);
    c.evolve_inplace(s);
    c.unevolve_inplace(s);
    for (size_t k = 0; k < 16; ++k) {
        EXPECT_NEAR(std::abs(s[k] - v[k]), 0.0, 1e-12);
    }
}

TEST(RandomCircuit, PairsAreUniform) {
    const auto c = RandomCircuit::generate(3, 30000, 17);
    std::map<std::pair<unsigned, unsigned>, int> counts;
    for (const auto &p : c.placements()) {
        ++counts[{std::min(p.i, p.j), std::max(p.i, p.j)}];
    }
    ASSERT_EQ(counts.size(), 3u);
    for (const auto &[pair, cnt] : counts) {
        EXPECT_NEAR(cnt / 30000.0, 1.0 / 3.0, 0.015);
    }
}

TEST(Unitary, HadamardMatchesFormula) {
    const HadamardAll h(3);
    const auto m = h.dense_matrix();
    for (size_t r = 0; r < 8; ++r) {
        for (size_t c = 0; c < 8; ++c) {
            const double sign = std::popcount(r & c) % 2 ? -1.0 : 1.0;
            EXPECT_NEAR(std::abs(m[r * 8 + c] - cplx(sign / std::sqrt(8.0))), 0.0, 1e-15);
        }
    }
}

TEST(Unitary, CircuitAdjointPair) {
    const CircuitUnitary u(RandomCircuit::generate(3, 20, 2));
    const auto m = u.dense_matrix();
    // U^dagger U = I
    for (size_t r = 0; r < 8; ++r) {
        for (size_t c = 0; c < 8; ++c) {
            cplx acc = 0.0;
            for (size_t k = 0; k < 8; ++k) {
                acc += std::conj(m[k * 8 + r]) * m[k * 8 + c];
            }
            EXPECT_NEAR(std::abs(acc - cplx(r == c ? 1.0 : 0.0)), 0.0, 1e-12);
        }
    }
}

TEST(Group, BuiltinGroupsHaveUnitaryFourier) {
    for (const char *name : {"S3", "D4", "Q8"}) {
        const auto g = builtin_group(name);
        size_t sq = 0;
        for (const auto &ir : g.irreps()) {
            sq += ir.dim * ir.dim;
        }
        EXPECT_EQ(sq, g.order()) << name;
        EXPECT_FALSE(g.is_abelian()) << name;
        EXPECT_LE(group_fourier(g).unitarity_error(), 1e-12) << name;
    }
}

TEST(Group, CyclicQftEntries) {
    const auto f = qft_cyclic(8);
    EXPECT_LE(f.unitarity_error(), 1e-12);
    for (size_t r = 0; r < 8; ++r) {
        for (size_t c = 0; c < 8; ++c) {
            const double ph = 2.0 * kPi * static_cast<double>(r * c) / 8.0;
            EXPECT_NEAR(std::abs(f.at(f.row_of(r, 0, 0), c) - std::polar(1.0 / std::sqrt(8.0), ph)), 0.0, 1e-12);
        }
    }
}

TEST(Group, CorruptTableRejected) {
    auto doc = group_to_json(builtin_group("S3"));
    doc["mult_table"][1][1] = 1;
    EXPECT_THROW(group_from_json(doc), LabError);
    auto doc2 = group_to_json(builtin_group("D4"));
    doc2["irreps"].erase(doc2["irreps"].size() - 1);
    EXPECT_THROW(group_from_json(doc2), LabError);
}

}  // namespace
}  // namespace rfslab
