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
#include <string>
#include <vector>

#include "rfslab/group.hpp"
#include "rfslab/rng.hpp"
#include "rfslab/unitary.hpp"

namespace rfslab {

/// Boundary slack for every threshold comparison in this module.
inline constexpr double kThresholdSlack = 1e-12;

struct DispersionReport {
    unsigned n = 0;
    double beta = 0.0;
    /// per_label_l1[a] = sum_x |<a|U|x>|
    std::vector<double> per_label_l1;
    /// Labels with L1 >= beta 2^{n/2}, ascending.
    std::vector<uint64_t> achieving_set;
    /// log2 |A| / n, or 0 when A is empty.
    double alpha_achieved = 0.0;

    double threshold() const;
};

/// L1 norm of U^dagger|a>, from one state-vector run.
double l1_row(const Unitary &u, uint64_t a);

/// Enumerates every label. Labels are processed in parallel; each L1 value is
/// computed independently so the report is identical for any thread count.
DispersionReport certify_dispersing(const Unitary &u, double beta);
/// Reference implementation of the same report on one thread.
DispersionReport certify_dispersing_serial(const Unitary &u, double beta);

struct PseudoDispersionReport {
    std::string group;
    size_t irrep = 0;
    unsigned row = 0;  ///< i of the label (lambda, i), 0-based
    /// Width of the measured register (lambda, i) in the qubit embedding,
    /// ceil(log2 sum_lambda d_lambda).
    unsigned m_bits = 0;
    size_t samples = 0;
    std::vector<double> l1_values;
    size_t best_index = 0;
    std::vector<cplx> best_psi;  ///< over group elements
    std::vector<cplx> best_coefficients;  ///< over j = 0..d_lambda-1
    double bound = 0.0;  ///< sqrt(|G| / 2)
    double mean = 0.0;
    double standard_error = 0.0;
    /// log2(sum d_lambda) / log2 |G|
    double alpha = 0.0;
    /// |G| not a power of two: the qubit embedding of the label register is not canonical.
    bool non_power_of_two = false;

    double best() const { return l1_values.empty() ? 0.0 : l1_values[best_index]; }
};

/// Samples psi uniformly from V = span{ U^dagger |lambda, i, j> : j } and records
/// sum_g |<g|psi>| for each draw. Sample k uses Rng::child(stream_seed, k).
PseudoDispersionReport pseudo_search(const FourierMatrix &f, size_t irrep, unsigned i, size_t samples,
                                     uint64_t stream_seed);

struct FourthMomentCheck {
    double lhs = 0.0;  ///< E|Y|
    double rhs = 0.0;  ///< (E Y^2)^{3/2} / (E Y^4)^{1/2}
    bool pass = false;
};

/// E|Y| >= (E Y^2)^{3/2} / (E Y^4)^{1/2} on the empirical distribution of `values`.
FourthMomentCheck fourth_moment_check(std::span<const double> values);

/// Q = sum_x |amplitude(x)|^4.
double collision(const PureState &state);

}  // namespace rfslab
