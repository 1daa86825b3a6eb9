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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rfslab/rng.hpp"
#include "rfslab/state.hpp"

namespace rfslab {

/// p in {0,1,2,3}^n with 0 = I, 1 = Z, 2 = X, 3 = Y, packed two bits per
/// site (site k in bits 2k, 2k+1). Site k acts on qubit k.
class PauliString {
   public:
    static constexpr unsigned kMaxSites = 32;

    explicit PauliString(unsigned n, uint64_t packed = 0);
    static PauliString from_codes(const std::vector<unsigned> &codes);
    static PauliString parse(const std::string &text);  ///< e.g. "IZXY", site 0 first

    unsigned size() const { return n_; }
    uint64_t packed() const { return packed_; }
    unsigned get(unsigned k) const { return static_cast<unsigned>((packed_ >> (2 * k)) & 3); }
    void set(unsigned k, unsigned code);
    unsigned weight() const;
    std::string str() const;
    bool operator==(const PauliString &o) const = default;

   private:
    unsigned n_;
    uint64_t packed_;
};

/// One step of the Pauli-string chain: a uniform unordered pair of distinct
/// sites; (0,0) stays, anything else becomes one of the 15 nonzero pairs uniformly.
PauliString chain_step(const PauliString &p, Rng &rng);

/// Weight-lumped chain on w in {1..n}.
struct WeightChain {
    unsigned n = 0;
    /// Row-major n x n, entry (w-1, w'-1) = P(w -> w').
    std::vector<double> transition;
    /// pi(w) = C(n,w) 3^w / (4^n - 1)
    std::vector<double> stationary;
    /// Assembled in exact rational arithmetic (n <= 8) and converted once.
    bool rational = false;

    double at(unsigned w, unsigned w2) const { return transition[(w - 1) * n + (w2 - 1)]; }
    double max_row_sum_error() const;
    double max_detailed_balance_error() const;
};

WeightChain lumped_matrix(unsigned n);

/// Exact rational checks at n <= 8: every row sums to 1 and
/// pi(w) P(w, w') = pi(w') P(w', w) for all pairs, with no rounding anywhere.
struct RationalChecks {
    bool rows_sum_to_one = false;
    bool detailed_balance = false;
    /// Numerator/denominator of P(w -> w') as strings, row-major.
    std::vector<std::string> entries;
};
RationalChecks lumped_rational_checks(unsigned n);

/// 1 - (second largest eigenvalue) of the lumped chain, via the
/// pi-symmetrized matrix and a dense symmetric eigensolver. 2 <= n <= 64.
double exact_gap(unsigned n);

struct GapRow {
    unsigned n;
    double gap;
    double gap_n;
    double gap_n2;
};
std::vector<GapRow> gap_table(const std::vector<unsigned> &ns);

/// Full 4^n x 4^n chain (row-major, n <= 4); 0^n is absorbing.
std::vector<double> full_chain_matrix(unsigned n);

/// dist <- dist P, t times.
std::vector<double> evolve_distribution(const std::vector<double> &matrix, std::vector<double> dist, unsigned t);

/// gamma^2(p) = (tr psi sigma_p)^2 / 2^n for all 4^n strings (n <= 6).
std::vector<double> pauli_weights(const PureState &psi);

/// Expectation <psi|sigma_p|psi> (real for Hermitian sigma_p).
double pauli_expectation(const PureState &psi, const PauliString &p);

struct MomentComparison {
    unsigned n = 0;
    unsigned t = 0;
    size_t circuits = 0;
    std::vector<double> circuit_mean;  ///< averaged gamma_t^2 over circuits
    std::vector<double> chain;  ///< chain-evolved distribution
    double tv = 0.0;
};

/// Left: gamma_t^2 averaged over sampled random circuits applied to |0^n>.
/// Right: 2^{-n} on {I,Z}^n evolved t steps by the exact chain. n <= 4, t <= 50.
MomentComparison moment_compare(unsigned n, unsigned t, size_t circuits, uint64_t seed);

/// Histogram over all 4^n strings after t chain steps from `start`, one
/// stream per walker.
std::vector<double> walker_distribution(const PauliString &start, unsigned t, size_t walkers, uint64_t seed);

double tv_distance(const std::vector<double> &a, const std::vector<double> &b);

/// 16x16 <p|ad_W|q> = tr(sigma_p W sigma_q W^dagger)/4 with p = 4 p_i + p_j
/// (p_i on the gate's first qubit). Real for unitary W; `max_imag` receives
/// the largest discarded imaginary part.
std::array<double, 256> ad_matrix(const TwoQubitGate &w, double *max_imag = nullptr);

struct Ad2Result {
    size_t samples = 0;
    double frobenius = 0.0;
    /// sqrt(254 / N): the root-mean-square distance a perfect sampler would
    /// show, from ||ad (x) ad||_F^2 = 256 and ||E||_F^2 = 2.
    double noise_floor = 0.0;
    double max_orthogonality_error = 0.0;
    double max_imag = 0.0;
    double max_unital_error = 0.0;  ///< first row/column vs e_00
};

/// Monte Carlo mean of ad_W (x) ad_W over Haar W, compared in Frobenius norm
/// with |00><00| + |xi><xi|, |xi> = 15^{-1/2} sum_{p != 0} |p>|p>.
Ad2Result verify_mean_ad2(size_t samples, uint64_t seed);

struct QtStatistics {
    unsigned n = 0;
    unsigned t = 0;
    std::vector<double> values;  ///< Q_t per circuit, in circuit order
    double mean = 0.0;
    double standard_error = 0.0;
};

/// Q_t = collision(psi_t) for independent circuits (circuit c seeded by
/// child(seed, c)) applied to |a>, a = 0 or uniformly random per circuit.
QtStatistics q_t_statistics(unsigned n, unsigned t, size_t circuits, uint64_t seed, bool random_a = false);

struct MarkovTail {
    double beta = 0.0;
    size_t pairs = 0;
    double threshold = 0.0;  ///< 2^{-n} / beta^2
    double bad_fraction = 0.0;
    double mean_q = 0.0;
    /// Markov's inequality on the measured sample: mean_q 2^n beta^2.
    double markov_bound = 0.0;
};

/// Every (circuit, a) pair: Q = collision(U^dagger|a>), fraction above 2^{-n}/beta^2.
MarkovTail markov_tail(unsigned n, unsigned t, size_t circuits, double beta, uint64_t seed);

}  // namespace rfslab
