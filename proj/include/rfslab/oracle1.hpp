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
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "rfslab/rng.hpp"
#include "rfslab/unitary.hpp"

namespace rfslab {

struct OracleConstructionMeta {
    /// beta_a = L1(U, a, psi_a) / 2^{n/2}
    std::vector<double> beta;
    /// (2 beta_a / pi)^2, the guaranteed identification probability.
    std::vector<double> predicted_success;
    std::vector<double> phi_star;
    /// theta_0 = -1, i.e. f(a, 0) = 1. Either global sign of theta is valid;
    /// this records which one the construction picked.
    std::vector<bool> complemented;
};

/// Binary oracle family O_a(x) = f(a, x) over labels A and inputs x in {0,1}^n.
///
/// Register layout when m < n: the label occupies the low m bits of the basis
/// index and the ancilla the high n - m bits, so |a>|y> has index a + 2^m y.
class SingleLevelOracle {
   public:
    SingleLevelOracle(unsigned n, unsigned m, std::vector<uint64_t> labels,
                      std::vector<std::vector<uint64_t>> f_words, uint64_t hidden, uint64_t seed);

    unsigned num_qubits() const { return n_; }
    unsigned label_bits() const { return m_; }
    const std::vector<uint64_t> &labels() const { return labels_; }
    size_t size() const { return labels_.size(); }
    uint64_t hidden() const { return hidden_; }
    uint64_t seed() const { return seed_; }
    bool contains(uint64_t a) const { return index_.contains(a); }
    /// Position of `a` in labels(); throws Label.
    size_t index_of(uint64_t a) const;
    /// f(a, x); throws Label for unknown a.
    bool f(uint64_t a, uint64_t x) const { return bit(index_of(a), x); }
    bool bit(size_t label_index, uint64_t x) const {
        return (f_words_[label_index][x >> 6] >> (x & 63)) & 1;
    }
    const std::vector<uint64_t> &words(size_t label_index) const { return f_words_[label_index]; }

    /// Per-label ancilla vectors used at construction (empty when m = n).
    std::vector<std::vector<cplx>> psi;
    OracleConstructionMeta meta;

   private:
    unsigned n_;
    unsigned m_;
    std::vector<uint64_t> labels_;
    std::unordered_map<uint64_t, size_t> index_;
    std::vector<std::vector<uint64_t>> f_words_;
    uint64_t hidden_;
    uint64_t seed_;
};

struct OracleBuildOptions {
    /// Label register width; 0 means m = n.
    unsigned label_bits = 0;
    /// Ancilla vectors (length 2^{n-m}) keyed by label; required when m < n.
    std::map<uint64_t, std::vector<cplx>> psi;
    /// Picks hidden_a = labels[seed mod |A|] when unset.
    std::optional<uint64_t> hidden;
    uint64_t seed = 0;
};

/// Compiles U and the labels into phase-oracle bits: for each a, the row
/// c_x = <a|<psi_a|U|x> goes through best_phase_signs and f(a, x) = (1 - theta_x)/2.
SingleLevelOracle build_oracle(const Unitary &u, std::vector<uint64_t> labels, const OracleBuildOptions &opts = {});

/// |phi_a> = 2^{-n/2} sum_x (-1)^{f(a,x)} |x>
PureState prepare_phi(const SingleLevelOracle &oracle, uint64_t a);

struct IdentificationOutcome {
    double success_prob = 0.0;
    uint64_t sampled_hits = 0;
    uint64_t shots = 0;
    /// Total probability over label-register outcomes (should be 1).
    double outcome_total = 0.0;
};

/// Measures the label register of U|phi_a>. success_prob is exact; shots are
/// drawn from the exact outcome distribution.
IdentificationOutcome identify(const Unitary &u, const SingleLevelOracle &oracle, uint64_t a, uint64_t shots,
                               Rng &rng);

/// Exact success probability only.
double identification_probability(const Unitary &u, const SingleLevelOracle &oracle, uint64_t a);

/// min(1, 2^{q - alpha_n}): any classical strategy with q one-bit answers.
double classical_guess_bound(double q, double alpha_n);

/// Best classical strategy against a uniformly random a in [0, |A|): each of q
/// queries reveals one bit of a (halving the candidates), then a uniform guess.
/// Returns the number of wins over `trials`.
uint64_t classical_bisection_wins(uint64_t card_a, unsigned q, uint64_t trials, Rng &rng);

/// Instance file: {n, m, labels, f_bits (hex per label), beta (per label), seed, hidden}.
/// Hex bit order: character c holds x = 4c..4c+3, with x = 4c in the least
/// significant bit of the digit.
nlohmann::json to_json(const SingleLevelOracle &oracle);
SingleLevelOracle oracle_from_json(const nlohmann::json &doc);

std::string encode_f_hex(const std::vector<uint64_t> &words, unsigned n);
std::vector<uint64_t> decode_f_hex(const std::string &hex, unsigned n);

}  // namespace rfslab
