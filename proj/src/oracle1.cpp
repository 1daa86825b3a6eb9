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

#include "rfslab/oracle1.hpp"

#include <algorithm>
#include <cmath>

#include "rfslab/signs.hpp"

namespace rfslab {

namespace {

size_t words_for(unsigned n) { return ((size_t{1} << n) + 63) / 64; }

}  // namespace

SingleLevelOracle::SingleLevelOracle(unsigned n, unsigned m, std::vector<uint64_t> labels,
                                     std::vector<std::vector<uint64_t>> f_words, uint64_t hidden, uint64_t seed)
    : n_(n), m_(m), labels_(std::move(labels)), f_words_(std::move(f_words)), hidden_(hidden), seed_(seed) {
    if (labels_.empty()) {
        fail(ErrorKind::InvalidConfig, "SingleLevelOracle: empty label set");
    }
    if (m_ == 0 || m_ > n_ || n_ > kMaxStateQubits) {
        fail(ErrorKind::InvalidConfig, "SingleLevelOracle: need 0 < m <= n");
    }
    if (f_words_.size() != labels_.size()) {
        fail(ErrorKind::InvalidConfig, "SingleLevelOracle: one bit vector per label required");
    }
    for (size_t k = 0; k < labels_.size(); ++k) {
        if (labels_[k] >> m_) {
            fail(ErrorKind::Label, "SingleLevelOracle: label " + std::to_string(labels_[k]) + " exceeds m bits");
        }
        if (!index_.emplace(labels_[k], k).second) {
            fail(ErrorKind::InvalidConfig, "SingleLevelOracle: duplicate label " + std::to_string(labels_[k]));
        }
        if (f_words_[k].size() != words_for(n_)) {
            fail(ErrorKind::InvalidConfig, "SingleLevelOracle: bit vector has wrong length");
        }
    }
    if (!index_.contains(hidden_)) {
        fail(ErrorKind::Label, "SingleLevelOracle: hidden label is not in A");
    }
}

size_t SingleLevelOracle::index_of(uint64_t a) const {
    auto it = index_.find(a);
    if (it == index_.end()) {
        fail(ErrorKind::Label, "unknown label " + std::to_string(a));
    }
    return it->second;
}

SingleLevelOracle build_oracle(const Unitary &u, std::vector<uint64_t> labels, const OracleBuildOptions &opts) {
    if (labels.empty()) {
        fail(ErrorKind::InvalidConfig, "build_oracle: empty label set");
    }
    const unsigned n = u.num_qubits();
    const unsigned m = opts.label_bits == 0 ? n : opts.label_bits;
    if (m > n) {
        fail(ErrorKind::InvalidConfig, "build_oracle: label register wider than the circuit");
    }
    const size_t dim = u.dim();
    const size_t anc_dim = size_t{1} << (n - m);
    const size_t count = labels.size();
    for (uint64_t a : labels) {
        if (a >> m) {
            fail(ErrorKind::Label, "build_oracle: label " + std::to_string(a) + " exceeds m bits");
        }
        if (m < n) {
            auto it = opts.psi.find(a);
            if (it == opts.psi.end() || it->second.size() != anc_dim) {
                fail(ErrorKind::InvalidConfig, "build_oracle: missing ancilla vector for label " + std::to_string(a));
            }
        }
    }

    std::vector<std::vector<uint64_t>> words(count, std::vector<uint64_t>(words_for(n)));
    OracleConstructionMeta meta;
    meta.beta.resize(count);
    meta.predicted_success.resize(count);
    meta.phi_star.resize(count);
    meta.complemented.resize(count);
    std::vector<char> degenerate(count, 0);
    const double scale = std::exp2(-0.5 * n);

#pragma omp parallel for schedule(dynamic, 1)
    for (long long kk = 0; kk < static_cast<long long>(count); ++kk) {
        const auto k = static_cast<size_t>(kk);
        const uint64_t a = labels[k];
        // w = U^dagger (|a> (x) |psi_a>); then c_x = <a, psi_a|U|x> = conj(w_x).
        std::vector<cplx> w(dim);
        if (m == n) {
            w[a] = 1.0;
        } else {
            const auto &psi = opts.psi.at(a);
            for (size_t y = 0; y < anc_dim; ++y) {
                w[a + (y << m)] = psi[y];
            }
        }
        u.apply_adjoint(w);
        for (auto &z : w) {
            z = std::conj(z);
        }
        const double l1 = kernels::serial::sum_abs(w);
        if (!(l1 > 0.0)) {
            degenerate[k] = 1;
            continue;
        }
        const SignSolution sol = best_phase_signs(w);
        for (size_t x = 0; x < dim; ++x) {
            if (sol.theta[x] < 0) {
                words[k][x >> 6] |= uint64_t{1} << (x & 63);
            }
        }
        const double beta = l1 * scale;
        meta.beta[k] = beta;
        meta.predicted_success[k] = std::pow(2.0 * beta / kPi, 2);
        meta.phi_star[k] = sol.phi_star;
        meta.complemented[k] = sol.theta[0] < 0;
    }
    for (size_t k = 0; k < count; ++k) {
        if (degenerate[k]) {
            fail(ErrorKind::DegenerateInput, "build_oracle: label " + std::to_string(labels[k]) + " has zero L1 row");
        }
    }

    const uint64_t hidden = opts.hidden.value_or(labels[opts.seed % count]);
    SingleLevelOracle oracle(n, m, std::move(labels), std::move(words), hidden, opts.seed);
    oracle.meta = std::move(meta);
    if (m < n) {
        for (uint64_t a : oracle.labels()) {
            oracle.psi.push_back(opts.psi.at(a));
        }
    }
    return oracle;
}

PureState prepare_phi(const SingleLevelOracle &oracle, uint64_t a) {
    const size_t k = oracle.index_of(a);
    const unsigned n = oracle.num_qubits();
    const size_t dim = size_t{1} << n;
    const double amp = std::exp2(-0.5 * n);
    std::vector<cplx> v(dim);
    for (size_t x = 0; x < dim; ++x) {
        v[x] = oracle.bit(k, x) ? -amp : amp;
    }
    return PureState::from_amplitudes(n, std::move(v));
}

namespace {

// Outcome distribution of the m-bit label register on U|phi_a>.
std::vector<double> label_distribution(const Unitary &u, const SingleLevelOracle &oracle, uint64_t a) {
    PureState s = prepare_phi(oracle, a);
    u.apply(s.mutable_amplitudes());
    const unsigned m = oracle.label_bits();
    const size_t labels = size_t{1} << m;
    std::vector<double> dist(labels, 0.0);
    const auto amps = s.amplitudes();
    for (size_t idx = 0; idx < amps.size(); ++idx) {
        dist[idx & (labels - 1)] += std::norm(amps[idx]);
    }
    return dist;
}

}  // namespace

double identification_probability(const Unitary &u, const SingleLevelOracle &oracle, uint64_t a) {
    return label_distribution(u, oracle, a)[a];
}

IdentificationOutcome identify(const Unitary &u, const SingleLevelOracle &oracle, uint64_t a, uint64_t shots,
                               Rng &rng) {
    const auto dist = label_distribution(u, oracle, a);
    IdentificationOutcome out;
    out.success_prob = dist[a];
    out.shots = shots;
    std::vector<double> cdf(dist.size());
    double acc = 0.0;
    for (size_t k = 0; k < dist.size(); ++k) {
        acc += dist[k];
        cdf[k] = acc;
    }
    out.outcome_total = acc;
    for (uint64_t s = 0; s < shots; ++s) {
        const double r = rng.uniform() * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
        const auto outcome = static_cast<uint64_t>(std::min<ptrdiff_t>(it - cdf.begin(), cdf.size() - 1));
        if (outcome == a) {
            ++out.sampled_hits;
        }
    }
    return out;
}

double classical_guess_bound(double q, double alpha_n) {
    if (q < 0) {
        fail(ErrorKind::InvalidConfig, "classical_guess_bound: q must be non-negative");
    }
    return std::min(1.0, std::exp2(q - alpha_n));
}

uint64_t classical_bisection_wins(uint64_t card_a, unsigned q, uint64_t trials, Rng &rng) {
    if (card_a == 0) {
        fail(ErrorKind::InvalidConfig, "classical_bisection_wins: empty label set");
    }
    uint64_t wins = 0;
    for (uint64_t t = 0; t < trials; ++t) {
        const uint64_t secret = rng.below(card_a);
        // Candidate interval [lo, hi); each answer bit keeps the half holding the secret.
        uint64_t lo = 0;
        uint64_t hi = card_a;
        for (unsigned k = 0; k < q && hi - lo > 1; ++k) {
            const uint64_t mid = lo + (hi - lo) / 2;
            if (secret < mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        if (lo + rng.below(hi - lo) == secret) {
            ++wins;
        }
    }
    return wins;
}

std::string encode_f_hex(const std::vector<uint64_t> &words, unsigned n) {
    static const char *digits = "0123456789abcdef";
    const size_t dim = size_t{1} << n;
    std::string out((dim + 3) / 4, '0');
    for (size_t c = 0; c < out.size(); ++c) {
        unsigned v = 0;
        for (unsigned b = 0; b < 4; ++b) {
            const size_t x = 4 * c + b;
            if (x < dim && ((words[x >> 6] >> (x & 63)) & 1)) {
                v |= 1u << b;
            }
        }
        out[c] = digits[v];
    }
    return out;
}

std::vector<uint64_t> decode_f_hex(const std::string &hex, unsigned n) {
    const size_t dim = size_t{1} << n;
    if (hex.size() != (dim + 3) / 4) {
        fail(ErrorKind::InvalidConfig, "f_bits: hex string has wrong length");
    }
    std::vector<uint64_t> words(words_for(n));
    for (size_t c = 0; c < hex.size(); ++c) {
        const char ch = hex[c];
        unsigned v = 0;
        if (ch >= '0' && ch <= '9') {
            v = static_cast<unsigned>(ch - '0');
        } else if (ch >= 'a' && ch <= 'f') {
            v = static_cast<unsigned>(ch - 'a' + 10);
        } else if (ch >= 'A' && ch <= 'F') {
            v = static_cast<unsigned>(ch - 'A' + 10);
        } else {
            fail(ErrorKind::InvalidConfig, "f_bits: invalid hex digit");
        }
        for (unsigned b = 0; b < 4; ++b) {
            const size_t x = 4 * c + b;
            if ((v >> b) & 1) {
                if (x >= dim) {
                    fail(ErrorKind::InvalidConfig, "f_bits: padding bits must be zero");
                }
                words[x >> 6] |= uint64_t{1} << (x & 63);
            }
        }
    }
    return words;
}

nlohmann::json to_json(const SingleLevelOracle &oracle) {
    nlohmann::json doc;
    doc["n"] = oracle.num_qubits();
    doc["m"] = oracle.label_bits();
    doc["labels"] = oracle.labels();
    auto bits = nlohmann::json::array();
    for (size_t k = 0; k < oracle.size(); ++k) {
        bits.push_back(encode_f_hex(oracle.words(k), oracle.num_qubits()));
    }
    doc["f_bits"] = bits;
    doc["beta"] = oracle.meta.beta;
    doc["seed"] = oracle.seed();
    doc["hidden"] = oracle.hidden();
    return doc;
}

SingleLevelOracle oracle_from_json(const nlohmann::json &doc) {
    try {
        const auto n = doc.at("n").get<unsigned>();
        const auto m = doc.at("m").get<unsigned>();
        auto labels = doc.at("labels").get<std::vector<uint64_t>>();
        const auto hex = doc.at("f_bits").get<std::vector<std::string>>();
        if (hex.size() != labels.size()) {
            fail(ErrorKind::InvalidConfig, "oracle json: f_bits and labels differ in length");
        }
        if (n > kMaxStateQubits) {
            fail(ErrorKind::Size, "oracle json: n too large");
        }
        std::vector<std::vector<uint64_t>> words;
        words.reserve(hex.size());
        for (const auto &h : hex) {
            words.push_back(decode_f_hex(h, n));
        }
        const auto seed = doc.value("seed", uint64_t{0});
        const uint64_t hidden = doc.contains("hidden") ? doc.at("hidden").get<uint64_t>() : labels.front();
        SingleLevelOracle oracle(n, m, std::move(labels), std::move(words), hidden, seed);
        if (doc.contains("beta")) {
            oracle.meta.beta = doc.at("beta").get<std::vector<double>>();
            for (double b : oracle.meta.beta) {
                oracle.meta.predicted_success.push_back(std::pow(2.0 * b / kPi, 2));
            }
        }
        return oracle;
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorKind::InvalidConfig, std::string("oracle json: ") + e.what());
    }
}

}  // namespace rfslab
