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

#include "rfslab/find.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "rfslab/state.hpp"

namespace rfslab {

unsigned find_copies(double delta) {
    if (!(delta > 0.0 && delta <= 1.0)) {
        fail(ErrorKind::InvalidConfig, "FIND: delta must lie in (0, 1]");
    }
    return static_cast<unsigned>(std::ceil((4.0 / delta) * std::log(8.0 / delta)));
}

double find_epsilon(double delta) { return (delta / 8.0) * (delta / 8.0); }

uint64_t find_query_closed_form(unsigned l, unsigned m) {
    uint64_t total = 0;
    uint64_t term = 1;
    for (unsigned j = 1; j <= l; ++j) {
        if (term > UINT64_MAX / (2 * uint64_t{m})) {
            fail(ErrorKind::Size, "FIND query count overflows 64 bits");
        }
        term *= 2 * uint64_t{m};
        total += term;
    }
    return total;
}

namespace {

// One FIND call at depth k, tallying each oracle call site as it is reached.
void walk_find(unsigned k, unsigned l, unsigned m, uint64_t &count) {
    for (unsigned c = 0; c < m; ++c) {
        if (k + 1 < l) {
            walk_find(k + 1, l, m, count);  // step 2
        }
        ++count;  // step 3
        if (k + 1 < l) {
            walk_find(k + 1, l, m, count);  // step 4
        }
    }
    count += m;  // step 6: one test per copy
}

}  // namespace

uint64_t find_query_count(unsigned l, unsigned m) {
    if (l == 0 || m == 0) {
        fail(ErrorKind::InvalidConfig, "FIND: need l >= 1 and m >= 1");
    }
    find_query_closed_form(l, m);  // overflow guard
    // The walk makes (2m)^{l-1} calls at the deepest level; past ~1e7 calls
    // the same walk is folded level by level.
    if (std::pow(2.0 * m, l - 1) <= 1e7) {
        uint64_t count = 0;
        walk_find(0, l, m, count);
        return count;
    }
    uint64_t below = 0;
    for (unsigned k = l; k-- > 0;) {
        uint64_t here = 0;
        for (unsigned c = 0; c < m; ++c) {
            here += below + 1 + below;
        }
        below = here + m;
    }
    return below;
}

std::string to_string(JunkMode mode) { return mode == JunkMode::WorstCase ? "worst" : "sampled"; }

JunkMode junk_mode_from_string(const std::string &s) {
    if (s == "worst" || s == "worst-case") {
        return JunkMode::WorstCase;
    }
    if (s == "sampled") {
        return JunkMode::Sampled;
    }
    fail(ErrorKind::InvalidConfig, "unknown junk mode '" + s + "' (worst | sampled)");
}

nlohmann::json to_json(const FindReport &r) {
    nlohmann::json doc;
    doc["delta"] = r.delta;
    doc["epsilon"] = r.epsilon;
    doc["m"] = r.m;
    doc["l"] = r.l;
    doc["mode"] = to_string(r.mode);
    auto levels = nlohmann::json::array();
    for (const auto &lv : r.levels) {
        levels.push_back({{"depth", lv.depth},
                          {"nodes", lv.nodes},
                          {"child_eps_max", lv.child_eps_max},
                          {"eta_max", lv.eta_max},
                          {"exact_success_min", lv.exact_success_min},
                          {"copy_success_min", lv.copy_success_min},
                          {"node_eps_max", lv.node_eps_max}});
    }
    doc["levels"] = levels;
    doc["failure_amplitude2"] = r.failure_amplitude2;
    doc["success_probability"] = r.success_probability;
    doc["success_stderr"] = r.success_stderr;
    doc["draws"] = r.draws;
    doc["per_node"] = r.per_node;
    doc["eps_ok"] = r.eps_ok;
    doc["copy_success_ok"] = r.copy_success_ok;
    doc["answer"] = r.answer;
    doc["answer_correct"] = r.answer_correct;
    doc["Q0"] = r.queries_counted;
    doc["Q0_closed_form"] = r.queries_closed_form;
    doc["Q0_paper_approx"] = r.queries_paper_approx;
    return doc;
}

namespace {

class FindModel {
   public:
    FindModel(const RecursiveOracleSpec &spec, const Unitary &u, const FindOptions &opts, unsigned m)
        : spec_(spec), u_(u), opts_(opts), m_(m), levels_(spec.l) {
        for (unsigned k = 0; k < spec.l; ++k) {
            levels_[k].depth = k;
        }
        if (opts.mode == JunkMode::Sampled) {
            dense_ = u.dense_matrix();
        }
    }

    double success(uint64_t a) {
        auto it = p_cache_.find(a);
        if (it != p_cache_.end()) {
            return it->second;
        }
        const double p = identification_probability(u_, *spec_.f, a);
        if (p < opts_.delta) {
            fail(ErrorKind::Certification, "single-level success " + std::to_string(p) + " for label " +
                                               std::to_string(a) + " is below delta = " +
                                               std::to_string(opts_.delta));
        }
        p_cache_.emplace(a, p);
        return p;
    }

    /// Failure probability returned by FIND at `path`.
    double node(Path &path, Rng *rng) {
        const unsigned k = static_cast<unsigned>(path.size());
        const uint64_t a = spec_.secret_at(path);
        const double p = success(a);
        const size_t fi = spec_.f->index_of(a);
        const uint64_t card_x = uint64_t{1} << spec_.n();

        std::vector<double> eps(card_x, 0.0);
        if (k + 1 < spec_.l) {
            for (uint64_t x = 0; x < card_x; ++x) {
                path.push_back(x);
                eps[x] = node(path, rng);
                path.pop_back();
            }
        }
        if (k == 0) {
            for (const auto &fault : opts_.faults) {
                if (fault.child_symbol >= card_x) {
                    fail(ErrorKind::InvalidConfig, "fault child symbol outside X");
                }
                eps[fault.child_symbol] = fault.epsilon;
            }
        }

        // Overlap of the phased state with the ideal one; cross terms of the
        // failure branch only survive where f = 1.
        double overlap = 0.0;
        double child_max = 0.0;
        for (uint64_t x = 0; x < card_x; ++x) {
            const double sign = spec_.f->bit(fi, x) ? -1.0 : 1.0;
            overlap += 1.0 - eps[x] + sign * eps[x];
            child_max = std::max(child_max, eps[x]);
        }
        overlap /= static_cast<double>(card_x);
        const double eta = std::max(0.0, (1.0 - overlap * overlap) / 4.0);

        double q;
        if (opts_.mode == JunkMode::WorstCase) {
            q = p - 4.0 * std::sqrt(eta);
        } else {
            // Junk of a child whose own children are leaves is a function of
            // its secret alone; siblings sharing a secret share the junk vector.
            std::vector<uint64_t> junk_key(card_x);
            for (uint64_t x = 0; x < card_x; ++x) {
                if (k + 2 == spec_.l) {
                    path.push_back(x);
                    junk_key[x] = spec_.secret_at(path);
                    path.pop_back();
                } else {
                    junk_key[x] = (uint64_t{1} << 63) | x;
                }
            }
            q = sampled_success(a, fi, eps, junk_key, *rng);
        }
        const double node_eps = q >= 1.0 ? 0.0 : (q <= 0.0 ? 1.0 : std::pow(1.0 - q, m_));

        FindLevel &lv = levels_[k];
        ++lv.nodes;
        lv.child_eps_max = std::max(lv.child_eps_max, child_max);
        lv.eta_max = std::max(lv.eta_max, eta);
        lv.exact_success_min = std::min(lv.exact_success_min, p);
        lv.copy_success_min = std::min(lv.copy_success_min, q);
        lv.node_eps_max = std::max(lv.node_eps_max, node_eps);
        return node_eps;
    }

    /// Interval propagation by level: every node at depth k is bounded by the
    /// worst label in A and the worst child bound, with all phases adversarial.
    double levelwise() {
        double p_min = 1.0;
        for (uint64_t a : spec_.f->labels()) {
            p_min = std::min(p_min, success(a));
        }
        const uint64_t card_x = uint64_t{1} << spec_.n();
        double child = 0.0;
        for (unsigned k = spec_.l; k-- > 0;) {
            double c = child;
            if (k == 0) {
                for (const auto &fault : opts_.faults) {
                    c = std::max(c, fault.epsilon);
                }
            }
            const double overlap = 1.0 - 2.0 * c;
            const double eta = std::max(0.0, (1.0 - overlap * overlap) / 4.0);
            const double q = p_min - 4.0 * std::sqrt(eta);
            const double node_eps = q >= 1.0 ? 0.0 : (q <= 0.0 ? 1.0 : std::pow(1.0 - q, m_));
            FindLevel &lv = levels_[k];
            lv.nodes = static_cast<uint64_t>(std::pow(static_cast<double>(card_x), k));
            lv.child_eps_max = c;
            lv.eta_max = eta;
            lv.exact_success_min = p_min;
            lv.copy_success_min = q;
            lv.node_eps_max = node_eps;
            child = node_eps;
        }
        return child;
    }

    std::vector<FindLevel> &levels() { return levels_; }

   private:
    // ||P_a U sum_x c_x|x>||^2/|X| + ||sum_x d_x P_a U|x> (x) r_x||^2/|X|, with
    // c_x = (-1)^f (1 - e_x) + e_x and d_x = 2 sqrt(e_x (1 - e_x)) on f = 1.
    double sampled_success(uint64_t a, size_t fi, const std::vector<double> &eps,
                           const std::vector<uint64_t> &junk_key, Rng &rng) {
        const unsigned n = spec_.n();
        const unsigned mb = spec_.f->label_bits();
        const size_t dim = size_t{1} << n;
        const size_t anc = size_t{1} << (n - mb);
        const size_t jd = std::max(1u, opts_.junk_dim - 1);
        std::vector<cplx> t1(anc, 0.0);
        std::vector<cplx> t2(anc * jd, 0.0);
        std::map<uint64_t, std::vector<cplx>> junk;
        for (size_t x = 0; x < dim; ++x) {
            const bool f1 = spec_.f->bit(fi, x);
            const double e = eps[x];
            const double c = (f1 ? -(1.0 - e) : 1.0 - e) + e;
            const double d = f1 ? 2.0 * std::sqrt(e * (1.0 - e)) : 0.0;
            const std::vector<cplx> *rp = nullptr;
            if (d != 0.0) {
                auto it = junk.find(junk_key[x]);
                if (it == junk.end()) {
                    it = junk.emplace(junk_key[x], sample_unit_vector(jd, rng)).first;
                }
                rp = &it->second;
            }
            for (size_t y = 0; y < anc; ++y) {
                const cplx ux = dense_[(a + (y << mb)) * dim + x];
                t1[y] += ux * c;
                if (d != 0.0) {
                    for (size_t j = 0; j < jd; ++j) {
                        t2[y * jd + j] += ux * d * (*rp)[j];
                    }
                }
            }
        }
        double total = 0.0;
        for (const auto &z : t1) {
            total += std::norm(z);
        }
        for (const auto &z : t2) {
            total += std::norm(z);
        }
        return total / static_cast<double>(dim);
    }

    const RecursiveOracleSpec &spec_;
    const Unitary &u_;
    const FindOptions &opts_;
    unsigned m_;
    std::vector<FindLevel> levels_;
    std::map<uint64_t, double> p_cache_;
    std::vector<cplx> dense_;
};

}  // namespace

FindReport find_simulate(const RecursiveOracleSpec &spec, const Unitary &u, const FindOptions &opts) {
    spec.validate();
    if (u.num_qubits() != spec.n()) {
        fail(ErrorKind::InvalidConfig, "find_simulate: unitary width differs from n");
    }
    FindReport rep;
    rep.delta = opts.delta;
    rep.epsilon = find_epsilon(opts.delta);
    rep.m = opts.copies.value_or(find_copies(opts.delta));
    if (rep.m == 0) {
        fail(ErrorKind::InvalidConfig, "find_simulate: need at least one copy");
    }
    rep.l = spec.l;
    rep.mode = opts.mode;
    rep.queries_counted = find_query_count(spec.l, rep.m);
    rep.queries_closed_form = find_query_closed_form(spec.l, rep.m);
    rep.queries_paper_approx = std::pow(2.0 * rep.m, 2.0 * spec.l);

    double internal_nodes = 0.0;
    for (unsigned k = 0; k < spec.l; ++k) {
        internal_nodes += std::pow(std::exp2(spec.n()), k);
    }
    rep.per_node = internal_nodes <= 65536.0;

    FindModel model(spec, u, opts, rep.m);
    if (opts.mode == JunkMode::WorstCase) {
        double root_eps;
        if (rep.per_node) {
            Path root;
            root_eps = model.node(root, nullptr);
        } else {
            root_eps = model.levelwise();
        }
        rep.failure_amplitude2 = root_eps;
        rep.success_probability = 1.0 - root_eps;
        rep.draws = 1;
    } else {
        if (!rep.per_node) {
            fail(ErrorKind::Size, "find_simulate: sampled junk needs the tree enumerated (<= 65536 internal nodes)");
        }
        if (opts.junk_draws == 0) {
            fail(ErrorKind::InvalidConfig, "find_simulate: sampled mode needs junk draws");
        }
        double sum = 0.0;
        double sum2 = 0.0;
        for (size_t d = 0; d < opts.junk_draws; ++d) {
            Rng rng = Rng::child(opts.seed, d);
            Path root;
            const double e = model.node(root, &rng);
            sum += e;
            sum2 += e * e;
        }
        const double nd = static_cast<double>(opts.junk_draws);
        const double mean = sum / nd;
        rep.failure_amplitude2 = mean;
        rep.success_probability = 1.0 - mean;
        rep.success_stderr = opts.junk_draws > 1 ? std::sqrt(std::max(0.0, (sum2 / nd - mean * mean) / (nd - 1))) : 0.0;
        rep.draws = opts.junk_draws;
    }
    rep.levels = model.levels();
    if (opts.mode == JunkMode::Sampled) {
        for (auto &lv : rep.levels) {
            lv.nodes /= rep.draws;
        }
    }
    for (const auto &lv : rep.levels) {
        if (lv.eta_max > rep.epsilon || lv.node_eps_max > rep.epsilon) {
            rep.eps_ok = false;
        }
        if (lv.copy_success_min < rep.delta / 2.0) {
            rep.copy_success_ok = false;
        }
    }

    // Final step: the root copy that passed its test was confirmed by the
    // root query, whose answer is b_root. On failure, output a fair coin.
    Rng rng = Rng::child(opts.seed, 0xF1DULL);
    const uint64_t root_secret = spec.secret_at({});
    if (rng.uniform() < rep.success_probability) {
        rep.answer = evaluate_query(spec, {}, root_secret) == QueryResult::One ? 1 : 0;
    } else {
        rep.answer = static_cast<int>(rng.below(2));
    }
    rep.answer_correct = rep.answer == spec.b_root;
    return rep;
}

namespace {

// Minimal register machine for the coherent run.
struct Registers {
    unsigned total = 0;
    std::vector<cplx> amps;

    explicit Registers(unsigned qubits) : total(qubits), amps(size_t{1} << qubits) { amps[0] = 1.0; }

    static uint64_t field(uint64_t idx, unsigned off, unsigned width) {
        return (idx >> off) & ((uint64_t{1} << width) - 1);
    }

    /// Dense 2^w x 2^w matrix (row-major) on the register [off, off + w).
    void apply_dense(unsigned off, unsigned w, const std::vector<cplx> &mat) {
        const size_t d = size_t{1} << w;
        const uint64_t mask = (uint64_t{d} - 1) << off;
        std::vector<cplx> in(d);
        std::vector<cplx> out(d);
        for (uint64_t base = 0; base < amps.size(); ++base) {
            if (base & mask) {
                continue;
            }
            for (size_t j = 0; j < d; ++j) {
                in[j] = amps[base | (uint64_t{j} << off)];
            }
            for (size_t r = 0; r < d; ++r) {
                cplx acc = 0.0;
                for (size_t c = 0; c < d; ++c) {
                    acc += mat[r * d + c] * in[c];
                }
                out[r] = acc;
            }
            for (size_t j = 0; j < d; ++j) {
                amps[base | (uint64_t{j} << off)] = out[j];
            }
        }
    }

    /// 2x2 matrix on qubit q wherever `when(index)` holds (which must not read q).
    void apply_controlled(unsigned q, const std::array<cplx, 4> &g, const std::function<bool(uint64_t)> &when) {
        const uint64_t bit = uint64_t{1} << q;
        for (uint64_t i = 0; i < amps.size(); ++i) {
            if ((i & bit) || !when(i)) {
                continue;
            }
            const cplx a0 = amps[i];
            const cplx a1 = amps[i | bit];
            amps[i] = g[0] * a0 + g[1] * a1;
            amps[i | bit] = g[2] * a0 + g[3] * a1;
        }
    }

    void apply_phase(const std::function<double(uint64_t)> &sign) {
        for (uint64_t i = 0; i < amps.size(); ++i) {
            amps[i] *= sign(i);
        }
    }

    void apply_permutation(const std::function<uint64_t(uint64_t)> &perm) {
        std::vector<cplx> next(amps.size());
        for (uint64_t i = 0; i < amps.size(); ++i) {
            next[perm(i)] = amps[i];
        }
        amps.swap(next);
    }
};

std::vector<cplx> adjoint_of(const std::vector<cplx> &m, size_t d) {
    std::vector<cplx> out(d * d);
    for (size_t r = 0; r < d; ++r) {
        for (size_t c = 0; c < d; ++c) {
            out[c * d + r] = std::conj(m[r * d + c]);
        }
    }
    return out;
}

std::vector<cplx> hadamard_matrix(unsigned n) {
    const size_t d = size_t{1} << n;
    std::vector<cplx> h(d * d);
    const double s = std::exp2(-0.5 * n);
    for (size_t r = 0; r < d; ++r) {
        for (size_t c = 0; c < d; ++c) {
            h[r * d + c] = (std::popcount(r & c) & 1) ? -s : s;
        }
    }
    return h;
}

// R|0> = c|0> + s e^{i chi}|1>, R|1> = -s e^{-i chi}|0> + c|1>
std::array<cplx, 4> fault_rotation(double eps, double chi) {
    const double c = std::sqrt(1.0 - eps);
    const double s = std::sqrt(eps);
    const cplx ph = std::polar(1.0, chi);
    return {cplx(c), -s * std::conj(ph), s * ph, cplx(c)};
}

std::array<cplx, 4> adjoint2(const std::array<cplx, 4> &g) {
    return {std::conj(g[0]), std::conj(g[2]), std::conj(g[1]), std::conj(g[3])};
}

}  // namespace

CoherentResult find_coherent_tiny(const RecursiveOracleSpec &spec, const Unitary &u, unsigned copies,
                                  const std::vector<FindFault> &faults, uint64_t seed) {
    spec.validate();
    const unsigned n = spec.n();
    const unsigned l = spec.l;
    if (n > 2 || l > 2 || copies == 0 || copies > 3) {
        fail(ErrorKind::Size, "find_coherent_tiny: needs n <= 2, l <= 2 and 1..3 copies");
    }
    if (spec.f->label_bits() != n || u.num_qubits() != n) {
        fail(ErrorKind::InvalidConfig, "find_coherent_tiny: label register must span all n qubits");
    }
    const uint64_t card_x = uint64_t{1} << n;
    for (const auto &fault : faults) {
        if (fault.child_symbol >= card_x || !(fault.epsilon >= 0.0 && fault.epsilon <= 1.0)) {
            fail(ErrorKind::InvalidConfig, "find_coherent_tiny: bad fault");
        }
    }
    const unsigned qubits = l == 1 ? n + static_cast<unsigned>(faults.size()) : n + copies * n + 1 + n;
    if (qubits > kCoherentMaxQubits) {
        fail(ErrorKind::Size, "find_coherent_tiny: " + std::to_string(qubits) + " qubits exceed the budget of " +
                                  std::to_string(kCoherentMaxQubits));
    }

    const size_t d = size_t{1} << n;
    const std::vector<cplx> umat = u.dense_matrix();
    const std::vector<cplx> udag = adjoint_of(umat, d);
    const std::vector<cplx> had = hadamard_matrix(n);
    Rng rng(seed);
    std::vector<std::array<cplx, 4>> rot;
    for (const auto &fault : faults) {
        rot.push_back(fault_rotation(fault.epsilon, 2.0 * kPi * rng.uniform()));
    }
    const auto leaf_sign = [&](const Path &p) { return evaluate_query(spec, p, std::nullopt) == QueryResult::One ? -1.0 : 1.0; };

    Registers reg(qubits);
    CoherentResult res;
    res.qubits = qubits;
    res.copies = copies;
    double child_eps_max = 0.0;
    reg.apply_dense(0, n, had);  // step 1

    if (l == 1) {
        for (size_t j = 0; j < faults.size(); ++j) {
            const uint64_t xs = faults[j].child_symbol;
            reg.apply_controlled(n + static_cast<unsigned>(j), rot[j], [&](uint64_t i) { return Registers::field(i, 0, n) == xs; });
            child_eps_max = std::max(child_eps_max, faults[j].epsilon);
        }
        // Step 3, conditional on the (possibly faulty) child reporting success.
        reg.apply_phase([&](uint64_t i) {
            const uint64_t x = Registers::field(i, 0, n);
            for (size_t j = 0; j < faults.size(); ++j) {
                if (faults[j].child_symbol == x && ((i >> (n + j)) & 1)) {
                    return 1.0;
                }
            }
            return leaf_sign({x});
        });
        for (size_t j = faults.size(); j-- > 0;) {
            const uint64_t xs = faults[j].child_symbol;
            reg.apply_controlled(n + static_cast<unsigned>(j), adjoint2(rot[j]),
                                 [&](uint64_t i) { return Registers::field(i, 0, n) == xs; });
        }
    } else {
        const unsigned flag = n + copies * n;
        const unsigned out = flag + 1;
        const auto copy_off = [&](unsigned c) { return n + c * n; };
        std::vector<uint64_t> child_secret(card_x);
        for (uint64_t x = 0; x < card_x; ++x) {
            child_secret[x] = spec.secret_at({x});
        }
        const auto test_pass = [&](uint64_t x1, uint64_t label) {
            return spec.f->contains(label) && evaluate_query(spec, {x1}, label) != QueryResult::Fail;
        };
        // Child FIND at depth 1: copies of |phi_{s(x1)}>, U, joint test into
        // (flag, label), U^dagger. The test permutation is an involution.
        const auto copy_and_test = [&]() {
            reg.apply_permutation([&](uint64_t i) {
                const uint64_t x1 = Registers::field(i, 0, n);
                bool pass = false;
                for (unsigned c = 0; c < copies && !pass; ++c) {
                    pass = test_pass(x1, Registers::field(i, copy_off(c), n));
                }
                uint64_t j = i;
                if (!pass) {
                    j ^= uint64_t{1} << flag;
                } else {
                    j ^= child_secret[x1] << out;
                }
                return j;
            });
        };
        const auto fault_gate = [&](bool inverse) {
            for (size_t k = 0; k < faults.size(); ++k) {
                const size_t j = inverse ? faults.size() - 1 - k : k;
                const uint64_t xs = faults[j].child_symbol;
                reg.apply_controlled(flag, inverse ? adjoint2(rot[j]) : rot[j],
                                     [&](uint64_t i) { return Registers::field(i, 0, n) == xs; });
            }
        };
        const auto child_phases = [&]() {
            reg.apply_phase([&](uint64_t i) {
                const uint64_t x1 = Registers::field(i, 0, n);
                double s = 1.0;
                for (unsigned c = 0; c < copies; ++c) {
                    s *= leaf_sign({x1, Registers::field(i, copy_off(c), n)});
                }
                return s;
            });
        };
        // Forward child FIND.
        for (unsigned c = 0; c < copies; ++c) {
            reg.apply_dense(copy_off(c), n, had);
        }
        child_phases();
        for (unsigned c = 0; c < copies; ++c) {
            reg.apply_dense(copy_off(c), n, umat);
        }
        copy_and_test();
        for (unsigned c = 0; c < copies; ++c) {
            reg.apply_dense(copy_off(c), n, udag);
        }
        fault_gate(false);

        // Child failure probability per x1 (x1 is still in uniform superposition).
        std::vector<double> flag_mass(card_x, 0.0);
        for (uint64_t i = 0; i < reg.amps.size(); ++i) {
            if ((i >> flag) & 1) {
                flag_mass[Registers::field(i, 0, n)] += std::norm(reg.amps[i]);
            }
        }
        for (double w : flag_mass) {
            child_eps_max = std::max(child_eps_max, w * static_cast<double>(card_x));
        }

        // Step 3 at the root, conditional on the child flag reading success.
        reg.apply_phase([&](uint64_t i) {
            if ((i >> flag) & 1) {
                return 1.0;
            }
            const uint64_t x1 = Registers::field(i, 0, n);
            const uint64_t label = Registers::field(i, out, n);
            if (!spec.f->contains(label)) {
                return 1.0;
            }
            const QueryResult r = evaluate_query(spec, {x1}, label);
            return r == QueryResult::One ? -1.0 : 1.0;
        });

        // Step 4: FIND^dagger.
        fault_gate(true);
        for (unsigned c = 0; c < copies; ++c) {
            reg.apply_dense(copy_off(c), n, umat);
        }
        copy_and_test();
        for (unsigned c = 0; c < copies; ++c) {
            reg.apply_dense(copy_off(c), n, udag);
        }
        child_phases();
        for (unsigned c = 0; c < copies; ++c) {
            reg.apply_dense(copy_off(c), n, had);
        }
    }

    // Workspace left outside |0>.
    const uint64_t x_mask = card_x - 1;
    double residual2 = 0.0;
    for (uint64_t i = 0; i < reg.amps.size(); ++i) {
        if (i & ~x_mask) {
            residual2 += std::norm(reg.amps[i]);
        }
    }
    res.residual_norm = std::sqrt(residual2);
    res.residual_bound = std::sqrt(4.0 * child_eps_max);

    // Step 6 on this copy: U, then test the label register against s(root).
    reg.apply_dense(0, n, umat);
    const uint64_t root_secret = spec.secret_at({});
    double p = 0.0;
    for (uint64_t i = 0; i < reg.amps.size(); ++i) {
        if ((i & x_mask) == root_secret) {
            p += std::norm(reg.amps[i]);
        }
    }
    res.copy_success = p;
    res.success_probability = 1.0 - std::pow(1.0 - std::min(1.0, p), copies);
    if (rng.uniform() < res.success_probability) {
        res.answer = evaluate_query(spec, {}, root_secret) == QueryResult::One ? 1 : 0;
    } else {
        res.answer = static_cast<int>(rng.below(2));
    }
    res.answer_correct = res.answer == spec.b_root;
    return res;
}

}  // namespace rfslab
