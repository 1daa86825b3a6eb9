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

#include "rfslab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rfslab/dispersion.hpp"
#include "rfslab/find.hpp"
#include "rfslab/group.hpp"
#include "rfslab/oracle1.hpp"
#include "rfslab/paulichain.hpp"
#include "rfslab/rfs.hpp"
#include "rfslab/signs.hpp"

namespace rfslab {

namespace {

using nlohmann::json;

// Reads parameters with defaults and remembers every resolved value.
class Params {
   public:
    explicit Params(const json &in) : in_(in.is_null() ? json::object() : in) {
        if (!in_.is_object()) {
            fail(ErrorKind::InvalidConfig, "parameters must be a JSON object");
        }
    }

    template <typename T>
    T get(const std::string &name, const T &fallback) {
        T v = fallback;
        if (in_.contains(name) && !in_.at(name).is_null()) {
            try {
                v = in_.at(name).get<T>();
            } catch (const json::exception &) {
                fail(ErrorKind::InvalidConfig, "parameter '" + name + "' has the wrong type");
            }
        }
        resolved_[name] = v;
        return v;
    }

    const json &resolved() const { return resolved_; }

   private:
    json in_;
    json resolved_ = json::object();
};

struct Outcome {
    json metrics = json::object();
    std::vector<std::string> failures;
    std::vector<std::vector<std::string>> csv;

    void check(bool ok, const std::string &what) {
        if (!ok) {
            failures.push_back(what);
        }
    }
};

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

uint64_t circuit_length(Params &p, unsigned n) {
    const double c = p.get<double>("C", 4.0);
    const auto t = p.get<int64_t>("t", -1);
    return t >= 0 ? static_cast<uint64_t>(t) : cubic_length(n, c);
}

Outcome run_dispersion(Params &p, uint64_t seed) {
    Outcome out;
    const auto name = p.get<std::string>("unitary", "hadamard");
    if (name == "group") {
        const auto group = p.get<std::string>("group", "S3");
        const auto samples = p.get<uint64_t>("samples", 2000);
        const FourierMatrix f = group_fourier(builtin_group(group));
        double worst_mean = INFINITY;
        double worst_best = INFINITY;
        size_t pairs = 0;
        out.csv.push_back({"irrep", "row", "mean", "standard_error", "best", "bound"});
        for (size_t lam = 0; lam < f.group.irreps().size(); ++lam) {
            for (unsigned i = 0; i < f.group.irreps()[lam].dim; ++i) {
                const auto rep = pseudo_search(f, lam, i, samples, Rng::child(seed, pairs).next_u64());
                worst_mean = std::min(worst_mean, rep.mean - (rep.bound - 3.0 * rep.standard_error));
                worst_best = std::min(worst_best, rep.best() - rep.bound);
                out.csv.push_back({f.group.irreps()[lam].label, std::to_string(i), num(rep.mean),
                                   num(rep.standard_error), num(rep.best()), num(rep.bound)});
                out.metrics["alpha"] = rep.alpha;
                out.metrics["non_power_of_two"] = rep.non_power_of_two;
                ++pairs;
            }
        }
        out.metrics["labels"] = pairs;
        out.metrics["min_mean_margin"] = worst_mean;
        out.metrics["min_best_margin"] = worst_best;
        out.check(worst_mean >= 0.0, "sample mean below sqrt(|G|/2) - 3 SE for some (lambda, i)");
        out.check(worst_best >= 0.0, "best sample below sqrt(|G|/2) for some (lambda, i)");
        return out;
    }
    const auto n = p.get<unsigned>("n", 8);
    const auto beta = p.get<double>("beta", 1.0);
    const uint64_t t = name == "random" ? circuit_length(p, n) : 0;
    const auto u = make_unitary(name, n, t, seed);
    const DispersionReport rep = certify_dispersing(*u, beta);
    const auto [lo, hi] = std::minmax_element(rep.per_label_l1.begin(), rep.per_label_l1.end());
    out.metrics["alpha_achieved"] = rep.alpha_achieved;
    out.metrics["achieving_count"] = rep.achieving_set.size();
    out.metrics["threshold"] = rep.threshold();
    out.metrics["min_l1"] = *lo;
    out.metrics["max_l1"] = *hi;
    out.check(*lo >= 1.0 - 1e-9 && *hi <= std::exp2(0.5 * n) + 1e-9, "L1 row outside [1, 2^{n/2}]");
    out.csv.push_back({"a", "l1"});
    for (size_t a = 0; a < rep.per_label_l1.size(); ++a) {
        out.csv.push_back({std::to_string(a), num(rep.per_label_l1[a])});
    }
    return out;
}

Outcome run_signs(Params &p, uint64_t seed) {
    Outcome out;
    const auto trials = p.get<uint64_t>("trials", 1000);
    const auto d_max = p.get<unsigned>("n", 16);
    const auto brute_max = p.get<unsigned>("brute_max", 12);
    if (d_max < 1 || brute_max > 20) {
        fail(ErrorKind::InvalidConfig, "signs: need n >= 1 and brute_max <= 20");
    }
    uint64_t lemma_bad = 0;
    uint64_t sandwich_bad = 0;
    uint64_t brute_checked = 0;
    double min_ratio = INFINITY;
    for (uint64_t k = 0; k < trials; ++k) {
        Rng rng = Rng::child(seed, k);
        const auto d = static_cast<size_t>(1 + rng.below(d_max));
        const double scale = std::pow(10.0, -6.0 + 12.0 * rng.uniform());
        std::vector<cplx> x(d);
        for (auto &z : x) {
            z = rng.complex_normal() * scale * std::pow(10.0, -1.0 + 2.0 * rng.uniform());
        }
        const SignSolution s = best_phase_signs(x);
        min_ratio = std::min(min_ratio, s.value / s.l1);
        if (s.value < (2.0 / kPi) * s.l1 - 1e-12 * s.l1) {
            ++lemma_bad;
        }
        if (d <= brute_max) {
            ++brute_checked;
            const BruteForceSigns b = brute_force_signs(x);
            if (s.value > b.value + 1e-12 * std::max(1.0, b.value) || s.g_at_phi > s.value * (1 + 1e-12)) {
                ++sandwich_bad;
            }
        }
    }
    out.metrics["trials"] = trials;
    out.metrics["min_ratio"] = min_ratio;
    out.metrics["two_over_pi"] = 2.0 / kPi;
    out.metrics["lemma_violations"] = lemma_bad;
    out.metrics["brute_checked"] = brute_checked;
    out.metrics["sandwich_violations"] = sandwich_bad;
    out.check(lemma_bad == 0, "value < (2/pi) L1 on some instance");
    out.check(sandwich_bad == 0, "value exceeds the brute-force maximum on some instance");
    return out;
}

Outcome run_oracle(Params &p, uint64_t seed) {
    Outcome out;
    const auto name = p.get<std::string>("unitary", "qft");
    const auto n = p.get<unsigned>("n", 8);
    const auto shots = p.get<uint64_t>("shots", 0);
    const auto instance = p.get<std::string>("instance", "");
    const uint64_t t = name == "random" ? circuit_length(p, n) : 0;
    const auto u = make_unitary(name, n, t, seed);
    std::vector<uint64_t> labels(size_t{1} << n);
    for (size_t a = 0; a < labels.size(); ++a) {
        labels[a] = a;
    }
    OracleBuildOptions opts;
    opts.seed = seed;
    const SingleLevelOracle oracle = build_oracle(*u, labels, opts);
    if (!instance.empty()) {
        std::ofstream f(instance);
        if (!f) {
            fail(ErrorKind::Io, "cannot write oracle instance " + instance);
        }
        f << to_json(oracle).dump() << '\n';
    }
    double min_success = INFINITY;
    double min_margin = INFINITY;
    double min_predicted = INFINITY;
    double total_dev = 0.0;
    uint64_t violations = 0;
    uint64_t hits = 0;
    out.csv.push_back({"a", "beta", "predicted", "success"});
    for (size_t k = 0; k < oracle.size(); ++k) {
        const uint64_t a = oracle.labels()[k];
        Rng rng = Rng::child(seed ^ 0x5107ULL, a);
        const IdentificationOutcome r = identify(*u, oracle, a, shots, rng);
        const double pred = oracle.meta.predicted_success[k];
        min_success = std::min(min_success, r.success_prob);
        min_margin = std::min(min_margin, r.success_prob - pred);
        min_predicted = std::min(min_predicted, pred);
        total_dev = std::max(total_dev, std::abs(r.outcome_total - 1.0));
        violations += r.success_prob < pred - 1e-9;
        hits += r.sampled_hits;
        out.csv.push_back({std::to_string(a), num(oracle.meta.beta[k]), num(pred), num(r.success_prob)});
    }
    out.metrics["labels"] = oracle.size();
    out.metrics["min_success"] = min_success;
    out.metrics["min_predicted"] = min_predicted;
    out.metrics["min_margin"] = min_margin;
    out.metrics["max_total_probability_deviation"] = total_dev;
    out.metrics["violations"] = violations;
    out.metrics["sampled_hits"] = hits;
    out.check(violations == 0, "identification success below (2 beta/pi)^2 for some label");
    out.check(total_dev <= 1e-9, "label outcome probabilities do not sum to 1");
    return out;
}

RecursiveOracleSpec make_rfs_spec(const Unitary &u, unsigned l, unsigned card_bits, uint64_t seed) {
    const unsigned n = u.num_qubits();
    if (card_bits > n) {
        fail(ErrorKind::InvalidConfig, "rfs: |A| cannot exceed 2^n");
    }
    std::vector<uint64_t> labels(size_t{1} << card_bits);
    for (size_t a = 0; a < labels.size(); ++a) {
        labels[a] = a;
    }
    OracleBuildOptions opts;
    opts.seed = seed;
    auto f = std::make_shared<SingleLevelOracle>(build_oracle(u, labels, opts));
    Rng rng = Rng::child(seed, 0xB0075ULL);
    return make_spec(l, std::move(f), rng.next_u64(), static_cast<int>(rng.below(2)));
}

Outcome run_rfs(Params &p, uint64_t seed) {
    Outcome out;
    const auto mode = p.get<std::string>("mode", "find");
    if (mode == "bound") {
        const auto q = p.get<double>("Q", 10.0);
        const auto card_a = p.get<double>("cardA", std::exp2(30.0));
        const auto l = p.get<unsigned>("l", 5);
        const LowerBound b = lower_bound(q, card_a, l);
        out.metrics["bound"] = b.value;
        out.metrics["degenerate"] = b.degenerate;
        out.metrics["term_internal"] = std::isfinite(b.term_internal) ? b.term_internal : -1.0;
        out.metrics["term_leaf"] = b.term_leaf;
        const auto c = p.get<double>("c", 0.1);
        out.csv.push_back({"n", "cardA_log2", "l", "Q", "bound", "degenerate"});
        for (unsigned n : {16u, 64u, 256u}) {
            const double ln = std::log2(static_cast<double>(n));
            const double qq = std::pow(n, c * ln);
            const LowerBound bb = lower_bound(qq, std::exp2(n / 2.0), static_cast<unsigned>(ln));
            out.csv.push_back({std::to_string(n), num(n / 2.0), num(ln), num(qq), num(bb.value),
                               bb.degenerate ? "1" : "0"});
            out.metrics["thm3_bound_n" + std::to_string(n)] = bb.value;
        }
        return out;
    }

    const auto n = p.get<unsigned>("n", 4);
    const auto l = p.get<unsigned>("l", 2);
    const auto name = p.get<std::string>("unitary", "hadamard");
    const auto card_bits = p.get<unsigned>("card_bits", (n + 1) / 2);
    const auto trials = p.get<uint64_t>("trials", 1);
    const uint64_t t = name == "random" ? circuit_length(p, n) : 0;

    if (mode == "table") {
        const auto ns = p.get<std::vector<unsigned>>("ns", {4, 6, 8});
        const auto delta = p.get<double>("delta", 0.2);
        out.csv.push_back({"n", "cardA", "classical_queries", "find_Q0"});
        bool increasing = true;
        bool constant = true;
        uint64_t prev_c = 0;
        uint64_t first_q0 = 0;
        for (size_t k = 0; k < ns.size(); ++k) {
            const auto u = make_unitary(name, ns[k], t, seed);
            const auto spec = make_rfs_spec(*u, l, (ns[k] + 1) / 2, Rng::child(seed, k).next_u64());
            const ClassicalResult cr = classical_solver(spec);
            FindOptions fo;
            fo.delta = delta;
            fo.seed = seed;
            const FindReport fr = find_simulate(spec, *u, fo);
            if (k > 0) {
                increasing = increasing && cr.queries > prev_c;
                constant = constant && fr.queries_counted == first_q0;
            } else {
                first_q0 = fr.queries_counted;
            }
            prev_c = cr.queries;
            out.csv.push_back({std::to_string(ns[k]), std::to_string(spec.card()), std::to_string(cr.queries),
                               std::to_string(fr.queries_counted)});
            out.metrics["classical_n" + std::to_string(ns[k])] = cr.queries;
            out.metrics["find_Q0_n" + std::to_string(ns[k])] = fr.queries_counted;
        }
        out.metrics["classical_strictly_increasing"] = increasing;
        out.metrics["find_constant"] = constant;
        out.check(increasing, "classical query count not strictly increasing in n");
        out.check(constant, "FIND Q(0) varies with n");
        return out;
    }

    const auto u = make_unitary(name, n, t, seed);
    if (mode == "find") {
        FindOptions fo;
        fo.delta = p.get<double>("delta", 0.2);
        fo.mode = junk_mode_from_string(p.get<std::string>("junk", "worst"));
        fo.junk_draws = p.get<size_t>("draws", 100);
        const auto copies = p.get<unsigned>("copies", 0);
        if (copies > 0) {
            fo.copies = copies;
        }
        uint64_t correct = 0;
        bool eps_ok = true;
        bool copy_ok = true;
        double worst_fail = 0.0;
        double min_copy = INFINITY;
        FindReport first;
        for (uint64_t k = 0; k < trials; ++k) {
            const uint64_t s = trials == 1 ? seed : Rng::child(seed, k).next_u64();
            const auto spec = make_rfs_spec(*u, l, card_bits, s);
            fo.seed = s;
            const FindReport rep = find_simulate(spec, *u, fo);
            correct += rep.answer_correct;
            eps_ok = eps_ok && rep.eps_ok;
            copy_ok = copy_ok && rep.copy_success_ok;
            worst_fail = std::max(worst_fail, rep.failure_amplitude2);
            for (const auto &lv : rep.levels) {
                min_copy = std::min(min_copy, lv.copy_success_min);
            }
            if (k == 0) {
                first = rep;
            }
        }
        out.metrics["Q0"] = first.queries_counted;
        out.metrics["Q0_closed_form"] = first.queries_closed_form;
        out.metrics["Q0_paper_approx"] = first.queries_paper_approx;
        out.metrics["m"] = first.m;
        out.metrics["epsilon"] = first.epsilon;
        out.metrics["failure_amplitude2_max"] = worst_fail;
        out.metrics["copy_success_min"] = min_copy;
        out.metrics["success_probability"] = first.success_probability;
        out.metrics["answers_correct"] = correct;
        out.metrics["answer_correct"] = correct == trials;
        out.metrics["eps_ok"] = eps_ok;
        out.metrics["copy_success_ok"] = copy_ok;
        out.check(first.queries_counted == first.queries_closed_form, "counted queries differ from the closed form");
        out.check(correct == trials, "FIND answer differs from b_root on some instance");
        if (!fo.copies) {
            out.check(eps_ok, "a level exceeds epsilon");
            out.check(copy_ok, "a level has per-copy success below delta/2");
        }
        out.csv.push_back({"depth", "nodes", "child_eps_max", "eta_max", "exact_success_min", "copy_success_min",
                           "node_eps_max"});
        for (const auto &lv : first.levels) {
            out.csv.push_back({std::to_string(lv.depth), std::to_string(lv.nodes), num(lv.child_eps_max),
                               num(lv.eta_max), num(lv.exact_success_min), num(lv.copy_success_min),
                               num(lv.node_eps_max)});
        }
        return out;
    }
    if (mode == "coherent") {
        const auto copies = p.get<unsigned>("copies", 1);
        const auto fault_symbol = p.get<int64_t>("fault_symbol", -1);
        const auto fault_eps = p.get<double>("fault_eps", 0.0);
        std::vector<FindFault> faults;
        if (fault_symbol >= 0) {
            faults.push_back({static_cast<uint64_t>(fault_symbol), fault_eps});
        }
        const auto spec = make_rfs_spec(*u, l, card_bits, seed);
        const CoherentResult cr = find_coherent_tiny(spec, *u, copies, faults, seed);
        FindOptions fo;
        fo.delta = p.get<double>("delta", 0.1);
        fo.copies = copies;
        fo.mode = JunkMode::Sampled;
        fo.junk_draws = p.get<size_t>("draws", 100);
        fo.faults = faults;
        fo.seed = seed;
        const FindReport fr = find_simulate(spec, *u, fo);
        out.metrics["qubits"] = cr.qubits;
        out.metrics["coherent_success"] = cr.success_probability;
        out.metrics["simulated_success"] = fr.success_probability;
        out.metrics["difference"] = std::abs(cr.success_probability - fr.success_probability);
        out.metrics["residual_norm"] = cr.residual_norm;
        out.metrics["residual_bound"] = cr.residual_bound;
        out.metrics["answer_correct"] = cr.answer_correct;
        out.check(std::abs(cr.success_probability - fr.success_probability) <= 0.05,
                  "coherent and modeled success differ by more than 0.05");
        out.check(cr.residual_norm <= cr.residual_bound + 1e-12, "uncomputation residual above sqrt(4 eps)");
        return out;
    }

    const auto spec_path = p.get<std::string>("spec", "");
    const auto log_path = p.get<std::string>("log", "");
    const auto save = [&](const RecursiveOracleSpec &spec, const std::vector<QueryRecord> &log) {
        if (!spec_path.empty()) {
            std::ofstream f(spec_path);
            if (!f) {
                fail(ErrorKind::Io, "cannot write spec " + spec_path);
            }
            f << to_json(spec).dump() << '\n';
        }
        if (!log_path.empty()) {
            write_query_log(log_path, log);
        }
    };
    if (mode == "classical") {
        uint64_t correct = 0;
        double total = 0.0;
        uint64_t max_q = 0;
        for (uint64_t k = 0; k < trials; ++k) {
            const uint64_t s = trials == 1 ? seed : Rng::child(seed, k).next_u64();
            const auto spec = make_rfs_spec(*u, l, card_bits, s);
            const ClassicalResult cr = classical_solver(spec);
            correct += cr.answer == spec.b_root;
            total += static_cast<double>(cr.queries);
            max_q = std::max(max_q, cr.queries);
            if (k == 0) {
                save(spec, cr.log);
            }
        }
        out.metrics["mean_queries"] = total / static_cast<double>(trials);
        out.metrics["max_queries"] = max_q;
        out.metrics["answers_correct"] = correct;
        out.check(correct == trials, "classical answer differs from b_root");
        return out;
    }
    if (mode == "referee") {
        const auto budget = p.get<uint64_t>("Q", 2);
        const auto card = static_cast<double>(uint64_t{1} << card_bits);
        const auto spec0 = make_rfs_spec(*u, l, card_bits, seed);
        uint64_t exact_bad = 0;
        double sum = 0.0;
        double sum2 = 0.0;
        uint64_t internal = 0;
        for (uint64_t k = 0; k < trials; ++k) {
            RecursiveOracleSpec spec = spec0;
            Rng rng = Rng::child(seed, k);
            spec.master_seed = rng.next_u64();
            spec.b_root = static_cast<int>(rng.below(2));
            const auto log = random_strategy(spec, budget, rng);
            const ZVerdict v = z_referee(spec, log);
            exact_bad += !v.exact_ok();
            for (double dz : v.internal_deltas) {
                sum += dz;
                sum2 += dz * dz;
                ++internal;
            }
            if (k == 0) {
                save(spec, log);
            }
        }
        const double mean = internal ? sum / static_cast<double>(internal) : 0.0;
        const double var = internal > 1 ? (sum2 / internal - mean * mean) * internal / (internal - 1.0) : 0.0;
        const double se = internal ? std::sqrt(std::max(0.0, var) / static_cast<double>(internal)) : 0.0;
        const double bound = p5_bound(card, static_cast<double>(budget));
        out.metrics["runs"] = trials;
        out.metrics["exact_violations"] = exact_bad;
        out.metrics["internal_queries"] = internal;
        out.metrics["internal_delta_mean"] = mean;
        out.metrics["internal_delta_se"] = se;
        out.metrics["p5_bound"] = std::isfinite(bound) ? bound : -1.0;
        out.metrics["p5_ok"] = std::isfinite(bound) && mean <= bound + 3.0 * se;
        out.check(exact_bad == 0, "P1-P4 violated on some run");
        out.check(std::isfinite(bound), "property 5 is vacuous: Q >= |A|^{1/3}");
        out.check(!std::isfinite(bound) || mean <= bound + 3.0 * se, "mean internal delta Z above the property-5 bound");
        return out;
    }
    fail(ErrorKind::InvalidConfig, "rfs: unknown mode '" + mode + "'");
}

Outcome run_markov(Params &p, uint64_t seed) {
    Outcome out;
    const auto mode = p.get<std::string>("mode", "gap");
    if (mode == "gap") {
        const auto n = p.get<unsigned>("n", 16);
        const WeightChain chain = lumped_matrix(n);
        const double g = exact_gap(n);
        out.metrics["gap"] = g;
        out.metrics["gap_n"] = g * n;
        out.metrics["gap_n2"] = g * n * n;
        out.metrics["row_sum_error"] = chain.max_row_sum_error();
        out.metrics["detailed_balance_error"] = chain.max_detailed_balance_error();
        out.check(g > 0.0, "spectral gap not positive");
        out.check(chain.max_detailed_balance_error() <= 1e-12, "detailed balance off by more than 1e-12");
        return out;
    }
    if (mode == "table") {
        const auto ns = p.get<std::vector<unsigned>>("ns", {2, 4, 8, 16, 32, 64});
        out.csv.push_back({"n", "gap", "gap*n", "gap*n^2"});
        bool positive = true;
        for (const auto &row : gap_table(ns)) {
            out.csv.push_back({std::to_string(row.n), num(row.gap), num(row.gap_n), num(row.gap_n2)});
            out.metrics["gap_n" + std::to_string(row.n)] = row.gap;
            positive = positive && row.gap > 0.0;
        }
        out.check(positive, "some gap not positive");
        return out;
    }
    if (mode == "lumped") {
        const auto n = p.get<unsigned>("n", 4);
        const WeightChain chain = lumped_matrix(n);
        out.csv.push_back({"w", "w_next", "P"});
        for (unsigned a = 1; a <= n; ++a) {
            for (unsigned b = 1; b <= n; ++b) {
                out.csv.push_back({std::to_string(a), std::to_string(b), num(chain.at(a, b))});
            }
        }
        out.metrics["rational"] = chain.rational;
        out.metrics["row_sum_error"] = chain.max_row_sum_error();
        out.metrics["detailed_balance_error"] = chain.max_detailed_balance_error();
        if (n <= 8) {
            const RationalChecks rc = lumped_rational_checks(n);
            out.metrics["rows_exact"] = rc.rows_sum_to_one;
            out.metrics["detailed_balance_exact"] = rc.detailed_balance;
            out.check(rc.rows_sum_to_one && rc.detailed_balance, "rational checks failed");
        }
        return out;
    }
    if (mode == "stationary") {
        const auto n = p.get<unsigned>("n", 3);
        const auto t = p.get<unsigned>("t", 150);
        const auto walkers = p.get<uint64_t>("trials", 100000);
        PauliString start(n);
        start.set(0, 1);
        const auto hist = walker_distribution(start, t, walkers, seed);
        std::vector<double> uniform(hist.size(), 1.0 / static_cast<double>(hist.size() - 1));
        uniform[0] = 0.0;
        const double tv = tv_distance(hist, uniform);
        out.metrics["tv"] = tv;
        out.metrics["zero_mass"] = hist[0];
        out.check(tv <= 0.02, "walker distribution farther than 0.02 from uniform");
        out.csv.push_back({"pauli", "mass"});
        for (size_t s = 0; s < hist.size(); ++s) {
            out.csv.push_back({PauliString(n, s).str(), num(hist[s])});
        }
        return out;
    }
    if (mode == "moments") {
        const auto n = p.get<unsigned>("n", 2);
        const auto t = p.get<unsigned>("t", 5);
        const auto circuits = p.get<uint64_t>("trials", 2000);
        const MomentComparison mc = moment_compare(n, t, circuits, seed);
        out.metrics["tv"] = mc.tv;
        out.check(mc.tv <= 0.03, "moment TV above 0.03");
        out.csv.push_back({"pauli", "circuit_mean", "chain"});
        for (size_t s = 0; s < mc.chain.size(); ++s) {
            out.csv.push_back({PauliString(n, s).str(), num(mc.circuit_mean[s]), num(mc.chain[s])});
        }
        return out;
    }
    fail(ErrorKind::InvalidConfig, "markov: unknown mode '" + mode + "' (gap | table | lumped | stationary | moments)");
}

Outcome run_ad2(Params &p, uint64_t seed) {
    Outcome out;
    const auto samples = p.get<uint64_t>("samples", 20000);
    const Ad2Result r = verify_mean_ad2(samples, seed);
    out.metrics["frobenius"] = r.frobenius;
    out.metrics["noise_floor"] = r.noise_floor;
    out.metrics["max_orthogonality_error"] = r.max_orthogonality_error;
    out.metrics["max_imag"] = r.max_imag;
    out.metrics["max_unital_error"] = r.max_unital_error;
    out.check(r.frobenius <= 0.05, "Frobenius distance above 0.05");
    out.check(r.max_orthogonality_error <= 1e-10, "ad_W not orthogonal within 1e-10");
    return out;
}

Outcome run_qt(Params &p, uint64_t seed) {
    Outcome out;
    const auto n = p.get<unsigned>("n", 6);
    const uint64_t t = circuit_length(p, n);
    const auto circuits = p.get<uint64_t>("trials", 200);
    const auto beta = p.get<double>("beta", 0.25);
    const auto random_a = p.get<bool>("random_a", false);
    const QtStatistics q = q_t_statistics(n, static_cast<unsigned>(t), circuits, seed, random_a);
    const double bound = 2.2 * std::exp2(-static_cast<double>(n));
    out.metrics["mean_q"] = q.mean;
    out.metrics["standard_error"] = q.standard_error;
    out.metrics["bound"] = bound;
    out.check(q.mean <= bound, "mean Q_t above 2.2 2^{-n}");
    const MarkovTail tail = markov_tail(n, static_cast<unsigned>(t), circuits, beta, seed);
    out.metrics["tail_fraction"] = tail.bad_fraction;
    out.metrics["tail_markov_bound"] = tail.markov_bound;
    out.metrics["tail_threshold"] = tail.threshold;
    out.check(tail.bad_fraction <= 2.0 * beta * beta + 0.05, "Markov tail fraction above 2 beta^2 + 0.05");
    return out;
}

}  // namespace

const std::vector<std::string> &experiment_names() {
    static const std::vector<std::string> names = {"dispersion", "signs", "oracle", "rfs", "markov", "ad2", "qt"};
    return names;
}

std::unique_ptr<Unitary> make_unitary(const std::string &name, unsigned n, uint64_t t, uint64_t seed) {
    if (n < 1 || n > kMaxStateQubits) {
        fail(ErrorKind::InvalidConfig, "unitary: n out of range");
    }
    if (name == "hadamard") {
        return std::make_unique<HadamardAll>(n);
    }
    if (name == "identity") {
        return std::make_unique<IdentityUnitary>(n);
    }
    if (name == "qft") {
        if (n > 12) {
            fail(ErrorKind::Size, "qft: dense matrix limited to n <= 12");
        }
        FourierMatrix f = qft_cyclic(size_t{1} << n);
        return std::make_unique<DenseUnitary>(n, std::move(f.entries), "qft");
    }
    if (name == "random") {
        return std::make_unique<CircuitUnitary>(RandomCircuit::generate(n, t, seed));
    }
    fail(ErrorKind::InvalidConfig, "unknown unitary '" + name + "' (hadamard | identity | qft | random)");
}

json to_json(const ResultRecord &r) {
    json doc;
    doc["experiment"] = r.experiment;
    doc["parameters"] = r.parameters;
    doc["metrics"] = r.metrics;
    doc["seed"] = r.seed;
    doc["duration"] = r.duration;
    doc["schema_version"] = r.schema_version;
    doc["passed"] = r.passed;
    doc["failures"] = r.failures;
    return doc;
}

ResultRecord record_from_json(const json &doc) {
    try {
        ResultRecord r;
        r.schema_version = doc.at("schema_version").get<int>();
        r.experiment = doc.at("experiment").get<std::string>();
        r.parameters = doc.at("parameters");
        r.metrics = doc.at("metrics");
        r.seed = doc.at("seed").get<uint64_t>();
        r.duration = doc.value("duration", 0.0);
        r.passed = doc.value("passed", true);
        r.failures = doc.value("failures", std::vector<std::string>{});
        return r;
    } catch (const json::exception &e) {
        fail(ErrorKind::InvalidConfig, std::string("result record: ") + e.what());
    }
}

ResultRecord run_experiment(const ExperimentConfig &cfg) {
    Params p(cfg.parameters);
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    if (cfg.experiment == "dispersion") {
        o = run_dispersion(p, cfg.seed);
    } else if (cfg.experiment == "signs") {
        o = run_signs(p, cfg.seed);
    } else if (cfg.experiment == "oracle") {
        o = run_oracle(p, cfg.seed);
    } else if (cfg.experiment == "rfs") {
        o = run_rfs(p, cfg.seed);
    } else if (cfg.experiment == "markov") {
        o = run_markov(p, cfg.seed);
    } else if (cfg.experiment == "ad2") {
        o = run_ad2(p, cfg.seed);
    } else if (cfg.experiment == "qt") {
        o = run_qt(p, cfg.seed);
    } else {
        fail(ErrorKind::InvalidConfig, "unknown experiment '" + cfg.experiment + "'");
    }
    ResultRecord r;
    r.experiment = cfg.experiment;
    r.parameters = p.resolved();
    r.metrics = std::move(o.metrics);
    r.seed = cfg.seed;
    r.duration = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.failures = std::move(o.failures);
    r.passed = r.failures.empty();
    r.csv = std::move(o.csv);
    return r;
}

void append_records(const std::string &path, const std::vector<ResultRecord> &records) {
    std::ofstream out(path, std::ios::app);
    if (!out) {
        fail(ErrorKind::Io, "cannot open " + path + " for appending");
    }
    for (const auto &r : records) {
        out << to_json(r).dump() << '\n';
        out.flush();
        if (!out) {
            fail(ErrorKind::Io, "write to " + path + " failed");
        }
    }
}

std::vector<ResultRecord> read_records(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::Io, "cannot open " + path);
    }
    std::vector<ResultRecord> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            out.push_back(record_from_json(json::parse(line)));
        } catch (const json::parse_error &e) {
            fail(ErrorKind::InvalidConfig, path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

ReplayVerdict replay_records(const std::vector<ResultRecord> &records) {
    ReplayVerdict v;
    for (size_t k = 0; k < records.size(); ++k) {
        const ResultRecord &r = records[k];
        if (r.schema_version != kSchemaVersion) {
            fail(ErrorKind::Version, "record " + std::to_string(k) + " has schema_version " +
                                         std::to_string(r.schema_version) + ", expected " +
                                         std::to_string(kSchemaVersion));
        }
        ++v.records;
        const ResultRecord again = run_experiment({r.experiment, r.parameters, r.seed});
        // Compare through the serialized form: doubles round-trip exactly in JSON.
        const json fresh = json::parse(again.metrics.dump());
        if (fresh == r.metrics) {
            ++v.matches;
            continue;
        }
        for (const auto &[key, val] : r.metrics.items()) {
            if (!fresh.contains(key)) {
                v.mismatches.push_back("record " + std::to_string(k) + " (" + r.experiment + "): metric " + key +
                                       " missing on replay");
            } else if (fresh.at(key) != val) {
                v.mismatches.push_back("record " + std::to_string(k) + " (" + r.experiment + "): " + key + " = " +
                                       val.dump() + " recorded, " + fresh.at(key).dump() + " replayed");
            }
        }
        for (const auto &[key, val] : fresh.items()) {
            if (!r.metrics.contains(key)) {
                v.mismatches.push_back("record " + std::to_string(k) + " (" + r.experiment + "): metric " + key +
                                       " not in the record");
            }
        }
    }
    return v;
}

}  // namespace rfslab
