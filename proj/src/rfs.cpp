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

#include "rfslab/rfs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

namespace rfslab {

namespace {

constexpr uint64_t kSecretKey = 0x5EC2E75EC2E7A11DULL;

void check_symbols(const RecursiveOracleSpec &spec, const Path &path) {
    const uint64_t card_x = uint64_t{1} << spec.n();
    for (uint64_t x : path) {
        if (x >= card_x) {
            fail(ErrorKind::Protocol, "path symbol " + std::to_string(x) + " outside X");
        }
    }
}

std::string path_string(const Path &path) {
    std::string s = "(";
    for (size_t k = 0; k < path.size(); ++k) {
        s += (k ? "," : "") + std::to_string(path[k]);
    }
    return s + ")";
}

}  // namespace

double RecursiveOracleSpec::alpha_n() const { return std::log2(static_cast<double>(card())); }

void RecursiveOracleSpec::validate() const {
    if (!f) {
        fail(ErrorKind::InvalidConfig, "recursive spec: missing single-level family");
    }
    if (l < 1) {
        fail(ErrorKind::InvalidConfig, "recursive spec: depth must be >= 1");
    }
    if (b_root != 0 && b_root != 1) {
        fail(ErrorKind::InvalidConfig, "recursive spec: b_root must be 0 or 1");
    }
}

uint64_t RecursiveOracleSpec::secret_at(const Path &path) const {
    if (path.size() >= l) {
        fail(ErrorKind::Depth, "secret_at: depth " + std::to_string(path.size()) + " has no secret (l = " +
                                   std::to_string(l) + ")");
    }
    check_symbols(*this, path);
    uint64_t h = mix64(master_seed ^ kSecretKey);
    h = mix64(h + path.size() * Rng::kGamma);
    for (uint64_t x : path) {
        h = mix64(h ^ mix64(x + Rng::kGamma));
    }
    const auto idx = static_cast<uint64_t>((static_cast<__uint128_t>(h) * card()) >> 64);
    return f->labels()[idx];
}

RecursiveOracleSpec make_spec(unsigned l, std::shared_ptr<const SingleLevelOracle> f, uint64_t master_seed,
                              int b_root) {
    RecursiveOracleSpec spec;
    spec.l = l;
    spec.f = std::move(f);
    spec.master_seed = master_seed;
    spec.b_root = b_root;
    spec.validate();
    return spec;
}

nlohmann::json to_json(const RecursiveOracleSpec &spec) {
    nlohmann::json doc;
    doc["l"] = spec.l;
    doc["n"] = spec.n();
    doc["alpha_n"] = spec.alpha_n();
    doc["master_seed"] = spec.master_seed;
    doc["b_root"] = spec.b_root;
    doc["oracle_ref"] = spec.oracle_ref;
    doc["oracle"] = to_json(*spec.f);
    return doc;
}

RecursiveOracleSpec spec_from_json(const nlohmann::json &doc) {
    try {
        RecursiveOracleSpec spec;
        spec.l = doc.at("l").get<unsigned>();
        spec.master_seed = doc.at("master_seed").get<uint64_t>();
        spec.b_root = doc.at("b_root").get<int>();
        spec.oracle_ref = doc.value("oracle_ref", std::string());
        if (doc.contains("oracle")) {
            spec.f = std::make_shared<SingleLevelOracle>(oracle_from_json(doc.at("oracle")));
        } else if (!spec.oracle_ref.empty()) {
            std::ifstream in(spec.oracle_ref);
            if (!in) {
                fail(ErrorKind::Io, "cannot open oracle file " + spec.oracle_ref);
            }
            spec.f = std::make_shared<SingleLevelOracle>(oracle_from_json(nlohmann::json::parse(in)));
        }
        spec.validate();
        if (doc.contains("n") && doc.at("n").get<unsigned>() != spec.n()) {
            fail(ErrorKind::InvalidConfig, "recursive spec: n disagrees with the oracle family");
        }
        return spec;
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorKind::InvalidConfig, std::string("recursive spec json: ") + e.what());
    }
}

std::string to_string(QueryResult r) {
    switch (r) {
        case QueryResult::Zero:
            return "0";
        case QueryResult::One:
            return "1";
        case QueryResult::Fail:
            return "FAIL";
    }
    return "?";
}

nlohmann::json to_json(const QueryRecord &rec) {
    nlohmann::json doc;
    doc["index"] = rec.index;
    doc["path"] = rec.path;
    doc["guess"] = rec.guess ? nlohmann::json(*rec.guess) : nlohmann::json(nullptr);
    if (rec.result == QueryResult::Fail) {
        doc["result"] = "FAIL";
    } else {
        doc["result"] = static_cast<int>(rec.result);
    }
    return doc;
}

QueryRecord query_record_from_json(const nlohmann::json &doc) {
    try {
        QueryRecord rec;
        rec.index = doc.at("index").get<uint64_t>();
        rec.path = doc.at("path").get<Path>();
        if (!doc.at("guess").is_null()) {
            rec.guess = doc.at("guess").get<uint64_t>();
        }
        const auto &r = doc.at("result");
        if (r.is_string()) {
            if (r.get<std::string>() != "FAIL") {
                fail(ErrorKind::Integrity, "query record: unknown result " + r.dump());
            }
            rec.result = QueryResult::Fail;
        } else {
            const int v = r.get<int>();
            if (v != 0 && v != 1) {
                fail(ErrorKind::Integrity, "query record: unknown result " + r.dump());
            }
            rec.result = static_cast<QueryResult>(v);
        }
        return rec;
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorKind::Integrity, std::string("query record: ") + e.what());
    }
}

std::vector<QueryRecord> read_query_log(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::Io, "cannot open query log " + path);
    }
    std::vector<QueryRecord> log;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            log.push_back(query_record_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::parse_error &e) {
            fail(ErrorKind::Integrity, std::string("query log: ") + e.what());
        }
    }
    return log;
}

void write_query_log(const std::string &path, const std::vector<QueryRecord> &log) {
    std::ofstream out(path);
    if (!out) {
        fail(ErrorKind::Io, "cannot write query log " + path);
    }
    for (const auto &rec : log) {
        out << to_json(rec).dump() << '\n';
    }
}

QueryResult evaluate_query(const RecursiveOracleSpec &spec, const Path &path, std::optional<uint64_t> guess) {
    const size_t k = path.size();
    if (k > spec.l) {
        fail(ErrorKind::Protocol, "query path " + path_string(path) + " deeper than l");
    }
    check_symbols(spec, path);
    const auto bit = [](bool b) { return b ? QueryResult::One : QueryResult::Zero; };
    if (k == spec.l) {
        if (guess) {
            fail(ErrorKind::Protocol, "leaf queries take no guess");
        }
        const Path parent(path.begin(), path.end() - 1);
        return bit(spec.f->f(spec.secret_at(parent), path.back()));
    }
    if (!guess) {
        fail(ErrorKind::Protocol, "query at depth " + std::to_string(k) + " requires a guess");
    }
    if (!spec.f->contains(*guess)) {
        fail(ErrorKind::Protocol, "guess " + std::to_string(*guess) + " is not a label in A");
    }
    if (*guess != spec.secret_at(path)) {
        return QueryResult::Fail;
    }
    if (k == 0) {
        return bit(spec.b_root != 0);
    }
    const Path parent(path.begin(), path.end() - 1);
    return bit(spec.f->f(spec.secret_at(parent), path.back()));
}

QueryResult RecursiveOracle::query(const Path &path, std::optional<uint64_t> guess) {
    const QueryResult r = evaluate_query(spec_, path, guess);
    log_.push_back(QueryRecord{path, guess, r, log_.size()});
    return r;
}

namespace {

// Learns s(path) and returns the bit the confirming query produced
// (f(s(parent), x_k), or b_root at the root).
struct NodeAnswer {
    uint64_t secret;
    QueryResult bit;
};

NodeAnswer solve_node(const RecursiveOracleSpec &spec, RecursiveOracle &oracle, Path &path) {
    const SingleLevelOracle &f = *spec.f;
    std::vector<size_t> cand(f.size());
    for (size_t k = 0; k < cand.size(); ++k) {
        cand[k] = k;
    }
    std::sort(cand.begin(), cand.end(), [&](size_t a, size_t b) { return f.labels()[a] < f.labels()[b]; });
    const uint64_t card_x = uint64_t{1} << spec.n();
    for (uint64_t x = 0; x < card_x && cand.size() > 1; ++x) {
        path.push_back(x);
        QueryResult r;
        if (path.size() == spec.l) {
            r = oracle.query(path);
        } else {
            r = solve_node(spec, oracle, path).bit;
        }
        path.pop_back();
        const bool b = r == QueryResult::One;
        std::erase_if(cand, [&](size_t k) { return f.bit(k, x) != b; });
    }
    for (size_t k : cand) {
        const uint64_t a = f.labels()[k];
        const QueryResult r = oracle.query(path, a);
        if (r != QueryResult::Fail) {
            return {a, r};
        }
    }
    fail(ErrorKind::Integrity, "classical_solver: every candidate for node " + path_string(path) + " was eliminated");
}

}  // namespace

ClassicalResult classical_solver(const RecursiveOracleSpec &spec) {
    spec.validate();
    RecursiveOracle oracle(spec);
    Path root;
    const NodeAnswer ans = solve_node(spec, oracle, root);
    ClassicalResult out;
    out.answer = ans.bit == QueryResult::One ? 1 : 0;
    out.queries = oracle.count();
    out.log = oracle.log();
    return out;
}

std::vector<QueryRecord> random_strategy(const RecursiveOracleSpec &spec, uint64_t budget, Rng &rng) {
    spec.validate();
    RecursiveOracle oracle(spec);
    const uint64_t card_x = uint64_t{1} << spec.n();
    for (uint64_t q = 0; q < budget; ++q) {
        const auto depth = static_cast<size_t>(rng.below(spec.l + 1));
        Path path(depth);
        for (auto &x : path) {
            x = rng.below(card_x);
        }
        std::optional<uint64_t> guess;
        if (depth < spec.l) {
            guess = spec.f->labels()[rng.below(spec.card())];
        }
        const QueryResult r = oracle.query(path, guess);
        if (depth == 0 && r != QueryResult::Fail) {
            break;
        }
    }
    return oracle.log();
}

ZVerdict z_referee(const RecursiveOracleSpec &spec, const std::vector<QueryRecord> &log) {
    spec.validate();
    ZVerdict v;
    v.weight_base = std::log2(static_cast<double>(spec.card())) / 3.0;
    const auto weight = [&](size_t d) { return std::pow(v.weight_base, -static_cast<double>(d)); };
    const double leaf_cap = weight(spec.l);

    std::set<Path> hit;
    std::set<Path> s_set;
    double z = 0.0;
    const auto recount = [&]() {
        // Ordered fold over S so the recount itself is deterministic.
        double total = 0.0;
        for (const auto &p : s_set) {
            total += weight(p.size());
        }
        return total;
    };
    v.p1 = recount() == 0.0 && z == 0.0;

    for (size_t q = 0; q < log.size(); ++q) {
        const QueryRecord &rec = log[q];
        if (rec.index != q) {
            fail(ErrorKind::Integrity, "query log: index " + std::to_string(rec.index) + " out of order");
        }
        QueryResult expect;
        try {
            expect = evaluate_query(spec, rec.path, rec.guess);
        } catch (const LabError &e) {
            fail(ErrorKind::Integrity, std::string("query log references an invalid query: ") + e.what());
        }
        if (expect != rec.result) {
            fail(ErrorKind::Integrity, "query log entry " + std::to_string(q) + " disagrees with the oracle");
        }
        ZStep step;
        step.index = rec.index;
        step.depth = static_cast<unsigned>(rec.path.size());
        step.leaf = rec.path.size() == spec.l;
        step.hit = rec.result != QueryResult::Fail;
        step.z_before = z;
        // P3: nothing between queries may move Z.
        if (std::abs(recount() - z) > 1e-12) {
            v.p3 = false;
        }
        if (step.hit) {
            bool covered = false;
            for (size_t len = 0; len < rec.path.size() && !covered; ++len) {
                covered = hit.contains(Path(rec.path.begin(), rec.path.begin() + static_cast<ptrdiff_t>(len)));
            }
            hit.insert(rec.path);
            if (!covered && !s_set.contains(rec.path)) {
                double removed = 0.0;
                // S is ordered lexicographically, so the descendants of path sit
                // contiguously right after it.
                for (auto it = s_set.lower_bound(rec.path);
                     it != s_set.end() && it->size() > rec.path.size() &&
                     std::equal(rec.path.begin(), rec.path.end(), it->begin());) {
                    removed += weight(it->size());
                    it = s_set.erase(it);
                }
                s_set.insert(rec.path);
                z += weight(rec.path.size()) - removed;
            }
        }
        step.z_after = z;
        step.delta = z - step.z_before;
        step.drift = std::abs(z - recount());
        if (step.drift > 1e-12) {
            v.recompute_ok = false;
        }
        if (step.leaf) {
            if (step.delta > leaf_cap + 1e-12) {
                v.p4 = false;
            }
        } else {
            v.internal_deltas.push_back(step.delta);
        }
        if (step.depth == 0 && step.hit) {
            v.root_hit = true;
            if (recount() != 1.0) {
                v.p2 = false;
            }
        }
        v.steps.push_back(step);
    }
    v.z_final = z;
    v.set_size = s_set.size();
    return v;
}

double p5_bound(double card_a, double q) {
    const double root3 = std::cbrt(card_a);
    if (q >= root3) {
        return std::numeric_limits<double>::infinity();
    }
    return 2.0 / (root3 - q);
}

LowerBound lower_bound(double q, double card_a, unsigned l) {
    if (q < 0 || card_a < 1) {
        fail(ErrorKind::InvalidConfig, "lower_bound: need Q >= 0 and |A| >= 1");
    }
    LowerBound out;
    const double root3 = std::cbrt(card_a);
    out.term_leaf = q * std::pow(std::log2(card_a) / 3.0, -static_cast<double>(l));
    if (q >= root3) {
        out.degenerate = true;
        out.term_internal = std::numeric_limits<double>::infinity();
        out.value = 1.0;
        return out;
    }
    out.term_internal = q / (root3 - q);
    out.value = 0.5 + std::max(out.term_internal, out.term_leaf);
    return out;
}

}  // namespace rfslab
