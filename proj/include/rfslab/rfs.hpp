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
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "rfslab/oracle1.hpp"
#include "rfslab/rng.hpp"

namespace rfslab {

/// A node of the secret tree: the symbols x_1..x_k, each in [0, 2^n).
using Path = std::vector<uint64_t>;

/// Depth-l tree of secrets over a shared single-level family f.
///
/// Secrets are never stored. s(path) = A[H(master_seed, path) mod |A|] where H
/// is a SplitMix64 chain over (seed, length, symbols); distinct paths get
/// independent-looking labels and any node can be replayed from the seed.
struct RecursiveOracleSpec {
    unsigned l = 1;
    std::shared_ptr<const SingleLevelOracle> f;
    uint64_t master_seed = 0;
    int b_root = 0;
    /// Where the family was loaded from, if anywhere (kept for the spec file).
    std::string oracle_ref;

    unsigned n() const { return f->num_qubits(); }
    size_t card() const { return f->size(); }
    /// log2 |A|
    double alpha_n() const;
    /// Throws Depth for |path| >= l, Protocol for a symbol outside X.
    uint64_t secret_at(const Path &path) const;
    void validate() const;
};

RecursiveOracleSpec make_spec(unsigned l, std::shared_ptr<const SingleLevelOracle> f, uint64_t master_seed,
                              int b_root);

/// {l, n, alpha_n, master_seed, b_root, oracle_ref, oracle}. The family is
/// embedded so a spec file is self-contained; oracle_ref is informational.
nlohmann::json to_json(const RecursiveOracleSpec &spec);
RecursiveOracleSpec spec_from_json(const nlohmann::json &doc);

enum class QueryResult : int8_t { Zero = 0, One = 1, Fail = 2 };

std::string to_string(QueryResult r);

struct QueryRecord {
    Path path;
    std::optional<uint64_t> guess;
    QueryResult result = QueryResult::Fail;
    uint64_t index = 0;
};

nlohmann::json to_json(const QueryRecord &rec);
QueryRecord query_record_from_json(const nlohmann::json &doc);
std::vector<QueryRecord> read_query_log(const std::string &path);
void write_query_log(const std::string &path, const std::vector<QueryRecord> &log);

/// The oracle's three cases, without logging. Arity errors throw Protocol.
QueryResult evaluate_query(const RecursiveOracleSpec &spec, const Path &path, std::optional<uint64_t> guess);

/// Stateful oracle handle that appends every call (FAIL included) to its log.
class RecursiveOracle {
   public:
    explicit RecursiveOracle(const RecursiveOracleSpec &spec) : spec_(spec) {}
    QueryResult query(const Path &path, std::optional<uint64_t> guess = std::nullopt);
    const std::vector<QueryRecord> &log() const { return log_; }
    uint64_t count() const { return log_.size(); }
    const RecursiveOracleSpec &spec() const { return spec_; }

   private:
    const RecursiveOracleSpec &spec_;
    std::vector<QueryRecord> log_;
};

struct ClassicalResult {
    int answer = 0;
    uint64_t queries = 0;
    std::vector<QueryRecord> log;
};

/// Learns each secret from its children's bits (children in ascending order,
/// candidates eliminated in ascending label order), then confirms with one
/// query per remaining candidate. Throws Integrity if every candidate is ruled out.
ClassicalResult classical_solver(const RecursiveOracleSpec &spec);

/// Queries uniformly random nodes; internal queries carry a uniformly random
/// guess from A. Stops early once the root is hit.
std::vector<QueryRecord> random_strategy(const RecursiveOracleSpec &spec, uint64_t budget, Rng &rng);

struct ZStep {
    uint64_t index = 0;
    unsigned depth = 0;
    bool leaf = false;
    bool hit = false;
    double z_before = 0.0;
    double z_after = 0.0;
    double delta = 0.0;
    /// |incremental Z - Z recomputed from S|
    double drift = 0.0;
};

struct ZVerdict {
    double weight_base = 0.0;  ///< log2|A| / 3
    std::vector<ZStep> steps;
    double z_final = 0.0;
    bool root_hit = false;
    bool p1 = true;  ///< Z = 0 before any query
    bool p2 = true;  ///< a successful root query leaves Z = 1
    bool p3 = true;  ///< Z only moves at query steps
    bool p4 = true;  ///< leaf increments <= base^{-l}
    bool recompute_ok = true;  ///< incremental Z matches the recount within 1e-12
    std::vector<double> internal_deltas;
    size_t set_size = 0;  ///< |S| at the end

    bool exact_ok() const { return p1 && p2 && p3 && p4 && recompute_ok; }
};

/// Replays the log against the spec (results must match the oracle, else
/// Integrity) and tracks the potential Z = sum_{x in S} (log2|A|/3)^{-d(x)}.
ZVerdict z_referee(const RecursiveOracleSpec &spec, const std::vector<QueryRecord> &log);

/// Right side of the property-5 inequality, 2 / (|A|^{1/3} - Q); +inf when Q >= |A|^{1/3}.
double p5_bound(double card_a, double q);

struct LowerBound {
    double value = 0.0;
    bool degenerate = false;  ///< Q >= |A|^{1/3}: the formula says nothing, value = 1
    double term_internal = 0.0;
    double term_leaf = 0.0;
};

/// 1/2 + max(Q / (|A|^{1/3} - Q), Q (log2|A| / 3)^{-l}).
LowerBound lower_bound(double q, double card_a, unsigned l);

}  // namespace rfslab
