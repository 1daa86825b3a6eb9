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
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rfslab/rfs.hpp"
#include "rfslab/unitary.hpp"

namespace rfslab {

/// m = ceil((4/delta) ln(8/delta))
unsigned find_copies(double delta);
/// epsilon = (delta/8)^2
double find_epsilon(double delta);
/// Counts oracle calls by walking FIND's call structure: per copy, step 2
/// and step 4 each run the child FIND and step 3 makes one query; step 6 makes
/// one test query per copy.
uint64_t find_query_count(unsigned l, unsigned m);
/// sum_{j=1}^{l} (2m)^j, the solution of Q(k) = 2m Q(k+1) + 2m with Q(l) = 0.
uint64_t find_query_closed_form(unsigned l, unsigned m);

enum class JunkMode { WorstCase, Sampled };

std::string to_string(JunkMode mode);
JunkMode junk_mode_from_string(const std::string &s);

/// Forces the child answer for root child `child_symbol` to fail with
/// probability `epsilon` (replacing its certified error).
struct FindFault {
    uint64_t child_symbol = 0;
    double epsilon = 0.0;
};

struct FindOptions {
    double delta = 0.2;
    /// Overrides the number of copies (the epsilon checks are then reported, not guaranteed).
    std::optional<unsigned> copies;
    JunkMode mode = JunkMode::WorstCase;
    size_t junk_draws = 100;
    /// Dimension of each child's junk space; residual directions are drawn
    /// Haar-uniformly from its complement of |0>.
    unsigned junk_dim = 8;
    uint64_t seed = 0;
    std::vector<FindFault> faults;
};

struct FindLevel {
    unsigned depth = 0;
    uint64_t nodes = 0;
    double child_eps_max = 0.0;
    /// Largest deviation parameter eta = (1 - overlap^2)/4 at this level.
    double eta_max = 0.0;
    double exact_success_min = 1.0;
    /// min over nodes of the per-copy success bound (worst case) or model value (sampled).
    double copy_success_min = 1.0;
    /// Largest failure probability (1 - q)^m returned by a node at this level.
    double node_eps_max = 0.0;
};

struct FindReport {
    double delta = 0.0;
    double epsilon = 0.0;
    unsigned m = 0;
    unsigned l = 0;
    JunkMode mode = JunkMode::WorstCase;
    /// Per-level figures, depth 0 (root) first.
    std::vector<FindLevel> levels;
    /// Squared failure amplitude at the root (mean over draws in sampled mode).
    double failure_amplitude2 = 0.0;
    double success_probability = 0.0;
    double success_stderr = 0.0;
    size_t draws = 0;
    bool per_node = true;  ///< false when level-wise interval propagation was used
    bool eps_ok = true;  ///< every level: eta <= epsilon and node failure <= epsilon
    bool copy_success_ok = true;  ///< every level: per-copy success >= delta/2
    int answer = 0;
    bool answer_correct = false;
    uint64_t queries_counted = 0;
    uint64_t queries_closed_form = 0;
    /// The (2m)^{2l} approximation, reported beside the exact count.
    double queries_paper_approx = 0.0;
};

nlohmann::json to_json(const FindReport &r);

/// Error and query accounting for FIND on the spec's tree. The single-level
/// success of each encountered secret is computed exactly from U; labels below
/// delta raise Certification naming the label.
FindReport find_simulate(const RecursiveOracleSpec &spec, const Unitary &u, const FindOptions &opts);

struct CoherentResult {
    int answer = 0;
    bool answer_correct = false;
    unsigned qubits = 0;
    unsigned copies = 0;
    /// Probability that one root copy's test passes.
    double copy_success = 0.0;
    /// Probability that at least one of the root copies passes.
    double success_probability = 0.0;
    /// Norm of the workspace left outside |0> after uncomputation.
    double residual_norm = 0.0;
    /// sqrt(4 eps) with eps the largest child failure probability.
    double residual_bound = 0.0;
};

/// Literal state-vector run of FIND with copy registers and uncomputation,
/// for n <= 2, l <= 2, copies <= 3. Root copies are product states, so one is
/// simulated and the success of `copies` of them is 1 - (1 - p)^copies.
/// Each fault is a rotation of the child's success flag by sqrt(epsilon) with
/// a phase drawn from `seed`; at l = 1 it uses one ancilla per faulty leaf.
CoherentResult find_coherent_tiny(const RecursiveOracleSpec &spec, const Unitary &u, unsigned copies,
                                  const std::vector<FindFault> &faults = {}, uint64_t seed = 0);

/// Register budget of find_coherent_tiny.
inline constexpr unsigned kCoherentMaxQubits = 22;

}  // namespace rfslab
