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
#include <string>
#include <vector>

#include "json.hpp"
#include "rfslab/unitary.hpp"

namespace rfslab {

inline constexpr int kSchemaVersion = 1;

/// Names accepted by run_experiment.
const std::vector<std::string> &experiment_names();

struct ExperimentConfig {
    std::string experiment;
    /// name -> value; missing names take the experiment's defaults.
    nlohmann::json parameters = nlohmann::json::object();
    uint64_t seed = 0;
};

/// One JSON Lines record. `parameters` holds every resolved parameter, so a
/// record alone is enough to rerun it.
struct ResultRecord {
    std::string experiment;
    nlohmann::json parameters = nlohmann::json::object();
    nlohmann::json metrics = nlohmann::json::object();
    uint64_t seed = 0;
    double duration = 0.0;  ///< seconds; excluded from replay comparison
    int schema_version = kSchemaVersion;
    bool passed = true;
    std::vector<std::string> failures;
    /// Optional CSV rows (header first) for --csv; not serialized.
    std::vector<std::vector<std::string>> csv;
};

nlohmann::json to_json(const ResultRecord &r);
ResultRecord record_from_json(const nlohmann::json &doc);

/// Runs one experiment. Unknown experiment or bad parameter -> InvalidConfig.
ResultRecord run_experiment(const ExperimentConfig &cfg);

/// Appends records to a JSON Lines file, one flushed line each.
void append_records(const std::string &path, const std::vector<ResultRecord> &records);
std::vector<ResultRecord> read_records(const std::string &path);

struct ReplayVerdict {
    size_t records = 0;
    size_t matches = 0;
    std::vector<std::string> mismatches;
    bool ok() const { return mismatches.empty(); }
};

/// Reruns each record from its parameters and seed; metrics must match bit for bit.
/// A schema_version other than kSchemaVersion raises Version.
ReplayVerdict replay_records(const std::vector<ResultRecord> &records);

/// hadamard | identity | qft | random (t = C n^3 unless t given).
std::unique_ptr<Unitary> make_unitary(const std::string &name, unsigned n, uint64_t t, uint64_t seed);

}  // namespace rfslab
