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

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "rfslab/experiments.hpp"
#include "rfslab/kernels.hpp"

namespace rfslab {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string &name) {
    const auto p = fs::temp_directory_path() / ("rfslab_" + name);
    fs::remove(p);
    return p;
}

int lab(const std::string &args) {
    const std::string cmd = std::string(LAB_BINARY) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Experiments, DispersionRecord) {
    const auto r = run_experiment({"dispersion", {{"unitary", "hadamard"}, {"n", 8}, {"beta", 1.0}}, 1});
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.metrics.at("alpha_achieved").get<double>(), 1.0);
    EXPECT_EQ(r.parameters.at("n").get<unsigned>(), 8u);
    EXPECT_EQ(r.schema_version, kSchemaVersion);
}

TEST(Experiments, RfsRecord) {
    const auto r = run_experiment({"rfs", {{"l", 2}, {"delta", 0.2}, {"unitary", "hadamard"}, {"n", 4}}, 1});
    EXPECT_EQ(r.metrics.at("Q0").get<uint64_t>(), 22052u);
    EXPECT_TRUE(r.metrics.at("answer_correct").get<bool>());
}

TEST(Experiments, UnknownNameAndBadParameter) {
    EXPECT_THROW(run_experiment({"nope", {}, 1}), LabError);
    EXPECT_THROW(run_experiment({"dispersion", {{"n", "eight"}}, 1}), LabError);
    EXPECT_THROW(run_experiment({"markov", {{"mode", "spin"}}, 1}), LabError);
}

TEST(Replay, FreshRunMatchesAndTamperIsReported) {
    std::vector<ResultRecord> recs;
    recs.push_back(run_experiment({"signs", {{"trials", 200}}, 3}));
    recs.push_back(run_experiment({"markov", {{"mode", "stationary"}, {"trials", 2000}, {"t", 40}}, 4}));
    recs.push_back(run_experiment({"ad2", {{"samples", 600}}, 5}));
    const auto path = scratch("replay.jsonl");
    append_records(path.string(), recs);
    const auto back = read_records(path.string());
    ASSERT_EQ(back.size(), 3u);
    const auto v = replay_records(back);
    EXPECT_TRUE(v.ok());
    EXPECT_EQ(v.matches, 3u);

    auto tampered = back;
    tampered[1].metrics["tv"] = tampered[1].metrics["tv"].get<double>() + 1e-15;
    const auto bad = replay_records(tampered);
    EXPECT_FALSE(bad.ok());
    EXPECT_EQ(bad.matches, 2u);
    ASSERT_EQ(bad.mismatches.size(), 1u);
    EXPECT_NE(bad.mismatches[0].find("tv"), std::string::npos);

    tampered[0].schema_version = kSchemaVersion + 1;
    try {
        replay_records(tampered);
        FAIL();
    } catch (const LabError &e) {
        EXPECT_EQ(e.kind(), ErrorKind::Version);
    }
    fs::remove(path);
}

TEST(Replay, ThreadCountDoesNotChangeMetrics) {
    const ExperimentConfig cfgs[] = {
        {"ad2", {{"samples", 1000}}, 8},
        {"qt", {{"n", 4}, {"trials", 20}, {"t", 64}}, 8},
        {"dispersion", {{"unitary", "random"}, {"n", 6}, {"beta", 0.7}}, 8},
        {"oracle", {{"unitary", "random"}, {"n", 5}}, 8},
    };
    for (const auto &cfg : cfgs) {
        kernels::set_num_threads(1);
        const auto one = run_experiment(cfg);
        kernels::set_num_threads(4);
        const auto four = run_experiment(cfg);
        EXPECT_EQ(one.metrics, four.metrics) << cfg.experiment;
    }
    kernels::set_num_threads(0);
}

TEST(Persistence, AppendKeepsEarlierRecords) {
    const auto path = scratch("append.jsonl");
    const auto r = run_experiment({"markov", {{"mode", "gap"}, {"n", 5}}, 1});
    append_records(path.string(), {r});
    append_records(path.string(), {r, r});
    EXPECT_EQ(read_records(path.string()).size(), 3u);
    // A torn last line is reported, earlier lines stay readable by line number.
    std::ofstream(path, std::ios::app) << "{\"experiment\":";
    EXPECT_THROW(read_records(path.string()), LabError);
    fs::remove(path);
    EXPECT_THROW(append_records("/nonexistent_dir/x.jsonl", {r}), LabError);
}

TEST(Cli, RunReplayAndExitCodes) {
    const auto out = scratch("cli.jsonl");
    const auto csv = scratch("cli.csv");
    EXPECT_EQ(lab("dispersion --unitary hadamard --n 8 --beta 1.0 --out " + out.string() + " --csv " + csv.string()), 0);
    EXPECT_EQ(lab("markov --mode gap --n 16 --out " + out.string()), 0);
    EXPECT_EQ(lab("rfs --l 2 --delta 0.2 --unitary hadamard --n 4 --out " + out.string()), 0);
    EXPECT_EQ(read_records(out.string()).size(), 3u);
    EXPECT_TRUE(fs::exists(csv));
    EXPECT_EQ(lab("replay " + out.string()), 0);
    EXPECT_EQ(lab("replay " + out.string() + " --threads 1"), 0);
    EXPECT_NE(lab("nonsense"), 0);
    EXPECT_NE(lab("markov --mode spin"), 0);
    EXPECT_NE(lab("dispersion --out /nonexistent_dir/x.jsonl"), 0);
    // A failing assertion gives a nonzero exit.
    EXPECT_EQ(lab("ad2 --samples 200"), 1);
    fs::remove(out);
    fs::remove(csv);
}

TEST(Cli, ConfigOverridesFlags) {
    const auto cfg = scratch("cfg.json");
    const auto out = scratch("cfg.jsonl");
    std::ofstream(cfg) << R"({"n": 6, "seed": 17})";
    EXPECT_EQ(lab("dispersion --n 4 --config " + cfg.string() + " --out " + out.string()), 0);
    const auto recs = read_records(out.string());
    ASSERT_EQ(recs.size(), 1u);
    EXPECT_EQ(recs[0].parameters.at("n").get<unsigned>(), 6u);
    EXPECT_EQ(recs[0].seed, 17u);
    fs::remove(cfg);
    fs::remove(out);
}

TEST(Cli, RfsReplayOfSavedLog) {
    const auto spec = scratch("spec.json");
    const auto log = scratch("log.jsonl");
    EXPECT_EQ(lab("rfs --mode classical --n 4 --card-bits 4 --spec " + spec.string() + " --log " + log.string()), 0);
    EXPECT_EQ(lab("rfs replay --spec " + spec.string() + " --log " + log.string()), 0);
    std::ofstream(log, std::ios::app) << R"({"path":[0,0,0],"guess":null,"result":0,"index":999})" << '\n';
    EXPECT_NE(lab("rfs replay --spec " + spec.string() + " --log " + log.string()), 0);
    fs::remove(spec);
    fs::remove(log);
}

}  // namespace
}  // namespace rfslab
