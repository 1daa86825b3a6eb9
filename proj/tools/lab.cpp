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

// lab: command-line front end for the rfslab experiments.
#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "rfslab/experiments.hpp"
#include "rfslab/rfs.hpp"

namespace {

using nlohmann::json;
using namespace rfslab;

struct Flags {
    std::optional<unsigned> n, l, copies, card_bits;
    std::optional<int64_t> t, fault_symbol;
    std::optional<double> delta, beta, c, q, fault_eps, card_a;
    std::optional<uint64_t> samples, trials, draws, shots;
    std::optional<std::string> group, mode, unitary, junk, instance, spec, log;
    std::vector<unsigned> ns;
    uint64_t seed = 1;
    std::string out, csv, config;
    int threads = 0;
};

void add_common(CLI::App *app, Flags &f) {
    app->add_option("--n", f.n, "qubits (or sites / vector length)");
    app->add_option("--t", f.t, "circuit length; default C*n^3");
    app->add_option("--l", f.l, "recursion depth");
    app->add_option("--delta", f.delta, "FIND per-level success target");
    app->add_option("--beta", f.beta, "dispersion beta or Markov-tail beta");
    app->add_option("--samples", f.samples, "sample count");
    app->add_option("--trials", f.trials, "trial count");
    app->add_option("--seed", f.seed, "master seed")->capture_default_str();
    app->add_option("--group", f.group, "S3 | D4 | Q8");
    app->add_option("--C", f.c, "circuit length constant");
    app->add_option("--out", f.out, "append JSONL records here");
    app->add_option("--threads", f.threads, "OpenMP threads (default LAB_THREADS)");
    app->add_option("--config", f.config, "JSON file whose keys override flags");
    app->add_option("--csv", f.csv, "write plot data as CSV");
    app->add_option("--unitary", f.unitary, "hadamard | identity | qft | random | group");
    app->add_option("--mode", f.mode, "experiment sub-mode");
}

json collect(const Flags &f) {
    json p = json::object();
    const auto put = [&p](const char *name, const auto &v) {
        if (v) {
            p[name] = *v;
        }
    };
    put("n", f.n);
    put("t", f.t);
    put("l", f.l);
    put("delta", f.delta);
    put("beta", f.beta);
    put("samples", f.samples);
    put("trials", f.trials);
    put("group", f.group);
    put("C", f.c);
    put("mode", f.mode);
    put("unitary", f.unitary);
    put("junk", f.junk);
    put("copies", f.copies);
    put("card_bits", f.card_bits);
    put("draws", f.draws);
    put("shots", f.shots);
    put("Q", f.q);
    put("cardA", f.card_a);
    put("fault_symbol", f.fault_symbol);
    put("fault_eps", f.fault_eps);
    put("instance", f.instance);
    put("spec", f.spec);
    put("log", f.log);
    if (!f.ns.empty()) {
        p["ns"] = f.ns;
    }
    return p;
}

void set_threads(int requested) {
    int threads = requested;
    if (threads <= 0) {
        if (const char *env = std::getenv("LAB_THREADS")) {
            threads = std::atoi(env);
        }
    }
    if (threads > 0) {
        omp_set_num_threads(threads);
    }
}

void write_csv(const std::string &path, const std::vector<std::vector<std::string>> &rows) {
    std::ofstream out(path);
    if (!out) {
        fail(ErrorKind::Io, "cannot write " + path);
    }
    for (const auto &row : rows) {
        for (size_t k = 0; k < row.size(); ++k) {
            out << (k ? "," : "") << row[k];
        }
        out << '\n';
    }
}

void print_summary(const ResultRecord &r) {
    std::cout << r.experiment << "  seed=" << r.seed << "  " << std::fixed << std::setprecision(3) << r.duration
              << " s  " << (r.passed ? "PASS" : "FAIL") << '\n';
    std::cout << std::defaultfloat << std::setprecision(10);
    for (const auto &[k, v] : r.metrics.items()) {
        std::cout << "  " << std::left << std::setw(32) << k << v.dump() << '\n';
    }
    for (const auto &msg : r.failures) {
        std::cout << "  failed: " << msg << '\n';
    }
}

int run(const std::string &name, const Flags &f) {
    set_threads(f.threads);
    ExperimentConfig cfg{name, collect(f), f.seed};
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) {
            fail(ErrorKind::Io, "cannot open config " + f.config);
        }
        json doc;
        try {
            doc = json::parse(in);
        } catch (const json::parse_error &e) {
            fail(ErrorKind::InvalidConfig, f.config + ": " + e.what());
        }
        if (!doc.is_object()) {
            fail(ErrorKind::InvalidConfig, f.config + ": expected a JSON object");
        }
        for (const auto &[k, v] : doc.items()) {
            if (k == "seed") {
                cfg.seed = v.get<uint64_t>();
            } else {
                cfg.parameters[k] = v;
            }
        }
    }
    const ResultRecord r = run_experiment(cfg);
    if (!f.out.empty()) {
        append_records(f.out, {r});
    }
    if (!f.csv.empty()) {
        write_csv(f.csv, r.csv);
    }
    print_summary(r);
    return r.passed ? 0 : 1;
}

int replay(const std::string &path, int threads) {
    set_threads(threads);
    const ReplayVerdict v = replay_records(read_records(path));
    std::cout << "replay: " << v.matches << "/" << v.records << " records match\n";
    for (const auto &m : v.mismatches) {
        std::cout << "  mismatch: " << m << '\n';
    }
    return v.ok() ? 0 : 1;
}

int rfs_replay(const std::string &spec_path, const std::string &log_path) {
    std::ifstream in(spec_path);
    if (!in) {
        fail(ErrorKind::Io, "cannot open spec " + spec_path);
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error &e) {
        fail(ErrorKind::InvalidConfig, spec_path + ": " + e.what());
    }
    const RecursiveOracleSpec spec = spec_from_json(doc);
    const ZVerdict v = z_referee(spec, read_query_log(log_path));
    std::cout << "queries " << v.steps.size() << "  Z_final " << v.z_final << "  root_hit " << v.root_hit << '\n'
              << "P1 " << v.p1 << "  P2 " << v.p2 << "  P3 " << v.p3 << "  P4 " << v.p4 << "  recompute "
              << v.recompute_ok << '\n';
    return v.exact_ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"rfslab experiments"};
    app.require_subcommand(1);
    Flags f;
    std::string spec_path, log_path;
    CLI::App *rfs_rep = nullptr;
    for (const auto &name : experiment_names()) {
        CLI::App *sub = app.add_subcommand(name, name + " experiment");
        add_common(sub, f);
        if (name == "rfs") {
            sub->add_option("--junk", f.junk, "worst | sampled");
            sub->add_option("--copies", f.copies, "override FIND copies per level");
            sub->add_option("--draws", f.draws, "junk draws in sampled mode");
            sub->add_option("--Q", f.q, "query budget (referee, bound)");
            sub->add_option("--cardA", f.card_a, "|A| for the bound");
            sub->add_option("--card-bits", f.card_bits, "log2 |A| for constructed instances");
            sub->add_option("--fault-symbol", f.fault_symbol, "root child carrying an injected fault");
            sub->add_option("--fault-eps", f.fault_eps, "injected failure probability");
            sub->add_option("--spec", f.spec, "write the oracle spec here");
            sub->add_option("--log", f.log, "write the query log here");
            sub->add_option("--ns", f.ns, "n values for the table")->delimiter(',');
            rfs_rep = sub->add_subcommand("replay", "check a query log with the potential referee");
            rfs_rep->add_option("--spec", spec_path, "spec JSON")->required();
            rfs_rep->add_option("--log", log_path, "query log JSONL")->required();
            sub->require_subcommand(0, 1);
        }
        if (name == "oracle") {
            sub->add_option("--shots", f.shots, "sampled identification shots per label");
            sub->add_option("--instance", f.instance, "write the oracle JSON here");
        }
        if (name == "markov") {
            sub->add_option("--ns", f.ns, "n values for the gap table")->delimiter(',');
        }
    }
    std::string replay_path;
    CLI::App *rep = app.add_subcommand("replay", "re-run JSONL records and compare metrics");
    rep->add_option("file", replay_path, "records file")->required();
    rep->add_option("--threads", f.threads, "OpenMP threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    }
    try {
        if (rep->parsed()) {
            return replay(replay_path, f.threads);
        }
        if (rfs_rep->parsed()) {
            return rfs_replay(spec_path, log_path);
        }
        return run(app.get_subcommands().front()->get_name(), f);
    } catch (const LabError &e) {
        std::cerr << "error [" << error_kind_name(e.kind()) << "]: " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
