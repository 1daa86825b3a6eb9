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

#include <cmath>
#include <filesystem>

#include "rfslab/oracle1.hpp"
#include "rfslab/rfs.hpp"
#include "rfslab/unitary.hpp"

namespace rfslab {
namespace {

std::shared_ptr<const SingleLevelOracle> hadamard_oracle(unsigned n, unsigned card_bits) {
    std::vector<uint64_t> labels(size_t{1} << card_bits);
    for (size_t a = 0; a < labels.size(); ++a) {
        labels[a] = a;
    }
    return std::make_shared<SingleLevelOracle>(build_oracle(HadamardAll(n), labels));
}

TEST(Secrets, DeterministicInRangeAndDepthChecked) {
    const auto spec = make_spec(2, hadamard_oracle(4, 4), 123, 1);
    EXPECT_EQ(spec.secret_at({}), spec.secret_at({}));
    EXPECT_EQ(spec.secret_at({3}), spec.secret_at({3}));
    for (uint64_t x = 0; x < 16; ++x) {
        EXPECT_TRUE(spec.f->contains(spec.secret_at({x})));
    }
    EXPECT_THROW(spec.secret_at({1, 2}), LabError);
    EXPECT_THROW(spec.secret_at({16}), LabError);
}

TEST(Secrets, RootUniformAcrossSeeds) {
    const auto f = hadamard_oracle(4, 4);
    std::vector<int> counts(16, 0);
    int sibling_equal = 0;
    const int seeds = 10000;
    for (int s = 0; s < seeds; ++s) {
        const auto spec = make_spec(2, f, static_cast<uint64_t>(s) * 7919 + 1, 0);
        ++counts[spec.secret_at({})];
        sibling_equal += spec.secret_at({0}) == spec.secret_at({1});
    }
    double chi2 = 0.0;
    for (int c : counts) {
        chi2 += (c - seeds / 16.0) * (c - seeds / 16.0) / (seeds / 16.0);
    }
    EXPECT_LT(chi2, 25.0);  // chi^2_15 at 0.05
    EXPECT_NEAR(sibling_equal / static_cast<double>(seeds), 1.0 / 16, 0.01);
}

TEST(Query, ThreeCaseSemantics) {
    const auto spec = make_spec(2, hadamard_oracle(4, 4), 55, 1);
    const uint64_t root = spec.secret_at({});
    EXPECT_EQ(evaluate_query(spec, {}, root), QueryResult::One);
    EXPECT_EQ(evaluate_query(spec, {}, (root + 1) % 16), QueryResult::Fail);
    for (uint64_t x = 0; x < 16; ++x) {
        const uint64_t s = spec.secret_at({x});
        const auto want = spec.f->f(root, x) ? QueryResult::One : QueryResult::Zero;
        EXPECT_EQ(evaluate_query(spec, {x}, s), want);
        for (uint64_t y = 0; y < 16; ++y) {
            const auto leaf = spec.f->f(s, y) ? QueryResult::One : QueryResult::Zero;
            EXPECT_EQ(evaluate_query(spec, {x, y}, std::nullopt), leaf);
        }
    }
}

TEST(Query, ArityErrorsAreProtocolErrors) {
    const auto spec = make_spec(2, hadamard_oracle(4, 2), 5, 0);
    const auto kind = [&](const Path &p, std::optional<uint64_t> g) {
        try {
            evaluate_query(spec, p, g);
        } catch (const LabError &e) {
            return e.kind();
        }
        return ErrorKind::Io;
    };
    EXPECT_EQ(kind({}, std::nullopt), ErrorKind::Protocol);
    EXPECT_EQ(kind({1, 2}, 0), ErrorKind::Protocol);
    EXPECT_EQ(kind({1, 2, 3}, std::nullopt), ErrorKind::Protocol);
    EXPECT_EQ(kind({1}, 9), ErrorKind::Protocol);  // 9 is not in A
}

TEST(Query, FailIffWrongGuess) {
    const auto spec = make_spec(3, hadamard_oracle(3, 3), 77, 0);
    Rng rng(2);
    for (int k = 0; k < 10000; ++k) {
        Path p(rng.below(3));
        for (auto &x : p) {
            x = rng.below(8);
        }
        const uint64_t g = rng.below(8);
        const bool fail_result = evaluate_query(spec, p, g) == QueryResult::Fail;
        ASSERT_EQ(fail_result, g != spec.secret_at(p));
    }
}

TEST(Classical, AlwaysCorrect) {
    const auto f = hadamard_oracle(4, 2);
    for (uint64_t s = 0; s < 200; ++s) {
        const auto spec = make_spec(2, f, s, static_cast<int>(s % 2));
        const auto r = classical_solver(spec);
        ASSERT_EQ(r.answer, spec.b_root) << s;
        EXPECT_EQ(r.queries, r.log.size());
        // Every logged result agrees with a fresh evaluation.
        for (const auto &q : r.log) {
            EXPECT_EQ(evaluate_query(spec, q.path, q.guess), q.result);
        }
    }
}

TEST(Classical, LevelOneCountNearLogA) {
    const auto f = hadamard_oracle(4, 4);
    const auto spec = make_spec(1, f, 3, 1);
    const auto r = classical_solver(spec);
    EXPECT_EQ(r.answer, 1);
    // Ascending leaves: x = 0 carries no information and x = 1..8 pin down a
    // linear function of 4 bits, then the root query.
    EXPECT_GE(r.queries, 5u);
    EXPECT_EQ(r.queries, 10u);
}

TEST(Referee, EmptyLogAndRootGuess) {
    const auto spec = make_spec(2, hadamard_oracle(6, 6), 9, 0);
    const auto empty = z_referee(spec, {});
    EXPECT_EQ(empty.z_final, 0.0);
    EXPECT_TRUE(empty.exact_ok());
    RecursiveOracle o(spec);
    o.query({}, spec.secret_at({}));
    const auto v = z_referee(spec, o.log());
    EXPECT_EQ(v.z_final, 1.0);
    EXPECT_TRUE(v.root_hit);
    EXPECT_TRUE(v.exact_ok());
}

TEST(Referee, LeafIncrementIsQuarterForA64) {
    const auto spec = make_spec(2, hadamard_oracle(6, 6), 9, 0);
    RecursiveOracle o(spec);
    o.query({2, 5});
    const auto v = z_referee(spec, o.log());
    ASSERT_EQ(v.steps.size(), 1u);
    EXPECT_DOUBLE_EQ(v.steps[0].delta, 0.25);
    EXPECT_DOUBLE_EQ(v.weight_base, 2.0);
}

TEST(Referee, AncestorHitAbsorbsDescendants) {
    const auto spec = make_spec(2, hadamard_oracle(6, 6), 10, 0);
    RecursiveOracle o(spec);
    o.query({1, 0});
    o.query({1, 4});
    o.query({1}, spec.secret_at({1}));
    const auto v = z_referee(spec, o.log());
    EXPECT_EQ(v.set_size, 1u);
    EXPECT_DOUBLE_EQ(v.z_final, 0.5);
    EXPECT_TRUE(v.exact_ok());
}

TEST(Referee, RandomRunsSatisfyExactProperties) {
    const auto spec0 = make_spec(2, hadamard_oracle(4, 4), 1, 0);
    for (uint64_t r = 0; r < 200; ++r) {
        auto spec = spec0;
        spec.master_seed = r;
        Rng rng(r);
        const auto log = random_strategy(spec, 64, rng);
        const auto v = z_referee(spec, log);
        ASSERT_TRUE(v.exact_ok()) << r;
        EXPECT_GE(v.z_final, 0.0);
    }
    const auto cr = classical_solver(spec0);
    EXPECT_TRUE(z_referee(spec0, cr.log).exact_ok());
    EXPECT_TRUE(z_referee(spec0, cr.log).root_hit);
}

TEST(Referee, TamperedLogIsIntegrityError) {
    const auto spec = make_spec(2, hadamard_oracle(4, 4), 1, 0);
    auto log = classical_solver(spec).log;
    log[0].result = log[0].result == QueryResult::One ? QueryResult::Zero : QueryResult::One;
    try {
        z_referee(spec, log);
        FAIL();
    } catch (const LabError &e) {
        EXPECT_EQ(e.kind(), ErrorKind::Integrity);
    }
}

TEST(Bound, Formula) {
    EXPECT_DOUBLE_EQ(lower_bound(0, 1024, 3).value, 0.5);
    const auto b = lower_bound(10, std::exp2(30.0), 5);
    EXPECT_NEAR(b.value, 0.5 + 10.0 / (1024.0 - 10.0), 1e-12);
    EXPECT_NEAR(b.value, 0.50986, 1e-5);
    const auto d = lower_bound(20, 1000, 2);
    EXPECT_TRUE(d.degenerate);
    EXPECT_EQ(d.value, 1.0);
    EXPECT_TRUE(std::isinf(p5_bound(8, 2)));
    EXPECT_DOUBLE_EQ(p5_bound(64, 2), 1.0);
}

TEST(Files, SpecAndLogRoundTrip) {
    const auto spec = make_spec(2, hadamard_oracle(4, 4), 31, 1);
    const auto back = spec_from_json(to_json(spec));
    EXPECT_EQ(back.l, spec.l);
    EXPECT_EQ(back.master_seed, spec.master_seed);
    EXPECT_EQ(back.b_root, spec.b_root);
    EXPECT_EQ(back.secret_at({5}), spec.secret_at({5}));
    const auto log = classical_solver(spec).log;
    const auto path = std::filesystem::temp_directory_path() / "rfslab_log_test.jsonl";
    write_query_log(path.string(), log);
    const auto again = read_query_log(path.string());
    ASSERT_EQ(again.size(), log.size());
    for (size_t k = 0; k < log.size(); ++k) {
        EXPECT_EQ(again[k].path, log[k].path);
        EXPECT_EQ(again[k].guess, log[k].guess);
        EXPECT_EQ(again[k].result, log[k].result);
    }
    const auto v1 = z_referee(spec, log);
    const auto v2 = z_referee(back, again);
    EXPECT_EQ(v1.z_final, v2.z_final);
    std::filesystem::remove(path);
}

}  // namespace
}  // namespace rfslab
