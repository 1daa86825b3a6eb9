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

// Serial reference vs OpenMP kernels.
#include <benchmark/benchmark.h>

#include "rfslab/circuit.hpp"
#include "rfslab/dispersion.hpp"
#include "rfslab/kernels.hpp"
#include "rfslab/state.hpp"
#include "rfslab/unitary.hpp"

namespace {

using namespace rfslab;

std::vector<cplx> random_state(unsigned n) {
    Rng rng(n);
    return sample_unit_vector(size_t{1} << n, rng);
}

template <bool Parallel>
void BM_TwoQubit(benchmark::State &st) {
    const auto n = static_cast<unsigned>(st.range(0));
    auto v = random_state(n);
    Rng rng(1);
    const auto g = sample_haar_two_qubit(rng);
    for (auto _ : st) {
        if constexpr (Parallel) {
            kernels::parallel::apply_two_qubit(v, g.entries, 1, n - 2);
        } else {
            kernels::serial::apply_two_qubit(v, g.entries, 1, n - 2);
        }
        benchmark::DoNotOptimize(v.data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(v.size()));
}

template <bool Parallel>
void BM_HadamardAll(benchmark::State &st) {
    auto v = random_state(static_cast<unsigned>(st.range(0)));
    for (auto _ : st) {
        if constexpr (Parallel) {
            kernels::parallel::apply_hadamard_all(v);
        } else {
            kernels::serial::apply_hadamard_all(v);
        }
        benchmark::DoNotOptimize(v.data());
    }
}

template <bool Parallel>
void BM_SumAbs(benchmark::State &st) {
    const auto v = random_state(static_cast<unsigned>(st.range(0)));
    for (auto _ : st) {
        benchmark::DoNotOptimize(Parallel ? kernels::parallel::sum_abs(v) : kernels::serial::sum_abs(v));
    }
}

template <bool Parallel>
void BM_Certify(benchmark::State &st) {
    const CircuitUnitary u(RandomCircuit::generate(static_cast<unsigned>(st.range(0)), 200, 3));
    for (auto _ : st) {
        auto rep = Parallel ? certify_dispersing(u, 0.5) : certify_dispersing_serial(u, 0.5);
        benchmark::DoNotOptimize(rep.alpha_achieved);
    }
}

BENCHMARK(BM_TwoQubit<false>)->Arg(12)->Arg(16)->Arg(20);
BENCHMARK(BM_TwoQubit<true>)->Arg(12)->Arg(16)->Arg(20);
BENCHMARK(BM_HadamardAll<false>)->Arg(16)->Arg(20);
BENCHMARK(BM_HadamardAll<true>)->Arg(16)->Arg(20);
BENCHMARK(BM_SumAbs<false>)->Arg(16)->Arg(20);
BENCHMARK(BM_SumAbs<true>)->Arg(16)->Arg(20);
BENCHMARK(BM_Certify<false>)->Arg(6)->Arg(8);
BENCHMARK(BM_Certify<true>)->Arg(6)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
