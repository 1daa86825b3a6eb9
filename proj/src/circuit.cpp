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

#include "rfslab/circuit.hpp"

#include <string>

namespace rfslab {

RandomCircuit RandomCircuit::generate(unsigned n, uint64_t t, uint64_t seed) {
    if (n < 2) {
        fail(ErrorKind::InvalidConfig, "RandomCircuit: need at least 2 qubits, got " + std::to_string(n));
    }
    if (n > kMaxStateQubits) {
        fail(ErrorKind::Size, "RandomCircuit: too many qubits");
    }
    RandomCircuit c;
    c.n_ = n;
    c.seed_ = seed;
    c.placements_.reserve(t);
    Rng rng(seed);
    const uint64_t pairs = uint64_t{n} * (n - 1) / 2;
    for (uint64_t step = 0; step < t; ++step) {
        // Pair index -> (i, j) with i < j, enumerated row by row.
        uint64_t p = rng.below(pairs);
        unsigned i = 0;
        while (p >= n - 1 - i) {
            p -= n - 1 - i;
            ++i;
        }
        const auto j = static_cast<unsigned>(i + 1 + p);
        c.placements_.push_back({i, j, sample_haar_two_qubit(rng)});
    }
    return c;
}

void RandomCircuit::evolve_inplace(PureState &state) const {
    for (const auto &pl : placements_) {
        apply_gate_inplace(state, pl.gate, pl.i, pl.j);
    }
}

PureState RandomCircuit::evolve(const PureState &state) const {
    PureState out = state;
    evolve_inplace(out);
    return out;
}

PureState RandomCircuit::evolve_basis(uint64_t a) const {
    PureState s = PureState::basis(n_, a);
    evolve_inplace(s);
    return s;
}

void RandomCircuit::unevolve_inplace(PureState &state) const {
    for (auto it = placements_.rbegin(); it != placements_.rend(); ++it) {
        apply_gate_inplace(state, it->gate.adjoint(), it->i, it->j);
    }
}

}  // namespace rfslab
