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
#include <vector>

#include "rfslab/state.hpp"

namespace rfslab {

struct GatePlacement {
    unsigned i = 0;
    unsigned j = 0;
    TwoQubitGate gate;

    bool operator==(const GatePlacement &other) const = default;
};

/// Length-t random circuit: each step picks an unordered pair of distinct
/// qubits uniformly (stored with i < j) and a Haar-random U(4) gate.
///
/// Convention: `evolve` applies the sampled gates in order. That composed
/// operator is what the analysis calls U^dagger, i.e. U is the adjoint of the
/// sampled sequence and `evolve_basis(a)` returns U^dagger|a>.
class RandomCircuit {
   public:
    /// Deterministic in (n, t, seed). Throws InvalidConfig when n < 2.
    static RandomCircuit generate(unsigned n, uint64_t t, uint64_t seed);

    unsigned num_qubits() const { return n_; }
    uint64_t length() const { return placements_.size(); }
    uint64_t seed() const { return seed_; }
    const std::vector<GatePlacement> &placements() const { return placements_; }

    /// Applies the sampled gates in order (U^dagger).
    void evolve_inplace(PureState &state) const;
    PureState evolve(const PureState &state) const;
    PureState evolve_basis(uint64_t a) const;
    /// Applies the adjoints in reverse order (U).
    void unevolve_inplace(PureState &state) const;

   private:
    unsigned n_ = 0;
    uint64_t seed_ = 0;
    std::vector<GatePlacement> placements_;
};

/// Default circuit length C n^3 for the dispersion experiments.
inline uint64_t cubic_length(unsigned n, double c = 4.0) {
    return static_cast<uint64_t>(c * n * n * n);
}

}  // namespace rfslab
