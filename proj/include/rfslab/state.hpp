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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "rfslab/common.hpp"
#include "rfslab/kernels.hpp"
#include "rfslab/rng.hpp"

namespace rfslab {

/// Largest register the dense simulator will allocate.
inline constexpr unsigned kMaxStateQubits = 26;
/// Default cap for experiments driven from configuration.
inline constexpr unsigned kDefaultMaxQubits = 14;

/// Normalized amplitude vector over n qubits.
///
/// Bit convention: qubit k is bit k of the basis index (qubit 0 is the least
/// significant bit). The ket |q_{n-1} ... q_1 q_0> therefore has index
/// sum_k q_k 2^k.
class PureState {
   public:
    static PureState basis(unsigned n, uint64_t index);
    static PureState uniform(unsigned n);
    /// Validates length 2^n and unit norm (1e-9).
    static PureState from_amplitudes(unsigned n, std::vector<cplx> amplitudes);

    unsigned num_qubits() const { return n_; }
    size_t dim() const { return amps_.size(); }
    std::span<const cplx> amplitudes() const { return amps_; }
    std::span<cplx> mutable_amplitudes() { return amps_; }
    const cplx &operator[](size_t k) const { return amps_[k]; }
    double norm2() const;

    bool operator==(const PureState &other) const = default;

   private:
    PureState(unsigned n, std::vector<cplx> amps) : n_(n), amps_(std::move(amps)) {}

    unsigned n_ = 0;
    std::vector<cplx> amps_;
};

/// 4x4 unitary acting on an ordered qubit pair (i, j).
///
/// Local index is 2*bit_i + bit_j, so `kron(A, B)` places A on qubit i and B on
/// qubit j.
struct TwoQubitGate {
    kernels::Gate4 entries{};

    static TwoQubitGate identity();
    static TwoQubitGate swap();
    static TwoQubitGate kron(const std::array<cplx, 4> &on_i, const std::array<cplx, 4> &on_j);
    /// Checks unitarity (1e-12) and throws InvalidConfig otherwise.
    static TwoQubitGate from_entries(const kernels::Gate4 &entries);

    cplx operator()(int r, int c) const { return entries[4 * r + c]; }
    TwoQubitGate adjoint() const;
    TwoQubitGate operator*(const TwoQubitGate &rhs) const;
    /// max |(G^dagger G - I)_{rc}|
    double unitarity_error() const;

    bool operator==(const TwoQubitGate &other) const = default;
};

inline const std::array<cplx, 4> kHadamard2 = {M_SQRT1_2, M_SQRT1_2, M_SQRT1_2, -M_SQRT1_2};
inline const std::array<cplx, 4> kIdentity2 = {1.0, 0.0, 0.0, 1.0};

/// Applies `gate` to qubits (i, j) in place. Throws InvalidPlacement.
void apply_gate_inplace(PureState &state, const TwoQubitGate &gate, unsigned i, unsigned j);
PureState apply_gate(const PureState &state, const TwoQubitGate &gate, unsigned i, unsigned j);

/// Haar-distributed element of U(4): complex Ginibre matrix, Gram-Schmidt
/// orthonormalization (run twice). Gram-Schmidt produces a triangular factor
/// with positive real diagonal, which is the phase convention exact Haar
/// sampling requires.
TwoQubitGate sample_haar_two_qubit(Rng &rng);

/// Haar-distributed d x d unitary (row-major), same construction.
std::vector<cplx> sample_haar_unitary(size_t d, Rng &rng);

/// Uniformly random unit vector in C^d.
std::vector<cplx> sample_unit_vector(size_t d, Rng &rng);

}  // namespace rfslab
