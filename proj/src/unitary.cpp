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

#include "rfslab/unitary.hpp"

#include <string>

namespace rfslab {

namespace {

void check_dim(const Unitary &u, std::span<const cplx> amps) {
    if (amps.size() != u.dim()) {
        fail(ErrorKind::InvalidConfig, "unitary " + u.name() + ": state dimension " + std::to_string(amps.size()) +
                                           " does not match 2^" + std::to_string(u.num_qubits()));
    }
}

}  // namespace

PureState Unitary::act(const PureState &state) const {
    PureState out = state;
    check_dim(*this, out.amplitudes());
    apply(out.mutable_amplitudes());
    return out;
}

PureState Unitary::act_adjoint(const PureState &state) const {
    PureState out = state;
    check_dim(*this, out.amplitudes());
    apply_adjoint(out.mutable_amplitudes());
    return out;
}

std::vector<cplx> Unitary::dense_matrix() const {
    const size_t d = dim();
    std::vector<cplx> m(d * d);
    std::vector<cplx> col(d);
    for (size_t c = 0; c < d; ++c) {
        std::fill(col.begin(), col.end(), cplx{});
        col[c] = 1.0;
        apply(col);
        for (size_t r = 0; r < d; ++r) {
            m[r * d + c] = col[r];
        }
    }
    return m;
}

HadamardAll::HadamardAll(unsigned n) : n_(n) {
    if (n < 1 || n > kMaxStateQubits) {
        fail(ErrorKind::InvalidConfig, "hadamard_all: n out of range");
    }
}

void HadamardAll::apply(std::span<cplx> amps) const {
    check_dim(*this, amps);
    kernels::parallel::apply_hadamard_all(amps);
}

DenseUnitary::DenseUnitary(unsigned n, std::vector<cplx> matrix, std::string name)
    : n_(n), m_(std::move(matrix)), name_(std::move(name)) {
    if (m_.size() != dim() * dim()) {
        fail(ErrorKind::InvalidConfig, "DenseUnitary: matrix size does not match 2^n x 2^n");
    }
}

void DenseUnitary::apply(std::span<cplx> amps) const {
    check_dim(*this, amps);
    const auto d = static_cast<long long>(dim());
    std::vector<cplx> in(amps.begin(), amps.end());
#pragma omp parallel for schedule(static) if (d >= 256)
    for (long long r = 0; r < d; ++r) {
        cplx acc = 0.0;
        const cplx *row = &m_[static_cast<size_t>(r * d)];
        for (long long c = 0; c < d; ++c) {
            acc += row[c] * in[c];
        }
        amps[r] = acc;
    }
}

void DenseUnitary::apply_adjoint(std::span<cplx> amps) const {
    check_dim(*this, amps);
    const auto d = static_cast<long long>(dim());
    std::vector<cplx> in(amps.begin(), amps.end());
#pragma omp parallel for schedule(static) if (d >= 256)
    for (long long r = 0; r < d; ++r) {
        cplx acc = 0.0;
        for (long long c = 0; c < d; ++c) {
            acc += std::conj(m_[static_cast<size_t>(c * d + r)]) * in[c];
        }
        amps[r] = acc;
    }
}

void CircuitUnitary::apply(std::span<cplx> amps) const {
    check_dim(*this, amps);
    const auto &pls = circuit_.placements();
    for (auto it = pls.rbegin(); it != pls.rend(); ++it) {
        kernels::parallel::apply_two_qubit(amps, it->gate.adjoint().entries, it->i, it->j);
    }
}

void CircuitUnitary::apply_adjoint(std::span<cplx> amps) const {
    check_dim(*this, amps);
    for (const auto &pl : circuit_.placements()) {
        kernels::parallel::apply_two_qubit(amps, pl.gate.entries, pl.i, pl.j);
    }
}

}  // namespace rfslab
