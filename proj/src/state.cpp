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

#include "rfslab/state.hpp"

#include <cmath>
#include <string>

namespace rfslab {

namespace {

void check_qubits(unsigned n) {
    if (n > kMaxStateQubits) {
        fail(ErrorKind::Size, "PureState: " + std::to_string(n) + " qubits exceeds the dense cap of " +
                                  std::to_string(kMaxStateQubits));
    }
}

// In-place Gram-Schmidt on the columns of a row-major d x d matrix.
// Returns false when a column is numerically dependent on its predecessors.
bool orthonormalize_columns(std::vector<cplx> &m, size_t d) {
    for (size_t c = 0; c < d; ++c) {
        for (int pass = 0; pass < 2; ++pass) {
            for (size_t p = 0; p < c; ++p) {
                cplx dot = 0.0;
                for (size_t r = 0; r < d; ++r) {
                    dot += std::conj(m[r * d + p]) * m[r * d + c];
                }
                for (size_t r = 0; r < d; ++r) {
                    m[r * d + c] -= dot * m[r * d + p];
                }
            }
        }
        double nrm = 0.0;
        for (size_t r = 0; r < d; ++r) {
            nrm += std::norm(m[r * d + c]);
        }
        nrm = std::sqrt(nrm);
        if (nrm < 1e-8) {
            return false;
        }
        for (size_t r = 0; r < d; ++r) {
            m[r * d + c] /= nrm;
        }
    }
    return true;
}

}  // namespace

PureState PureState::basis(unsigned n, uint64_t index) {
    check_qubits(n);
    const size_t dim = size_t{1} << n;
    if (index >= dim) {
        fail(ErrorKind::Label, "PureState::basis: index " + std::to_string(index) + " out of range");
    }
    std::vector<cplx> amps(dim);
    amps[index] = 1.0;
    return {n, std::move(amps)};
}

PureState PureState::uniform(unsigned n) {
    check_qubits(n);
    const size_t dim = size_t{1} << n;
    return {n, std::vector<cplx>(dim, cplx(1.0 / std::sqrt(static_cast<double>(dim)), 0.0))};
}

PureState PureState::from_amplitudes(unsigned n, std::vector<cplx> amplitudes) {
    check_qubits(n);
    if (amplitudes.size() != (size_t{1} << n)) {
        fail(ErrorKind::InvalidConfig, "PureState: expected 2^" + std::to_string(n) + " amplitudes, got " +
                                           std::to_string(amplitudes.size()));
    }
    const double nrm = kernels::serial::sum_norm2(amplitudes);
    if (std::abs(nrm - 1.0) > 1e-9) {
        fail(ErrorKind::InvalidConfig, "PureState: amplitudes not normalized (norm^2 = " + std::to_string(nrm) + ")");
    }
    return {n, std::move(amplitudes)};
}

double PureState::norm2() const { return kernels::parallel::sum_norm2(amps_); }

TwoQubitGate TwoQubitGate::identity() {
    TwoQubitGate g;
    for (int k = 0; k < 4; ++k) {
        g.entries[5 * k] = 1.0;
    }
    return g;
}

TwoQubitGate TwoQubitGate::swap() {
    TwoQubitGate g;
    g.entries[0] = 1.0;
    g.entries[4 * 1 + 2] = 1.0;
    g.entries[4 * 2 + 1] = 1.0;
    g.entries[15] = 1.0;
    return g;
}

TwoQubitGate TwoQubitGate::kron(const std::array<cplx, 4> &on_i, const std::array<cplx, 4> &on_j) {
    TwoQubitGate g;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            g.entries[4 * r + c] = on_i[2 * (r >> 1) + (c >> 1)] * on_j[2 * (r & 1) + (c & 1)];
        }
    }
    return g;
}

TwoQubitGate TwoQubitGate::from_entries(const kernels::Gate4 &entries) {
    TwoQubitGate g{entries};
    if (g.unitarity_error() > 1e-12) {
        fail(ErrorKind::InvalidConfig, "TwoQubitGate: matrix is not unitary");
    }
    return g;
}

TwoQubitGate TwoQubitGate::adjoint() const {
    TwoQubitGate g;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            g.entries[4 * r + c] = std::conj(entries[4 * c + r]);
        }
    }
    return g;
}

TwoQubitGate TwoQubitGate::operator*(const TwoQubitGate &rhs) const {
    TwoQubitGate g;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            cplx acc = 0.0;
            for (int k = 0; k < 4; ++k) {
                acc += entries[4 * r + k] * rhs.entries[4 * k + c];
            }
            g.entries[4 * r + c] = acc;
        }
    }
    return g;
}

double TwoQubitGate::unitarity_error() const {
    const TwoQubitGate p = adjoint() * *this;
    double worst = 0.0;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            worst = std::max(worst, std::abs(p.entries[4 * r + c] - (r == c ? 1.0 : 0.0)));
        }
    }
    return worst;
}

void apply_gate_inplace(PureState &state, const TwoQubitGate &gate, unsigned i, unsigned j) {
    const unsigned n = state.num_qubits();
    if (i == j || i >= n || j >= n) {
        fail(ErrorKind::InvalidPlacement, "apply_gate: invalid qubit pair (" + std::to_string(i) + ", " +
                                              std::to_string(j) + ") on " + std::to_string(n) + " qubits");
    }
    kernels::parallel::apply_two_qubit(state.mutable_amplitudes(), gate.entries, i, j);
}

PureState apply_gate(const PureState &state, const TwoQubitGate &gate, unsigned i, unsigned j) {
    PureState out = state;
    apply_gate_inplace(out, gate, i, j);
    return out;
}

std::vector<cplx> sample_haar_unitary(size_t d, Rng &rng) {
    std::vector<cplx> m(d * d);
    while (true) {
        for (auto &z : m) {
            z = rng.complex_normal();
        }
        if (orthonormalize_columns(m, d)) {
            return m;
        }
    }
}

TwoQubitGate sample_haar_two_qubit(Rng &rng) {
    const auto m = sample_haar_unitary(4, rng);
    TwoQubitGate g;
    std::copy(m.begin(), m.end(), g.entries.begin());
    return g;
}

std::vector<cplx> sample_unit_vector(size_t d, Rng &rng) {
    std::vector<cplx> v(d);
    double nrm = 0.0;
    while (nrm < 1e-300) {
        nrm = 0.0;
        for (auto &z : v) {
            z = rng.complex_normal();
            nrm += std::norm(z);
        }
    }
    const double s = 1.0 / std::sqrt(nrm);
    for (auto &z : v) {
        z *= s;
    }
    return v;
}

}  // namespace rfslab
