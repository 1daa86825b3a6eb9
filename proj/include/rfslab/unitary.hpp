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

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rfslab/circuit.hpp"
#include "rfslab/state.hpp"

namespace rfslab {

/// A unitary acting on n qubits, given by its action on state vectors.
class Unitary {
   public:
    virtual ~Unitary() = default;

    virtual unsigned num_qubits() const = 0;
    virtual std::string name() const = 0;
    /// amps <- U amps
    virtual void apply(std::span<cplx> amps) const = 0;
    /// amps <- U^dagger amps
    virtual void apply_adjoint(std::span<cplx> amps) const = 0;

    size_t dim() const { return size_t{1} << num_qubits(); }
    PureState act(const PureState &state) const;
    PureState act_adjoint(const PureState &state) const;
    /// Column-by-column dense matrix, row-major.
    std::vector<cplx> dense_matrix() const;
};

/// H^{(x) n}; self-adjoint.
class HadamardAll final : public Unitary {
   public:
    explicit HadamardAll(unsigned n);
    unsigned num_qubits() const override { return n_; }
    std::string name() const override { return "hadamard"; }
    void apply(std::span<cplx> amps) const override;
    void apply_adjoint(std::span<cplx> amps) const override { apply(amps); }

   private:
    unsigned n_;
};

class IdentityUnitary final : public Unitary {
   public:
    explicit IdentityUnitary(unsigned n) : n_(n) {}
    unsigned num_qubits() const override { return n_; }
    std::string name() const override { return "identity"; }
    void apply(std::span<cplx>) const override {}
    void apply_adjoint(std::span<cplx>) const override {}

   private:
    unsigned n_;
};

/// Explicit 2^n x 2^n matrix (row-major). Rows are validated for size only;
/// callers construct these from checked Fourier matrices or Haar samples.
class DenseUnitary final : public Unitary {
   public:
    DenseUnitary(unsigned n, std::vector<cplx> matrix, std::string name);
    unsigned num_qubits() const override { return n_; }
    std::string name() const override { return name_; }
    void apply(std::span<cplx> amps) const override;
    void apply_adjoint(std::span<cplx> amps) const override;
    cplx at(size_t r, size_t c) const { return m_[r * dim() + c]; }

   private:
    unsigned n_;
    std::vector<cplx> m_;
    std::string name_;
};

/// U for a sampled random circuit: the adjoint of the gate sequence.
class CircuitUnitary final : public Unitary {
   public:
    explicit CircuitUnitary(RandomCircuit circuit) : circuit_(std::move(circuit)) {}
    unsigned num_qubits() const override { return circuit_.num_qubits(); }
    std::string name() const override { return "random"; }
    void apply(std::span<cplx> amps) const override;
    void apply_adjoint(std::span<cplx> amps) const override;
    const RandomCircuit &circuit() const { return circuit_; }

   private:
    RandomCircuit circuit_;
};

/// H^{(x) n} as a unitary action.
inline HadamardAll hadamard_all(unsigned n) { return HadamardAll(n); }

}  // namespace rfslab
