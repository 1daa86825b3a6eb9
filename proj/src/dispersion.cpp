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

#include "rfslab/dispersion.hpp"

#include <cmath>

namespace rfslab {

namespace {

DispersionReport finish_report(unsigned n, double beta, std::vector<double> l1) {
    DispersionReport rep;
    rep.n = n;
    rep.beta = beta;
    rep.per_label_l1 = std::move(l1);
    const double thr = rep.threshold();
    for (uint64_t a = 0; a < rep.per_label_l1.size(); ++a) {
        if (rep.per_label_l1[a] >= thr - kThresholdSlack) {
            rep.achieving_set.push_back(a);
        }
    }
    if (!rep.achieving_set.empty()) {
        rep.alpha_achieved = std::log2(static_cast<double>(rep.achieving_set.size())) / n;
    }
    return rep;
}

void check_beta(double beta) {
    if (!(beta > 0.0 && beta <= 1.0)) {
        fail(ErrorKind::InvalidConfig, "certify_dispersing: beta must lie in (0, 1]");
    }
}

}  // namespace

double DispersionReport::threshold() const { return beta * std::exp2(0.5 * n); }

double l1_row(const Unitary &u, uint64_t a) {
    PureState s = PureState::basis(u.num_qubits(), a);
    u.apply_adjoint(s.mutable_amplitudes());
    return kernels::parallel::sum_abs(s.amplitudes());
}

DispersionReport certify_dispersing(const Unitary &u, double beta) {
    check_beta(beta);
    const unsigned n = u.num_qubits();
    const auto dim = static_cast<long long>(u.dim());
    std::vector<double> l1(static_cast<size_t>(dim));
#pragma omp parallel for schedule(dynamic, 1)
    for (long long a = 0; a < dim; ++a) {
        std::vector<cplx> amps(static_cast<size_t>(dim));
        amps[static_cast<size_t>(a)] = 1.0;
        u.apply_adjoint(amps);
        l1[static_cast<size_t>(a)] = kernels::serial::sum_abs(amps);
    }
    return finish_report(n, beta, std::move(l1));
}

DispersionReport certify_dispersing_serial(const Unitary &u, double beta) {
    check_beta(beta);
    const unsigned n = u.num_qubits();
    const size_t dim = u.dim();
    std::vector<double> l1(dim);
    for (size_t a = 0; a < dim; ++a) {
        std::vector<cplx> amps(dim);
        amps[a] = 1.0;
        u.apply_adjoint(amps);
        l1[a] = kernels::serial::sum_abs(amps);
    }
    return finish_report(n, beta, std::move(l1));
}

PseudoDispersionReport pseudo_search(const FourierMatrix &f, size_t irrep, unsigned i, size_t samples,
                                     uint64_t stream_seed) {
    const auto &irreps = f.group.irreps();
    if (irrep >= irreps.size() || i >= irreps[irrep].dim) {
        fail(ErrorKind::Label, "pseudo_search: no label (" + std::to_string(irrep) + ", " + std::to_string(i) +
                                   ") in group " + f.group.name());
    }
    if (samples == 0) {
        fail(ErrorKind::InvalidConfig, "pseudo_search: need at least one sample");
    }
    const unsigned d = irreps[irrep].dim;
    const size_t order = f.size();

    // Basis of V: the vectors U^dagger|lambda, i, j>, whose g-components are
    // conj(F[(lambda, i, j), g]).
    std::vector<std::vector<cplx>> basis(d, std::vector<cplx>(order));
    for (unsigned j = 0; j < d; ++j) {
        const size_t row = f.row_of(irrep, i, j);
        for (size_t g = 0; g < order; ++g) {
            basis[j][g] = std::conj(f.at(row, g));
        }
    }

    PseudoDispersionReport rep;
    rep.group = f.group.name();
    rep.irrep = irrep;
    rep.row = i;
    rep.samples = samples;
    rep.bound = std::sqrt(static_cast<double>(order) / 2.0);
    const size_t labels = f.group.dimension_sum();
    rep.m_bits = static_cast<unsigned>(std::ceil(std::log2(static_cast<double>(labels))));
    rep.alpha = std::log2(static_cast<double>(labels)) / std::log2(static_cast<double>(order));
    rep.non_power_of_two = !is_power_of_two(order);
    rep.l1_values.resize(samples);

    const auto count = static_cast<long long>(samples);
#pragma omp parallel for schedule(static)
    for (long long k = 0; k < count; ++k) {
        Rng rng = Rng::child(stream_seed, static_cast<uint64_t>(k));
        const auto coeff = sample_unit_vector(d, rng);
        double acc = 0.0;
        for (size_t g = 0; g < order; ++g) {
            cplx z = 0.0;
            for (unsigned j = 0; j < d; ++j) {
                z += coeff[j] * basis[j][g];
            }
            acc += std::abs(z);
        }
        rep.l1_values[static_cast<size_t>(k)] = acc;
    }

    double sum = 0.0;
    for (size_t k = 0; k < samples; ++k) {
        sum += rep.l1_values[k];
        if (rep.l1_values[k] > rep.l1_values[rep.best_index]) {
            rep.best_index = k;
        }
    }
    rep.mean = sum / static_cast<double>(samples);
    if (samples > 1) {
        double ss = 0.0;
        for (double v : rep.l1_values) {
            ss += (v - rep.mean) * (v - rep.mean);
        }
        rep.standard_error = std::sqrt(ss / static_cast<double>(samples - 1) / static_cast<double>(samples));
    }

    // Rebuild the argmax draw from its stream.
    Rng rng = Rng::child(stream_seed, rep.best_index);
    rep.best_coefficients = sample_unit_vector(d, rng);
    rep.best_psi.assign(order, cplx{});
    for (size_t g = 0; g < order; ++g) {
        for (unsigned j = 0; j < d; ++j) {
            rep.best_psi[g] += rep.best_coefficients[j] * basis[j][g];
        }
    }
    return rep;
}

FourthMomentCheck fourth_moment_check(std::span<const double> values) {
    if (values.empty()) {
        fail(ErrorKind::DegenerateInput, "fourth_moment_check: empty input");
    }
    double m1 = 0.0;
    double m2 = 0.0;
    double m4 = 0.0;
    for (double y : values) {
        const double y2 = y * y;
        m1 += std::abs(y);
        m2 += y2;
        m4 += y2 * y2;
    }
    if (m2 == 0.0) {
        fail(ErrorKind::DegenerateInput, "fourth_moment_check: all values are zero");
    }
    const auto n = static_cast<double>(values.size());
    m1 /= n;
    m2 /= n;
    m4 /= n;
    FourthMomentCheck out;
    out.lhs = m1;
    out.rhs = std::pow(m2, 1.5) / std::sqrt(m4);
    out.pass = out.lhs >= out.rhs - 1e-12;
    return out;
}

double collision(const PureState &state) { return kernels::parallel::sum_abs4(state.amplitudes()); }

}  // namespace rfslab
