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

#include "rfslab/kernels.hpp"

#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rfslab::kernels {

namespace {

inline size_t insert_zero_bits(size_t k, unsigned lo, unsigned hi) {
    // Spread k so that bit positions lo < hi are zero.
    const size_t lo_mask = (size_t{1} << lo) - 1;
    k = ((k & ~lo_mask) << 1) | (k & lo_mask);
    const size_t hi_mask = (size_t{1} << hi) - 1;
    return ((k & ~hi_mask) << 1) | (k & hi_mask);
}

inline void gate_on_group(cplx *amps, const Gate4 &g, size_t base, size_t bit_i, size_t bit_j) {
    const size_t idx[4] = {base, base | bit_j, base | bit_i, base | bit_i | bit_j};
    double re[4];
    double im[4];
    for (int c = 0; c < 4; ++c) {
        re[c] = amps[idx[c]].real();
        im[c] = amps[idx[c]].imag();
    }
    // Plain real arithmetic: std::complex operator* goes through the C99 NaN-recovery path.
    for (int r = 0; r < 4; ++r) {
        double sr = 0.0;
        double si = 0.0;
        for (int c = 0; c < 4; ++c) {
            const double gr = g[4 * r + c].real();
            const double gi = g[4 * r + c].imag();
            sr += gr * re[c] - gi * im[c];
            si += gr * im[c] + gi * re[c];
        }
        amps[idx[r]] = cplx(sr, si);
    }
}

inline unsigned log2_dim(size_t dim) {
    unsigned n = 0;
    while ((size_t{1} << n) < dim) {
        ++n;
    }
    return n;
}

template <typename F>
double block_partial(std::span<const cplx> amps, size_t block, F f) {
    const size_t begin = block * kReduceBlock;
    const size_t end = std::min(amps.size(), begin + kReduceBlock);
    double acc = 0.0;
    for (size_t k = begin; k < end; ++k) {
        acc += f(amps[k]);
    }
    return acc;
}

template <typename F>
double reduce_serial(std::span<const cplx> amps, F f) {
    const size_t blocks = (amps.size() + kReduceBlock - 1) / kReduceBlock;
    double total = 0.0;
    for (size_t b = 0; b < blocks; ++b) {
        total += block_partial(amps, b, f);
    }
    return total;
}

template <typename F>
double reduce_parallel(std::span<const cplx> amps, F f) {
    const size_t blocks = (amps.size() + kReduceBlock - 1) / kReduceBlock;
    if (blocks <= 1) {
        return reduce_serial(amps, f);
    }
    std::vector<double> partial(blocks);
#pragma omp parallel for schedule(static)
    for (long long b = 0; b < static_cast<long long>(blocks); ++b) {
        partial[b] = block_partial(amps, static_cast<size_t>(b), f);
    }
    double total = 0.0;
    for (double p : partial) {
        total += p;
    }
    return total;
}

const auto kAbs = [](const cplx &z) { return std::abs(z); };
const auto kAbs4 = [](const cplx &z) {
    const double p = std::norm(z);
    return p * p;
};
const auto kNorm2 = [](const cplx &z) { return std::norm(z); };

}  // namespace

namespace serial {

void apply_two_qubit(std::span<cplx> amps, const Gate4 &gate, unsigned qi, unsigned qj) {
    const unsigned lo = std::min(qi, qj);
    const unsigned hi = std::max(qi, qj);
    const size_t groups = amps.size() >> 2;
    const size_t bit_i = size_t{1} << qi;
    const size_t bit_j = size_t{1} << qj;
    for (size_t k = 0; k < groups; ++k) {
        gate_on_group(amps.data(), gate, insert_zero_bits(k, lo, hi), bit_i, bit_j);
    }
}

void apply_hadamard_all(std::span<cplx> amps) {
    const unsigned n = log2_dim(amps.size());
    const double s = M_SQRT1_2;
    for (unsigned q = 0; q < n; ++q) {
        const size_t bit = size_t{1} << q;
        for (size_t k = 0; k < amps.size() / 2; ++k) {
            const size_t a = ((k >> q) << (q + 1)) | (k & (bit - 1));
            const size_t b = a | bit;
            const cplx x = amps[a];
            const cplx y = amps[b];
            amps[a] = s * (x + y);
            amps[b] = s * (x - y);
        }
    }
}

double sum_abs(std::span<const cplx> amps) { return reduce_serial(amps, kAbs); }
double sum_abs4(std::span<const cplx> amps) { return reduce_serial(amps, kAbs4); }
double sum_norm2(std::span<const cplx> amps) { return reduce_serial(amps, kNorm2); }

}  // namespace serial

namespace parallel {

void apply_two_qubit(std::span<cplx> amps, const Gate4 &gate, unsigned qi, unsigned qj) {
    const unsigned lo = std::min(qi, qj);
    const unsigned hi = std::max(qi, qj);
    const auto groups = static_cast<long long>(amps.size() >> 2);
    const size_t bit_i = size_t{1} << qi;
    const size_t bit_j = size_t{1} << qj;
    cplx *data = amps.data();
#pragma omp parallel for schedule(static) if (groups >= 1024)
    for (long long k = 0; k < groups; ++k) {
        gate_on_group(data, gate, insert_zero_bits(static_cast<size_t>(k), lo, hi), bit_i, bit_j);
    }
}

void apply_hadamard_all(std::span<cplx> amps) {
    const unsigned n = log2_dim(amps.size());
    const double s = M_SQRT1_2;
    const auto half = static_cast<long long>(amps.size() / 2);
    cplx *data = amps.data();
    for (unsigned q = 0; q < n; ++q) {
        const size_t bit = size_t{1} << q;
#pragma omp parallel for schedule(static) if (half >= 1024)
        for (long long kk = 0; kk < half; ++kk) {
            const auto k = static_cast<size_t>(kk);
            const size_t a = ((k >> q) << (q + 1)) | (k & (bit - 1));
            const size_t b = a | bit;
            const cplx x = data[a];
            const cplx y = data[b];
            data[a] = s * (x + y);
            data[b] = s * (x - y);
        }
    }
}

double sum_abs(std::span<const cplx> amps) { return reduce_parallel(amps, kAbs); }
double sum_abs4(std::span<const cplx> amps) { return reduce_parallel(amps, kAbs4); }
double sum_norm2(std::span<const cplx> amps) { return reduce_parallel(amps, kNorm2); }

}  // namespace parallel

void set_num_threads(int threads) {
#ifdef _OPENMP
    if (threads >= 1) {
        omp_set_num_threads(threads);
    }
#else
    (void)threads;
#endif
}

int num_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace rfslab::kernels
