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

#include "rfslab/paulichain.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/rational.hpp>
#include <cmath>

#include "rfslab/circuit.hpp"
#include "rfslab/dispersion.hpp"

namespace rfslab {

PauliString::PauliString(unsigned n, uint64_t packed) : n_(n), packed_(packed) {
    if (n == 0 || n > kMaxSites) {
        fail(ErrorKind::Size, "PauliString: 1 <= n <= 32 required");
    }
    if (n < kMaxSites && (packed >> (2 * n)) != 0) {
        fail(ErrorKind::InvalidConfig, "PauliString: codes beyond site n-1");
    }
}

PauliString PauliString::from_codes(const std::vector<unsigned> &codes) {
    PauliString p(static_cast<unsigned>(codes.size()));
    for (unsigned k = 0; k < codes.size(); ++k) {
        p.set(k, codes[k]);
    }
    return p;
}

PauliString PauliString::parse(const std::string &text) {
    std::vector<unsigned> codes;
    for (char c : text) {
        const auto pos = std::string_view("IZXY").find(c);
        if (pos == std::string_view::npos) {
            fail(ErrorKind::InvalidConfig, std::string("PauliString: bad symbol ") + c);
        }
        codes.push_back(static_cast<unsigned>(pos));
    }
    return from_codes(codes);
}

void PauliString::set(unsigned k, unsigned code) {
    if (k >= n_ || code > 3) {
        fail(ErrorKind::InvalidConfig, "PauliString::set out of range");
    }
    packed_ = (packed_ & ~(uint64_t{3} << (2 * k))) | (uint64_t{code} << (2 * k));
}

unsigned PauliString::weight() const {
    unsigned w = 0;
    for (unsigned k = 0; k < n_; ++k) {
        w += get(k) != 0;
    }
    return w;
}

std::string PauliString::str() const {
    std::string s(n_, 'I');
    for (unsigned k = 0; k < n_; ++k) {
        s[k] = "IZXY"[get(k)];
    }
    return s;
}

PauliString chain_step(const PauliString &p, Rng &rng) {
    const unsigned n = p.size();
    if (n < 2) {
        fail(ErrorKind::InvalidConfig, "chain_step: n >= 2 required");
    }
    // Uniform unordered pair, same enumeration as circuit placement.
    uint64_t r = rng.below(uint64_t{n} * (n - 1) / 2);
    unsigned i = 0;
    while (r >= n - 1 - i) {
        r -= n - 1 - i;
        ++i;
    }
    const unsigned j = i + 1 + static_cast<unsigned>(r);
    if (p.get(i) == 0 && p.get(j) == 0) {
        return p;
    }
    const auto v = static_cast<unsigned>(rng.below(15) + 1);
    PauliString q = p;
    q.set(i, v & 3);
    q.set(j, v >> 2);
    return q;
}

namespace {

using Rational = boost::rational<int64_t>;

int64_t choose2(int64_t k) { return k * (k - 1) / 2; }

template <typename T>
std::vector<T> assemble_lumped(unsigned n, T zero, T one) {
    std::vector<T> p(size_t{n} * n, zero);
    const T pairs = T(choose2(n));
    const T six = T(6) / T(15);
    const T nine = T(9) / T(15);
    for (unsigned w = 1; w <= n; ++w) {
        const T both_zero = T(choose2(n - w)) / pairs;
        const T one_nonzero = T(int64_t{w} * (n - w)) / pairs;
        const T both_nonzero = T(choose2(w)) / pairs;
        auto at = [&](unsigned w2) -> T & { return p[(w - 1) * n + (w2 - 1)]; };
        at(w) += both_zero;
        at(w) += one_nonzero * six;
        if (w < n) {
            at(w + 1) += one_nonzero * nine;
        }
        if (w > 1) {
            at(w - 1) += both_nonzero * six;
        }
        at(w) += both_nonzero * nine;
    }
    (void)one;
    return p;
}

std::vector<double> stationary_weights(unsigned n) {
    // C(n,w) 3^w / (4^n - 1), exact ratios of doubles up to n = 64.
    std::vector<double> pi(n);
    double binom = 1.0;
    for (unsigned w = 1; w <= n; ++w) {
        binom = binom * (n - w + 1) / w;
        pi[w - 1] = binom * std::pow(3.0, w);
    }
    const double total = std::pow(4.0, n) - 1.0;
    for (auto &v : pi) {
        v /= total;
    }
    return pi;
}

}  // namespace

double WeightChain::max_row_sum_error() const {
    double worst = 0.0;
    for (unsigned r = 0; r < n; ++r) {
        double s = 0.0;
        for (unsigned c = 0; c < n; ++c) {
            s += transition[r * n + c];
        }
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

double WeightChain::max_detailed_balance_error() const {
    double worst = 0.0;
    for (unsigned a = 0; a < n; ++a) {
        for (unsigned b = 0; b < n; ++b) {
            worst = std::max(worst, std::abs(stationary[a] * transition[a * n + b] - stationary[b] * transition[b * n + a]));
        }
    }
    return worst;
}

WeightChain lumped_matrix(unsigned n) {
    if (n < 2 || n > 64) {
        fail(ErrorKind::InvalidConfig, "lumped_matrix: 2 <= n <= 64 required");
    }
    WeightChain chain;
    chain.n = n;
    chain.stationary = stationary_weights(n);
    if (n <= 8) {
        const auto exact = assemble_lumped<Rational>(n, Rational(0), Rational(1));
        chain.transition.resize(exact.size());
        for (size_t k = 0; k < exact.size(); ++k) {
            chain.transition[k] = boost::rational_cast<double>(exact[k]);
        }
        chain.rational = true;
    } else {
        chain.transition = assemble_lumped<double>(n, 0.0, 1.0);
    }
    return chain;
}

RationalChecks lumped_rational_checks(unsigned n) {
    if (n < 2 || n > 8) {
        fail(ErrorKind::InvalidConfig, "lumped_rational_checks: 2 <= n <= 8 required");
    }
    const auto p = assemble_lumped<Rational>(n, Rational(0), Rational(1));
    // pi(w) up to the common factor 1/(4^n - 1).
    std::vector<Rational> pi(n);
    int64_t binom = 1;
    int64_t pow3 = 1;
    for (unsigned w = 1; w <= n; ++w) {
        binom = binom * (n - w + 1) / w;
        pow3 *= 3;
        pi[w - 1] = Rational(binom * pow3);
    }
    RationalChecks out;
    out.rows_sum_to_one = true;
    out.detailed_balance = true;
    for (unsigned a = 0; a < n; ++a) {
        Rational s(0);
        for (unsigned b = 0; b < n; ++b) {
            s += p[a * n + b];
            if (pi[a] * p[a * n + b] != pi[b] * p[b * n + a]) {
                out.detailed_balance = false;
            }
            out.entries.push_back(std::to_string(p[a * n + b].numerator()) + "/" +
                                  std::to_string(p[a * n + b].denominator()));
        }
        if (s != Rational(1)) {
            out.rows_sum_to_one = false;
        }
    }
    return out;
}

double exact_gap(unsigned n) {
    if (n < 2 || n > 64) {
        fail(ErrorKind::InvalidConfig, "exact_gap: 2 <= n <= 64 required");
    }
    if (n == 2) {
        // Two states: the eigenvalues are 1 and trace - 1, taken in exact arithmetic.
        const auto p = assemble_lumped<Rational>(2, Rational(0), Rational(1));
        return boost::rational_cast<double>(Rational(1) - (p[0] + p[3] - Rational(1)));
    }
    const WeightChain chain = lumped_matrix(n);
    Eigen::MatrixXd s(n, n);
    for (unsigned a = 0; a < n; ++a) {
        for (unsigned b = 0; b < n; ++b) {
            s(a, b) = std::sqrt(chain.stationary[a] / chain.stationary[b]) * chain.transition[a * n + b];
        }
    }
    // Reversibility makes s symmetric up to rounding; symmetrize before solving.
    const Eigen::MatrixXd sym = 0.5 * (s + s.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        fail(ErrorKind::DegenerateInput, "exact_gap: eigensolver failed");
    }
    const auto &ev = solver.eigenvalues();  // ascending
    return 1.0 - ev(static_cast<Eigen::Index>(n) - 2);
}

std::vector<GapRow> gap_table(const std::vector<unsigned> &ns) {
    std::vector<GapRow> rows;
    for (unsigned n : ns) {
        const double g = exact_gap(n);
        rows.push_back({n, g, g * n, g * n * n});
    }
    return rows;
}

std::vector<double> full_chain_matrix(unsigned n) {
    if (n < 2 || n > 4) {
        fail(ErrorKind::Size, "full_chain_matrix: 2 <= n <= 4 required");
    }
    const size_t states = size_t{1} << (2 * n);
    std::vector<double> m(states * states, 0.0);
    const double pair_prob = 1.0 / (n * (n - 1) / 2.0);
    for (size_t s = 0; s < states; ++s) {
        const PauliString p(n, s);
        for (unsigned i = 0; i < n; ++i) {
            for (unsigned j = i + 1; j < n; ++j) {
                if (p.get(i) == 0 && p.get(j) == 0) {
                    m[s * states + s] += pair_prob;
                    continue;
                }
                for (unsigned v = 1; v < 16; ++v) {
                    PauliString q = p;
                    q.set(i, v & 3);
                    q.set(j, v >> 2);
                    m[s * states + q.packed()] += pair_prob / 15.0;
                }
            }
        }
    }
    return m;
}

std::vector<double> evolve_distribution(const std::vector<double> &matrix, std::vector<double> dist, unsigned t) {
    const size_t d = dist.size();
    if (matrix.size() != d * d) {
        fail(ErrorKind::InvalidConfig, "evolve_distribution: size mismatch");
    }
    std::vector<double> next(d);
    for (unsigned step = 0; step < t; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        for (size_t a = 0; a < d; ++a) {
            if (dist[a] == 0.0) {
                continue;
            }
            for (size_t b = 0; b < d; ++b) {
                next[b] += dist[a] * matrix[a * d + b];
            }
        }
        dist.swap(next);
    }
    return dist;
}

double pauli_expectation(const PureState &psi, const PauliString &p) {
    const unsigned n = psi.num_qubits();
    if (p.size() != n) {
        fail(ErrorKind::InvalidConfig, "pauli_expectation: size mismatch");
    }
    uint64_t flip = 0;
    uint64_t zmask = 0;
    unsigned ys = 0;
    for (unsigned k = 0; k < n; ++k) {
        const unsigned c = p.get(k);
        if (c == 2 || c == 3) {
            flip |= uint64_t{1} << k;
        }
        if (c == 1 || c == 3) {
            zmask |= uint64_t{1} << k;
        }
        ys += c == 3;
    }
    // sigma_p|x> = i^{ys} (-1)^{popcount(x & zmask)} |x ^ flip>, using Y = i X Z.
    const auto amps = psi.amplitudes();
    cplx acc = 0.0;
    for (uint64_t x = 0; x < amps.size(); ++x) {
        const double sign = (std::popcount(x & zmask) & 1) ? -1.0 : 1.0;
        acc += std::conj(amps[x ^ flip]) * amps[x] * sign;
    }
    static const cplx iy[4] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
    return (acc * iy[ys & 3]).real();
}

std::vector<double> pauli_weights(const PureState &psi) {
    const unsigned n = psi.num_qubits();
    if (n > 6) {
        fail(ErrorKind::Size, "pauli_weights: n <= 6 required");
    }
    const size_t states = size_t{1} << (2 * n);
    std::vector<double> g(states);
    const double scale = std::exp2(-static_cast<double>(n));
    for (size_t s = 0; s < states; ++s) {
        const double e = pauli_expectation(psi, PauliString(n, s));
        g[s] = e * e * scale;
    }
    return g;
}

double tv_distance(const std::vector<double> &a, const std::vector<double> &b) {
    if (a.size() != b.size()) {
        fail(ErrorKind::InvalidConfig, "tv_distance: size mismatch");
    }
    double s = 0.0;
    for (size_t k = 0; k < a.size(); ++k) {
        s += std::abs(a[k] - b[k]);
    }
    return 0.5 * s;
}

MomentComparison moment_compare(unsigned n, unsigned t, size_t circuits, uint64_t seed) {
    if (n < 2 || n > 4) {
        fail(ErrorKind::Size, "moment_compare: 2 <= n <= 4 required");
    }
    if (t > 50 || circuits == 0) {
        fail(ErrorKind::InvalidConfig, "moment_compare: t <= 50 and at least one circuit");
    }
    const size_t states = size_t{1} << (2 * n);
    std::vector<std::vector<double>> per(circuits);
#pragma omp parallel for schedule(dynamic, 8)
    for (long long c = 0; c < static_cast<long long>(circuits); ++c) {
        const RandomCircuit rc = RandomCircuit::generate(n, t, Rng::child(seed, static_cast<uint64_t>(c)).next_u64());
        per[static_cast<size_t>(c)] = pauli_weights(rc.evolve_basis(0));
    }
    MomentComparison out;
    out.n = n;
    out.t = t;
    out.circuits = circuits;
    out.circuit_mean.assign(states, 0.0);
    for (const auto &g : per) {
        for (size_t s = 0; s < states; ++s) {
            out.circuit_mean[s] += g[s];
        }
    }
    for (auto &v : out.circuit_mean) {
        v /= static_cast<double>(circuits);
    }
    std::vector<double> init(states, 0.0);
    for (size_t s = 0; s < states; ++s) {
        bool iz = true;
        for (unsigned k = 0; k < n; ++k) {
            iz = iz && ((s >> (2 * k)) & 3) <= 1;
        }
        if (iz) {
            init[s] = std::exp2(-static_cast<double>(n));
        }
    }
    out.chain = evolve_distribution(full_chain_matrix(n), init, t);
    out.tv = tv_distance(out.circuit_mean, out.chain);
    return out;
}

std::vector<double> walker_distribution(const PauliString &start, unsigned t, size_t walkers, uint64_t seed) {
    const unsigned n = start.size();
    if (n > 8) {
        fail(ErrorKind::Size, "walker_distribution: n <= 8 required");
    }
    std::vector<uint64_t> final_state(walkers);
#pragma omp parallel for schedule(static)
    for (long long w = 0; w < static_cast<long long>(walkers); ++w) {
        Rng rng = Rng::child(seed, static_cast<uint64_t>(w));
        PauliString p = start;
        for (unsigned s = 0; s < t; ++s) {
            p = chain_step(p, rng);
        }
        final_state[static_cast<size_t>(w)] = p.packed();
    }
    std::vector<double> hist(size_t{1} << (2 * n), 0.0);
    for (uint64_t s : final_state) {
        hist[s] += 1.0;
    }
    for (auto &h : hist) {
        h /= static_cast<double>(walkers);
    }
    return hist;
}

namespace {

using Mat4 = std::array<cplx, 16>;

const std::array<std::array<cplx, 4>, 4> kPauli1 = {{
    {1.0, 0.0, 0.0, 1.0},
    {1.0, 0.0, 0.0, -1.0},
    {0.0, 1.0, 1.0, 0.0},
    {0.0, cplx(0, -1), cplx(0, 1), 0.0},
}};

Mat4 pauli2(unsigned p) {
    const auto &a = kPauli1[p >> 2];
    const auto &b = kPauli1[p & 3];
    Mat4 m{};
    for (int r1 = 0; r1 < 2; ++r1) {
        for (int r2 = 0; r2 < 2; ++r2) {
            for (int c1 = 0; c1 < 2; ++c1) {
                for (int c2 = 0; c2 < 2; ++c2) {
                    m[(2 * r1 + r2) * 4 + 2 * c1 + c2] = a[2 * r1 + c1] * b[2 * r2 + c2];
                }
            }
        }
    }
    return m;
}

Mat4 mul(const Mat4 &a, const Mat4 &b) {
    Mat4 m{};
    for (int r = 0; r < 4; ++r) {
        for (int k = 0; k < 4; ++k) {
            for (int c = 0; c < 4; ++c) {
                m[r * 4 + c] += a[r * 4 + k] * b[k * 4 + c];
            }
        }
    }
    return m;
}

}  // namespace

std::array<double, 256> ad_matrix(const TwoQubitGate &w, double *max_imag) {
    static const std::array<Mat4, 16> paulis = [] {
        std::array<Mat4, 16> ps;
        for (unsigned p = 0; p < 16; ++p) {
            ps[p] = pauli2(p);
        }
        return ps;
    }();
    Mat4 wm;
    Mat4 wd;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            wm[r * 4 + c] = w(r, c);
            wd[c * 4 + r] = std::conj(w(r, c));
        }
    }
    std::array<double, 256> ad{};
    double worst = 0.0;
    for (unsigned q = 0; q < 16; ++q) {
        const Mat4 conj_q = mul(mul(wm, paulis[q]), wd);
        for (unsigned p = 0; p < 16; ++p) {
            // tr(sigma_p M) = sum_{r,c} sigma_p[r][c] M[c][r]
            cplx tr = 0.0;
            for (int r = 0; r < 4; ++r) {
                for (int c = 0; c < 4; ++c) {
                    tr += paulis[p][r * 4 + c] * conj_q[c * 4 + r];
                }
            }
            tr /= 4.0;
            ad[p * 16 + q] = tr.real();
            worst = std::max(worst, std::abs(tr.imag()));
        }
    }
    if (max_imag) {
        *max_imag = worst;
    }
    return ad;
}

Ad2Result verify_mean_ad2(size_t samples, uint64_t seed) {
    if (samples < 100) {
        fail(ErrorKind::InvalidConfig, "verify_mean_ad2: at least 100 samples");
    }
    constexpr size_t kDim = 256;
    constexpr size_t kBlock = 256;
    const size_t blocks = (samples + kBlock - 1) / kBlock;
    std::vector<std::vector<double>> partial(blocks);
    std::vector<double> orth(blocks, 0.0);
    std::vector<double> imag(blocks, 0.0);
    std::vector<double> unital(blocks, 0.0);

    // Fixed sample blocks folded in block order: any thread count gives the same sum.
#pragma omp parallel for schedule(dynamic, 1)
    for (long long bb = 0; bb < static_cast<long long>(blocks); ++bb) {
        const auto b = static_cast<size_t>(bb);
        std::vector<double> acc(kDim * kDim, 0.0);
        const size_t lo = b * kBlock;
        const size_t hi = std::min(samples, lo + kBlock);
        for (size_t s = lo; s < hi; ++s) {
            Rng rng = Rng::child(seed, s);
            const TwoQubitGate w = sample_haar_two_qubit(rng);
            double mi = 0.0;
            const auto ad = ad_matrix(w, &mi);
            imag[b] = std::max(imag[b], mi);
            for (unsigned r = 0; r < 16; ++r) {
                for (unsigned c = 0; c < 16; ++c) {
                    double dot = 0.0;
                    for (unsigned k = 0; k < 16; ++k) {
                        dot += ad[k * 16 + r] * ad[k * 16 + c];
                    }
                    orth[b] = std::max(orth[b], std::abs(dot - (r == c ? 1.0 : 0.0)));
                }
                const double e = r == 0 ? 1.0 : 0.0;
                unital[b] = std::max({unital[b], std::abs(ad[r] - e), std::abs(ad[r * 16] - e)});
            }
            // (ad (x) ad)[(p,p'),(q,q')] = ad[p][q] ad[p'][q']
            for (unsigned p = 0; p < 16; ++p) {
                for (unsigned q = 0; q < 16; ++q) {
                    const double apq = ad[p * 16 + q];
                    double *row = &acc[(p * 16) * kDim + q * 16];
                    for (unsigned p2 = 0; p2 < 16; ++p2) {
                        const double *src = &ad[p2 * 16];
                        double *dst = row + p2 * kDim;
                        for (unsigned q2 = 0; q2 < 16; ++q2) {
                            dst[q2] += apq * src[q2];
                        }
                    }
                }
            }
        }
        partial[b] = std::move(acc);
    }
    std::vector<double> mean(kDim * kDim, 0.0);
    Ad2Result out;
    out.samples = samples;
    for (size_t b = 0; b < blocks; ++b) {
        for (size_t k = 0; k < mean.size(); ++k) {
            mean[k] += partial[b][k];
        }
        out.max_orthogonality_error = std::max(out.max_orthogonality_error, orth[b]);
        out.max_imag = std::max(out.max_imag, imag[b]);
        out.max_unital_error = std::max(out.max_unital_error, unital[b]);
    }
    double dist2 = 0.0;
    for (size_t r = 0; r < kDim; ++r) {
        const unsigned p = static_cast<unsigned>(r / 16);
        const unsigned p2 = static_cast<unsigned>(r % 16);
        for (size_t c = 0; c < kDim; ++c) {
            const unsigned q = static_cast<unsigned>(c / 16);
            const unsigned q2 = static_cast<unsigned>(c % 16);
            double target = 0.0;
            if (r == 0 && c == 0) {
                target = 1.0;
            } else if (p == p2 && q == q2 && p != 0 && q != 0) {
                target = 1.0 / 15.0;
            }
            const double diff = mean[r * kDim + c] / static_cast<double>(samples) - target;
            dist2 += diff * diff;
        }
    }
    out.frobenius = std::sqrt(dist2);
    out.noise_floor = std::sqrt(254.0 / static_cast<double>(samples));
    return out;
}

QtStatistics q_t_statistics(unsigned n, unsigned t, size_t circuits, uint64_t seed, bool random_a) {
    if (n < 2 || n > 12) {
        fail(ErrorKind::InvalidConfig, "q_t_statistics: 2 <= n <= 12 required");
    }
    if (circuits == 0) {
        fail(ErrorKind::InvalidConfig, "q_t_statistics: at least one circuit");
    }
    QtStatistics out;
    out.n = n;
    out.t = t;
    out.values.resize(circuits);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long c = 0; c < static_cast<long long>(circuits); ++c) {
        Rng rng = Rng::child(seed, static_cast<uint64_t>(c));
        const RandomCircuit rc = RandomCircuit::generate(n, t, rng.next_u64());
        const uint64_t a = random_a ? rng.below(uint64_t{1} << n) : 0;
        out.values[static_cast<size_t>(c)] = collision(rc.evolve_basis(a));
    }
    double sum = 0.0;
    for (double v : out.values) {
        sum += v;
    }
    const double nc = static_cast<double>(circuits);
    out.mean = sum / nc;
    double ss = 0.0;
    for (double v : out.values) {
        ss += (v - out.mean) * (v - out.mean);
    }
    out.standard_error = circuits > 1 ? std::sqrt(ss / (nc - 1) / nc) : 0.0;
    return out;
}

MarkovTail markov_tail(unsigned n, unsigned t, size_t circuits, double beta, uint64_t seed) {
    if (!(beta > 0.0 && beta <= 1.0)) {
        fail(ErrorKind::InvalidConfig, "markov_tail: 0 < beta <= 1 required");
    }
    if (n < 2 || n > 12 || circuits == 0) {
        fail(ErrorKind::InvalidConfig, "markov_tail: 2 <= n <= 12 and at least one circuit");
    }
    const size_t dim = size_t{1} << n;
    std::vector<double> q(circuits * dim);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long c = 0; c < static_cast<long long>(circuits); ++c) {
        Rng rng = Rng::child(seed, static_cast<uint64_t>(c));
        const RandomCircuit rc = RandomCircuit::generate(n, t, rng.next_u64());
        for (size_t a = 0; a < dim; ++a) {
            q[static_cast<size_t>(c) * dim + a] = kernels::serial::sum_abs4(rc.evolve_basis(a).amplitudes());
        }
    }
    MarkovTail out;
    out.beta = beta;
    out.pairs = q.size();
    out.threshold = std::exp2(-static_cast<double>(n)) / (beta * beta);
    size_t bad = 0;
    double sum = 0.0;
    for (double v : q) {
        sum += v;
        bad += v >= out.threshold;
    }
    out.mean_q = sum / static_cast<double>(q.size());
    out.bad_fraction = static_cast<double>(bad) / static_cast<double>(q.size());
    out.markov_bound = out.mean_q * static_cast<double>(dim) * beta * beta;
    return out;
}

}  // namespace rfslab
