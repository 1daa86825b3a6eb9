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

#include "rfslab/signs.hpp"

#include <algorithm>
#include <cmath>

namespace rfslab {

namespace {

constexpr double kBreakpointDedup = 1e-15;

double wrap_pi(double phi) {
    double r = std::fmod(phi, kPi);
    if (r < 0.0) {
        r += kPi;
    }
    if (r >= kPi) {
        r = 0.0;
    }
    return r;
}

int8_t sign_at(const cplx &xk, double c, double s) {
    const double re = c * xk.real() - s * xk.imag();
    return re < 0.0 ? int8_t{-1} : int8_t{1};
}

struct Breakpoint {
    double phi;
    std::vector<size_t> members;
};

}  // namespace

double phase_objective(std::span<const cplx> x, double phi) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    double acc = 0.0;
    for (const auto &xk : x) {
        acc += std::abs(c * xk.real() - s * xk.imag());
    }
    return acc;
}

SignSolution best_phase_signs(std::span<const cplx> x) {
    const size_t d = x.size();
    if (d == 0) {
        fail(ErrorKind::DegenerateInput, "best_phase_signs: empty vector");
    }
    double l1 = 0.0;
    std::vector<std::pair<double, size_t>> raw;
    raw.reserve(d);
    for (size_t k = 0; k < d; ++k) {
        l1 += std::abs(x[k]);
        if (x[k] != cplx{}) {
            raw.emplace_back(wrap_pi(kPi / 2 - std::arg(x[k])), k);
        }
    }
    if (raw.empty()) {
        fail(ErrorKind::DegenerateInput, "best_phase_signs: all entries are zero");
    }
    std::sort(raw.begin(), raw.end());

    std::vector<Breakpoint> bps;
    for (const auto &[phi, k] : raw) {
        if (!bps.empty() && phi - bps.back().phi <= kBreakpointDedup) {
            bps.back().members.push_back(k);
        } else {
            bps.push_back({phi, {k}});
        }
    }
    // Coincident at both ends of [0, pi) means the same breakpoint modulo pi.
    if (bps.size() > 1 && bps.front().phi + kPi - bps.back().phi <= kBreakpointDedup) {
        auto &front = bps.front().members;
        front.insert(front.end(), bps.back().members.begin(), bps.back().members.end());
        bps.pop_back();
    }

    // Start the sweep on the widest interval so its midpoint is far from every
    // breakpoint and the initial signs are unambiguous.
    const size_t nb = bps.size();
    {
        size_t widest = 0;
        double width = -1.0;
        for (size_t t = 0; t < nb; ++t) {
            const double w = (t + 1 < nb ? bps[t + 1].phi : bps[0].phi + kPi) - bps[t].phi;
            if (w > width) {
                width = w;
                widest = t;
            }
        }
        for (size_t t = 0; t < widest; ++t) {
            bps[t].phi += kPi;
        }
        std::rotate(bps.begin(), bps.begin() + static_cast<std::ptrdiff_t>(widest), bps.end());
    }
    // Interval t runs from bps[t] to bps[t+1] (the last one wraps to bps[0] + pi).
    auto interval_end = [&](size_t t) { return t + 1 < nb ? bps[t + 1].phi : bps[0].phi + kPi; };

    // Signs on interval 0, from its midpoint.
    std::vector<int8_t> s(d, 1);
    {
        const double mid = 0.5 * (bps[0].phi + interval_end(0));
        const double c = std::cos(mid);
        const double sn = std::sin(mid);
        for (size_t k = 0; k < d; ++k) {
            s[k] = sign_at(x[k], c, sn);
        }
    }
    double coef_a = 0.0;
    double coef_b = 0.0;
    for (size_t k = 0; k < d; ++k) {
        coef_a += s[k] * x[k].real();
        coef_b -= s[k] * x[k].imag();
    }

    double best_phi = bps[0].phi;
    double best_est = -1.0;
    auto consider = [&](double phi, double est) {
        if (est > best_est) {
            best_est = est;
            best_phi = phi;
        }
    };
    for (size_t t = 0; t < nb; ++t) {
        const double lo = bps[t].phi;
        const double hi = interval_end(t);
        // Endpoint value from the interval's own (A, B): g is continuous there.
        consider(lo, std::abs(coef_a * std::cos(lo) + coef_b * std::sin(lo)));
        double crit = std::atan2(coef_b, coef_a);
        // Shift the critical point by multiples of pi into [lo, lo + pi).
        while (crit < lo) {
            crit += kPi;
        }
        while (crit >= lo + kPi) {
            crit -= kPi;
        }
        if (crit > lo && crit < hi) {
            consider(crit, std::abs(coef_a * std::cos(crit) + coef_b * std::sin(crit)));
        }
        // Cross the breakpoint at hi: members of bps[t+1] flip sign.
        const auto &next = bps[(t + 1) % nb].members;
        for (size_t k : next) {
            coef_a -= 2.0 * s[k] * x[k].real();
            coef_b += 2.0 * s[k] * x[k].imag();
            s[k] = static_cast<int8_t>(-s[k]);
        }
    }

    SignSolution out;
    out.phi_star = wrap_pi(best_phi);
    out.l1 = l1;
    out.theta.resize(d);
    const double c = std::cos(out.phi_star);
    const double sn = std::sin(out.phi_star);
    cplx acc = 0.0;
    for (size_t k = 0; k < d; ++k) {
        out.theta[k] = sign_at(x[k], c, sn);
        acc += static_cast<double>(out.theta[k]) * x[k];
    }
    out.value = std::abs(acc);
    out.g_at_phi = phase_objective(x, out.phi_star);
    return out;
}

BruteForceSigns brute_force_signs(std::span<const cplx> x) {
    const size_t d = x.size();
    if (d == 0) {
        fail(ErrorKind::DegenerateInput, "brute_force_signs: empty vector");
    }
    if (d > 20) {
        fail(ErrorKind::Size, "brute_force_signs: d = " + std::to_string(d) + " exceeds 20");
    }
    // Mask bit (d-1-k) set means theta_k = -1, so ascending masks enumerate
    // theta in lexicographic order with +1 before -1.
    BruteForceSigns best;
    best.value = -1.0;
    uint64_t best_mask = 0;
    const uint64_t total = uint64_t{1} << d;
    for (uint64_t mask = 0; mask < total; ++mask) {
        cplx acc = 0.0;
        for (size_t k = 0; k < d; ++k) {
            if ((mask >> (d - 1 - k)) & 1) {
                acc -= x[k];
            } else {
                acc += x[k];
            }
        }
        const double v = std::abs(acc);
        if (v > best.value) {
            best.value = v;
            best_mask = mask;
        }
    }
    best.theta.resize(d);
    for (size_t k = 0; k < d; ++k) {
        best.theta[k] = ((best_mask >> (d - 1 - k)) & 1) ? int8_t{-1} : int8_t{1};
    }
    return best;
}

nlohmann::json to_json(const SignSolution &s) {
    std::vector<int> theta(s.theta.begin(), s.theta.end());
    return {{"phi_star", s.phi_star}, {"theta", theta}, {"value", s.value}, {"l1", s.l1}};
}

}  // namespace rfslab
