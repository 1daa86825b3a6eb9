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

#include <cmath>
#include <cstdint>

#include "rfslab/common.hpp"

namespace rfslab {

/// SplitMix64 finalizer (Steele, Lea & Flood). Bijective on 64-bit words.
constexpr uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based SplitMix64 stream.
///
/// The whole library draws randomness from this one generator so that every
/// stochastic result is a pure function of (master seed, task index) on every
/// platform. The standard <random> distributions are deliberately not used:
/// their output is implementation-defined.
///
/// Child streams: `Rng::child(seed, index)` derives an independent stream for
/// task `index`; parallel loops use it so scheduling never changes results.
class Rng {
   public:
    static constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    explicit Rng(uint64_t seed) : state_(seed) {}

    static Rng child(uint64_t seed, uint64_t index) {
        return Rng(mix64(seed ^ mix64(index * kGamma + 0x632BE59BD9B4E019ULL)));
    }

    /// Child stream keyed by the next word of this stream.
    Rng split() { return Rng(mix64(next_u64() ^ 0xD1B54A32D192ED03ULL)); }

    uint64_t next_u64() {
        state_ += kGamma;
        return mix64(state_);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound), unbiased (Lemire's multiply-shift with rejection).
    uint64_t below(uint64_t bound) {
        if (bound == 0) {
            fail(ErrorKind::InvalidConfig, "Rng::below: bound must be positive");
        }
        uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * bound;
        auto low = static_cast<uint64_t>(m);
        if (low < bound) {
            const uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * bound;
                low = static_cast<uint64_t>(m);
            }
        }
        return static_cast<uint64_t>(m >> 64);
    }

    /// Standard normal via the Box-Muller transform; the second variate is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) {
            u1 = uniform();
        }
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * kPi * u2);
        has_spare_ = true;
        return r * std::cos(2.0 * kPi * u2);
    }

    /// Complex Gaussian with E|z|^2 = 1.
    cplx complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re * M_SQRT1_2, im * M_SQRT1_2};
    }

    uint64_t state() const { return state_; }

   private:
    uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace rfslab
