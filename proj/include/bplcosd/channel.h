// Copyright 2026 The bplcosd Authors
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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "bplcosd/codes.h"
#include "bplcosd/gf2.h"
#include "bplcosd/pauli.h"

namespace bplcosd {

/// Magnitude bound (nats) for every LLR produced or passed around.
inline constexpr double LLR_MAX = 50.0;

inline double clamp_llr(double v, double bound = LLR_MAX) {
    return std::clamp(v, -bound, bound);
}

/// Depolarizing rate p on the qubits, bit-flip rate q on each measured syndrome bit.
struct NoiseModel {
    double p = 0;
    double q = 0;

    void validate() const {
        if (!(p >= 0 && p <= 1) || !(q >= 0 && q <= 1)) {
            throw std::invalid_argument("NoiseModel: probabilities must lie in [0, 1]");
        }
    }
};

/// Per-trial generator. Every trial owns one, seeded from (master seed, point, trial) through
/// std::seed_seq, whose mixing algorithm is fixed by the standard, so draws do not depend on
/// which thread runs the trial.
using TrialRng = std::mt19937_64;

inline TrialRng make_trial_rng(uint64_t master_seed, uint64_t point_index, uint64_t trial_index) {
    std::seed_seq seq{
        static_cast<uint32_t>(master_seed),
        static_cast<uint32_t>(master_seed >> 32),
        static_cast<uint32_t>(point_index),
        static_cast<uint32_t>(point_index >> 32),
        static_cast<uint32_t>(trial_index),
        static_cast<uint32_t>(trial_index >> 32),
    };
    return TrialRng(seq);
}

/// Uniform double in [0, 1) from the top 53 bits; avoids std::uniform_real_distribution, whose
/// output is implementation-defined.
inline double uniform01(TrialRng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// I.i.d. depolarizing noise: I with probability 1-p, X/Y/Z each with p/3.
inline PauliVector sample_error(size_t n, double p, TrialRng& rng) {
    PauliVector e(n);
    for (size_t j = 0; j < n; j++) {
        double u = uniform01(rng);
        if (u < p) {
            double third = u * 3;
            e.set(j, third < p ? Pauli::X : third < 2 * p ? Pauli::Y : Pauli::Z);
        }
    }
    return e;
}
inline PauliVector sample_error(const StabilizerCode& code, double p, TrialRng& rng) {
    return sample_error(code.n, p, rng);
}

struct SyndromeSample {
    BitVec sigma_true;
    BitVec z;

    BitVec syndrome_error() const {
        return sigma_true ^ z;
    }
};

inline SyndromeSample measure_syndrome(const StabilizerCode& code, const PauliVector& e, double q, TrialRng& rng) {
    if (e.size() != code.n) {
        throw std::invalid_argument("measure_syndrome: error length does not match code");
    }
    SyndromeSample s;
    s.sigma_true = symplectic_syndrome(code.h, e);
    s.z = s.sigma_true;
    for (size_t m = 0; m < s.z.size(); m++) {
        if (uniform01(rng) < q) {
            s.z.flip(m);
        }
    }
    return s;
}

/// LLR triple relative to I: (ln p_I/p_X, ln p_I/p_Y, ln p_I/p_Z).
using LlrTriple = std::array<double, 3>;

inline constexpr size_t triple_index(Pauli p) {
    // X -> 0, Y -> 1, Z -> 2
    return p == Pauli::X ? 0 : p == Pauli::Y ? 1 : 2;
}

/// Soft inputs for one decode: channel triples per qubit, one LLR per observed syndrome bit.
struct LlrState {
    std::vector<LlrTriple> channel;
    std::vector<double> syndrome;
};

inline double depolarizing_llr(double p) {
    return clamp_llr(std::log((1 - p) / (p / 3)));
}

inline double syndrome_prior_llr(double q) {
    return clamp_llr(std::log((1 - q) / q));
}

/// Channel triples ln((1-p)/(p/3)) on every qubit and syndrome LLRs (1 - 2 z_m) ln((1-q)/q),
/// all clamped to +-LLR_MAX so p or q at 0 or 1 stays finite.
inline LlrState init_llrs(size_t n, const NoiseModel& noise, const BitVec& z) {
    noise.validate();
    double t = depolarizing_llr(noise.p);
    double s = syndrome_prior_llr(noise.q);
    LlrState out;
    out.channel.assign(n, LlrTriple{t, t, t});
    out.syndrome.resize(z.size());
    for (size_t m = 0; m < z.size(); m++) {
        out.syndrome[m] = z.get(m) ? -s : s;
    }
    return out;
}
inline LlrState init_llrs(const StabilizerCode& code, const NoiseModel& noise, const BitVec& z) {
    if (z.size() != code.num_checks()) {
        throw std::invalid_argument("init_llrs: syndrome length does not match code");
    }
    return init_llrs(code.n, noise, z);
}

}  // namespace bplcosd
