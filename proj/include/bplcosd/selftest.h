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

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bplcosd/codes.h"
#include "bplcosd/gf2.h"
#include "bplcosd/lcosd.h"
#include "bplcosd/pauli.h"
#include "bplcosd/pipeline.h"

namespace bplcosd {

struct SelftestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

using Marginalizer = std::function<Marginals(std::span<const LlrTriple>)>;

namespace selftest {

inline SelftestCheck check(std::string name, bool ok, std::string detail = "") {
    return SelftestCheck{std::move(name), ok, std::move(detail)};
}

/// Binary form of the [[5,1,3]] checks, X part then Z part.
inline SelftestCheck five_qubit_matrix() {
    BitMatrix expected = BitMatrix::from_rows({
        "10010 01100",
        "01001 00110",
        "10100 00011",
        "01010 10001",
    });
    StabilizerCode code = five_qubit_code();
    return check("five-qubit parity-check matrix", code.h == expected && code.k == 1);
}

/// [7,4,3] Hamming code with r = [-2, 3, 4, -6, 7, 10, 14], delta = 1, l_max = 3.
inline std::vector<SelftestCheck> hamming_lcosd() {
    std::vector<SelftestCheck> out;
    BitMatrix h = BitMatrix::from_rows({"1010101", "0110011", "0001111"});
    std::vector<double> r = {-2, 3, 4, -6, 7, 10, 14};
    std::vector<double> rel(r.size());
    for (size_t i = 0; i < r.size(); i++) {
        rel[i] = std::abs(r[i]);
    }
    LcosdWorkspace ws = select_mris(h, rel, 1);
    out.push_back(check("hamming MRIS", ws.mris_mask == BitVec::from_string("0011111"), ws.mris_mask.str()));
    bool constraint_ok = ws.constraint_rows.size() == 1 && ws.constraint_rows[0] == BitVec::from_string("0001111");
    out.push_back(check("hamming local constraint", constraint_ok));

    std::vector<Candidate> list = enumerate_candidates(ws, r, 3);
    const std::array<const char*, 3> patterns = {"00000", "01100", "10000"};
    const std::array<const char*, 3> codewords = {"0000000", "1001100", "1110000"};
    bool list_ok = list.size() == 3;
    std::ostringstream got;
    for (size_t i = 0; list_ok && i < 3; i++) {
        BitVec tail = list[i].pattern.slice(2, 5);
        got << tail.str() << ' ';
        list_ok = tail == BitVec::from_string(patterns[i]) && reencode(ws, list[i].pattern) == BitVec::from_string(codewords[i]);
    }
    out.push_back(check("hamming candidate list", list_ok, got.str()));

    LcosdResult res = lcosd_decode(h, r, LcosdConfig{1, 3});
    out.push_back(check(
        "hamming winner",
        res.codeword == BitVec::from_string("1001100") && std::abs(res.quality - (-1.0)) < 1e-12,
        res.codeword.str()));
    return out;
}

inline std::vector<LlrTriple> concatenation_lambda() {
    return {LlrTriple{2, 1, 2}, LlrTriple{0, -3, -3}, LlrTriple{4, 4, 4}, LlrTriple{0, 0, 0}, LlrTriple{4, 1, 1}};
}

/// Printed base-10 marginals scaled to nats, tolerance 0.01 printed units.
inline SelftestCheck marginals(const Marginalizer& marginalizer) {
    const double ln10 = std::log(10.0);
    const std::array<double, 5> want_x = {0.35, 0, 1.44, 0, 0.55};
    const std::array<double, 5> want_z = {0.35, -1.30, 1.44, 0, 0.14};
    std::vector<LlrTriple> lambda = concatenation_lambda();
    Marginals m = marginalizer(lambda);
    bool ok = m.lambda_x.size() == 5 && m.lambda_z.size() == 5;
    std::ostringstream got;
    for (size_t j = 0; ok && j < 5; j++) {
        got << m.lambda_x[j] / ln10 << '/' << m.lambda_z[j] / ln10 << ' ';
        ok = std::abs(m.lambda_x[j] - want_x[j] * ln10) <= 0.01 * ln10 &&
             std::abs(m.lambda_z[j] - want_z[j] * ln10) <= 0.01 * ln10;
    }
    return check("marginal LLRs", ok, got.str());
}

inline std::vector<SelftestCheck> concatenation(const Marginalizer& marginalizer) {
    std::vector<SelftestCheck> out;
    const double ln10 = std::log(10.0);
    std::vector<LlrTriple> lambda = concatenation_lambda();
    Marginals m = marginalizer(lambda);
    std::vector<double> syn = {-4, 1, 3, -5};
    std::vector<double> v = concatenate(m.lambda_z, m.lambda_x, syn, 1.0);
    const std::array<double, 10> printed = {0.35, -1.30, 1.44, 0, 0.14, 0.35, 0, 1.44, 0, 0.55};
    bool ok = v.size() == 14;
    for (size_t i = 0; ok && i < 10; i++) {
        ok = std::abs(v[i] - printed[i] * ln10) <= 0.01 * ln10;
    }
    for (size_t i = 0; ok && i < 4; i++) {
        ok = v[10 + i] == syn[i];
    }
    out.push_back(check("virtual LLR vector", ok));

    BitMatrix expected = BitMatrix::from_rows({
        "10010 01100 1000",
        "01001 00110 0100",
        "10100 00011 0010",
        "01010 10001 0001",
    });
    out.push_back(check("extended parity-check matrix", extend_parity(five_qubit_code().h) == expected));
    return out;
}

inline std::vector<SelftestCheck> extraction() {
    std::vector<SelftestCheck> out;
    auto [e, sigma] = extract(BitVec::from_string("01000 01000 | 1101"), 5);
    out.push_back(check(
        "virtual codeword extraction", e == PauliVector::from_string("IYIII") && sigma == BitVec::from_string("1101"),
        e.str() + " " + sigma.str()));
    StabilizerCode code = five_qubit_code();
    out.push_back(check(
        "extracted syndrome matches", symplectic_syndrome(code.h, e) == sigma,
        symplectic_syndrome(code.h, e).str()));
    return out;
}

/// Random null-space vectors of (H | I) always extract to a consistent (e, sigma).
inline SelftestCheck null_space_extraction(const StabilizerCode& code, size_t samples, uint64_t seed) {
    BitMatrix ext = extend_parity(code.h);
    std::vector<BitVec> basis = nullspace_basis(ext);
    std::mt19937_64 rng(seed);
    size_t failures = 0;
    for (size_t s = 0; s < samples; s++) {
        BitVec c(ext.cols());
        for (const BitVec& b : basis) {
            if (rng() & 1) {
                c ^= b;
            }
        }
        auto [e, sigma] = extract(c, code.n);
        if (symplectic_syndrome(code.h, e) != sigma) {
            failures++;
        }
    }
    return check(
        "null-space extraction n=" + std::to_string(code.n), failures == 0,
        std::to_string(failures) + " failures in " + std::to_string(samples));
}

}  // namespace selftest

inline std::vector<SelftestCheck> run_selftest(size_t samples = 1000, const Marginalizer& marginalizer = nullptr) {
    Marginalizer marg = marginalizer ? marginalizer : Marginalizer([](std::span<const LlrTriple> l) {
        return marginalize(l);
    });
    std::vector<SelftestCheck> out;
    auto append = [&](std::vector<SelftestCheck> more) {
        out.insert(out.end(), more.begin(), more.end());
    };
    out.push_back(selftest::five_qubit_matrix());
    append(selftest::hamming_lcosd());
    out.push_back(selftest::marginals(marg));
    append(selftest::concatenation(marg));
    append(selftest::extraction());
    out.push_back(selftest::null_space_extraction(five_qubit_code(), samples, 11));
    out.push_back(selftest::null_space_extraction(build_surface_code(5), samples, 12));
    return out;
}

}  // namespace bplcosd
