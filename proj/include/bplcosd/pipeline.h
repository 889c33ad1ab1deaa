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

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bplcosd/bp.h"
#include "bplcosd/channel.h"
#include "bplcosd/codes.h"
#include "bplcosd/gf2.h"
#include "bplcosd/lcosd.h"
#include "bplcosd/pauli.h"

namespace bplcosd {

struct PipelineConfig {
    BpConfig stage1{32, 5.0 / 8.0, LLR_MAX};
    BpConfig stage2{32, 1.0, LLR_MAX};
    double beta = 7.5;
    LcosdConfig lcosd{8, 1024};

    void validate() const {
        stage1.validate();
        stage2.validate();
        lcosd.validate();
        if (!(beta > 0)) {
            throw std::invalid_argument("PipelineConfig: beta must be positive");
        }
    }
};

enum class DecodePath { BpStage1, BpStage2, Lcosd };

inline const char* path_name(DecodePath p) {
    switch (p) {
        case DecodePath::BpStage1:
            return "bp-stage1";
        case DecodePath::BpStage2:
            return "bp-stage2";
        case DecodePath::Lcosd:
            return "lcosd";
    }
    return "?";
}

struct DecodeResult {
    PauliVector e_hat;
    /// Estimated true syndrome; always equals the syndrome of e_hat.
    BitVec sigma_hat;
    DecodePath path = DecodePath::BpStage1;
    int iterations_stage1 = 0;
    int iterations_stage2 = 0;
    size_t list_size_used = 0;
};

struct Marginals {
    std::vector<double> lambda_z;  // LLR that the Z component is absent (I or X)
    std::vector<double> lambda_x;  // LLR that the X component is absent (I or Z)
};

/// Collapses each (L_X, L_Y, L_Z) triple to its two binary marginals:
///   lambda_x = ln (1 + e^-L_Z) / (e^-L_Y + e^-L_X)
///   lambda_z = ln (1 + e^-L_X) / (e^-L_Y + e^-L_Z)
inline Marginals marginalize(std::span<const LlrTriple> lambda) {
    Marginals out;
    out.lambda_x.resize(lambda.size());
    out.lambda_z.resize(lambda.size());
    for (size_t j = 0; j < lambda.size(); j++) {
        double lx = lambda[j][0];
        double ly = lambda[j][1];
        double lz = lambda[j][2];
        out.lambda_x[j] = clamp_llr(log_sum_exp(0.0, -lz) - log_sum_exp(-ly, -lx));
        out.lambda_z[j] = clamp_llr(log_sum_exp(0.0, -lx) - log_sum_exp(-ly, -lz));
    }
    return out;
}

/// (H | I_{n-k})
inline BitMatrix extend_parity(const BitMatrix& h) {
    return BitMatrix::hconcat(h, BitMatrix::identity(h.rows()));
}

/// (lambda_z || lambda_x || beta * L). The Z marginals come first because they pair with the
/// X-part columns of H under the symplectic product.
inline std::vector<double> concatenate(
    std::span<const double> lambda_z, std::span<const double> lambda_x, std::span<const double> syndrome_llrs, double beta) {
    if (lambda_z.size() != lambda_x.size()) {
        throw std::invalid_argument("concatenate: marginal vectors differ in length");
    }
    std::vector<double> out;
    out.reserve(lambda_z.size() * 2 + syndrome_llrs.size());
    out.insert(out.end(), lambda_z.begin(), lambda_z.end());
    out.insert(out.end(), lambda_x.begin(), lambda_x.end());
    for (double l : syndrome_llrs) {
        out.push_back(beta * l);
    }
    return out;
}

/// Splits a virtual codeword (c_Z | c_X | sigma) of length 2n + m into a Pauli and a syndrome:
/// (c_i, c_{n+i}) = (0,1) -> X, (1,0) -> Z, (1,1) -> Y.
inline std::pair<PauliVector, BitVec> extract(const BitVec& c, size_t n) {
    if (c.size() < 2 * n) {
        throw std::invalid_argument("extract: virtual codeword shorter than 2n");
    }
    PauliVector e(c.slice(n, n), c.slice(0, n));
    return {std::move(e), c.slice(2 * n, c.size() - 2 * n)};
}

/// Inverse of extract.
inline BitVec assemble_virtual_codeword(const PauliVector& e, const BitVec& sigma) {
    size_t n = e.size();
    BitVec c(2 * n + sigma.size());
    for (size_t j : e.z().support()) {
        c.set(j, true);
    }
    for (size_t j : e.x().support()) {
        c.set(n + j, true);
    }
    for (size_t m : sigma.support()) {
        c.set(2 * n + m, true);
    }
    return c;
}

/// True iff e_hat fails to undo e_true: the residual has a nonzero syndrome or anticommutes with
/// some logical operator.
inline bool is_logical_error(const StabilizerCode& code, const PauliVector& e_true, const PauliVector& e_hat) {
    if (e_true.size() != code.n || e_hat.size() != code.n) {
        throw std::invalid_argument("is_logical_error: operator length does not match code");
    }
    PauliVector residual = e_true * e_hat;
    if (symplectic_syndrome(code.h, residual).any()) {
        return true;
    }
    for (const auto& l : code.logical_x) {
        if (residual.symplectic_product(l)) {
            return true;
        }
    }
    for (const auto& l : code.logical_z) {
        if (residual.symplectic_product(l)) {
            return true;
        }
    }
    return false;
}

/// BP (alpha1) -> BP (alpha2) -> marginalize -> concatenate (beta) -> LCOSD on (H | I) -> extract.
/// Either BP stage returns directly when its hard decision satisfies the extended checks.
///
/// Holds the Tanner graph, the extended matrix and the BP buffers; one instance per thread.
class BpLcosdDecoder {
   public:
    BpLcosdDecoder(const StabilizerCode& code, PipelineConfig config)
        : code_(&code),
          config_(config),
          graph_(TannerGraph::from_code(code)),
          bp_(graph_),
          extended_(extend_parity(code.h)) {
        config_.validate();
    }
    BpLcosdDecoder(const BpLcosdDecoder&) = delete;
    BpLcosdDecoder& operator=(const BpLcosdDecoder&) = delete;

    const PipelineConfig& config() const {
        return config_;
    }
    const BitMatrix& extended_matrix() const {
        return extended_;
    }

    DecodeResult decode(const BitVec& z, const NoiseModel& noise) {
        return decode(init_llrs(*code_, noise, z));
    }

    DecodeResult decode(const LlrState& init) {
        DecodeResult res;
        BpOutput first = bp_.decode(init, config_.stage1);
        res.iterations_stage1 = first.iterations_used;
        if (first.converged) {
            res.e_hat = std::move(first.hard_pauli);
            res.sigma_hat = std::move(first.hard_syndrome);
            res.path = DecodePath::BpStage1;
            return res;
        }
        BpOutput second = bp_.decode(init, config_.stage2);
        res.iterations_stage2 = second.iterations_used;
        if (second.converged) {
            res.e_hat = std::move(second.hard_pauli);
            res.sigma_hat = std::move(second.hard_syndrome);
            res.path = DecodePath::BpStage2;
            return res;
        }
        Marginals marg = marginalize(second.lambda_tuples);
        std::vector<double> virtual_llrs =
            concatenate(marg.lambda_z, marg.lambda_x, second.syndrome_llrs, config_.beta);
        LcosdResult found = lcosd_decode(extended_, virtual_llrs, config_.lcosd);
        auto [e, sigma] = extract(found.codeword, code_->n);
        res.e_hat = std::move(e);
        res.sigma_hat = std::move(sigma);
        res.path = DecodePath::Lcosd;
        res.list_size_used = found.list_size;
        return res;
    }

   private:
    const StabilizerCode* code_;
    PipelineConfig config_;
    TannerGraph graph_;
    BpDecoder bp_;
    BitMatrix extended_;
};

inline DecodeResult bp_lcosd_decode(
    const StabilizerCode& code, const BitVec& z, const NoiseModel& noise, const PipelineConfig& config) {
    BpLcosdDecoder dec(code, config);
    return dec.decode(z, noise);
}

}  // namespace bplcosd
