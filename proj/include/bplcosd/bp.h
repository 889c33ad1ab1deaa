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
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bplcosd/channel.h"
#include "bplcosd/codes.h"
#include "bplcosd/gf2.h"
#include "bplcosd/pauli.h"

namespace bplcosd {

inline double log_sum_exp(double a, double b) {
    double hi = std::max(a, b);
    return hi + std::log1p(std::exp(-std::abs(a - b)));
}

/// Stabilizer Tanner graph: one variable per qubit, one check per row of H, each edge typed by
/// the Pauli that row applies to the qubit. Edges are stored grouped by check.
struct TannerGraph {
    struct Edge {
        size_t check;
        size_t qubit;
        Pauli type;
    };

    size_t num_qubits = 0;
    size_t num_checks = 0;
    std::vector<Edge> edges;
    std::vector<size_t> check_offsets;  // edges of check m: [check_offsets[m], check_offsets[m+1])
    std::vector<size_t> qubit_offsets;  // qubit_edges of qubit j: [qubit_offsets[j], qubit_offsets[j+1])
    std::vector<size_t> qubit_edges;    // edge indices, ordered by check within each qubit

    static TannerGraph from_check_matrix(const BitMatrix& h, size_t n) {
        if (h.cols() < 2 * n) {
            throw std::invalid_argument("TannerGraph: H must have at least 2n columns");
        }
        TannerGraph g;
        g.num_qubits = n;
        g.num_checks = h.rows();
        g.check_offsets.push_back(0);
        std::vector<size_t> degree(n, 0);
        for (size_t m = 0; m < h.rows(); m++) {
            for (size_t j = 0; j < n; j++) {
                Pauli type = make_pauli(h.get(m, j), h.get(m, n + j));
                if (type != Pauli::I) {
                    g.edges.push_back({m, j, type});
                    degree[j]++;
                }
            }
            g.check_offsets.push_back(g.edges.size());
        }
        g.qubit_offsets.assign(n + 1, 0);
        for (size_t j = 0; j < n; j++) {
            g.qubit_offsets[j + 1] = g.qubit_offsets[j] + degree[j];
        }
        g.qubit_edges.resize(g.edges.size());
        std::vector<size_t> fill(g.qubit_offsets.begin(), g.qubit_offsets.end() - 1);
        for (size_t e = 0; e < g.edges.size(); e++) {
            g.qubit_edges[fill[g.edges[e].qubit]++] = e;
        }
        return g;
    }
    static TannerGraph from_code(const StabilizerCode& code) {
        return from_check_matrix(code.h, code.n);
    }

    std::span<const size_t> edges_of_qubit(size_t j) const {
        return std::span<const size_t>(qubit_edges).subspan(qubit_offsets[j], qubit_offsets[j + 1] - qubit_offsets[j]);
    }
};

struct BpConfig {
    int t_max = 32;
    double alpha = 1.0;
    double llr_clamp = LLR_MAX;

    void validate() const {
        if (t_max < 1) {
            throw std::invalid_argument("BpConfig: t_max must be at least 1");
        }
        if (!(alpha > 0 && alpha <= 1)) {
            throw std::invalid_argument("BpConfig: alpha must lie in (0, 1]");
        }
    }
};

struct BpOutput {
    /// Posterior (ln P_I/P_X, ln P_I/P_Y, ln P_I/P_Z) per qubit.
    std::vector<LlrTriple> lambda_tuples;
    /// Posterior LLR of each true syndrome bit (positive favours 0).
    std::vector<double> syndrome_llrs;
    PauliVector hard_pauli;
    BitVec hard_syndrome;
    bool converged = false;
    int iterations_used = 0;
};

/// Min-sum extrinsic rule: out_i = prod_{j != i} sign(in_j) * min_{j != i} |in_j|, sign(0) = +1.
inline std::vector<double> check_node_update(std::span<const double> incoming) {
    if (incoming.size() < 2) {
        throw std::invalid_argument("check_node_update: need at least two incoming messages");
    }
    double min1 = std::numeric_limits<double>::infinity();
    double min2 = min1;
    size_t argmin = 0;
    bool negative_parity = false;
    for (size_t i = 0; i < incoming.size(); i++) {
        double mag = std::abs(incoming[i]);
        negative_parity ^= incoming[i] < 0;
        if (mag < min1) {
            min2 = min1;
            min1 = mag;
            argmin = i;
        } else if (mag < min2) {
            min2 = mag;
        }
    }
    std::vector<double> out(incoming.size());
    for (size_t i = 0; i < incoming.size(); i++) {
        bool negative = negative_parity ^ (incoming[i] < 0);
        double mag = i == argmin ? min2 : min1;
        out[i] = negative ? -mag : mag;
    }
    return out;
}

/// Message from qubit j to one check, written out per Pauli:
///   b(W) = -channel_W + sum over the other checks of (-msg if W anticommutes with that edge)
///   out  = alpha * (LSE over W commuting with `target` - LSE over W anticommuting), clamped.
/// `others` holds (edge type, check-to-qubit message) for every neighbouring check except the
/// target. The decoder uses an equivalent extrinsic form; this one is kept for cross-checking.
inline double variable_to_check(
    const LlrTriple& channel,
    std::span<const std::pair<Pauli, double>> others,
    Pauli target,
    double alpha,
    double clamp = LLR_MAX) {
    constexpr Pauli all[4] = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};
    double belief[4];
    for (int w = 0; w < 4; w++) {
        belief[w] = all[w] == Pauli::I ? 0.0 : -channel[triple_index(all[w])];
        for (const auto& [type, msg] : others) {
            if (anticommutes(all[w], type)) {
                belief[w] -= msg;
            }
        }
    }
    double commuting = -std::numeric_limits<double>::infinity();
    double anticommuting = commuting;
    for (int w = 0; w < 4; w++) {
        double& acc = anticommutes(all[w], target) ? anticommuting : commuting;
        acc = acc == -std::numeric_limits<double>::infinity() ? belief[w] : log_sum_exp(acc, belief[w]);
    }
    return clamp_llr(alpha * (commuting - anticommuting), clamp);
}

/// Argmin over (0, L_X, L_Y, L_Z) with ties going to I, then X, Y, Z.
inline Pauli hard_decision(const LlrTriple& lambda) {
    Pauli best = Pauli::I;
    double best_value = 0;
    constexpr Pauli order[3] = {Pauli::X, Pauli::Y, Pauli::Z};
    for (Pauli p : order) {
        double v = lambda[triple_index(p)];
        if (v < best_value) {
            best_value = v;
            best = p;
        }
    }
    return best;
}

/// Flooding-schedule normalized min-sum over the stabilizer Tanner graph, with one extra
/// degree-1 variable per check carrying the soft syndrome. Each check enforces
///   (sum of incident commutation bits) + sigma_m = 0,
/// so valid assignments are exactly the kernel of (H | I). Variable-to-check messages from
/// qubits are scaled by alpha; the syndrome prior is passed through unscaled.
///
/// One instance owns its message buffers; use one per thread.
class BpDecoder {
   public:
    explicit BpDecoder(const TannerGraph& graph) : graph_(&graph) {
        c2v_.resize(graph.edges.size());
        v2c_.resize(graph.edges.size());
        belief_.resize(graph.num_qubits);
        syn_extrinsic_.resize(graph.num_checks);
    }

    const TannerGraph& graph() const {
        return *graph_;
    }

    BpOutput decode(const LlrState& init, const BpConfig& config) {
        config.validate();
        const TannerGraph& g = *graph_;
        if (init.channel.size() != g.num_qubits || init.syndrome.size() != g.num_checks) {
            throw std::invalid_argument("BpDecoder::decode: LLR state does not match the graph");
        }
        const double clamp = config.llr_clamp;

        BpOutput out;
        out.lambda_tuples.resize(g.num_qubits);
        out.syndrome_llrs.resize(g.num_checks);
        out.hard_pauli = PauliVector(g.num_qubits);
        out.hard_syndrome = BitVec(g.num_checks);

        std::fill(c2v_.begin(), c2v_.end(), 0.0);
        // With all incoming messages zero the full belief is just the channel prior.
        for (size_t j = 0; j < g.num_qubits; j++) {
            for (int w = 0; w < 3; w++) {
                belief_[j][w] = -init.channel[j][w];
            }
        }

        for (int iter = 1; iter <= config.t_max; iter++) {
            // (1) qubit -> check: full log-odds of the edge's commutation bit minus the message
            // that arrived on that edge.
            for (size_t j = 0; j < g.num_qubits; j++) {
                const auto& b = belief_[j];
                std::array<double, 3> full{};
                for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
                    // Commuting with p: {I, p}; anticommuting: the other two.
                    size_t ip = triple_index(p);
                    size_t ia = (ip + 1) % 3;
                    size_t ib = (ip + 2) % 3;
                    full[ip] = log_sum_exp(0.0, b[ip]) - log_sum_exp(b[ia], b[ib]);
                }
                for (size_t e : g.edges_of_qubit(j)) {
                    double msg = full[triple_index(g.edges[e].type)] - c2v_[e];
                    v2c_[e] = clamp_llr(config.alpha * msg, clamp);
                }
            }

            // (2) check -> qubit, plus the extrinsic message to the syndrome variable.
            for (size_t m = 0; m < g.num_checks; m++) {
                size_t begin = g.check_offsets[m];
                size_t end = g.check_offsets[m + 1];
                double syn = init.syndrome[m];
                double min1 = std::abs(syn);
                double min2 = std::numeric_limits<double>::infinity();
                size_t argmin = end;  // `end` stands for the syndrome variable
                bool negative_parity = syn < 0;
                for (size_t e = begin; e < end; e++) {
                    double v = v2c_[e];
                    double mag = std::abs(v);
                    negative_parity ^= v < 0;
                    if (mag < min1) {
                        min2 = min1;
                        min1 = mag;
                        argmin = e;
                    } else if (mag < min2) {
                        min2 = mag;
                    }
                }
                for (size_t e = begin; e < end; e++) {
                    bool negative = negative_parity ^ (v2c_[e] < 0);
                    double mag = e == argmin ? min2 : min1;
                    c2v_[e] = clamp_llr(negative ? -mag : mag, clamp);
                }
                if (begin == end) {
                    syn_extrinsic_[m] = 0;  // a check with no qubits carries no information
                } else {
                    bool negative = negative_parity ^ (syn < 0);
                    double mag = argmin == end ? min2 : min1;
                    syn_extrinsic_[m] = clamp_llr(negative ? -mag : mag, clamp);
                }
            }

            // (3) posteriors and (4) hard decisions.
            for (size_t j = 0; j < g.num_qubits; j++) {
                auto& b = belief_[j];
                for (int w = 0; w < 3; w++) {
                    b[w] = -init.channel[j][w];
                }
                for (size_t e : g.edges_of_qubit(j)) {
                    Pauli type = g.edges[e].type;
                    double msg = c2v_[e];
                    // The two Paulis that anticommute with `type` lose msg.
                    size_t it = triple_index(type);
                    b[(it + 1) % 3] -= msg;
                    b[(it + 2) % 3] -= msg;
                }
                LlrTriple& lam = out.lambda_tuples[j];
                for (int w = 0; w < 3; w++) {
                    lam[w] = clamp_llr(-b[w], clamp);
                }
                out.hard_pauli.set(j, hard_decision(lam));
            }
            for (size_t m = 0; m < g.num_checks; m++) {
                double l = clamp_llr(init.syndrome[m] + syn_extrinsic_[m], clamp);
                out.syndrome_llrs[m] = l;
                out.hard_syndrome.set(m, l < 0);
            }

            // (5) stop once the hard decisions satisfy every extended check.
            out.iterations_used = iter;
            if (satisfies_checks(out.hard_pauli, out.hard_syndrome)) {
                out.converged = true;
                break;
            }
        }
        return out;
    }

    /// True iff H (.) e = sigma, evaluated over the graph's edges.
    bool satisfies_checks(const PauliVector& e, const BitVec& sigma) const {
        const TannerGraph& g = *graph_;
        for (size_t m = 0; m < g.num_checks; m++) {
            bool parity = sigma.get(m);
            for (size_t k = g.check_offsets[m]; k < g.check_offsets[m + 1]; k++) {
                parity ^= anticommutes(e.get(g.edges[k].qubit), g.edges[k].type);
            }
            if (parity) {
                return false;
            }
        }
        return true;
    }

   private:
    // Pauli order inside a triple is X, Y, Z; rotating the index by one or two gives the two
    // Paulis that anticommute with a given one.
    static_assert(triple_index(Pauli::X) == 0 && triple_index(Pauli::Y) == 1 && triple_index(Pauli::Z) == 2);

    const TannerGraph* graph_;
    std::vector<double> c2v_;
    std::vector<double> v2c_;
    std::vector<std::array<double, 3>> belief_;  // b(W) - b(I) with all incoming messages
    std::vector<double> syn_extrinsic_;
};

/// One-shot convenience wrapper.
inline BpOutput bp_decode(const TannerGraph& graph, const LlrState& init, const BpConfig& config) {
    BpDecoder dec(graph);
    return dec.decode(init, config);
}

}  // namespace bplcosd
