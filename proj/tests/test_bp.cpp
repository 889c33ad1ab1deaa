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

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "bplcosd/bp.h"
#include "bplcosd/channel.h"
#include "bplcosd/codes.h"
#include "gtest/gtest.h"

using namespace bplcosd;

TEST(check_node_update, reference_values) {
    std::vector<double> two = {1.5, -4};
    EXPECT_EQ(check_node_update(two), (std::vector<double>{-4, 1.5}));
    std::vector<double> three = {3, -2, 5};
    EXPECT_EQ(check_node_update(three), (std::vector<double>{-2, 3, -2}));
    std::vector<double> zero = {0, -2, 5};
    EXPECT_EQ(check_node_update(zero), (std::vector<double>{-2, 0, 0}));
    std::vector<double> one = {1};
    EXPECT_THROW(check_node_update(one), std::invalid_argument);
}

TEST(check_node_update, homogeneous_and_sign_equivariant) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int t = 0; t < 200; t++) {
        size_t k = 2 + rng() % 6;
        std::vector<double> in(k);
        for (double& v : in) {
            v = u(rng);
        }
        std::vector<double> out = check_node_update(in);
        double gamma = 0.1 + (rng() % 100) / 10.0;
        std::vector<double> scaled = in;
        for (double& v : scaled) {
            v *= gamma;
        }
        std::vector<double> out_scaled = check_node_update(scaled);
        size_t flip = rng() % k;
        std::vector<double> flipped = in;
        flipped[flip] = -flipped[flip];
        std::vector<double> out_flipped = check_node_update(flipped);
        for (size_t i = 0; i < k; i++) {
            ASSERT_NEAR(out_scaled[i], gamma * out[i], 1e-9);
            if (i != flip) {
                ASSERT_EQ(out_flipped[i], -out[i]);
            } else {
                ASSERT_EQ(out_flipped[i], out[i]);
            }
        }
    }
}

TEST(variable_to_check, closed_forms) {
    for (double t : {0.5, 2.0, 4.5747}) {
        for (double alpha : {1.0, 0.625}) {
            LlrTriple ch{t, t, t};
            double want = alpha * std::log((1 + std::exp(-t)) / (2 * std::exp(-t)));
            EXPECT_NEAR(variable_to_check(ch, {}, Pauli::X, alpha), want, 1e-12);
            EXPECT_NEAR(variable_to_check(ch, {}, Pauli::Z, alpha), want, 1e-12);
        }
    }
    EXPECT_NEAR(variable_to_check(LlrTriple{0, 0, 0}, {}, Pauli::Y, 1.0), 0.0, 1e-12);
}

TEST(variable_to_check, saturated_message_excludes_anticommuting) {
    // A +50 message on a Z edge suppresses X and Y, leaving I and Z with zero channel:
    // commuting with X is {I, X}, so the output is ln((1 + e^-50) / (e^-50 + 1)) = 0.
    std::vector<std::pair<Pauli, double>> others = {{Pauli::Z, LLR_MAX}};
    double out = variable_to_check(LlrTriple{0, 0, 0}, others, Pauli::X, 1.0);
    double want = std::log((1 + std::exp(-LLR_MAX)) / (std::exp(-LLR_MAX) + 1));
    EXPECT_NEAR(out, want, 1e-12);
    // Against a Y edge: commuting {I, Y} has beliefs {0, -50}; anticommuting {X, Z} = {-50, 0}.
    EXPECT_NEAR(variable_to_check(LlrTriple{0, 0, 0}, others, Pauli::Y, 1.0), 0.0, 1e-12);
    // Against a Z edge: {I, Z} keep 0, {X, Y} carry -50 -> +50 (clamped, finite).
    double z_out = variable_to_check(LlrTriple{0, 0, 0}, others, Pauli::Z, 1.0);
    EXPECT_TRUE(std::isfinite(z_out));
    EXPECT_NEAR(z_out, LLR_MAX, 1e-9);
}

TEST(hard_decision, ties_prefer_identity_then_xyz) {
    EXPECT_EQ(hard_decision(LlrTriple{1, 1, 1}), Pauli::I);
    EXPECT_EQ(hard_decision(LlrTriple{0, 0, 0}), Pauli::I);
    EXPECT_EQ(hard_decision(LlrTriple{-1, -1, -1}), Pauli::X);
    EXPECT_EQ(hard_decision(LlrTriple{1, -2, -2}), Pauli::Y);
    EXPECT_EQ(hard_decision(LlrTriple{1, -2, -3}), Pauli::Z);
}

TEST(tanner_graph, mirrors_h) {
    StabilizerCode code = build_surface_code(3);
    TannerGraph g = TannerGraph::from_code(code);
    size_t nonzero = 0;
    for (size_t m = 0; m < code.num_checks(); m++) {
        PauliVector row = code.stabilizer(m);
        nonzero += row.weight();
        for (size_t e = g.check_offsets[m]; e < g.check_offsets[m + 1]; e++) {
            EXPECT_EQ(g.edges[e].check, m);
            EXPECT_EQ(row.get(g.edges[e].qubit), g.edges[e].type);
        }
    }
    EXPECT_EQ(g.edges.size(), nonzero);
    size_t mirrored = 0;
    for (size_t j = 0; j < code.n; j++) {
        for (size_t e : g.edges_of_qubit(j)) {
            EXPECT_EQ(g.edges[e].qubit, j);
            mirrored++;
        }
    }
    EXPECT_EQ(mirrored, nonzero);
}

// Reference decoder built from the per-edge closed form. It recomputes every variable-to-check
// message from scratch, so it shares nothing with the incremental update inside BpDecoder.
BpOutput reference_bp(const StabilizerCode& code, const LlrState& init, const BpConfig& cfg) {
    TannerGraph g = TannerGraph::from_code(code);
    std::vector<double> c2v(g.edges.size(), 0.0);
    std::vector<double> v2c(g.edges.size(), 0.0);
    BpOutput out;
    out.lambda_tuples.resize(code.n);
    out.syndrome_llrs.resize(code.num_checks());
    out.hard_pauli = PauliVector(code.n);
    out.hard_syndrome = BitVec(code.num_checks());
    BpDecoder checker(g);
    for (int iter = 1; iter <= cfg.t_max; iter++) {
        for (size_t e = 0; e < g.edges.size(); e++) {
            std::vector<std::pair<Pauli, double>> others;
            for (size_t f : g.edges_of_qubit(g.edges[e].qubit)) {
                if (f != e) {
                    others.emplace_back(g.edges[f].type, c2v[f]);
                }
            }
            v2c[e] = variable_to_check(init.channel[g.edges[e].qubit], others, g.edges[e].type, cfg.alpha, cfg.llr_clamp);
        }
        for (size_t m = 0; m < code.num_checks(); m++) {
            std::vector<double> in;
            for (size_t e = g.check_offsets[m]; e < g.check_offsets[m + 1]; e++) {
                in.push_back(v2c[e]);
            }
            in.push_back(init.syndrome[m]);
            std::vector<double> res = check_node_update(in);
            for (size_t e = g.check_offsets[m], i = 0; e < g.check_offsets[m + 1]; e++, i++) {
                c2v[e] = clamp_llr(res[i], cfg.llr_clamp);
            }
            double l = clamp_llr(init.syndrome[m] + clamp_llr(res.back(), cfg.llr_clamp), cfg.llr_clamp);
            out.syndrome_llrs[m] = l;
            out.hard_syndrome.set(m, l < 0);
        }
        for (size_t j = 0; j < code.n; j++) {
            LlrTriple lam = init.channel[j];
            for (size_t e : g.edges_of_qubit(j)) {
                for (Pauli w : {Pauli::X, Pauli::Y, Pauli::Z}) {
                    if (anticommutes(w, g.edges[e].type)) {
                        lam[triple_index(w)] += c2v[e];
                    }
                }
            }
            for (double& v : lam) {
                v = clamp_llr(v, cfg.llr_clamp);
            }
            out.lambda_tuples[j] = lam;
            out.hard_pauli.set(j, hard_decision(lam));
        }
        out.iterations_used = iter;
        if (symplectic_syndrome(code.h, out.hard_pauli) == out.hard_syndrome) {
            out.converged = true;
            break;
        }
    }
    return out;
}

TEST(bp_decode, matches_reference_route) {
    StabilizerCode code = build_surface_code(3);
    TannerGraph g = TannerGraph::from_code(code);
    BpDecoder dec(g);
    for (uint64_t t = 0; t < 300; t++) {
        TrialRng rng = make_trial_rng(11, 0, t);
        double p = 0.02 + 0.1 * uniform01(rng);
        PauliVector e = sample_error(code, p, rng);
        SyndromeSample s = measure_syndrome(code, e, 0.01, rng);
        LlrState init = init_llrs(code, NoiseModel{p, 0.01}, s.z);
        BpConfig cfg{8, t % 2 ? 0.625 : 1.0, LLR_MAX};
        BpOutput a = dec.decode(init, cfg);
        BpOutput b = reference_bp(code, init, cfg);
        ASSERT_EQ(a.iterations_used, b.iterations_used);
        ASSERT_EQ(a.converged, b.converged);
        ASSERT_EQ(a.hard_pauli, b.hard_pauli);
        ASSERT_EQ(a.hard_syndrome, b.hard_syndrome);
        for (size_t j = 0; j < code.n; j++) {
            for (int w = 0; w < 3; w++) {
                ASSERT_NEAR(a.lambda_tuples[j][w], b.lambda_tuples[j][w], 1e-9);
            }
        }
        for (size_t m = 0; m < code.num_checks(); m++) {
            ASSERT_NEAR(a.syndrome_llrs[m], b.syndrome_llrs[m], 1e-9);
        }
    }
}

TEST(bp_decode, five_qubit_single_x) {
    StabilizerCode code = five_qubit_code();
    TannerGraph g = TannerGraph::from_code(code);
    BitVec z = BitVec::from_string("0001");
    BpOutput out = bp_decode(g, init_llrs(code, NoiseModel{0.01, 1e-5}, z), BpConfig{});
    EXPECT_TRUE(out.converged);
    EXPECT_EQ(out.hard_pauli.str(), "XIIII");
    EXPECT_EQ(out.hard_syndrome.str(), "0001");
}

TEST(bp_decode, clean_syndrome_stops_at_first_iteration) {
    StabilizerCode code = build_surface_code(5);
    TannerGraph g = TannerGraph::from_code(code);
    BpOutput out = bp_decode(g, init_llrs(code, NoiseModel{0.001, 1e-5}, BitVec(40)), BpConfig{});
    EXPECT_TRUE(out.converged);
    EXPECT_EQ(out.iterations_used, 1);
    EXPECT_EQ(out.hard_pauli.weight(), 0u);
}

TEST(bp_decode, invariants_on_random_trials) {
    StabilizerCode code = build_surface_code(5);
    TannerGraph g = TannerGraph::from_code(code);
    BpDecoder dec(g);
    StabilizerCode five = five_qubit_code();
    TannerGraph g5 = TannerGraph::from_code(five);
    BpDecoder dec5(g5);
    for (uint64_t t = 0; t < 500; t++) {
        TrialRng rng = make_trial_rng(12, 0, t);
        PauliVector e = sample_error(code, 0.08, rng);
        SyndromeSample s = measure_syndrome(code, e, 0.01, rng);
        LlrState init = init_llrs(code, NoiseModel{0.08, 0.01}, s.z);
        BpOutput out = dec.decode(init, BpConfig{32, 0.625, LLR_MAX});
        if (out.converged) {
            ASSERT_EQ(symplectic_syndrome(code.h, out.hard_pauli), out.hard_syndrome);
        }
        for (const auto& lam : out.lambda_tuples) {
            for (double v : lam) {
                ASSERT_LE(std::abs(v), LLR_MAX);
            }
        }
        for (double l : out.syndrome_llrs) {
            ASSERT_LE(std::abs(l), LLR_MAX);
        }
        // Identical input, identical output.
        BpOutput again = dec.decode(init, BpConfig{32, 0.625, LLR_MAX});
        ASSERT_EQ(again.lambda_tuples, out.lambda_tuples);

        // Trusted syndrome on the five-qubit code: a converged decode reproduces z.
        PauliVector e5 = sample_error(five, 0.1, rng);
        BitVec z5 = symplectic_syndrome(five.h, e5);
        BpOutput o5 = dec5.decode(init_llrs(five, NoiseModel{0.1, 0.0}, z5), BpConfig{});
        if (o5.converged) {
            ASSERT_EQ(o5.hard_syndrome, z5);
        }
    }
}

TEST(bp_config, validation) {
    EXPECT_THROW((BpConfig{0, 1.0, LLR_MAX}.validate()), std::invalid_argument);
    EXPECT_THROW((BpConfig{5, 0.0, LLR_MAX}.validate()), std::invalid_argument);
    EXPECT_THROW((BpConfig{5, 1.5, LLR_MAX}.validate()), std::invalid_argument);
}
