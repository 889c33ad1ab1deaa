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

#include <random>

#include "bplcosd/codes.h"
#include "bplcosd/pauli.h"
#include "gtest/gtest.h"

using namespace bplcosd;

namespace {

void expect_valid_code(const StabilizerCode& code) {
    ASSERT_EQ(code.h.cols(), 2 * code.n);
    for (size_t a = 0; a < code.num_checks(); a++) {
        for (size_t b = 0; b < code.num_checks(); b++) {
            ASSERT_FALSE(code.stabilizer(a).symplectic_product(code.stabilizer(b))) << a << " " << b;
        }
    }
    ASSERT_EQ(code.logical_x.size(), code.k);
    ASSERT_EQ(code.logical_z.size(), code.k);
    for (size_t i = 0; i < code.k; i++) {
        for (size_t r = 0; r < code.num_checks(); r++) {
            ASSERT_FALSE(code.logical_x[i].symplectic_product(code.stabilizer(r)));
            ASSERT_FALSE(code.logical_z[i].symplectic_product(code.stabilizer(r)));
        }
        for (size_t j = 0; j < code.k; j++) {
            ASSERT_EQ(code.logical_x[i].symplectic_product(code.logical_z[j]), i == j);
        }
    }
    ASSERT_EQ(code.n - rank(code.h), code.k);
}

// Smallest weight of a Pauli with zero syndrome that anticommutes with some logical.
size_t brute_force_distance(const StabilizerCode& code, size_t max_weight) {
    const size_t n = code.n;
    for (size_t w = 1; w <= max_weight; w++) {
        std::vector<size_t> pos(w);
        for (size_t i = 0; i < w; i++) {
            pos[i] = i;
        }
        while (true) {
            size_t combos = 1;
            for (size_t i = 0; i < w; i++) {
                combos *= 3;
            }
            for (size_t c = 0; c < combos; c++) {
                PauliVector e(n);
                size_t rest = c;
                for (size_t i = 0; i < w; i++) {
                    e.set(pos[i], static_cast<Pauli>(1 + rest % 3));
                    rest /= 3;
                }
                if (symplectic_syndrome(code.h, e).any()) {
                    continue;
                }
                bool logical = false;
                for (size_t i = 0; i < code.k; i++) {
                    logical |= e.symplectic_product(code.logical_x[i]) || e.symplectic_product(code.logical_z[i]);
                }
                if (logical) {
                    return w;
                }
            }
            // Next combination of positions.
            size_t i = w;
            while (i > 0 && pos[i - 1] == n - w + i - 1) {
                i--;
            }
            if (i == 0) {
                break;
            }
            pos[i - 1]++;
            for (size_t j = i; j < w; j++) {
                pos[j] = pos[j - 1] + 1;
            }
        }
    }
    return 0;
}

}  // namespace

TEST(five_qubit_code, matrix_and_logicals) {
    StabilizerCode code = five_qubit_code();
    EXPECT_EQ(code.n, 5u);
    EXPECT_EQ(code.k, 1u);
    EXPECT_EQ(code.h.row(0).str(), "1001001100");
    EXPECT_EQ(code.stabilizer(0).str(), "XZZXI");
    EXPECT_TRUE(code.logical_x[0].symplectic_product(code.logical_z[0]));
    expect_valid_code(code);
}

TEST(five_qubit_code, distance_three) {
    EXPECT_EQ(brute_force_distance(five_qubit_code(), 3), 3u);
}

TEST(surface_code, sizes) {
    for (int d = 2; d <= 7; d++) {
        StabilizerCode code = build_surface_code(d);
        EXPECT_EQ(code.n, static_cast<size_t>(2 * d * d - 2 * d + 1));
        EXPECT_EQ(code.num_checks(), static_cast<size_t>(2 * d * (d - 1)));
        EXPECT_EQ(code.k, 1u);
        size_t x_checks = 0;
        for (size_t r = 0; r < code.num_checks(); r++) {
            x_checks += code.geometry->check_type(r) == CheckType::X;
        }
        EXPECT_EQ(x_checks, static_cast<size_t>(d * (d - 1)));
    }
    EXPECT_EQ(build_surface_code(5).n, 41u);
    EXPECT_EQ(build_surface_code(5).num_checks(), 40u);
    EXPECT_THROW(build_surface_code(1), std::invalid_argument);
}

TEST(surface_code, invariants_hold) {
    for (int d = 2; d <= 5; d++) {
        expect_valid_code(build_surface_code(d));
    }
}

TEST(surface_code, check_weights) {
    StabilizerCode code = build_surface_code(3);
    size_t weight3 = 0;
    for (size_t r = 0; r < code.num_checks(); r++) {
        size_t w = code.h.row(r).weight();
        EXPECT_TRUE(w >= 2 && w <= 4) << w;
        weight3 += w == 3;
    }
    // Each of the 12 checks of the 5x5 cell grid sits on the boundary except the 4 central ones.
    EXPECT_EQ(weight3, 8u);
    // X-checks come first and are pure X.
    for (size_t r = 0; r < 6; r++) {
        EXPECT_EQ(code.h.row(r).slice(code.n, code.n).weight(), 0u);
    }
}

TEST(surface_code, single_errors_flag_the_other_type) {
    for (int d : {3, 5}) {
        StabilizerCode code = build_surface_code(d);
        const SurfaceGeometry& geo = *code.geometry;
        for (size_t j = 0; j < code.n; j++) {
            for (Pauli p : {Pauli::X, Pauli::Z}) {
                PauliVector e(code.n);
                e.set(j, p);
                BitVec s = symplectic_syndrome(code.h, e);
                ASSERT_TRUE(s.weight() == 1 || s.weight() == 2);
                for (size_t r : s.support()) {
                    ASSERT_EQ(geo.check_type(r), p == Pauli::X ? CheckType::Z : CheckType::X);
                }
            }
        }
    }
}

TEST(surface_code, brute_force_distance) {
    EXPECT_EQ(brute_force_distance(build_surface_code(2), 2), 2u);
    EXPECT_EQ(brute_force_distance(build_surface_code(3), 3), 3u);
}

TEST(surface_code, geometry_indexing) {
    StabilizerCode code = build_surface_code(5);
    const SurfaceGeometry& geo = *code.geometry;
    for (size_t q = 0; q < code.n; q++) {
        EXPECT_EQ(geo.qubit_at(geo.qubit_cells[q]), static_cast<int>(q));
    }
    for (size_t r = 0; r < code.num_checks(); r++) {
        EXPECT_EQ(geo.check_row(geo.check_cells[r]), static_cast<int>(r));
    }
    EXPECT_EQ(geo.qubit_at({1, 2}), -1);
}

TEST(code_from_stabilizers, rank_gives_k) {
    StabilizerCode code = code_from_stabilizers({"ZZI", "IZZ"});
    EXPECT_EQ(code.k, 1u);
    EXPECT_THROW(code_from_stabilizers({"ZZI", "IZ"}), std::invalid_argument);
    EXPECT_THROW(code_from_stabilizers({}), std::invalid_argument);
}
