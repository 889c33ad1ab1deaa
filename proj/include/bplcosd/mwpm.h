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

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "bplcosd/codes.h"
#include "bplcosd/gf2.h"
#include "bplcosd/pauli.h"

namespace bplcosd {

/// Largest defect count per check type handled by the subset DP (2^20 states).
inline constexpr size_t kMaxDefects = 20;

/// Lattice steps between two checks of the same type; one qubit error moves a defect two cells.
inline int defect_distance(Cell a, Cell b) {
    bool a_x = SurfaceGeometry::is_x_check_cell(a);
    bool b_x = SurfaceGeometry::is_x_check_cell(b);
    bool a_z = SurfaceGeometry::is_z_check_cell(a);
    bool b_z = SurfaceGeometry::is_z_check_cell(b);
    if (!((a_x && b_x) || (a_z && b_z))) {
        throw std::invalid_argument("defect_distance: defects must be checks of the same type");
    }
    return (std::abs(a.r - b.r) + std::abs(a.c - b.c)) / 2;
}

/// Steps to the nearest boundary that absorbs the defect: left/right for Z-checks, top/bottom
/// for X-checks.
inline int boundary_distance(const SurfaceGeometry& geo, Cell a) {
    const int far = 2 * geo.d - 1;
    if (SurfaceGeometry::is_z_check_cell(a)) {
        return std::min((a.c + 1) / 2, (far - a.c) / 2);
    }
    if (SurfaceGeometry::is_x_check_cell(a)) {
        return std::min((a.r + 1) / 2, (far - a.r) / 2);
    }
    throw std::invalid_argument("boundary_distance: cell is not a check");
}

struct Matching {
    static constexpr size_t kBoundary = std::numeric_limits<size_t>::max();
    /// (i, j) defect pairs, or (i, kBoundary).
    std::vector<std::pair<size_t, size_t>> pairs;
    int total_weight = 0;
};

/// Minimum-weight matching where each defect pairs with another defect or with the boundary.
/// Subset DP over unmatched defects, always resolving the lowest-index one first.
inline Matching exact_matching(const std::vector<std::vector<int>>& weights, const std::vector<int>& boundary) {
    const size_t count = boundary.size();
    if (weights.size() != count) {
        throw std::invalid_argument("exact_matching: weight table does not match defect count");
    }
    if (count > kMaxDefects) {
        throw std::invalid_argument(
            "exact_matching: " + std::to_string(count) + " defects exceed the limit of " + std::to_string(kMaxDefects));
    }
    Matching result;
    if (count == 0) {
        return result;
    }
    const uint32_t full = (uint32_t{1} << count) - 1;
    std::vector<int> best(size_t{full} + 1, 0);
    std::vector<int8_t> partner(size_t{full} + 1, -1);  // -1: boundary
    for (uint32_t mask = 1; mask <= full; mask++) {
        int i = std::countr_zero(mask);
        uint32_t rest = mask & ~(uint32_t{1} << i);
        int cost = boundary[i] + best[rest];
        int8_t choice = -1;
        for (uint32_t others = rest; others; others &= others - 1) {
            int j = std::countr_zero(others);
            int c = weights[i][j] + best[rest & ~(uint32_t{1} << j)];
            if (c < cost) {
                cost = c;
                choice = static_cast<int8_t>(j);
            }
        }
        best[mask] = cost;
        partner[mask] = choice;
    }
    result.total_weight = best[full];
    for (uint32_t mask = full; mask;) {
        size_t i = std::countr_zero(mask);
        mask &= ~(uint32_t{1} << i);
        int8_t j = partner[mask | (uint32_t{1} << i)];
        if (j < 0) {
            result.pairs.emplace_back(i, Matching::kBoundary);
        } else {
            result.pairs.emplace_back(i, static_cast<size_t>(j));
            mask &= ~(uint32_t{1} << j);
        }
    }
    return result;
}

namespace detail {

/// Toggles `p` on every qubit along the lattice path from check `a` to check `b` (rows first).
inline void apply_path(const SurfaceGeometry& geo, Cell a, Cell b, Pauli p, PauliVector& out) {
    Cell at = a;
    auto toggle = [&](Cell qubit) {
        int q = geo.qubit_at(qubit);
        out.set(q, make_pauli(x_bit(out.get(q)) != x_bit(p), z_bit(out.get(q)) != z_bit(p)));
    };
    while (at.r != b.r) {
        int step = b.r > at.r ? 1 : -1;
        toggle({at.r + step, at.c});
        at.r += 2 * step;
    }
    while (at.c != b.c) {
        int step = b.c > at.c ? 1 : -1;
        toggle({at.r, at.c + step});
        at.c += 2 * step;
    }
}

/// Toggles `p` from check `a` out to its nearest absorbing boundary (lower side on ties).
inline void apply_boundary_path(const SurfaceGeometry& geo, Cell a, Pauli p, PauliVector& out) {
    const int last = 2 * geo.d - 2;
    auto toggle = [&](Cell qubit) {
        int q = geo.qubit_at(qubit);
        out.set(q, make_pauli(x_bit(out.get(q)) != x_bit(p), z_bit(out.get(q)) != z_bit(p)));
    };
    if (SurfaceGeometry::is_z_check_cell(a)) {
        bool left = (a.c + 1) / 2 <= (last + 1 - a.c) / 2;
        for (int c = left ? a.c - 1 : a.c + 1; left ? c >= 0 : c <= last; c += left ? -2 : 2) {
            toggle({a.r, c});
        }
    } else {
        bool up = (a.r + 1) / 2 <= (last + 1 - a.r) / 2;
        for (int r = up ? a.r - 1 : a.r + 1; up ? r >= 0 : r <= last; r += up ? -2 : 2) {
            toggle({r, a.c});
        }
    }
}

inline void match_type(
    const SurfaceGeometry& geo, const std::vector<Cell>& defects, Pauli correction, PauliVector& out) {
    std::vector<std::vector<int>> weights(defects.size(), std::vector<int>(defects.size(), 0));
    std::vector<int> boundary(defects.size());
    for (size_t i = 0; i < defects.size(); i++) {
        boundary[i] = boundary_distance(geo, defects[i]);
        for (size_t j = 0; j < defects.size(); j++) {
            weights[i][j] = defect_distance(defects[i], defects[j]);
        }
    }
    Matching m = exact_matching(weights, boundary);
    for (auto [i, j] : m.pairs) {
        if (j == Matching::kBoundary) {
            apply_boundary_path(geo, defects[i], correction, out);
        } else {
            apply_path(geo, defects[i], defects[j], correction, out);
        }
    }
}

}  // namespace detail

/// Matches Z-check defects with X corrections and X-check defects with Z corrections, trusting
/// the observed syndrome z.
inline PauliVector mwpm_decode(const StabilizerCode& code, const BitVec& z) {
    if (!code.geometry) {
        throw std::invalid_argument("mwpm_decode: code has no surface geometry");
    }
    if (z.size() != code.num_checks()) {
        throw std::invalid_argument("mwpm_decode: syndrome length does not match code");
    }
    const SurfaceGeometry& geo = *code.geometry;
    std::vector<Cell> x_defects;
    std::vector<Cell> z_defects;
    for (size_t row : z.support()) {
        (geo.check_type(row) == CheckType::X ? x_defects : z_defects).push_back(geo.check_cells[row]);
    }
    PauliVector out(code.n);
    detail::match_type(geo, z_defects, Pauli::X, out);
    detail::match_type(geo, x_defects, Pauli::Z, out);
    return out;
}

}  // namespace bplcosd
