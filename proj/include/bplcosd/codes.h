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

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bplcosd/gf2.h"
#include "bplcosd/pauli.h"

namespace bplcosd {

struct Cell {
    int r = 0;
    int c = 0;
    bool operator==(const Cell&) const = default;
};

enum class CheckType { X, Z };

/// Planar surface code laid out on a (2d-1)x(2d-1) checkerboard of cells.
///
///   r+c even        -> data qubit
///   r odd,  c even  -> X-type check (face)
///   r even, c odd   -> Z-type check (vertex)
///
/// Each check acts on its in-grid orthogonal neighbours, so boundary checks have weight 3.
/// X-error chains end on the left/right boundary, Z-error chains on the top/bottom boundary.
struct SurfaceGeometry {
    int d = 0;

    int size() const {
        return 2 * d - 1;
    }
    bool in_grid(Cell cell) const {
        return cell.r >= 0 && cell.c >= 0 && cell.r < size() && cell.c < size();
    }
    static bool is_qubit_cell(Cell cell) {
        return (cell.r + cell.c) % 2 == 0;
    }
    static bool is_x_check_cell(Cell cell) {
        return cell.r % 2 == 1 && cell.c % 2 == 0;
    }
    static bool is_z_check_cell(Cell cell) {
        return cell.r % 2 == 0 && cell.c % 2 == 1;
    }

    /// Row-major qubit index; -1 when the cell is not a qubit.
    int qubit_at(Cell cell) const {
        if (!in_grid(cell) || !is_qubit_cell(cell)) {
            return -1;
        }
        // Even rows hold d qubits, odd rows hold d-1.
        int before = (cell.r / 2) * (2 * d - 1) + (cell.r % 2) * d;
        return before + cell.c / 2;
    }

    /// Row of H for the check at `cell`; -1 when not a check. X-checks come first.
    int check_row(Cell cell) const {
        if (!in_grid(cell)) {
            return -1;
        }
        if (is_x_check_cell(cell)) {
            return (cell.r / 2) * d + cell.c / 2;
        }
        if (is_z_check_cell(cell)) {
            return d * (d - 1) + (cell.r / 2) * (d - 1) + cell.c / 2;
        }
        return -1;
    }

    int num_qubits() const {
        return 2 * d * d - 2 * d + 1;
    }
    int num_checks_per_type() const {
        return d * (d - 1);
    }

    /// Cells of qubits (index order) and checks (row order of H).
    std::vector<Cell> qubit_cells;
    std::vector<Cell> check_cells;

    CheckType check_type(size_t row) const {
        return row < static_cast<size_t>(num_checks_per_type()) ? CheckType::X : CheckType::Z;
    }
};

struct StabilizerCode {
    size_t n = 0;
    size_t k = 0;
    /// (n-k) x 2n, columns (X-part | Z-part).
    BitMatrix h;
    std::vector<PauliVector> logical_x;
    std::vector<PauliVector> logical_z;
    std::optional<SurfaceGeometry> geometry;

    size_t num_checks() const {
        return h.rows();
    }
    PauliVector stabilizer(size_t row) const {
        return row_as_pauli(h, row, n);
    }
};

/// Code defined only by a list of stabilizer generators, e.g. {"XZZXI", ...}. Logical operators
/// are left empty; k is n minus the GF(2) rank of the generators.
inline StabilizerCode code_from_stabilizers(const std::vector<std::string>& generators) {
    if (generators.empty()) {
        throw std::invalid_argument("code_from_stabilizers: no generators");
    }
    StabilizerCode code;
    code.n = generators.front().size();
    code.h = BitMatrix(generators.size(), 2 * code.n);
    for (size_t r = 0; r < generators.size(); r++) {
        if (generators[r].size() != code.n) {
            throw std::invalid_argument("code_from_stabilizers: generators differ in length");
        }
        PauliVector p = PauliVector::from_string(generators[r]);
        for (size_t j = 0; j < code.n; j++) {
            code.h.set(r, j, p.x().get(j));
            code.h.set(r, code.n + j, p.z().get(j));
        }
    }
    code.k = code.n - rank(code.h);
    return code;
}

/// The [[5,1,3]] perfect code with stabilizers XZZXI, IXZZX, XIXZZ, ZXIXZ.
inline StabilizerCode five_qubit_code() {
    StabilizerCode code = code_from_stabilizers({"XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"});
    code.logical_x = {PauliVector::from_string("XXXXX")};
    code.logical_z = {PauliVector::from_string("ZZZZZ")};
    return code;
}

/// [[2d^2-2d+1, 1, d]] planar surface code. Logical Z runs down column 0, logical X along row 0.
inline StabilizerCode build_surface_code(int d) {
    if (d < 2) {
        throw std::invalid_argument("build_surface_code: distance must be at least 2, got " + std::to_string(d));
    }
    SurfaceGeometry geo;
    geo.d = d;
    const int size = geo.size();
    geo.qubit_cells.resize(geo.num_qubits());
    geo.check_cells.resize(2 * geo.num_checks_per_type());
    for (int r = 0; r < size; r++) {
        for (int c = 0; c < size; c++) {
            Cell cell{r, c};
            if (int q = geo.qubit_at(cell); q >= 0) {
                geo.qubit_cells[q] = cell;
            } else {
                geo.check_cells[geo.check_row(cell)] = cell;
            }
        }
    }

    StabilizerCode code;
    code.n = geo.num_qubits();
    code.k = 1;
    code.h = BitMatrix(geo.check_cells.size(), 2 * code.n);
    for (size_t row = 0; row < geo.check_cells.size(); row++) {
        Cell at = geo.check_cells[row];
        bool is_x = geo.check_type(row) == CheckType::X;
        const Cell neighbours[] = {{at.r - 1, at.c}, {at.r + 1, at.c}, {at.r, at.c - 1}, {at.r, at.c + 1}};
        for (Cell nb : neighbours) {
            int q = geo.qubit_at(nb);
            if (q >= 0) {
                code.h.set(row, is_x ? q : code.n + q, true);
            }
        }
    }

    PauliVector lx(code.n);
    PauliVector lz(code.n);
    for (int i = 0; i < d; i++) {
        lx.set(geo.qubit_at({0, 2 * i}), Pauli::X);
        lz.set(geo.qubit_at({2 * i, 0}), Pauli::Z);
    }
    code.logical_x = {lx};
    code.logical_z = {lz};
    code.geometry = std::move(geo);
    return code;
}

}  // namespace bplcosd
