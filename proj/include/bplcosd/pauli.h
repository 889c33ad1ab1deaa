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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bplcosd/gf2.h"

namespace bplcosd {

/// Single-qubit Pauli, encoded as bit 0 = X component, bit 1 = Z component.
enum class Pauli : uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

constexpr bool x_bit(Pauli p) {
    return static_cast<uint8_t>(p) & 1;
}
constexpr bool z_bit(Pauli p) {
    return static_cast<uint8_t>(p) & 2;
}
constexpr Pauli make_pauli(bool x, bool z) {
    return static_cast<Pauli>(uint8_t{x} | (uint8_t{z} << 1));
}
/// True iff the two single-qubit Paulis anticommute.
constexpr bool anticommutes(Pauli a, Pauli b) {
    return (x_bit(a) && z_bit(b)) != (z_bit(a) && x_bit(b));
}

inline char pauli_char(Pauli p) {
    return "IXZY"[static_cast<uint8_t>(p)];
}
inline Pauli pauli_from_char(char c) {
    switch (c) {
        case 'I':
        case '_':
            return Pauli::I;
        case 'X':
            return Pauli::X;
        case 'Y':
            return Pauli::Y;
        case 'Z':
            return Pauli::Z;
    }
    throw std::invalid_argument(std::string("not a Pauli symbol: '") + c + "'");
}

/// n-qubit Pauli operator modulo phase, kept in binary symplectic form (e^X | e^Z).
class PauliVector {
   public:
    PauliVector() = default;
    explicit PauliVector(size_t n) : x_(n), z_(n) {
    }
    PauliVector(BitVec x, BitVec z) : x_(std::move(x)), z_(std::move(z)) {
        if (x_.size() != z_.size()) {
            throw std::invalid_argument("PauliVector: X and Z parts differ in length");
        }
    }
    static PauliVector from_string(std::string_view text) {
        PauliVector out(text.size());
        for (size_t i = 0; i < text.size(); i++) {
            out.set(i, pauli_from_char(text[i]));
        }
        return out;
    }

    size_t size() const {
        return x_.size();
    }
    Pauli get(size_t i) const {
        return make_pauli(x_.get(i), z_.get(i));
    }
    void set(size_t i, Pauli p) {
        x_.set(i, x_bit(p));
        z_.set(i, z_bit(p));
    }
    const BitVec& x() const {
        return x_;
    }
    const BitVec& z() const {
        return z_;
    }
    BitVec& x() {
        return x_;
    }
    BitVec& z() {
        return z_;
    }

    size_t weight() const {
        size_t w = 0;
        auto xs = x_.words();
        auto zs = z_.words();
        for (size_t k = 0; k < xs.size(); k++) {
            w += std::popcount(xs[k] | zs[k]);
        }
        return w;
    }

    /// Product up to phase.
    PauliVector& operator*=(const PauliVector& other) {
        x_ ^= other.x_;
        z_ ^= other.z_;
        return *this;
    }
    friend PauliVector operator*(PauliVector a, const PauliVector& b) {
        a *= b;
        return a;
    }

    /// 1 iff the operators anticommute.
    bool symplectic_product(const PauliVector& other) const {
        return x_.dot(other.z_) != z_.dot(other.x_);
    }

    std::string str() const {
        std::string s(size(), 'I');
        for (size_t i = 0; i < size(); i++) {
            s[i] = pauli_char(get(i));
        }
        return s;
    }

    bool operator==(const PauliVector& other) const = default;

   private:
    BitVec x_;
    BitVec z_;
};

/// Row r of a check matrix whose first 2n columns are (X-part | Z-part), as a Pauli.
inline PauliVector row_as_pauli(const BitMatrix& h, size_t r, size_t n) {
    if (h.cols() < 2 * n) {
        throw std::invalid_argument("row_as_pauli: matrix narrower than 2n");
    }
    PauliVector p(n);
    for (size_t j = 0; j < n; j++) {
        p.set(j, make_pauli(h.get(r, j), h.get(r, n + j)));
    }
    return p;
}

/// s_i = sum_j (H^X_ij e^Z_j + H^Z_ij e^X_j) mod 2. H may carry the extra identity block of (H | I).
inline BitVec symplectic_syndrome(const BitMatrix& h, const PauliVector& e) {
    size_t n = e.size();
    // Accept H itself or the extended (H | I) with one extra column per row.
    if (h.cols() != 2 * n && h.cols() != 2 * n + h.rows()) {
        throw std::invalid_argument(
            "symplectic_syndrome: H has " + std::to_string(h.cols()) + " columns, expected " + std::to_string(2 * n) +
            " or " + std::to_string(2 * n + h.rows()));
    }
    // Lay out (e^Z | e^X | 0...) so each syndrome bit is a single row dot product.
    BitVec swapped(h.cols());
    for (size_t j : e.z().support()) {
        swapped.set(j, true);
    }
    for (size_t j : e.x().support()) {
        swapped.set(n + j, true);
    }
    return h.mul(swapped);
}

}  // namespace bplcosd
