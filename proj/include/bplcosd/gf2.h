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
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bplcosd {

/// Fixed-length bit vector packed into 64-bit words. Bits past size() are always zero.
class BitVec {
   public:
    BitVec() = default;
    explicit BitVec(size_t n) : size_(n), words_((n + 63) / 64, 0) {
    }

    /// Parses a string of '0'/'1'. Spaces and '|' are ignored so "01000 01000 | 1101" works.
    static BitVec from_string(std::string_view text) {
        size_t n = 0;
        for (char ch : text) {
            if (ch == '0' || ch == '1') {
                n++;
            } else if (ch != ' ' && ch != '|') {
                throw std::invalid_argument("BitVec::from_string: unexpected character '" + std::string(1, ch) + "'");
            }
        }
        BitVec v(n);
        size_t k = 0;
        for (char ch : text) {
            if (ch == '0' || ch == '1') {
                v.set(k++, ch == '1');
            }
        }
        return v;
    }

    size_t size() const {
        return size_;
    }
    size_t num_words() const {
        return words_.size();
    }
    std::span<const uint64_t> words() const {
        return words_;
    }
    std::span<uint64_t> words() {
        return words_;
    }

    bool get(size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1;
    }
    void set(size_t i, bool value) {
        uint64_t mask = uint64_t{1} << (i & 63);
        if (value) {
            words_[i >> 6] |= mask;
        } else {
            words_[i >> 6] &= ~mask;
        }
    }
    void flip(size_t i) {
        words_[i >> 6] ^= uint64_t{1} << (i & 63);
    }
    void clear() {
        std::fill(words_.begin(), words_.end(), 0);
    }

    BitVec& operator^=(const BitVec& other) {
        check_same_size(other);
        for (size_t w = 0; w < words_.size(); w++) {
            words_[w] ^= other.words_[w];
        }
        return *this;
    }
    friend BitVec operator^(BitVec a, const BitVec& b) {
        a ^= b;
        return a;
    }

    /// Inner product over GF(2).
    bool dot(const BitVec& other) const {
        check_same_size(other);
        uint64_t acc = 0;
        for (size_t w = 0; w < words_.size(); w++) {
            acc ^= words_[w] & other.words_[w];
        }
        return std::popcount(acc) & 1;
    }

    size_t weight() const {
        size_t total = 0;
        for (uint64_t w : words_) {
            total += std::popcount(w);
        }
        return total;
    }
    bool any() const {
        return std::any_of(words_.begin(), words_.end(), [](uint64_t w) { return w != 0; });
    }

    /// Indices of set bits in ascending order.
    std::vector<size_t> support() const {
        std::vector<size_t> out;
        for (size_t w = 0; w < words_.size(); w++) {
            uint64_t bits = words_[w];
            while (bits) {
                out.push_back(w * 64 + std::countr_zero(bits));
                bits &= bits - 1;
            }
        }
        return out;
    }

    /// Copy of bits [begin, begin + len).
    BitVec slice(size_t begin, size_t len) const {
        if (begin + len > size_) {
            throw std::out_of_range("BitVec::slice out of range");
        }
        BitVec out(len);
        for (size_t i = 0; i < len; i++) {
            if (get(begin + i)) {
                out.set(i, true);
            }
        }
        return out;
    }

    std::string str() const {
        std::string s(size_, '0');
        for (size_t i = 0; i < size_; i++) {
            if (get(i)) {
                s[i] = '1';
            }
        }
        return s;
    }

    bool operator==(const BitVec& other) const = default;

   private:
    void check_same_size(const BitVec& other) const {
        if (other.size_ != size_) {
            throw std::invalid_argument(
                "BitVec size mismatch: " + std::to_string(size_) + " vs " + std::to_string(other.size_));
        }
    }

    size_t size_ = 0;
    std::vector<uint64_t> words_;
};

/// Dense binary matrix stored as packed rows.
class BitMatrix {
   public:
    BitMatrix() = default;
    BitMatrix(size_t rows, size_t cols) : cols_(cols), rows_(rows, BitVec(cols)) {
    }

    /// Rows given as '0'/'1' strings (spaces and '|' ignored); all rows must have equal length.
    static BitMatrix from_rows(std::initializer_list<std::string_view> rows) {
        return from_rows(std::vector<std::string_view>(rows));
    }
    static BitMatrix from_rows(const std::vector<std::string_view>& rows) {
        BitMatrix m;
        for (auto text : rows) {
            m.append_row(BitVec::from_string(text));
        }
        return m;
    }

    static BitMatrix identity(size_t n) {
        BitMatrix m(n, n);
        for (size_t i = 0; i < n; i++) {
            m.set(i, i, true);
        }
        return m;
    }

    /// (a | b)
    static BitMatrix hconcat(const BitMatrix& a, const BitMatrix& b) {
        if (a.rows() != b.rows()) {
            throw std::invalid_argument("BitMatrix::hconcat: row count mismatch");
        }
        BitMatrix m(a.rows(), a.cols() + b.cols());
        for (size_t r = 0; r < a.rows(); r++) {
            for (size_t c : a.row(r).support()) {
                m.set(r, c, true);
            }
            for (size_t c : b.row(r).support()) {
                m.set(r, a.cols() + c, true);
            }
        }
        return m;
    }

    void append_row(BitVec row) {
        if (rows_.empty() && cols_ == 0) {
            cols_ = row.size();
        } else if (row.size() != cols_) {
            throw std::invalid_argument("BitMatrix::append_row: width mismatch");
        }
        rows_.push_back(std::move(row));
    }

    size_t rows() const {
        return rows_.size();
    }
    size_t cols() const {
        return cols_;
    }

    bool get(size_t r, size_t c) const {
        return rows_[r].get(c);
    }
    void set(size_t r, size_t c, bool value) {
        rows_[r].set(c, value);
    }
    const BitVec& row(size_t r) const {
        return rows_[r];
    }
    BitVec& row(size_t r) {
        return rows_[r];
    }
    void swap_rows(size_t a, size_t b) {
        std::swap(rows_[a], rows_[b]);
    }

    BitVec column(size_t c) const {
        BitVec out(rows());
        for (size_t r = 0; r < rows(); r++) {
            if (get(r, c)) {
                out.set(r, true);
            }
        }
        return out;
    }

    /// M·v over GF(2).
    BitVec mul(const BitVec& v) const {
        if (v.size() != cols_) {
            throw std::invalid_argument("BitMatrix::mul: dimension mismatch");
        }
        BitVec out(rows());
        for (size_t r = 0; r < rows(); r++) {
            if (rows_[r].dot(v)) {
                out.set(r, true);
            }
        }
        return out;
    }

    bool operator==(const BitMatrix& other) const = default;

   private:
    size_t cols_ = 0;
    std::vector<BitVec> rows_;
};

/// Outcome of Gauss-Jordan elimination. Rows [0, rank) of `reduced` are pivot rows; row i has
/// its pivot at pivot_cols[i] and that column is zero in every other row. row_map[i] is the
/// original index of the row now stored at position i.
struct GeResult {
    BitMatrix reduced;
    std::vector<size_t> pivot_cols;
    size_t rank = 0;
    std::vector<size_t> row_map;
};

/// Gauss-Jordan elimination that only looks for pivots in `scan_cols`, in the given order.
/// Rows left without a pivot are zero on every scanned column.
inline GeResult ge_reduce_partial(const BitMatrix& m, std::span<const size_t> scan_cols) {
    GeResult res;
    res.reduced = m;
    res.row_map.resize(m.rows());
    for (size_t i = 0; i < m.rows(); i++) {
        res.row_map[i] = i;
    }
    BitMatrix& a = res.reduced;
    size_t r = 0;
    for (size_t col : scan_cols) {
        if (r == a.rows()) {
            break;
        }
        size_t found = r;
        while (found < a.rows() && !a.get(found, col)) {
            found++;
        }
        if (found == a.rows()) {
            continue;
        }
        if (found != r) {
            a.swap_rows(found, r);
            std::swap(res.row_map[found], res.row_map[r]);
        }
        for (size_t j = 0; j < a.rows(); j++) {
            if (j != r && a.get(j, col)) {
                a.row(j) ^= a.row(r);
            }
        }
        res.pivot_cols.push_back(col);
        r++;
    }
    res.rank = r;
    return res;
}

/// Full Gauss-Jordan elimination choosing pivots greedily in `col_preference` order, which must
/// be a permutation of 0..cols-1.
inline GeResult ge_reduce(const BitMatrix& m, std::span<const size_t> col_preference) {
    if (col_preference.size() != m.cols()) {
        throw std::invalid_argument("ge_reduce: column preference must list every column");
    }
    std::vector<bool> seen(m.cols(), false);
    for (size_t c : col_preference) {
        if (c >= m.cols() || seen[c]) {
            throw std::invalid_argument("ge_reduce: column preference is not a permutation");
        }
        seen[c] = true;
    }
    return ge_reduce_partial(m, col_preference);
}

inline std::vector<size_t> natural_order(size_t n) {
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; i++) {
        order[i] = i;
    }
    return order;
}

inline GeResult ge_reduce(const BitMatrix& m) {
    auto order = natural_order(m.cols());
    return ge_reduce_partial(m, order);
}

inline size_t rank(const BitMatrix& m) {
    return ge_reduce(m).rank;
}

/// Basis of {v : M·v = 0}; one vector per non-pivot column.
inline std::vector<BitVec> nullspace_basis(const BitMatrix& m) {
    GeResult ge = ge_reduce(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (size_t c : ge.pivot_cols) {
        is_pivot[c] = true;
    }
    std::vector<BitVec> basis;
    for (size_t f = 0; f < m.cols(); f++) {
        if (is_pivot[f]) {
            continue;
        }
        BitVec v(m.cols());
        v.set(f, true);
        for (size_t i = 0; i < ge.rank; i++) {
            if (ge.reduced.get(i, f)) {
                v.set(ge.pivot_cols[i], true);
            }
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace bplcosd
