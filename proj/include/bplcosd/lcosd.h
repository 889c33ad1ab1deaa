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

// Ordered statistics decoding with local constraints over an arbitrary binary parity-check
// matrix. The most reliable information set (MRIS) holds k'+delta positions; the delta extra
// positions bring parity constraints that every enumerated MRIS pattern must satisfy, so each
// legal pattern re-encodes to exactly one codeword.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bplcosd/gf2.h"

namespace bplcosd {

/// Constraint counts above this make the trellis table too large to allocate per decode.
inline constexpr size_t kMaxConstraints = 20;

struct LcosdConfig {
    int delta = 8;
    size_t l_max = 1024;

    void validate() const {
        if (delta < 0 || static_cast<size_t>(delta) > kMaxConstraints) {
            throw std::invalid_argument(
                "LcosdConfig: delta must lie in [0, " + std::to_string(kMaxConstraints) + "]");
        }
        if (l_max < 1) {
            throw std::invalid_argument("LcosdConfig: l_max must be at least 1");
        }
    }
};

struct LcosdWorkspace {
    size_t num_bits = 0;
    size_t rank = 0;
    /// All positions by descending reliability, ties by ascending index.
    std::vector<size_t> perm;
    /// MRIS positions in ascending reliability; mris[0] is the least reliable.
    std::vector<size_t> mris;
    BitVec mris_mask;
    /// min(delta, rank) independent rows supported inside the MRIS.
    std::vector<BitVec> constraint_rows;
    /// One row per non-MRIS position; the row is 1 at its pivot and zero at every other
    /// non-MRIS position.
    std::vector<BitVec> systematic_rows;
    std::vector<size_t> systematic_pivots;

    size_t num_constraints() const {
        return constraint_rows.size();
    }
};

/// Orders positions, picks the MRIS and splits H' into systematic and constraint rows.
///
/// Gauss-Jordan pivots are taken greedily from the least reliable position upwards. The first
/// rank-delta pivots form the complement of the MRIS; the rows pivoting at the delta most
/// reliable pivots are zero on that complement and become the local constraints. Positions that
/// never pivot are all in the MRIS, so it has k'+delta positions.
inline LcosdWorkspace select_mris(const BitMatrix& h, std::span<const double> reliabilities, int delta) {
    const size_t n = h.cols();
    if (reliabilities.size() != n) {
        throw std::invalid_argument("select_mris: reliability vector length does not match H'");
    }
    if (delta < 0) {
        throw std::invalid_argument("select_mris: delta must be non-negative");
    }
    LcosdWorkspace ws;
    ws.num_bits = n;
    ws.perm = natural_order(n);
    std::stable_sort(ws.perm.begin(), ws.perm.end(), [&](size_t a, size_t b) {
        return reliabilities[a] > reliabilities[b];
    });

    std::vector<size_t> scan(ws.perm.rbegin(), ws.perm.rend());
    GeResult ge = ge_reduce_partial(h, scan);
    ws.rank = ge.rank;
    const size_t systematic = ge.rank - std::min(ge.rank, static_cast<size_t>(delta));

    std::vector<bool> in_mris(n, true);
    for (size_t i = 0; i < ge.rank; i++) {
        size_t p = ge.pivot_cols[i];
        if (i < systematic) {
            ws.systematic_rows.push_back(ge.reduced.row(i));
            ws.systematic_pivots.push_back(p);
            in_mris[p] = false;
        } else {
            ws.constraint_rows.push_back(ge.reduced.row(i));
        }
    }
    ws.mris_mask = BitVec(n);
    for (size_t p : scan) {
        if (in_mris[p]) {
            ws.mris.push_back(p);
            ws.mris_mask.set(p, true);
        }
    }
    return ws;
}

struct Candidate {
    /// Bit values on the MRIS positions; zero elsewhere.
    BitVec pattern;
    /// Sum of |LLR| over MRIS positions that differ from the hard decision.
    double flip_cost = 0;
};

namespace detail {

/// Best-first enumeration of legal MRIS flip sets in order of (flip cost, flipped-rank sequence).
///
/// Positions are indexed by rank inside the MRIS (0 = least reliable). A flip set is legal when
/// the XOR of its constraint columns equals the constraint syndrome of the hard decision. A
/// backward table gives the exact cheapest completion from every (position, partial syndrome),
/// and the search space is partitioned Murty-style: each queue entry stands for all flip sets
/// that copy an emitted set up to position t and differ at t, and its key is the best member of
/// that set. Popping an entry emits its best member and splits off the rest.
///
/// Cost ties follow lexicographic order on the sorted flipped-rank sequence, a prefix ordering
/// before its extensions.
class FlipEnumerator {
   public:
    FlipEnumerator(std::vector<double> weights, std::vector<uint32_t> columns, uint32_t target, size_t num_constraints)
        : w_(std::move(weights)), a_(std::move(columns)), target_(target), states_(size_t{1} << num_constraints) {
        const size_t k = w_.size();
        const double inf = std::numeric_limits<double>::infinity();
        h_.assign((k + 1) * states_, inf);
        h_[k * states_ + target_] = 0;
        for (size_t i = k; i-- > 0;) {
            for (uint32_t s = 0; s < states_; s++) {
                double keep = h_[(i + 1) * states_ + s];
                double flip = w_[i] + h_[(i + 1) * states_ + (s ^ a_[i])];
                h_[i * states_ + s] = std::min(keep, flip);
            }
        }
        if (h_[0] < inf) {
            heap_.push(Entry{h_[0], kRoot, 0, 0});
        }
    }

    FlipEnumerator(const FlipEnumerator&) = delete;
    FlipEnumerator& operator=(const FlipEnumerator&) = delete;

    bool done() const {
        return heap_.empty();
    }

    /// Next flip set (indicator over MRIS ranks) and its cost.
    std::pair<BitVec, double> next() {
        Entry top = heap_.top();
        heap_.pop();
        BitVec v = materialize(top);
        emitted_.push_back(v);
        const uint32_t id = static_cast<uint32_t>(emitted_.size() - 1);

        // Split off every set that agrees with v before position t and differs at t.
        const size_t k = w_.size();
        size_t start = top.parent == kRoot ? 0 : top.dev + 1;
        double prefix = 0;
        uint32_t s = 0;
        for (size_t t = 0; t < k; t++) {
            bool bit = v.get(t);
            if (t >= start) {
                bool alt = !bit;
                uint32_t s_alt = alt ? s ^ a_[t] : s;
                double rest = h_[(t + 1) * states_ + s_alt];
                if (rest < std::numeric_limits<double>::infinity()) {
                    heap_.push(Entry{prefix + (alt ? w_[t] : 0.0) + rest, id, static_cast<uint32_t>(t), s_alt});
                }
            }
            if (bit) {
                prefix += w_[t];
                s ^= a_[t];
            }
        }
        return {std::move(v), top.cost};
    }

   private:
    static constexpr uint32_t kRoot = std::numeric_limits<uint32_t>::max();

    struct Entry {
        double cost;
        uint32_t parent;
        uint32_t dev;
        uint32_t state;  // partial syndrome after position dev
    };

    /// Cheapest completion from (i, s) under the tie rule, written into v[i..).
    void fill_best_suffix(BitVec& v, size_t i, uint32_t s) const {
        const size_t k = w_.size();
        for (; i < k; i++) {
            if (s == target_) {
                // Stopping here is legal, costs nothing and is the lexicographically smallest.
                for (size_t t = i; t < k; t++) {
                    v.set(t, false);
                }
                return;
            }
            double keep = h_[(i + 1) * states_ + s];
            double flip = w_[i] + h_[(i + 1) * states_ + (s ^ a_[i])];
            bool take = flip <= keep;
            v.set(i, take);
            if (take) {
                s ^= a_[i];
            }
        }
    }

    BitVec materialize(const Entry& e) const {
        if (e.parent == kRoot) {
            BitVec v(w_.size());
            fill_best_suffix(v, 0, 0);
            return v;
        }
        BitVec v = emitted_[e.parent];
        v.flip(e.dev);
        fill_best_suffix(v, e.dev + 1, e.state);
        return v;
    }

    /// Lexicographic order of sorted flip sequences, a proper prefix first.
    static bool lex_less(const BitVec& f, const BitVec& g) {
        auto fw = f.words();
        auto gw = g.words();
        for (size_t w = 0; w < fw.size(); w++) {
            uint64_t diff = fw[w] ^ gw[w];
            if (!diff) {
                continue;
            }
            size_t i = w * 64 + std::countr_zero(diff);
            const BitVec& has = f.get(i) ? f : g;
            const BitVec& lacks = f.get(i) ? g : f;
            bool lacks_has_more = false;
            for (size_t t = i + 1; t < lacks.size() && !lacks_has_more; t++) {
                lacks_has_more = lacks.get(t);
            }
            // The set flipping i is smaller unless the other one stops before i.
            bool has_is_smaller = lacks_has_more;
            return (&has == &f) == has_is_smaller;
        }
        return false;
    }

    struct Later {
        const FlipEnumerator* self;
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.cost != b.cost) {
                return a.cost > b.cost;
            }
            return lex_less(self->materialize(b), self->materialize(a));
        }
    };

    std::vector<double> w_;
    std::vector<uint32_t> a_;
    uint32_t target_;
    uint32_t states_;
    std::vector<double> h_;
    std::vector<BitVec> emitted_;
    std::priority_queue<Entry, std::vector<Entry>, Later> heap_{Later{this}};
};

}  // namespace detail

/// Legal MRIS patterns in nondecreasing flip cost, starting from the hard decision of `llrs`
/// (bit 1 iff LLR < 0), at most l_max of them.
inline std::vector<Candidate> enumerate_candidates(
    const LcosdWorkspace& ws, std::span<const double> llrs, size_t l_max) {
    if (llrs.size() != ws.num_bits) {
        throw std::invalid_argument("enumerate_candidates: LLR vector length does not match workspace");
    }
    const size_t delta = ws.num_constraints();
    if (delta > kMaxConstraints) {
        throw std::runtime_error(
            "enumerate_candidates: " + std::to_string(delta) + " local constraints exceed the supported " +
            std::to_string(kMaxConstraints));
    }
    const size_t k = ws.mris.size();
    std::vector<double> weights(k);
    std::vector<uint32_t> columns(k, 0);
    BitVec hard(ws.num_bits);
    uint32_t target = 0;
    for (size_t i = 0; i < k; i++) {
        size_t pos = ws.mris[i];
        weights[i] = std::abs(llrs[pos]);
        for (size_t c = 0; c < delta; c++) {
            if (ws.constraint_rows[c].get(pos)) {
                columns[i] |= uint32_t{1} << c;
            }
        }
        if (llrs[pos] < 0) {
            hard.set(pos, true);
            target ^= columns[i];
        }
    }

    std::vector<Candidate> out;
    detail::FlipEnumerator en(std::move(weights), std::move(columns), target, delta);
    while (out.size() < l_max && !en.done()) {
        auto [flips, cost] = en.next();
        Candidate cand{hard, cost};
        for (size_t i : flips.support()) {
            cand.pattern.flip(ws.mris[i]);
        }
        out.push_back(std::move(cand));
    }
    return out;
}

/// Fills every non-MRIS position from its systematic row. Throws if the pattern violates a
/// local constraint.
inline BitVec reencode(const LcosdWorkspace& ws, const BitVec& pattern) {
    if (pattern.size() != ws.num_bits) {
        throw std::invalid_argument("reencode: pattern length does not match workspace");
    }
    BitVec c = pattern;
    // Only MRIS bits count.
    auto cw = c.words();
    auto mw = ws.mris_mask.words();
    for (size_t w = 0; w < cw.size(); w++) {
        cw[w] &= mw[w];
    }
    for (const BitVec& row : ws.constraint_rows) {
        if (row.dot(c)) {
            throw std::invalid_argument("reencode: pattern violates a local constraint");
        }
    }
    std::vector<bool> values(ws.systematic_rows.size());
    for (size_t r = 0; r < ws.systematic_rows.size(); r++) {
        values[r] = ws.systematic_rows[r].dot(c);
    }
    for (size_t r = 0; r < ws.systematic_rows.size(); r++) {
        c.set(ws.systematic_pivots[r], values[r]);
    }
    return c;
}

/// Sum of LLRs over the support of c; lower means more likely.
inline double quality(const BitVec& c, std::span<const double> llrs) {
    double total = 0;
    for (size_t i : c.support()) {
        total += llrs[i];
    }
    return total;
}

struct LcosdResult {
    BitVec codeword;
    double quality = 0;
    size_t list_size = 0;
    size_t num_constraints = 0;
};

inline LcosdResult lcosd_decode(const BitMatrix& h, std::span<const double> llrs, const LcosdConfig& config) {
    config.validate();
    if (llrs.size() != h.cols()) {
        throw std::invalid_argument("lcosd_decode: LLR vector length does not match H'");
    }
    std::vector<double> reliabilities(llrs.size());
    std::transform(llrs.begin(), llrs.end(), reliabilities.begin(), [](double v) { return std::abs(v); });
    LcosdWorkspace ws = select_mris(h, reliabilities, config.delta);
    std::vector<Candidate> list = enumerate_candidates(ws, llrs, config.l_max);
    if (list.empty()) {
        // The all-zero word is always legal, so this means the workspace is inconsistent.
        throw std::logic_error("lcosd_decode: no legal MRIS pattern found");
    }
    LcosdResult best;
    best.list_size = list.size();
    best.num_constraints = ws.num_constraints();
    bool have = false;
    for (const Candidate& cand : list) {
        BitVec c = reencode(ws, cand.pattern);
        double q = quality(c, llrs);
        if (!have || q < best.quality) {
            best.codeword = std::move(c);
            best.quality = q;
            have = true;
        }
    }
    return best;
}

}  // namespace bplcosd
