#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gh/config.hpp"
#include "gh/error.hpp"
#include "gh/metric_space.hpp"

namespace gh {

using IndexPair = std::pair<std::size_t, std::size_t>;

/// A relation between index sets {0..p-1} and {0..q-1}, stored as one bit
/// mask per row (bit j of row i set iff (i, j) is in the relation).
///
/// When p*q <= 64 the relation also has a packed word form with pair (i, j)
/// at bit i*q + j; enumeration order is increasing word order.
class Relation {
public:
    Relation(std::size_t p, std::size_t q) : p_(p), q_(q), rows_(p, 0) {
        if (p == 0 || q == 0) throw StructuralError("relation sides must be non-empty");
        if (q > kMaxColumns) throw ResourceError("relation supports at most 64 columns");
    }

    static Relation from_pairs(std::size_t p, std::size_t q, std::span<const IndexPair> pairs) {
        Relation r(p, q);
        for (auto [i, j] : pairs) r.insert(i, j);
        return r;
    }

    static Relation from_word(std::size_t p, std::size_t q, std::uint64_t word) {
        if (p * q > 64) throw ResourceError("packed word form needs p*q <= 64");
        Relation r(p, q);
        const std::uint64_t row_bits = q == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << q) - 1;
        for (std::size_t i = 0; i < p; ++i) r.rows_[i] = (word >> (i * q)) & row_bits;
        return r;
    }

    std::size_t p() const noexcept { return p_; }
    std::size_t q() const noexcept { return q_; }

    void insert(std::size_t i, std::size_t j) {
        check(i, j);
        rows_[i] |= std::uint64_t{1} << j;
    }
    void erase(std::size_t i, std::size_t j) {
        check(i, j);
        rows_[i] &= ~(std::uint64_t{1} << j);
    }
    bool contains(std::size_t i, std::size_t j) const {
        check(i, j);
        return (rows_[i] >> j) & 1u;
    }

    std::uint64_t row_mask(std::size_t i) const { return rows_.at(i); }

    std::uint64_t column_cover() const noexcept {
        std::uint64_t m = 0;
        for (auto r : rows_) m |= r;
        return m;
    }

    std::size_t size() const noexcept {
        std::size_t c = 0;
        for (auto r : rows_) c += static_cast<std::size_t>(std::popcount(r));
        return c;
    }
    bool empty() const noexcept { return size() == 0; }

    /// Pairs in lexicographic order.
    std::vector<IndexPair> pairs() const {
        std::vector<IndexPair> out;
        for (std::size_t i = 0; i < p_; ++i)
            for (std::uint64_t m = rows_[i]; m; m &= m - 1) out.emplace_back(i, std::countr_zero(m));
        return out;
    }

    std::uint64_t word() const {
        if (p_ * q_ > 64) throw ResourceError("packed word form needs p*q <= 64");
        std::uint64_t w = 0;
        for (std::size_t i = 0; i < p_; ++i) w |= rows_[i] << (i * q_);
        return w;
    }

    /// Left- and right-total.
    bool is_correspondence() const noexcept {
        for (auto r : rows_)
            if (!r) return false;
        const std::uint64_t full = q_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << q_) - 1;
        return column_cover() == full;
    }

    /// Every connected component of the bipartite graph is a star, i.e. no
    /// pair (i, j) has another pair in both row i and column j.
    bool is_star() const {
        std::vector<std::size_t> col_count(q_, 0);
        for (auto [i, j] : pairs()) ++col_count[j];
        for (auto [i, j] : pairs())
            if (std::popcount(rows_[i]) >= 2 && col_count[j] >= 2) return false;
        return true;
    }

    bool operator==(const Relation&) const = default;

private:
    void check(std::size_t i, std::size_t j) const {
        if (i >= p_ || j >= q_) throw StructuralError("relation index out of range");
    }

    std::size_t p_, q_;
    std::vector<std::uint64_t> rows_;
};

/// A relation whose every row and every column holds at least one pair.
class Correspondence {
public:
    explicit Correspondence(Relation r) : r_(std::move(r)) {
        if (!r_.is_correspondence()) throw DomainError("relation is not left- and right-total");
    }

    static Correspondence from_pairs(std::size_t p, std::size_t q, std::span<const IndexPair> pairs) {
        return Correspondence(Relation::from_pairs(p, q, pairs));
    }

    /// The graph of a bijection given as mapping[i] = image of i.
    static Correspondence bijection(std::span<const std::size_t> mapping) {
        Relation r(mapping.size(), mapping.size());
        for (std::size_t i = 0; i < mapping.size(); ++i) r.insert(i, mapping[i]);
        return Correspondence(std::move(r));
    }

    const Relation& relation() const noexcept { return r_; }
    std::size_t p() const noexcept { return r_.p(); }
    std::size_t q() const noexcept { return r_.q(); }
    std::vector<IndexPair> pairs() const { return r_.pairs(); }
    bool contains(std::size_t i, std::size_t j) const { return r_.contains(i, j); }
    std::size_t size() const noexcept { return r_.size(); }

    bool operator==(const Correspondence&) const = default;

private:
    Relation r_;
};

// ---------------------------------------------------------------------------

/// sup over pairs of pairs (x,y), (x',y') in the relation of ||xx'| - |yy'||.
inline double distortion(const FiniteMetricSpace& x, const FiniteMetricSpace& y, const Relation& r) {
    if (r.p() != x.size() || r.q() != y.size())
        throw StructuralError("relation sides do not match the space sizes");
    if (r.empty()) throw DomainError("distortion of an empty relation is undefined");
    const auto ps = r.pairs();
    double dis = 0.0;
    for (std::size_t a = 0; a < ps.size(); ++a)
        for (std::size_t b = a + 1; b < ps.size(); ++b)
            dis = std::max(dis, std::abs(x(ps[a].first, ps[b].first) - y(ps[a].second, ps[b].second)));
    return dis;
}

inline double distortion(const FiniteMetricSpace& x, const FiniteMetricSpace& y, const Correspondence& r) {
    return distortion(x, y, r.relation());
}

/// R(A): every column related to some row in `a`. Sorted, duplicate-free.
inline std::vector<std::size_t> image(const Relation& r, std::span<const std::size_t> a) {
    std::uint64_t m = 0;
    for (auto i : a) m |= r.row_mask(i);
    std::vector<std::size_t> out;
    for (; m; m &= m - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    return out;
}

/// R^{-1}(B): every row related to some column in `b`. Sorted, duplicate-free.
inline std::vector<std::size_t> preimage(const Relation& r, std::span<const std::size_t> b) {
    std::uint64_t want = 0;
    for (auto j : b) {
        if (j >= r.q()) throw StructuralError("relation index out of range");
        want |= std::uint64_t{1} << j;
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < r.p(); ++i)
        if (r.row_mask(i) & want) out.push_back(i);
    return out;
}

// ---------------------------------------------------------------------------
// Enumeration

/// Every p x q correspondence in increasing word order. Requires p*q <= 30.
class CorrespondenceStream {
public:
    CorrespondenceStream(std::size_t p, std::size_t q) : p_(p), q_(q) {
        if (p == 0 || q == 0) throw DomainError("correspondence sides must be non-empty");
        if (p * q > kOracleMaxCells)
            throw ResourceError("full correspondence enumeration is capped at p*q <= 30");
        end_ = std::uint64_t{1} << (p * q);
        row_bits_ = (std::uint64_t{1} << q) - 1;
    }

    std::optional<Correspondence> next() {
        while (word_ < end_) {
            const std::uint64_t w = word_++;
            if (is_total(w)) return Correspondence(Relation::from_word(p_, q_, w));
        }
        return std::nullopt;
    }

    /// Raw-word variant for hot loops; returns false when exhausted.
    bool next_word(std::uint64_t& out) {
        while (word_ < end_) {
            const std::uint64_t w = word_++;
            if (is_total(w)) {
                out = w;
                return true;
            }
        }
        return false;
    }

private:
    bool is_total(std::uint64_t w) const noexcept {
        std::uint64_t cover = 0;
        for (std::size_t i = 0; i < p_; ++i) {
            const std::uint64_t row = (w >> (i * q_)) & row_bits_;
            if (!row) return false;
            cover |= row;
        }
        return cover == row_bits_;
    }

    std::size_t p_, q_;
    std::uint64_t word_ = 0, end_ = 0, row_bits_ = 0;
};

/// Every p x q correspondence whose components are stars, in increasing
/// word order. Requires p, q <= 8.
///
/// Bits are decided from the most significant (pair (p-1, q-1)) down, 0
/// before 1, so leaves come out in numeric order. A prefix dies as soon as
/// it contains a non-star pair (adding pairs never repairs one), a finished
/// row is empty, or a finished column is empty.
class StarCorrespondenceStream {
public:
    StarCorrespondenceStream(std::size_t p, std::size_t q)
        : p_(p), q_(q), bits_(p * q), value_(p * q, 0), row_count_(p, 0), col_count_(q, 0) {
        if (p == 0 || q == 0) throw DomainError("correspondence sides must be non-empty");
        if (p > kStarMaxSide || q > kStarMaxSide)
            throw ResourceError("star enumeration is capped at p, q <= 8");
    }

    std::optional<Correspondence> next() {
        if (done_) return std::nullopt;
        if (!advance()) {
            done_ = true;
            return std::nullopt;
        }
        return Correspondence(Relation::from_word(p_, q_, word_));
    }

private:
    bool advance() {
        bool need_backtrack = emitted_;
        emitted_ = true;
        for (;;) {
            if (need_backtrack) {
                need_backtrack = false;
                for (;;) {
                    if (depth_ == 0) return false;
                    --depth_;
                    const bool was_one = value_[depth_] == 1;
                    unassign(depth_);
                    if (!was_one && assign(depth_, 1)) {
                        ++depth_;
                        break;
                    }
                }
                continue;
            }
            if (depth_ == bits_) return true;
            if (assign(depth_, 0) || assign(depth_, 1)) {
                ++depth_;
            } else {
                need_backtrack = true;
            }
        }
    }

    bool assign(std::size_t depth, int v) {
        const std::size_t b = bits_ - 1 - depth;
        const std::size_t i = b / q_, j = b % q_;
        value_[depth] = static_cast<char>(v);
        if (v == 1) {
            word_ |= std::uint64_t{1} << b;
            ++row_count_[i];
            ++col_count_[j];
            if (violates_around(i, j)) {
                unassign(depth);
                return false;
            }
        }
        if ((j == 0 && row_count_[i] == 0) || (i == 0 && col_count_[j] == 0)) {
            unassign(depth);
            return false;
        }
        return true;
    }

    void unassign(std::size_t depth) {
        const std::size_t b = bits_ - 1 - depth;
        if (value_[depth] == 1) {
            word_ &= ~(std::uint64_t{1} << b);
            --row_count_[b / q_];
            --col_count_[b % q_];
        }
        value_[depth] = 0;
    }

    bool has(std::size_t i, std::size_t j) const { return (word_ >> (i * q_ + j)) & 1u; }

    bool violates_around(std::size_t i, std::size_t j) const {
        for (std::size_t jj = 0; jj < q_; ++jj)
            if (has(i, jj) && row_count_[i] >= 2 && col_count_[jj] >= 2) return true;
        for (std::size_t ii = 0; ii < p_; ++ii)
            if (has(ii, j) && row_count_[ii] >= 2 && col_count_[j] >= 2) return true;
        return false;
    }

    std::size_t p_, q_, bits_;
    std::vector<char> value_;
    std::vector<int> row_count_, col_count_;
    std::uint64_t word_ = 0;
    std::size_t depth_ = 0;
    bool emitted_ = false;
    bool done_ = false;
};

inline CorrespondenceStream enumerate_correspondences(std::size_t p, std::size_t q) { return {p, q}; }
inline StarCorrespondenceStream enumerate_star_correspondences(std::size_t p, std::size_t q) { return {p, q}; }

/// Visits every correspondence between x and y with distortion strictly
/// below `threshold`; returns how many were visited. Exhaustive: rows take
/// every non-empty column subset in increasing mask order and a branch is cut
/// only once its partial distortion already reaches the threshold.
inline std::size_t for_each_correspondence_below(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                                                 double threshold,
                                                 const std::function<void(const Correspondence&, double)>& visit) {
    const std::size_t p = x.size(), q = y.size();
    if (q > kMaxColumns) throw ResourceError("relation supports at most 64 columns");
    const std::uint64_t full = q == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << q) - 1;
    std::vector<std::uint64_t> rows(p, 0);
    std::size_t count = 0;

    auto rec = [&](auto&& self, std::size_t i, double partial, std::uint64_t cover) -> void {
        if (i == p) {
            if (cover != full) return;
            Relation r(p, q);
            for (std::size_t a = 0; a < p; ++a)
                for (std::uint64_t m = rows[a]; m; m &= m - 1) r.insert(a, std::countr_zero(m));
            ++count;
            visit(Correspondence(std::move(r)), partial);
            return;
        }
        for (std::uint64_t s = 1; s <= full && s != 0; ++s) {
            double local = partial;
            // New pairs (i, j) against each other and against earlier rows.
            for (std::uint64_t m = s; m && local < threshold; m &= m - 1) {
                const std::size_t j = std::countr_zero(m);
                for (std::uint64_t m2 = m & (m - 1); m2; m2 &= m2 - 1)
                    local = std::max(local, y(j, std::countr_zero(m2)));
                for (std::size_t a = 0; a < i && local < threshold; ++a)
                    for (std::uint64_t m3 = rows[a]; m3; m3 &= m3 - 1)
                        local = std::max(local, std::abs(x(i, a) - y(j, std::countr_zero(m3))));
            }
            if (local >= threshold) continue;
            rows[i] = s;
            self(self, i + 1, local, cover | s);
            rows[i] = 0;
            if (s == full) break;
        }
    };
    rec(rec, 0, 0.0, 0);
    return count;
}

/// Minimum distortion over bijections x -> y, or nullopt when |x| != |y|.
struct BijectionResult {
    double distortion;
    std::vector<std::size_t> mapping;
};

inline std::optional<BijectionResult> min_bijection_distortion(const FiniteMetricSpace& x,
                                                               const FiniteMetricSpace& y) {
    if (x.size() != y.size()) return std::nullopt;
    auto s = detail::min_distortion_bijection(x, y, /*exclude_identity=*/false);
    return BijectionResult{s.distortion, std::move(s.mapping)};
}

}  // namespace gh
