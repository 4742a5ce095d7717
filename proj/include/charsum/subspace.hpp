#pragma once

// Affine subspaces L = {x : A x = b} of A^n(F_q): position with respect to the
// coordinate hyperplanes, the incidence counts a_j, the degree D_L, and
// enumeration of L(F_{q^r}).

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "charsum/error.hpp"
#include "charsum/ff_core.hpp"

namespace charsum {

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000'000;

namespace detail {

/// Calls fn(subset) for every k-subset of {0..n-1}, in lexicographic order.
template <typename Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
    if (k > n) return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        fn(std::span<const std::size_t>(idx));
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

inline std::uint64_t checked_pow(std::uint64_t base, std::uint64_t e, std::uint64_t cap) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < e; ++i) {
        if (r > cap / base) return cap + 1;
        r *= base;
    }
    return r;
}

}  // namespace detail

class AffineSubspace {
public:
    AffineSubspace() = default;

    /// Requires 1 <= rows(A) <= cols(A) and rank(A) = rows(A).
    AffineSubspace(Field field, Matrix a, std::vector<FieldElem> b)
        : field_(std::move(field)), a_(std::move(a)), b_(std::move(b)) {
        if (a_.rows() != b_.size()) throw Error(ErrorKind::InvalidArgument, "A and b have different row counts");
        if (a_.rows() < 1 || a_.rows() > a_.cols())
            throw Error(ErrorKind::InvalidArgument, "codimension must satisfy 1 <= m <= n");
        for (FieldElem x : a_.data()) field_.elem(x.code);
        for (FieldElem x : b_) field_.elem(x.code);
        if (rank(field_, a_) != a_.rows()) throw Error(ErrorKind::RankDeficient, "A does not have maximal rank");
    }

    const Field& field() const { return field_; }
    const Matrix& A() const { return a_; }
    const std::vector<FieldElem>& b() const { return b_; }
    std::size_t n() const { return a_.cols(); }
    std::size_t m() const { return a_.rows(); }
    std::size_t d() const { return a_.cols() - a_.rows(); }

    /// The same equations read over the extension field.
    AffineSubspace over(const FieldEmbedding& emb) const {
        if (!(emb.base() == field_)) throw Error(ErrorKind::FieldMismatch, "embedding base differs from subspace field");
        std::vector<FieldElem> data;
        data.reserve(a_.data().size());
        for (FieldElem x : a_.data()) data.push_back(emb.image(x));
        std::vector<FieldElem> rhs;
        for (FieldElem x : b_) rhs.push_back(emb.image(x));
        return AffineSubspace(emb.ext(), Matrix(m(), n(), std::move(data)), std::move(rhs));
    }

private:
    Field field_;
    Matrix a_;
    std::vector<FieldElem> b_;
};

/// Dimension of L intersected with {x_i = 0 : i in I}; -1 when empty.
inline std::int64_t dim_intersection(const AffineSubspace& L, std::span<const std::size_t> I) {
    const Field& f = L.field();
    const std::size_t n = L.n();
    const std::size_t rows = L.m() + I.size();
    Matrix aug(rows, n + 1);
    for (std::size_t i = 0; i < L.m(); ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = L.A()(i, j);
        aug(i, n) = L.b()[i];
    }
    for (std::size_t k = 0; k < I.size(); ++k) {
        if (I[k] >= n) throw Error(ErrorKind::InvalidArgument, "coordinate index out of range");
        aug(L.m() + k, I[k]) = f.one();
    }
    const auto red = row_reduce(f, std::move(aug));
    if (!red.pivots.empty() && red.pivots.back() == n) return -1;
    return static_cast<std::int64_t>(n) - static_cast<std::int64_t>(red.rank);
}

enum class Position { GeneralPosition, GeneralAmongTranslates, Neither };

inline std::string_view to_string(Position p) {
    switch (p) {
        case Position::GeneralPosition: return "GeneralPosition";
        case Position::GeneralAmongTranslates: return "GeneralAmongTranslates";
        case Position::Neither: return "Neither";
    }
    return "Unknown";
}

inline Position position_from_string(std::string_view s) {
    if (s == "GeneralPosition") return Position::GeneralPosition;
    if (s == "GeneralAmongTranslates") return Position::GeneralAmongTranslates;
    if (s == "Neither") return Position::Neither;
    throw Error(ErrorKind::InvalidArgument, "unknown position class: " + std::string(s));
}

struct PositionReport {
    Position classification = Position::Neither;
    /// For Neither: a subset I (0-based) with dim(L cap H_I) > d - |I|.
    std::vector<std::size_t> witness;
    /// a[j-1] = number of j-subsets I with L cap H_I nonempty, j = 1..d.
    std::vector<std::uint64_t> a;
    std::int64_t degree = 0;

    bool admissible() const { return classification != Position::Neither; }
};

/// D_L = (-1)^d + sum_{j=1}^d (-1)^{d+j} a_j
inline std::int64_t degree_from_counts(std::size_t d, std::span<const std::uint64_t> a) {
    std::int64_t total = d % 2 == 0 ? 1 : -1;
    for (std::size_t j = 1; j <= d; ++j) {
        const std::int64_t term = static_cast<std::int64_t>(a[j - 1]);
        total += (d + j) % 2 == 0 ? term : -term;
    }
    return total;
}

/// Inspects every I with |I| <= d + 1.
inline PositionReport classify_position(const AffineSubspace& L) {
    const std::size_t n = L.n();
    const std::size_t d = L.d();
    PositionReport rep;
    rep.a.assign(d, 0);
    bool general = true;
    bool among_translates = true;
    for (std::size_t k = 0; k <= std::min(d + 1, n); ++k) {
        const std::int64_t expected = static_cast<std::int64_t>(d) - static_cast<std::int64_t>(k);
        detail::for_each_subset(n, k, [&](std::span<const std::size_t> I) {
            const std::int64_t dim = dim_intersection(L, I);
            if (dim != expected) general = false;
            if (dim > expected && among_translates) {
                among_translates = false;
                rep.witness.assign(I.begin(), I.end());
            }
            if (k >= 1 && k <= d && dim >= 0) ++rep.a[k - 1];
        });
    }
    rep.classification = general            ? Position::GeneralPosition
                         : among_translates ? Position::GeneralAmongTranslates
                                            : Position::Neither;
    rep.degree = degree_from_counts(d, rep.a);
    return rep;
}

/// True iff every m x m minor of (A|b) is nonzero.
inline bool minors_criterion(const AffineSubspace& L) {
    const Field& f = L.field();
    const std::size_t m = L.m();
    const std::size_t n = L.n();
    bool ok = true;
    detail::for_each_subset(n + 1, m, [&](std::span<const std::size_t> cols) {
        if (!ok) return;
        Matrix sq(m, m);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) sq(i, j) = cols[j] == n ? L.b()[i] : L.A()(i, cols[j]);
        }
        if (determinant(f, std::move(sq)).code == 0) ok = false;
    });
    return ok;
}

/// True iff b lies outside every proper subspace of F_q^m spanned by columns of A.
inline bool translates_criterion(const AffineSubspace& L) {
    const Field& f = L.field();
    const std::size_t m = L.m();
    const std::size_t n = L.n();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<std::size_t> cols;
        for (std::size_t j = 0; j < n; ++j) {
            if (mask >> j & 1) cols.push_back(j);
        }
        Matrix span_b(m, cols.size() + 1);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t k = 0; k < cols.size(); ++k) span_b(i, k) = L.A()(i, cols[k]);
            span_b(i, cols.size()) = L.b()[i];
        }
        const auto red = row_reduce(f, span_b);
        const bool b_outside = !red.pivots.empty() && red.pivots.back() == cols.size();
        const std::size_t span_rank = red.rank - (b_outside ? 1 : 0);
        if (span_rank < m && !b_outside) return false;
    }
    return true;
}

/// Enumerates L(F_{q^r}) by iterating the free coordinates of a one-time row
/// reduction in lexicographic order of their codes and back-substituting the
/// pivots. The index space [0, count()) can be split into contiguous chunks.
class PointEnumerator {
public:
    PointEnumerator(const AffineSubspace& L, std::uint32_t r, std::uint64_t cap = kDefaultEnumerationCap,
                    std::uint64_t field_cap = kDefaultFieldCap)
        : emb_(extend(L.field(), r, field_cap)), n_(L.n()) {
        const Field& ext = emb_.ext();
        const std::size_t m = L.m();
        const std::size_t d = L.d();
        count_ = detail::checked_pow(ext.q(), d, cap);
        if (count_ > cap)
            throw Error(ErrorKind::CapExceeded, std::to_string(ext.q()) + "^" + std::to_string(d) +
                                                    " points exceed enumeration cap " + std::to_string(cap));
        Matrix aug(m, n_ + 1);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n_; ++j) aug(i, j) = emb_.image(L.A()(i, j));
            aug(i, n_) = emb_.image(L.b()[i]);
        }
        const auto red = row_reduce(ext, std::move(aug));
        pivots_ = red.pivots;
        std::vector<bool> is_pivot(n_, false);
        for (std::size_t p : pivots_) is_pivot[p] = true;
        for (std::size_t j = 0; j < n_; ++j) {
            if (!is_pivot[j]) free_.push_back(j);
        }
        rhs_.resize(m);
        for (std::size_t i = 0; i < m; ++i) rhs_[i] = red.reduced(i, n_);
        // contrib_[(k * m + i) * Q + t] = -R[i][free_k] * t
        const std::uint32_t Q = ext.q();
        contrib_.resize(d * m * Q);
        for (std::size_t k = 0; k < d; ++k) {
            for (std::size_t i = 0; i < m; ++i) {
                const FieldElem coef = ext.neg(red.reduced(i, free_[k]));
                for (std::uint32_t t = 0; t < Q; ++t) contrib_[(k * m + i) * Q + t] = ext.mul(coef, FieldElem{t});
            }
        }
    }

    const FieldEmbedding& embedding() const { return emb_; }
    const Field& field() const { return emb_.ext(); }
    std::uint64_t count() const { return count_; }
    std::size_t ambient_dimension() const { return n_; }

    /// Calls fn(std::span<const FieldElem>) for each point with index in [begin, end).
    template <typename Fn>
    void for_each(std::uint64_t begin, std::uint64_t end, Fn&& fn) const {
        end = std::min(end, count_);
        if (begin >= end) return;
        const Field& ext = emb_.ext();
        const std::uint32_t Q = ext.q();
        const std::size_t m = pivots_.size();
        const std::size_t d = free_.size();

        std::vector<std::uint32_t> digits(d, 0);
        std::uint64_t rest = begin;
        for (std::size_t k = d; k-- > 0;) {
            digits[k] = static_cast<std::uint32_t>(rest % Q);
            rest /= Q;
        }
        // partial[k * m + i]: pivot i after adding the first k free coordinates
        std::vector<FieldElem> partial((d + 1) * m);
        for (std::size_t i = 0; i < m; ++i) partial[i] = rhs_[i];
        std::vector<FieldElem> x(n_);
        auto refresh_from = [&](std::size_t level) {
            for (std::size_t k = level; k < d; ++k) {
                x[free_[k]] = FieldElem{digits[k]};
                const FieldElem* prev = &partial[k * m];
                FieldElem* next = &partial[(k + 1) * m];
                const FieldElem* row = &contrib_[k * m * Q];
                for (std::size_t i = 0; i < m; ++i) next[i] = ext.add(prev[i], row[i * Q + digits[k]]);
            }
            const FieldElem* last = &partial[d * m];
            for (std::size_t i = 0; i < m; ++i) x[pivots_[i]] = last[i];
        };
        refresh_from(0);
        for (std::uint64_t idx = begin;;) {
            fn(std::span<const FieldElem>(x));
            if (++idx == end) break;
            std::size_t k = d;
            while (k > 0) {
                if (++digits[k - 1] < Q) break;
                digits[k - 1] = 0;
                --k;
            }
            refresh_from(k == 0 ? 0 : k - 1);
        }
    }

    std::vector<std::vector<FieldElem>> points() const {
        std::vector<std::vector<FieldElem>> out;
        out.reserve(count_);
        for_each(0, count_, [&](std::span<const FieldElem> x) { out.emplace_back(x.begin(), x.end()); });
        return out;
    }

private:
    FieldEmbedding emb_;
    std::size_t n_;
    std::uint64_t count_ = 0;
    std::vector<std::size_t> pivots_;
    std::vector<std::size_t> free_;
    std::vector<FieldElem> rhs_;
    std::vector<FieldElem> contrib_;
};

inline std::vector<std::vector<FieldElem>> enumerate_points(const AffineSubspace& L, std::uint32_t r,
                                                             std::uint64_t cap = kDefaultEnumerationCap) {
    return PointEnumerator(L, r, cap).points();
}

}  // namespace charsum
