#pragma once

// Character sums S_r(L; chi_1..chi_n) over affine subspaces, the hyperplane
// change-of-variables identity, and sums over parametrized linear forms.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "charsum/characters.hpp"
#include "charsum/cyclotomic.hpp"
#include "charsum/error.hpp"
#include "charsum/ff_core.hpp"
#include "charsum/subspace.hpp"

namespace charsum {

struct SumOptions {
    std::uint64_t enumeration_cap = kDefaultEnumerationCap;
    std::uint64_t field_cap = kDefaultFieldCap;
    unsigned threads = 1;
    /// Number of contiguous index chunks; 0 means one per thread.
    std::uint64_t chunks = 0;
};

struct CharSumResult {
    Cyclotomic value;  // order q - 1
    std::uint32_t r = 1;
    std::uint64_t point_count = 0;
    double elapsed_seconds = 0.0;
};

namespace detail {

inline void check_sum_chars(const Field& field, std::size_t n, std::span<const MultChar> chars) {
    if (chars.size() != n)
        throw Error(ErrorKind::InvalidArgument,
                    "expected " + std::to_string(n) + " characters, got " + std::to_string(chars.size()));
    for (const auto& chi : chars) {
        if (!(chi.field == field)) throw Error(ErrorKind::FieldMismatch, "character is not on the subspace field");
        if (chi.trivial()) throw Error(ErrorKind::TrivialCharacter, "character sums need nontrivial characters");
    }
}

/// Sums a per-point exponent histogram over [0, count) with private per-chunk histograms.
template <typename PointFn>
std::vector<std::uint64_t> chunked_histogram(std::uint64_t count, std::uint32_t units, const SumOptions& opts,
                                             PointFn&& run_range) {
    const unsigned threads = std::max(1u, opts.threads);
    const std::uint64_t chunks = std::max<std::uint64_t>(1, opts.chunks == 0 ? threads : opts.chunks);
    std::vector<std::vector<std::uint64_t>> partial(chunks, std::vector<std::uint64_t>(units, 0));
    auto bounds = [&](std::uint64_t c) { return std::pair{count * c / chunks, count * (c + 1) / chunks}; };
    if (threads == 1) {
        for (std::uint64_t c = 0; c < chunks; ++c) {
            auto [lo, hi] = bounds(c);
            run_range(lo, hi, partial[c]);
        }
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                for (std::uint64_t c = w; c < chunks; c += threads) {
                    auto [lo, hi] = bounds(c);
                    run_range(lo, hi, partial[c]);
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    std::vector<std::uint64_t> hist(units, 0);
    for (const auto& h : partial) {
        for (std::uint32_t j = 0; j < units; ++j) hist[j] += h[j];
    }
    return hist;
}

}  // namespace detail

/// S_r(L; chi) = sum over x in L(F_{q^r}) of prod chi_i(N(x_i)), exact in Q(zeta_{q-1}).
inline CharSumResult char_sum(const AffineSubspace& L, std::span<const MultChar> chars, std::uint32_t r = 1,
                              const SumOptions& opts = {}) {
    const auto start = std::chrono::steady_clock::now();
    detail::check_sum_chars(L.field(), L.n(), chars);
    const PointEnumerator points(L, r, opts.enumeration_cap, opts.field_cap);
    const std::uint32_t units = L.field().units();
    const Field& ext = points.field();
    const auto& norm_log = points.embedding().norm_log();
    const std::size_t n = L.n();

    // table[i * Q + x] = exponent of chi_i(N(x)), or -1 for x = 0
    std::vector<std::int32_t> table(n * ext.q(), -1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::uint32_t c = 1; c < ext.q(); ++c)
            table[i * ext.q() + c] = static_cast<std::int32_t>(std::uint64_t{chars[i].e} * norm_log[c] % units);
    }
    const std::uint32_t Q = ext.q();

    auto hist = detail::chunked_histogram(
        points.count(), units, opts, [&](std::uint64_t lo, std::uint64_t hi, std::vector<std::uint64_t>& h) {
            points.for_each(lo, hi, [&](std::span<const FieldElem> x) {
                std::uint32_t total = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    const std::int32_t v = table[i * Q + x[i].code];
                    if (v < 0) return;
                    total += static_cast<std::uint32_t>(v);
                }
                ++h[total % units];
            });
        });

    CharSumResult out;
    out.value = canonical_form(Cyclotomic::from_histogram(units, hist));
    out.r = r;
    out.point_count = points.count();
    out.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

/// Checks S(L) = chi_1...chi_n(b) conj(chi_1)(a_1)...conj(chi_n)(a_n) J(chi_1..chi_n) exactly.
inline bool hyperplane_reduction_check(const AffineSubspace& L, std::span<const MultChar> chars) {
    const Field& f = L.field();
    if (L.m() != 1 || L.n() < 2) throw Error(ErrorKind::NotAHyperplane, "expected a single equation in n >= 2 variables");
    if (L.b()[0].code == 0) throw Error(ErrorKind::NotAHyperplane, "right-hand side is zero");
    for (std::size_t j = 0; j < L.n(); ++j) {
        if (L.A()(0, j).code == 0) throw Error(ErrorKind::NotAHyperplane, "a coefficient is zero");
    }
    detail::check_sum_chars(f, L.n(), chars);
    const Cyclotomic lhs = char_sum(L, chars, 1).value;

    const std::int64_t units = f.units();
    std::int64_t twist = static_cast<std::int64_t>(product_char(f, chars).e) * f.log(L.b()[0]);
    for (std::size_t j = 0; j < L.n(); ++j) twist -= static_cast<std::int64_t>(chars[j].e) * f.log(L.A()(0, j));
    const Cyclotomic rhs = Cyclotomic::zeta_power(f.q() - 1, ((twist % units) + units) % units) * jacobi_sum(chars);
    return lhs == rhs;
}

/// Affine linear forms L_i(t) = sum_j a_{ij} t_j + b_i on A^d.
struct LinearFormSystem {
    Field field;
    std::size_t d = 0;
    Matrix coeffs;                    // n x d
    std::vector<FieldElem> constants;  // n

    LinearFormSystem() = default;
    LinearFormSystem(Field f, Matrix a, std::vector<FieldElem> b)
        : field(std::move(f)), d(a.cols()), coeffs(std::move(a)), constants(std::move(b)) {
        if (coeffs.rows() != constants.size())
            throw Error(ErrorKind::InvalidArgument, "form count differs from constant count");
        if (d < 1 || d > coeffs.rows()) throw Error(ErrorKind::InvalidArgument, "need 1 <= d <= n");
        if (rank(field, coeffs) != d) throw Error(ErrorKind::RankDeficient, "coefficient matrix has rank below d");
    }

    std::size_t n() const { return coeffs.rows(); }
};

/// Dimension of the common zero set of the forms indexed by I, -1 when empty.
inline std::int64_t dim_common_zeros(const LinearFormSystem& F, std::span<const std::size_t> I) {
    const Field& f = F.field;
    if (I.empty()) return static_cast<std::int64_t>(F.d);
    Matrix aug(I.size(), F.d + 1);
    for (std::size_t k = 0; k < I.size(); ++k) {
        for (std::size_t j = 0; j < F.d; ++j) aug(k, j) = F.coeffs(I[k], j);
        aug(k, F.d) = f.neg(F.constants[I[k]]);
    }
    const auto red = row_reduce(f, std::move(aug));
    if (!red.pivots.empty() && red.pivots.back() == F.d) return -1;
    return static_cast<std::int64_t>(F.d) - static_cast<std::int64_t>(red.rank);
}

/// The image of t -> (L_1(t), ..., L_n(t)) as {x : A x = b}; nullopt when it is all of A^n.
inline std::optional<AffineSubspace> image_subspace(const LinearFormSystem& F) {
    const Field& f = F.field;
    const std::size_t n = F.n();
    const std::size_t d = F.d;
    if (d == n) return std::nullopt;
    Matrix transposed(d, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) transposed(j, i) = F.coeffs(i, j);
    }
    const auto red = row_reduce(f, std::move(transposed));
    std::vector<bool> is_pivot(n, false);
    for (std::size_t p : red.pivots) is_pivot[p] = true;
    // left kernel of the coefficient matrix, one row per free column
    Matrix A(n - d, n);
    std::size_t row = 0;
    for (std::size_t c = 0; c < n; ++c) {
        if (is_pivot[c]) continue;
        A(row, c) = f.one();
        for (std::size_t i = 0; i < red.pivots.size(); ++i) A(row, red.pivots[i]) = f.neg(red.reduced(i, c));
        ++row;
    }
    std::vector<FieldElem> b(n - d, f.zero());
    for (std::size_t i = 0; i < n - d; ++i) {
        for (std::size_t j = 0; j < n; ++j) b[i] = f.add(b[i], f.mul(A(i, j), F.constants[j]));
    }
    return AffineSubspace(f, std::move(A), std::move(b));
}

struct ParamSumResult {
    Cyclotomic value;
    bool hypothesis_ok = false;
    std::vector<std::size_t> witness;
    std::vector<std::uint64_t> a;
    std::int64_t degree = 0;
    Cyclotomic image_value;
    bool image_matches = false;
};

inline ParamSumResult param_sum(const LinearFormSystem& F, std::span<const MultChar> chars,
                                const SumOptions& opts = {}) {
    const Field& f = F.field;
    const std::size_t n = F.n();
    const std::size_t d = F.d;
    detail::check_sum_chars(f, n, chars);

    ParamSumResult out;
    out.hypothesis_ok = true;
    out.a.assign(d, 0);
    for (std::size_t k = 0; k <= std::min(d + 1, n); ++k) {
        detail::for_each_subset(n, k, [&](std::span<const std::size_t> I) {
            const std::int64_t dim = dim_common_zeros(F, I);
            if (dim > static_cast<std::int64_t>(d) - static_cast<std::int64_t>(k) && out.hypothesis_ok) {
                out.hypothesis_ok = false;
                out.witness.assign(I.begin(), I.end());
            }
            if (k >= 1 && k <= d && dim >= 0) ++out.a[k - 1];
        });
    }
    out.degree = degree_from_counts(d, out.a);

    const std::uint64_t count = detail::checked_pow(f.q(), d, opts.enumeration_cap);
    if (count > opts.enumeration_cap) throw Error(ErrorKind::CapExceeded, "q^d exceeds enumeration cap");
    const std::uint32_t units = f.units();
    std::vector<std::uint64_t> hist(units, 0);
    std::vector<std::uint32_t> t(d, 0);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        std::uint32_t total = 0;
        bool zero = false;
        for (std::size_t i = 0; i < n && !zero; ++i) {
            FieldElem v = F.constants[i];
            for (std::size_t j = 0; j < d; ++j) v = f.add(v, f.mul(F.coeffs(i, j), FieldElem{t[j]}));
            const std::int64_t e = char_exponent(chars[i], v);
            if (e < 0) zero = true;
            else total += static_cast<std::uint32_t>(e);
        }
        if (!zero) ++hist[total % units];
        for (std::size_t j = d; j-- > 0;) {
            if (++t[j] < f.q()) break;
            t[j] = 0;
        }
    }
    out.value = canonical_form(Cyclotomic::from_histogram(units, hist));

    if (auto image = image_subspace(F)) {
        out.image_value = char_sum(*image, chars, 1, opts).value;
    } else {
        out.image_value = Cyclotomic(units);  // product of complete sums of nontrivial characters
    }
    out.image_matches = out.value == out.image_value;
    return out;
}

}  // namespace charsum
