#pragma once

// Brute-force reference computations for tests. Nothing here goes through the
// exp/log tables, the row-reduction point enumerator, or the histogram sums.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "charsum/ff_core.hpp"

namespace oracle {

using charsum::Field;
using charsum::FieldElem;
namespace fp = charsum::detail::fp_poly;

/// Field multiplication by schoolbook polynomial arithmetic on the codes.
inline FieldElem slow_mul(const Field& f, FieldElem x, FieldElem y) {
    fp::Poly m(f.modulus().begin(), f.modulus().end());
    return {fp::encode(fp::mulmod(fp::decode(x.code, f.p(), f.a()), fp::decode(y.code, f.p(), f.a()), m, f.p()), f.p())};
}

/// Digit-wise addition of codes.
inline FieldElem slow_add(const Field& f, FieldElem x, FieldElem y) {
    std::uint32_t out = 0, scale = 1;
    for (std::uint32_t i = 0; i < f.a(); ++i) {
        out += ((x.code % f.p() + y.code % f.p()) % f.p()) * scale;
        x.code /= f.p();
        y.code /= f.p();
        scale *= f.p();
    }
    return {out};
}

inline FieldElem slow_pow(const Field& f, FieldElem x, std::uint64_t e) {
    FieldElem r = f.one();
    for (std::uint64_t i = 0; i < e; ++i) r = slow_mul(f, r, x);
    return r;
}

/// Multiplicative order by repeated slow multiplication.
inline std::uint64_t order(const Field& f, FieldElem x) {
    FieldElem y = x;
    std::uint64_t k = 1;
    while (y.code != 1) {
        y = slow_mul(f, y, x);
        ++k;
    }
    return k;
}

/// Determinant by Leibniz permutation expansion.
inline FieldElem leibniz_det(const Field& f, const std::vector<std::vector<FieldElem>>& m) {
    const std::size_t n = m.size();
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    FieldElem total = f.zero();
    do {
        std::size_t inversions = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++inversions;
        FieldElem term = f.one();
        for (std::size_t i = 0; i < n; ++i) term = slow_mul(f, term, m[i][perm[i]]);
        if (inversions % 2 == 1) term = slow_mul(f, term, FieldElem{f.p() - 1});  // -1 in F_p
        total = slow_add(f, total, term);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

/// Rank as the largest k with a nonzero k x k minor.
inline std::size_t minor_rank(const Field& f, const std::vector<std::vector<FieldElem>>& m) {
    const std::size_t rows = m.size();
    const std::size_t cols = rows ? m[0].size() : 0;
    for (std::size_t k = std::min(rows, cols); k > 0; --k) {
        std::vector<bool> rsel(rows, false), csel(cols, false);
        std::fill(rsel.begin(), rsel.begin() + static_cast<long>(k), true);
        do {
            std::fill(csel.begin(), csel.end(), false);
            std::fill(csel.begin(), csel.begin() + static_cast<long>(k), true);
            do {
                std::vector<std::vector<FieldElem>> sub;
                for (std::size_t i = 0; i < rows; ++i) {
                    if (!rsel[i]) continue;
                    std::vector<FieldElem> row;
                    for (std::size_t j = 0; j < cols; ++j)
                        if (csel[j]) row.push_back(m[i][j]);
                    sub.push_back(row);
                }
                if (leibniz_det(f, sub).code != 0) return k;
            } while (std::prev_permutation(csel.begin(), csel.end()));
        } while (std::prev_permutation(rsel.begin(), rsel.end()));
    }
    return 0;
}

/// All x in F^n with A x = b, by scanning F^n.
inline std::vector<std::vector<FieldElem>> solutions(const Field& f, const std::vector<std::vector<FieldElem>>& A,
                                                     const std::vector<FieldElem>& b, std::size_t n) {
    std::vector<std::vector<FieldElem>> out;
    std::vector<std::uint32_t> x(n, 0);
    while (true) {
        bool ok = true;
        for (std::size_t i = 0; i < A.size() && ok; ++i) {
            FieldElem s = f.zero();
            for (std::size_t j = 0; j < n; ++j) s = slow_add(f, s, slow_mul(f, A[i][j], FieldElem{x[j]}));
            ok = s == b[i];
        }
        if (ok) {
            std::vector<FieldElem> pt;
            for (auto c : x) pt.push_back(FieldElem{c});
            out.push_back(pt);
        }
        std::size_t k = n;
        while (k > 0) {
            if (++x[k - 1] < f.q()) break;
            x[k - 1] = 0;
            --k;
        }
        if (k == 0) break;
    }
    return out;
}

/// Dimension of a nonempty affine solution set from its size, -1 if empty.
inline std::int64_t dim_from_count(std::uint64_t count, std::uint64_t q) {
    if (count == 0) return -1;
    std::int64_t d = 0;
    while (count > 1) {
        count /= q;
        ++d;
    }
    return d;
}

inline std::complex<double> root_of_unity(std::uint64_t m, std::int64_t j) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
    return std::polar(1.0, angle);
}

/// chi(x) in C for chi(g^j) = zeta_{q-1}^{e j}, by locating x among slow powers of the generator.
inline std::complex<double> char_value(const Field& f, std::uint32_t e, FieldElem x) {
    if (x.code == 0) return 0.0;
    FieldElem y = f.one();
    for (std::uint64_t j = 0; j < f.units(); ++j) {
        if (y == x) return root_of_unity(f.units(), static_cast<std::int64_t>(e * j % f.units()));
        y = slow_mul(f, y, f.generator());
    }
    return std::nan("");
}

/// Reciprocal-root power sums sum_i alpha_i^r.
inline std::complex<double> power_sum(const std::vector<std::complex<double>>& alphas, int r) {
    std::complex<double> s = 0;
    for (const auto& a : alphas) s += std::pow(a, r);
    return s;
}

}  // namespace oracle

#include <ostream>

#include "charsum/cyclotomic.hpp"

namespace charsum {

// readable gtest failure messages
inline void PrintTo(const Cyclotomic& z, std::ostream* os) { *os << to_string(z); }
inline void PrintTo(FieldElem x, std::ostream* os) { *os << x.code; }

}  // namespace charsum
