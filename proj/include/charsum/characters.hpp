#pragma once

// Multiplicative and additive characters of F_q, Gauss sums and Jacobi sums.

#include <cstdint>
#include <span>
#include <vector>

#include "charsum/cyclotomic.hpp"
#include "charsum/error.hpp"
#include "charsum/ff_core.hpp"

namespace charsum {

/// chi(g^j) = zeta_{q-1}^{e j} for the field's fixed generator g; chi(0) = 0.
struct MultChar {
    Field field;
    std::uint32_t e = 0;

    MultChar() = default;
    MultChar(Field f, std::int64_t exponent) : field(std::move(f)) {
        const std::int64_t u = field.units();
        e = static_cast<std::uint32_t>(((exponent % u) + u) % u);
    }

    bool trivial() const { return e == 0; }
};

/// psi_b(x) = zeta_p^{Tr(b x)}
struct AddChar {
    Field field;
    FieldElem b{1};

    bool trivial() const { return b.code == 0; }
};

/// Exponent j such that chi(x) = zeta_{q-1}^j, or -1 when x = 0.
inline std::int64_t char_exponent(const MultChar& chi, FieldElem x) {
    if (x.code == 0) return -1;
    return static_cast<std::int64_t>(std::uint64_t{chi.e} * chi.field.log(x) % chi.field.units());
}

inline Cyclotomic eval_char(const MultChar& chi, FieldElem x) {
    const std::int64_t j = char_exponent(chi, x);
    if (j < 0) return Cyclotomic(chi.field.units());
    return Cyclotomic::zeta_power(chi.field.units(), j);
}

inline Cyclotomic eval_add(const AddChar& psi, FieldElem x) {
    const Field& f = psi.field;
    return Cyclotomic::zeta_power(f.p(), f.trace(f.mul(psi.b, x)));
}

inline MultChar product_char(const Field& field, std::span<const MultChar> chars) {
    std::int64_t e = 0;
    for (const auto& chi : chars) {
        if (!(chi.field == field)) throw Error(ErrorKind::FieldMismatch, "characters live on different fields");
        e += chi.e;
    }
    return MultChar(field, e);
}

inline MultChar product_char(std::span<const MultChar> chars) {
    if (chars.empty()) throw Error(ErrorKind::InvalidArgument, "empty product needs an explicit field");
    return product_char(chars.front().field, chars);
}

/// The character x -> chi(N(x)) on the extension field.
inline MultChar lift_char(const MultChar& chi, const FieldEmbedding& emb) {
    if (!(chi.field == emb.base())) throw Error(ErrorKind::FieldMismatch, "character is not on the embedding base");
    const Field& ext = emb.ext();
    // N(h) = g^k, so chi(N(h^j)) = zeta_{q-1}^{e k j} = zeta_{Q-1}^{e k j (Q-1)/(q-1)}
    const std::uint64_t k = emb.norm_log()[ext.generator().code];
    const std::uint64_t lifted = (std::uint64_t{chi.e} * k % chi.field.units()) * emb.norm_exponent();
    MultChar out(ext, static_cast<std::int64_t>(lifted % ext.units()));
    if (ext.q() <= 81) {
        for (std::uint32_t c = 1; c < ext.q(); ++c) {
            const FieldElem x{c};
            const std::int64_t direct = char_exponent(chi, norm(emb, x));
            const std::int64_t via_lift = char_exponent(out, x);
            if (via_lift != direct * static_cast<std::int64_t>(emb.norm_exponent()))
                throw Error(ErrorKind::InvalidArgument, "lifted character disagrees with chi o N");
        }
    }
    return out;
}

/// G(chi, psi) = sum_x chi(x) psi(x), in Q(zeta_{p(q-1)}).
inline Cyclotomic gauss_sum(const MultChar& chi, const AddChar& psi) {
    if (!(chi.field == psi.field)) throw Error(ErrorKind::FieldMismatch, "characters live on different fields");
    const Field& f = chi.field;
    const std::uint64_t units = f.units();
    const std::uint64_t order = std::uint64_t{f.p()} * units;
    std::vector<std::int64_t> hist(order, 0);
    for (std::uint32_t c = 1; c < f.q(); ++c) {
        const FieldElem x{c};
        const std::uint64_t mult = static_cast<std::uint64_t>(char_exponent(chi, x));
        const std::uint64_t add = f.trace(f.mul(psi.b, x));
        ++hist[(f.p() * mult + units * add) % order];
    }
    return canonical_form(Cyclotomic::from_histogram(static_cast<std::uint32_t>(order), hist));
}

inline Cyclotomic gauss_sum(const MultChar& chi) { return gauss_sum(chi, AddChar{chi.field, FieldElem{1}}); }

namespace detail {

inline void check_jacobi_args(std::span<const MultChar> chars) {
    if (chars.size() < 2) throw Error(ErrorKind::InvalidArgument, "Jacobi sums need at least two characters");
    for (const auto& chi : chars) {
        if (!(chi.field == chars.front().field)) throw Error(ErrorKind::FieldMismatch, "characters live on different fields");
        if (chi.trivial()) throw Error(ErrorKind::TrivialCharacter, "Jacobi sum with a trivial character");
    }
}

}  // namespace detail

/// J(chi_1..chi_n) = sum over x_1 + ... + x_n = 1 of prod chi_i(x_i), by direct enumeration.
inline Cyclotomic jacobi_sum(std::span<const MultChar> chars) {
    detail::check_jacobi_args(chars);
    const Field& f = chars.front().field;
    const std::size_t n = chars.size();
    std::vector<std::int64_t> hist(f.units(), 0);
    std::vector<std::uint32_t> x(n - 1, 0);
    while (true) {
        FieldElem last = f.one();
        std::int64_t total = 0;
        bool zero = false;
        for (std::size_t i = 0; i + 1 < n && !zero; ++i) {
            const std::int64_t j = char_exponent(chars[i], FieldElem{x[i]});
            if (j < 0) zero = true;
            total += j;
            last = f.sub(last, FieldElem{x[i]});
        }
        if (!zero) {
            const std::int64_t j = char_exponent(chars[n - 1], last);
            if (j >= 0) ++hist[static_cast<std::size_t>((total + j) % f.units())];
        }
        std::size_t k = 0;
        while (k < x.size() && ++x[k] == f.q()) x[k++] = 0;
        if (k == x.size()) break;
    }
    return canonical_form(Cyclotomic::from_histogram(f.units(), hist));
}

/// J via G(chi_1)...G(chi_n) / G(chi_1...chi_n), or -G(chi_1)...G(chi_n) / q when the product is trivial.
/// Division by G(chi) is multiplication by its conjugate followed by division by q.
inline Cyclotomic jacobi_via_gauss(std::span<const MultChar> chars, FieldElem psi_twist = FieldElem{1}) {
    detail::check_jacobi_args(chars);
    const Field& f = chars.front().field;
    const AddChar psi{f, psi_twist};
    if (psi.trivial()) throw Error(ErrorKind::InvalidArgument, "additive character must be nontrivial");
    Cyclotomic acc = gauss_sum(chars.front(), psi);
    for (std::size_t i = 1; i < chars.size(); ++i) acc = canonical_form(acc * gauss_sum(chars[i], psi));
    const MultChar prod = product_char(f, chars);
    if (prod.trivial()) {
        acc *= mpq_class(-1, f.q());
    } else {
        acc = canonical_form(acc * conj(gauss_sum(prod, psi)));
        acc /= mpq_class(f.q());
    }
    return canonical_form(acc);
}

}  // namespace charsum
