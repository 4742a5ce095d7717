#pragma once

// Finite fields F_{p^a} with table-driven arithmetic, field extensions with
// explicit embeddings, the field norm, and Gaussian elimination.
//
// Elements are encoded as integers in [0, q): the representative polynomial
// c_0 + c_1 x + ... + c_{a-1} x^{a-1} maps to sum c_i p^i.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "charsum/error.hpp"

namespace charsum {

inline constexpr std::uint64_t kDefaultFieldCap = std::uint64_t{1} << 20;

struct FieldElem {
    std::uint32_t code = 0;

    friend constexpr auto operator<=>(const FieldElem&, const FieldElem&) = default;
};

namespace detail {

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

inline std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e > 0) {
        if (e & 1) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return r;
}

// Dense polynomials over F_p, lowest degree first, no trailing zeros.
// Only used while constructing fields; the hot paths go through tables.
namespace fp_poly {

using Poly = std::vector<std::uint32_t>;

inline void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline Poly mod(Poly f, const Poly& g, std::uint32_t p) {
    trim(f);
    const std::size_t dg = g.size() - 1;
    const std::uint64_t lead_inv = pow_mod(g.back(), p - 2, p);
    while (f.size() > dg) {
        const std::uint64_t c = f.back() * lead_inv % p;
        const std::size_t shift = f.size() - 1 - dg;
        for (std::size_t i = 0; i <= dg; ++i) {
            f[shift + i] = static_cast<std::uint32_t>((f[shift + i] + p - c * g[i] % p) % p);
        }
        trim(f);
    }
    return f;
}

inline Poly mul(const Poly& f, const Poly& g, std::uint32_t p) {
    if (f.empty() || g.empty()) return {};
    Poly out(f.size() + g.size() - 1, 0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        for (std::size_t j = 0; j < g.size(); ++j) {
            out[i + j] = static_cast<std::uint32_t>((out[i + j] + std::uint64_t{f[i]} * g[j]) % p);
        }
    }
    trim(out);
    return out;
}

inline Poly mulmod(const Poly& f, const Poly& g, const Poly& m, std::uint32_t p) {
    return mod(mul(f, g, p), m, p);
}

inline Poly powmod(Poly base, std::uint64_t e, const Poly& m, std::uint32_t p) {
    Poly result{1};
    base = mod(std::move(base), m, p);
    while (e > 0) {
        if (e & 1) result = mulmod(result, base, m, p);
        base = mulmod(base, base, m, p);
        e >>= 1;
    }
    return mod(std::move(result), m, p);
}

inline Poly sub(Poly f, const Poly& g, std::uint32_t p) {
    if (f.size() < g.size()) f.resize(g.size(), 0);
    for (std::size_t i = 0; i < g.size(); ++i) f[i] = (f[i] + p - g[i]) % p;
    trim(f);
    return f;
}

inline Poly gcd(Poly f, Poly g, std::uint32_t p) {
    trim(f);
    trim(g);
    while (!g.empty()) {
        Poly r = mod(f, g, p);
        f = std::move(g);
        g = std::move(r);
    }
    return f;
}

/// Rabin's test: x^{p^a} = x mod f and gcd(x^{p^{a/l}} - x, f) = 1 for primes l | a.
inline bool is_irreducible(const Poly& f, std::uint32_t p) {
    const std::size_t a = f.size() - 1;
    if (a == 1) return true;
    const Poly x{0, 1};
    auto frobenius_power = [&](std::size_t k) {
        Poly y = x;
        for (std::size_t i = 0; i < k; ++i) y = powmod(y, p, f, p);
        return y;
    };
    if (sub(frobenius_power(a), x, p) != Poly{}) return false;
    for (std::uint64_t l : prime_factors(a)) {
        Poly g = gcd(f, sub(frobenius_power(a / l), x, p), p);
        if (g.size() != 1) return false;
    }
    return true;
}

inline Poly decode(std::uint32_t code, std::uint32_t p, std::uint32_t a) {
    Poly out(a, 0);
    for (std::uint32_t i = 0; i < a; ++i) {
        out[i] = code % p;
        code /= p;
    }
    trim(out);
    return out;
}

inline std::uint32_t encode(const Poly& f, std::uint32_t p) {
    std::uint32_t code = 0;
    for (std::size_t i = f.size(); i-- > 0;) code = code * p + f[i];
    return code;
}

}  // namespace fp_poly
}  // namespace detail

/// An immutable finite field; copies share the same tables.
class Field {
public:
    Field() = default;

    std::uint32_t p() const { return d_->p; }
    std::uint32_t a() const { return d_->a; }
    std::uint32_t q() const { return d_->q; }
    std::uint32_t units() const { return d_->q - 1; }
    /// Monic modulus coefficients, lowest degree first (length a + 1).
    const std::vector<std::uint32_t>& modulus() const { return d_->modulus; }
    FieldElem generator() const { return {d_->generator}; }
    bool valid() const { return d_ != nullptr; }

    FieldElem zero() const { return {0}; }
    FieldElem one() const { return {1}; }
    FieldElem elem(std::uint64_t code) const {
        if (code >= d_->q) throw Error(ErrorKind::InvalidArgument, "element code out of range: " + std::to_string(code));
        return {static_cast<std::uint32_t>(code)};
    }
    /// Image of the integer n under Z -> F_p -> F_q.
    FieldElem from_int(std::int64_t n) const {
        const std::int64_t p = d_->p;
        return {static_cast<std::uint32_t>(((n % p) + p) % p)};
    }

    FieldElem exp(std::uint64_t j) const { return {d_->exp[j % units()]}; }
    std::uint32_t log(FieldElem x) const {
        if (x.code == 0) throw Error(ErrorKind::ZeroArgument, "discrete log of zero");
        return d_->log[x.code];
    }

    FieldElem add(FieldElem x, FieldElem y) const {
        if (x.code == 0) return y;
        if (y.code == 0) return x;
        const std::uint32_t lx = d_->log[x.code];
        const std::uint32_t ly = d_->log[y.code];
        const std::uint32_t k = ly >= lx ? ly - lx : ly + units() - lx;
        const std::int32_t z = d_->zech[k];
        if (z < 0) return {0};
        return {d_->exp[lx + static_cast<std::uint32_t>(z)]};
    }
    FieldElem neg(FieldElem x) const {
        if (x.code == 0 || d_->p == 2) return x;
        return {d_->exp[d_->log[x.code] + units() / 2]};
    }
    FieldElem sub(FieldElem x, FieldElem y) const { return add(x, neg(y)); }
    FieldElem mul(FieldElem x, FieldElem y) const {
        if (x.code == 0 || y.code == 0) return {0};
        return {d_->exp[d_->log[x.code] + d_->log[y.code]]};
    }
    FieldElem inv(FieldElem x) const {
        if (x.code == 0) throw Error(ErrorKind::ZeroArgument, "inverse of zero");
        const std::uint32_t l = d_->log[x.code];
        return {d_->exp[l == 0 ? 0 : units() - l]};
    }
    FieldElem div(FieldElem x, FieldElem y) const { return mul(x, inv(y)); }
    FieldElem pow(FieldElem x, std::uint64_t e) const {
        if (x.code == 0) return e == 0 ? one() : zero();
        const std::uint64_t l = d_->log[x.code];
        return {d_->exp[(l * (e % units())) % units()]};
    }
    /// Absolute trace to F_p, returned as an integer in [0, p).
    std::uint32_t trace(FieldElem x) const {
        FieldElem acc = zero();
        FieldElem y = x;
        for (std::uint32_t i = 0; i < d_->a; ++i) {
            acc = add(acc, y);
            y = pow(y, d_->p);
        }
        return acc.code;
    }

    friend bool operator==(const Field& x, const Field& y) {
        return x.d_ == y.d_ || (x.d_ && y.d_ && x.d_->p == y.d_->p && x.d_->a == y.d_->a &&
                                x.d_->modulus == y.d_->modulus && x.d_->generator == y.d_->generator);
    }

private:
    struct Data {
        std::uint32_t p = 0;
        std::uint32_t a = 0;
        std::uint32_t q = 0;
        std::vector<std::uint32_t> modulus;
        std::uint32_t generator = 0;
        std::vector<std::uint32_t> exp;  // length 2(q-1) so that exp[i + j] needs no reduction
        std::vector<std::uint32_t> log;  // log[0] unused
        std::vector<std::int32_t> zech;  // log(1 + g^k), -1 when 1 + g^k = 0
    };

    explicit Field(std::shared_ptr<const Data> d) : d_(std::move(d)) {}

    friend Field build_field(std::uint32_t p, std::uint32_t a);

    std::shared_ptr<const Data> d_;
};

inline Field build_field(std::uint32_t p, std::uint32_t a) {
    namespace fp = detail::fp_poly;
    auto d = std::make_shared<Field::Data>();
    d->p = p;
    d->a = a;
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < a; ++i) q *= p;
    d->q = static_cast<std::uint32_t>(q);

    // Ascending scan over monic polynomials of degree a, ordered by the code of
    // their lower coefficients; the first irreducible one is the modulus.
    fp::Poly modulus;
    for (std::uint64_t low = 0; low < q; ++low) {
        fp::Poly f(a + 1, 0);
        std::uint64_t c = low;
        for (std::uint32_t i = 0; i < a; ++i) {
            f[i] = static_cast<std::uint32_t>(c % p);
            c /= p;
        }
        f[a] = 1;
        if (fp::is_irreducible(f, p)) {
            modulus = std::move(f);
            break;
        }
    }
    d->modulus = modulus;

    auto mul_codes = [&](std::uint32_t x, std::uint32_t y) {
        return fp::encode(fp::mulmod(fp::decode(x, p, a), fp::decode(y, p, a), modulus, p), p);
    };
    auto pow_code = [&](std::uint32_t x, std::uint64_t e) {
        return fp::encode(fp::powmod(fp::decode(x, p, a), e, modulus, p), p);
    };

    const std::uint64_t units = q - 1;
    const auto factors = detail::prime_factors(units);
    std::uint32_t generator = 0;
    for (std::uint32_t c = 1; c < q; ++c) {
        bool full = true;
        for (std::uint64_t l : factors) {
            if (pow_code(c, units / l) == 1) {
                full = false;
                break;
            }
        }
        if (full) {
            generator = c;
            break;
        }
    }
    d->generator = generator;

    d->exp.assign(2 * units, 0);
    d->log.assign(q, 0);
    std::uint32_t x = 1;
    for (std::uint64_t j = 0; j < units; ++j) {
        d->exp[j] = x;
        d->exp[j + units] = x;
        d->log[x] = static_cast<std::uint32_t>(j);
        x = mul_codes(x, generator);
    }
    if (x != 1) throw Error(ErrorKind::InvalidArgument, "generator order check failed");

    d->zech.assign(units, -1);
    for (std::uint64_t k = 0; k < units; ++k) {
        const std::uint32_t y = d->exp[k];
        const std::uint32_t plus_one = y - y % p + (y % p + 1) % p;
        d->zech[k] = plus_one == 0 ? -1 : static_cast<std::int32_t>(d->log[plus_one]);
    }
    return Field(std::move(d));
}

/// Construct (or fetch the memoized) field of order p^a.
inline Field make_field(std::uint32_t p, std::uint32_t a, std::uint64_t cap = kDefaultFieldCap) {
    if (!detail::is_prime(p)) throw Error(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
    if (a < 1) throw Error(ErrorKind::InvalidArgument, "extension degree must be at least 1");
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < a; ++i) {
        q *= p;
        if (q > cap || q > (std::uint64_t{1} << 31))
            throw Error(ErrorKind::CapExceeded,
                        std::to_string(p) + "^" + std::to_string(a) + " exceeds cap " + std::to_string(cap));
    }
    static std::mutex mu;
    static std::map<std::pair<std::uint32_t, std::uint32_t>, Field> cache;
    std::lock_guard lock(mu);
    auto it = cache.find({p, a});
    if (it != cache.end()) return it->second;
    Field f = build_field(p, a);
    cache.emplace(std::pair{p, a}, f);
    return f;
}

inline std::uint32_t dlog(const Field& f, FieldElem x) { return f.log(x); }

/// Embedding F_q -> F_{q^r}, sending the base modulus root x to a fixed root in ext.
class FieldEmbedding {
public:
    FieldEmbedding() = default;

    const Field& base() const { return d_->base; }
    const Field& ext() const { return d_->ext; }
    std::uint32_t degree() const { return d_->r; }

    FieldElem image(FieldElem x) const { return {d_->image[x.code]}; }
    /// Inverse of image on its range; throws if y is not in the base field.
    FieldElem preimage(FieldElem y) const {
        const std::int64_t c = d_->preimage[y.code];
        if (c < 0) throw Error(ErrorKind::FieldMismatch, "element is not in the image of the base field");
        return {static_cast<std::uint32_t>(c)};
    }
    /// (q^r - 1) / (q - 1)
    std::uint64_t norm_exponent() const { return d_->norm_exponent; }
    /// For nonzero x in ext, the base discrete log of N(x); table indexed by code, entry 0 unused.
    const std::vector<std::uint32_t>& norm_log() const { return d_->norm_log; }

private:
    struct Data {
        Field base;
        Field ext;
        std::uint32_t r = 1;
        std::vector<std::uint32_t> image;
        std::vector<std::int64_t> preimage;
        std::uint64_t norm_exponent = 1;
        std::vector<std::uint32_t> norm_log;
    };
    std::shared_ptr<const Data> d_;

    friend FieldEmbedding extend(const Field& base, std::uint32_t r, std::uint64_t cap);
};

inline FieldEmbedding extend(const Field& base, std::uint32_t r, std::uint64_t cap = kDefaultFieldCap) {
    if (r < 1) throw Error(ErrorKind::InvalidArgument, "extension degree must be at least 1");
    static std::mutex mu;
    static std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, FieldEmbedding> cache;
    const auto key = std::tuple{base.p(), base.a(), r};
    {
        std::lock_guard lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    std::uint64_t big = 1;
    for (std::uint32_t i = 0; i < base.a() * r; ++i) {
        big *= base.p();
        if (big > cap) throw Error(ErrorKind::CapExceeded, "extension of degree " + std::to_string(r) + " exceeds cap");
    }
    auto d = std::make_shared<FieldEmbedding::Data>();
    d->base = base;
    d->ext = make_field(base.p(), base.a() * r, cap);
    d->r = r;
    const Field& ext = d->ext;

    // least root of the base modulus in ext
    const auto& f = base.modulus();
    FieldElem root{0};
    bool found = false;
    for (std::uint32_t c = 0; c < ext.q() && !found; ++c) {
        FieldElem acc = ext.zero();
        for (std::size_t i = f.size(); i-- > 0;) acc = ext.add(ext.mul(acc, FieldElem{c}), ext.from_int(f[i]));
        if (acc.code == 0) {
            root = FieldElem{c};
            found = true;
        }
    }
    if (!found) throw Error(ErrorKind::InvalidArgument, "base modulus has no root in the extension");

    d->image.assign(base.q(), 0);
    d->preimage.assign(ext.q(), -1);
    for (std::uint32_t c = 0; c < base.q(); ++c) {
        FieldElem acc = ext.zero();
        FieldElem power = ext.one();
        std::uint32_t rest = c;
        for (std::uint32_t i = 0; i < base.a(); ++i) {
            acc = ext.add(acc, ext.mul(ext.from_int(rest % base.p()), power));
            power = ext.mul(power, root);
            rest /= base.p();
        }
        d->image[c] = acc.code;
        d->preimage[acc.code] = c;
    }

    d->norm_exponent = (std::uint64_t{ext.q()} - 1) / (base.q() - 1);
    // N(h^j) = g^{k j} with k = log_base N(h)
    const FieldElem norm_h = ext.pow(ext.generator(), d->norm_exponent);
    const std::int64_t pre = d->preimage[norm_h.code];
    if (pre < 0) throw Error(ErrorKind::InvalidArgument, "norm does not land in the base field");
    const std::uint64_t k = base.log(FieldElem{static_cast<std::uint32_t>(pre)});
    d->norm_log.assign(ext.q(), 0);
    for (std::uint32_t c = 1; c < ext.q(); ++c) {
        d->norm_log[c] = static_cast<std::uint32_t>(k * ext.log(FieldElem{c}) % base.units());
    }

    FieldEmbedding emb;
    emb.d_ = std::move(d);
    std::lock_guard lock(mu);
    cache.emplace(key, emb);
    return emb;
}

/// N_{ext/base}(x) = x^{(q^r-1)/(q-1)}, pulled back to the base field.
inline FieldElem norm(const FieldEmbedding& emb, FieldElem x) {
    if (x.code == 0) return FieldElem{0};
    return emb.preimage(emb.ext().pow(x, emb.norm_exponent()));
}

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<FieldElem> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows * cols) throw Error(ErrorKind::InvalidArgument, "matrix data size mismatch");
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    FieldElem& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    FieldElem operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    std::span<const FieldElem> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    const std::vector<FieldElem>& data() const { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<FieldElem> data_;
};

struct RowReduction {
    Matrix reduced;
    std::size_t rank = 0;
    std::vector<std::size_t> pivots;
};

/// Reduced row-echelon form; every pivot is 1 and is the only nonzero entry in its column.
inline RowReduction row_reduce(const Field& f, Matrix m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t sel = row;
        while (sel < m.rows() && m(sel, col).code == 0) ++sel;
        if (sel == m.rows()) continue;
        if (sel != row) {
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(sel, j), m(row, j));
        }
        const FieldElem scale = f.inv(m(row, col));
        for (std::size_t j = col; j < m.cols(); ++j) m(row, j) = f.mul(m(row, j), scale);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, col).code == 0) continue;
            const FieldElem factor = m(i, col);
            for (std::size_t j = col; j < m.cols(); ++j) m(i, j) = f.sub(m(i, j), f.mul(factor, m(row, j)));
        }
        pivots.push_back(col);
        ++row;
    }
    return {std::move(m), row, std::move(pivots)};
}

inline std::size_t rank(const Field& f, const Matrix& m) { return row_reduce(f, m).rank; }

/// Determinant of a square matrix by elimination.
inline FieldElem determinant(const Field& f, Matrix m) {
    if (m.rows() != m.cols()) throw Error(ErrorKind::InvalidArgument, "determinant of a non-square matrix");
    FieldElem det = f.one();
    const std::size_t n = m.rows();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t sel = col;
        while (sel < n && m(sel, col).code == 0) ++sel;
        if (sel == n) return f.zero();
        if (sel != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(sel, j), m(col, j));
            det = f.neg(det);
        }
        det = f.mul(det, m(col, col));
        const FieldElem inv = f.inv(m(col, col));
        for (std::size_t i = col + 1; i < n; ++i) {
            if (m(i, col).code == 0) continue;
            const FieldElem factor = f.mul(m(i, col), inv);
            for (std::size_t j = col; j < n; ++j) m(i, j) = f.sub(m(i, j), f.mul(factor, m(col, j)));
        }
    }
    return det;
}

}  // namespace charsum
