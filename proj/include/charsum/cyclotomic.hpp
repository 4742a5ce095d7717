#pragma once

// Exact arithmetic in Q(zeta_m) on the redundant basis zeta^0 .. zeta^{m-1}.
// Sums are accumulated without reduction; equality and integrality are
// decided on the canonical form modulo the m-th cyclotomic polynomial.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "charsum/error.hpp"

namespace charsum {

inline constexpr std::uint32_t kDefaultCyclotomicCap = 10000;

/// Integer coefficients of Phi_m, lowest degree first.
inline std::vector<std::int64_t> cyclotomic_polynomial(std::uint32_t m, std::uint32_t cap = kDefaultCyclotomicCap) {
    if (m < 1) throw Error(ErrorKind::InvalidArgument, "cyclotomic order must be positive");
    if (m > cap) throw Error(ErrorKind::CapExceeded, "cyclotomic order " + std::to_string(m) + " exceeds cap");

    static std::mutex mu;
    static std::map<std::uint32_t, std::vector<std::int64_t>> cache;
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find(m); it != cache.end()) return it->second;
    }

    // x^m - 1 divided exactly by Phi_d for every proper divisor d
    std::vector<std::int64_t> num(m + 1, 0);
    num[0] = -1;
    num[m] = 1;
    for (std::uint32_t d = 1; d < m; ++d) {
        if (m % d != 0) continue;
        const auto div = cyclotomic_polynomial(d, cap);
        const std::size_t dd = div.size() - 1;
        std::vector<std::int64_t> quot(num.size() - dd, 0);
        for (std::size_t i = num.size(); i-- > dd;) {
            const std::int64_t c = num[i];  // divisor is monic
            quot[i - dd] = c;
            for (std::size_t k = 0; k <= dd; ++k) num[i - dd + k] -= c * div[k];
        }
        num = std::move(quot);
    }
    std::lock_guard lock(mu);
    cache.emplace(m, num);
    return num;
}

/// Floating-point image of a cyclotomic number under zeta_m -> e^{2 pi i / m}.
struct ComplexApprox {
    double re = 0.0;
    double im = 0.0;
    double err_bound = 0.0;

    std::complex<double> value() const { return {re, im}; }
    double abs() const { return std::hypot(re, im); }
};

class Cyclotomic {
public:
    Cyclotomic() : Cyclotomic(1) {}
    explicit Cyclotomic(std::uint32_t m) : m_(m), c_(m) {
        if (m < 1) throw Error(ErrorKind::InvalidArgument, "cyclotomic order must be positive");
    }
    Cyclotomic(std::uint32_t m, std::vector<mpq_class> coeffs) : m_(m), c_(std::move(coeffs)) {
        if (m < 1 || c_.size() != m) throw Error(ErrorKind::InvalidArgument, "coefficient count must equal the order");
    }

    /// coeff * zeta_m^j
    static Cyclotomic zeta_power(std::uint32_t m, std::int64_t j, const mpq_class& coeff = 1) {
        Cyclotomic z(m);
        const std::int64_t mm = m;
        z.c_[static_cast<std::size_t>(((j % mm) + mm) % mm)] = coeff;
        return z;
    }
    static Cyclotomic integer(std::uint32_t m, const mpq_class& v) { return zeta_power(m, 0, v); }

    /// Sum of hist[j] * zeta_m^j.
    template <typename Int>
    static Cyclotomic from_histogram(std::uint32_t m, const std::vector<Int>& hist) {
        Cyclotomic z(m);
        for (std::size_t j = 0; j < hist.size(); ++j) {
            if (hist[j] != 0) z.c_[j % m] += mpq_class(mpz_class(std::to_string(hist[j])));
        }
        return z;
    }

    std::uint32_t order() const { return m_; }
    const std::vector<mpq_class>& coeffs() const { return c_; }
    bool is_canonical() const { return canonical_; }

    Cyclotomic& operator+=(const Cyclotomic& o) {
        require_same_order(o);
        for (std::uint32_t j = 0; j < m_; ++j) c_[j] += o.c_[j];
        canonical_ = false;
        return *this;
    }
    Cyclotomic& operator-=(const Cyclotomic& o) {
        require_same_order(o);
        for (std::uint32_t j = 0; j < m_; ++j) c_[j] -= o.c_[j];
        canonical_ = false;
        return *this;
    }
    Cyclotomic& operator*=(const mpq_class& s) {
        for (auto& x : c_) x *= s;
        return *this;
    }
    Cyclotomic& operator/=(const mpq_class& s) {
        if (s == 0) throw Error(ErrorKind::InvalidArgument, "division by zero");
        for (auto& x : c_) x /= s;
        return *this;
    }

    friend Cyclotomic operator+(Cyclotomic x, const Cyclotomic& y) { return x += y; }
    friend Cyclotomic operator-(Cyclotomic x, const Cyclotomic& y) { return x -= y; }
    friend Cyclotomic operator-(Cyclotomic x) { return x *= -1; }
    friend Cyclotomic operator*(Cyclotomic x, const mpq_class& s) { return x *= s; }
    friend Cyclotomic operator*(const mpq_class& s, Cyclotomic x) { return x *= s; }
    friend Cyclotomic operator/(Cyclotomic x, const mpq_class& s) { return x /= s; }

    friend Cyclotomic operator*(const Cyclotomic& x, const Cyclotomic& y) {
        x.require_same_order(y);
        const std::uint32_t m = x.m_;
        Cyclotomic out(m);
        for (std::uint32_t i = 0; i < m; ++i) {
            if (x.c_[i] == 0) continue;
            for (std::uint32_t j = 0; j < m; ++j) {
                if (y.c_[j] == 0) continue;
                const std::uint32_t k = i + j >= m ? i + j - m : i + j;
                out.c_[k] += x.c_[i] * y.c_[j];
            }
        }
        return out;
    }
    Cyclotomic& operator*=(const Cyclotomic& o) { return *this = *this * o; }

    Cyclotomic pow(std::uint32_t e) const {
        Cyclotomic result = integer(m_, 1);
        Cyclotomic base = *this;
        while (e > 0) {
            if (e & 1) result = canonical_form(result * base);
            base = canonical_form(base * base);
            e >>= 1;
        }
        return result;
    }

    bool is_zero() const {
        const Cyclotomic z = canonical_form(*this);
        return std::all_of(z.c_.begin(), z.c_.end(), [](const mpq_class& x) { return x == 0; });
    }

    /// True if every canonical coefficient is an integer.
    bool is_integral() const {
        const Cyclotomic z = canonical_form(*this);
        return std::all_of(z.c_.begin(), z.c_.end(), [](const mpq_class& x) { return x.get_den() == 1; });
    }

    /// Exact equality, lifting to a common order when the orders differ.
    friend bool operator==(const Cyclotomic& x, const Cyclotomic& y);

    friend Cyclotomic canonical_form(Cyclotomic z);
    friend Cyclotomic change_order(const Cyclotomic& z, std::uint32_t target);

private:
    void require_same_order(const Cyclotomic& o) const {
        if (o.m_ != m_)
            throw Error(ErrorKind::InvalidArgument,
                        "order mismatch: " + std::to_string(m_) + " vs " + std::to_string(o.m_));
    }

    std::uint32_t m_;
    std::vector<mpq_class> c_;
    bool canonical_ = false;
};

/// Reduce modulo Phi_m; the result has degree below phi(m).
inline Cyclotomic canonical_form(Cyclotomic z) {
    if (z.canonical_) return z;
    const auto phi = cyclotomic_polynomial(z.m_);
    const std::size_t deg = phi.size() - 1;
    for (std::size_t k = z.m_; k-- > deg;) {
        if (z.c_[k] == 0) continue;
        const mpq_class c = z.c_[k];
        // zeta^k = -sum_{i<deg} phi_i zeta^{k-deg+i}
        for (std::size_t i = 0; i <= deg; ++i) {
            if (phi[i] != 0) z.c_[k - deg + i] -= c * static_cast<long>(phi[i]);
        }
    }
    z.canonical_ = true;
    return z;
}

inline Cyclotomic canonicalize(const Cyclotomic& z) { return canonical_form(z); }

/// zeta_m^j -> zeta_target^{j * target / m}
inline Cyclotomic change_order(const Cyclotomic& z, std::uint32_t target) {
    if (target == 0 || target % z.m_ != 0)
        throw Error(ErrorKind::NotDivisible,
                    std::to_string(z.m_) + " does not divide " + std::to_string(target));
    if (target == z.m_) return z;
    const std::uint32_t step = target / z.m_;
    Cyclotomic out(target);
    for (std::uint32_t j = 0; j < z.m_; ++j) out.c_[j * step] = z.c_[j];
    return out;
}

inline bool operator==(const Cyclotomic& x, const Cyclotomic& y) {
    if (x.m_ != y.m_) {
        const std::uint32_t l = std::lcm(x.m_, y.m_);
        return change_order(x, l) == change_order(y, l);
    }
    return (canonical_form(x) - canonical_form(y)).is_zero();
}

/// Complex conjugation: zeta^j -> zeta^{m-j}.
inline Cyclotomic conj(const Cyclotomic& z) {
    const std::uint32_t m = z.order();
    std::vector<mpq_class> c(m);
    for (std::uint32_t j = 0; j < m; ++j) c[(m - j) % m] = z.coeffs()[j];
    return Cyclotomic(m, std::move(c));
}

inline ComplexApprox embed(const Cyclotomic& z) {
    const std::uint32_t m = z.order();
    long double re = 0.0L;
    long double im = 0.0L;
    double max_abs = 0.0;
    for (std::uint32_t j = 0; j < m; ++j) {
        const mpq_class& c = z.coeffs()[j];
        if (c == 0) continue;
        const double v = c.get_d();
        max_abs = std::max(max_abs, std::fabs(v));
        const long double angle = 2.0L * std::numbers::pi_v<long double> * j / m;
        re += v * std::cos(angle);
        im += v * std::sin(angle);
    }
    return {static_cast<double>(re), static_cast<double>(im), m * max_abs * 1e-15};
}

inline std::string to_string(const Cyclotomic& z) {
    std::string out;
    for (std::uint32_t j = 0; j < z.order(); ++j) {
        const mpq_class& c = z.coeffs()[j];
        if (c == 0) continue;
        if (!out.empty()) out += (c > 0 ? " + " : " - ");
        else if (c < 0) out += "-";
        const mpq_class a = abs(c);
        if (j == 0) out += a.get_str();
        else {
            if (a != 1) out += a.get_str() + "*";
            out += "z" + std::to_string(z.order()) + "^" + std::to_string(j);
        }
    }
    return out.empty() ? "0" : out;
}

}  // namespace charsum
