#pragma once

// L-polynomials of character sums over affine subspaces: Newton recovery of
// the coefficients from the exact power sums S_r, numerical reciprocal roots,
// weight classification and the resulting bounds on |S|.
//
// P(T) is pinned as the polynomial with constant term 1 whose reciprocal
// roots alpha_i satisfy sum_i alpha_i^r = (-1)^d S_r. With that normalisation
// P = L^{(-1)^{d+1}} where L = exp(sum_r S_r T^r / r).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "charsum/character_sum.hpp"
#include "charsum/characters.hpp"
#include "charsum/cyclotomic.hpp"
#include "charsum/error.hpp"
#include "charsum/subspace.hpp"

namespace charsum {

inline constexpr double kRootTolerance = 1e-6;

/// binom(n, k), zero outside 0 <= k <= n.
inline std::uint64_t binom(std::int64_t n, std::int64_t k) {
    if (n < 0 || k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (std::int64_t i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

/// Elementary symmetric functions e_1..e_D from power sums p_1..p_D,
/// by r e_r = sum_{i=1}^r (-1)^{i-1} e_{r-i} p_i with e_0 = 1.
inline std::vector<Cyclotomic> newton_to_coeffs(std::span<const Cyclotomic> p) {
    if (p.empty()) throw Error(ErrorKind::InvalidArgument, "need at least one power sum");
    const std::uint32_t m = p.front().order();
    std::vector<Cyclotomic> e;
    e.reserve(p.size());
    for (std::size_t r = 1; r <= p.size(); ++r) {
        Cyclotomic acc = r % 2 == 1 ? p[r - 1] : -p[r - 1];
        for (std::size_t i = 1; i < r; ++i) {
            const Cyclotomic term = e[r - i - 1] * p[i - 1];
            if (i % 2 == 1) acc += term;
            else acc -= term;
        }
        acc /= mpq_class(static_cast<unsigned long>(r));
        e.push_back(canonical_form(std::move(acc)));
        if (e.back().order() != m) throw Error(ErrorKind::InvalidArgument, "power sums have mixed orders");
    }
    return e;
}

/// P(T) = sum_j (-1)^j e_j T^j with e_0 = 1.
inline std::vector<Cyclotomic> coeffs_from_elementary(std::uint32_t m, std::span<const Cyclotomic> e) {
    std::vector<Cyclotomic> c{Cyclotomic::integer(m, 1)};
    for (std::size_t j = 0; j < e.size(); ++j) c.push_back((j + 1) % 2 == 0 ? e[j] : -e[j]);
    return c;
}

namespace detail {

using cld = std::complex<long double>;

inline cld horner(std::span<const cld> c, cld z) {
    cld acc = 0;
    for (std::size_t j = c.size(); j-- > 0;) acc = acc * z + c[j];
    return acc;
}

inline cld horner_derivative(std::span<const cld> c, cld z) {
    cld acc = 0;
    for (std::size_t j = c.size(); j-- > 1;) acc = acc * z + static_cast<long double>(j) * c[j];
    return acc;
}

}  // namespace detail

/// All roots of sum_j c_j T^j by Aberth iteration; clustered roots are
/// replaced by their centroid, which is far better conditioned than the
/// individual members of a multiple root.
inline std::vector<std::complex<double>> poly_roots(std::span<const std::complex<double>> coeffs,
                                                    int max_iterations = 2000) {
    using detail::cld;
    if (coeffs.empty()) return {};
    std::size_t deg = coeffs.size() - 1;
    if (std::abs(coeffs[deg]) == 0.0) throw Error(ErrorKind::InvalidArgument, "leading coefficient is zero");
    if (deg == 0) return {};
    std::vector<cld> c(coeffs.begin(), coeffs.end());
    if (deg == 1) return {std::complex<double>(-c[0] / c[1])};

    // initial guesses on a circle of radius max |c_j / c_deg|^{1/(deg-j)}
    long double radius = 0;
    for (std::size_t j = 0; j < deg; ++j) {
        const long double ratio = std::abs(c[j] / c[deg]);
        if (ratio > 0) radius = std::max(radius, std::pow(ratio, 1.0L / static_cast<long double>(deg - j)));
    }
    if (radius == 0) radius = 1;
    std::vector<cld> z(deg);
    for (std::size_t k = 0; k < deg; ++k) {
        const long double angle = 2 * std::numbers::pi_v<long double> * k / deg + 0.4L;
        z[k] = std::polar(radius, angle);
    }
    bool converged = false;
    for (int it = 0; it < max_iterations && !converged; ++it) {
        long double max_step = 0;
        for (std::size_t k = 0; k < deg; ++k) {
            const cld val = detail::horner(c, z[k]);
            if (val == cld(0)) continue;
            const cld ratio = val / detail::horner_derivative(c, z[k]);
            cld repulsion = 0;
            for (std::size_t j = 0; j < deg; ++j) {
                if (j != k) repulsion += 1.0L / (z[k] - z[j]);
            }
            const cld step = ratio / (1.0L - ratio * repulsion);
            z[k] -= step;
            max_step = std::max(max_step, std::abs(step) / std::max(1.0L, std::abs(z[k])));
        }
        converged = max_step < 1e-17L;
    }

    // cluster centroids
    std::vector<int> cluster(deg, -1);
    int next = 0;
    for (std::size_t i = 0; i < deg; ++i) {
        if (cluster[i] >= 0) continue;
        cluster[i] = next;
        for (std::size_t j = i + 1; j < deg; ++j) {
            if (cluster[j] < 0 && std::abs(z[i] - z[j]) <= 1e-5L * std::max(1.0L, std::abs(z[i]))) cluster[j] = next;
        }
        ++next;
    }
    std::vector<cld> refined(deg);
    for (int g = 0; g < next; ++g) {
        cld sum = 0;
        int members = 0;
        for (std::size_t i = 0; i < deg; ++i) {
            if (cluster[i] == g) {
                sum += z[i];
                ++members;
            }
        }
        for (std::size_t i = 0; i < deg; ++i) {
            if (cluster[i] == g) refined[i] = sum / static_cast<long double>(members);
        }
    }

    long double max_coeff = 0;
    for (const auto& x : c) max_coeff = std::max(max_coeff, std::abs(x));
    std::vector<std::complex<double>> out;
    std::ostringstream residuals;
    bool ok = true;
    for (const auto& root : refined) {
        const long double scale = std::pow(std::max(1.0L, std::abs(root)), static_cast<long double>(deg));
        const long double res = std::abs(detail::horner(c, root)) / scale;
        residuals << static_cast<double>(res) << ' ';
        if (!(res <= 1e-10L * max_coeff)) ok = false;
        out.emplace_back(root);
    }
    if (!ok) throw Error(ErrorKind::NonConvergence, "root residuals too large: " + residuals.str());
    return out;
}

/// Reciprocal roots alpha_i of P(T) = prod (1 - alpha_i T), given c_0 = 1 .. c_D.
inline std::vector<std::complex<double>> reciprocal_roots(std::span<const std::complex<double>> coeffs) {
    std::vector<std::complex<double>> rev(coeffs.rbegin(), coeffs.rend());
    while (!rev.empty() && std::abs(rev.front()) == 0.0 && rev.size() > 1) {
        // P of lower degree than the coefficient list: drop leading zeros
        rev.erase(rev.begin());
    }
    return poly_roots(rev);
}

struct LPolynomial {
    std::size_t degree = 0;
    std::vector<Cyclotomic> coeffs;      // c_0 = 1 .. c_D in Q(zeta_{q-1})
    std::vector<Cyclotomic> power_sums;  // S_1 .. S_{D + extra}
    std::vector<std::complex<double>> roots;
    /// P(T) = L(T)^{l_exponent}; fixed at (-1)^{d+1} by the power-sum normalisation.
    int l_exponent = -1;
    int power_sum_sign = 1;  // (-1)^d
    double max_power_sum_deviation = 0.0;
    bool integral = true;
    double elapsed_seconds = 0.0;
};

struct LPolynomialOptions {
    std::size_t extra = 2;
    SumOptions sums{};
    double tolerance = kRootTolerance;
};

/// Computes S_1..S_{D_L+extra}, recovers P(T) of degree D_L exactly and its reciprocal roots.
inline LPolynomial l_polynomial(const AffineSubspace& L, std::span<const MultChar> chars,
                                const PositionReport& report, const LPolynomialOptions& opts = {}) {
    const auto start = std::chrono::steady_clock::now();
    if (!report.admissible()) throw Error(ErrorKind::NotInPosition, "subspace is not in general position among its translates");
    if (report.degree < 0) throw Error(ErrorKind::DegreeMismatch, "negative predicted degree " + std::to_string(report.degree));
    if (opts.extra < 1) throw Error(ErrorKind::InvalidArgument, "need at least one consistency power sum");
    const std::size_t D = static_cast<std::size_t>(report.degree);
    const std::size_t total = D + opts.extra;
    const std::size_t d = L.d();
    const std::uint32_t units = L.field().units();
    if (detail::checked_pow(L.field().q(), total * d, opts.sums.enumeration_cap) > opts.sums.enumeration_cap)
        throw Error(ErrorKind::CapExceeded, "q^{(D_L+extra) d} exceeds enumeration cap");

    LPolynomial P;
    P.degree = D;
    P.power_sum_sign = d % 2 == 0 ? 1 : -1;
    P.l_exponent = -P.power_sum_sign;
    std::vector<Cyclotomic> p;
    for (std::size_t r = 1; r <= total; ++r) {
        P.power_sums.push_back(char_sum(L, chars, static_cast<std::uint32_t>(r), opts.sums).value);
        p.push_back(P.power_sum_sign == 1 ? P.power_sums.back() : -P.power_sums.back());
    }

    if (D == 0) {
        for (std::size_t r = 0; r < total; ++r) {
            if (!p[r].is_zero())
                throw Error(ErrorKind::DegreeMismatch, "D_L = 0 but S_" + std::to_string(r + 1) + " is nonzero");
        }
        P.coeffs = {Cyclotomic::integer(units, 1)};
        P.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return P;
    }

    const auto e = newton_to_coeffs(std::span<const Cyclotomic>(p.data(), D));
    if (e.back().is_zero()) throw Error(ErrorKind::DegreeMismatch, "top coefficient e_D vanishes; degree below D_L");
    for (std::size_t r = D + 1; r <= total; ++r) {
        Cyclotomic predicted(units);
        for (std::size_t i = 1; i <= D; ++i) {
            const Cyclotomic term = e[i - 1] * p[r - i - 1];
            if (i % 2 == 1) predicted += term;
            else predicted -= term;
        }
        if (!(predicted == p[r - 1]))
            throw Error(ErrorKind::DegreeMismatch, "power sum S_" + std::to_string(r) + " inconsistent with degree D_L");
    }
    P.coeffs = coeffs_from_elementary(units, e);
    for (const auto& c : P.coeffs) {
        if (!c.is_integral()) P.integral = false;
    }
    if (!P.integral) throw Error(ErrorKind::NotIntegral, "L-polynomial coefficient has a nontrivial denominator");

    std::vector<std::complex<double>> approx;
    for (const auto& c : P.coeffs) approx.push_back(embed(c).value());
    P.roots = reciprocal_roots(approx);

    for (std::size_t r = 1; r <= total; ++r) {
        std::complex<double> sum = 0;
        double scale = 1.0;
        for (const auto& alpha : P.roots) {
            sum += std::pow(alpha, static_cast<int>(r));
            scale += std::pow(std::abs(alpha), static_cast<double>(r));
        }
        const double dev = std::abs(sum - embed(p[r - 1]).value()) / scale;
        P.max_power_sum_deviation = std::max(P.max_power_sum_deviation, dev);
    }
    if (P.max_power_sum_deviation > opts.tolerance)
        throw Error(ErrorKind::DegreeMismatch,
                    "roots reproduce power sums only to " + std::to_string(P.max_power_sum_deviation));
    P.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return P;
}

inline LPolynomial l_polynomial(const AffineSubspace& L, std::span<const MultChar> chars,
                                const LPolynomialOptions& opts = {}) {
    return l_polynomial(L, chars, classify_position(L), opts);
}

struct WeightProfile {
    std::map<int, std::size_t> counts;
    std::vector<std::complex<double>> unclassified;

    std::size_t total() const {
        std::size_t t = unclassified.size();
        for (const auto& [w, c] : counts) t += c;
        return t;
    }
};

/// Assigns each root to the integer i nearest log|alpha| / log sqrt(q), accepted when
/// 0 <= i <= max_weight and |alpha| / q^{i/2} is within tolerance of 1.
inline WeightProfile weight_profile(std::span<const std::complex<double>> roots, std::uint32_t q, std::size_t max_weight,
                                    double tolerance = kRootTolerance) {
    WeightProfile out;
    const double half_log_q = 0.5 * std::log(static_cast<double>(q));
    for (const auto& alpha : roots) {
        const double mod = std::abs(alpha);
        if (mod == 0.0) {
            out.unclassified.push_back(alpha);
            continue;
        }
        const long i = std::lround(std::log(mod) / half_log_q);
        const double expected = std::pow(static_cast<double>(q), 0.5 * static_cast<double>(i));
        if (i >= 0 && static_cast<std::size_t>(i) <= max_weight && std::abs(mod / expected - 1.0) < tolerance) {
            ++out.counts[static_cast<int>(i)];
        } else {
            out.unclassified.push_back(alpha);
        }
    }
    return out;
}

inline WeightProfile weight_profile(const LPolynomial& P, std::uint32_t q, std::size_t d,
                                    double tolerance = kRootTolerance) {
    return weight_profile(P.roots, q, d, tolerance);
}

/// Root counts per weight for a subspace in general position.
inline std::map<int, std::size_t> general_position_weights(std::size_t n, std::size_t d, bool product_trivial) {
    std::map<int, std::size_t> out;
    const auto nn = static_cast<std::int64_t>(n);
    const auto dd = static_cast<std::int64_t>(d);
    if (!product_trivial) {
        if (auto c = binom(nn - 1, dd)) out[static_cast<int>(d)] = c;
    } else {
        if (auto c = binom(nn - 2, dd)) out[static_cast<int>(d)] = c;
        if (auto c = binom(nn - 2, dd - 1)) out[static_cast<int>(d) - 1] = c;
    }
    return out;
}

struct BoundReport {
    double abs_sum = 0.0;
    double sum_err = 0.0;
    /// D_L q^{d/2}
    double degree_bound = 0.0;
    /// tightest applicable bound
    double bound = 0.0;
    double margin = 0.0;
    std::string bound_kind;
    bool product_trivial = false;
    /// | |S_1| - |sum alpha_i| |
    double root_sum_deviation = 0.0;
};

/// Checks |S| against D_L q^{d/2} and, in general position, against the refined
/// bounds depending on whether chi_1...chi_n is trivial. Throws BoundViolated.
inline BoundReport verify_bounds(const AffineSubspace& L, std::span<const MultChar> chars,
                                 const PositionReport& report, const LPolynomial& P,
                                 double tolerance = kRootTolerance) {
    if (!report.admissible()) throw Error(ErrorKind::NotInPosition, "bounds need general position among translates");
    const double q = L.field().q();
    const auto n = static_cast<std::int64_t>(L.n());
    const auto d = static_cast<std::int64_t>(L.d());
    const ComplexApprox s = embed(P.power_sums.front());

    BoundReport rep;
    rep.abs_sum = s.abs();
    rep.sum_err = s.err_bound;
    rep.product_trivial = product_char(L.field(), chars).trivial();
    rep.degree_bound = static_cast<double>(report.degree) * std::pow(q, 0.5 * d);
    rep.bound = rep.degree_bound;
    rep.bound_kind = "degree";
    if (report.classification == Position::GeneralPosition) {
        double gp;
        if (!rep.product_trivial) {
            gp = static_cast<double>(binom(n - 1, d)) * std::pow(q, 0.5 * d);
        } else {
            gp = static_cast<double>(binom(n - 2, d)) * std::pow(q, 0.5 * d) +
                 static_cast<double>(binom(n - 2, d - 1)) * std::pow(q, 0.5 * (d - 1));
        }
        if (gp <= rep.bound) {
            rep.bound = gp;
            rep.bound_kind = rep.product_trivial ? "general-trivial" : "general-nontrivial";
        }
    }
    rep.margin = rep.bound - rep.abs_sum;

    std::complex<double> root_sum = 0;
    double scale = 1.0;
    for (const auto& alpha : P.roots) {
        root_sum += alpha;
        scale += std::abs(alpha);
    }
    rep.root_sum_deviation = std::abs(rep.abs_sum - std::abs(root_sum));

    const double slack = 1e-9 * std::max(1.0, rep.bound) + rep.sum_err;
    auto fail = [&](const std::string& what) {
        std::ostringstream msg;
        msg << what << " (|S| = " << rep.abs_sum << ", bound = " << rep.bound << ", D_L bound = " << rep.degree_bound
            << ", q = " << q << ", n = " << n << ", d = " << d << ")";
        throw Error(ErrorKind::BoundViolated, msg.str());
    };
    if (rep.abs_sum > rep.degree_bound + slack) fail("|S| exceeds D_L q^{d/2}");
    if (rep.abs_sum > rep.bound + slack) fail("|S| exceeds the general-position bound");
    if (rep.root_sum_deviation > tolerance * scale) fail("sum of reciprocal roots does not recover |S|");
    return rep;
}

}  // namespace charsum
