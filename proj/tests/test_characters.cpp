#include <gtest/gtest.h>

#include <complex>
#include <vector>

#include "charsum/characters.hpp"
#include "oracles.hpp"

using namespace charsum;

namespace {

Cyclotomic zeta(std::uint32_t m, std::int64_t j) { return Cyclotomic::zeta_power(m, j); }

std::complex<double> oracle_gauss(const Field& f, std::uint32_t e, FieldElem b) {
    std::complex<double> s = 0;
    for (std::uint32_t c = 1; c < f.q(); ++c) {
        const FieldElem x{c};
        s += oracle::char_value(f, e, x) * oracle::root_of_unity(f.p(), f.trace(oracle::slow_mul(f, b, x)));
    }
    return s;
}

std::complex<double> oracle_jacobi(const Field& f, const std::vector<std::uint32_t>& es) {
    const std::size_t n = es.size();
    std::complex<double> s = 0;
    std::vector<std::uint32_t> x(n, 0);
    while (true) {
        FieldElem sum = f.zero();
        for (auto c : x) sum = oracle::slow_add(f, sum, FieldElem{c});
        if (sum == f.one()) {
            std::complex<double> t = 1;
            for (std::size_t i = 0; i < n; ++i) t *= oracle::char_value(f, es[i], FieldElem{x[i]});
            s += t;
        }
        std::size_t k = 0;
        while (k < n && ++x[k] == f.q()) x[k++] = 0;
        if (k == n) break;
    }
    return s;
}

std::complex<double> value(const Cyclotomic& z) { return embed(z).value(); }

}  // namespace

TEST(EvalChar, Examples) {
    const Field f3 = make_field(3, 1);
    const MultChar quad(f3, 1);
    EXPECT_TRUE(eval_char(quad, FieldElem{0}).is_zero());
    EXPECT_EQ(eval_char(quad, FieldElem{1}), Cyclotomic::integer(2, 1));
    EXPECT_EQ(eval_char(quad, FieldElem{2}), Cyclotomic::integer(2, -1));
    const Field f5 = make_field(5, 1);
    const MultChar chi(f5, 1);  // generator 2 maps to i
    EXPECT_EQ(eval_char(chi, FieldElem{2}), zeta(4, 1));
    EXPECT_EQ(eval_char(chi, FieldElem{4}), Cyclotomic::integer(4, -1));
    EXPECT_EQ(eval_char(MultChar(f5, 0), FieldElem{3}), Cyclotomic::integer(4, 1));
}

TEST(EvalChar, MatchesOracleAndIsMultiplicative) {
    for (auto [p, a] : std::vector<std::pair<int, int>>{{3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3}, {3, 2}}) {
        const Field f = make_field(p, a);
        for (std::uint32_t e = 0; e < f.units(); ++e) {
            const MultChar chi(f, e);
            for (std::uint32_t x = 0; x < f.q(); ++x) {
                EXPECT_LT(std::abs(value(eval_char(chi, FieldElem{x})) - oracle::char_value(f, e, FieldElem{x})), 1e-9);
                for (std::uint32_t y = 0; y < f.q(); ++y)
                    ASSERT_EQ(eval_char(chi, f.mul(FieldElem{x}, FieldElem{y})),
                              eval_char(chi, FieldElem{x}) * eval_char(chi, FieldElem{y}));
            }
        }
    }
}

TEST(EvalAdd, IsAdditive) {
    for (auto [p, a] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {5, 1}}) {
        const Field f = make_field(p, a);
        for (std::uint32_t b = 0; b < f.q(); ++b) {
            const AddChar psi{f, FieldElem{b}};
            for (std::uint32_t x = 0; x < f.q(); ++x)
                for (std::uint32_t y = 0; y < f.q(); ++y)
                    ASSERT_EQ(eval_add(psi, f.add(FieldElem{x}, FieldElem{y})),
                              eval_add(psi, FieldElem{x}) * eval_add(psi, FieldElem{y}));
        }
    }
}

TEST(ProductChar, Examples) {
    const Field f5 = make_field(5, 1);
    const std::vector<MultChar> chars{MultChar(f5, 1), MultChar(f5, 3)};
    EXPECT_TRUE(product_char(chars).trivial());
    const std::vector<MultChar> two{MultChar(f5, 1), MultChar(f5, 1)};
    EXPECT_EQ(product_char(two).e, 2u);
    EXPECT_TRUE(product_char(f5, std::span<const MultChar>{}).trivial());
    try {
        product_char(std::span<const MultChar>{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
    }
    const std::vector<MultChar> mixed{MultChar(f5, 1), MultChar(make_field(7, 1), 1)};
    try {
        product_char(mixed);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::FieldMismatch);
    }
}

TEST(LiftChar, QuadraticFromF3ToF9) {
    const Field f3 = make_field(3, 1);
    const auto emb = extend(f3, 2);
    const MultChar lifted = lift_char(MultChar(f3, 1), emb);
    EXPECT_EQ(lifted.e, 4u);
}

TEST(LiftChar, AgreesWithCharacterOfNorm) {
    for (auto [p, a, r] : std::vector<std::tuple<int, int, int>>{{2, 1, 3}, {3, 1, 2}, {3, 1, 3}, {5, 1, 2}, {2, 2, 2}, {7, 1, 2}}) {
        const Field f = make_field(p, a);
        const auto emb = extend(f, r);
        for (std::uint32_t e = 0; e < f.units(); ++e) {
            const MultChar chi(f, e);
            const MultChar lifted = lift_char(chi, emb);
            for (std::uint32_t c = 0; c < emb.ext().q(); ++c) {
                const FieldElem x{c};
                ASSERT_EQ(eval_char(lifted, x), eval_char(chi, norm(emb, x))) << p << "^" << a << " r=" << r;
            }
        }
    }
}

TEST(GaussSum, F3Quadratic) {
    const Field f3 = make_field(3, 1);
    EXPECT_EQ(gauss_sum(MultChar(f3, 1)), zeta(3, 1) - zeta(3, 2));
}

TEST(GaussSum, TrivialCharacterGivesMinusOne) {
    for (auto [p, a] : std::vector<std::pair<int, int>>{{2, 2}, {3, 1}, {5, 1}, {3, 2}}) {
        const Field f = make_field(p, a);
        EXPECT_EQ(gauss_sum(MultChar(f, 0)), Cyclotomic::integer(1, -1));
    }
}

TEST(GaussSum, ModulusAndOracle) {
    for (auto [p, a] : std::vector<std::pair<int, int>>{{3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3}, {3, 2}}) {
        const Field f = make_field(p, a);
        for (std::uint32_t e = 1; e < f.units(); ++e) {
            const MultChar chi(f, e);
            for (std::uint32_t b = 1; b < f.q(); ++b) {
                const AddChar psi{f, FieldElem{b}};
                const Cyclotomic g = gauss_sum(chi, psi);
                EXPECT_EQ(g * conj(g), Cyclotomic::integer(1, f.q()));
                EXPECT_LT(std::abs(value(g) - oracle_gauss(f, e, FieldElem{b})), 1e-9);
            }
        }
    }
}

TEST(JacobiSum, Examples) {
    const Field f3 = make_field(3, 1);
    const std::vector<MultChar> q3{MultChar(f3, 1), MultChar(f3, 1)};
    EXPECT_EQ(jacobi_sum(q3), Cyclotomic::integer(1, 1));
    const Field f5 = make_field(5, 1);
    const std::vector<MultChar> q5{MultChar(f5, 2), MultChar(f5, 2)};
    EXPECT_EQ(jacobi_sum(q5), Cyclotomic::integer(1, -1));
}

TEST(JacobiSum, Errors) {
    const Field f5 = make_field(5, 1);
    const std::vector<MultChar> one{MultChar(f5, 1)};
    const std::vector<MultChar> trivial{MultChar(f5, 1), MultChar(f5, 0)};
    const std::vector<MultChar> mixed{MultChar(f5, 1), MultChar(make_field(7, 1), 1)};
    auto kind = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::ConfigInvalid;
    };
    EXPECT_EQ(kind([&] { jacobi_sum(one); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind([&] { jacobi_sum(trivial); }), ErrorKind::TrivialCharacter);
    EXPECT_EQ(kind([&] { jacobi_sum(mixed); }), ErrorKind::FieldMismatch);
    EXPECT_EQ(kind([&] { jacobi_via_gauss(trivial); }), ErrorKind::TrivialCharacter);
}

TEST(JacobiSum, DirectAgreesWithGaussFormulaAndOracle) {
    for (auto [p, a] : std::vector<std::pair<int, int>>{{3, 1}, {2, 2}, {5, 1}, {7, 1}}) {
        const Field f = make_field(p, a);
        for (std::size_t n : {2u, 3u}) {
            std::vector<std::uint32_t> es(n, 1);
            while (true) {
                std::vector<MultChar> chars;
                for (auto e : es) chars.emplace_back(f, e);
                const Cyclotomic j = jacobi_sum(chars);
                EXPECT_EQ(j, jacobi_via_gauss(chars));
                EXPECT_EQ(j, jacobi_via_gauss(chars, f.generator()));
                EXPECT_LT(std::abs(value(j) - oracle_jacobi(f, es)), 1e-9);
                std::size_t k = 0;
                while (k < n && ++es[k] == f.units()) es[k++] = 1;
                if (k == n) break;
            }
        }
    }
}

TEST(JacobiSum, ModulusMatchesCharacterProduct) {
    // |J|^2 = q^(n-1) for nontrivial product, q^(n-2) otherwise
    const Field f = make_field(7, 1);
    for (std::uint32_t e1 = 1; e1 < 6; ++e1)
        for (std::uint32_t e2 = 1; e2 < 6; ++e2)
            for (std::uint32_t e3 = 1; e3 < 6; ++e3) {
                const std::vector<MultChar> chars{MultChar(f, e1), MultChar(f, e2), MultChar(f, e3)};
                const Cyclotomic j = jacobi_sum(chars);
                const long expected = (e1 + e2 + e3) % 6 == 0 ? 7 : 49;
                EXPECT_EQ(j * conj(j), Cyclotomic::integer(1, expected));
            }
}
