#include <gtest/gtest.h>

#include "charsum/ff_core.hpp"
#include "oracles.hpp"

using namespace charsum;

TEST(MakeField, PrimeFieldOfOrderThree) {
    const Field f = make_field(3, 1);
    EXPECT_EQ(f.q(), 3u);
    EXPECT_EQ(f.generator().code, 2u);
}

TEST(MakeField, OrderNineSatisfiesLagrange) {
    const Field f = make_field(3, 2);
    EXPECT_EQ(f.q(), 9u);
    for (std::uint32_t c = 1; c < 9; ++c) EXPECT_EQ(oracle::slow_pow(f, FieldElem{c}, 8).code, 1u);
}

TEST(MakeField, OrderEightGeneratorHasFullOrder) {
    const Field f = make_field(2, 3);
    EXPECT_EQ(f.q(), 8u);
    EXPECT_EQ(oracle::order(f, f.generator()), 7u);
}

TEST(MakeField, ModulusIsFirstIrreducibleInScanOrder) {
    EXPECT_EQ(make_field(3, 2).modulus(), (std::vector<std::uint32_t>{1, 0, 1}));
    EXPECT_EQ(make_field(2, 2).modulus(), (std::vector<std::uint32_t>{1, 1, 1}));
    EXPECT_EQ(make_field(2, 3).modulus(), (std::vector<std::uint32_t>{1, 1, 0, 1}));
}

TEST(MakeField, GeneratorIsLeastFullOrderCode) {
    for (auto [p, a] : {std::pair{3u, 2u}, {2u, 3u}, {5u, 1u}, {7u, 1u}, {2u, 4u}, {3u, 3u}}) {
        const Field f = make_field(p, a);
        for (std::uint32_t c = 1; c < f.generator().code; ++c) EXPECT_LT(oracle::order(f, FieldElem{c}), f.units());
        EXPECT_EQ(oracle::order(f, f.generator()), f.units());
    }
    EXPECT_EQ(make_field(3, 2).generator().code, 4u);
    EXPECT_EQ(make_field(5, 1).generator().code, 2u);
    EXPECT_EQ(make_field(7, 1).generator().code, 3u);
}

TEST(MakeField, Errors) {
    try {
        make_field(4, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotPrime);
    }
    try {
        make_field(2, 21);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::CapExceeded);
    }
    try {
        make_field(3, 5, 100);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::CapExceeded);
    }
}

TEST(MakeField, ModulusHasNoRootsInItsPrimeField) {
    for (auto [p, a] : {std::pair{2u, 3u}, {3u, 2u}, {3u, 3u}, {5u, 2u}, {2u, 4u}}) {
        const Field f = make_field(p, a);
        for (std::uint32_t x = 0; x < p; ++x) {
            std::uint64_t v = 0;
            for (std::size_t i = f.modulus().size(); i-- > 0;) v = (v * x + f.modulus()[i]) % p;
            EXPECT_NE(v, 0u) << "root " << x << " of modulus for " << p << "^" << a;
        }
    }
}

TEST(FieldArithmetic, ExhaustiveAxiomsForSmallFields) {
    for (auto [p, a] : {std::pair{2u, 1u}, {3u, 1u}, {2u, 2u}, {5u, 1u}, {7u, 1u}, {2u, 3u}, {3u, 2u}}) {
        const Field f = make_field(p, a);
        for (std::uint32_t x = 0; x < f.q(); ++x) {
            const FieldElem X{x};
            EXPECT_EQ(f.pow(X, f.q()), X);
            if (x != 0) {
                EXPECT_EQ(f.mul(X, f.inv(X)), f.one());
            }
            EXPECT_EQ(f.add(X, f.neg(X)), f.zero());
            for (std::uint32_t y = 0; y < f.q(); ++y) {
                const FieldElem Y{y};
                EXPECT_EQ(f.add(X, Y), oracle::slow_add(f, X, Y));
                EXPECT_EQ(f.mul(X, Y), oracle::slow_mul(f, X, Y));
                for (std::uint32_t z = 0; z < f.q(); ++z) {
                    const FieldElem Z{z};
                    EXPECT_EQ(f.add(f.add(X, Y), Z), f.add(X, f.add(Y, Z)));
                    EXPECT_EQ(f.mul(X, f.add(Y, Z)), f.add(f.mul(X, Y), f.mul(X, Z)));
                }
            }
        }
    }
}

TEST(FieldArithmetic, TraceLandsInPrimeFieldAndIsAdditive) {
    const Field f = make_field(3, 2);
    for (std::uint32_t x = 0; x < 9; ++x) {
        for (std::uint32_t y = 0; y < 9; ++y) {
            EXPECT_LT(f.trace(FieldElem{x}), 3u);
            EXPECT_EQ(f.trace(f.add(FieldElem{x}, FieldElem{y})), (f.trace(FieldElem{x}) + f.trace(FieldElem{y})) % 3);
        }
    }
}

TEST(Dlog, Examples) {
    EXPECT_EQ(dlog(make_field(7, 1), FieldElem{1}), 0u);
    EXPECT_EQ(dlog(make_field(3, 1), FieldElem{2}), 1u);
    EXPECT_EQ(dlog(make_field(5, 1), FieldElem{4}), 2u);
    try {
        dlog(make_field(5, 1), FieldElem{0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ZeroArgument);
    }
}

TEST(Dlog, ExpLogRoundTrip) {
    for (auto [p, a] : {std::pair{3u, 3u}, {2u, 5u}, {5u, 2u}, {11u, 1u}}) {
        const Field f = make_field(p, a);
        for (std::uint32_t j = 0; j < f.units(); ++j) EXPECT_EQ(dlog(f, f.exp(j)), j);
        std::vector<bool> hit(f.q(), false);
        for (std::uint32_t j = 0; j < f.units(); ++j) hit[f.exp(j).code] = true;
        EXPECT_FALSE(hit[0]);
        EXPECT_EQ(std::count(hit.begin(), hit.end(), true), static_cast<long>(f.units()));
    }
}

TEST(Extend, UnitalAndOrderTwoImage) {
    const Field f3 = make_field(3, 1);
    const FieldEmbedding emb = extend(f3, 2);
    EXPECT_EQ(emb.ext().q(), 9u);
    EXPECT_EQ(emb.image(f3.one()), emb.ext().one());
    // order census in F_9: exactly one element of order 2
    std::vector<std::uint32_t> order_two;
    for (std::uint32_t c = 1; c < 9; ++c)
        if (oracle::order(emb.ext(), FieldElem{c}) == 2) order_two.push_back(c);
    ASSERT_EQ(order_two.size(), 1u);
    EXPECT_EQ(emb.image(FieldElem{2}).code, order_two[0]);
}

TEST(Extend, DegreeOneIsIdentity) {
    const Field f4 = make_field(2, 2);
    const FieldEmbedding emb = extend(f4, 1);
    EXPECT_EQ(emb.ext(), f4);
    for (std::uint32_t c = 0; c < 4; ++c) EXPECT_EQ(emb.image(FieldElem{c}).code, c);
}

TEST(Extend, ImageIsRingHomomorphism) {
    for (auto [p, a, r] : {std::tuple{2u, 2u, 2u}, {3u, 1u, 3u}, {2u, 3u, 2u}, {3u, 2u, 2u}, {5u, 1u, 2u}}) {
        const Field base = make_field(p, a);
        const FieldEmbedding emb = extend(base, r);
        const Field& ext = emb.ext();
        EXPECT_EQ(oracle::order(ext, emb.image(base.generator())), base.units());
        for (std::uint32_t x = 0; x < base.q(); ++x) {
            for (std::uint32_t y = 0; y < base.q(); ++y) {
                EXPECT_EQ(emb.image(base.add(FieldElem{x}, FieldElem{y})), ext.add(emb.image(FieldElem{x}), emb.image(FieldElem{y})));
                EXPECT_EQ(emb.image(base.mul(FieldElem{x}, FieldElem{y})), ext.mul(emb.image(FieldElem{x}), emb.image(FieldElem{y})));
            }
        }
    }
}

TEST(Norm, Examples) {
    const Field f3 = make_field(3, 1);
    const FieldEmbedding emb = extend(f3, 2);
    EXPECT_EQ(norm(emb, emb.ext().one()), f3.one());
    EXPECT_EQ(norm(emb, emb.ext().generator()).code, 2u);
    EXPECT_EQ(norm(emb, FieldElem{0}).code, 0u);
}

TEST(Norm, BaseElementsNormToRthPower) {
    for (auto [p, a, r] : {std::tuple{3u, 1u, 2u}, {2u, 2u, 3u}, {5u, 1u, 3u}, {3u, 2u, 2u}}) {
        const Field base = make_field(p, a);
        const FieldEmbedding emb = extend(base, r);
        for (std::uint32_t y = 0; y < base.q(); ++y)
            EXPECT_EQ(norm(emb, emb.image(FieldElem{y})), base.pow(FieldElem{y}, r));
    }
}

TEST(Norm, IsMultiplicativeAndMatchesLogTable) {
    const Field base = make_field(2, 2);
    const FieldEmbedding emb = extend(base, 2);
    const Field& ext = emb.ext();
    for (std::uint32_t x = 1; x < ext.q(); ++x) {
        EXPECT_EQ(base.log(norm(emb, FieldElem{x})), emb.norm_log()[x]);
        for (std::uint32_t y = 1; y < ext.q(); ++y)
            EXPECT_EQ(norm(emb, ext.mul(FieldElem{x}, FieldElem{y})), base.mul(norm(emb, FieldElem{x}), norm(emb, FieldElem{y})));
    }
}

static Matrix mat(const Field& f, std::size_t r, std::size_t c, std::vector<std::uint32_t> codes) {
    std::vector<FieldElem> data;
    for (auto x : codes) data.push_back(f.elem(x));
    return Matrix(r, c, std::move(data));
}

TEST(RowReduce, Examples) {
    const Field f3 = make_field(3, 1);
    auto id = row_reduce(f3, mat(f3, 2, 2, {1, 0, 0, 1}));
    EXPECT_EQ(id.rank, 2u);
    EXPECT_EQ(id.pivots, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(row_reduce(f3, mat(f3, 2, 2, {1, 1, 2, 2})).rank, 1u);

    const Field f5 = make_field(5, 1);
    auto red = row_reduce(f5, mat(f5, 2, 3, {1, 1, 1, 0, 1, 2}));
    EXPECT_EQ(red.rank, 2u);
    EXPECT_EQ(red.pivots, (std::vector<std::size_t>{0, 1}));
    // hand elimination: R1 <- R1 - R2 gives (1, 0, -1) = (1, 0, 4)
    EXPECT_EQ(red.reduced, mat(f5, 2, 3, {1, 0, 4, 0, 1, 2}));
}

TEST(RowReduce, RankAgreesWithMinorExpansion) {
    std::uint64_t state = 12345;
    auto next = [&] {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return state >> 33;
    };
    for (std::uint32_t p : {2u, 3u}) {
        const Field f = make_field(p, 1);
        for (int trial = 0; trial < 300; ++trial) {
            const std::size_t rows = 1 + next() % 3;
            const std::size_t cols = 1 + next() % 4;
            std::vector<std::vector<FieldElem>> m(rows, std::vector<FieldElem>(cols));
            std::vector<FieldElem> flat;
            for (auto& row : m)
                for (auto& x : row) {
                    x = FieldElem{static_cast<std::uint32_t>(next() % p)};
                    flat.push_back(x);
                }
            EXPECT_EQ(rank(f, Matrix(rows, cols, flat)), oracle::minor_rank(f, m));
        }
    }
}

TEST(Determinant, AgreesWithLeibniz) {
    const Field f = make_field(3, 2);
    std::uint32_t seed = 7;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::vector<FieldElem>> m(3, std::vector<FieldElem>(3));
        std::vector<FieldElem> flat;
        for (auto& row : m)
            for (auto& x : row) {
                seed = seed * 1103515245u + 12345u;
                x = FieldElem{(seed >> 16) % 9};
                flat.push_back(x);
            }
        EXPECT_EQ(determinant(f, Matrix(3, 3, flat)), oracle::leibniz_det(f, m));
    }
}
