#include <catch2/catch_amalgamated.hpp>

#include <freedist/matrix.hpp>

#include <random>

using namespace freedist;

namespace {

Mat<Rational> rand_mat(std::mt19937& rng, std::size_t r, std::size_t c, int lo = -5, int hi = 5) {
    std::uniform_int_distribution<int> d(lo, hi);
    Mat<Rational> m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = Rational(d(rng));
    return m;
}

}  // namespace

TEST_CASE("matrix product and transpose") {
    Mat<Rational> a = Mat<Rational>::from_rows({{Rational(1), Rational(2)},
                                                {Rational(3), Rational(4)}});
    Mat<Rational> b = Mat<Rational>::from_rows({{Rational(0), Rational(1)},
                                                {Rational(1), Rational(0)}});
    CHECK((a * b) == Mat<Rational>::from_rows({{Rational(2), Rational(1)},
                                               {Rational(4), Rational(3)}}));
    CHECK((a * b).transpose() == b.transpose() * a.transpose());
    CHECK(a * Mat<Rational>::identity(2) == a);
}

TEST_CASE("rank agrees across pivot rules") {
    std::mt19937 rng(100);
    for (int t = 0; t < 50; ++t) {
        Mat<Rational> m = rand_mat(rng, 5, 7);
        std::size_t r1 = rank(m, PivotRule::SmallestMagnitude);
        std::size_t r2 = rank(m, PivotRule::LargestMagnitude);
        std::size_t r3 = rank(m, PivotRule::FirstNonzero);
        CHECK(r1 == r2);
        CHECK(r1 == r3);
        CHECK(rank(m) == rank(m.transpose()));
    }
}

TEST_CASE("kernel basis spans the kernel, rank-nullity holds") {
    std::mt19937 rng(101);
    for (int t = 0; t < 40; ++t) {
        Mat<Rational> m = rand_mat(rng, 4, 6);
        auto ker = kernel_basis(m);
        CHECK(rank(m) + ker.size() == m.cols());
        for (const auto& v : ker) CHECK(vec_is_zero(m * v));
        CHECK(span_dim(ker) == ker.size());
    }
}

TEST_CASE("solve returns a verified solution or nullopt") {
    std::mt19937 rng(102);
    int solvable = 0, unsolvable = 0;
    for (int t = 0; t < 60; ++t) {
        Mat<Rational> m = rand_mat(rng, 4, 3);
        Vec<Rational> b = rand_mat(rng, 4, 1).col(0);
        auto x = solve(m, b);
        if (x) {
            ++solvable;
            CHECK(m * *x == b);
        } else {
            ++unsolvable;
            // b must then lie outside the column span.
            CHECK_FALSE(span_contains(m.transpose().to_rows(), b));
        }
    }
    CHECK(solvable > 0);
    CHECK(unsolvable > 0);
}

TEST_CASE("determinant matches cofactor expansion on small matrices") {
    Mat<Rational> m = Mat<Rational>::from_rows({
        {Rational(2), Rational(-1), Rational(0)},
        {Rational(1), Rational(1, 2), Rational(3)},
        {Rational(0), Rational(4), Rational(1)},
    });
    // 2*(1/2 - 12) + 1*(1 - 0) + 0 = -23 + 1 = -22
    CHECK(determinant(m) == Rational(-22));
    CHECK(determinant(m, PivotRule::LargestMagnitude) == Rational(-22));
    CHECK(determinant(Mat<Rational>::identity(4)) == Rational(1));

    std::mt19937 rng(103);
    for (int t = 0; t < 30; ++t) {
        Mat<Rational> a = rand_mat(rng, 3, 3);
        Mat<Rational> b = rand_mat(rng, 3, 3);
        CHECK(determinant(a * b) == determinant(a) * determinant(b));
        CHECK(determinant(a.transpose()) == determinant(a));
    }
}

TEST_CASE("inverse") {
    std::mt19937 rng(104);
    int invertible = 0;
    for (int t = 0; t < 30; ++t) {
        Mat<Rational> m = rand_mat(rng, 4, 4);
        auto inv = inverse(m);
        if (determinant(m).is_zero()) {
            CHECK_FALSE(inv.has_value());
        } else {
            ++invertible;
            REQUIRE(inv.has_value());
            CHECK(m * *inv == Mat<Rational>::identity(4));
            CHECK(*inv * m == Mat<Rational>::identity(4));
        }
    }
    CHECK(invertible > 0);
}

TEST_CASE("span operations satisfy dimension identities") {
    std::mt19937 rng(105);
    for (int t = 0; t < 40; ++t) {
        auto a = rand_mat(rng, 3, 6).to_rows();
        auto b = rand_mat(rng, 3, 6).to_rows();
        auto inter = span_intersection(a, b);
        auto sum = span_sum(a, b);
        CHECK(span_dim(a) + span_dim(b) == sum.size() + inter.size());
        for (const auto& v : inter) {
            CHECK(span_contains(a, v));
            CHECK(span_contains(b, v));
        }
        for (const auto& v : a) CHECK(span_contains(sum, v));
    }
}

TEST_CASE("coords_in_span reconstructs the vector") {
    std::mt19937 rng(106);
    for (int t = 0; t < 30; ++t) {
        auto basis = rand_mat(rng, 4, 6).to_rows();
        std::uniform_int_distribution<int> d(-3, 3);
        Vec<Rational> v(6);
        Vec<Rational> expect_coeff(4);
        for (std::size_t j = 0; j < 4; ++j) {
            Rational c(d(rng));
            expect_coeff[j] = c;
            add_scaled(v, c, basis[j]);
        }
        auto coeff = coords_in_span(basis, v);
        REQUIRE(coeff.has_value());
        Vec<Rational> rebuilt(6);
        for (std::size_t j = 0; j < 4; ++j) add_scaled(rebuilt, (*coeff)[j], basis[j]);
        CHECK(rebuilt == v);
    }
}

TEST_CASE("gaussian matrices eliminate correctly") {
    GaussScalar i = GaussScalar::i();
    Mat<GaussScalar> m = Mat<GaussScalar>::from_rows({
        {GaussScalar(1), i},
        {i, GaussScalar(-1)},
    });
    // Second row is i times the first.
    CHECK(rank(m) == 1);
    auto ker = kernel_basis(m);
    REQUIRE(ker.size() == 1);
    CHECK(vec_is_zero(m * ker[0]));
}
