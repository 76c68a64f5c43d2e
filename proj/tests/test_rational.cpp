#include <catch2/catch_amalgamated.hpp>

#include <freedist/gauss.hpp>
#include <freedist/rational.hpp>

#include <random>

using freedist::GaussScalar;
using freedist::Rational;

namespace {

Rational rand_rational(std::mt19937& rng) {
    std::uniform_int_distribution<long> num(-12, 12);
    std::uniform_int_distribution<long> den(1, 9);
    return Rational(num(rng), den(rng));
}

}  // namespace

TEST_CASE("rational canonical form") {
    CHECK(Rational(2, 6) == Rational(1, 3));
    CHECK(Rational(2, 6).num() == 1);
    CHECK(Rational(2, 6).den() == 3);
    CHECK(Rational(3, -6) == Rational(-1, 2));
    CHECK(Rational(3, -6).den() == 2);
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational(-4, -2) == Rational(2));
    CHECK(Rational(2, 6).str() == "1/3");
    CHECK(Rational(-6, 3).str() == "-2");
}

TEST_CASE("rational arithmetic stays canonical") {
    Rational a(1, 6), b(1, 3);
    Rational s = a + b;
    CHECK(s == Rational(1, 2));
    CHECK(s.den() == 2);
    CHECK(a * b == Rational(1, 18));
    CHECK(b - a == a);
    CHECK(b / a == Rational(2));
    CHECK((-b).str() == "-1/3");
    CHECK(Rational(5, 4).inverse() == Rational(4, 5));
}

TEST_CASE("rational division by zero throws") {
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
    CHECK_THROWS_AS(Rational(0).inverse(), std::domain_error);
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("rational ordering and magnitude") {
    CHECK(Rational(-3, 2) < Rational(1, 7));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-3, 2).abs() == Rational(3, 2));
    CHECK(Rational(-3, 2).sign() == -1);
    CHECK(Rational(0).sign() == 0);
    CHECK(freedist::smaller_magnitude(Rational(1, 3), Rational(-1, 2)));
}

TEST_CASE("rational field axioms on sampled values") {
    std::mt19937 rng(20260814);
    for (int t = 0; t < 200; ++t) {
        Rational a = rand_rational(rng), b = rand_rational(rng), c = rand_rational(rng);
        CHECK(a + b == b + a);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + (-a) == Rational(0));
        if (!a.is_zero()) CHECK(a * a.inverse() == Rational(1));
    }
}

TEST_CASE("gaussian scalar arithmetic") {
    GaussScalar i = GaussScalar::i();
    CHECK(i * i == GaussScalar(-1));
    GaussScalar z(Rational(1, 2), Rational(-3, 4));
    CHECK(z.conj() == GaussScalar(Rational(1, 2), Rational(3, 4)));
    CHECK(z * z.conj() == GaussScalar(z.norm()));
    CHECK(z.norm() == Rational(13, 16));
    CHECK(z * z.inverse() == GaussScalar(1));
    CHECK((z / z) == GaussScalar(1));
    CHECK_THROWS_AS(z / GaussScalar(0), std::domain_error);
}

TEST_CASE("gaussian scalar field axioms on sampled values") {
    std::mt19937 rng(7);
    for (int t = 0; t < 200; ++t) {
        GaussScalar a(rand_rational(rng), rand_rational(rng));
        GaussScalar b(rand_rational(rng), rand_rational(rng));
        GaussScalar c(rand_rational(rng), rand_rational(rng));
        CHECK(a * (b * c) == (a * b) * c);
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a * b).conj() == a.conj() * b.conj());
        CHECK((a + b).norm() + (a - b).norm() == Rational(2) * (a.norm() + b.norm()));
        if (!a.is_zero()) CHECK(a * a.inverse() == GaussScalar(1));
    }
}
