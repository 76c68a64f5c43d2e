#include <catch2/catch_amalgamated.hpp>

#include <freedist/poly.hpp>

#include <random>

using namespace freedist;

namespace {

Poly rand_poly(const CoordPtr& sys, std::mt19937& rng, unsigned max_deg = 2) {
    std::uniform_int_distribution<int> coef(-4, 4);
    std::uniform_int_distribution<unsigned> expo(0, max_deg);
    Poly p = Poly::constant(coef(rng));
    for (int t = 0; t < 4; ++t) {
        Poly term = Poly::constant(coef(rng));
        for (std::size_t v = 0; v < sys->size(); ++v)
            for (unsigned k = 0, e = expo(rng); k < e; ++k) term *= Poly::var(sys, v);
        p += term;
    }
    return p;
}

PolyVectorField rand_field(const CoordPtr& sys, std::mt19937& rng) {
    PolyVectorField f(sys);
    for (auto& c : f.comp) c = rand_poly(sys, rng, 1);
    return f;
}

}  // namespace

TEST_CASE("polynomial ring basics") {
    auto sys = CoordSystem::make({"x", "y", "z"});
    Poly x = Poly::var(sys, "x"), y = Poly::var(sys, "y");

    SECTION("no zero terms survive cancellation") {
        Poly p = (x + y) * (x - y) - x * x + y * y;
        CHECK(p.is_zero());
        CHECK(p.term_count() == 0);
    }
    SECTION("printing is deterministic and readable") {
        Poly p = x * x - Rational(1, 2) * y + Poly::constant(3);
        CHECK(p.str() == "3 - 1/2*y + x^2");
        CHECK(Poly().str() == "0");
    }
    SECTION("constants interoperate with any chart") {
        Poly c = Poly::constant(Rational(2, 3));
        CHECK((c * x).coeff({1, 0, 0}) == Rational(2, 3));
        CHECK(c.is_constant());
        CHECK((x - x).is_constant());
        CHECK_THROWS_AS(x.constant_value(), std::domain_error);
    }
    SECTION("distinct charts are rejected") {
        auto other = CoordSystem::make({"x", "y", "z"});
        CHECK_THROWS_AS(x + Poly::var(other, 0), std::invalid_argument);
    }
    SECTION("duplicate coordinate names are rejected") {
        CHECK_THROWS_AS(CoordSystem::make({"x", "x"}), std::invalid_argument);
    }
}

TEST_CASE("ring identities on pseudo-random polynomials") {
    auto sys = CoordSystem::make({"x", "y", "z"});
    std::mt19937 rng(20260814);
    for (int it = 0; it < 30; ++it) {
        Poly a = rand_poly(sys, rng), b = rand_poly(sys, rng), c = rand_poly(sys, rng);
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a - a == Poly());
    }
}

TEST_CASE("derivative is a derivation and evaluation a homomorphism") {
    auto sys = CoordSystem::make({"x", "y"});
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> num(-5, 5);
    for (int it = 0; it < 25; ++it) {
        Poly a = rand_poly(sys, rng), b = rand_poly(sys, rng);
        for (std::size_t v = 0; v < 2; ++v)
            CHECK((a * b).derivative(v) == a.derivative(v) * b + a * b.derivative(v));
        Vec<Rational> pt{Rational(num(rng), 3), Rational(num(rng), 2)};
        CHECK((a * b).eval(pt) == a.eval(pt) * b.eval(pt));
        CHECK((a + b).eval(pt) == a.eval(pt) + b.eval(pt));
    }
    Poly x = Poly::var(sys, "x");
    CHECK((x * x * x).derivative(0) == Rational(3) * x * x);
    CHECK((x * x).derivative(1).is_zero());
}

TEST_CASE("degree truncation") {
    auto sys = CoordSystem::make({"x", "y"});
    Poly x = Poly::var(sys, "x"), y = Poly::var(sys, "y");
    Poly p = Poly::constant(1) + x + x * y + x * x * y;
    CHECK(p.truncated(2) == Poly::constant(1) + x + x * y);
    CHECK(p.truncated(0) == Poly::constant(1));
    CHECK(p.total_degree() == 3);
}

TEST_CASE("vector fields act as derivations") {
    auto sys = CoordSystem::make({"x", "y", "z"});
    std::mt19937 rng(11);
    for (int it = 0; it < 15; ++it) {
        PolyVectorField f = rand_field(sys, rng);
        Poly a = rand_poly(sys, rng), b = rand_poly(sys, rng);
        CHECK(f.apply(a * b) == f.apply(a) * b + a * f.apply(b));
    }
}

TEST_CASE("lie bracket identities") {
    auto sys = CoordSystem::make({"x", "y", "z"});

    SECTION("coordinate fields commute") {
        auto d0 = PolyVectorField::coordinate(sys, 0);
        auto d1 = PolyVectorField::coordinate(sys, 1);
        CHECK(lie_bracket(d0, d1).is_zero());
    }
    SECTION("bracket of f with itself vanishes, antisymmetry, Jacobi") {
        std::mt19937 rng(20260814);
        for (int it = 0; it < 8; ++it) {
            PolyVectorField f = rand_field(sys, rng), g = rand_field(sys, rng),
                            h = rand_field(sys, rng);
            CHECK(lie_bracket(f, f).is_zero());
            CHECK(lie_bracket(f, g) == -lie_bracket(g, f));
            PolyVectorField jac = lie_bracket(f, lie_bracket(g, h)) +
                                  lie_bracket(g, lie_bracket(h, f)) +
                                  lie_bracket(h, lie_bracket(f, g));
            CHECK(jac.is_zero());
        }
    }
    SECTION("bracket matches its action on functions") {
        std::mt19937 rng(3);
        PolyVectorField f = rand_field(sys, rng), g = rand_field(sys, rng);
        Poly a = rand_poly(sys, rng);
        CHECK(lie_bracket(f, g).apply(a) == f.apply(g.apply(a)) - g.apply(f.apply(a)));
    }
    SECTION("chart mismatch is rejected") {
        auto other = CoordSystem::make({"x", "y", "z"});
        CHECK_THROWS_AS(lie_bracket(PolyVectorField(sys), PolyVectorField(other)),
                        std::invalid_argument);
    }
}
