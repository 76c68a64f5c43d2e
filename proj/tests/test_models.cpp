#include <catch2/catch_amalgamated.hpp>

#include <freedist/models.hpp>

using namespace freedist;

namespace {

bool vec_poly_zero(const Vec<Poly>& v) {
    for (const auto& p : v)
        if (!p.is_zero()) return false;
    return true;
}

// expected bracket table entry as a vector field
PolyVectorField expected_bracket(const ModelFrame& fr, std::size_t i, std::size_t j) {
    Vec<Rational> c = fr.algebraic_bracket(i, j);
    PolyVectorField r(fr.sys);
    for (std::size_t f = 0; f < fr.size(); ++f)
        if (!c[f].is_zero()) r += Poly::constant(c[f]) * fr.fields[f];
    return r;
}

}  // namespace

TEST_CASE("standard model frame and commutator table") {
    for (std::size_t n = 2; n <= 5; ++n) {
        ModelFrame fr = standard_model(n);
        REQUIRE(fr.size() == n * (n + 1) / 2);
        REQUIRE(fr.sys->size() == fr.size());
        REQUIRE(fr.h_part.size() == n);
        // exhaustive table: [X_p,X_j] = U_{pj}, [U,X] = 0, [U,U] = 0
        for (std::size_t i = 0; i < fr.size(); ++i)
            for (std::size_t j = i + 1; j < fr.size(); ++j)
                REQUIRE(lie_bracket(fr.fields[i], fr.fields[j]) == expected_bracket(fr, i, j));
    }
    CHECK_THROWS_AS(standard_model(1), std::invalid_argument);
    CHECK_THROWS_AS(standard_model(0), std::invalid_argument);
}

TEST_CASE("standard model freeness at the origin and a random point") {
    for (std::size_t n = 2; n <= 5; ++n) {
        ModelFrame fr = standard_model(n);
        Vec<Rational> origin(fr.sys->size(), Rational(0));
        FreenessReport at0 = freeness_at(fr, origin);
        CHECK(at0.h_rank == n);
        CHECK(at0.free());
        FreenessReport atp = freeness_at(fr, random_rational_point(fr.sys->size(), 977 + n));
        CHECK(atp.free());
    }
}

TEST_CASE("frame coordinate expansion") {
    ModelFrame fr = standard_model(3);
    SECTION("round trip through a polynomial combination") {
        Poly x1 = Poly::var(fr.sys, "x1");
        PolyVectorField v = x1 * fr.fields[0] + Poly::constant(Rational(2, 3)) * fr.fields[4];
        Vec<Poly> c = frame_coords(fr, v);
        CHECK(c[0] == x1);
        CHECK(c[4] == Poly::constant(Rational(2, 3)));
        CHECK(c[1].is_zero());
    }
    SECTION("fields outside the frame span are rejected") {
        PolyVectorField w(fr.sys);
        w.comp[0] = Poly::constant(1);
        w.comp[1] = Poly::var(fr.sys, 0);
        CHECK_NOTHROW(frame_coords(fr, w));
        // every polynomial field on the full chart lies in the frame span,
        // so drop one grade -2 field to expose the remainder path
        ModelFrame broken = fr;
        broken.fields.pop_back();
        broken.names.pop_back();
        broken.pivot.pop_back();
        broken.t2_gen.pop_back();
        PolyVectorField u = PolyVectorField::coordinate(fr.sys, fr.sys->at("x23"));
        CHECK_THROWS_AS(frame_coords(broken, u), std::domain_error);
    }
}

TEST_CASE("non-flat example brackets") {
    ModelFrame fr = nonflat_example(4);
    const std::size_t u12 = fr.t2_index(0, 1);
    const std::size_t u34 = fr.t2_index(2, 3);

    SECTION("displayed relations") {
        CHECK(lie_bracket(fr.fields[0], fr.fields[1]) == fr.fields[u12]);
        CHECK(lie_bracket(fr.fields[u12], fr.fields[0]) == fr.fields[u34]);
        CHECK(lie_bracket(fr.fields[2], fr.fields[3]) == fr.fields[u34]);
    }
    SECTION("every other bracket is unchanged") {
        for (std::size_t i = 0; i < fr.size(); ++i)
            for (std::size_t j = i + 1; j < fr.size(); ++j) {
                PolyVectorField expect = expected_bracket(fr, i, j);
                if (i == 0 && j == u12) expect -= fr.fields[u34];
                REQUIRE(lie_bracket(fr.fields[i], fr.fields[j]) == expect);
            }
    }
    SECTION("rejects small rank") {
        CHECK_THROWS_AS(nonflat_example(3), std::invalid_argument);
        CHECK_THROWS_AS(nonflat_example(2), std::invalid_argument);
    }
    SECTION("still free") {
        Vec<Rational> origin(fr.sys->size(), Rational(0));
        CHECK(freeness_at(fr, origin).free());
        CHECK(freeness_at(fr, random_rational_point(fr.sys->size(), 41)).free());
    }
}

TEST_CASE("curvature of the frame connection") {
    SECTION("homogeneous models are flat") {
        for (std::size_t n = 2; n <= 4; ++n) CHECK(flat_curvature(standard_model(n)).is_zero());
    }
    SECTION("non-flat example has exactly one entry") {
        ModelFrame fr = nonflat_example(4);
        CurvatureTable t = flat_curvature(fr);
        const std::size_t u12 = fr.t2_index(0, 1);
        const std::size_t u34 = fr.t2_index(2, 3);
        REQUIRE(t.entries.size() == 1);
        // kappa(U12, X1') = U34
        Vec<Poly> k = t.at(u12, 0);
        CHECK(k[u34] == Poly::constant(1));
        for (std::size_t f = 0; f < fr.size(); ++f)
            if (f != u34) CHECK(k[f].is_zero());
        // antisymmetric partner
        CHECK(t.at(0, u12)[u34] == Poly::constant(-1));
        // kappa(X3, X4) = 0
        CHECK(vec_poly_zero(t.at(2, 3)));
    }
}

TEST_CASE("normality of the frame connections") {
    SECTION("flat models are normal") {
        for (std::size_t n = 2; n <= 4; ++n) {
            ModelFrame fr = standard_model(n);
            NormalityReport rep = normality_check(fr, flat_curvature(fr));
            CHECK(rep.all_zero);
        }
    }
    SECTION("the non-flat example is normal") {
        ModelFrame fr = nonflat_example(4);
        NormalityReport rep = normality_check(fr, flat_curvature(fr));
        REQUIRE(rep.field_names.size() == fr.size());
        CHECK(rep.all_zero);
        for (const auto& v : rep.values) CHECK(vec_poly_zero(v));
    }
    SECTION("a mutated curvature entry is detected") {
        ModelFrame fr = nonflat_example(4);
        CurvatureTable t = flat_curvature(fr);
        Vec<Poly> bad(fr.size());
        bad[fr.t2_index(2, 3)] = Poly::constant(1);
        t.set(0, 1, std::move(bad));  // kappa(X1',X2') := U34
        NormalityReport rep = normality_check(fr, t);
        CHECK_FALSE(rep.all_zero);
        CHECK(!rep.witness.empty());
    }
}

TEST_CASE("twisted product of two rank-2 models") {
    ModelFrame m1 = standard_model(2);
    ModelFrame m2 = standard_model(2);
    std::vector<Poly> xf{-Poly::var(m1.sys, 0), -Poly::var(m1.sys, 1)};
    std::vector<Poly> yf{Poly::var(m2.sys, 0), Poly::var(m2.sys, 1)};
    ModelFrame pr = twisted_product(m1, m2, xf, yf);

    REQUIRE(pr.n == 4);
    REQUIRE(pr.size() == 10);
    REQUIRE(pr.sys->size() == 10);

    SECTION("the three commutator displays hold exactly") {
        // [Xt_j, Yt_k] = T_{jk}
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                CHECK(lie_bracket(pr.fields[j], pr.fields[2 + k]) ==
                      pr.fields[pr.t2_index(j, 2 + k)]);
        // [Xt_1, Xt_2] = s([X1, X2]) and likewise on the second factor
        CHECK(lie_bracket(pr.fields[0], pr.fields[1]) == pr.fields[pr.t2_index(0, 1)]);
        CHECK(lie_bracket(pr.fields[2], pr.fields[3]) == pr.fields[pr.t2_index(2, 3)]);
        // grade -2 fields are central among frame fields
        for (std::size_t t = pr.n; t < pr.size(); ++t)
            for (std::size_t f = 0; f < pr.size(); ++f)
                CHECK(lie_bracket(pr.fields[t], pr.fields[f]).is_zero());
    }
    SECTION("product distribution is free of rank 4") {
        Vec<Rational> origin(pr.sys->size(), Rational(0));
        FreenessReport rep = freeness_at(pr, origin);
        CHECK(rep.h_rank == 4);
        CHECK(rep.free());
        CHECK(freeness_at(pr, random_rational_point(pr.sys->size(), 20260814)).free());
    }
    SECTION("product curvature is the direct sum, here zero") {
        CHECK(flat_curvature(m1).is_zero());
        CHECK(flat_curvature(m2).is_zero());
        CHECK(flat_curvature(pr).is_zero());
    }
    SECTION("product connection is normal") {
        CHECK(normality_check(pr, flat_curvature(pr)).all_zero);
    }
    SECTION("flipping either correction sign kills the mixed commutator") {
        // Yt with the +1/2 correction (the asymmetric variant): add the
        // correction back twice
        Poly t_corr;
        PolyVectorField y_plus = pr.fields[2];
        for (std::size_t j = 0; j < 2; ++j) {
            Poly xj = -Poly::var(pr.sys, j);  // x^j transplanted to the product chart
            y_plus += xj * pr.fields[pr.t2_index(j, 2)];
        }
        PolyVectorField mixed = lie_bracket(pr.fields[0], y_plus);
        CHECK(mixed.is_zero());
        CHECK_FALSE(mixed == pr.fields[pr.t2_index(0, 2)]);
        // Xt with the +1/2 correction
        PolyVectorField x_plus = pr.fields[0];
        for (std::size_t k = 0; k < 2; ++k) {
            Poly yk = Poly::var(pr.sys, pr.sys->at(std::string("y") + std::to_string(k + 1)));
            x_plus += yk * pr.fields[pr.t2_index(0, 2 + k)];
        }
        CHECK(lie_bracket(x_plus, pr.fields[2]).is_zero());
    }
    SECTION("precondition failures report the derivative") {
        std::vector<Poly> bad_x{Poly::var(m1.sys, 0), -Poly::var(m1.sys, 1)};
        CHECK_THROWS_WITH(twisted_product(m1, m2, bad_x, yf),
                          Catch::Matchers::ContainsSubstring("X1.x^1"));
        std::vector<Poly> bad_y{-Poly::var(m2.sys, 0), Poly::var(m2.sys, 1)};
        CHECK_THROWS_WITH(twisted_product(m1, m2, xf, bad_y),
                          Catch::Matchers::ContainsSubstring("y^1"));
    }
}

TEST_CASE("conformal pairing for rank 3") {
    ModelFrame fr = standard_model(3);
    Mat<Rational> gm = conformal_structure(fr, Rational(1));

    SECTION("wedge evaluation against the volume") {
        CHECK(gm(fr.t2_index(0, 1), 2) == Rational(1));   // g(U12, X3)
        CHECK(gm(fr.t2_index(0, 2), 1) == Rational(-1));  // g(U13, X2)
        CHECK(gm(fr.t2_index(1, 2), 0) == Rational(1));   // g(U23, X1)
        CHECK(gm(fr.t2_index(0, 1), 0) == Rational(0));
    }
    SECTION("both diagonal blocks vanish") {
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                CHECK(gm(i, j) == Rational(0));
                CHECK(gm(3 + i, 3 + j) == Rational(0));
            }
    }
    SECTION("nondegenerate with split signature") {
        CHECK(rank(gm) == 6);
        Signature sig = symmetric_signature(gm);
        CHECK(sig.positive == 3);
        CHECK(sig.negative == 3);
        CHECK(sig.zero == 0);
    }
    SECTION("volume rescaling rescales the form") {
        Mat<Rational> gm2 = conformal_structure(fr, Rational(2));
        CHECK(gm2(fr.t2_index(0, 1), 2) == Rational(1, 2));
    }
    SECTION("invariant under splitting shifts") {
        // X3 -> X3 + c U12
        Mat<Rational> sh = shifted_form(gm, {{{2, fr.t2_index(0, 1)}, Rational(5, 3)}});
        for (std::size_t t = 3; t < 6; ++t)
            for (std::size_t m = 0; m < 3; ++m) CHECK(sh(t, m) == gm(t, m));
        // U12 -> U12 + c X1 leaves the mixed pairing unchanged as well
        Mat<Rational> sh2 = shifted_form(gm, {{{fr.t2_index(0, 1), 0}, Rational(-2)}});
        for (std::size_t t = 3; t < 6; ++t)
            for (std::size_t m = 0; m < 3; ++m) CHECK(sh2(t, m) == gm(t, m));
    }
    SECTION("bad inputs are rejected") {
        CHECK_THROWS_AS(conformal_structure(fr, Rational(0)), std::domain_error);
        CHECK_THROWS_AS(conformal_structure(standard_model(2), Rational(1)),
                        std::invalid_argument);
    }
}
