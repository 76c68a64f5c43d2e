#include <catch2/catch_amalgamated.hpp>

#include <freedist/octonion.hpp>

#include <random>

using namespace freedist;

namespace {

Rational rnd_rat(std::mt19937& gen) {
    std::uniform_int_distribution<int> num(-4, 4);
    return Rational(num(gen));
}

Mat<Rational> rnd_invertible3(std::mt19937& gen) {
    for (;;) {
        Mat<Rational> m(3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) m(i, j) = rnd_rat(gen);
        if (rank(m) == 3) return m;
    }
}

/// Unimodular integer matrix: product of unit-triangular factors.
Mat<Rational> rnd_sl3(std::mt19937& gen) {
    Mat<Rational> lo = Mat<Rational>::identity(3), up = Mat<Rational>::identity(3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            if (i > j) lo(i, j) = rnd_rat(gen);
            if (i < j) up(i, j) = rnd_rat(gen);
        }
    return lo * up;
}

IsotropicPlane recombine(const IsotropicPlane& P, const Mat<Rational>& M) {
    IsotropicPlane out;
    for (std::size_t i = 0; i < 3; ++i) {
        ZornQ acc;
        for (std::size_t j = 0; j < 3; ++j) acc += P.basis[j].scaled(M(i, j));
        out.basis[i] = acc;
    }
    return out;
}

IsotropicPlane twist(const Mat<Rational>& A, const IsotropicPlane& P) {
    IsotropicPlane out;
    for (std::size_t i = 0; i < 3; ++i) out.basis[i] = sl3_twist(A, P.basis[i]);
    return out;
}

ZornQ rnd_zorn(std::mt19937& gen) {
    Vec<Rational> c(8);
    for (auto& x : c) x = rnd_rat(gen);
    return zorn_from_coords(c);
}

}  // namespace

TEST_CASE("zorn multiplication is a split composition algebra") {
    CheckReport r = zorn_identity_checks();
    CAPTURE(r.items.size());
    for (const auto& it : r.items) {
        INFO(it.id << " " << it.witness);
        CHECK(it.pass);
    }
    REQUIRE(r.find("norm is multiplicative") != nullptr);
    REQUIRE(r.find("alternator norm contraction is skew in all four slots") != nullptr);

    std::mt19937 gen(7);
    for (int trial = 0; trial < 8; ++trial) {
        ZornQ x = rnd_zorn(gen), y = rnd_zorn(gen);
        CHECK(ZornQ::unit() * x == x);
        CHECK(x * ZornQ::unit() == x);
        CHECK(octonion_norm(x * y) == octonion_norm(x) * octonion_norm(y));
        CHECK(octonion_pair(x, x) == octonion_norm(x));
    }

    SECTION("a wrong-sign w slot breaks multiplicativity") {
        // Same product with the w slot built from the left scalar a instead
        // of the lower-left scalar b.
        auto bad_mul = [](const ZornQ& x, const ZornQ& y) {
            ZornQ p = x * y;
            p.w = vec_sub(vec_add(vec_scale(y.a, x.w), vec_scale(x.a, y.w)), cross3(x.v, y.v));
            return p;
        };
        ZornQ x(Rational(1), {Rational(0), Rational(1), Rational(0)}, zero_vec<Rational>(3), Rational(2));
        ZornQ y(Rational(1), zero_vec<Rational>(3), {Rational(0), Rational(1), Rational(0)}, Rational(1));
        CHECK(octonion_norm(bad_mul(x, y)) == Rational(3));
        CHECK(octonion_norm(x) * octonion_norm(y) == Rational(2));
        CHECK(octonion_norm(x * y) == Rational(2));
    }
}

TEST_CASE("theta and the canonical planes") {
    SECTION("imaginary precondition") {
        ZornQ u = ZornQ::unit();
        ZornQ x = v_element(unit_vec<Rational>(3, 0));
        CHECK_THROWS_AS(theta(u, x, x), std::invalid_argument);
    }

    SECTION("closed plane") {
        IsotropicPlane P = canonical_closed_plane();
        CHECK(theta(P.basis[0], P.basis[1], P.basis[2]).is_zero());
        PlaneClassification c = classify_isotropic_plane(P);
        CHECK(c.orbit == PlaneOrbit::Closed);
        CHECK(c.product_dim == 1);
        REQUIRE(c.kernel_generator.has_value());
        // The product line is spanned by the first basis vector.
        std::vector<Vec<Rational>> line = {P.basis[0].coords(), c.kernel_generator->coords()};
        CHECK(span_dim(line) == 1);
    }

    SECTION("open planes") {
        IsotropicPlane P = canonical_open_plane();
        CHECK(theta(P.basis[0], P.basis[1], P.basis[2]) == Rational(-1, 2));
        CHECK(triple_form(P.basis[0], P.basis[1], P.basis[2]) == Rational(1));
        PlaneClassification c = classify_isotropic_plane(P);
        CHECK(c.orbit == PlaneOrbit::Open);
        CHECK(c.product_dim == 3);
        CHECK_FALSE(c.kernel_generator.has_value());

        // A plane whose basis has plain theta value 1 is likewise open.
        IsotropicPlane Q{{v_element({Rational(2), Rational(0), Rational(0)}),
                          v_element(unit_vec<Rational>(3, 1)), v_element(unit_vec<Rational>(3, 2))}};
        CHECK(theta(Q.basis[0], Q.basis[1], Q.basis[2]) == Rational(1));
        CHECK(classify_isotropic_plane(Q).orbit == PlaneOrbit::Open);
    }

    SECTION("plane validation") {
        IsotropicPlane bad1 = canonical_closed_plane();
        bad1.basis[0].a = Rational(1);  // no longer imaginary
        CHECK_THROWS_AS(classify_isotropic_plane(bad1), std::invalid_argument);

        IsotropicPlane bad2 = canonical_closed_plane();
        bad2.basis[1] = v_element(unit_vec<Rational>(3, 1));  // pairs with basis[2]? keep isotropy broken against basis[0]
        bad2.basis[1].w = unit_vec<Rational>(3, 0);           // now N(b0, b1) != 0
        CHECK_THROWS_AS(classify_isotropic_plane(bad2), std::invalid_argument);

        IsotropicPlane bad3 = canonical_closed_plane();
        bad3.basis[2] = bad3.basis[1];
        CHECK_THROWS_AS(classify_isotropic_plane(bad3), std::invalid_argument);
    }
}

TEST_CASE("classification is invariant under basis change") {
    IsotropicPlane closed = canonical_closed_plane();
    IsotropicPlane open = canonical_open_plane();
    for (unsigned seed = 1; seed <= 20; ++seed) {
        std::mt19937 gen(seed);
        Mat<Rational> M = rnd_invertible3(gen);
        CHECK(classify_isotropic_plane(recombine(closed, M)).orbit == PlaneOrbit::Closed);
        CHECK(classify_isotropic_plane(recombine(open, M)).orbit == PlaneOrbit::Open);
    }

    SECTION("algebra automorphisms move the planes, not the verdicts") {
        for (unsigned seed = 1; seed <= 5; ++seed) {
            std::mt19937 gen(100 + seed);
            Mat<Rational> A = rnd_sl3(gen);
            IsotropicPlane tc = twist(A, closed);
            IsotropicPlane to = twist(A, open);
            CHECK(classify_isotropic_plane(tc).orbit == PlaneOrbit::Closed);
            CHECK(classify_isotropic_plane(to).orbit == PlaneOrbit::Open);
        }
    }

    SECTION("sign flip on one basis vector") {
        IsotropicPlane flipped = open;
        flipped.basis[1] = -flipped.basis[1];
        CHECK(classify_isotropic_plane(flipped).orbit == PlaneOrbit::Open);
    }
}

TEST_CASE("octonionic triple multiplication table") {
    OctonionicTriple t = octonionic_triple_from(canonical_open_plane());
    ZornQ xy = t.x * t.y, yz = t.y * t.z, zx = t.z * t.x;
    ZornQ a = xy * t.z - t.z * xy;
    CHECK(a == ZornQ(Rational(-1), zero_vec<Rational>(3), zero_vec<Rational>(3), Rational(1)));

    CheckReport r = triple_table_check(t);
    for (const auto& it : r.items) {
        INFO(it.id << " " << it.witness);
        CHECK(it.pass);
    }
    CHECK(r.all_pass());
    REQUIRE(r.find("dual triple has volume -1") != nullptr);
    REQUIRE(r.find("a squares to the unit") != nullptr);

    SECTION("wrong-sign relations are visibly false") {
        CHECK_FALSE(xy * yz == t.y);
        CHECK(xy * yz == -t.y);
        CHECK_FALSE(triple_form(yz, zx, xy) == Rational(1));
    }

    SECTION("preconditions") {
        CHECK_THROWS_AS(octonionic_triple_from(canonical_closed_plane()), std::invalid_argument);
        OctonionicTriple bad = t;
        bad.z = bad.z.scaled(Rational(2));
        CHECK_THROWS_AS(triple_table_check(bad), std::invalid_argument);
    }

    SECTION("tables pass on transformed planes") {
        for (unsigned seed = 1; seed <= 5; ++seed) {
            std::mt19937 gen(200 + seed);
            IsotropicPlane P = recombine(canonical_open_plane(), rnd_invertible3(gen));
            CheckReport rep = triple_table_check(octonionic_triple_from(P));
            INFO("seed " << seed);
            CHECK(rep.all_pass());

            IsotropicPlane T = twist(rnd_sl3(gen), canonical_open_plane());
            CHECK(triple_table_check(octonionic_triple_from(T)).all_pass());
        }
    }
}

TEST_CASE("alternating forms and stabilizer algebras") {
    SECTION("value lookup tracks signs") {
        AlternatingForm f(4, 2);
        f.set({0, 1}, Rational(1));
        f.set({2, 3}, Rational(1));
        CHECK(f.value({1, 0}) == Rational(-1));
        CHECK(f.value({0, 0}).is_zero());
        CHECK(f.value({3, 2}) == Rational(-1));

        AlternatingForm sq = wedge(f, f);
        CHECK(sq.degree() == 4);
        CHECK(sq.value({0, 1, 2, 3}) == Rational(2));
    }

    SECTION("volume form stabilizer is sl(3)") {
        AlternatingForm vol(3, 3);
        vol.set({0, 1, 2}, Rational(1));
        StabilizerAlgebra s = stabilizer_algebra(vol, gl_basis(3));
        CHECK(s.generators.size() == 8);
        CHECK(s.bracket_closed);
        for (const auto& m : s.generators) CHECK((m(0, 0) + m(1, 1) + m(2, 2)).is_zero());
    }

    SECTION("symmetric form stabilizer in gl(7) is the orthogonal algebra") {
        Mat<Rational> G = defining_form(3);
        std::vector<Mat<Rational>> so = orthogonal_algebra_basis(G);
        CHECK(so.size() == 21);
        for (const auto& m : so) CHECK(m.transpose() * G + G * m == Mat<Rational>(7, 7));

        StabilizerAlgebra s = stabilizer_algebra(G, gl_basis(7));
        CHECK(s.generators.size() == 21);
        CHECK(s.bracket_closed);
        std::vector<Vec<Rational>> a, b;
        for (const auto& m : so) a.push_back(vec_of_matrix(m));
        for (const auto& m : s.generators) b.push_back(vec_of_matrix(m));
        CHECK(span_equal(a, b));
    }
}

TEST_CASE("g2 graded decomposition in the adapted frame") {
    G2Decomposition d = g2_graded_decomposition(canonical_open_plane());
    for (const auto& it : d.checks.items) {
        INFO(it.id << " " << it.witness);
        CHECK(it.pass);
    }
    CHECK(d.checks.all_pass());
    CHECK(d.stabilizer.size() == 14);
    CHECK(d.adapted_gram == defining_form(3));
    REQUIRE(d.low_identification.has_value());
    REQUIRE(d.high_identification.has_value());
    CHECK(rank(*d.low_identification) == 3);
    CHECK(rank(*d.high_identification) == 3);

    SECTION("another open plane gives the same slot pattern") {
        std::mt19937 gen(42);
        IsotropicPlane P = twist(rnd_sl3(gen), canonical_open_plane());
        G2Decomposition e = g2_graded_decomposition(P);
        INFO([&] {
            std::string all;
            for (const auto& it : e.checks.items)
                if (!it.pass) all += it.id + "; ";
            return all;
        }());
        CHECK(e.checks.all_pass());
        CHECK(e.stabilizer.size() == 14);
    }

    SECTION("closed input rejected") {
        CHECK_THROWS_AS(g2_graded_decomposition(canonical_closed_plane()), std::invalid_argument);
    }
}

TEST_CASE("sl3 homogeneous example") {
    CheckReport r = sl3_example_check();
    for (const auto& it : r.items) {
        INFO(it.id);
        CHECK(it.pass);
    }
    CHECK(r.all_pass());
}
