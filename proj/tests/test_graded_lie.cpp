#include <catch2/catch_amalgamated.hpp>

#include <freedist/graded_lie.hpp>

#include <random>

using namespace freedist;

namespace {

GradedLieAlgebra::Coord rand_elem(const GradedLieAlgebra& g, std::mt19937& rng) {
    std::uniform_int_distribution<int> d(-3, 3);
    GradedLieAlgebra::Coord x(g.dim());
    for (auto& c : x) c = Rational(d(rng));
    return x;
}

}  // namespace

TEST_CASE("dimensions of the graded algebra and parabolic") {
    CHECK_THROWS_AS(GradedLieAlgebra(0), std::invalid_argument);
    GradedLieAlgebra g2(2), g3(3);
    CHECK(g2.dim() == 10);
    CHECK(g3.dim() == 21);
    CHECK(g3.parabolic_indices().size() == 15);
    for (std::size_t n = 2; n <= 4; ++n) {
        GradedLieAlgebra g(n);
        CHECK(g.dim() == n * (2 * n + 1));
        CHECK(g.indices_of_grade(-2).size() == n * (n - 1) / 2);
        CHECK(g.indices_of_grade(-1).size() == n);
        CHECK(g.indices_of_grade(0).size() == n * n);
        CHECK(g.indices_of_grade(1).size() == n);
        CHECK(g.indices_of_grade(2).size() == n * (n - 1) / 2);
        // Quotient g/p carries the homogeneous model, of dimension n(n+1)/2.
        CHECK(g.dim() - g.parabolic_indices().size() == n * (n + 1) / 2);
    }
}

TEST_CASE("coordinates round-trip through the block matrix form") {
    std::mt19937 rng(42);
    for (std::size_t n = 2; n <= 4; ++n) {
        GradedLieAlgebra g(n);
        for (int t = 0; t < 10; ++t) {
            auto x = rand_elem(g, rng);
            Mat<Rational> m = g.matrix_of(x);
            CHECK(g.is_member(m));
            CHECK(g.coords_of(m) == x);
        }
        // A matrix violating the block shape is rejected.
        Mat<Rational> bad = g.matrix_of(rand_elem(g, rng));
        bad(n, n) = Rational(1);  // center entry must vanish
        CHECK_FALSE(g.is_member(bad));
        CHECK_THROWS_AS(g.coords_of(bad), std::invalid_argument);
        Mat<Rational> bad2 = g.matrix_of(rand_elem(g, rng));
        bad2(0, n + 1) += Rational(1);  // breaks B skewness against B(1,0)
        CHECK_FALSE(g.is_member(bad2));
    }
}

TEST_CASE("bracket is the matrix commutator") {
    std::mt19937 rng(43);
    GradedLieAlgebra g(3);
    for (int t = 0; t < 10; ++t) {
        auto x = rand_elem(g, rng), y = rand_elem(g, rng);
        Mat<Rational> comm = g.matrix_of(x) * g.matrix_of(y) - g.matrix_of(y) * g.matrix_of(x);
        CHECK(g.bracket(x, y) == g.coords_of(comm));
        CHECK(g.bracket(x, x) == Vec<Rational>(g.dim()));
    }
    CHECK_THROWS_AS(g.bracket(Vec<Rational>(5), Vec<Rational>(21)), std::invalid_argument);
}

TEST_CASE("structure constants are antisymmetric") {
    GradedLieAlgebra g(3);
    for (std::size_t i = 0; i < g.dim(); ++i)
        for (std::size_t j = 0; j < g.dim(); ++j) {
            auto e_i = unit_vec<Rational>(g.dim(), i);
            auto e_j = unit_vec<Rational>(g.dim(), j);
            CHECK(g.bracket(e_i, e_j) == vec_neg(g.bracket(e_j, e_i)));
        }
}

TEST_CASE("negative-grade generators bracket onto the expected basis entries") {
    GradedLieAlgebra g(4);
    const std::size_t N = g.dim();
    // Two w-generators produce the matching C-basis element, two v-generators
    // the matching B-basis element.
    for (std::size_t p = 0; p < 4; ++p)
        for (std::size_t j = p + 1; j < 4; ++j) {
            auto br = g.bracket(unit_vec<Rational>(N, g.w_index(p)), unit_vec<Rational>(N, g.w_index(j)));
            CHECK(br == unit_vec<Rational>(N, g.c_index(p, j)));
            auto bv = g.bracket(unit_vec<Rational>(N, g.v_index(p)), unit_vec<Rational>(N, g.v_index(j)));
            CHECK(bv == unit_vec<Rational>(N, g.b_index(p, j)));
        }
}

TEST_CASE("grading element acts as grade times identity") {
    for (std::size_t n = 2; n <= 3; ++n) {
        GradedLieAlgebra g(n);
        const auto& eps = g.grading_element();
        // eps is the A = Id block element.
        Vec<Rational> expect(g.dim());
        for (std::size_t i = 0; i < n; ++i) expect[g.a_index(i, i)] = Rational(1);
        CHECK(eps == expect);
        for (std::size_t i = 0; i < g.dim(); ++i) {
            auto br = g.bracket(eps, unit_vec<Rational>(g.dim(), i));
            CHECK(br == vec_scale(Rational(g.grade_of(i)), unit_vec<Rational>(g.dim(), i)));
        }
    }
}

TEST_CASE("Jacobi identity and grade additivity hold exhaustively") {
    for (std::size_t n = 2; n <= 3; ++n) {
        GradedLieAlgebra g(n);
        CHECK_FALSE(jacobi_violation(g).has_value());
        CHECK(grade_additivity_holds(g));
    }
}

TEST_CASE("nilradical is the free two-step algebra on g_1") {
    for (std::size_t n = 2; n <= 4; ++n) {
        GradedLieAlgebra g(n);
        NilradicalReport r = nilradical_check(g);
        CHECK(r.wedge_iso);
        CHECK(r.wedge_rank == n * (n - 1) / 2);
        CHECK(r.g2_central);
        CHECK(r.ideal_in_p);
        CHECK(r.two_step);
        CHECK(r.ok());
    }
    CHECK(nilradical_check(GradedLieAlgebra(4)).wedge_rank == 6);
}

TEST_CASE("Killing form: symmetry, invariance, perfect graded pairing") {
    GradedLieAlgebra g(3);
    const Mat<Rational>& K = g.killing_gram();
    CHECK(K == K.transpose());

    std::mt19937 rng(44);
    for (int t = 0; t < 8; ++t) {
        auto x = rand_elem(g, rng), y = rand_elem(g, rng), z = rand_elem(g, rng);
        CHECK(g.killing(g.bracket(x, y), z) == g.killing(x, g.bracket(y, z)));
    }

    // K restricted to g_j x g_{-j} is a perfect pairing.
    for (int j = -2; j <= 2; ++j) {
        auto rows = g.indices_of_grade(j);
        auto cols = g.indices_of_grade(-j);
        Mat<Rational> P(rows.size(), cols.size());
        for (std::size_t a = 0; a < rows.size(); ++a)
            for (std::size_t b = 0; b < cols.size(); ++b) P(a, b) = K(rows[a], cols[b]);
        CHECK(rank(P) == rows.size());
    }

    // K(g_j, g_l) = 0 unless j + l = 0.
    for (std::size_t i = 0; i < g.dim(); ++i)
        for (std::size_t j = 0; j < g.dim(); ++j)
            if (g.grade_of(i) + g.grade_of(j) != 0) CHECK(K(i, j) == Rational(0));
}

TEST_CASE("Killing-perp of the parabolic is its nilradical") {
    for (std::size_t n = 2; n <= 3; ++n) {
        GradedLieAlgebra g(n);
        const Mat<Rational>& K = g.killing_gram();
        auto p_idx = g.parabolic_indices();
        Mat<Rational> rows(p_idx.size(), g.dim());
        for (std::size_t a = 0; a < p_idx.size(); ++a)
            for (std::size_t b = 0; b < g.dim(); ++b) rows(a, b) = K(p_idx[a], b);
        auto perp = kernel_basis(rows);
        CHECK(span_equal(perp, basis_span(g, g.nilradical_indices())));
    }
}
