#include <random>

#include <catch2/catch_amalgamated.hpp>

#include <freedist/inclusions.hpp>

using namespace freedist;

namespace {

void require_all(const CheckReport& r) {
    for (const auto& item : r.items) {
        INFO(item.id << (item.witness.empty() ? "" : " [" + item.witness + "]"));
        CHECK(item.pass);
    }
    REQUIRE(r.all_pass());
}

}  // namespace

TEST_CASE("second exterior power of sl4 is so(3,3)") {
    const RepMap rep = lambda2_rep();
    require_all(rep.checks);
    REQUIRE(rep.source_dim == 15);
    REQUIRE(rep.target_dim == 6);
    REQUIRE(rep.image.size() == 15);
    REQUIRE(rep.form_signature == Signature{3, 3, 0});
    REQUIRE(rep.preserved_form == volume_pairing<Rational>());

    SECTION("functoriality on an explicit product") {
        Mat<Rational> a(4, 4), b(4, 4);
        std::mt19937 gen(7);
        std::uniform_int_distribution<int> d(-3, 3);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) {
                a(i, j) = Rational(d(gen));
                b(i, j) = Rational(d(gen));
            }
        REQUIRE(wedge2_rep(commutator(a, b)) ==
                commutator(wedge2_rep(a), wedge2_rep(b)));
    }

    SECTION("perturbed image fails the bracket check") {
        std::vector<Mat<Rational>> bad = rep.image;
        bad[0](0, 0) += Rational(1);
        REQUIRE_FALSE(detail::rep_preserves_brackets(sl4_basis(), bad));
        REQUIRE_FALSE(detail::annihilates_form(bad, rep.preserved_form));
    }
}

TEST_CASE("su(2,2) acts on the real points as so(4,2)") {
    const std::vector<Mat<GaussScalar>> su = su22_basis();
    REQUIRE(su.size() == 15);
    REQUIRE(u22_basis().size() == 16);

    const Mat<GaussScalar> h = hermitian_form22();
    for (const auto& m : su) {
        // m^* h + h m = 0 and trace zero, checked against the solver output.
        Mat<GaussScalar> conj_t(4, 4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) conj_t(i, j) = m(j, i).conj();
        REQUIRE((conj_t * h + h * m).is_zero());
        GaussScalar tr(0);
        for (std::size_t i = 0; i < 4; ++i) tr += m(i, i);
        REQUIRE(tr.is_zero());
    }

    const RealStructure rs = lambda2_real_structure();
    REQUIRE(rs.S * rs.S == Mat<Rational>::identity(6));
    REQUIRE(rs.metric == rs.metric.transpose());
    REQUIRE(symmetric_signature(rs.metric) == Signature{4, 2, 0});
    REQUIRE(rs.fixed.size() == 6);

    const RepMap rep = su22_rep();
    require_all(rep.checks);
    REQUIRE(rep.source_dim == 15);
    REQUIRE(rep.image.size() == 15);
    REQUIRE(rep.form_signature == Signature{4, 2, 0});
    REQUIRE_FALSE(rep.note.empty());

    SECTION("i times the identity does not preserve the real points") {
        Mat<GaussScalar> iid(4, 4);
        for (std::size_t k = 0; k < 4; ++k) iid(k, k) = GaussScalar::i();
        const Mat<GaussScalar> act = wedge2_rep(iid);
        std::vector<Vec<Rational>> cols;
        for (const auto& r : rs.fixed) cols.push_back(realify(r));
        const Mat<Rational> fixed_mat = Mat<Rational>::from_cols(cols);
        Vec<GaussScalar> img(6);
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t k = 0; k < 6; ++k) img[i] += act(i, k) * rs.fixed[0][k];
        REQUIRE_FALSE(solve(fixed_mat, realify(img)).has_value());
    }
}

TEST_CASE("four form on R^8 pinned by its annihilator") {
    const FourFormReport rep = su22_four_form_check();
    require_all(rep.checks);
    REQUIRE(rep.coefficient == Rational(1, 2));
    REQUIRE(rep.annihilator.size() == 21);
    REQUIRE(symmetric_signature(rep.ambient_metric) == Signature{4, 4, 0});
    REQUIRE_FALSE(rep.note.empty());

    SECTION("the block realization of so(4,3) has the same dimension") {
        const std::vector<Mat<Rational>> block = orthogonal_algebra_basis(defining_form(3));
        REQUIRE(block.size() == rep.annihilator.size());
        std::vector<Vec<Rational>> span;
        for (const auto& m : block) span.push_back(vec_of_matrix(m));
        bool closed = true;
        for (std::size_t i = 0; i < block.size() && closed; ++i)
            for (std::size_t j = i + 1; j < block.size(); ++j)
                if (!span_contains(span, vec_of_matrix(commutator(block[i], block[j])))) {
                    closed = false;
                    break;
                }
        REQUIRE(closed);
    }

    SECTION("a wrong coefficient collapses the annihilator to su(2,2)") {
        const AlternatingForm mu = kaehler_two_form();
        const AlternatingForm musq = wedge(mu, mu);
        const AlternatingForm revol = real_volume_form();
        AlternatingForm bad = revol;
        const Rational c(1, 3);
        for (std::size_t t = 0; t < bad.tuples().size(); ++t)
            bad.set(bad.tuples()[t], revol.slot(t) - c * musq.slot(t));
        const auto so44 = orthogonal_algebra_basis(rep.ambient_metric);
        REQUIRE(stabilizer_algebra(bad, so44).generators.size() == 15);
    }
}

TEST_CASE("stabilizer subspaces in matrix spans") {
    const std::vector<Mat<Rational>> gl3 = gl_basis(3);
    Vec<Rational> e0(3);
    e0[0] = Rational(1);
    REQUIRE(stabilizer_of_vector(gl3, e0).size() == 6);
    Mat<Rational> line(3, 1);
    line(0, 0) = Rational(1);
    REQUIRE(stabilizer_of_subspace(gl3, line).size() == 7);
}

TEST_CASE("fefferman transversality of the model inclusions") {
    SECTION("spinorial so(4,3) in so(4,4)") {
        const FeffermanScenario sc = spinorial_fefferman();
        require_all(sc.report.checks);
        REQUIRE(sc.report.ambient_dim == 28);
        REQUIRE(sc.report.phat_dim == 22);
        REQUIRE(sc.report.sub_dim == 21);
        REQUIRE(sc.report.p_dim == 15);
        REQUIRE(sc.report.intersection_dim == 15);
        REQUIRE(sc.report.transverse);
        REQUIRE(sc.report.fiber_dim == 0);
    }

    SECTION("CR so(4,2) in so(4,3)") {
        const FeffermanScenario sc = cr_fefferman();
        require_all(sc.report.checks);
        REQUIRE(sc.report.ambient_dim == 21);
        REQUIRE(sc.report.phat_dim == 15);
        REQUIRE(sc.report.sub_dim == 15);
        REQUIRE(sc.report.p_dim == 10);
        REQUIRE(sc.report.intersection_dim == 9);
        REQUIRE(sc.report.transverse);
        REQUIRE(sc.report.fiber_dim == 1);
    }

    SECTION("Lagrangian so(3,3) in so(4,3)") {
        const FeffermanScenario sc = lagrangian_fefferman();
        require_all(sc.report.checks);
        REQUIRE(sc.report.sub_dim == 15);
        REQUIRE(sc.report.p_dim == 10);
        REQUIRE(sc.report.intersection_dim == 9);
        REQUIRE(sc.report.transverse);
        REQUIRE(sc.report.fiber_dim == 1);
    }

    SECTION("degenerate vector breaks transversality") {
        const FeffermanScenario sc = lagrangian_nontransverse();
        require_all(sc.report.checks);
        REQUIRE(sc.report.sub_dim == 15);
        REQUIRE(sc.report.intersection_dim == 12);
        REQUIRE(sc.report.sum_dim == 18);
        REQUIRE_FALSE(sc.report.transverse);
    }

    SECTION("trivial inclusion sub = ghat") {
        const FeffermanScenario sc = trivial_fefferman();
        require_all(sc.report.checks);
        REQUIRE(sc.report.intersection_dim == sc.report.phat_dim);
        REQUIRE(sc.report.transverse);
        REQUIRE(sc.report.fiber_dim == 0);
    }

    SECTION("dimension identity for random subspace pairs") {
        const std::vector<Mat<Rational>> ghat = orthogonal_algebra_basis(defining_form(3));
        std::mt19937 gen(11);
        std::uniform_int_distribution<int> coef(-2, 2);
        for (int trial = 0; trial < 3; ++trial) {
            auto pick = [&](std::size_t count) {
                std::vector<Mat<Rational>> out;
                for (std::size_t k = 0; k < count; ++k) {
                    Mat<Rational> m(7, 7);
                    for (const auto& g : ghat) m += g * Rational(coef(gen));
                    out.push_back(std::move(m));
                }
                return out;
            };
            const FeffermanReport r =
                fefferman_transversality(pick(5), pick(8), ghat.size());
            REQUIRE(r.sub_dim + r.phat_dim == r.intersection_dim + r.sum_dim);
            REQUIRE(r.checks.all_pass());
        }
    }
}
