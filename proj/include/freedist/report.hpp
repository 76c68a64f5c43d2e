#pragma once

// Verification suites over the library modules.  run_suite assembles a
// deterministic, id-sorted list of CheckResult records for one module (or
// all of them); emit_text / emit_json render a fixed-width table or JSON
// whose bytes depend only on the suite inputs once timings are suppressed.
// Every suite contains at least one mutation detector: a check that passes
// exactly when a deliberately corrupted input is caught, carrying the
// detection evidence as its witness.

#include <freedist/graded_lie.hpp>
#include <freedist/inclusions.hpp>
#include <freedist/kostant.hpp>
#include <freedist/models.hpp>
#include <freedist/octonion.hpp>
#include <freedist/tractor.hpp>

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <ctime>
#include <iomanip>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace freedist {

struct CheckResult {
    std::string id;       // unique within a report, the sort key
    std::string claim;    // the mathematical statement being verified
    std::string status;   // "pass", "fail" or "skipped"
    std::string witness;  // nonempty whenever status is "fail"
    double elapsed_ms = 0.0;

    friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

struct SuiteParams {
    std::size_t n_min = 2;
    std::size_t n_max = 4;
    unsigned seed = 1729;
    bool deep = false;  // unlocks the n=5 homology computation
};

struct SuiteSummary {
    std::size_t pass = 0;
    std::size_t fail = 0;
    std::size_t skipped = 0;

    friend bool operator==(const SuiteSummary&, const SuiteSummary&) = default;
};

struct SuiteReport {
    std::string suite;
    unsigned seed = 0;
    std::string params;
    std::vector<CheckResult> checks;

    SuiteSummary summary() const {
        SuiteSummary s;
        for (const CheckResult& c : checks) {
            if (c.status == "pass") ++s.pass;
            else if (c.status == "fail") ++s.fail;
            else ++s.skipped;
        }
        return s;
    }
    bool all_pass() const { return summary().fail == 0; }

    friend bool operator==(const SuiteReport&, const SuiteReport&) = default;
};

namespace repdetail {

using Checks = std::vector<CheckResult>;

class Timer {
  public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    void reset() { start_ = std::chrono::steady_clock::now(); }
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

inline void push(Checks& out, std::string id, std::string claim, bool pass, std::string witness,
                 double elapsed) {
    CheckResult r;
    r.id = std::move(id);
    r.claim = std::move(claim);
    r.status = pass ? "pass" : "fail";
    if (!pass && witness.empty()) witness = "verification returned false";
    r.witness = std::move(witness);
    r.elapsed_ms = elapsed;
    out.push_back(std::move(r));
}

inline void push_skipped(Checks& out, std::string id, std::string claim, std::string reason) {
    CheckResult r;
    r.id = std::move(id);
    r.claim = std::move(claim);
    r.status = "skipped";
    r.witness = std::move(reason);
    out.push_back(std::move(r));
}

// Fans one module CheckReport out into prefixed records sharing one timing.
inline void push_report(Checks& out, const std::string& prefix, const CheckReport& rep,
                        double elapsed) {
    const double share = rep.items.empty() ? elapsed : elapsed / rep.items.size();
    for (const CheckItem& it : rep.items)
        push(out, prefix + ": " + it.id, it.id, it.pass, it.witness, share);
}

inline Rational rnd_rat(std::mt19937& rng) {
    std::uniform_int_distribution<long> num(-9, 9), den(1, 7);
    return Rational(num(rng), den(rng));
}

inline Vec<Rational> rnd_vec(std::size_t m, std::mt19937& rng) {
    Vec<Rational> v(m);
    for (auto& x : v) x = rnd_rat(rng);
    return v;
}

// ---------------------------------------------------------------- algebra

inline void algebra_suite(Checks& out, const SuiteParams& p) {
    for (std::size_t n = p.n_min; n <= p.n_max; ++n) {
        const std::string pre = "algebra n=" + std::to_string(n) + " ";
        Timer t;
        GradedLieAlgebra g(n);
        const double built = t.ms();

        t.reset();
        auto viol = jacobi_violation(g);
        std::string w;
        if (viol)
            w = "basis triple (" + std::to_string((*viol)[0]) + ", " +
                std::to_string((*viol)[1]) + ", " + std::to_string((*viol)[2]) + ")";
        push(out, pre + "jacobi identity",
             "[[x,y],z] + [[y,z],x] + [[z,x],y] = 0 on every basis triple", !viol, w,
             built + t.ms());

        t.reset();
        push(out, pre + "grade additivity",
             "the bracket of grade-i and grade-j basis elements lands in grade i+j",
             grade_additivity_holds(g), "", t.ms());

        t.reset();
        const std::size_t want_dim = n * (2 * n + 1);
        push(out, pre + "dimension", "dim so(n+1,n) = n(2n+1)", g.dim() == want_dim,
             "dim = " + std::to_string(g.dim()), t.ms());

        t.reset();
        const std::size_t codim = g.dim() - g.parabolic_indices().size();
        push(out, pre + "parabolic codimension", "dim g - dim p = n(n+1)/2",
             codim == n * (n + 1) / 2, "codim = " + std::to_string(codim), t.ms());

        t.reset();
        NilradicalReport nr = nilradical_check(g);
        push(out, pre + "nilradical freeness",
             "the bracket g1 x g1 -> g2 factors through a bijection wedge^2 g1 -> g2",
             nr.wedge_iso && nr.wedge_rank == n * (n - 1) / 2,
             "wedge rank = " + std::to_string(nr.wedge_rank), t.ms());
        push(out, pre + "nilradical structure",
             "g2 is central in the nilradical and g1 + g2 is an ideal of p",
             nr.g2_central && nr.ideal_in_p, "", t.ms());

        t.reset();
        const Mat<Rational> G = defining_form(n);
        bool invariant = true;
        for (std::size_t i = 0; i < g.dim() && invariant; ++i) {
            const Mat<Rational>& m = g.basis_matrix(i);
            if (!(m.transpose() * G + G * m).is_zero()) invariant = false;
        }
        push(out, pre + "defining form",
             "every basis matrix m satisfies m^T G + G m = 0 for the split form G", invariant,
             "", t.ms());
    }

    // corrupted input: a unit bump on one basis matrix must be rejected
    Timer t;
    GradedLieAlgebra g(2);
    Mat<Rational> m = g.basis_matrix(0);
    m(0, 0) += Rational(1);
    const Mat<Rational> G = defining_form(2);
    const bool caught = !g.is_member(m) && !(m.transpose() * G + G * m).is_zero();
    push(out, "algebra mutation detector",
         "a unit perturbation of a basis matrix fails the block membership test and breaks "
         "invariance of the defining form",
         caught, caught ? "perturbed matrix rejected; invariance residual is nonzero" : "",
         t.ms());
}

// ---------------------------------------------------------------- kostant

// chain-level composition of two sparse-column maps; true iff identically zero
inline bool composes_to_zero(const KostantComplex& kc, std::size_t c, bool up) {
    for (std::size_t col = 0; col < kc.chain_dim(c); ++col) {
        std::map<std::size_t, Rational> acc;
        auto outer = up ? kc.diff_column(c, col) : kc.codiff_column(c, col);
        for (const auto& [r, v] : outer) {
            auto inner = up ? kc.diff_column(c + 1, r) : kc.codiff_column(c - 1, r);
            for (const auto& [r2, v2] : inner) acc[r2] += v * v2;
        }
        for (const auto& [i, v] : acc)
            if (!v.is_zero()) return false;
    }
    return true;
}

inline std::string dims_string(const std::map<int, std::size_t>& dims) {
    std::string s = "{";
    for (const auto& [h, d] : dims) {
        if (s.size() > 1) s += ", ";
        s += std::to_string(h) + ": " + std::to_string(d);
    }
    return s + "}";
}

inline void kostant_suite(Checks& out, const SuiteParams& p) {
    for (std::size_t n = p.n_min; n <= p.n_max; ++n) {
        const std::string pre = "kostant n=" + std::to_string(n) + " ";
        if (n >= 5 && !p.deep) {
            push_skipped(out, pre + "homology",
                         "H_2 at n=5 is a long computation and runs only in deep mode",
                         "rerun with --deep");
            continue;
        }

        Timer t;
        GradedLieAlgebra g(n);
        KostantComplex kc(g);
        const double built = t.ms();

        // full degree sweep for small n, a bounded window for the large ones
        const std::size_t cmax = std::min<std::size_t>(kc.q(), n <= 3 ? 4 : (n == 4 ? 3 : 2));
        t.reset();
        bool down_ok = true;
        for (std::size_t c = 2; c <= cmax && down_ok; ++c)
            down_ok = composes_to_zero(kc, c, false);
        push(out, pre + "boundary squares to zero",
             "d . d = 0 exactly on chain degrees 2.." + std::to_string(cmax), down_ok, "",
             built + t.ms());

        t.reset();
        const std::size_t umax = n <= 4 ? 2 : 1;
        bool up_ok = true;
        for (std::size_t c = 0; c <= umax && up_ok; ++c) up_ok = composes_to_zero(kc, c, true);
        push(out, pre + "coboundary squares to zero",
             "d* . d* = 0 exactly on chain degrees 0.." + std::to_string(umax), up_ok, "",
             t.ms());

        if (n <= 3) {
            t.reset();
            const Rational lambda(-2 * (2 * static_cast<long>(n) - 1));
            std::map<std::pair<std::size_t, std::size_t>, Rational> down, up;
            for (std::size_t col = 0; col < kc.chain_dim(2); ++col)
                for (const auto& [r, v] : kc.codiff_column(2, col)) down[{r, col}] = v;
            for (std::size_t col = 0; col < kc.chain_dim(1); ++col)
                for (const auto& [r, v] : kc.diff_column(1, col)) up[{col, r}] = v;
            bool adj = down.size() == up.size();
            for (const auto& [pos, v] : down) {
                if (!adj) break;
                adj = up.count(pos) == 1 && v == lambda * up.at(pos);
            }
            push(out, pre + "adjointness scalar",
                 "the boundary is -2(2n-1) times the Killing-transported coboundary", adj, "",
                 t.ms());
        }

        if (n <= 4) {
            t.reset();
            HomologyReport rep = homology2(kc);
            const std::map<int, std::size_t> want =
                n == 2   ? std::map<int, std::size_t>{{3, 4}}
                : n == 3 ? std::map<int, std::size_t>{{3, 27}}
                         : std::map<int, std::size_t>{{1, 60}};
            push(out, pre + "H2 dimension",
                 "H_2 is concentrated in homogeneity " + std::to_string(n <= 3 ? 3 : 1) +
                     " with dimension " + std::to_string(want.begin()->second),
                 rep.dims_by_homogeneity == want, "dims = " + dims_string(rep.dims_by_homogeneity),
                 t.ms());
            if (n <= 3)
                push(out, pre + "H2 block support", "(g1^g2)(x)g0: present, and no other block",
                     rep.block_support == std::vector<std::array<int, 3>>{{1, 2, 0}}, "", 0.0);
            else
                push(out, pre + "H2 block support", "(g1^g2)(x)g_{-2}: present",
                     rep.has_block(1, 2, -2) &&
                         rep.block_support == std::vector<std::array<int, 3>>{{1, 2, -2}},
                     "", 0.0);
        } else {
            t.reset();
            auto dims = homology2_dims_sparse(kc);
            push(out, pre + "H2 dimension",
                 "H_2 is concentrated in homogeneity 1 with dimension 280",
                 dims == std::map<int, std::size_t>{{1, 280}}, "dims = " + dims_string(dims),
                 t.ms());
        }
    }

    // corrupted input: one sign flip in the boundary matrix must break d.d = 0
    Timer t;
    GradedLieAlgebra g(2);
    KostantComplex kc(g);
    Mat<Rational> d2 = kc.codifferential_matrix(2);
    const Mat<Rational> d3 = kc.codifferential_matrix(3);
    // flip an entry d2(i,j) whose column meets a nonzero row of d3, so the
    // composite picks up -2 d2(i,j) d3(j,k) at (i,k)
    std::size_t fr = 0, fc = 0;
    bool found = false;
    for (std::size_t j = 0; j < d2.cols() && !found; ++j) {
        bool row_live = false;
        for (std::size_t k = 0; k < d3.cols() && !row_live; ++k) row_live = !d3(j, k).is_zero();
        if (!row_live) continue;
        for (std::size_t i = 0; i < d2.rows() && !found; ++i)
            if (!d2(i, j).is_zero()) fr = i, fc = j, found = true;
    }
    d2(fr, fc) = -d2(fr, fc);
    const bool caught = !(d2 * d3).is_zero();
    push(out, "kostant mutation detector",
         "flipping the sign of one boundary coefficient breaks d . d = 0", caught,
         caught ? "sign flip at entry (" + std::to_string(fr) + ", " + std::to_string(fc) +
                      ") makes the composite nonzero"
                : "",
         t.ms());
}

// ----------------------------------------------------------------- models

inline PolyVectorField table_bracket(const ModelFrame& fr, std::size_t i, std::size_t j) {
    Vec<Rational> c = fr.algebraic_bracket(i, j);
    PolyVectorField r(fr.sys);
    for (std::size_t f = 0; f < fr.size(); ++f)
        if (!c[f].is_zero()) r += Poly::constant(c[f]) * fr.fields[f];
    return r;
}

inline void models_suite(Checks& out, const SuiteParams& p) {
    for (std::size_t n = p.n_min; n <= p.n_max; ++n) {
        const std::string pre = "models n=" + std::to_string(n) + " ";
        Timer t;
        ModelFrame fr = standard_model(n);

        bool table_ok = true;
        std::string w;
        for (std::size_t i = 0; i < fr.size() && table_ok; ++i)
            for (std::size_t j = i + 1; j < fr.size() && table_ok; ++j)
                if (!(lie_bracket(fr.fields[i], fr.fields[j]) == table_bracket(fr, i, j))) {
                    table_ok = false;
                    w = "[" + fr.names[i] + ", " + fr.names[j] + "] disagrees with the table";
                }
        push(out, pre + "commutator table",
             "[X_i, X_j] = U_ij, [U, X] = 0 and [U, U] = 0 across the whole frame", table_ok, w,
             t.ms());

        t.reset();
        Vec<Rational> origin(fr.sys->size(), Rational(0));
        FreenessReport at0 = freeness_at(fr, origin);
        FreenessReport atp =
            freeness_at(fr, random_rational_point(fr.sys->size(), p.seed + 31 * n));
        push(out, pre + "freeness",
             "the distribution spanned by the frame is free of rank n at the origin and at a "
             "seeded rational point",
             at0.free() && at0.h_rank == n && atp.free(),
             "h rank = " + std::to_string(at0.h_rank), t.ms());

        t.reset();
        CurvatureTable curv = flat_curvature(fr);
        push(out, pre + "flat curvature", "the flat model connection has identically zero curvature",
             curv.is_zero(), "", t.ms());

        t.reset();
        NormalityReport nrm = normality_check(fr, curv);
        push(out, pre + "normality", "(d* kappa)(X) = 0 for every frame direction X",
             nrm.all_zero, nrm.witness, t.ms());

        if (n == 4) {
            t.reset();
            ModelFrame nf = nonflat_example(4);
            CurvatureTable ct = flat_curvature(nf);
            const std::size_t u12 = nf.t2_index(0, 1), u34 = nf.t2_index(2, 3);
            bool single = ct.entries.size() == 1;
            if (single) {
                Vec<Poly> k = ct.at(u12, 0);
                single = k[u34] == Poly::constant(1);
                for (std::size_t f = 0; f < nf.size() && single; ++f)
                    if (f != u34) single = k[f].is_zero();
            }
            push(out, "models n=4 nonflat curvature entry",
                 "kappa(U12, X1') = U34 and every other curvature entry vanishes", single,
                 "entry count = " + std::to_string(ct.entries.size()), t.ms());

            t.reset();
            NormalityReport nn = normality_check(nf, ct);
            push(out, "models n=4 nonflat normality",
                 "the deformed bracket still satisfies (d* kappa)(X) = 0", nn.all_zero,
                 nn.witness, t.ms());

            t.reset();
            FreenessReport nfree = freeness_at(nf, zero_vec<Rational>(nf.sys->size()));
            push(out, "models n=4 nonflat freeness",
                 "the deformed frame is still free of rank 4", nfree.free() && nfree.h_rank == 4,
                 "", t.ms());
        }
    }

    {
        Timer t;
        ModelFrame m1 = standard_model(2), m2 = standard_model(2);
        std::vector<Poly> xf{-Poly::var(m1.sys, 0), -Poly::var(m1.sys, 1)};
        std::vector<Poly> yf{Poly::var(m2.sys, 0), Poly::var(m2.sys, 1)};
        ModelFrame pr = twisted_product(m1, m2, xf, yf);
        bool table_ok = pr.n == 4 && pr.size() == 10;
        for (std::size_t i = 0; i < pr.size() && table_ok; ++i)
            for (std::size_t j = i + 1; j < pr.size() && table_ok; ++j)
                table_ok = lie_bracket(pr.fields[i], pr.fields[j]) == table_bracket(pr, i, j);
        push(out, "models twisted product structure",
             "the twisted product of two rank-2 frames is a rank-4 frame with the product "
             "bracket table",
             table_ok, "", t.ms());

        t.reset();
        FreenessReport f0 = freeness_at(pr, zero_vec<Rational>(pr.sys->size()));
        push(out, "models twisted product freeness", "the product frame is free of rank 4",
             f0.free() && f0.h_rank == 4, "h rank = " + std::to_string(f0.h_rank), t.ms());

        t.reset();
        CurvatureTable pc = flat_curvature(pr);
        NormalityReport pn = normality_check(pr, pc);
        push(out, "models twisted product curvature",
             "the product connection has the direct-sum curvature, identically zero, and is "
             "normal",
             pc.is_zero() && pn.all_zero, pn.witness, t.ms());
    }

    // corrupted input: a planted curvature entry must fail the normality test
    Timer t;
    ModelFrame nf = nonflat_example(4);
    CurvatureTable ct = flat_curvature(nf);
    Vec<Poly> bad(nf.size());
    bad[nf.t2_index(2, 3)] = Poly::constant(1);
    ct.set(0, 1, std::move(bad));  // kappa(X1', X2') := U34
    NormalityReport rep = normality_check(nf, ct);
    const bool caught = !rep.all_zero && !rep.witness.empty();
    push(out, "models mutation detector",
         "a planted curvature entry kappa(X1', X2') = U34 violates normality and is reported "
         "with a witness",
         caught, rep.witness, t.ms());
}

// ---------------------------------------------------------------- tractor

inline Poly rnd_poly(const CoordPtr& sys, std::mt19937& rng) {
    Poly p = Poly::constant(rnd_rat(rng));
    for (std::size_t i = 0; i < sys->size(); ++i) p += rnd_rat(rng) * Poly::var(sys, i);
    return p;
}

inline TractorSection rnd_section(const ModelFrame& fr, std::mt19937& rng) {
    TractorSection s(fr.n);
    for (std::size_t a = 0; a < fr.n; ++a) {
        s.cov[a] = rnd_poly(fr.sys, rng);
        s.vec[a] = rnd_poly(fr.sys, rng);
    }
    s.scal = rnd_poly(fr.sys, rng);
    return s;
}

inline WeylShift rnd_shift(std::size_t n, std::mt19937& rng) {
    WeylShift u(n);
    for (auto& q : u.ups1) q = Poly::constant(rnd_rat(rng));
    for (auto& q : u.ups2) q = Poly::constant(rnd_rat(rng));
    return u;
}

// generic constant sections spanning a rank r subbundle
inline std::vector<TractorSection> rnd_subbundle(std::size_t n, std::size_t r, unsigned seed) {
    std::mt19937 rng(seed);
    for (;;) {
        std::vector<TractorSection> V;
        std::vector<Vec<Rational>> vecs;
        for (std::size_t i = 0; i < r; ++i) {
            Vec<Rational> c = rnd_vec(n, rng), v = rnd_vec(n, rng);
            Rational t = rnd_rat(rng);
            V.push_back(TractorSection::constant(n, c, t, v));
            vecs.push_back(v);
        }
        if (rank(Mat<Rational>::from_rows(vecs)) == r) return V;
    }
}

inline void tractor_suite(Checks& out, const SuiteParams& p) {
    {
        // fully symbolic n=2: slot names double as independent transcendentals
        Timer t;
        auto sys = CoordSystem::make(
            {"a1", "a2", "at", "ax1", "ax2", "b1", "b2", "bt", "bx1", "bx2", "u1", "u2", "w"});
        auto v = [&](const char* name) { return Poly::var(sys, name); };
        TractorSection s(2), q(2);
        s.cov = {v("a1"), v("a2")};
        s.scal = v("at");
        s.vec = {v("ax1"), v("ax2")};
        q.cov = {v("b1"), v("b2")};
        q.scal = v("bt");
        q.vec = {v("bx1"), v("bx2")};
        WeylShift u(2);
        u.ups1 = {v("u1"), v("u2")};
        u.ups2 = {v("w")};
        TractorSection su = upsilon_action(s, u), qu = upsilon_action(q, u);
        const bool ok = h_metric(su, qu) == h_metric(s, q) && su.vec == s.vec &&
                        upsilon_action(su, u.negated()) == s;
        push(out, "tractor symbolic invariance",
             "h(e^u s, e^u t) = h(s, t) for fully symbolic sections and shift, the top slot is "
             "unchanged, and the inverse shift restores s",
             ok, "", t.ms());
    }

    {
        Timer t;
        auto sys = CoordSystem::make(
            {"a1", "a2", "at", "ax1", "ax2", "u1", "u2", "uw", "w1", "w2", "ww"});
        auto v = [&](const char* name) { return Poly::var(sys, name); };
        TractorSection s(2);
        s.cov = {v("a1"), v("a2")};
        s.scal = v("at");
        s.vec = {v("ax1"), v("ax2")};
        WeylShift u(2), w(2);
        u.ups1 = {v("u1"), v("u2")};
        u.ups2 = {v("uw")};
        w.ups1 = {v("w1"), v("w2")};
        w.ups2 = {v("ww")};
        TractorSection twice = upsilon_action(upsilon_action(s, w), u);
        push(out, "tractor symbolic composition",
             "two Weyl shifts compose through the wedge-corrected law",
             twice == upsilon_action(s, compose_shifts(u, w)), "", t.ms());

        // corrupted input: the naive sum of shifts must disagree
        t.reset();
        WeylShift naive(2);
        naive.ups1 = {u.ups1[0] + w.ups1[0], u.ups1[1] + w.ups1[1]};
        naive.ups2 = {u.ups2[0] + w.ups2[0]};
        const bool caught = !(twice == upsilon_action(s, naive));
        push(out, "tractor mutation detector composition",
             "dropping the wedge correction from the shift composition is detected", caught,
             caught ? "the naive shift sum disagrees with the composed action on a symbolic "
                      "section"
                    : "",
             t.ms());
    }

    for (std::size_t n = 3; n <= 4; ++n) {
        if (n < p.n_min || n > p.n_max) continue;
        Timer t;
        ModelFrame fr = standard_model(n);
        std::mt19937 rng(p.seed + 97 * static_cast<unsigned>(n));
        bool ok = true;
        for (int trial = 0; trial < 3 && ok; ++trial) {
            TractorSection s = rnd_section(fr, rng), q = rnd_section(fr, rng);
            WeylShift u = rnd_shift(n, rng);
            TractorSection su = upsilon_action(s, u), qu = upsilon_action(q, u);
            ok = h_metric(su, qu) == h_metric(s, q) && upsilon_action(su, u.negated()) == s;
        }
        push(out, "tractor n=" + std::to_string(n) + " randomized invariance",
             "h(e^u s, e^u t) = h(s, t) for three seeded random sections and shifts", ok, "",
             t.ms());
    }

    for (std::size_t n = 2; n <= std::min<std::size_t>(4, p.n_max); ++n) {
        if (n < p.n_min) continue;
        Timer t;
        ModelFrame fr = standard_model(n);
        SplittingData d = SplittingData::flat(fr);
        Vec<Rational> origin = zero_vec<Rational>(fr.sys->size());
        bool ok = true;
        std::string w;
        for (std::size_t r = 1; r <= n && ok; ++r)
            for (unsigned s = 0; s < 3 && ok; ++s) {
                auto V = rnd_subbundle(n, r, p.seed + 100 * static_cast<unsigned>(n) +
                                                 10 * static_cast<unsigned>(r) + s);
                NormalizeResult res = normalize_splitting_for_V(V, d, true);
                MuExtraction mu = mu_extraction(res.sections, origin);
                for (std::size_t i = 0; i < r && ok; ++i)
                    for (std::size_t j = 0; j < r && ok; ++j)
                        ok = res.mu(i, j) == res.mu(j, i) && mu.mu(i, j) == mu.gram(i, j);
                for (std::size_t l = 0; l < res.iso_rank && ok; ++l)
                    for (std::size_t j = 0; j < r && ok; ++j)
                        ok = res.mu(l, j).is_zero() && res.mu(j, l).is_zero();
                if (!ok) w = "rank " + std::to_string(r) + ", seed offset " + std::to_string(s);
            }
        push(out, "tractor n=" + std::to_string(n) + " normalization",
             "strong normalization produces a symmetric mu equal to the tractor pairing and "
             "vanishing on the radical, for seeded subbundles of every rank",
             ok, w, t.ms());
    }

    {
        Timer t;
        ModelFrame fr = standard_model(2);
        SplittingData d = SplittingData::flat(fr);
        auto par = flat_parallel_sections(fr);
        std::vector<TractorSection> V = {par[0] + par[3], par[1] + par[4]};
        MaxprefReport rep = verify_maxpref_properties(V, d);
        std::string w;
        for (const MaxprefItem& it : rep.items)
            if (!it.pass && w.empty()) w = it.name + ": " + it.witness;
        push(out, "tractor maxpref flat bundle",
             "a parallel rank-2 subbundle of the flat tractor bundle passes every preferred "
             "splitting property",
             rep.all_pass(), w, t.ms());

        // corrupted input: a non-parallel perturbation must be flagged
        t.reset();
        std::vector<TractorSection> Vbad = {par[0] + par[3], par[1] + par[4]};
        Vbad[1] += Poly::var(fr.sys, 0) * par[0];
        MaxprefReport bad = verify_maxpref_properties(Vbad, d);
        const MaxprefItem* item = bad.find("V parallel");
        const bool caught = item != nullptr && !item->pass && !item->witness.empty();
        push(out, "tractor mutation detector parallelism",
             "a non-parallel perturbation of the subbundle is flagged by the parallelism check",
             caught, caught ? item->witness : "", t.ms());
    }
}

// --------------------------------------------------------------- octonion

inline IsotropicPlane recombine(const IsotropicPlane& P, const Mat<Rational>& M) {
    IsotropicPlane out;
    for (std::size_t i = 0; i < 3; ++i) {
        ZornQ acc;
        for (std::size_t j = 0; j < 3; ++j) acc += P.basis[j].scaled(M(i, j));
        out.basis[i] = acc;
    }
    return out;
}

inline Mat<Rational> rnd_invertible3(std::mt19937& rng) {
    for (;;) {
        Mat<Rational> m(3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) m(i, j) = rnd_rat(rng);
        if (rank(m) == 3) return m;
    }
}

inline void octonion_suite(Checks& out, const SuiteParams& p) {
    {
        Timer t;
        CheckReport rep = zorn_identity_checks();
        push_report(out, "octonion identity", rep, t.ms());
    }
    {
        Timer t;
        CheckReport rep = triple_table_check(octonionic_triple_from(canonical_open_plane()));
        push_report(out, "octonion triple", rep, t.ms());
    }
    {
        Timer t;
        PlaneClassification pc = classify_isotropic_plane(canonical_closed_plane());
        push(out, "octonion classification closed",
             "the canonical closed plane multiplies into a line and classifies Closed",
             pc.orbit == PlaneOrbit::Closed, "", t.ms());
        t.reset();
        PlaneClassification po = classify_isotropic_plane(canonical_open_plane());
        push(out, "octonion classification open",
             "the canonical triple-form-one plane classifies Open", po.orbit == PlaneOrbit::Open,
             "", t.ms());
    }
    {
        Timer t;
        const IsotropicPlane closed = canonical_closed_plane();
        const IsotropicPlane open = canonical_open_plane();
        bool ok = true;
        std::string w;
        for (unsigned i = 0; i < 20 && ok; ++i) {
            std::mt19937 rng(p.seed + i);
            Mat<Rational> M = rnd_invertible3(rng);
            ok = classify_isotropic_plane(recombine(closed, M)).orbit == PlaneOrbit::Closed &&
                 classify_isotropic_plane(recombine(open, M)).orbit == PlaneOrbit::Open;
            if (!ok) w = "verdict flipped at seed offset " + std::to_string(i);
        }
        push(out, "octonion classification invariance",
             "the orbit verdict is unchanged under twenty seeded basis recombinations of each "
             "plane",
             ok, w, t.ms());
    }
    {
        Timer t;
        G2Decomposition dec = g2_graded_decomposition(canonical_open_plane());
        push_report(out, "octonion g2", dec.checks, t.ms());
    }
    {
        Timer t;
        CheckReport rep = sl3_example_check();
        push_report(out, "octonion sl3", rep, t.ms());
    }

    // corrupted input: the sign-flipped w component must break the norm law
    Timer t;
    auto bad_mul = [](const ZornQ& x, const ZornQ& y) {
        ZornQ r = x * y;
        r.w = vec_sub(vec_add(vec_scale(y.a, x.w), vec_scale(x.a, y.w)), cross3(x.v, y.v));
        return r;
    };
    ZornQ x(Rational(1), {Rational(0), Rational(1), Rational(0)}, zero_vec<Rational>(3),
            Rational(2));
    ZornQ y(Rational(1), zero_vec<Rational>(3), {Rational(0), Rational(1), Rational(0)},
            Rational(1));
    const bool caught = octonion_norm(bad_mul(x, y)) == Rational(3) &&
                        octonion_norm(x * y) == Rational(2) &&
                        octonion_norm(x) * octonion_norm(y) == Rational(2);
    push(out, "octonion mutation detector",
         "flipping the cross-product sign in the w component of the product breaks norm "
         "multiplicativity",
         caught, caught ? "N(x y) = 3 under the corrupted product, expected N(x) N(y) = 2" : "",
         t.ms());
}

// ------------------------------------------------------------- inclusions

inline void inclusions_suite(Checks& out, const SuiteParams&) {
    {
        Timer t;
        RepMap rep = lambda2_rep();
        push_report(out, "inclusions lambda2", rep.checks, t.ms());
    }
    FourFormReport ff;
    {
        Timer t;
        RepMap rep = su22_rep();
        push_report(out, "inclusions su22", rep.checks, t.ms());
    }
    {
        Timer t;
        ff = su22_four_form_check();
        push_report(out, "inclusions four form", ff.checks, t.ms());
    }
    const std::vector<std::pair<std::string, FeffermanScenario>> scenarios = {
        {"spinorial", spinorial_fefferman()},
        {"cr", cr_fefferman()},
        {"lagrangian", lagrangian_fefferman()},
        {"nontransverse", lagrangian_nontransverse()},
        {"trivial", trivial_fefferman()},
    };
    for (const auto& [tag, sc] : scenarios) {
        Timer t;
        push_report(out, "inclusions fefferman " + tag, sc.report.checks, t.ms());
    }

    // corrupted input: the wrong coefficient must shrink the annihilator
    Timer t;
    const AlternatingForm mu = kaehler_two_form();
    const AlternatingForm musq = wedge(mu, mu);
    const AlternatingForm revol = real_volume_form();
    AlternatingForm bad = revol;
    const Rational c(1, 3);
    for (std::size_t k = 0; k < bad.tuples().size(); ++k)
        bad.set(bad.tuples()[k], revol.slot(k) - c * musq.slot(k));
    const auto so44 = orthogonal_algebra_basis(ff.ambient_metric);
    const std::size_t dim = stabilizer_algebra(bad, so44).generators.size();
    const bool caught = dim == 15;
    push(out, "inclusions mutation detector",
         "replacing the coefficient 1/2 by 1/3 in the four-form collapses its annihilator from "
         "the 21-dimensional algebra to su(2,2)",
         caught, "annihilator dimension = " + std::to_string(dim), t.ms());
}

}  // namespace repdetail

// --------------------------------------------------------------- running

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"algebra",  "inclusions", "kostant",
                                                   "models",   "octonion",   "tractor"};
    return names;
}

inline SuiteReport run_suite(const std::string& suite, const SuiteParams& params = {}) {
    if (params.n_min < 2 || params.n_max < params.n_min || params.n_max > 5)
        throw std::invalid_argument("run_suite: invalid n range " +
                                    std::to_string(params.n_min) + ".." +
                                    std::to_string(params.n_max) + " (supported window 2..5)");

    SuiteReport rep;
    rep.suite = suite;
    rep.seed = params.seed;
    rep.params = "n=" + std::to_string(params.n_min) + ".." + std::to_string(params.n_max) +
                 (params.deep ? ",deep" : "");

    auto dispatch = [&](const std::string& name) {
        if (name == "algebra") repdetail::algebra_suite(rep.checks, params);
        else if (name == "kostant") repdetail::kostant_suite(rep.checks, params);
        else if (name == "models") repdetail::models_suite(rep.checks, params);
        else if (name == "tractor") repdetail::tractor_suite(rep.checks, params);
        else if (name == "octonion") repdetail::octonion_suite(rep.checks, params);
        else if (name == "inclusions") repdetail::inclusions_suite(rep.checks, params);
        else throw std::invalid_argument("run_suite: unknown suite '" + name + "'");
    };
    if (suite == "all")
        for (const std::string& name : suite_names()) dispatch(name);
    else
        dispatch(suite);

    std::sort(rep.checks.begin(), rep.checks.end(),
              [](const CheckResult& a, const CheckResult& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < rep.checks.size(); ++i)
        if (rep.checks[i].id == rep.checks[i - 1].id)
            throw std::logic_error("run_suite: duplicate check id '" + rep.checks[i].id + "'");
    return rep;
}

// ---------------------------------------------------------------- output

inline std::string iso_timestamp_utc() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// with_timing also controls the header timestamp: without it the bytes are a
// pure function of the suite inputs
inline std::string emit_text(const SuiteReport& rep, bool with_timing = true) {
    if (rep.checks.empty()) throw std::invalid_argument("emit_text: empty report");
    std::ostringstream os;
    os << "suite: " << rep.suite << "\n";
    os << "seed: " << rep.seed << "\n";
    os << "params: " << rep.params << "\n";
    if (with_timing) os << "generated: " << iso_timestamp_utc() << "\n";
    os << "\n";

    std::size_t width = 5;
    for (const CheckResult& c : rep.checks) width = std::max(width, c.id.size());
    os << std::left << std::setw(static_cast<int>(width)) << "check" << "  " << std::setw(7)
       << "status";
    if (with_timing) os << "  elapsed_ms";
    os << "\n";
    os << std::string(width, '-') << "  " << std::string(7, '-');
    if (with_timing) os << "  ----------";
    os << "\n";
    for (const CheckResult& c : rep.checks) {
        os << std::left << std::setw(static_cast<int>(width)) << c.id << "  " << std::setw(7)
           << c.status;
        if (with_timing)
            os << "  " << std::right << std::setw(10) << std::fixed << std::setprecision(1)
               << c.elapsed_ms;
        os << "\n";
        if (!c.witness.empty()) os << "    witness: " << c.witness << "\n";
    }
    const SuiteSummary s = rep.summary();
    os << "\nsummary: pass=" << s.pass << " fail=" << s.fail << " skipped=" << s.skipped << "\n";
    return os.str();
}

inline nlohmann::json report_json(const SuiteReport& rep, bool with_timing = true) {
    if (rep.checks.empty()) throw std::invalid_argument("report_json: empty report");
    nlohmann::json j;
    j["suite"] = rep.suite;
    j["seed"] = rep.seed;
    j["params"] = rep.params;
    if (with_timing) j["generated"] = iso_timestamp_utc();
    j["checks"] = nlohmann::json::array();
    for (const CheckResult& c : rep.checks) {
        nlohmann::json e;
        e["id"] = c.id;
        e["claim"] = c.claim;
        e["status"] = c.status;
        e["witness"] = c.witness;
        if (with_timing) e["elapsed_ms"] = c.elapsed_ms;
        j["checks"].push_back(std::move(e));
    }
    const SuiteSummary s = rep.summary();
    j["summary"] = {{"pass", s.pass}, {"fail", s.fail}, {"skipped", s.skipped}};
    return j;
}

inline std::string emit_json(const SuiteReport& rep, bool with_timing = true) {
    return report_json(rep, with_timing).dump(2) + "\n";
}

inline SuiteReport parse_report(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    SuiteReport rep;
    rep.suite = j.at("suite").get<std::string>();
    rep.seed = j.at("seed").get<unsigned>();
    rep.params = j.at("params").get<std::string>();
    for (const auto& e : j.at("checks")) {
        CheckResult c;
        c.id = e.at("id").get<std::string>();
        c.claim = e.at("claim").get<std::string>();
        c.status = e.at("status").get<std::string>();
        c.witness = e.at("witness").get<std::string>();
        if (e.contains("elapsed_ms")) c.elapsed_ms = e.at("elapsed_ms").get<double>();
        rep.checks.push_back(std::move(c));
    }
    return rep;
}

// timing-free copy for byte-stable comparisons
inline SuiteReport strip_timing(SuiteReport rep) {
    for (CheckResult& c : rep.checks) c.elapsed_ms = 0.0;
    return rep;
}

}  // namespace freedist
