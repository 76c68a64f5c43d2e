#pragma once

#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "freedist/graded_lie.hpp"
#include "freedist/matrix.hpp"
#include "freedist/poly.hpp"

namespace freedist {

// Frame of polynomial vector fields modelling a free n-distribution: the
// first n fields span H, the remaining n(n-1)/2 fields realize the grade -2
// directions. t2_gen[k] gives the 0-based generator pair (a,b), a<b, with
// fields[n+k] = {e_a, e_b} in the algebraic bracket table. pivot[f] is a
// chart variable in which fields[f] has constant coefficient 1 and every
// other field has coefficient 0; this makes frame-coordinate expansion a
// back-substitution instead of a rational-function solve.
struct ModelFrame {
    CoordPtr sys;
    std::size_t n = 0;
    std::vector<PolyVectorField> fields;
    std::vector<std::string> names;
    std::vector<std::size_t> h_part;
    std::vector<std::pair<std::size_t, std::size_t>> t2_gen;
    std::vector<std::size_t> pivot;

    std::size_t size() const { return fields.size(); }
    std::size_t pair_count() const { return t2_gen.size(); }

    std::size_t t2_index(std::size_t a, std::size_t b) const {
        for (std::size_t k = 0; k < t2_gen.size(); ++k)
            if (t2_gen[k] == std::make_pair(a, b)) return n + k;
        throw std::invalid_argument("no grade -2 field for the given generator pair");
    }

    // {e_i, e_j} in frame coordinates: nonzero only for two h fields.
    Vec<Rational> algebraic_bracket(std::size_t i, std::size_t j) const {
        Vec<Rational> r = zero_vec<Rational>(size());
        if (i >= size() || j >= size()) throw std::invalid_argument("frame index out of range");
        if (i < n && j < n && i != j) {
            if (i < j)
                r[t2_index(i, j)] = Rational(1);
            else
                r[t2_index(j, i)] = Rational(-1);
        }
        return r;
    }
};

namespace detail {

inline std::string num_name(char base, std::size_t k1) {
    return std::string(1, base) + std::to_string(k1);
}

inline std::string pair_name(char base, std::size_t k1, std::size_t l1) {
    if (k1 < 10 && l1 < 10)
        return std::string(1, base) + std::to_string(k1) + std::to_string(l1);
    return std::string(1, base) + std::to_string(k1) + "_" + std::to_string(l1);
}

}  // namespace detail

// Homogeneous model: coordinates x_j and x_{kl} (k<l), frame
// X_j = d/dx_j + (1/2) sum_p x_p U_{pj} with U_{kl} = d/dx_{kl}, U_{lk} = -U_{kl}.
inline ModelFrame standard_model(std::size_t n) {
    if (n < 2) throw std::invalid_argument("standard_model requires n >= 2");
    std::vector<std::string> coord_names;
    for (std::size_t j = 1; j <= n; ++j) coord_names.push_back(detail::num_name('x', j));
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l) {
            pairs.emplace_back(k, l);
            coord_names.push_back(detail::pair_name('x', k + 1, l + 1));
        }
    ModelFrame fr;
    fr.sys = CoordSystem::make(coord_names);
    fr.n = n;
    fr.t2_gen = pairs;
    auto pair_coord = [&](std::size_t k, std::size_t l) {
        return fr.sys->at(detail::pair_name('x', k + 1, l + 1));
    };
    for (std::size_t j = 0; j < n; ++j) {
        PolyVectorField x(fr.sys);
        x.comp[j] = Poly::constant(1);
        for (std::size_t p = 0; p < n; ++p) {
            if (p == j) continue;
            const Rational c = p < j ? half() : -half();
            const std::size_t pc = p < j ? pair_coord(p, j) : pair_coord(j, p);
            x.comp[pc] += c * Poly::var(fr.sys, p);
        }
        fr.fields.push_back(std::move(x));
        fr.names.push_back(detail::num_name('X', j + 1));
        fr.h_part.push_back(j);
        fr.pivot.push_back(j);
    }
    for (auto [k, l] : pairs) {
        fr.fields.push_back(PolyVectorField::coordinate(fr.sys, pair_coord(k, l)));
        fr.names.push_back(detail::pair_name('U', k + 1, l + 1));
        fr.pivot.push_back(pair_coord(k, l));
    }
    return fr;
}

// Non-flat deformation for n >= 4: X1' = X1 + x12 U34 + (1/2) x2 U21 and
// X2' = X2 - (1/2) x1 U12, all other fields as in the homogeneous model.
inline ModelFrame nonflat_example(std::size_t n) {
    if (n < 4) throw std::invalid_argument("nonflat_example requires n >= 4");
    ModelFrame fr = standard_model(n);
    const std::size_t c12 = fr.sys->at("x12");
    const std::size_t c34 = fr.sys->at("x34");
    fr.fields[0].comp[c34] += Poly::var(fr.sys, c12);
    fr.fields[0].comp[c12] -= half() * Poly::var(fr.sys, 1);
    fr.fields[1].comp[c12] -= half() * Poly::var(fr.sys, 0);
    fr.names[0] = "X1'";
    fr.names[1] = "X2'";
    return fr;
}

// Expands a vector field in the frame with polynomial coefficients, using
// the pivot structure: h coefficients read off first, the grade -2 fields
// are plain coordinate fields. Throws if a remainder is left.
inline Vec<Poly> frame_coords(const ModelFrame& fr, const PolyVectorField& vf) {
    if (vf.sys != fr.sys) throw std::invalid_argument("frame_coords: chart mismatch");
    Vec<Poly> c(fr.size());
    PolyVectorField rem = vf;
    for (std::size_t f = 0; f < fr.size(); ++f) {
        Poly cf = rem.comp[fr.pivot[f]];
        if (cf.is_zero()) continue;
        c[f] = cf;
        rem -= cf * fr.fields[f];
    }
    if (!rem.is_zero())
        throw std::domain_error("vector field is not a polynomial combination of the frame");
    return c;
}

// Curvature table of the connection annihilating the frame, relative to the
// algebraic bracket: kappa(e_i,e_j) = [e_i,e_j] - {e_i,e_j}, stored in frame
// coordinates for i<j only (the table is antisymmetric).
struct CurvatureTable {
    std::size_t frame_size = 0;
    std::map<std::pair<std::size_t, std::size_t>, Vec<Poly>> entries;

    bool is_zero() const { return entries.empty(); }

    Vec<Poly> at(std::size_t i, std::size_t j) const {
        Vec<Poly> r(frame_size);
        if (i == j) return r;
        const bool flip = i > j;
        auto it = entries.find(flip ? std::make_pair(j, i) : std::make_pair(i, j));
        if (it == entries.end()) return r;
        r = it->second;
        if (flip)
            for (auto& p : r) p = -p;
        return r;
    }

    void set(std::size_t i, std::size_t j, Vec<Poly> v) {
        if (i >= j) throw std::invalid_argument("curvature entries are keyed by i<j");
        bool zero = true;
        for (const auto& p : v) zero = zero && p.is_zero();
        if (zero)
            entries.erase({i, j});
        else
            entries[{i, j}] = std::move(v);
    }
};

inline CurvatureTable flat_curvature(const ModelFrame& fr) {
    CurvatureTable t;
    t.frame_size = fr.size();
    for (std::size_t i = 0; i < fr.size(); ++i) {
        for (std::size_t j = i + 1; j < fr.size(); ++j) {
            Vec<Poly> c = frame_coords(fr, lie_bracket(fr.fields[i], fr.fields[j]));
            Vec<Rational> alg = fr.algebraic_bracket(i, j);
            for (std::size_t f = 0; f < fr.size(); ++f) c[f] -= Poly::constant(alg[f]);
            t.set(i, j, std::move(c));
        }
    }
    return t;
}

// Freeness of the distribution: the h fields are independent at the point
// and their pairwise vector-field brackets span a complement, so the induced
// map from Lambda^2 H to T/H is an isomorphism there.
struct FreenessReport {
    std::size_t h_rank = 0;
    std::size_t total_rank = 0;
    std::size_t chart_dim = 0;
    bool free() const { return total_rank == chart_dim && h_rank + (h_rank * (h_rank - 1)) / 2 == chart_dim; }
};

inline FreenessReport freeness_at(const ModelFrame& fr, const Vec<Rational>& point) {
    std::vector<Vec<Rational>> rows;
    for (std::size_t j : fr.h_part) rows.push_back(fr.fields[j].eval(point));
    FreenessReport rep;
    rep.chart_dim = fr.sys->size();
    rep.h_rank = rank(Mat<Rational>::from_rows(rows));
    for (std::size_t a = 0; a < fr.h_part.size(); ++a)
        for (std::size_t b = a + 1; b < fr.h_part.size(); ++b)
            rows.push_back(lie_bracket(fr.fields[fr.h_part[a]], fr.fields[fr.h_part[b]]).eval(point));
    rep.total_rank = rank(Mat<Rational>::from_rows(rows));
    return rep;
}

// Deterministic rational sample point for Zariski-open rank checks.
inline Vec<Rational> random_rational_point(std::size_t dim, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(1, 7);
    Vec<Rational> p;
    p.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) p.emplace_back(num(rng), den(rng));
    return p;
}

// Lie bracket of g-valued polynomial vectors through the structure constants.
inline Vec<Poly> poly_bracket(const GradedLieAlgebra& g, const Vec<Poly>& a, const Vec<Poly>& b) {
    Vec<Poly> r(g.dim());
    for (std::size_t i = 0; i < g.dim(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < g.dim(); ++j) {
            if (b[j].is_zero()) continue;
            for (const auto& [k, c] : g.structure(i, j)) r[k] += c * (a[i] * b[j]);
        }
    }
    return r;
}

// Manifold-level normality of a curvature table: for every frame field X,
// (d*kappa)(X) = sum_l {Z^l, kappa(Z_l, X)} - (1/2) kappa({Z^l, X}_-, Z_l)
// must vanish, where (Z_l) is the frame viewed inside g_- and (Z^l) is the
// Killing-dual frame in the nilradical.
struct NormalityReport {
    std::vector<std::string> field_names;
    std::vector<Vec<Poly>> values;
    bool all_zero = true;
    std::string witness;
};

inline NormalityReport normality_check(const ModelFrame& fr, const CurvatureTable& curv) {
    if (curv.frame_size != fr.size())
        throw std::invalid_argument("curvature table does not match the frame");
    const GradedLieAlgebra g(fr.n);
    const auto minus = g.minus_indices();
    const auto nil = g.nilradical_indices();
    const std::size_t q = minus.size();
    if (fr.size() != q) throw std::invalid_argument("frame size does not match dim g_-");

    // fmap: frame index -> basis index of g; h fields to grade -1, pairs to grade -2.
    std::vector<std::size_t> fmap(fr.size());
    for (std::size_t j = 0; j < fr.n; ++j) fmap[j] = g.w_index(j);
    for (std::size_t k = 0; k < fr.pair_count(); ++k)
        fmap[fr.n + k] = g.c_index(fr.t2_gen[k].first, fr.t2_gen[k].second);
    std::map<std::size_t, std::size_t> fmap_inv;
    for (std::size_t f = 0; f < fr.size(); ++f) fmap_inv[fmap[f]] = f;

    // Killing-dual frame: Z^l = sum_a Ginv(l,a) u_a with G(a,m) = K(u_a, Z_m).
    const Mat<Rational>& K = g.killing_gram();
    Mat<Rational> G(q, q);
    for (std::size_t a = 0; a < q; ++a)
        for (std::size_t m = 0; m < q; ++m) G(a, m) = K(nil[a], fmap[m]);
    // K(Z^l, Z_m) = sum_a Ginv(l,a) G(a,m) = delta_{lm}
    auto Ginv_opt = inverse(G);
    if (!Ginv_opt) throw std::logic_error("Killing pairing of nilradical against g_- degenerate");
    Mat<Rational> Ginv = *Ginv_opt;

    auto frame_to_g = [&](const Vec<Poly>& fc) {
        Vec<Poly> v(g.dim());
        for (std::size_t f = 0; f < fr.size(); ++f) v[fmap[f]] = fc[f];
        return v;
    };

    NormalityReport rep;
    for (std::size_t m = 0; m < fr.size(); ++m) {
        Vec<Poly> acc(g.dim());
        for (std::size_t l = 0; l < fr.size(); ++l) {
            Vec<Poly> zl(g.dim());
            for (std::size_t a = 0; a < q; ++a)
                if (!Ginv(l, a).is_zero()) zl[nil[a]] = Poly::constant(Ginv(l, a));
            // {Z^l, kappa(Z_l, X_m)}
            Vec<Poly> k1 = frame_to_g(curv.at(l, m));
            Vec<Poly> t1 = poly_bracket(g, zl, k1);
            for (std::size_t i = 0; i < g.dim(); ++i) acc[i] += t1[i];
            // (1/2) kappa({Z^l, X_m}_-, Z_l)
            for (std::size_t a = 0; a < q; ++a) {
                if (Ginv(l, a).is_zero()) continue;
                for (const auto& [k, c] : g.structure(nil[a], fmap[m])) {
                    auto it = fmap_inv.find(k);
                    if (it == fmap_inv.end()) continue;
                    Vec<Poly> kv = curv.at(it->second, l);
                    const Rational w = half() * Ginv(l, a) * c;
                    Vec<Poly> kg = frame_to_g(kv);
                    for (std::size_t i = 0; i < g.dim(); ++i) acc[i] -= w * kg[i];
                }
            }
        }
        bool zero = true;
        for (const auto& p : acc) zero = zero && p.is_zero();
        if (!zero && rep.all_zero) {
            rep.all_zero = false;
            std::ostringstream os;
            os << "(d*kappa)(" << fr.names[m] << ") != 0";
            rep.witness = os.str();
        }
        rep.field_names.push_back(fr.names[m]);
        rep.values.push_back(std::move(acc));
    }
    return rep;
}

namespace detail {

// Transplants a polynomial or field into a larger chart along varmap.
inline Poly remap(const Poly& p, const std::vector<std::size_t>& varmap, const CoordPtr& target) {
    Poly r;
    for (const auto& [e, c] : p.terms()) {
        Poly term = Poly::constant(c);
        for (std::size_t i = 0; i < e.size(); ++i)
            for (unsigned k = 0; k < e[i]; ++k) term *= Poly::var(target, varmap[i]);
        r += term;
    }
    return r;
}

inline PolyVectorField remap_field(const PolyVectorField& f, const std::vector<std::size_t>& varmap,
                                   const CoordPtr& target) {
    PolyVectorField r(target);
    for (std::size_t i = 0; i < f.comp.size(); ++i) {
        if (f.comp[i].is_zero()) continue;
        r.comp[varmap[i]] = remap(f.comp[i], varmap, target);
    }
    return r;
}

}  // namespace detail

// Twisted product of two flat frames. The inputs supply functions x^j on M1
// with X_j . x^k = -delta and U . x^k = 0, and y^k on M2 with Y_j . y^k =
// +delta and U . y^k = 0. On M1 x M2 x fiber (fiber coordinates t_{jk},
// translations T_{jk}) the twisted sections are
//   Xt_j = s(X_j) - (1/2) sum_k y^k T_{jk},
//   Yt_k = s(Y_k) - (1/2) sum_j x^j T_{jk},
// with s the horizontal lift. Both correction coefficients are -1/2: then
// [Xt_j, Yt_k] = -(a+b) T_{jk} = T_{jk}. The asymmetric pair (-1/2, +1/2)
// would give zero; tests keep that variant as a failing witness.
inline ModelFrame twisted_product(const ModelFrame& m1, const ModelFrame& m2,
                                  const std::vector<Poly>& xf, const std::vector<Poly>& yf) {
    const std::size_t n1 = m1.n, n2 = m2.n;
    if (xf.size() != n1 || yf.size() != n2)
        throw std::invalid_argument("twisted_product: need one function per h field");
    auto check_pre = [](const ModelFrame& m, const std::vector<Poly>& fn, const Rational& want,
                        const char* fname) {
        for (std::size_t k = 0; k < fn.size(); ++k) {
            for (std::size_t f = 0; f < m.size(); ++f) {
                Poly d = m.fields[f].apply(fn[k]);
                const bool is_h = f < m.n;
                Poly expect = is_h && f == k ? Poly::constant(want) : Poly();
                if (d != expect) {
                    std::ostringstream os;
                    os << "twisted_product precondition fails: " << m.names[f] << "." << fname
                       << "^" << (k + 1) << " = " << d.str();
                    throw std::invalid_argument(os.str());
                }
            }
        }
    };
    check_pre(m1, xf, Rational(-1), "x");
    check_pre(m2, yf, Rational(1), "y");

    // Product chart: M1 names, M2 names with leading 'x' renamed to 'y',
    // then fiber coordinates t_{jk}.
    std::vector<std::string> coord_names = m1.sys->names;
    for (const auto& nm : m2.sys->names) {
        std::string yn = nm;
        if (!yn.empty() && yn[0] == 'x')
            yn[0] = 'y';
        else
            yn = "y_" + yn;
        coord_names.push_back(yn);
    }
    for (std::size_t j = 1; j <= n1; ++j)
        for (std::size_t k = 1; k <= n2; ++k) coord_names.push_back(detail::pair_name('t', j, k));
    CoordPtr sys = CoordSystem::make(coord_names);

    std::vector<std::size_t> map1(m1.sys->size()), map2(m2.sys->size());
    for (std::size_t i = 0; i < map1.size(); ++i) map1[i] = i;
    for (std::size_t i = 0; i < map2.size(); ++i) map2[i] = m1.sys->size() + i;
    auto fiber_coord = [&](std::size_t j, std::size_t k) {
        return m1.sys->size() + m2.sys->size() + j * n2 + k;
    };

    ModelFrame pr;
    pr.sys = sys;
    pr.n = n1 + n2;
    std::vector<Poly> xr, yr;
    for (const auto& p : xf) xr.push_back(detail::remap(p, map1, sys));
    for (const auto& p : yf) yr.push_back(detail::remap(p, map2, sys));

    for (std::size_t j = 0; j < n1; ++j) {
        PolyVectorField f = detail::remap_field(m1.fields[j], map1, sys);
        for (std::size_t k = 0; k < n2; ++k) f.comp[fiber_coord(j, k)] -= half() * yr[k];
        pr.fields.push_back(std::move(f));
        pr.names.push_back(m1.names[j] + "~");
        pr.h_part.push_back(j);
        pr.pivot.push_back(map1[m1.pivot[j]]);
    }
    for (std::size_t k = 0; k < n2; ++k) {
        PolyVectorField f = detail::remap_field(m2.fields[k], map2, sys);
        for (std::size_t j = 0; j < n1; ++j) f.comp[fiber_coord(j, k)] -= half() * xr[j];
        pr.fields.push_back(std::move(f));
        std::string nm = m2.names[k];
        if (!nm.empty() && nm[0] == 'X') nm[0] = 'Y';
        pr.names.push_back(nm + "~");
        pr.h_part.push_back(n1 + k);
        pr.pivot.push_back(map2[m2.pivot[k]]);
    }
    for (std::size_t t = 0; t < m1.pair_count(); ++t) {
        pr.fields.push_back(detail::remap_field(m1.fields[m1.n + t], map1, sys));
        pr.names.push_back("s(" + m1.names[m1.n + t] + ")");
        pr.t2_gen.push_back(m1.t2_gen[t]);
        pr.pivot.push_back(map1[m1.pivot[m1.n + t]]);
    }
    for (std::size_t t = 0; t < m2.pair_count(); ++t) {
        pr.fields.push_back(detail::remap_field(m2.fields[m2.n + t], map2, sys));
        std::string nm = m2.names[m2.n + t];
        pr.names.push_back("s(" + nm + "')");
        pr.t2_gen.emplace_back(n1 + m2.t2_gen[t].first, n1 + m2.t2_gen[t].second);
        pr.pivot.push_back(map2[m2.pivot[m2.n + t]]);
    }
    for (std::size_t j = 0; j < n1; ++j)
        for (std::size_t k = 0; k < n2; ++k) {
            pr.fields.push_back(PolyVectorField::coordinate(sys, fiber_coord(j, k)));
            pr.names.push_back(detail::pair_name('T', j + 1, k + 1));
            pr.t2_gen.emplace_back(j, n1 + k);
            pr.pivot.push_back(fiber_coord(j, k));
        }

    // Construction self-check: all three commutator displays hold exactly.
    for (std::size_t a = 0; a < pr.n; ++a)
        for (std::size_t b = a + 1; b < pr.n; ++b) {
            PolyVectorField got = lie_bracket(pr.fields[a], pr.fields[b]);
            if (got != pr.fields[pr.t2_index(a, b)])
                throw std::invalid_argument(
                    "twisted_product requires flat inputs: commutator table violated");
        }
    return pr;
}

// Conformal pairing for n=3 through T_{-2} x H -> Lambda^3 H with
// T_{-2} = Lambda^2 H: g(U_{kl}, X_m) sigma^{-1} = eps(k,l,m)/sigma for the
// volume sigma * X1^X2^X3. Both diagonal blocks vanish, so the form is the
// hyperbolic pairing of the two factors.
inline Mat<Rational> conformal_structure(const ModelFrame& fr, const Rational& sigma) {
    if (fr.n != 3) throw std::invalid_argument("conformal_structure requires n = 3");
    if (sigma.is_zero()) throw std::domain_error("conformal_structure: zero volume");
    Mat<Rational> gm(fr.size(), fr.size());
    for (std::size_t t = 0; t < fr.pair_count(); ++t) {
        auto [a, b] = fr.t2_gen[t];
        for (std::size_t m = 0; m < 3; ++m) {
            if (m == a || m == b) continue;
            // sign of the permutation (a,b,m) of (0,1,2) with a<b
            int perm[3] = {static_cast<int>(a), static_cast<int>(b), static_cast<int>(m)};
            int sgn = 1;
            for (int i = 0; i < 3; ++i)
                for (int j = i + 1; j < 3; ++j)
                    if (perm[i] > perm[j]) sgn = -sgn;
            gm(fr.n + t, m) = Rational(sgn) / sigma;
            gm(m, fr.n + t) = gm(fr.n + t, m);
        }
    }
    return gm;
}

// Congruent form after the splitting shift e_f -> e_f + sum shifts[(f,t)] e_t.
inline Mat<Rational> shifted_form(const Mat<Rational>& gm,
                                  const std::map<std::pair<std::size_t, std::size_t>, Rational>& shifts) {
    Mat<Rational> S = Mat<Rational>::identity(gm.rows());
    for (const auto& [key, c] : shifts) S(key.second, key.first) = c;
    return S.transpose() * gm * S;
}

}  // namespace freedist
