#pragma once

#include "models.hpp"

#include <algorithm>
#include <cstddef>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Splitting calculus for the standard tractor bundle T = H* + R + H over the
// coordinate models.  A section is stored in the slot order (cov, scal, vec).
// Abstract brackets between H, T_-2, H* and Lambda^2 H* are realized through
// so(n+1,n) under the dictionary e_j <-> W_j, U_{kl} <-> C^(kl),
// e^j <-> -V_j, e^k^e^l <-> B^(kl).  The minus twist on the H* side is forced
// by flatness of the model tractor connection; with it the mixed brackets are
//   {U_{kl}, v}      = v_k e_l - v_l e_k          (T_-2 acting on H*)
//   {Ups2, X}        = sum b_kl (X_k e^l - X_l e^k)   (interior product)
//   {a, b}           = a ^ b                      (H* with H* into Lambda^2)
// and the closed formulas below agree with the algebra bracket (tested).

namespace freedist {

struct TractorSection {
    std::size_t n = 0;
    Vec<Poly> cov;  // H* slot
    Poly scal;      // scale slot
    Vec<Poly> vec;  // H slot

    TractorSection() = default;
    explicit TractorSection(std::size_t n_)
        : n(n_), cov(n_), vec(n_) {}

    static TractorSection constant(std::size_t n, const Vec<Rational>& cov,
                                   const Rational& scal, const Vec<Rational>& vec) {
        if (cov.size() != n || vec.size() != n)
            throw std::invalid_argument("TractorSection::constant: slot size mismatch");
        TractorSection s(n);
        for (std::size_t a = 0; a < n; ++a) {
            s.cov[a] = Poly::constant(cov[a]);
            s.vec[a] = Poly::constant(vec[a]);
        }
        s.scal = Poly::constant(scal);
        return s;
    }

    bool is_zero() const {
        if (!scal.is_zero()) return false;
        for (const Poly& p : cov)
            if (!p.is_zero()) return false;
        for (const Poly& p : vec)
            if (!p.is_zero()) return false;
        return true;
    }

    TractorSection& operator+=(const TractorSection& o) {
        if (n != o.n) throw std::invalid_argument("TractorSection: rank mismatch");
        for (std::size_t a = 0; a < n; ++a) {
            cov[a] += o.cov[a];
            vec[a] += o.vec[a];
        }
        scal += o.scal;
        return *this;
    }
    TractorSection& operator-=(const TractorSection& o) {
        if (n != o.n) throw std::invalid_argument("TractorSection: rank mismatch");
        for (std::size_t a = 0; a < n; ++a) {
            cov[a] -= o.cov[a];
            vec[a] -= o.vec[a];
        }
        scal -= o.scal;
        return *this;
    }
    friend TractorSection operator+(TractorSection a, const TractorSection& b) { return a += b; }
    friend TractorSection operator-(TractorSection a, const TractorSection& b) { return a -= b; }
    friend TractorSection operator*(const Rational& c, TractorSection s) {
        for (std::size_t a = 0; a < s.n; ++a) {
            s.cov[a] *= c;
            s.vec[a] *= c;
        }
        s.scal *= c;
        return s;
    }
    friend TractorSection operator*(const Poly& f, TractorSection s) {
        for (std::size_t a = 0; a < s.n; ++a) {
            s.cov[a] = f * s.cov[a];
            s.vec[a] = f * s.vec[a];
        }
        s.scal = f * s.scal;
        return s;
    }
    friend bool operator==(const TractorSection& a, const TractorSection& b) {
        return a.n == b.n && a.cov == b.cov && a.scal == b.scal && a.vec == b.vec;
    }

    TractorSection truncated(unsigned deg) const {
        TractorSection r(n);
        for (std::size_t a = 0; a < n; ++a) {
            r.cov[a] = cov[a].truncated(deg);
            r.vec[a] = vec[a].truncated(deg);
        }
        r.scal = scal.truncated(deg);
        return r;
    }
};

// Polarization of the displayed quadratic form: the unique symmetric bilinear
// pairing with h(s,s) = s.cov(s.vec) + (s.scal)^2 / 2 ... scaled so that
// h((v,t,X),(w,u,Y)) = (v(Y) + w(X) + t.u) / 2.  Signature is (n+1, n).
inline Poly h_metric(const TractorSection& s, const TractorSection& t) {
    if (s.n != t.n) throw std::invalid_argument("h_metric: rank mismatch");
    Poly acc;
    for (std::size_t a = 0; a < s.n; ++a) acc += s.cov[a] * t.vec[a] + t.cov[a] * s.vec[a];
    acc += s.scal * t.scal;
    return Rational(1, 2) * acc;
}

// Pair enumeration shared with ModelFrame::t2_gen (lexicographic k < l).
inline std::size_t tractor_pair_count(std::size_t n) { return n * (n - 1) / 2; }
inline std::size_t tractor_pair_index(std::size_t n, std::size_t k, std::size_t l) {
    if (k >= l || l >= n) throw std::out_of_range("tractor_pair_index");
    // pairs (0,1),(0,2),...,(0,n-1),(1,2),...
    return k * n - k * (k + 1) / 2 + (l - k - 1);
}
inline std::vector<std::pair<std::size_t, std::size_t>> tractor_pairs(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l) out.emplace_back(k, l);
    return out;
}

// {Ups2, X}: Lambda^2 H* contracted with H, interior product convention.
inline Vec<Poly> lambda2_contract(std::size_t n, const Vec<Poly>& b, const Vec<Poly>& x) {
    if (b.size() != tractor_pair_count(n) || x.size() != n)
        throw std::invalid_argument("lambda2_contract: size mismatch");
    Vec<Poly> out(n);
    std::size_t t = 0;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l, ++t) {
            if (b[t].is_zero()) continue;
            out[l] += b[t] * x[k];
            out[k] -= b[t] * x[l];
        }
    return out;
}

// {Z_-2, v}: T_-2 contracted with H*, landing in H.
inline Vec<Poly> t2_on_cov(std::size_t n, const Vec<Poly>& c, const Vec<Poly>& v) {
    if (c.size() != tractor_pair_count(n) || v.size() != n)
        throw std::invalid_argument("t2_on_cov: size mismatch");
    Vec<Poly> out(n);
    std::size_t t = 0;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l, ++t) {
            if (c[t].is_zero()) continue;
            out[l] += c[t] * v[k];
            out[k] -= c[t] * v[l];
        }
    return out;
}

// {a, b} = a ^ b on H*, landing in Lambda^2 H*.
inline Vec<Poly> wedge_cov(std::size_t n, const Vec<Poly>& a, const Vec<Poly>& b) {
    if (a.size() != n || b.size() != n) throw std::invalid_argument("wedge_cov: size mismatch");
    Vec<Poly> out(tractor_pair_count(n));
    std::size_t t = 0;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l, ++t) out[t] = a[k] * b[l] - a[l] * b[k];
    return out;
}

inline Vec<Poly> to_poly_vec(const Vec<Rational>& v) {
    Vec<Poly> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = Poly::constant(v[i]);
    return out;
}

struct WeylShift {
    std::size_t n = 0;
    Vec<Poly> ups1;  // H* coordinates
    Vec<Poly> ups2;  // Lambda^2 H* coordinates, pair order as tractor_pairs

    WeylShift() = default;
    explicit WeylShift(std::size_t n_) : n(n_), ups1(n_), ups2(tractor_pair_count(n_)) {}

    static WeylShift constant(std::size_t n, const Vec<Rational>& u1, const Vec<Rational>& u2) {
        WeylShift u(n);
        if (u1.size() != n || u2.size() != tractor_pair_count(n))
            throw std::invalid_argument("WeylShift::constant: size mismatch");
        u.ups1 = to_poly_vec(u1);
        u.ups2 = to_poly_vec(u2);
        return u;
    }

    bool is_zero() const {
        for (const Poly& p : ups1)
            if (!p.is_zero()) return false;
        for (const Poly& p : ups2)
            if (!p.is_zero()) return false;
        return true;
    }

    WeylShift negated() const {
        WeylShift u(n);
        for (std::size_t a = 0; a < ups1.size(); ++a) u.ups1[a] = -ups1[a];
        for (std::size_t t = 0; t < ups2.size(); ++t) u.ups2[t] = -ups2[t];
        return u;
    }
};

// Change of splitting.  vec is the underlying-bundle slot and never moves.
inline TractorSection upsilon_action(const TractorSection& s, const WeylShift& u) {
    if (s.n != u.n) throw std::invalid_argument("upsilon_action: rank mismatch");
    TractorSection r(s.n);
    Poly pair;  // Ups1(X)
    for (std::size_t a = 0; a < s.n; ++a) pair += u.ups1[a] * s.vec[a];
    Vec<Poly> l2 = lambda2_contract(s.n, u.ups2, s.vec);
    for (std::size_t a = 0; a < s.n; ++a)
        r.cov[a] = s.cov[a] + s.scal * u.ups1[a] - l2[a] - Rational(1, 2) * pair * u.ups1[a];
    r.scal = s.scal - pair;
    r.vec = s.vec;
    return r;
}

// Acting by `first` then by `second` equals acting by the composite below;
// the wedge correction comes from expanding the quadratic term twice.
inline WeylShift compose_shifts(const WeylShift& second, const WeylShift& first) {
    if (second.n != first.n) throw std::invalid_argument("compose_shifts: rank mismatch");
    WeylShift u(second.n);
    for (std::size_t a = 0; a < u.ups1.size(); ++a) u.ups1[a] = second.ups1[a] + first.ups1[a];
    Vec<Poly> w = wedge_cov(u.n, second.ups1, first.ups1);
    for (std::size_t t = 0; t < u.ups2.size(); ++t)
        u.ups2[t] = second.ups2[t] + first.ups2[t] - Rational(1, 2) * w[t];
    return u;
}

// Rho tensor in block form.  First index is the direction slot, decomposed in
// the current splitting; second index is the value slot.
struct RhoTensor {
    std::size_t n = 0;
    std::vector<Vec<Poly>> p11;  // H  direction -> H* value
    std::vector<Vec<Poly>> p12;  // H  direction -> Lambda^2 H* value
    std::vector<Vec<Poly>> p21;  // T_-2 direction -> H* value
    std::vector<Vec<Poly>> p22;  // T_-2 direction -> Lambda^2 H* value

    static RhoTensor zero(std::size_t n) {
        RhoTensor r;
        r.n = n;
        std::size_t pc = tractor_pair_count(n);
        r.p11.assign(n, Vec<Poly>(n));
        r.p12.assign(n, Vec<Poly>(pc));
        r.p21.assign(pc, Vec<Poly>(n));
        r.p22.assign(pc, Vec<Poly>(pc));
        return r;
    }
};

// Splitting of the tractor bundle over a coordinate model: the frame, the
// grading-compatible connection coefficients Gamma[dir][field] (frame
// coordinates of the derivative of a frame field; all zero for the flat frame
// connection) and the rho tensor of the splitting.
struct SplittingData {
    ModelFrame frame;
    std::vector<std::vector<Vec<Poly>>> gamma;
    RhoTensor rho;

    static SplittingData flat(ModelFrame fr) {
        SplittingData d;
        std::size_t m = fr.size();
        d.gamma.assign(m, std::vector<Vec<Poly>>(m, Vec<Poly>(m)));
        d.rho = RhoTensor::zero(fr.n);
        d.frame = std::move(fr);
        return d;
    }
};

// Covariant tractor derivative in the direction Z = sum zc[f] * frame field f,
// zc in frame coordinates so Z_-1 = zc[0..n) and Z_-2 = zc[n..).  Only the
// grading-diagonal blocks of gamma act here; the off-diagonal parts produced
// by connection_change belong to the change of T_-2 lift, which the operator
// probes account for separately.
inline TractorSection tractor_derivative(const Vec<Poly>& zc, const TractorSection& s,
                                         const SplittingData& d) {
    const ModelFrame& fr = d.frame;
    const std::size_t n = fr.n, pc = fr.pair_count();
    if (s.n != n) throw std::invalid_argument("tractor_derivative: rank mismatch");
    if (zc.size() != fr.size()) throw std::invalid_argument("tractor_derivative: direction size");

    PolyVectorField Z(fr.sys);
    for (std::size_t f = 0; f < fr.size(); ++f)
        if (!zc[f].is_zero()) Z += zc[f] * fr.fields[f];

    // nabla of a frame field e_a, H block only.
    auto gammaH = [&](std::size_t a) {
        Vec<Poly> out(n);
        for (std::size_t f = 0; f < fr.size(); ++f) {
            if (zc[f].is_zero()) continue;
            const Vec<Poly>& g = d.gamma[f][a];
            if (g.empty()) continue;
            for (std::size_t b = 0; b < n; ++b)
                if (!g[b].is_zero()) out[b] += zc[f] * g[b];
        }
        return out;
    };

    Vec<Poly> dcov(n), dvec(n);
    for (std::size_t a = 0; a < n; ++a) {
        dcov[a] = Z.apply(s.cov[a]);
        dvec[a] = Z.apply(s.vec[a]);
    }
    for (std::size_t a = 0; a < n; ++a) {
        Vec<Poly> g = gammaH(a);
        for (std::size_t b = 0; b < n; ++b) {
            if (g[b].is_zero()) continue;
            dcov[a] -= g[b] * s.cov[b];  // dual transport
            dvec[b] += g[b] * s.vec[a];
        }
    }
    Poly dscal = Z.apply(s.scal);

    Vec<Poly> zm1(zc.begin(), zc.begin() + n);
    Vec<Poly> zm2(zc.begin() + n, zc.end());

    Vec<Poly> p1(n), p2(pc);
    for (std::size_t a = 0; a < n; ++a) {
        if (zm1[a].is_zero()) continue;
        for (std::size_t b = 0; b < n; ++b) p1[b] += zm1[a] * d.rho.p11[a][b];
        for (std::size_t t = 0; t < pc; ++t) p2[t] += zm1[a] * d.rho.p12[a][t];
    }
    for (std::size_t t = 0; t < pc; ++t) {
        if (zm2[t].is_zero()) continue;
        for (std::size_t b = 0; b < n; ++b) p1[b] += zm2[t] * d.rho.p21[t][b];
        for (std::size_t u = 0; u < pc; ++u) p2[u] += zm2[t] * d.rho.p22[t][u];
    }

    TractorSection r(n);
    Vec<Poly> l2 = lambda2_contract(n, p2, s.vec);
    for (std::size_t a = 0; a < n; ++a) r.cov[a] = dcov[a] + s.scal * p1[a] - l2[a];
    Poly vz, pv;
    for (std::size_t a = 0; a < n; ++a) {
        vz += s.cov[a] * zm1[a];
        pv += p1[a] * s.vec[a];
    }
    r.scal = dscal - vz - pv;
    Vec<Poly> tv = t2_on_cov(n, zm2, s.cov);
    for (std::size_t a = 0; a < n; ++a) r.vec[a] = dvec[a] + s.scal * zm1[a] + tv[a];
    return r;
}

inline TractorSection tractor_derivative(std::size_t field, const TractorSection& s,
                                         const SplittingData& d) {
    Vec<Poly> zc(d.frame.size());
    zc[field] = Poly::constant(1);
    return tractor_derivative(zc, s, d);
}

namespace trdict {

// Algebra coordinates of an H (+) T_-2 element under the dictionary.
inline Vec<Poly> tangent_to_alg(const GradedLieAlgebra& g, std::size_t n, const Vec<Poly>& fc) {
    Vec<Poly> out(g.dim());
    for (std::size_t j = 0; j < n; ++j) out[g.w_index(j)] = fc[j];
    std::size_t t = n;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l, ++t) out[g.c_index(k, l)] = fc[t];
    return out;
}

// Algebra coordinates of an H* (+) Lambda^2 H* element; H* carries the minus
// twist of the dictionary.
inline Vec<Poly> cotangent_to_alg(const GradedLieAlgebra& g, std::size_t n, const Vec<Poly>& u1,
                                  const Vec<Poly>& u2) {
    Vec<Poly> out(g.dim());
    for (std::size_t j = 0; j < n; ++j) out[g.v_index(j)] = -u1[j];
    std::size_t t = 0;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l, ++t) out[g.b_index(k, l)] = u2[t];
    return out;
}

// Frame coordinates of the g_- part of an algebra element.
inline Vec<Poly> alg_minus_to_frame(const GradedLieAlgebra& g, std::size_t n,
                                    const Vec<Poly>& x) {
    Vec<Poly> out(n + tractor_pair_count(n));
    for (std::size_t j = 0; j < n; ++j) out[j] = x[g.w_index(j)];
    std::size_t t = n;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l, ++t) out[t] = x[g.c_index(k, l)];
    return out;
}

// H* part of an algebra element, twisted back.
inline Vec<Poly> alg_to_cov(const GradedLieAlgebra& g, std::size_t n, const Vec<Poly>& x) {
    Vec<Poly> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = -x[g.v_index(j)];
    return out;
}

}  // namespace trdict

// Connection change under a splitting shift: nabla'_Z e = nabla_Z e -
// {{Z, Ups}, e}_- with the bracket taken in so(n+1,n) through the dictionary.
// This is the lowest-homogeneity change law.  For Z in H it agrees with the
// conjugated tractor operator; for Z in T_-2 the conjugated operator also
// re-splits the horizontal lift and acquires terms quadratic in Ups, which a
// fixed-frame display cannot carry.
inline SplittingData connection_change(const SplittingData& d, const WeylShift& u) {
    const ModelFrame& fr = d.frame;
    const std::size_t n = fr.n, m = fr.size();
    if (u.n != n) throw std::invalid_argument("connection_change: rank mismatch");
    GradedLieAlgebra g(n);
    Vec<Poly> ualg = trdict::cotangent_to_alg(g, n, u.ups1, u.ups2);

    SplittingData out = d;
    for (std::size_t f = 0; f < m; ++f) {
        Vec<Poly> fc(m);
        fc[f] = Poly::constant(1);
        Vec<Poly> zalg = trdict::tangent_to_alg(g, n, fc);
        Vec<Poly> zu = poly_bracket(g, zalg, ualg);
        for (std::size_t e = 0; e < m; ++e) {
            Vec<Poly> ec(m);
            ec[e] = Poly::constant(1);
            Vec<Poly> br = poly_bracket(g, zu, trdict::tangent_to_alg(g, n, ec));
            Vec<Poly> delta = trdict::alg_minus_to_frame(g, n, br);
            if (out.gamma[f][e].empty()) out.gamma[f][e] = Vec<Poly>(m);
            for (std::size_t c = 0; c < m; ++c) out.gamma[f][e][c] -= delta[c];
        }
    }
    return out;
}

// Parallel sections of the flat model.  The chart is exponential coordinates
// of the first kind (the model frame is the left-invariant frame), so the
// parallel section through s0 is exp(-rt(xi(x))) s0 where rt is the nilpotent
// slot-lowering action of g_- on (cov, scal, vec):
//   rt(w): cov -> scal by -v(w), scal -> vec by tau.w
//   rt(C): cov -> vec by {C, v}
// rt is a g_- representation, so the exponential solves the transport
// equation exactly; components are polynomials of degree <= 2.
inline std::vector<TractorSection> flat_parallel_sections(const ModelFrame& fr) {
    const std::size_t n = fr.n, m = 2 * n + 1;
    std::vector<Vec<Poly>> N(m, Vec<Poly>(m));  // N = -rt(xi(x))
    // slot layout inside the column vector: cov 0..n, scal n, vec n+1..2n+1
    for (std::size_t j = 0; j < n; ++j) {
        Poly xj = Poly::var(fr.sys, fr.pivot[j]);
        N[n][j] = xj;             // scal row gains +x_j * cov_j
        N[n + 1 + j][n] = -xj;    // vec_j row gains -x_j * scal
    }
    for (std::size_t t = 0; t < fr.pair_count(); ++t) {
        auto [k, l] = fr.t2_gen[t];
        Poly xkl = Poly::var(fr.sys, fr.pivot[n + t]);
        N[n + 1 + l][k] -= xkl;   // -{xi_C, v}: v_k e_l part
        N[n + 1 + k][l] += xkl;
    }
    auto matvec = [&](const Vec<Poly>& v) {
        Vec<Poly> out(m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (!N[i][j].is_zero() && !v[j].is_zero()) out[i] += N[i][j] * v[j];
        return out;
    };
    std::vector<TractorSection> out;
    for (std::size_t b = 0; b < m; ++b) {
        Vec<Poly> e(m);
        e[b] = Poly::constant(1);
        Vec<Poly> n1 = matvec(e), n2 = matvec(n1);
        TractorSection s(n);
        for (std::size_t i = 0; i < m; ++i) {
            Poly comp = e[i] + n1[i] + Rational(1, 2) * n2[i];
            if (i < n)
                s.cov[i] = comp;
            else if (i == n)
                s.scal = comp;
            else
                s.vec[i - n - 1] = comp;
        }
        out.push_back(std::move(s));
    }
    return out;
}

// Second fundamental data of a subbundle V at a point: mu pairs the cov slot
// of a section against the vec slot of another, gram is the tractor metric.
// V must have no scale component at the point.
struct MuExtraction {
    Mat<Rational> mu;    // mu(X_i)(X_j) in the section frame
    Mat<Rational> gram;  // h(v_i, v_j); equals the symmetrization of mu
    std::vector<Vec<Rational>> cov_rows;
    std::vector<Vec<Rational>> vec_rows;
};

inline MuExtraction mu_extraction(const std::vector<TractorSection>& V,
                                  const Vec<Rational>& point) {
    const std::size_t r = V.size();
    MuExtraction out;
    out.mu = Mat<Rational>(r, r);
    out.gram = Mat<Rational>(r, r);
    for (const TractorSection& s : V)
        if (s.scal.eval(point) != Rational(0))
            throw std::domain_error("mu_extraction: section has a scale component at the point");
    for (const TractorSection& s : V) {
        Vec<Rational> c(s.n), v(s.n);
        for (std::size_t a = 0; a < s.n; ++a) {
            c[a] = s.cov[a].eval(point);
            v[a] = s.vec[a].eval(point);
        }
        out.cov_rows.push_back(std::move(c));
        out.vec_rows.push_back(std::move(v));
    }
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            out.mu(i, j) = dot(out.cov_rows[i], out.vec_rows[j]);
            out.gram(i, j) = (out.mu(i, j) + dot(out.cov_rows[j], out.vec_rows[i])) / Rational(2);
        }
    return out;
}

// Splitting normalization for a generic subbundle V at the base point
// (origin).  Stage 1 removes scale components, stage 2 makes mu symmetric
// through Lambda^2 H* shifts built from a dual frame, stage 3 (strong only)
// kills mu on the isotropic radical.  All shifts are constant covectors
// solved at the base point.  The number of shifts is at most 2 * rank.
struct NormalizeResult {
    std::vector<WeylShift> shifts;          // in application order
    std::vector<TractorSection> sections;   // final V frame
    WeylShift composite;
    Mat<Rational> mu;                       // final pairing at the base point
    std::size_t iso_rank = 0;               // radical dimension of the gram form
    SplittingData data;                     // input data with all shifts applied
};

namespace trdetail {

inline Mat<Rational> vec_matrix_at(const std::vector<TractorSection>& V,
                                   const Vec<Rational>& pt) {
    std::vector<Vec<Rational>> rows;
    for (const TractorSection& s : V) {
        Vec<Rational> v(s.n);
        for (std::size_t a = 0; a < s.n; ++a) v[a] = s.vec[a].eval(pt);
        rows.push_back(std::move(v));
    }
    return Mat<Rational>::from_rows(rows);  // r x n, row i = pi^2(v_i)
}

inline Mat<Rational> pairing_at(const std::vector<TractorSection>& V, const Vec<Rational>& pt) {
    const std::size_t r = V.size();
    Mat<Rational> m(r, r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            Rational acc(0);
            for (std::size_t a = 0; a < V[i].n; ++a)
                acc += V[i].cov[a].eval(pt) * V[j].vec[a].eval(pt);
            m(i, j) = acc;
        }
    return m;
}

// Congruence diagonalization returning S with S G S^t diagonal.  Zero rows
// are left in place; they span the radical.
inline std::pair<Mat<Rational>, Mat<Rational>> congruence_diagonalize(Mat<Rational> a) {
    const std::size_t r = a.rows();
    Mat<Rational> s = Mat<Rational>::identity(r);
    auto add_rc = [&](std::size_t dst, std::size_t src, const Rational& c) {
        for (std::size_t j = 0; j < r; ++j) a(dst, j) += c * a(src, j);
        for (std::size_t i = 0; i < r; ++i) a(i, dst) += c * a(i, src);
        for (std::size_t j = 0; j < r; ++j) s(dst, j) += c * s(src, j);
    };
    auto swap_rc = [&](std::size_t p, std::size_t q) {
        for (std::size_t j = 0; j < r; ++j) std::swap(a(p, j), a(q, j));
        for (std::size_t i = 0; i < r; ++i) std::swap(a(i, p), a(i, q));
        for (std::size_t j = 0; j < r; ++j) std::swap(s(p, j), s(q, j));
    };
    for (std::size_t k = 0; k < r; ++k) {
        if (a(k, k) == Rational(0)) {
            for (std::size_t l = k + 1; l < r; ++l)
                if (a(l, l) != Rational(0)) {
                    swap_rc(k, l);
                    break;
                }
        }
        if (a(k, k) == Rational(0)) {
            for (std::size_t l = k + 1; l < r; ++l)
                if (a(k, l) != Rational(0)) {
                    add_rc(k, l, Rational(1));  // pivot becomes 2 a(k,l)
                    break;
                }
        }
        if (a(k, k) == Rational(0)) continue;
        for (std::size_t l = 0; l < r; ++l)
            if (l != k && a(l, k) != Rational(0)) add_rc(l, k, -a(l, k) / a(k, k));
    }
    return {s, a};
}

inline std::vector<TractorSection> reframe(const std::vector<TractorSection>& V,
                                           const Mat<Rational>& s) {
    std::vector<TractorSection> out;
    for (std::size_t i = 0; i < s.rows(); ++i) {
        TractorSection acc(V[0].n);
        for (std::size_t j = 0; j < V.size(); ++j)
            if (s(i, j) != Rational(0)) acc += s(i, j) * V[j];
        out.push_back(std::move(acc));
    }
    return out;
}

}  // namespace trdetail

inline NormalizeResult normalize_splitting_for_V(const std::vector<TractorSection>& V_in,
                                                 const SplittingData& d, bool strong,
                                                 const Vec<Rational>& base_point) {
    const std::size_t r = V_in.size();
    if (r == 0) throw std::invalid_argument("normalize_splitting_for_V: empty V");
    const std::size_t n = V_in[0].n;

    std::vector<TractorSection> V = V_in;
    Mat<Rational> vm = trdetail::vec_matrix_at(V, base_point);
    if (rank(vm) != r)
        throw std::invalid_argument("normalize_splitting_for_V: V not generic at the base point");

    NormalizeResult res;
    res.composite = WeylShift(n);

    auto apply_shift = [&](const WeylShift& u) {
        for (TractorSection& s : V) s = upsilon_action(s, u);
        res.composite = compose_shifts(u, res.composite);
        res.shifts.push_back(u);
    };

    // Stage 1: reframe so at most one section carries a scale component, then
    // remove it with an H* shift dual to its direction.
    {
        std::vector<Rational> sc(r);
        std::size_t piv = r;
        for (std::size_t i = 0; i < r; ++i) {
            sc[i] = V[i].scal.eval(base_point);
            if (piv == r && sc[i] != Rational(0)) piv = i;
        }
        if (piv < r) {
            V[piv] = (Rational(1) / sc[piv]) * V[piv];
            for (std::size_t i = 0; i < r; ++i)
                if (i != piv && sc[i] != Rational(0)) V[i] -= sc[i] * V[piv];
            vm = trdetail::vec_matrix_at(V, base_point);
            auto alpha = solve(vm, unit_vec<Rational>(r, piv));
            if (!alpha)
                throw std::logic_error("normalize_splitting_for_V: dual covector solve failed");
            apply_shift(WeylShift::constant(n, *alpha, zero_vec<Rational>(tractor_pair_count(n))));
            for (std::size_t i = 0; i < r; ++i)
                if (V[i].scal.eval(base_point) != Rational(0))
                    throw std::logic_error("normalize_splitting_for_V: stage 1 left a scale component");
        }
    }

    // Stage 2: orthogonal frame, then kill the off-diagonal pairings row by
    // row with wedge shifts against the dual frame.
    {
        Mat<Rational> mu = trdetail::pairing_at(V, base_point);
        Mat<Rational> gram(r, r);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) gram(i, j) = (mu(i, j) + mu(j, i)) / Rational(2);
        auto [S, diag] = trdetail::congruence_diagonalize(gram);
        bool sym = true;
        for (std::size_t i = 0; i < r && sym; ++i)
            for (std::size_t j = 0; j < r && sym; ++j) sym = mu(i, j) == mu(j, i);
        if (!sym) {
            V = trdetail::reframe(V, S);
            vm = trdetail::vec_matrix_at(V, base_point);
            std::vector<Vec<Rational>> dual(r);
            for (std::size_t p = 0; p < r; ++p) {
                auto y = solve(vm, unit_vec<Rational>(r, p));
                if (!y) throw std::logic_error("normalize_splitting_for_V: dual frame solve failed");
                dual[p] = *y;
            }
            for (std::size_t t = 0; t + 1 < r; ++t) {
                Vec<Rational> u2(tractor_pair_count(n));
                bool any = false;
                for (std::size_t k = t + 1; k < r; ++k) {
                    Rational c(0);
                    for (std::size_t a = 0; a < n; ++a)
                        c += V[t].cov[a].eval(base_point) * vm(k, a);
                    if (c == Rational(0)) continue;
                    any = true;
                    Vec<Poly> w = wedge_cov(n, to_poly_vec(dual[t]), to_poly_vec(dual[k]));
                    for (std::size_t q = 0; q < u2.size(); ++q) u2[q] += c * w[q].constant_value();
                }
                if (any)
                    apply_shift(WeylShift::constant(n, zero_vec<Rational>(n), u2));
            }
            mu = trdetail::pairing_at(V, base_point);
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < r; ++j)
                    if (mu(i, j) != mu(j, i))
                        throw std::logic_error("normalize_splitting_for_V: stage 2 left mu asymmetric");
        }
    }

    // Stage 3: with mu symmetric, reorder so the gram radical comes first and
    // clear its cov slots with {xi, tau} wedge shifts; tau stays in the
    // annihilator of pi^2(V), so earlier rows and mu on V are untouched.
    std::size_t p = 0;
    {
        Mat<Rational> mu = trdetail::pairing_at(V, base_point);
        std::vector<Vec<Rational>> ker = kernel_basis(mu);
        p = ker.size();
        res.iso_rank = p;
        if (strong && p > 0) {
            Mat<Rational> S(r, r);
            for (std::size_t i = 0; i < p; ++i)
                for (std::size_t j = 0; j < r; ++j) S(i, j) = ker[i][j];
            // extend by unit rows keeping S invertible
            std::size_t next = p;
            for (std::size_t j = 0; j < r && next < r; ++j) {
                S(next, j) = Rational(1);
                if (rank(S) == next + 1)
                    ++next;
                else
                    S(next, j) = Rational(0);
            }
            if (next != r) throw std::logic_error("normalize_splitting_for_V: radical extension failed");
            V = trdetail::reframe(V, S);
            vm = trdetail::vec_matrix_at(V, base_point);
            for (std::size_t l = 0; l < p; ++l) {
                Vec<Rational> tau(n);
                bool any = false;
                for (std::size_t a = 0; a < n; ++a) {
                    tau[a] = V[l].cov[a].eval(base_point);
                    if (tau[a] != Rational(0)) any = true;
                }
                if (!any) continue;
                for (std::size_t j = 0; j < r; ++j)
                    if (dot(tau, vm.row(j)) != Rational(0))
                        throw std::logic_error(
                            "normalize_splitting_for_V: radical cov not in the annihilator of V");
                auto xi = solve(vm, unit_vec<Rational>(r, l));
                if (!xi) throw std::logic_error("normalize_splitting_for_V: stage 3 dual solve failed");
                Vec<Poly> w = wedge_cov(n, to_poly_vec(*xi), to_poly_vec(tau));
                Vec<Rational> u2(w.size());
                for (std::size_t q = 0; q < w.size(); ++q) u2[q] = w[q].constant_value();
                apply_shift(WeylShift::constant(n, zero_vec<Rational>(n), u2));
            }
            for (std::size_t l = 0; l < p; ++l)
                for (std::size_t a = 0; a < n; ++a)
                    if (V[l].cov[a].eval(base_point) != Rational(0))
                        throw std::logic_error("normalize_splitting_for_V: stage 3 left a cov slot");
        }
    }

    res.sections = std::move(V);
    res.mu = trdetail::pairing_at(res.sections, base_point);
    SplittingData dd = d;
    for (const WeylShift& u : res.shifts) dd = connection_change(dd, u);
    res.data = std::move(dd);
    return res;
}

inline NormalizeResult normalize_splitting_for_V(const std::vector<TractorSection>& V,
                                                 const SplittingData& d, bool strong = false) {
    return normalize_splitting_for_V(V, d, strong, zero_vec<Rational>(d.frame.sys->size()));
}

// Tractor curvature against two frame directions, with the Lie bracket of the
// frame fields as the torsion correction.
inline TractorSection tractor_curvature(std::size_t i, std::size_t j, const TractorSection& s,
                                        const SplittingData& d) {
    TractorSection a = tractor_derivative(i, tractor_derivative(j, s, d), d);
    TractorSection b = tractor_derivative(j, tractor_derivative(i, s, d), d);
    Vec<Poly> br = frame_coords(d.frame, lie_bracket(d.frame.fields[i], d.frame.fields[j]));
    return a - b - tractor_derivative(br, s, d);
}

// ---------------------------------------------------------------------------
// Exact jet arithmetic.  The preferred splitting of a parallel subbundle is
// rational-function-valued, so identities are certified modulo a fixed jet
// order with Neumann-series inversion at the base point.

using PolyMat = std::vector<Vec<Poly>>;

inline PolyMat pm_zero(std::size_t r, std::size_t c) { return PolyMat(r, Vec<Poly>(c)); }

inline PolyMat pm_identity(std::size_t m) {
    PolyMat a = pm_zero(m, m);
    for (std::size_t i = 0; i < m; ++i) a[i][i] = Poly::constant(1);
    return a;
}

inline PolyMat pm_mul(const PolyMat& a, const PolyMat& b, unsigned deg) {
    std::size_t r = a.size(), k = b.size(), c = b.empty() ? 0 : b[0].size();
    PolyMat out = pm_zero(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            if (a[i][t].is_zero()) continue;
            for (std::size_t j = 0; j < c; ++j)
                if (!b[t][j].is_zero()) out[i][j] += (a[i][t] * b[t][j]).truncated(deg);
        }
    for (auto& row : out)
        for (Poly& p : row) p = p.truncated(deg);
    return out;
}

inline Vec<Poly> pm_vec(const PolyMat& a, const Vec<Poly>& v, unsigned deg) {
    Vec<Poly> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < v.size(); ++j)
            if (!a[i][j].is_zero() && !v[j].is_zero()) out[i] += (a[i][j] * v[j]).truncated(deg);
        out[i] = out[i].truncated(deg);
    }
    return out;
}

// Inverse of a square jet matrix whose constant term is invertible.
inline PolyMat pm_inverse(const PolyMat& a, const Vec<Rational>& base, unsigned deg) {
    const std::size_t m = a.size();
    Mat<Rational> a0(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) a0(i, j) = a[i][j].eval(base);
    auto inv0 = inverse(a0);
    if (!inv0) throw std::domain_error("pm_inverse: constant term singular");
    PolyMat i0 = pm_zero(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) i0[i][j] = Poly::constant((*inv0)(i, j));
    PolyMat nmat = pm_mul(i0, a, deg);
    for (std::size_t i = 0; i < m; ++i) nmat[i][i] -= Poly::constant(1);
    // (I + N)^{-1} = sum (-N)^k; N vanishes at the base point so the series
    // terminates modulo the jet order.
    PolyMat acc = pm_identity(m), pw = pm_identity(m);
    for (unsigned k = 1; k <= deg; ++k) {
        pw = pm_mul(pw, nmat, deg);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (k % 2)
                    acc[i][j] -= pw[i][j];
                else
                    acc[i][j] += pw[i][j];
    }
    return pm_mul(acc, i0, deg);
}

// ---------------------------------------------------------------------------
// Verification that a parallel subbundle of rank n admits the preferred
// splitting with the expected rho tensor, or (degenerate rank) the subset of
// properties that survive.  The gauge is solved in jets, the transformed
// splitting data is extracted by operator probes
//     s |-> act_u( nabla_Z( act_{-u}(s) ) )
// against the probe sections (0,1,0), (0,0,e_b), (e^a,0,0), and every
// over-determined slot equality doubles as a coherence check.

struct MaxprefItem {
    std::string name;
    bool pass = false;
    std::string witness;
};

struct MaxprefReport {
    unsigned jet_order = 0;
    bool degenerate = false;  // rank below n or singular pairing: subset checks
    std::vector<MaxprefItem> items;
    WeylShift gauge;

    bool all_pass() const {
        for (const MaxprefItem& it : items)
            if (!it.pass) return false;
        return true;
    }
    const MaxprefItem* find(const std::string& name) const {
        for (const MaxprefItem& it : items)
            if (it.name == name) return &it;
        return nullptr;
    }
};

namespace trdetail {

inline bool jet_zero(const Poly& p, unsigned deg) { return p.truncated(deg).is_zero(); }

inline std::vector<std::size_t> pivot_rows(const Mat<Rational>& m, std::size_t want) {
    // greedy choice of `want` rows of m spanning rank `want`
    std::vector<std::size_t> picked;
    std::vector<Vec<Rational>> rows;
    for (std::size_t i = 0; i < m.rows() && picked.size() < want; ++i) {
        rows.push_back(m.row(i));
        if (rank(Mat<Rational>::from_rows(rows)) == rows.size())
            picked.push_back(i);
        else
            rows.pop_back();
    }
    if (picked.size() != want) throw std::invalid_argument("pivot_rows: rank deficiency");
    return picked;
}

}  // namespace trdetail

inline MaxprefReport verify_maxpref_properties(const std::vector<TractorSection>& V_in,
                                               const SplittingData& d, unsigned jet_order = 4) {
    const ModelFrame& fr = d.frame;
    const std::size_t n = fr.n, pc = fr.pair_count(), m = fr.size(), r = V_in.size();
    if (jet_order < 2) throw std::invalid_argument("verify_maxpref_properties: jet order below 2");
    if (r == 0) throw std::invalid_argument("verify_maxpref_properties: empty V");
    const unsigned D = jet_order, D1 = D - 1, D2 = D - 2;
    const Vec<Rational> origin = zero_vec<Rational>(fr.sys->size());

    MaxprefReport rep;
    rep.jet_order = D;
    auto item = [&](const std::string& name, bool pass, std::string witness = "") {
        rep.items.push_back({name, pass, std::move(witness)});
    };

    std::vector<TractorSection> V;
    for (const TractorSection& s : V_in) V.push_back(s.truncated(D));

    // parallel-combination check: sections must agree with the constant
    // combination of the parallel frame fixed by their base-point values
    {
        std::vector<TractorSection> par = flat_parallel_sections(fr);
        bool ok = true;
        std::string w;
        for (std::size_t i = 0; i < r && ok; ++i) {
            TractorSection rec(n);
            for (std::size_t b = 0; b < 2 * n + 1; ++b) {
                Rational c = b < n          ? V[i].cov[b].eval(origin)
                             : b == n       ? V[i].scal.eval(origin)
                                            : V[i].vec[b - n - 1].eval(origin);
                if (c != Rational(0)) rec += c * par[b];
            }
            if (!(rec.truncated(D) - V[i]).is_zero()) {
                ok = false;
                w = "section " + std::to_string(i) + " is not a parallel combination";
            }
        }
        item("V parallel", ok, w);
    }

    Mat<Rational> vm0 = trdetail::vec_matrix_at(V, origin);  // r x n
    if (rank(vm0) != r)
        throw std::invalid_argument("verify_maxpref_properties: V not generic at the base point");
    std::vector<std::size_t> pivots = trdetail::pivot_rows(vm0.transpose(), r);  // coord indices

    std::vector<WeylShift> shifts;
    auto apply = [&](const WeylShift& u) {
        for (TractorSection& s : V) s = upsilon_action(s, u).truncated(D);
        shifts.push_back(u);
    };

    // gauge stage A: kill the scale slots with an H* jet supported on pivot
    // coordinates
    {
        PolyMat A = pm_zero(r, r);
        Vec<Poly> rhs(r);
        for (std::size_t j = 0; j < r; ++j) {
            for (std::size_t i = 0; i < r; ++i) A[j][i] = V[j].vec[pivots[i]];
            rhs[j] = V[j].scal;
        }
        Vec<Poly> sol = pm_vec(pm_inverse(A, origin, D), rhs, D);
        WeylShift u(n);
        for (std::size_t i = 0; i < r; ++i) u.ups1[pivots[i]] = sol[i];
        if (!u.is_zero()) apply(u);
        bool ok = true;
        for (const TractorSection& s : V) ok = ok && trdetail::jet_zero(s.scal, D);
        item("scale slots vanish", ok);
    }

    // gauge stage B: symmetrize the pairing with a Lambda^2 H* jet
    auto pairing_jets = [&]() {
        PolyMat M = pm_zero(r, r);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) {
                for (std::size_t a = 0; a < n; ++a)
                    M[i][j] += (V[i].cov[a] * V[j].vec[a]).truncated(D);
                M[i][j] = M[i][j].truncated(D);
            }
        return M;
    };
    {
        PolyMat M = pairing_jets();
        const std::size_t rp = r * (r - 1) / 2;
        if (rp > 0) {
            // wedge coordinates of pi^2 v_i ^ pi^2 v_j at the base point pick
            // the solvable pair subset
            Mat<Rational> w0(rp, pc);
            {
                std::size_t row = 0;
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t j = i + 1; j < r; ++j, ++row) {
                        std::size_t t = 0;
                        for (std::size_t k = 0; k < n; ++k)
                            for (std::size_t l = k + 1; l < n; ++l, ++t)
                                w0(row, t) = vm0(i, k) * vm0(j, l) - vm0(i, l) * vm0(j, k);
                    }
            }
            std::vector<std::size_t> ppiv = trdetail::pivot_rows(w0.transpose(), rp);
            PolyMat A = pm_zero(rp, rp);
            Vec<Poly> rhs(rp);
            std::size_t row = 0;
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = i + 1; j < r; ++j, ++row) {
                    for (std::size_t q = 0; q < rp; ++q) {
                        auto [k, l] = tractor_pairs(n)[ppiv[q]];
                        A[row][q] = (V[i].vec[k] * V[j].vec[l] - V[i].vec[l] * V[j].vec[k])
                                        .truncated(D);
                    }
                    rhs[row] = (Rational(1, 2) * (M[i][j] - M[j][i])).truncated(D);
                }
            Vec<Poly> sol = pm_vec(pm_inverse(A, origin, D), rhs, D);
            WeylShift u(n);
            for (std::size_t q = 0; q < rp; ++q) u.ups2[ppiv[q]] = sol[q];
            if (!u.is_zero()) apply(u);
        }
        M = pairing_jets();
        bool ok = true;
        for (std::size_t i = 0; i < r && ok; ++i)
            for (std::size_t j = i + 1; j < r && ok; ++j)
                ok = trdetail::jet_zero(M[i][j] - M[j][i], D);
        item("pairing symmetric", ok);
    }

    // degeneracy: radical of the pairing at the base point
    Mat<Rational> mu0 = trdetail::pairing_at(V, origin);
    std::vector<Vec<Rational>> radical = kernel_basis(mu0);
    rep.degenerate = (r < n) || !radical.empty();

    // gauge stage C: radical-first reframe, then clear radical cov slots with
    // {xi, tau} jets (strong normalization; canonical zero extension of mu)
    if (!radical.empty()) {
        const std::size_t p = radical.size();
        Mat<Rational> S(r, r);
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < r; ++j) S(i, j) = radical[i][j];
        std::size_t next = p;
        for (std::size_t j = 0; j < r && next < r; ++j) {
            S(next, j) = Rational(1);
            if (rank(S) == next + 1)
                ++next;
            else
                S(next, j) = Rational(0);
        }
        V = trdetail::reframe(V, S);
        vm0 = trdetail::vec_matrix_at(V, origin);
        pivots = trdetail::pivot_rows(vm0.transpose(), r);
        bool ann_ok = true;
        for (std::size_t l = 0; l < p; ++l) {
            // tau must annihilate pi^2(V): certified here, used by the shift
            for (std::size_t j = 0; j < r; ++j) {
                Poly t;
                for (std::size_t a = 0; a < n; ++a)
                    t += (V[l].cov[a] * V[j].vec[a]).truncated(D);
                ann_ok = ann_ok && trdetail::jet_zero(t, D);
            }
            PolyMat A = pm_zero(r, r);
            for (std::size_t j = 0; j < r; ++j)
                for (std::size_t i = 0; i < r; ++i) A[j][i] = V[j].vec[pivots[i]];
            Vec<Poly> rhs(r);
            rhs[l] = Poly::constant(1);
            Vec<Poly> xiP = pm_vec(pm_inverse(A, origin, D), rhs, D);
            Vec<Poly> xi(n);
            for (std::size_t i = 0; i < r; ++i) xi[pivots[i]] = xiP[i];
            WeylShift u(n);
            u.ups2 = wedge_cov(n, xi, V[l].cov);
            for (Poly& q : u.ups2) q = q.truncated(D);
            if (!u.is_zero()) apply(u);
        }
        bool cleared = true;
        for (std::size_t l = 0; l < p; ++l)
            for (std::size_t a = 0; a < n; ++a)
                cleared = cleared && trdetail::jet_zero(V[l].cov[a], D);
        item("radical cov slots vanish", ann_ok && cleared,
             ann_ok ? "" : "radical cov not in the annihilator of V");
    }

    WeylShift gauge(n);
    for (const WeylShift& u : shifts) gauge = compose_shifts(u, gauge);
    rep.gauge = gauge;
    WeylShift ginv = gauge.negated();

    // operator probes in the gauge splitting
    std::vector<Vec<Poly>> P1(m, Vec<Poly>(n)), P2(m, Vec<Poly>(pc));
    std::vector<Vec<Poly>> Zm1(m, Vec<Poly>(n));
    std::vector<std::vector<Vec<Poly>>> GammaH(m, std::vector<Vec<Poly>>(n, Vec<Poly>(n)));
    bool coherent = true;
    std::string coh_witness;
    auto hat_derivative = [&](std::size_t f, const TractorSection& s) {
        return upsilon_action(tractor_derivative(f, upsilon_action(s, ginv).truncated(D), d),
                              gauge)
            .truncated(D1);
    };
    auto fail_coh = [&](const std::string& w) {
        if (coherent) coh_witness = w;
        coherent = false;
    };
    std::vector<std::pair<std::size_t, std::size_t>> prs = tractor_pairs(n);
    for (std::size_t f = 0; f < m; ++f) {
        TractorSection scale_probe(n);
        scale_probe.scal = Poly::constant(1);
        TractorSection t1 = hat_derivative(f, scale_probe);
        P1[f] = t1.cov;
        Zm1[f] = t1.vec;
        if (!trdetail::jet_zero(t1.scal, D1)) fail_coh("scale probe leaks into the scale slot");
        if (f < n) {
            Vec<Poly> ef(n);
            ef[f] = Poly::constant(1);
            for (std::size_t a = 0; a < n; ++a)
                if (!trdetail::jet_zero(Zm1[f][a] - ef[a], D1))
                    fail_coh("H direction acquired a lift correction");
        }
        std::vector<TractorSection> vec_probe;
        for (std::size_t b = 0; b < n; ++b) {
            TractorSection s(n);
            s.vec[b] = Poly::constant(1);
            TractorSection t2 = hat_derivative(f, s);
            vec_probe.push_back(t2);
            if (!trdetail::jet_zero(t2.scal + P1[f][b], D1))
                fail_coh("rho H* slot disagrees between probes");
            GammaH[f][b] = t2.vec;
        }
        // P2 from the cov slots: cov = -{P2, e_b}, so P2_kl = -cov^(b=k)[l]
        for (std::size_t t = 0; t < pc; ++t) {
            auto [k, l] = prs[t];
            P2[f][t] = -vec_probe[k].cov[l];
            if (!trdetail::jet_zero(vec_probe[l].cov[k] + vec_probe[k].cov[l], D1))
                fail_coh("Lambda^2 contraction asymmetric across probes");
        }
        for (std::size_t b = 0; b < n; ++b) {
            Vec<Poly> expect = lambda2_contract(n, P2[f], [&] {
                Vec<Poly> e(n);
                e[b] = Poly::constant(1);
                return e;
            }());
            for (std::size_t a = 0; a < n; ++a)
                if (!trdetail::jet_zero(vec_probe[b].cov[a] + expect[a], D1))
                    fail_coh("rho Lambda^2 slot inconsistent");
        }
        for (std::size_t a = 0; a < n; ++a) {
            TractorSection s(n);
            s.cov[a] = Poly::constant(1);
            TractorSection t3 = hat_derivative(f, s);
            if (!trdetail::jet_zero(t3.scal + Zm1[f][a], D1))
                fail_coh("lift correction disagrees between probes");
            for (std::size_t b = 0; b < n; ++b)
                if (!trdetail::jet_zero(t3.cov[b] + GammaH[f][b][a], D1))
                    fail_coh("connection not metric-dual on H*");
            Vec<Poly> cexp(n);
            if (f >= n) {
                Vec<Poly> zm2(pc), ea(n);
                zm2[f - n] = Poly::constant(1);
                ea[a] = Poly::constant(1);
                cexp = t2_on_cov(n, zm2, ea);
            }
            for (std::size_t b = 0; b < n; ++b)
                if (!trdetail::jet_zero(t3.vec[b] - cexp[b], D1))
                    fail_coh("T_-2 class deviates from the frame pair");
        }
    }
    item("probe coherence", coherent, coh_witness);

    // rho blocks from the probes, removing the lift correction of the pair
    // directions
    std::vector<Vec<Poly>> P11(n), P12(n), P21(pc), P22(pc);
    for (std::size_t a = 0; a < n; ++a) {
        P11[a] = P1[a];
        P12[a] = P2[a];
    }
    for (std::size_t t = 0; t < pc; ++t) {
        P21[t] = P1[n + t];
        P22[t] = P2[n + t];
        for (std::size_t a = 0; a < n; ++a) {
            if (Zm1[n + t][a].is_zero()) continue;
            for (std::size_t b = 0; b < n; ++b)
                P21[t][b] -= (Zm1[n + t][a] * P11[a][b]).truncated(D1);
            for (std::size_t q = 0; q < pc; ++q)
                P22[t][q] -= (Zm1[n + t][a] * P12[a][q]).truncated(D1);
        }
    }

    // connection on T_-2 frame fields by derivation through the bracket
    std::vector<std::vector<Vec<Poly>>> GammaU(m, std::vector<Vec<Poly>>(pc, Vec<Poly>(pc)));
    for (std::size_t f = 0; f < m; ++f)
        for (std::size_t t = 0; t < pc; ++t) {
            auto [k, l] = prs[t];
            for (std::size_t a = 0; a < n; ++a) {
                auto put = [&](std::size_t x, std::size_t y, const Poly& c) {
                    if (x == y || c.is_zero()) return;
                    if (x < y)
                        GammaU[f][t][tractor_pair_index(n, x, y)] += c;
                    else
                        GammaU[f][t][tractor_pair_index(n, y, x)] -= c;
                };
                put(a, l, GammaH[f][k][a]);
                put(k, a, GammaH[f][l][a]);
            }
        }

    auto field_apply = [&](std::size_t f, const Poly& p) { return fr.fields[f].apply(p); };

    if (!rep.degenerate) {
        // mu in the coordinate basis of H and its Lambda^2 extension
        PolyMat vecM = pm_zero(n, n), covM = pm_zero(n, n);
        for (std::size_t j = 0; j < r; ++j)
            for (std::size_t a = 0; a < n; ++a) {
                vecM[a][j] = V[j].vec[a];
                covM[a][j] = V[j].cov[a];
            }
        PolyMat W = pm_inverse(vecM, origin, D);
        PolyMat MUcols = pm_mul(covM, W, D);  // column a = mu(e_a) in H* coords
        auto MU = [&](std::size_t a, std::size_t b) { return MUcols[b][a]; };
        auto MUL = [&](std::size_t t, std::size_t u) {
            auto [k, l] = prs[t];
            auto [pq_p, pq_q] = prs[u];
            return (MU(k, pq_p) * MU(l, pq_q) - MU(k, pq_q) * MU(l, pq_p)).truncated(D);
        };

        bool ok = true;
        for (std::size_t t = 0; t < pc && ok; ++t)
            for (std::size_t b = 0; b < n && ok; ++b) ok = trdetail::jet_zero(P21[t][b], D1);
        item("rho block T_-2 to H* vanishes", ok);
        ok = true;
        for (std::size_t a = 0; a < n && ok; ++a)
            for (std::size_t t = 0; t < pc && ok; ++t) ok = trdetail::jet_zero(P12[a][t], D1);
        item("rho block H to Lambda^2 H* vanishes", ok);
        ok = true;
        for (std::size_t a = 0; a < n && ok; ++a)
            for (std::size_t b = 0; b < n && ok; ++b)
                ok = trdetail::jet_zero(P11[a][b] + MU(a, b), D1);
        item("rho equals minus mu on H", ok);
        ok = true;
        for (std::size_t t = 0; t < pc && ok; ++t)
            for (std::size_t u = 0; u < pc && ok; ++u)
                ok = trdetail::jet_zero(P22[t][u] + MUL(t, u), D1);
        item("rho equals minus mu on T_-2", ok);

        // nabla mu = 0 on both graded blocks
        ok = true;
        for (std::size_t f = 0; f < m && ok; ++f) {
            for (std::size_t a = 0; a < n && ok; ++a)
                for (std::size_t b = 0; b < n && ok; ++b) {
                    Poly dmu = field_apply(f, MU(a, b));
                    for (std::size_t c = 0; c < n; ++c) {
                        dmu -= (GammaH[f][a][c] * MU(c, b)).truncated(D2);
                        dmu -= (GammaH[f][b][c] * MU(a, c)).truncated(D2);
                    }
                    ok = trdetail::jet_zero(dmu, D2);
                }
            for (std::size_t t = 0; t < pc && ok; ++t)
                for (std::size_t u = 0; u < pc && ok; ++u) {
                    Poly dmu = field_apply(f, MUL(t, u));
                    for (std::size_t q = 0; q < pc; ++q) {
                        dmu -= (GammaU[f][t][q] * MUL(q, u)).truncated(D2);
                        dmu -= (GammaU[f][u][q] * MUL(t, q)).truncated(D2);
                    }
                    ok = trdetail::jet_zero(dmu, D2);
                }
        }
        item("nabla mu vanishes", ok);

        // nabla P = 0 over the full frame
        auto Pblock = [&](std::size_t e1, std::size_t e2) -> Poly {
            if (e1 < n && e2 < n) return P11[e1][e2];
            if (e1 < n) return P12[e1][e2 - n];
            if (e2 < n) return P21[e1 - n][e2];
            return P22[e1 - n][e2 - n];
        };
        auto Gamma_of = [&](std::size_t f, std::size_t e) {
            // frame coordinates of nabla_f e (H block or T_-2 block)
            Vec<Poly> out(m);
            if (e < n)
                for (std::size_t b = 0; b < n; ++b) out[b] = GammaH[f][e][b];
            else
                for (std::size_t q = 0; q < pc; ++q) out[n + q] = GammaU[f][e - n][q];
            return out;
        };
        ok = true;
        for (std::size_t f = 0; f < m && ok; ++f)
            for (std::size_t e1 = 0; e1 < m && ok; ++e1)
                for (std::size_t e2 = 0; e2 < m && ok; ++e2) {
                    Poly dp = field_apply(f, Pblock(e1, e2));
                    Vec<Poly> g1 = Gamma_of(f, e1), g2 = Gamma_of(f, e2);
                    for (std::size_t c = 0; c < m; ++c) {
                        if (!g1[c].is_zero()) dp -= (g1[c] * Pblock(c, e2)).truncated(D2);
                        if (!g2[c].is_zero()) dp -= (g2[c] * Pblock(e1, c)).truncated(D2);
                    }
                    ok = trdetail::jet_zero(dp, D2);
                }
        item("nabla rho vanishes", ok);
    } else {
        // degenerate rank: the property subset that survives, with the
        // canonical zero extension of mu (radical cov slots are cleared, so
        // for totally isotropic V the extension vanishes identically)
        bool iso_zero = true;
        for (const TractorSection& s : V)
            for (std::size_t a = 0; a < n; ++a)
                iso_zero = iso_zero && trdetail::jet_zero(s.cov[a], D);

        // A preserved: nabla of a vec column stays in the span of vec columns
        bool ok = true;
        for (std::size_t f = 0; f < m && ok; ++f)
            for (std::size_t j = 0; j < r && ok; ++j) {
                Vec<Poly> der(n);
                for (std::size_t a = 0; a < n; ++a) der[a] = field_apply(f, V[j].vec[a]);
                for (std::size_t b = 0; b < n; ++b)
                    for (std::size_t a = 0; a < n; ++a)
                        if (!GammaH[f][b][a].is_zero())
                            der[a] += (GammaH[f][b][a] * V[j].vec[b]).truncated(D2);
                // coefficients against the pivot square, residual elsewhere
                PolyMat At = pm_zero(r, r);
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t jj = 0; jj < r; ++jj) At[i][jj] = V[jj].vec[pivots[i]];
                Vec<Poly> rhs(r);
                for (std::size_t i = 0; i < r; ++i) rhs[i] = der[pivots[i]];
                Vec<Poly> coef = pm_vec(pm_inverse(At, origin, D), rhs, D);
                for (std::size_t a = 0; a < n && ok; ++a) {
                    Poly resid = der[a];
                    for (std::size_t jj = 0; jj < r; ++jj)
                        resid -= (coef[jj] * V[jj].vec[a]).truncated(D2);
                    ok = trdetail::jet_zero(resid, D2);
                }
            }
        item("image subbundle preserved", ok);

        if (iso_zero) {
            // mu vanishes identically on the image, so its covariant
            // derivative on A tensor A reduces to the preservation item
            item("nabla mu vanishes on the image",
                 rep.items.back().pass && iso_zero, "mu is zero on the image");
            ok = true;
            for (std::size_t a = 0; a < n && ok; ++a)
                for (std::size_t j = 0; j < r && ok; ++j) {
                    Poly t;
                    for (std::size_t b = 0; b < n; ++b)
                        t += (P11[a][b] * V[j].vec[b]).truncated(D1);
                    ok = trdetail::jet_zero(t, D1);
                }
            item("rho on H annihilates the image", ok);
            ok = true;
            for (std::size_t t = 0; t < pc && ok; ++t)
                for (std::size_t j = 0; j < r && ok; ++j) {
                    Poly acc;
                    for (std::size_t b = 0; b < n; ++b)
                        acc += (P21[t][b] * V[j].vec[b]).truncated(D1);
                    ok = trdetail::jet_zero(acc, D1);
                }
            item("rho on T_-2 annihilates the image", ok);
            ok = true;
            for (std::size_t a = 0; a < n && ok; ++a)
                for (std::size_t i = 0; i < r && ok; ++i)
                    for (std::size_t j = i + 1; j < r && ok; ++j) {
                        Poly acc;
                        std::size_t t = 0;
                        for (std::size_t k = 0; k < n; ++k)
                            for (std::size_t l = k + 1; l < n; ++l, ++t)
                                acc += (P12[a][t] *
                                        (V[i].vec[k] * V[j].vec[l] - V[i].vec[l] * V[j].vec[k]))
                                           .truncated(D1);
                        ok = trdetail::jet_zero(acc, D1);
                    }
            item("rho Lambda^2 block annihilates image wedges", ok,
                 r < 2 ? "vacuous at rank 1" : "");
        } else {
            item("canonical mu extension available", false,
                 "nonzero mu with degenerate rank needs a caller-supplied complement");
        }
    }
    return rep;
}

}  // namespace freedist
