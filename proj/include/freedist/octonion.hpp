#pragma once

#include "graded_lie.hpp"
#include "matrix.hpp"
#include "poly.hpp"
#include "stabilizer.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace freedist {

template <class F>
struct ZornTraits {
    static F one() { return F(1); }
};
template <>
struct ZornTraits<Poly> {
    static Poly one() { return Poly::constant(1); }
};

template <class F>
Vec<F> cross3(const Vec<F>& a, const Vec<F>& b) {
    if (a.size() != 3 || b.size() != 3) throw std::invalid_argument("cross3: length-3 vectors required");
    Vec<F> c(3);
    c[0] = a[1] * b[2] - a[2] * b[1];
    c[1] = a[2] * b[0] - a[0] * b[2];
    c[2] = a[0] * b[1] - a[1] * b[0];
    return c;
}

/// Split octonion in the Zorn vector-matrix form (a, v; w, b) with a, b
/// scalars and v, w in F^3.  The norm N(x) = ab - v.w is multiplicative for
/// the product below and has split signature; the unit is (1, 0; 0, 1).
template <class F>
struct Zorn {
    F a{};
    Vec<F> v = zero_vec<F>(3);
    Vec<F> w = zero_vec<F>(3);
    F b{};

    Zorn() = default;
    Zorn(F a_, Vec<F> v_, Vec<F> w_, F b_)
        : a(std::move(a_)), v(std::move(v_)), w(std::move(w_)), b(std::move(b_)) {
        if (v.size() != 3 || w.size() != 3) throw std::invalid_argument("Zorn: vector slots must have length 3");
    }

    static Zorn unit() {
        Zorn u;
        u.a = ZornTraits<F>::one();
        u.b = ZornTraits<F>::one();
        return u;
    }

    /// Fixed points of x -> -conj(x).
    bool is_imaginary() const { return a + b == F{}; }

    Zorn conj() const {
        Zorn c;
        c.a = b;
        c.v = vec_sub(zero_vec<F>(3), v);
        c.w = vec_sub(zero_vec<F>(3), w);
        c.b = a;
        return c;
    }

    Vec<F> coords() const {
        Vec<F> c(8);
        c[0] = a;
        for (std::size_t i = 0; i < 3; ++i) c[1 + i] = v[i];
        for (std::size_t i = 0; i < 3; ++i) c[4 + i] = w[i];
        c[7] = b;
        return c;
    }

    bool is_zero() const { return *this == Zorn(); }

    Zorn scaled(const F& s) const {
        Zorn r;
        r.a = a * s;
        r.v = vec_scale(s, v);
        r.w = vec_scale(s, w);
        r.b = b * s;
        return r;
    }

    Zorn operator-() const { return scaled(F{} - ZornTraits<F>::one()); }

    Zorn& operator+=(const Zorn& o) {
        a += o.a;
        v = vec_add(v, o.v);
        w = vec_add(w, o.w);
        b += o.b;
        return *this;
    }
    Zorn& operator-=(const Zorn& o) {
        a -= o.a;
        v = vec_sub(v, o.v);
        w = vec_sub(w, o.w);
        b -= o.b;
        return *this;
    }

    friend Zorn operator+(Zorn x, const Zorn& y) { return x += y; }
    friend Zorn operator-(Zorn x, const Zorn& y) { return x -= y; }
    friend Zorn operator*(Zorn x, const F& s) { return x.scaled(s); }
    friend Zorn operator*(const F& s, Zorn x) { return x.scaled(s); }

    friend Zorn operator*(const Zorn& x, const Zorn& y) {
        Zorn p;
        p.a = x.a * y.a + dot(x.v, y.w);
        p.v = vec_add(vec_add(vec_scale(x.a, y.v), vec_scale(y.b, x.v)), cross3(x.w, y.w));
        p.w = vec_sub(vec_add(vec_scale(y.a, x.w), vec_scale(x.b, y.w)), cross3(x.v, y.v));
        p.b = x.b * y.b + dot(y.v, x.w);
        return p;
    }

    friend bool operator==(const Zorn& x, const Zorn& y) {
        return x.a == y.a && x.v == y.v && x.w == y.w && x.b == y.b;
    }
    friend bool operator!=(const Zorn& x, const Zorn& y) { return !(x == y); }
};

using ZornQ = Zorn<Rational>;

template <class F>
F octonion_norm(const Zorn<F>& x) {
    return x.a * x.b - dot(x.v, x.w);
}

/// Polarized bilinear form: octonion_pair(x, x) = octonion_norm(x).
template <class F>
F octonion_pair(const Zorn<F>& x, const Zorn<F>& y) {
    return (x.a * y.b + y.a * x.b - dot(x.v, y.w) - dot(y.v, x.w)) * Rational(1, 2);
}

template <class F>
Zorn<F> alternator(const Zorn<F>& x, const Zorn<F>& y, const Zorn<F>& z) {
    return (x * y) * z - x * (y * z);
}

/// theta(x, y, z) = N(xy, z), totally skew on imaginary arguments.
template <class F>
F theta(const Zorn<F>& x, const Zorn<F>& y, const Zorn<F>& z) {
    if (!x.is_imaginary() || !y.is_imaginary() || !z.is_imaginary())
        throw std::invalid_argument("theta: arguments must be imaginary");
    return octonion_pair(x * y, z);
}

/// Three-form -2 theta.  In this scale an octonionic triple has value 1 and
/// the multiplication-table pairings below come out at unit size.
template <class F>
F triple_form(const Zorn<F>& x, const Zorn<F>& y, const Zorn<F>& z) {
    return Rational(-2) * theta(x, y, z);
}

/// Pairing in the same scale as triple_form: scaled_pair = -2 N(., .).
template <class F>
F scaled_pair(const Zorn<F>& x, const Zorn<F>& y) {
    return Rational(-2) * octonion_pair(x, y);
}

inline ZornQ zorn_from_coords(const Vec<Rational>& c) {
    if (c.size() != 8) throw std::invalid_argument("zorn_from_coords: length-8 vector required");
    return ZornQ(c[0], {c[1], c[2], c[3]}, {c[4], c[5], c[6]}, c[7]);
}

/// Coordinates on Im O': v slots, then w slots, then the split unit axis
/// (1, 0; 0, -1).  octonion_norm restricted here has signature (3, 4).
inline Vec<Rational> im_coords(const ZornQ& x) {
    if (!x.is_imaginary()) throw std::invalid_argument("im_coords: imaginary element required");
    Vec<Rational> c(7);
    for (std::size_t i = 0; i < 3; ++i) c[i] = x.v[i];
    for (std::size_t i = 0; i < 3; ++i) c[3 + i] = x.w[i];
    c[6] = x.a;
    return c;
}

inline ZornQ zorn_from_im_coords(const Vec<Rational>& c) {
    if (c.size() != 7) throw std::invalid_argument("zorn_from_im_coords: length-7 vector required");
    return ZornQ(c[6], {c[0], c[1], c[2]}, {c[3], c[4], c[5]}, -c[6]);
}

inline std::string zorn_str(const ZornQ& x) {
    std::ostringstream os;
    os << "(" << x.a.str() << ", [" << x.v[0].str() << "," << x.v[1].str() << "," << x.v[2].str()
       << "]; [" << x.w[0].str() << "," << x.w[1].str() << "," << x.w[2].str() << "], "
       << x.b.str() << ")";
    return os.str();
}

inline ZornQ v_element(const Vec<Rational>& v) { return ZornQ(Rational(0), v, zero_vec<Rational>(3), Rational(0)); }
inline ZornQ w_element(const Vec<Rational>& w) { return ZornQ(Rational(0), zero_vec<Rational>(3), w, Rational(0)); }

// ---------------------------------------------------------------------------
// Isotropic 3-planes in Im O' and their orbit classification.
// ---------------------------------------------------------------------------

struct IsotropicPlane {
    std::array<ZornQ, 3> basis;
};

inline void validate_isotropic_plane(const IsotropicPlane& P) {
    for (const auto& x : P.basis)
        if (!x.is_imaginary())
            throw std::invalid_argument("isotropic plane: basis elements must be imaginary");
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i; j < 3; ++j)
            if (!octonion_pair(P.basis[i], P.basis[j]).is_zero())
                throw std::invalid_argument("isotropic plane: the norm pairing must vanish on the basis");
    std::vector<Vec<Rational>> rows;
    for (const auto& x : P.basis) rows.push_back(x.coords());
    if (span_dim(rows) != 3)
        throw std::invalid_argument("isotropic plane: basis must be linearly independent");
}

enum class PlaneOrbit { Closed, Open };

struct PlaneClassification {
    PlaneOrbit orbit;
    /// dim span(B.B): 1 on the closed orbit, 3 on the open ones.
    std::size_t product_dim = 0;
    /// Closed orbit only: B.B = span{z} and B is the two-sided kernel of z.
    std::optional<ZornQ> kernel_generator;
};

/// Elements u of Im O' with z u = 0 = u z, as imaginary coordinate vectors.
inline std::vector<Vec<Rational>> two_sided_kernel_im(const ZornQ& z) {
    Mat<Rational> sys(16, 7);
    for (std::size_t j = 0; j < 7; ++j) {
        ZornQ u = zorn_from_im_coords(unit_vec<Rational>(7, j));
        Vec<Rational> zu = (z * u).coords();
        Vec<Rational> uz = (u * z).coords();
        for (std::size_t i = 0; i < 8; ++i) {
            sys(i, j) = zu[i];
            sys(8 + i, j) = uz[i];
        }
    }
    return kernel_basis(sys);
}

/// Orbit of an isotropic 3-plane: Closed iff theta vanishes on the plane,
/// equivalently iff the plane absorbs its own products.  Both criteria are
/// evaluated and must agree; the closed case recovers the plane as the
/// two-sided kernel of the product line generator.
inline PlaneClassification classify_isotropic_plane(const IsotropicPlane& P) {
    validate_isotropic_plane(P);
    const auto& B = P.basis;

    bool theta_zero = theta(B[0], B[1], B[2]).is_zero();

    std::vector<Vec<Rational>> basis_coords;
    for (const auto& x : B) basis_coords.push_back(x.coords());
    std::vector<Vec<Rational>> prods;
    bool contained = true;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            Vec<Rational> p = (B[i] * B[j]).coords();
            if (vec_is_zero(p)) continue;
            if (!span_contains(basis_coords, p)) contained = false;
            prods.push_back(std::move(p));
        }
    if (theta_zero != contained)
        throw std::logic_error("classify_isotropic_plane: orbit criteria disagree");

    PlaneClassification out;
    out.product_dim = span_dim(prods);
    if (theta_zero) {
        out.orbit = PlaneOrbit::Closed;
        if (out.product_dim != 1)
            throw std::logic_error("classify_isotropic_plane: closed-orbit products must span a line");
        ZornQ z = zorn_from_coords(prods.front());
        std::vector<Vec<Rational>> kern = two_sided_kernel_im(z);
        std::vector<Vec<Rational>> basis_im;
        for (const auto& x : B) basis_im.push_back(im_coords(x));
        if (kern.size() != 3 || !span_equal(kern, basis_im))
            throw std::logic_error("classify_isotropic_plane: two-sided kernel must recover the plane");
        out.kernel_generator = z;
    } else {
        out.orbit = PlaneOrbit::Open;
        if (out.product_dim != 3)
            throw std::logic_error("classify_isotropic_plane: open-orbit products must span a 3-plane");
        std::vector<Vec<Rational>> both = basis_coords;
        both.insert(both.end(), prods.begin(), prods.end());
        if (span_dim(both) != 6)
            throw std::logic_error("classify_isotropic_plane: open-orbit products must be transverse");
    }
    return out;
}

/// span{(0, e1; 0, 0), (0, 0; e2, 0), (0, 0; e3, 0)}; products span the first
/// element, so the plane absorbs them and the orbit is closed.
inline IsotropicPlane canonical_closed_plane() {
    return IsotropicPlane{{v_element(unit_vec<Rational>(3, 0)), w_element(unit_vec<Rational>(3, 1)),
                           w_element(unit_vec<Rational>(3, 2))}};
}

/// v-slot plane with triple_form = 1 (an octonionic triple).
inline IsotropicPlane canonical_open_plane() {
    return IsotropicPlane{{v_element(unit_vec<Rational>(3, 0)), v_element(unit_vec<Rational>(3, 1)),
                           v_element(vec_scale(Rational(-1), unit_vec<Rational>(3, 2)))}};
}

inline Rational det3(const Mat<Rational>& A) {
    return A(0, 0) * (A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1)) -
           A(0, 1) * (A(1, 0) * A(2, 2) - A(1, 2) * A(2, 0)) +
           A(0, 2) * (A(1, 0) * A(2, 1) - A(1, 1) * A(2, 0));
}

/// (a, v; w, b) -> (a, Av; cof(A) w, b) is an algebra automorphism when
/// det(A) = 1, since cof(A) = A^{-t} intertwines the cross products.
inline ZornQ sl3_twist(const Mat<Rational>& A, const ZornQ& x) {
    if (A.rows() != 3 || A.cols() != 3 || det3(A) != Rational(1))
        throw std::invalid_argument("sl3_twist: unimodular 3x3 matrix required");
    Mat<Rational> cof(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            std::size_t r0 = (i + 1) % 3, r1 = (i + 2) % 3;
            std::size_t c0 = (j + 1) % 3, c1 = (j + 2) % 3;
            cof(i, j) = A(r0, c0) * A(r1, c1) - A(r0, c1) * A(r1, c0);
        }
    return ZornQ(x.a, A * x.v, cof * x.w, x.b);
}

// ---------------------------------------------------------------------------
// Octonionic triples and the generated multiplication table.
// ---------------------------------------------------------------------------

struct OctonionicTriple {
    ZornQ x, y, z;
};

/// Basis of an open plane rescaled so triple_form(x, y, z) = 1.
inline OctonionicTriple octonionic_triple_from(const IsotropicPlane& P) {
    validate_isotropic_plane(P);
    Rational lam = triple_form(P.basis[0], P.basis[1], P.basis[2]);
    if (lam.is_zero()) throw std::invalid_argument("octonionic triple requires an open plane");
    return OctonionicTriple{P.basis[0], P.basis[1], P.basis[2].scaled(Rational(1) / lam)};
}

/// Verifies the full multiplication table generated by an octonionic triple:
/// squares, orthogonality, the dual triple volume, the cyclic product
/// relations, the split unit a = (xy)z - z(xy) and its action, and linear
/// independence of the eight generated elements.
inline CheckReport triple_table_check(const OctonionicTriple& t) {
    IsotropicPlane P{{t.x, t.y, t.z}};
    validate_isotropic_plane(P);
    if (triple_form(t.x, t.y, t.z) != Rational(1))
        throw std::invalid_argument("triple_table_check: triple_form(x, y, z) = 1 required");

    const ZornQ &x = t.x, &y = t.y, &z = t.z;
    ZornQ xy = x * y, yz = y * z, zx = z * x;
    ZornQ a = xy * z - z * xy;
    CheckReport r;

    r.add("factor squares vanish", (x * x).is_zero() && (y * y).is_zero() && (z * z).is_zero());
    r.add("product squares vanish",
          (xy * xy).is_zero() && (yz * yz).is_zero() && (zx * zx).is_zero());

    bool orth = octonion_pair(xy, x).is_zero() && octonion_pair(xy, y).is_zero() &&
                octonion_pair(yz, y).is_zero() && octonion_pair(yz, z).is_zero() &&
                octonion_pair(zx, z).is_zero() && octonion_pair(zx, x).is_zero();
    r.add("products orthogonal to their factors", orth);

    Rational dual = triple_form(yz, zx, xy);
    r.add("dual triple has volume -1", dual == Rational(-1), dual.str());

    bool cyc = (xy * yz == -y) && (yz * zx == -z) && (zx * xy == -x);
    r.add("consecutive products return the negated basis", cyc);

    Rational bp = scaled_pair(xy * yz, zx);
    r.add("b pairs to -1 with zx", bp == Rational(-1), bp.str());

    r.add("a is imaginary", a.conj() == -a, zorn_str(a));
    r.add("a definitions agree", a == yz * x - x * yz && a == zx * y - y * zx);

    bool unit_action = (x * a == x) && (a * x == -x) && (y * a == y) && (a * y == -y) &&
                       (z * a == z) && (a * z == -z);
    r.add("a acts as +1 on the right and -1 on the left of the triple", unit_action);
    bool prod_action = (a * xy == xy) && (xy * a == -xy) && (a * yz == yz) && (yz * a == -yz) &&
                       (a * zx == zx) && (zx * a == -zx);
    r.add("a acts as +1 on the left and -1 on the right of the products", prod_action);

    r.add("a squares to the unit", a * a == ZornQ::unit(), zorn_str(a * a));

    std::vector<Vec<Rational>> rows = {ZornQ::unit().coords(), x.coords(), y.coords(), z.coords(),
                                       xy.coords(),            yz.coords(), zx.coords(), a.coords()};
    r.add("the eight generated elements are independent", span_dim(rows) == 8);
    return r;
}

// ---------------------------------------------------------------------------
// Identity battery: composition-algebra laws as exact polynomial identities
// plus exhaustive basis skewness checks.
// ---------------------------------------------------------------------------

inline CheckReport zorn_identity_checks() {
    CheckReport r;

    std::vector<std::string> names;
    for (const char* p : {"x", "y"})
        for (const char* s : {"a", "v1", "v2", "v3", "w1", "w2", "w3", "b"})
            names.push_back(std::string(p) + s);
    auto sys = CoordSystem::make(names);
    auto sym = [&](std::size_t base) {
        Zorn<Poly> u;
        u.a = Poly::var(sys, base);
        u.v = {Poly::var(sys, base + 1), Poly::var(sys, base + 2), Poly::var(sys, base + 3)};
        u.w = {Poly::var(sys, base + 4), Poly::var(sys, base + 5), Poly::var(sys, base + 6)};
        u.b = Poly::var(sys, base + 7);
        return u;
    };
    Zorn<Poly> X = sym(0), Y = sym(8);
    Zorn<Poly> U = Zorn<Poly>::unit();

    r.add("unit is a two-sided identity", U * X == X && X * U == X);
    r.add("norm is multiplicative",
          octonion_norm(X * Y) == octonion_norm(X) * octonion_norm(Y));
    r.add("conjugation recovers the norm",
          X * X.conj() == U.scaled(octonion_norm(X)));
    r.add("alternator vanishes on repeated arguments",
          alternator(X, X, Y).is_zero() && alternator(X, Y, Y).is_zero() &&
              alternator(X, Y, X).is_zero());

    std::array<ZornQ, 8> e8;
    for (std::size_t i = 0; i < 8; ++i) e8[i] = zorn_from_coords(unit_vec<Rational>(8, i));
    bool alt_skew = true;
    for (std::size_t i = 0; i < 8 && alt_skew; ++i)
        for (std::size_t j = 0; j < 8 && alt_skew; ++j)
            for (std::size_t k = 0; k < 8; ++k) {
                ZornQ alt = alternator(e8[i], e8[j], e8[k]);
                if (!(alt == -alternator(e8[j], e8[i], e8[k]) &&
                      alt == -alternator(e8[i], e8[k], e8[j]))) {
                    alt_skew = false;
                    break;
                }
            }
    r.add("alternator antisymmetric on the full basis", alt_skew);

    // Symbolic imaginary triple: 21 coordinates, b slots pinned to -a.
    std::vector<std::string> inames;
    for (const char* p : {"x", "y", "z"})
        for (const char* s : {"s", "v1", "v2", "v3", "w1", "w2", "w3"})
            inames.push_back(std::string(p) + s);
    auto isys = CoordSystem::make(inames);
    auto imsym = [&](std::size_t base) {
        Zorn<Poly> u;
        u.a = Poly::var(isys, base);
        u.v = {Poly::var(isys, base + 1), Poly::var(isys, base + 2), Poly::var(isys, base + 3)};
        u.w = {Poly::var(isys, base + 4), Poly::var(isys, base + 5), Poly::var(isys, base + 6)};
        u.b = Poly() - u.a;
        return u;
    };
    Zorn<Poly> A = imsym(0), B = imsym(7), C = imsym(14);
    bool theta_skew = theta(A, A, B).is_zero() && theta(A, B, B).is_zero() &&
                      (theta(A, B, C) + theta(B, A, C)).is_zero() &&
                      (theta(A, B, C) + theta(A, C, B)).is_zero();
    r.add("theta is alternating", theta_skew);

    // N-contraction of the alternator on Im O', exhaustively on the basis.
    std::array<ZornQ, 7> f7;
    for (std::size_t i = 0; i < 7; ++i) f7[i] = zorn_from_im_coords(unit_vec<Rational>(7, i));
    Vec<Rational> tbl(7 * 7 * 7 * 7);
    for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t j = 0; j < 7; ++j)
            for (std::size_t k = 0; k < 7; ++k) {
                ZornQ alt = alternator(f7[i], f7[j], f7[k]);
                for (std::size_t l = 0; l < 7; ++l)
                    tbl[((i * 7 + j) * 7 + k) * 7 + l] = octonion_pair(alt, f7[l]);
            }
    auto at = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) -> const Rational& {
        return tbl[((i * 7 + j) * 7 + k) * 7 + l];
    };
    bool four_skew = true;
    for (std::size_t i = 0; i < 7 && four_skew; ++i)
        for (std::size_t j = 0; j < 7 && four_skew; ++j)
            for (std::size_t k = 0; k < 7 && four_skew; ++k)
                for (std::size_t l = 0; l < 7; ++l) {
                    if (at(i, j, k, l) != -at(j, i, k, l) || at(i, j, k, l) != -at(i, k, j, l) ||
                        at(i, j, k, l) != -at(i, j, l, k)) {
                        four_skew = false;
                        break;
                    }
                }
    r.add("alternator norm contraction is skew in all four slots", four_skew);
    return r;
}

// ---------------------------------------------------------------------------
// The stabilizer of theta inside the orthogonal algebra of Im O', in a frame
// adapted to an open isotropic plane, with its graded slot pattern.
// ---------------------------------------------------------------------------

struct G2Decomposition {
    CheckReport checks;
    /// Columns: imaginary coordinates of (x, y, z, a, -2yz, -2zx, -2xy).
    Mat<Rational> adapted_frame;
    Mat<Rational> adapted_gram;
    std::vector<Mat<Rational>> stabilizer;
    /// v = low * C-params and B-params = high * w on every stabilizer element.
    std::optional<Mat<Rational>> low_identification;
    std::optional<Mat<Rational>> high_identification;
};

inline G2Decomposition g2_graded_decomposition(const IsotropicPlane& P) {
    PlaneClassification cls = classify_isotropic_plane(P);
    if (cls.orbit == PlaneOrbit::Closed)
        throw std::invalid_argument("g2_graded_decomposition: open plane required");

    OctonionicTriple t = octonionic_triple_from(P);
    const ZornQ &x = t.x, &y = t.y, &z = t.z;
    ZornQ xy = x * y, yz = y * z, zx = z * x;
    ZornQ a = xy * z - z * xy;

    G2Decomposition out;
    std::array<ZornQ, 7> frame = {x, y, z, a, yz.scaled(Rational(-2)), zx.scaled(Rational(-2)),
                                  xy.scaled(Rational(-2))};
    std::vector<Vec<Rational>> cols;
    for (const auto& q : frame) cols.push_back(im_coords(q));
    out.adapted_frame = Mat<Rational>::from_cols(cols);

    out.adapted_gram = Mat<Rational>(7, 7);
    for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t j = 0; j < 7; ++j) out.adapted_gram(i, j) = octonion_pair(frame[i], frame[j]);
    out.checks.add("adapted frame is a basis", rank(out.adapted_frame) == 7);
    out.checks.add("adapted inner product matches the block model", out.adapted_gram == defining_form(3));

    AlternatingForm th(7, 3);
    for (const auto& tup : th.tuples())
        th.set(tup, theta(frame[tup[0]], frame[tup[1]], frame[tup[2]]));

    std::vector<Mat<Rational>> ambient = orthogonal_algebra_basis(out.adapted_gram);
    out.checks.add("orthogonal algebra has dimension 21", ambient.size() == 21,
                   std::to_string(ambient.size()));
    StabilizerAlgebra stab = stabilizer_algebra(th, std::move(ambient));
    out.stabilizer = stab.generators;
    out.checks.add("stabilizer has dimension 14", out.stabilizer.size() == 14,
                   std::to_string(out.stabilizer.size()));
    out.checks.add("stabilizer closed under bracket", stab.bracket_closed);

    // Graded slot data per generator, in the block model adapted to the plane.
    GradedLieAlgebra alg(3);
    std::vector<Vec<Rational>> cpar, wpar, vpar, bpar;
    std::vector<Mat<Rational>> apar;
    for (const auto& m : out.stabilizer) {
        auto be = BlockElement::from_matrix(m);
        if (!be) throw std::logic_error("g2_graded_decomposition: generator outside the block model");
        Vec<Rational> c(3), bb(3);
        for (std::size_t p = 0; p < 3; ++p) {
            auto [k, l] = alg.pair_of(p);
            c[p] = be->C(k, l);
            bb[p] = be->B(k, l);
        }
        cpar.push_back(std::move(c));
        bpar.push_back(std::move(bb));
        wpar.push_back(be->w);
        vpar.push_back(be->v);
        apar.push_back(be->A);
    }
    const std::size_t dim = out.stabilizer.size();

    // Grade-zero intersection: coefficient kernel of the off-grade slots.
    Mat<Rational> off(12, dim);
    for (std::size_t g = 0; g < dim; ++g)
        for (std::size_t i = 0; i < 3; ++i) {
            off(i, g) = cpar[g][i];
            off(3 + i, g) = wpar[g][i];
            off(6 + i, g) = vpar[g][i];
            off(9 + i, g) = bpar[g][i];
        }
    std::vector<Vec<Rational>> g0coef = kernel_basis(off);
    out.checks.add("grade-zero intersection has dimension 8", g0coef.size() == 8,
                   std::to_string(g0coef.size()));

    std::vector<Vec<Rational>> g0blocks;
    bool traceless = true;
    for (const auto& coef : g0coef) {
        Mat<Rational> A0(3, 3);
        for (std::size_t g = 0; g < dim; ++g)
            if (!coef[g].is_zero()) A0 += coef[g] * apar[g];
        if (!(A0(0, 0) + A0(1, 1) + A0(2, 2)).is_zero()) traceless = false;
        g0blocks.push_back(vec_of_matrix(A0));
    }
    out.checks.add("grade-zero part is traceless and spans sl(3)",
                   traceless && span_dim(g0blocks) == 8);

    bool g0closed = true;
    for (std::size_t i = 0; i < g0blocks.size() && g0closed; ++i)
        for (std::size_t j = i + 1; j < g0blocks.size(); ++j) {
            Mat<Rational> mi(3, 3), mj(3, 3);
            for (std::size_t p = 0; p < 3; ++p)
                for (std::size_t q = 0; q < 3; ++q) {
                    mi(p, q) = g0blocks[i][p * 3 + q];
                    mj(p, q) = g0blocks[j][p * 3 + q];
                }
            Vec<Rational> c = vec_of_matrix(commutator(mi, mj));
            if (!vec_is_zero(c) && !span_contains(g0blocks, c)) {
                g0closed = false;
                break;
            }
        }
    out.checks.add("grade-zero intersection closed under bracket", g0closed);

    // One linear identification carries the grade -2 slot to the grade +1
    // slot across all generators; likewise grade -1 to grade +2.
    auto solve_ident = [&](const std::vector<Vec<Rational>>& src,
                           const std::vector<Vec<Rational>>& dst) -> std::optional<Mat<Rational>> {
        Mat<Rational> sysm(3 * dim, 9);
        Vec<Rational> rhs(3 * dim);
        for (std::size_t g = 0; g < dim; ++g)
            for (std::size_t i = 0; i < 3; ++i) {
                for (std::size_t j = 0; j < 3; ++j) sysm(3 * g + i, 3 * i + j) = src[g][j];
                rhs[3 * g + i] = dst[g][i];
            }
        auto sol = solve(sysm, rhs);
        if (!sol) return std::nullopt;
        Mat<Rational> T(3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) T(i, j) = (*sol)[3 * i + j];
        return T;
    };
    out.low_identification = solve_ident(cpar, vpar);
    out.checks.add("grade +1 slot determined by grade -2 slot", out.low_identification.has_value());
    out.checks.add("low identification invertible",
                   out.low_identification && rank(*out.low_identification) == 3);
    out.high_identification = solve_ident(wpar, bpar);
    out.checks.add("grade +2 slot determined by grade -1 slot", out.high_identification.has_value());
    out.checks.add("high identification invertible",
                   out.high_identification && rank(*out.high_identification) == 3);

    // Nothing lives purely below grade zero.
    Mat<Rational> nonneg(15, dim);
    for (std::size_t g = 0; g < dim; ++g) {
        for (std::size_t i = 0; i < 9; ++i) nonneg(i, g) = apar[g](i / 3, i % 3);
        for (std::size_t i = 0; i < 3; ++i) {
            nonneg(9 + i, g) = vpar[g][i];
            nonneg(12 + i, g) = bpar[g][i];
        }
    }
    out.checks.add("no nonzero element purely of negative grade", kernel_basis(nonneg).empty());

    Mat<Rational> neg(6, dim);
    for (std::size_t g = 0; g < dim; ++g)
        for (std::size_t i = 0; i < 3; ++i) {
            neg(i, g) = cpar[g][i];
            neg(3 + i, g) = wpar[g][i];
        }
    out.checks.add("projection to negative grades surjective", rank(neg) == 6);
    const std::size_t negker = kernel_basis(neg).size();
    out.checks.add("negative projection kernel has dimension 8", negker == 8, std::to_string(negker));
    return out;
}

// ---------------------------------------------------------------------------
// The sl(3) homogeneous-space identity: a 3-dim span H with {H, t} in H for
// the diagonal torus t, whose derived span is the transposed copy.
// ---------------------------------------------------------------------------

inline CheckReport sl3_example_check() {
    auto E = [](std::size_t i, std::size_t j) {
        Mat<Rational> m(3, 3);
        m(i, j) = Rational(1);
        return m;
    };
    auto diag = [](long d0, long d1, long d2) {
        Mat<Rational> m(3, 3);
        m(0, 0) = Rational(d0);
        m(1, 1) = Rational(d1);
        m(2, 2) = Rational(d2);
        return m;
    };
    std::vector<Mat<Rational>> H = {E(0, 1), E(1, 2), E(2, 0)};
    std::vector<Mat<Rational>> Ht = {E(1, 0), E(2, 1), E(0, 2)};
    std::vector<Mat<Rational>> torus = {diag(1, -1, 0), diag(0, 1, -1)};

    std::vector<Vec<Rational>> hspan, htspan;
    for (const auto& m : H) hspan.push_back(vec_of_matrix(m));
    for (const auto& m : Ht) htspan.push_back(vec_of_matrix(m));

    CheckReport r;
    bool torus_pres = true;
    for (const auto& t : torus)
        for (const auto& h : H)
            if (!span_contains(hspan, vec_of_matrix(commutator(t, h)))) torus_pres = false;
    r.add("torus brackets preserve the span", torus_pres);
    r.add("sample torus bracket is twice the generator",
          commutator(diag(1, -1, 0), E(0, 1)) == Rational(2) * E(0, 1));

    std::vector<Vec<Rational>> derived;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j)
            derived.push_back(vec_of_matrix(commutator(H[i], H[j])));
    r.add("derived span has dimension 3", span_dim(derived) == 3);
    r.add("derived span is the transposed span", span_equal(derived, htspan));
    r.add("derived span meets the span trivially", span_intersection(derived, hspan).empty());
    return r;
}

}  // namespace freedist
