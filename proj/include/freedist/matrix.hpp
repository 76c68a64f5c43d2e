#pragma once

#include "gauss.hpp"
#include "rational.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace freedist {

template <class F>
using Vec = std::vector<F>;

/// Pivot selection when eliminating.  SmallestMagnitude keeps the bit size of
/// intermediate rationals down on the structure-constant matrices that
/// dominate this project (entries mostly 0, +-1, +-1/2).  LargestMagnitude
/// exists so tests can cross-check results under an independent pivot order.
enum class PivotRule { FirstNonzero, SmallestMagnitude, LargestMagnitude };

template <class F>
struct FieldOps {
    static Rational magnitude(const F& x);
};

template <>
struct FieldOps<Rational> {
    static Rational magnitude(const Rational& x) { return x.abs(); }
};

template <>
struct FieldOps<GaussScalar> {
    static Rational magnitude(const GaussScalar& x) { return x.norm(); }
};

/// Dense matrix over an exact field.
template <class F>
class Mat {
public:
    Mat() : r_(0), c_(0) {}
    Mat(std::size_t r, std::size_t c) : r_(r), c_(c), a_(r * c) {}

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = F(1);
        return m;
    }

    static Mat from_rows(const std::vector<Vec<F>>& rows) {
        if (rows.empty()) return Mat();
        Mat m(rows.size(), rows[0].size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.c_) throw std::invalid_argument("from_rows: ragged input");
            for (std::size_t j = 0; j < m.c_; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    static Mat from_cols(const std::vector<Vec<F>>& cols) {
        return from_rows(cols).transpose();
    }

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }

    F& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const F& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    Vec<F> row(std::size_t i) const {
        Vec<F> v(c_);
        for (std::size_t j = 0; j < c_; ++j) v[j] = (*this)(i, j);
        return v;
    }
    Vec<F> col(std::size_t j) const {
        Vec<F> v(r_);
        for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
        return v;
    }
    std::vector<Vec<F>> to_rows() const {
        std::vector<Vec<F>> out;
        out.reserve(r_);
        for (std::size_t i = 0; i < r_; ++i) out.push_back(row(i));
        return out;
    }

    Mat transpose() const {
        Mat t(c_, r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    bool is_zero() const {
        for (const F& x : a_)
            if (!x.is_zero()) return false;
        return true;
    }

    Mat operator-() const {
        Mat m(r_, c_);
        for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = -a_[k];
        return m;
    }

    Mat& operator+=(const Mat& o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }
    Mat& operator-=(const Mat& o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }
    Mat& operator*=(const F& s) {
        for (F& x : a_) x *= s;
        return *this;
    }

    friend Mat operator+(Mat a, const Mat& b) { return a += b; }
    friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
    friend Mat operator*(const F& s, Mat a) { return a *= s; }
    friend Mat operator*(Mat a, const F& s) { return a *= s; }

    friend Mat operator*(const Mat& a, const Mat& b) {
        if (a.c_ != b.r_) throw std::invalid_argument("Mat*: shape mismatch");
        Mat m(a.r_, b.c_);
        for (std::size_t i = 0; i < a.r_; ++i)
            for (std::size_t k = 0; k < a.c_; ++k) {
                const F& aik = a(i, k);
                if (aik.is_zero()) continue;
                for (std::size_t j = 0; j < b.c_; ++j) {
                    const F& bkj = b(k, j);
                    if (!bkj.is_zero()) m(i, j) += aik * bkj;
                }
            }
        return m;
    }

    friend Vec<F> operator*(const Mat& a, const Vec<F>& v) {
        if (a.c_ != v.size()) throw std::invalid_argument("Mat*vec: shape mismatch");
        Vec<F> out(a.r_);
        for (std::size_t i = 0; i < a.r_; ++i)
            for (std::size_t j = 0; j < a.c_; ++j)
                if (!a(i, j).is_zero() && !v[j].is_zero()) out[i] += a(i, j) * v[j];
        return out;
    }

    friend bool operator==(const Mat& a, const Mat& b) {
        return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_;
    }
    friend bool operator!=(const Mat& a, const Mat& b) { return !(a == b); }

    friend std::ostream& operator<<(std::ostream& os, const Mat& m) {
        for (std::size_t i = 0; i < m.r_; ++i) {
            os << '[';
            for (std::size_t j = 0; j < m.c_; ++j) os << (j ? " " : "") << m(i, j).str();
            os << "]\n";
        }
        return os;
    }

private:
    void check_same_shape(const Mat& o) const {
        if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("Mat: shape mismatch");
    }

    std::size_t r_, c_;
    std::vector<F> a_;
};

// Vector helpers.

template <class F>
Vec<F> zero_vec(std::size_t n) { return Vec<F>(n); }

template <class F>
Vec<F> unit_vec(std::size_t n, std::size_t i) {
    Vec<F> v(n);
    v[i] = F(1);
    return v;
}

template <class F>
Vec<F>& add_scaled(Vec<F>& dst, const F& s, const Vec<F>& src) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += s * src[i];
    return dst;
}

template <class F>
Vec<F> vec_add(Vec<F> a, const Vec<F>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

template <class F>
Vec<F> vec_sub(Vec<F> a, const Vec<F>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

template <class F>
Vec<F> vec_scale(const F& s, Vec<F> a) {
    for (F& x : a) x *= s;
    return a;
}

template <class F>
Vec<F> vec_neg(Vec<F> a) {
    for (F& x : a) x = -x;
    return a;
}

template <class F>
F dot(const Vec<F>& a, const Vec<F>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    F s{};
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

template <class F>
bool vec_is_zero(const Vec<F>& a) {
    for (const F& x : a)
        if (!x.is_zero()) return false;
    return true;
}

// Elimination.

template <class F>
struct Echelon {
    Mat<F> rref;
    std::vector<std::size_t> pivot_cols;
    std::size_t rank = 0;
    int swap_parity = 1;
    F pivot_product{};  // product of pivots before normalization, 0 if rank deficient on a square matrix
};

template <class F>
Echelon<F> row_echelon(Mat<F> m, PivotRule rule = PivotRule::SmallestMagnitude) {
    Echelon<F> e;
    e.swap_parity = 1;
    e.pivot_product = F(1);
    const std::size_t R = m.rows(), C = m.cols();
    std::size_t r = 0;
    for (std::size_t c = 0; c < C && r < R; ++c) {
        std::size_t best = R;
        for (std::size_t i = r; i < R; ++i) {
            if (m(i, c).is_zero()) continue;
            if (best == R) {
                best = i;
                if (rule == PivotRule::FirstNonzero) break;
                continue;
            }
            Rational mi = FieldOps<F>::magnitude(m(i, c));
            Rational mb = FieldOps<F>::magnitude(m(best, c));
            if ((rule == PivotRule::SmallestMagnitude && mi < mb) ||
                (rule == PivotRule::LargestMagnitude && mi > mb))
                best = i;
        }
        if (best == R) continue;
        if (best != r) {
            for (std::size_t j = 0; j < C; ++j) std::swap(m(r, j), m(best, j));
            e.swap_parity = -e.swap_parity;
        }
        F p = m(r, c);
        e.pivot_product *= p;
        F pinv = p.inverse();
        for (std::size_t j = c; j < C; ++j) m(r, j) *= pinv;
        for (std::size_t i = 0; i < R; ++i) {
            if (i == r || m(i, c).is_zero()) continue;
            F f = m(i, c);
            for (std::size_t j = c; j < C; ++j) m(i, j) -= f * m(r, j);
        }
        e.pivot_cols.push_back(c);
        ++r;
    }
    e.rank = r;
    e.rref = std::move(m);
    return e;
}

template <class F>
std::size_t rank(const Mat<F>& m, PivotRule rule = PivotRule::SmallestMagnitude) {
    return row_echelon(m, rule).rank;
}

template <class F>
F determinant(const Mat<F>& m, PivotRule rule = PivotRule::SmallestMagnitude) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: not square");
    Echelon<F> e = row_echelon(m, rule);
    if (e.rank < m.rows()) return F(0);
    F d = e.pivot_product;
    if (e.swap_parity < 0) d = -d;
    return d;
}

/// Basis of the right kernel { x : m x = 0 }.
template <class F>
std::vector<Vec<F>> kernel_basis(const Mat<F>& m, PivotRule rule = PivotRule::SmallestMagnitude) {
    Echelon<F> e = row_echelon(m, rule);
    const std::size_t C = m.cols();
    std::vector<bool> is_pivot(C, false);
    for (std::size_t c : e.pivot_cols) is_pivot[c] = true;
    std::vector<Vec<F>> basis;
    for (std::size_t f = 0; f < C; ++f) {
        if (is_pivot[f]) continue;
        Vec<F> v(C);
        v[f] = F(1);
        for (std::size_t rr = 0; rr < e.pivot_cols.size(); ++rr)
            v[e.pivot_cols[rr]] = -e.rref(rr, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Some solution of A x = b, verified by substitution before returning.
template <class F>
std::optional<Vec<F>> solve(const Mat<F>& a, const Vec<F>& b,
                            PivotRule rule = PivotRule::SmallestMagnitude) {
    if (a.rows() != b.size()) throw std::invalid_argument("solve: shape mismatch");
    Mat<F> aug(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
        aug(i, a.cols()) = b[i];
    }
    Echelon<F> e = row_echelon(aug, rule);
    for (std::size_t c : e.pivot_cols)
        if (c == a.cols()) return std::nullopt;
    Vec<F> x(a.cols());
    for (std::size_t rr = 0; rr < e.pivot_cols.size(); ++rr)
        x[e.pivot_cols[rr]] = e.rref(rr, a.cols());
    if (a * x != b) throw std::logic_error("solve: substitution check failed");
    return x;
}

// Subspaces of F^d, represented by spanning lists.

template <class F>
std::size_t span_dim(const std::vector<Vec<F>>& span) {
    if (span.empty()) return 0;
    return rank(Mat<F>::from_rows(span));
}

/// Reduced (RREF-row) basis of the span; canonical for a given subspace.
template <class F>
std::vector<Vec<F>> span_basis(const std::vector<Vec<F>>& span) {
    if (span.empty()) return {};
    Echelon<F> e = row_echelon(Mat<F>::from_rows(span));
    std::vector<Vec<F>> out;
    for (std::size_t i = 0; i < e.rank; ++i) out.push_back(e.rref.row(i));
    return out;
}

template <class F>
bool span_contains(const std::vector<Vec<F>>& span, const Vec<F>& v) {
    if (vec_is_zero(v)) return true;
    if (span.empty()) return false;
    std::vector<Vec<F>> ext = span;
    ext.push_back(v);
    return span_dim(ext) == span_dim(span);
}

template <class F>
bool span_equal(const std::vector<Vec<F>>& a, const std::vector<Vec<F>>& b) {
    return span_basis(a) == span_basis(b);
}

template <class F>
std::vector<Vec<F>> span_sum(std::vector<Vec<F>> a, const std::vector<Vec<F>>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return span_basis(a);
}

/// Basis of span(a) `intersect` span(b): solve sum alpha_i a_i = sum beta_j b_j.
template <class F>
std::vector<Vec<F>> span_intersection(const std::vector<Vec<F>>& a,
                                      const std::vector<Vec<F>>& b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t d = a[0].size();
    Mat<F> m(d, a.size() + b.size());
    for (std::size_t j = 0; j < a.size(); ++j)
        for (std::size_t i = 0; i < d; ++i) m(i, j) = a[j][i];
    for (std::size_t j = 0; j < b.size(); ++j)
        for (std::size_t i = 0; i < d; ++i) m(i, a.size() + j) = -b[j][i];
    std::vector<Vec<F>> out;
    for (const Vec<F>& k : kernel_basis(m)) {
        Vec<F> v(d);
        for (std::size_t j = 0; j < a.size(); ++j) add_scaled(v, k[j], a[j]);
        if (!vec_is_zero(v)) out.push_back(std::move(v));
    }
    return span_basis(out);
}

/// Coefficients expressing v in the given (not necessarily independent) list.
template <class F>
std::optional<Vec<F>> coords_in_span(const std::vector<Vec<F>>& span, const Vec<F>& v) {
    if (span.empty()) return vec_is_zero(v) ? std::optional<Vec<F>>(Vec<F>{}) : std::nullopt;
    return solve(Mat<F>::from_cols(span), v);
}

template <class F>
std::optional<Mat<F>> inverse(const Mat<F>& m, PivotRule rule = PivotRule::SmallestMagnitude) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse: not square");
    const std::size_t n = m.rows();
    Mat<F> aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = F(1);
    }
    Echelon<F> e = row_echelon(aug, rule);
    if (e.rank < n || e.pivot_cols[n - 1] != n - 1) return std::nullopt;
    Mat<F> inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.rref(i, n + j);
    return inv;
}

/// Rank of a sparse matrix given as rows of sorted (col, value) pairs.
/// Pivots on the shortest active row to limit fill-in; used for the large
/// chain-space blocks where dense elimination would not fit in memory.
template <class F>
std::size_t sparse_rank(std::vector<std::vector<std::pair<std::size_t, F>>> rows) {
    auto axpy_row = [](const std::vector<std::pair<std::size_t, F>>& a, const F& s,
                       const std::vector<std::pair<std::size_t, F>>& b) {
        // returns a + s*b, both sorted by column
        std::vector<std::pair<std::size_t, F>> out;
        out.reserve(a.size() + b.size());
        std::size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
                out.push_back(a[i++]);
            } else if (i == a.size() || b[j].first < a[i].first) {
                out.emplace_back(b[j].first, s * b[j].second);
                ++j;
            } else {
                F v = a[i].second + s * b[j].second;
                if (!v.is_zero()) out.emplace_back(a[i].first, std::move(v));
                ++i;
                ++j;
            }
        }
        return out;
    };

    std::size_t r = 0;
    std::vector<bool> done(rows.size(), false);
    for (;;) {
        std::size_t best = rows.size();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (done[i] || rows[i].empty()) continue;
            if (best == rows.size() || rows[i].size() < rows[best].size()) best = i;
        }
        if (best == rows.size()) break;
        done[best] = true;
        ++r;
        const std::size_t pc = rows[best][0].first;
        const F pv = rows[best][0].second;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (done[i] || rows[i].empty()) continue;
            auto it = std::lower_bound(rows[i].begin(), rows[i].end(), pc,
                                       [](const auto& p, std::size_t c) { return p.first < c; });
            if (it == rows[i].end() || it->first != pc) continue;
            F s = -(it->second / pv);
            rows[i] = axpy_row(rows[i], s, rows[best]);
        }
    }
    return r;
}

inline Mat<GaussScalar> to_gauss(const Mat<Rational>& m) {
    Mat<GaussScalar> g(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) g(i, j) = GaussScalar(m(i, j));
    return g;
}

// Sylvester signature (positive, negative, zero) of a symmetric rational
// matrix, by congruence diagonalization. When every diagonal entry in the
// active block vanishes but some off-diagonal entry m(k,l) does not, adding
// row+column l to row+column k makes the pivot 2*m(k,l) != 0.
struct Signature {
    std::size_t positive = 0;
    std::size_t negative = 0;
    std::size_t zero = 0;
    friend bool operator==(const Signature&, const Signature&) = default;
};

inline Signature symmetric_signature(Mat<Rational> m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("signature of non-square matrix");
    if (m != m.transpose()) throw std::invalid_argument("signature of non-symmetric matrix");
    const std::size_t d = m.rows();
    Signature sig;
    auto swap_rc = [&](std::size_t a, std::size_t b) {
        for (std::size_t j = 0; j < d; ++j) std::swap(m(a, j), m(b, j));
        for (std::size_t i = 0; i < d; ++i) std::swap(m(i, a), m(i, b));
    };
    auto add_rc = [&](std::size_t dst, const Rational& f, std::size_t src) {
        for (std::size_t j = 0; j < d; ++j) m(dst, j) += f * m(src, j);
        for (std::size_t i = 0; i < d; ++i) m(i, dst) += f * m(i, src);
    };
    for (std::size_t k = 0; k < d; ++k) {
        if (m(k, k).is_zero()) {
            std::size_t l = k + 1;
            for (; l < d; ++l) {
                if (!m(l, l).is_zero()) {
                    swap_rc(k, l);
                    break;
                }
            }
            if (m(k, k).is_zero()) {
                for (l = k + 1; l < d; ++l) {
                    if (!m(k, l).is_zero()) {
                        add_rc(k, Rational(1), l);
                        break;
                    }
                }
            }
        }
        if (m(k, k).is_zero()) {
            ++sig.zero;
            continue;
        }
        for (std::size_t i = k + 1; i < d; ++i) {
            if (m(i, k).is_zero()) continue;
            add_rc(i, -(m(i, k) / m(k, k)), k);
        }
        if (m(k, k).sign() > 0)
            ++sig.positive;
        else
            ++sig.negative;
    }
    return sig;
}

}  // namespace freedist
