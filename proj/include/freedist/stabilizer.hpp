#pragma once

#include "matrix.hpp"

#include <bit>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace freedist {

/// One named verdict inside a report; witness is empty exactly on pass.
struct CheckItem {
    std::string id;
    bool pass = false;
    std::string witness;
};

struct CheckReport {
    std::vector<CheckItem> items;

    void add(std::string id, bool pass, std::string witness = "") {
        if (pass) witness.clear();
        items.push_back(CheckItem{std::move(id), pass, std::move(witness)});
    }

    bool all_pass() const {
        for (const auto& it : items)
            if (!it.pass) return false;
        return true;
    }

    const CheckItem* find(const std::string& id) const {
        for (const auto& it : items)
            if (it.id == id) return &it;
        return nullptr;
    }
};

/// Alternating k-form on Q^d.  Values are stored on strictly increasing
/// index tuples; evaluation at arbitrary tuples sorts and tracks the sign.
class AlternatingForm {
public:
    AlternatingForm(std::size_t dim, std::size_t degree) : d_(dim), k_(degree) {
        if (degree == 0 || degree > dim)
            throw std::invalid_argument("AlternatingForm: degree must be in [1, dim]");
        std::vector<std::size_t> t(k_);
        for (std::size_t i = 0; i < k_; ++i) t[i] = i;
        for (;;) {
            tuples_.push_back(t);
            // Advance to the next increasing tuple, rightmost slot first.
            std::size_t p = k_;
            while (p > 0) {
                --p;
                if (t[p] + (k_ - p) < d_) break;
                if (p == 0) { p = k_; break; }
            }
            if (p == k_) break;
            ++t[p];
            for (std::size_t q = p + 1; q < k_; ++q) t[q] = t[q - 1] + 1;
        }
        vals_.assign(tuples_.size(), Rational(0));
    }

    std::size_t dim() const { return d_; }
    std::size_t degree() const { return k_; }
    const std::vector<std::vector<std::size_t>>& tuples() const { return tuples_; }

    const Rational& slot(std::size_t t) const { return vals_.at(t); }

    void set(const std::vector<std::size_t>& increasing, Rational v) {
        vals_.at(position(increasing)) = std::move(v);
    }

    /// Value on an arbitrary index tuple; zero on repeats.
    Rational value(std::vector<std::size_t> idx) const {
        if (idx.size() != k_) throw std::invalid_argument("AlternatingForm: arity mismatch");
        int sign = 1;
        for (std::size_t i = 1; i < idx.size(); ++i)
            for (std::size_t j = i; j > 0 && idx[j] < idx[j - 1]; --j) {
                std::swap(idx[j], idx[j - 1]);
                sign = -sign;
            }
        for (std::size_t i = 1; i < idx.size(); ++i)
            if (idx[i] == idx[i - 1]) return Rational(0);
        const Rational& v = vals_[position(idx)];
        return sign > 0 ? v : -v;
    }

    bool is_zero() const {
        for (const auto& v : vals_)
            if (!v.is_zero()) return false;
        return true;
    }

    friend bool operator==(const AlternatingForm& a, const AlternatingForm& b) {
        return a.d_ == b.d_ && a.k_ == b.k_ && a.vals_ == b.vals_;
    }
    friend bool operator!=(const AlternatingForm& a, const AlternatingForm& b) { return !(a == b); }

private:
    std::size_t position(const std::vector<std::size_t>& inc) const {
        for (std::size_t t = 0; t < tuples_.size(); ++t)
            if (tuples_[t] == inc) return t;
        throw std::invalid_argument("AlternatingForm: not an increasing tuple in range");
    }

    std::size_t d_;
    std::size_t k_;
    std::vector<std::vector<std::size_t>> tuples_;
    std::vector<Rational> vals_;
};

/// Slotwise derivative (m . T)(X_1, ..., X_k) = sum_p T(X_1, ..., m X_p, ..., X_k).
/// Its kernel over a matrix algebra is the infinitesimal stabilizer of T.
inline AlternatingForm form_derivative(const AlternatingForm& T, const Mat<Rational>& m) {
    if (m.rows() != T.dim() || m.cols() != T.dim())
        throw std::invalid_argument("form_derivative: matrix size mismatch");
    AlternatingForm S(T.dim(), T.degree());
    for (std::size_t t = 0; t < T.tuples().size(); ++t) {
        const auto& tup = T.tuples()[t];
        Rational acc(0);
        for (std::size_t p = 0; p < tup.size(); ++p) {
            std::vector<std::size_t> probe = tup;
            for (std::size_t j = 0; j < T.dim(); ++j) {
                if (m(j, tup[p]).is_zero()) continue;
                probe[p] = j;
                acc += m(j, tup[p]) * T.value(probe);
            }
            probe[p] = tup[p];
        }
        S.set(tup, acc);
    }
    return S;
}

/// Shuffle wedge in the determinant convention: no factorial division, so
/// (e1* ^ e2*)(e1, e2) = 1 for 1-forms.
inline AlternatingForm wedge(const AlternatingForm& A, const AlternatingForm& B) {
    if (A.dim() != B.dim()) throw std::invalid_argument("wedge: dimension mismatch");
    const std::size_t k = A.degree(), l = B.degree(), n = k + l;
    AlternatingForm W(A.dim(), n);
    for (const auto& tup : W.tuples()) {
        Rational acc(0);
        // Subsets of positions of size k, as bitmasks.
        for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
            if (static_cast<std::size_t>(std::popcount(static_cast<unsigned long long>(mask))) != k) continue;
            std::vector<std::size_t> left, right;
            for (std::size_t p = 0; p < n; ++p)
                ((mask >> p) & 1 ? left : right).push_back(tup[p]);
            // Sign of the shuffle: inversions between a left position and an
            // earlier right position.
            int inv = 0;
            std::size_t seen_right = 0;
            for (std::size_t p = 0; p < n; ++p) {
                if ((mask >> p) & 1)
                    inv += static_cast<int>(seen_right);
                else
                    ++seen_right;
            }
            Rational term = A.value(left) * B.value(right);
            acc += (inv % 2 == 0) ? term : -term;
        }
        W.set(tup, acc);
    }
    return W;
}

inline Vec<Rational> vec_of_matrix(const Mat<Rational>& m) {
    Vec<Rational> v;
    v.reserve(m.rows() * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
    return v;
}

template <class F>
Mat<F> commutator(const Mat<F>& a, const Mat<F>& b) {
    return a * b - b * a;
}

/// Basis of the orthogonal algebra { m : m^t G + G m = 0 } of a bilinear form.
inline std::vector<Mat<Rational>> orthogonal_algebra_basis(const Mat<Rational>& G) {
    if (G.rows() != G.cols()) throw std::invalid_argument("orthogonal_algebra_basis: square form required");
    const std::size_t d = G.rows();
    Mat<Rational> sys(d * d, d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t p = 0; p < d; ++p) {
                // (m^t G)_{ij} picks m_{p i}, (G m)_{ij} picks m_{p j}.
                sys(i * d + j, p * d + i) += G(p, j);
                sys(i * d + j, p * d + j) += G(i, p);
            }
    std::vector<Mat<Rational>> out;
    for (const auto& x : kernel_basis(sys)) {
        Mat<Rational> m(d, d);
        for (std::size_t p = 0; p < d; ++p)
            for (std::size_t q = 0; q < d; ++q) m(p, q) = x[p * d + q];
        out.push_back(std::move(m));
    }
    return out;
}

inline std::vector<Mat<Rational>> gl_basis(std::size_t d) {
    std::vector<Mat<Rational>> out;
    out.reserve(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            Mat<Rational> m(d, d);
            m(i, j) = Rational(1);
            out.push_back(std::move(m));
        }
    return out;
}

/// Infinitesimal stabilizer of an alternating form inside a matrix algebra
/// given by a basis.  Generators solve the exact linear annihilator system.
struct StabilizerAlgebra {
    std::vector<Mat<Rational>> ambient;
    std::vector<Mat<Rational>> generators;
    bool bracket_closed = false;
};

namespace detail {

/// Common tail: solve the annihilator system (one column per ambient
/// element), materialize generators, verify bracket closure.
inline StabilizerAlgebra annihilator_from_columns(const Mat<Rational>& sys,
                                                  std::vector<Mat<Rational>> ambient) {
    StabilizerAlgebra out;
    out.ambient = std::move(ambient);
    for (const auto& coef : kernel_basis(sys)) {
        Mat<Rational> m(out.ambient[0].rows(), out.ambient[0].cols());
        for (std::size_t c = 0; c < coef.size(); ++c)
            if (!coef[c].is_zero()) m += coef[c] * out.ambient[c];
        out.generators.push_back(std::move(m));
    }
    std::vector<Vec<Rational>> span;
    for (const auto& g : out.generators) span.push_back(vec_of_matrix(g));
    out.bracket_closed = true;
    for (std::size_t i = 0; i < out.generators.size() && out.bracket_closed; ++i)
        for (std::size_t j = i + 1; j < out.generators.size(); ++j) {
            Vec<Rational> c = vec_of_matrix(commutator(out.generators[i], out.generators[j]));
            if (vec_is_zero(c)) continue;
            if (!span_contains(span, c)) {
                out.bracket_closed = false;
                break;
            }
        }
    return out;
}

}  // namespace detail

inline StabilizerAlgebra stabilizer_algebra(const AlternatingForm& T,
                                            std::vector<Mat<Rational>> ambient) {
    if (ambient.empty()) {
        StabilizerAlgebra out;
        out.bracket_closed = true;
        return out;
    }
    const std::size_t rows = T.tuples().size();
    Mat<Rational> sys(rows, ambient.size());
    for (std::size_t c = 0; c < ambient.size(); ++c) {
        AlternatingForm der = form_derivative(T, ambient[c]);
        for (std::size_t r = 0; r < rows; ++r) sys(r, c) = der.slot(r);
    }
    return detail::annihilator_from_columns(sys, std::move(ambient));
}

/// Stabilizer of a bilinear form: kernel of m -> m^t G + G m over the ambient.
inline StabilizerAlgebra stabilizer_algebra(const Mat<Rational>& G,
                                            std::vector<Mat<Rational>> ambient) {
    if (ambient.empty()) {
        StabilizerAlgebra out;
        out.bracket_closed = true;
        return out;
    }
    const std::size_t d = G.rows();
    Mat<Rational> sys(d * d, ambient.size());
    for (std::size_t c = 0; c < ambient.size(); ++c) {
        Mat<Rational> der = ambient[c].transpose() * G + G * ambient[c];
        for (std::size_t r = 0; r < d * d; ++r) sys(r, c) = der(r / d, r % d);
    }
    return detail::annihilator_from_columns(sys, std::move(ambient));
}

}  // namespace freedist
