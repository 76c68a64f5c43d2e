#pragma once

#include "matrix.hpp"
#include "rational.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace freedist {

/// Block presentation of an element of so(n+1,n):
///
///   [ A   v   B  ]
///   [ w   0   v^t]      B^t = -B,  C^t = -C
///   [ C  w^t -A^t]
///
/// realized as (2n+1)x(2n+1) matrices.  This block shape preserves the
/// anti-diagonal metric with middle entry -1; the metric is only used for
/// the membership check, every algebraic operation is the plain matrix
/// commutator.
struct BlockElement {
    std::size_t n = 0;
    Mat<Rational> A;  // n x n
    Vec<Rational> v;  // n
    Mat<Rational> B;  // n x n, skew
    Vec<Rational> w;  // n
    Mat<Rational> C;  // n x n, skew

    explicit BlockElement(std::size_t n_)
        : n(n_), A(n_, n_), v(n_), B(n_, n_), w(n_), C(n_, n_) {}

    bool skew_ok() const { return B == -B.transpose() && C == -C.transpose(); }

    Mat<Rational> to_matrix() const {
        const std::size_t N = 2 * n + 1;
        Mat<Rational> m(N, N);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j) = A(i, j);
                m(n + 1 + i, n + 1 + j) = -A(j, i);
                m(i, n + 1 + j) = B(i, j);
                m(n + 1 + i, j) = C(i, j);
            }
        for (std::size_t i = 0; i < n; ++i) {
            m(i, n) = v[i];
            m(n, n + 1 + i) = v[i];
            m(n, i) = w[i];
            m(n + 1 + i, n) = w[i];
        }
        return m;
    }

    /// Reads the block slots; returns nullopt if the matrix does not have the
    /// block shape (equivalently, is not in the algebra).
    static std::optional<BlockElement> from_matrix(const Mat<Rational>& m) {
        if (m.rows() != m.cols() || m.rows() % 2 == 0) return std::nullopt;
        const std::size_t n = (m.rows() - 1) / 2;
        BlockElement e(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                e.A(i, j) = m(i, j);
                e.B(i, j) = m(i, n + 1 + j);
                e.C(i, j) = m(n + 1 + i, j);
            }
        for (std::size_t i = 0; i < n; ++i) {
            e.v[i] = m(i, n);
            e.w[i] = m(n, i);
        }
        if (!e.skew_ok()) return std::nullopt;
        if (e.to_matrix() != m) return std::nullopt;
        return e;
    }
};

/// Invariant bilinear form of the defining representation: every block
/// matrix m above satisfies m^t G + G m = 0 for this G.  Signature (n, n+1).
inline Mat<Rational> defining_form(std::size_t n) {
    Mat<Rational> G(2 * n + 1, 2 * n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        G(i, n + 1 + i) = Rational(1);
        G(n + 1 + i, i) = Rational(1);
    }
    G(n, n) = Rational(-1);
    return G;
}

/// so(n+1,n) with its |2|-grading
///   g_{-2} = C-block, g_{-1} = w-block, g_0 = A-block, g_1 = v-block, g_2 = B-block.
/// Elements are coordinate vectors of length n(2n+1) in the basis order
/// (C, w, A, v, B), lexicographic inside each block.
class GradedLieAlgebra {
public:
    using Coord = Vec<Rational>;
    using Sparse = std::vector<std::pair<std::size_t, Rational>>;

    explicit GradedLieAlgebra(std::size_t n) : n_(n) {
        if (n == 0) throw std::invalid_argument("GradedLieAlgebra: n must be positive");
        pairs_ = n * (n - 1) / 2;
        dim_ = n * (2 * n + 1);
        off_C_ = 0;
        off_w_ = pairs_;
        off_A_ = pairs_ + n;
        off_v_ = pairs_ + n + n * n;
        off_B_ = pairs_ + 2 * n + n * n;

        basis_mats_.reserve(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            Coord e(dim_);
            e[i] = Rational(1);
            basis_mats_.push_back(matrix_of(e));
        }

        structure_.assign(dim_ * dim_, {});
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j) {
                if (i == j) continue;
                Mat<Rational> br = basis_mats_[i] * basis_mats_[j] - basis_mats_[j] * basis_mats_[i];
                Coord c = coords_of(br);
                Sparse s;
                for (std::size_t k = 0; k < dim_; ++k)
                    if (!c[k].is_zero()) s.emplace_back(k, c[k]);
                structure_[i * dim_ + j] = std::move(s);
            }
    }

    std::size_t n() const { return n_; }
    std::size_t dim() const { return dim_; }
    std::size_t matrix_size() const { return 2 * n_ + 1; }
    std::size_t pair_count() const { return pairs_; }

    // Basis index layout.
    std::size_t pair_index(std::size_t k, std::size_t l) const {
        if (!(k < l && l < n_)) throw std::out_of_range("pair_index");
        return k * (2 * n_ - k - 1) / 2 + (l - k - 1);
    }
    std::pair<std::size_t, std::size_t> pair_of(std::size_t idx) const {
        for (std::size_t k = 0; k + 1 < n_; ++k) {
            std::size_t row = n_ - k - 1;
            if (idx < row) return {k, k + 1 + idx};
            idx -= row;
        }
        throw std::out_of_range("pair_of");
    }
    std::size_t c_index(std::size_t k, std::size_t l) const { return off_C_ + pair_index(k, l); }
    std::size_t w_index(std::size_t j) const { return off_w_ + j; }
    std::size_t a_index(std::size_t i, std::size_t j) const { return off_A_ + i * n_ + j; }
    std::size_t v_index(std::size_t i) const { return off_v_ + i; }
    std::size_t b_index(std::size_t k, std::size_t l) const { return off_B_ + pair_index(k, l); }

    int grade_of(std::size_t idx) const {
        if (idx < off_w_) return -2;
        if (idx < off_A_) return -1;
        if (idx < off_v_) return 0;
        if (idx < off_B_) return 1;
        if (idx < dim_) return 2;
        throw std::out_of_range("grade_of");
    }

    std::vector<std::size_t> indices_of_grade(int j) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < dim_; ++i)
            if (grade_of(i) == j) out.push_back(i);
        return out;
    }

    /// Indices of the parabolic p = g_0 + g_1 + g_2.
    std::vector<std::size_t> parabolic_indices() const {
        std::vector<std::size_t> out;
        for (std::size_t i = off_A_; i < dim_; ++i) out.push_back(i);
        return out;
    }
    /// Indices of the nilradical p_perp = g_1 + g_2.
    std::vector<std::size_t> nilradical_indices() const {
        std::vector<std::size_t> out;
        for (std::size_t i = off_v_; i < dim_; ++i) out.push_back(i);
        return out;
    }
    /// Indices of g_- = g_{-2} + g_{-1}.
    std::vector<std::size_t> minus_indices() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < off_A_; ++i) out.push_back(i);
        return out;
    }

    Mat<Rational> matrix_of(const Coord& x) const {
        if (x.size() != dim_) throw std::invalid_argument("matrix_of: wrong length");
        BlockElement e(n_);
        for (std::size_t p = 0; p < pairs_; ++p) {
            auto [k, l] = pair_of(p);
            e.C(k, l) = x[off_C_ + p];
            e.C(l, k) = -x[off_C_ + p];
            e.B(k, l) = x[off_B_ + p];
            e.B(l, k) = -x[off_B_ + p];
        }
        for (std::size_t j = 0; j < n_; ++j) {
            e.w[j] = x[off_w_ + j];
            e.v[j] = x[off_v_ + j];
        }
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) e.A(i, j) = x[off_A_ + i * n_ + j];
        return e.to_matrix();
    }

    Coord coords_of(const Mat<Rational>& m) const {
        auto e = BlockElement::from_matrix(m);
        if (!e || e->n != n_) throw std::invalid_argument("coords_of: matrix not in the algebra");
        Coord x(dim_);
        for (std::size_t p = 0; p < pairs_; ++p) {
            auto [k, l] = pair_of(p);
            x[off_C_ + p] = e->C(k, l);
            x[off_B_ + p] = e->B(k, l);
        }
        for (std::size_t j = 0; j < n_; ++j) {
            x[off_w_ + j] = e->w[j];
            x[off_v_ + j] = e->v[j];
        }
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) x[off_A_ + i * n_ + j] = e->A(i, j);
        return x;
    }

    bool is_member(const Mat<Rational>& m) const {
        auto e = BlockElement::from_matrix(m);
        return e && e->n == n_;
    }

    const Mat<Rational>& basis_matrix(std::size_t i) const { return basis_mats_[i]; }

    const Sparse& structure(std::size_t i, std::size_t j) const {
        return structure_[i * dim_ + j];
    }

    Coord bracket(const Coord& x, const Coord& y) const {
        if (x.size() != dim_ || y.size() != dim_)
            throw std::invalid_argument("bracket: dimension mismatch");
        Coord out(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            if (x[i].is_zero()) continue;
            for (std::size_t j = 0; j < dim_; ++j) {
                if (y[j].is_zero()) continue;
                for (const auto& [k, c] : structure_[i * dim_ + j]) out[k] += x[i] * y[j] * c;
            }
        }
        return out;
    }

    /// Adjoint action of x as a dim x dim matrix: column j holds [x, b_j].
    Mat<Rational> ad(const Coord& x) const {
        Mat<Rational> m(dim_, dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            if (x[i].is_zero()) continue;
            for (std::size_t j = 0; j < dim_; ++j)
                for (const auto& [k, c] : structure_[i * dim_ + j]) m(k, j) += x[i] * c;
        }
        return m;
    }

    const Mat<Rational>& killing_gram() const {
        if (!killing_) {
            Mat<Rational> K(dim_, dim_);
            // tr(ad_i ad_j) accumulated over the sparse structure constants:
            // ad_i e_j = c[i][j], so tr(ad_i ad_j) = sum_a c[j][a]_b * c[i][b]_a.
            for (std::size_t i = 0; i < dim_; ++i)
                for (std::size_t j = i; j < dim_; ++j) {
                    Rational t;
                    for (std::size_t a = 0; a < dim_; ++a)
                        for (const auto& [b, cj] : structure_[j * dim_ + a])
                            for (const auto& [a2, ci] : structure_[i * dim_ + b])
                                if (a2 == a) t += cj * ci;
                    K(i, j) = t;
                    K(j, i) = t;
                }
            killing_ = std::move(K);
        }
        return *killing_;
    }

    Rational killing(const Coord& x, const Coord& y) const {
        const Mat<Rational>& K = killing_gram();
        Rational out;
        for (std::size_t i = 0; i < dim_; ++i) {
            if (x[i].is_zero()) continue;
            for (std::size_t j = 0; j < dim_; ++j)
                if (!y[j].is_zero()) out += x[i] * K(i, j) * y[j];
        }
        return out;
    }

    /// Unique element with ad(eps) = j * id on each g_j, found as a full linear
    /// solve with a trivial-kernel check.
    const Coord& grading_element() const {
        if (!eps0_) {
            Mat<Rational> S(dim_ * dim_, dim_);
            Vec<Rational> rhs(dim_ * dim_);
            for (std::size_t j = 0; j < dim_; ++j) {
                for (std::size_t i = 0; i < dim_; ++i)
                    for (const auto& [k, c] : structure_[i * dim_ + j]) S(j * dim_ + k, i) += c;
                rhs[j * dim_ + j] = Rational(grade_of(j));
            }
            auto sol = solve(S, rhs);
            if (!sol) throw std::logic_error("grading_element: inconsistent system");
            if (!kernel_basis(S).empty())
                throw std::logic_error("grading_element: not unique");
            eps0_ = *sol;
        }
        return *eps0_;
    }

private:
    std::size_t n_, dim_, pairs_;
    std::size_t off_C_, off_w_, off_A_, off_v_, off_B_;
    std::vector<Mat<Rational>> basis_mats_;
    std::vector<Sparse> structure_;
    mutable std::optional<Mat<Rational>> killing_;
    mutable std::optional<Coord> eps0_;

public:
    std::size_t off_C() const { return off_C_; }
    std::size_t off_w() const { return off_w_; }
    std::size_t off_A() const { return off_A_; }
    std::size_t off_v() const { return off_v_; }
    std::size_t off_B() const { return off_B_; }
};

/// Spans (as coordinate unit vectors) of the graded pieces and standard subalgebras.
inline std::vector<Vec<Rational>> basis_span(const GradedLieAlgebra& g,
                                             const std::vector<std::size_t>& idx) {
    std::vector<Vec<Rational>> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(unit_vec<Rational>(g.dim(), i));
    return out;
}

/// Exhaustive Jacobi check on strict basis triples; returns a violating triple
/// if one exists.  Works on the sparse structure tables so n=5 stays fast.
inline std::optional<std::array<std::size_t, 3>> jacobi_violation(const GradedLieAlgebra& g) {
    const std::size_t N = g.dim();
    Vec<Rational> acc(N);
    std::vector<std::size_t> touched;
    auto add_term = [&](std::size_t outer, const GradedLieAlgebra::Sparse& inner) {
        for (const auto& [m, c] : inner)
            for (const auto& [k, c2] : g.structure(outer, m)) {
                if (acc[k].is_zero()) touched.push_back(k);
                acc[k] += c * c2;
            }
    };
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j)
            for (std::size_t k = j + 1; k < N; ++k) {
                add_term(i, g.structure(j, k));
                add_term(j, g.structure(k, i));
                add_term(k, g.structure(i, j));
                bool ok = true;
                for (std::size_t t : touched) {
                    if (!acc[t].is_zero()) ok = false;
                    acc[t] = Rational(0);
                }
                touched.clear();
                if (!ok) return std::array<std::size_t, 3>{i, j, k};
            }
    return std::nullopt;
}

/// Exhaustive grade additivity: [g_a, g_b] lands in grade a+b (zero if |a+b| > 2).
inline bool grade_additivity_holds(const GradedLieAlgebra& g) {
    for (std::size_t i = 0; i < g.dim(); ++i)
        for (std::size_t j = 0; j < g.dim(); ++j) {
            int target = g.grade_of(i) + g.grade_of(j);
            for (const auto& [k, c] : g.structure(i, j)) {
                (void)c;
                if (g.grade_of(k) != target) return false;
            }
        }
    return true;
}

/// Checks that p_perp = g_1 + g_2 is the free two-step nilradical:
/// the bracket identifies Lambda^2 g_1 with g_2 and g_2 is central in p_perp.
struct NilradicalReport {
    bool wedge_iso = false;
    std::size_t wedge_rank = 0;
    bool g2_central = false;
    bool ideal_in_p = false;
    bool two_step = false;
    bool ok() const { return wedge_iso && g2_central && ideal_in_p && two_step; }
};

inline NilradicalReport nilradical_check(const GradedLieAlgebra& g) {
    NilradicalReport r;
    const std::size_t n = g.n();
    std::vector<Vec<Rational>> wedge_rows;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l) {
            Vec<Rational> row(g.pair_count());
            for (const auto& [m, c] : g.structure(g.v_index(k), g.v_index(l))) {
                if (g.grade_of(m) != 2) return r;
                row[m - g.off_B()] = c;
            }
            wedge_rows.push_back(std::move(row));
        }
    r.wedge_rank = wedge_rows.empty() ? 0 : rank(Mat<Rational>::from_rows(wedge_rows));
    r.wedge_iso = (r.wedge_rank == g.pair_count());

    r.g2_central = true;
    for (std::size_t i : g.nilradical_indices())
        for (std::size_t j : g.indices_of_grade(2))
            if (!g.structure(i, j).empty()) r.g2_central = false;

    r.ideal_in_p = true;
    for (std::size_t i : g.parabolic_indices())
        for (std::size_t j : g.nilradical_indices())
            for (const auto& [k, c] : g.structure(i, j)) {
                (void)c;
                if (g.grade_of(k) < 1) r.ideal_in_p = false;
            }

    r.two_step = true;
    for (std::size_t i : g.nilradical_indices())
        for (std::size_t j : g.nilradical_indices())
            for (const auto& [k, c] : g.structure(i, j)) {
                (void)c;
                for (std::size_t l : g.nilradical_indices())
                    if (!g.structure(l, k).empty()) r.two_step = false;
            }
    return r;
}

}  // namespace freedist
