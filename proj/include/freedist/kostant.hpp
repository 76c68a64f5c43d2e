#pragma once

#include "graded_lie.hpp"
#include "matrix.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace freedist {

/// Chain spaces Lambda^c(p_perp) (x) g with the Lie algebra homology boundary
/// ("codifferential") going down in wedge degree and the cochain differential
/// of g_- with values in g, transported through the Killing duality
/// p_perp ~ (g_-)^*, going up.
///
/// Chain basis: (u_{a_1} ^ ... ^ u_{a_c}) (x) e_k with a_1 < ... < a_c local
/// nilradical indices and e_k running over the full algebra basis; index
/// layout is combo_rank * dim(g) + k with combos enumerated lexicographically.
class KostantComplex {
public:
    using SparseCol = std::vector<std::pair<std::size_t, Rational>>;

    explicit KostantComplex(const GradedLieAlgebra& g) : g_(&g) {
        nil_ = g.nilradical_indices();
        minus_ = g.minus_indices();
        q_ = nil_.size();

        // Dual frame: x^a in g_- with K(u_b, x^a) = delta_{ab}.
        Mat<Rational> G(q_, q_);
        for (std::size_t a = 0; a < q_; ++a)
            for (std::size_t b = 0; b < q_; ++b)
                G(a, b) = g.killing_gram()(nil_[a], minus_[b]);
        auto Ginv = inverse(G);
        if (!Ginv) throw std::logic_error("KostantComplex: Killing pairing degenerate");
        dual_.assign(q_, Vec<Rational>(g.dim()));
        for (std::size_t a = 0; a < q_; ++a)
            for (std::size_t b = 0; b < q_; ++b) dual_[a][minus_[b]] = (*Ginv)(b, a);

        // local index of a nilradical algebra index
        nil_local_.assign(g.dim(), q_);
        for (std::size_t a = 0; a < q_; ++a) nil_local_[nil_[a]] = a;

        // gamma[p][q] over local b: K(u_b, [x^p, x^q])
        gamma_.assign(q_ * q_, {});
        for (std::size_t p = 0; p < q_; ++p)
            for (std::size_t r = p + 1; r < q_; ++r) {
                Vec<Rational> br = g.bracket(dual_[p], dual_[r]);
                SparseCol s;
                for (std::size_t b = 0; b < q_; ++b) {
                    Rational c = g.killing(unit_vec<Rational>(g.dim(), nil_[b]), br);
                    if (!c.is_zero()) s.emplace_back(b, c);
                }
                gamma_[p * q_ + r] = s;
                for (auto& [b, c] : s) c = -c;
                gamma_[r * q_ + p] = std::move(s);
            }

        // module action of the dual frame: {x^a, e_k} in g coordinates
        dual_act_.assign(q_ * g.dim(), {});
        for (std::size_t a = 0; a < q_; ++a) {
            for (std::size_t k = 0; k < g.dim(); ++k) {
                SparseCol s;
                Vec<Rational> br = g.bracket(dual_[a], unit_vec<Rational>(g.dim(), k));
                for (std::size_t i = 0; i < g.dim(); ++i)
                    if (!br[i].is_zero()) s.emplace_back(i, br[i]);
                dual_act_[a * g.dim() + k] = std::move(s);
            }
        }
    }

    const GradedLieAlgebra& algebra() const { return *g_; }
    std::size_t q() const { return q_; }
    std::size_t nil_algebra_index(std::size_t a) const { return nil_[a]; }
    int nil_grade(std::size_t a) const { return g_->grade_of(nil_[a]); }
    const Vec<Rational>& dual_minus(std::size_t a) const { return dual_[a]; }

    const std::vector<std::vector<std::size_t>>& combos(std::size_t c) const {
        while (combos_.size() <= c) {
            std::size_t cc = combos_.size();
            std::vector<std::vector<std::size_t>> out;
            std::vector<std::size_t> cur;
            build_combos(cc, 0, cur, out);
            combos_.push_back(std::move(out));
        }
        return combos_[c];
    }

    std::size_t combo_rank(std::size_t c, const std::vector<std::size_t>& s) const {
        const auto& all = combos(c);
        auto it = std::lower_bound(all.begin(), all.end(), s);
        if (it == all.end() || *it != s) throw std::logic_error("combo_rank: not found");
        return static_cast<std::size_t>(it - all.begin());
    }

    std::size_t chain_dim(std::size_t c) const { return combos(c).size() * g_->dim(); }

    /// Homogeneity: sum of wedge-slot grades plus the grade of the g-slot.
    int homogeneity(std::size_t c, std::size_t idx) const {
        const auto& cs = combos(c)[idx / g_->dim()];
        int h = g_->grade_of(idx % g_->dim());
        for (std::size_t a : cs) h += nil_grade(a);
        return h;
    }

    /// Wedge-grade pattern (sorted grades of the wedge slots) and g-grade.
    std::pair<std::vector<int>, int> block_of(std::size_t c, std::size_t idx) const {
        const auto& cs = combos(c)[idx / g_->dim()];
        std::vector<int> pat;
        for (std::size_t a : cs) pat.push_back(nil_grade(a));
        std::sort(pat.begin(), pat.end());
        return {pat, g_->grade_of(idx % g_->dim())};
    }

    /// Column of the boundary map Lambda^c (x) g -> Lambda^{c-1} (x) g:
    ///   sum_{j<k} (-1)^{j+k} ({u_j,u_k} ^ rest) (x) v + sum_j (-1)^j rest (x) {u_j, v}
    /// with 1-based slot indices.
    SparseCol codiff_column(std::size_t c, std::size_t col) const {
        if (c < 1) throw std::invalid_argument("codiff_column: c must be >= 1");
        const std::size_t N = g_->dim();
        const auto& S = combos(c)[col / N];
        const std::size_t k = col % N;
        std::map<std::size_t, Rational> acc;

        // bracket terms
        for (std::size_t j = 0; j < c; ++j)
            for (std::size_t l = j + 1; l < c; ++l) {
                int sgn_jl = ((j + 1 + l + 1) % 2 == 0) ? 1 : -1;
                std::vector<std::size_t> rest;
                for (std::size_t t = 0; t < c; ++t)
                    if (t != j && t != l) rest.push_back(S[t]);
                for (const auto& [gi, coef] : g_->structure(nil_[S[j]], nil_[S[l]])) {
                    std::size_t b = nil_local_[gi];
                    if (b == q_) throw std::logic_error("codiff: bracket left p_perp");
                    auto ins = insert_sorted(rest, b);
                    if (!ins) continue;
                    Rational term = Rational(sgn_jl * ins->second) * coef;
                    acc[combo_rank(c - 2 + 1, ins->first) * N + k] += term;
                }
            }

        // module terms
        for (std::size_t j = 0; j < c; ++j) {
            int sgn = ((j + 1) % 2 == 0) ? 1 : -1;
            std::vector<std::size_t> rest;
            for (std::size_t t = 0; t < c; ++t)
                if (t != j) rest.push_back(S[t]);
            std::size_t base = combo_rank(c - 1, rest) * N;
            for (const auto& [gi, coef] : g_->structure(nil_[S[j]], k))
                acc[base + gi] += Rational(sgn) * coef;
        }
        return prune(acc);
    }

    /// Column of the transported cochain differential Lambda^c (x) g -> Lambda^{c+1} (x) g.
    /// On the dual side (0-based slots):
    ///   (d phi)(x_0..x_c) = sum_i (-1)^i {x_i, phi(..x̂_i..)} + sum_{i<j} (-1)^{i+j} phi([x_i,x_j], ..x̂_i x̂_j..)
    SparseCol diff_column(std::size_t c, std::size_t col) const {
        const std::size_t N = g_->dim();
        const auto& S = combos(c)[col / N];
        const std::size_t k = col % N;
        std::map<std::size_t, Rational> acc;

        // module part: insert a new slot a (not in S); its 0-based position in
        // the enlarged combo supplies the sign.
        for (std::size_t a = 0; a < q_; ++a) {
            auto ins = insert_sorted(S, a);
            if (!ins) continue;
            std::size_t pos = 0;
            while (ins->first[pos] != a) ++pos;
            int sgn = (pos % 2 == 0) ? 1 : -1;
            std::size_t base = combo_rank(c + 1, ins->first) * N;
            for (const auto& [gi, coef] : dual_act_[a * N + k])
                acc[base + gi] += Rational(sgn) * coef;
        }

        // bracket part: pick b in S; the dual-frame bracket [x^p, x^r] feeds
        // slot b; T = (S minus b) plus {p, r}.
        for (std::size_t bi = 0; bi < c; ++bi) {
            std::size_t b = S[bi];
            int sgn_b = (bi % 2 == 0) ? 1 : -1;  // move b to front of phi's argument list
            std::vector<std::size_t> rest;
            for (std::size_t t = 0; t < c; ++t)
                if (t != bi) rest.push_back(S[t]);
            for (std::size_t p = 0; p < q_; ++p) {
                if (std::binary_search(rest.begin(), rest.end(), p)) continue;
                for (std::size_t r = p + 1; r < q_; ++r) {
                    if (std::binary_search(rest.begin(), rest.end(), r)) continue;
                    Rational gpr;
                    for (const auto& [bb, co] : gamma_[p * q_ + r])
                        if (bb == b) gpr = co;
                    if (gpr.is_zero()) continue;
                    auto ins1 = insert_sorted(rest, p);
                    auto ins2 = insert_sorted(ins1->first, r);
                    const auto& T = ins2->first;
                    std::size_t ip = 0, ir = 0;
                    while (T[ip] != p) ++ip;
                    while (T[ir] != r) ++ir;
                    int sgn = ((ip + ir) % 2 == 0) ? 1 : -1;
                    acc[combo_rank(c + 1, T) * N + k] += Rational(sgn * sgn_b) * gpr;
                }
            }
        }
        return prune(acc);
    }

    Mat<Rational> codifferential_matrix(std::size_t c) const {
        Mat<Rational> m(chain_dim(c - 1), chain_dim(c));
        for (std::size_t col = 0; col < chain_dim(c); ++col)
            for (const auto& [r, v] : codiff_column(c, col)) m(r, col) = v;
        return m;
    }

    Mat<Rational> differential_matrix(std::size_t c) const {
        Mat<Rational> m(chain_dim(c + 1), chain_dim(c));
        for (std::size_t col = 0; col < chain_dim(c); ++col)
            for (const auto& [r, v] : diff_column(c, col)) m(r, col) = v;
        return m;
    }

private:
    static SparseCol prune(const std::map<std::size_t, Rational>& acc) {
        SparseCol out;
        for (const auto& [i, v] : acc)
            if (!v.is_zero()) out.emplace_back(i, v);
        return out;
    }

    /// Sorted insert of value a; nullopt if already present; second = sign
    /// (-1)^{position of a in the result}.
    static std::optional<std::pair<std::vector<std::size_t>, int>> insert_sorted(
        const std::vector<std::size_t>& s, std::size_t a) {
        auto it = std::lower_bound(s.begin(), s.end(), a);
        if (it != s.end() && *it == a) return std::nullopt;
        std::vector<std::size_t> out(s.begin(), it);
        std::size_t pos = out.size();
        out.push_back(a);
        out.insert(out.end(), it, s.end());
        return std::make_pair(std::move(out), pos % 2 == 0 ? 1 : -1);
    }

    void build_combos(std::size_t c, std::size_t start, std::vector<std::size_t>& cur,
                      std::vector<std::vector<std::size_t>>& out) const {
        if (cur.size() == c) {
            out.push_back(cur);
            return;
        }
        for (std::size_t a = start; a + (c - cur.size()) <= q_; ++a) {
            cur.push_back(a);
            build_combos(c, a + 1, cur, out);
            cur.pop_back();
        }
    }

    const GradedLieAlgebra* g_;
    std::vector<std::size_t> nil_, minus_, nil_local_;
    std::size_t q_;
    std::vector<Vec<Rational>> dual_;
    std::vector<SparseCol> gamma_;
    std::vector<SparseCol> dual_act_;
    mutable std::vector<std::vector<std::vector<std::size_t>>> combos_;
};

/// Degree-2 homology ker(codiff_2)/im(codiff_3), graded by homogeneity, with
/// block support recorded as triples (i, j, k): a class has a representative
/// with a component in (g_i ^ g_j) (x) g_k.
struct HomologyReport {
    std::map<int, std::size_t> dims_by_homogeneity;
    std::vector<std::array<int, 3>> block_support;
    std::size_t total_dim() const {
        std::size_t t = 0;
        for (const auto& [h, d] : dims_by_homogeneity) t += d;
        return t;
    }
    bool has_block(int i, int j, int k) const {
        return std::find(block_support.begin(), block_support.end(),
                         std::array<int, 3>{i, j, k}) != block_support.end();
    }
};

inline HomologyReport homology2(const KostantComplex& kc) {
    HomologyReport rep;
    const std::size_t d1 = kc.chain_dim(1), d2 = kc.chain_dim(2), d3 = kc.chain_dim(3);

    std::map<int, std::vector<std::size_t>> h1, h2, h3;
    for (std::size_t i = 0; i < d1; ++i) h1[kc.homogeneity(1, i)].push_back(i);
    for (std::size_t i = 0; i < d2; ++i) h2[kc.homogeneity(2, i)].push_back(i);
    for (std::size_t i = 0; i < d3; ++i) h3[kc.homogeneity(3, i)].push_back(i);

    for (const auto& [h, cols2] : h2) {
        // ranks via sparse elimination (column space has the same rank as the
        // columns viewed as rows); kernels per block via small dense solves
        std::map<std::size_t, std::size_t> row1;
        if (h1.count(h))
            for (std::size_t i = 0; i < h1[h].size(); ++i) row1[h1[h][i]] = i;

        std::vector<KostantComplex::SparseCol> c2cols(cols2.size());
        for (std::size_t j = 0; j < cols2.size(); ++j) c2cols[j] = kc.codiff_column(2, cols2[j]);
        std::size_t r2 = sparse_rank(c2cols);

        std::vector<KostantComplex::SparseCol> c3cols;
        if (h3.count(h))
            for (std::size_t c : h3.at(h)) c3cols.push_back(kc.codiff_column(3, c));
        std::size_t im_rank = sparse_rank(c3cols);

        std::size_t ker_dim = cols2.size() - r2;
        if (ker_dim < im_rank) throw std::logic_error("homology2: im not inside ker");
        std::size_t hdim = ker_dim - im_rank;
        if (hdim == 0) continue;
        rep.dims_by_homogeneity[h] = hdim;

        // block support inside this homogeneity
        std::map<std::pair<std::vector<int>, int>, std::vector<std::size_t>> blocks;
        for (std::size_t j = 0; j < cols2.size(); ++j) blocks[kc.block_of(2, cols2[j])].push_back(j);
        for (const auto& [key, bcols] : blocks) {
            Mat<Rational> Mb(row1.size(), bcols.size());
            for (std::size_t j = 0; j < bcols.size(); ++j)
                for (const auto& [r, v] : c2cols[bcols[j]]) Mb(row1.at(r), j) = v;
            auto kerb = kernel_basis(Mb);
            if (kerb.empty()) continue;
            auto ext = c3cols;
            for (const auto& kv : kerb) {
                KostantComplex::SparseCol full;
                for (std::size_t j = 0; j < bcols.size(); ++j)
                    if (!kv[j].is_zero()) full.emplace_back(cols2[bcols[j]], kv[j]);
                std::sort(full.begin(), full.end());
                ext.push_back(std::move(full));
            }
            if (sparse_rank(std::move(ext)) > im_rank)
                rep.block_support.push_back({key.first[0], key.first[1], key.second});
        }
    }
    std::sort(rep.block_support.begin(), rep.block_support.end());
    return rep;
}

/// Homology dimensions only, via sparse ranks; usable at n = 5 where the
/// degree-3 chain space has ~25k dimensions.
inline std::map<int, std::size_t> homology2_dims_sparse(const KostantComplex& kc) {
    std::map<int, std::size_t> out;
    const std::size_t d2 = kc.chain_dim(2), d3 = kc.chain_dim(3);
    std::map<int, std::vector<std::size_t>> h2, h3;
    for (std::size_t i = 0; i < d2; ++i) h2[kc.homogeneity(2, i)].push_back(i);
    for (std::size_t i = 0; i < d3; ++i) h3[kc.homogeneity(3, i)].push_back(i);

    for (const auto& [h, cols2] : h2) {
        // rank of codiff_2 block via its columns as sparse rows (rank is
        // transpose-invariant)
        std::vector<std::vector<std::pair<std::size_t, Rational>>> rows2;
        for (std::size_t c : cols2) rows2.push_back(kc.codiff_column(2, c));
        std::size_t r2 = sparse_rank(std::move(rows2));

        std::size_t r3 = 0;
        if (h3.count(h)) {
            std::vector<std::vector<std::pair<std::size_t, Rational>>> rows3;
            for (std::size_t c : h3.at(h)) rows3.push_back(kc.codiff_column(3, c));
            r3 = sparse_rank(std::move(rows3));
        }
        if (cols2.size() < r2 + r3) throw std::logic_error("homology2_dims: im not inside ker");
        std::size_t hdim = cols2.size() - r2 - r3;
        if (hdim > 0) out[h] = hdim;
    }
    return out;
}

/// Lowest homogeneity carrying a nonzero coefficient.
inline int minimal_homogeneity(const KostantComplex& kc, std::size_t c,
                               const Vec<Rational>& chain) {
    if (chain.size() != kc.chain_dim(c)) throw std::invalid_argument("minimal_homogeneity: size");
    std::optional<int> best;
    for (std::size_t i = 0; i < chain.size(); ++i)
        if (!chain[i].is_zero()) {
            int h = kc.homogeneity(c, i);
            if (!best || h < *best) best = h;
        }
    if (!best) throw std::invalid_argument("minimal_homogeneity: zero chain");
    return *best;
}

}  // namespace freedist
