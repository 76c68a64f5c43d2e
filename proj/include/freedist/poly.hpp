#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "freedist/matrix.hpp"
#include "freedist/rational.hpp"

namespace freedist {

// Named coordinate chart. Polynomials and vector fields sharing a chart must
// hold the same CoordSystem instance; arithmetic across distinct instances is
// rejected even if the name lists coincide.
struct CoordSystem {
    std::vector<std::string> names;
    std::map<std::string, std::size_t> index;

    static std::shared_ptr<const CoordSystem> make(std::vector<std::string> ns) {
        auto cs = std::make_shared<CoordSystem>();
        cs->names = std::move(ns);
        for (std::size_t i = 0; i < cs->names.size(); ++i) {
            auto [it, fresh] = cs->index.emplace(cs->names[i], i);
            if (!fresh) throw std::invalid_argument("duplicate coordinate name: " + cs->names[i]);
        }
        return cs;
    }

    std::size_t size() const { return names.size(); }

    std::size_t at(const std::string& name) const {
        auto it = index.find(name);
        if (it == index.end()) throw std::invalid_argument("unknown coordinate: " + name);
        return it->second;
    }
};

using CoordPtr = std::shared_ptr<const CoordSystem>;

// Sparse multivariate polynomial with Rational coefficients. Terms are keyed
// by dense exponent vectors (length = chart size) in lexicographic order, so
// iteration order and str() output are deterministic. A Poly with a null
// chart is a bare constant and combines with any chart.
class Poly {
public:
    using Expo = std::vector<unsigned>;

    Poly() = default;

    static Poly constant(const Rational& c) {
        Poly p;
        if (!c.is_zero()) p.terms_[Expo{}] = c;
        return p;
    }
    static Poly constant(long c) { return constant(Rational(c)); }

    static Poly var(const CoordPtr& sys, std::size_t idx) {
        if (!sys) throw std::invalid_argument("var requires a coordinate system");
        if (idx >= sys->size()) throw std::invalid_argument("variable index out of range");
        Poly p;
        p.sys_ = sys;
        Expo e(idx + 1, 0);
        e[idx] = 1;
        p.terms_[std::move(e)] = Rational(1);
        return p;
    }
    static Poly var(const CoordPtr& sys, const std::string& name) { return var(sys, sys->at(name)); }

    const CoordPtr& chart() const { return sys_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        if (terms_.empty()) return true;
        return terms_.size() == 1 && expo_is_zero(terms_.begin()->first);
    }

    Rational constant_value() const {
        if (terms_.empty()) return Rational(0);
        if (!is_constant()) throw std::domain_error("polynomial is not constant");
        return terms_.begin()->second;
    }

    std::size_t term_count() const { return terms_.size(); }

    unsigned total_degree() const {
        unsigned d = 0;
        for (const auto& [e, c] : terms_) {
            unsigned s = 0;
            for (unsigned x : e) s += x;
            d = std::max(d, s);
        }
        return d;
    }

    Rational coeff(const Expo& e) const {
        Expo key = e;
        trim(key);
        auto it = terms_.find(key);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    Poly operator-() const {
        Poly r = *this;
        for (auto& [e, c] : r.terms_) c = -c;
        return r;
    }

    Poly& operator+=(const Poly& o) {
        adopt_chart(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        adopt_chart(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    Poly& operator*=(const Rational& c) {
        if (c.is_zero()) {
            terms_.clear();
        } else {
            for (auto& [e, v] : terms_) v *= c;
        }
        return *this;
    }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r;
        r.sys_ = merged_chart(a, b);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) r.add_term(expo_mul(ea, eb), ca * cb);
        return r;
    }
    friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
    friend Poly operator*(const Rational& c, Poly a) { return a *= c; }

    friend bool operator==(const Poly& a, const Poly& b) {
        if (a.sys_ && b.sys_ && a.sys_ != b.sys_) return a.terms_.empty() && b.terms_.empty();
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    // Partial derivative in the idx-th chart variable.
    Poly derivative(std::size_t idx) const {
        Poly r;
        r.sys_ = sys_;
        for (const auto& [e, c] : terms_) {
            if (idx >= e.size() || e[idx] == 0) continue;
            Expo d = e;
            d[idx] -= 1;
            r.add_term(std::move(d), c * Rational(static_cast<long>(e[idx])));
        }
        return r;
    }

    Rational eval(const Vec<Rational>& point) const {
        if (sys_ && point.size() != sys_->size())
            throw std::invalid_argument("evaluation point has wrong dimension");
        Rational acc(0);
        for (const auto& [e, c] : terms_) {
            Rational t = c;
            for (std::size_t i = 0; i < e.size(); ++i)
                for (unsigned k = 0; k < e[i]; ++k) t *= point[i];
            acc += t;
        }
        return acc;
    }

    // Drops every term of total degree strictly above max_deg. Used by jet
    // arithmetic where products are computed modulo high order.
    Poly truncated(unsigned max_deg) const {
        Poly r;
        r.sys_ = sys_;
        for (const auto& [e, c] : terms_) {
            unsigned s = 0;
            for (unsigned x : e) s += x;
            if (s <= max_deg) r.terms_.emplace(e, c);
        }
        return r;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            Rational a = c;
            if (first) {
                if (a.sign() < 0) {
                    os << "-";
                    a = -a;
                }
            } else {
                os << (a.sign() < 0 ? " - " : " + ");
                if (a.sign() < 0) a = -a;
            }
            first = false;
            bool has_vars = !expo_is_zero(e);
            if (!a.is_one() || !has_vars) os << a.str();
            bool prev = !a.is_one() || !has_vars;
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (prev) os << "*";
                os << (sys_ ? sys_->names[i] : "?");
                if (e[i] > 1) os << "^" << e[i];
                prev = true;
            }
        }
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.str(); }

    const std::map<Expo, Rational>& terms() const { return terms_; }

private:
    CoordPtr sys_;
    std::map<Expo, Rational> terms_;

    static bool expo_is_zero(const Expo& e) {
        return std::all_of(e.begin(), e.end(), [](unsigned x) { return x == 0; });
    }
    static void trim(Expo& e) {
        while (!e.empty() && e.back() == 0) e.pop_back();
    }
    static Expo expo_mul(const Expo& a, const Expo& b) {
        Expo r(std::max(a.size(), b.size()), 0);
        for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
        for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
        trim(r);
        return r;
    }
    static CoordPtr merged_chart(const Poly& a, const Poly& b) {
        if (a.sys_ && b.sys_ && a.sys_ != b.sys_)
            throw std::invalid_argument("polynomials live on different coordinate systems");
        return a.sys_ ? a.sys_ : b.sys_;
    }
    void adopt_chart(const Poly& o) { sys_ = merged_chart(*this, o); }

    void add_term(Expo e, const Rational& c) {
        trim(e);
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            if (!c.is_zero()) terms_.emplace(std::move(e), c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
};

// Polynomial vector field Σ_i comp[i]·∂/∂(names[i]) on a fixed chart.
struct PolyVectorField {
    CoordPtr sys;
    std::vector<Poly> comp;

    PolyVectorField() = default;
    explicit PolyVectorField(CoordPtr s) : sys(std::move(s)), comp(sys->size()) {}

    static PolyVectorField coordinate(const CoordPtr& s, std::size_t idx) {
        PolyVectorField f(s);
        f.comp.at(idx) = Poly::constant(1);
        return f;
    }

    bool is_zero() const {
        return std::all_of(comp.begin(), comp.end(), [](const Poly& p) { return p.is_zero(); });
    }

    // Derivation applied to a function on the same chart.
    Poly apply(const Poly& f) const {
        Poly r;
        for (std::size_t i = 0; i < comp.size(); ++i) {
            if (comp[i].is_zero()) continue;
            r += comp[i] * f.derivative(i);
        }
        return r;
    }

    PolyVectorField& operator+=(const PolyVectorField& o) {
        check_chart(o);
        for (std::size_t i = 0; i < comp.size(); ++i) comp[i] += o.comp[i];
        return *this;
    }
    PolyVectorField& operator-=(const PolyVectorField& o) {
        check_chart(o);
        for (std::size_t i = 0; i < comp.size(); ++i) comp[i] -= o.comp[i];
        return *this;
    }
    PolyVectorField& operator*=(const Rational& c) {
        for (auto& p : comp) p *= c;
        return *this;
    }
    friend PolyVectorField operator+(PolyVectorField a, const PolyVectorField& b) { return a += b; }
    friend PolyVectorField operator-(PolyVectorField a, const PolyVectorField& b) { return a -= b; }
    friend PolyVectorField operator*(const Rational& c, PolyVectorField f) { return f *= c; }
    friend PolyVectorField operator*(const Poly& g, PolyVectorField f) {
        for (auto& p : f.comp) p = g * p;
        return f;
    }
    PolyVectorField operator-() const {
        PolyVectorField r = *this;
        for (auto& p : r.comp) p = -p;
        return r;
    }

    friend bool operator==(const PolyVectorField& a, const PolyVectorField& b) {
        return a.sys == b.sys && a.comp == b.comp;
    }

    // Component vector evaluated at a rational point.
    Vec<Rational> eval(const Vec<Rational>& point) const {
        Vec<Rational> r(comp.size(), Rational(0));
        for (std::size_t i = 0; i < comp.size(); ++i) r[i] = comp[i].eval(point);
        return r;
    }

    std::string str() const {
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = 0; i < comp.size(); ++i) {
            if (comp[i].is_zero()) continue;
            if (!first) os << " + ";
            first = false;
            os << "(" << comp[i].str() << ")*d/d" << sys->names[i];
        }
        return first ? "0" : os.str();
    }

private:
    void check_chart(const PolyVectorField& o) const {
        if (sys != o.sys) throw std::invalid_argument("vector fields live on different charts");
    }
};

// [F,G]^k = Σ_i (F^i ∂_i G^k − G^i ∂_i F^k).
inline PolyVectorField lie_bracket(const PolyVectorField& f, const PolyVectorField& g) {
    if (f.sys != g.sys) throw std::invalid_argument("lie_bracket: charts differ");
    PolyVectorField r(f.sys);
    for (std::size_t k = 0; k < r.comp.size(); ++k) {
        Poly acc;
        for (std::size_t i = 0; i < r.comp.size(); ++i) {
            if (!f.comp[i].is_zero()) acc += f.comp[i] * g.comp[k].derivative(i);
            if (!g.comp[i].is_zero()) acc -= g.comp[i] * f.comp[k].derivative(i);
        }
        r.comp[k] = std::move(acc);
    }
    return r;
}

}  // namespace freedist
