#pragma once

#include "rational.hpp"

#include <ostream>
#include <string>

namespace freedist {

/// Gaussian rational a + b*i, the exact scalar field for the complex
/// matrix representations.
class GaussScalar {
public:
    GaussScalar() = default;
    GaussScalar(Rational re) : re_(std::move(re)) {}
    GaussScalar(long n) : re_(n) {}
    GaussScalar(int n) : re_(n) {}
    GaussScalar(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

    static GaussScalar i() { return GaussScalar(Rational(0), Rational(1)); }

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    bool is_real() const { return im_.is_zero(); }

    GaussScalar conj() const { return GaussScalar(re_, -im_); }
    /// Squared modulus; rational and nonnegative.
    Rational norm() const { return re_ * re_ + im_ * im_; }

    GaussScalar operator-() const { return GaussScalar(-re_, -im_); }

    GaussScalar& operator+=(const GaussScalar& o) { re_ += o.re_; im_ += o.im_; return *this; }
    GaussScalar& operator-=(const GaussScalar& o) { re_ -= o.re_; im_ -= o.im_; return *this; }
    GaussScalar& operator*=(const GaussScalar& o) {
        Rational r = re_ * o.re_ - im_ * o.im_;
        Rational i = re_ * o.im_ + im_ * o.re_;
        re_ = r;
        im_ = i;
        return *this;
    }
    GaussScalar& operator/=(const GaussScalar& o) {
        if (o.is_zero()) throw std::domain_error("GaussScalar: division by zero");
        Rational n = o.norm();
        GaussScalar t = *this;
        t *= o.conj();
        re_ = t.re_ / n;
        im_ = t.im_ / n;
        return *this;
    }

    friend GaussScalar operator+(GaussScalar a, const GaussScalar& b) { return a += b; }
    friend GaussScalar operator-(GaussScalar a, const GaussScalar& b) { return a -= b; }
    friend GaussScalar operator*(GaussScalar a, const GaussScalar& b) { return a *= b; }
    friend GaussScalar operator/(GaussScalar a, const GaussScalar& b) { return a /= b; }

    friend bool operator==(const GaussScalar& a, const GaussScalar& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const GaussScalar& a, const GaussScalar& b) { return !(a == b); }

    GaussScalar inverse() const {
        if (is_zero()) throw std::domain_error("GaussScalar: inverse of zero");
        Rational n = norm();
        return GaussScalar(re_ / n, -im_ / n);
    }

    std::string str() const {
        if (im_.is_zero()) return re_.str();
        if (re_.is_zero()) return im_.str() + "*i";
        return re_.str() + (im_.sign() < 0 ? "" : "+") + im_.str() + "*i";
    }

    friend std::ostream& operator<<(std::ostream& os, const GaussScalar& z) { return os << z.str(); }

private:
    Rational re_;
    Rational im_;
};

}  // namespace freedist
