#pragma once

#include "bae/core/mpoly.hpp"

namespace bae {

// Multivariate fraction num/den without gcd reduction.  Used only to check
// identities, where cross-multiplication decides equality.
class MFrac {
  public:
    MFrac() = default;
    MFrac(ExactPoly n, ExactPoly d) : num_(std::move(n)), den_(std::move(d)) {
        if (den_.zero()) throw std::domain_error("fraction with zero denominator");
        normalize();
    }
    explicit MFrac(ExactPoly n) : num_(std::move(n)), den_(ExactPoly(Rat(1), num_.nvars())) {}

    const ExactPoly& num() const { return num_; }
    const ExactPoly& den() const { return den_; }
    bool zero() const { return num_.zero(); }

    friend MFrac operator+(const MFrac& a, const MFrac& b) {
        if (a.den_ == b.den_) return MFrac(a.num_ + b.num_, a.den_);
        return MFrac(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend MFrac operator-(const MFrac& a, const MFrac& b) {
        if (a.den_ == b.den_) return MFrac(a.num_ - b.num_, a.den_);
        return MFrac(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend MFrac operator*(const MFrac& a, const MFrac& b) { return MFrac(a.num_ * b.num_, a.den_ * b.den_); }
    friend MFrac operator*(const Rat& s, const MFrac& a) { return MFrac(s * a.num_, a.den_); }
    MFrac operator-() const { return MFrac(-num_, den_); }
    MFrac shift(int v, const Rat& a) const { return MFrac(num_.shift(v, a), den_.shift(v, a)); }
    MFrac substitute(int v, const Rat& a) const { return MFrac(num_.substitute(v, a), den_.substitute(v, a)); }
    MFrac derivative(int v) const {
        return MFrac(num_.derivative(v) * den_ - num_ * den_.derivative(v), den_ * den_);
    }
    friend bool equal(const MFrac& a, const MFrac& b) { return (a.num_ * b.den_ - b.num_ * a.den_).zero(); }

    template <class T> T evaluate(const std::vector<T>& p) const { return num_.evaluate(p) / den_.evaluate(p); }

  private:
    ExactPoly num_, den_;

    // Cancel the denominator when it divides the numerator exactly, and keep
    // the denominator's leading coefficient equal to one.
    void normalize() {
        if (num_.zero()) {
            den_ = ExactPoly(Rat(1), den_.nvars());
            return;
        }
        if (!den_.is_constant() && num_.size() < 400 && den_.divides(num_)) {
            num_ = num_.exact_div(den_);
            den_ = ExactPoly(Rat(1), den_.nvars());
        }
        Rat l = den_.leading().second;
        if (l != 1) {
            Rat inv = 1 / l;
            num_ = inv * num_;
            den_ = inv * den_;
        }
    }
};

} // namespace bae
