#pragma once

#include <string>

#include "bae/core/poly.hpp"

namespace bae {

// Rational function num/den in one variable over a field, kept reduced with
// a monic denominator.
template <class K> class RatFunc {
  public:
    RatFunc() : num_(), den_(K(1)) {}
    RatFunc(const K& a) : num_(a), den_(K(1)) {}
    RatFunc(int a) : num_(K(a)), den_(K(1)) {}
    RatFunc(Poly<K> n) : num_(std::move(n)), den_(K(1)) {}
    RatFunc(Poly<K> n, Poly<K> d) : num_(std::move(n)), den_(std::move(d)) {
        if (den_.zero()) throw std::domain_error("rational function with zero denominator");
        reduce();
    }

    const Poly<K>& num() const { return num_; }
    const Poly<K>& den() const { return den_; }
    bool zero() const { return num_.zero(); }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
        return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
        if (a.den_ == b.den_) return RatFunc(a.num_ - b.num_, a.den_);
        return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.zero()) throw std::domain_error("division by zero rational function");
        return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
    }
    RatFunc operator-() const { return RatFunc(-num_, den_, true); }
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

    RatFunc shift(const K& a) const { return RatFunc(num_.shift(a), den_.shift(a), true); }
    template <class T> T eval(const T& x) const { return num_.template eval<T>(x) / den_.template eval<T>(x); }
    bool is_polynomial() const { return den_.degree() == 0; }
    bool is_constant() const { return den_.degree() == 0 && num_.degree() <= 0; }

  private:
    Poly<K> num_, den_;

    RatFunc(Poly<K> n, Poly<K> d, bool) : num_(std::move(n)), den_(std::move(d)) {}

    void reduce() {
        if (num_.zero()) {
            den_ = Poly<K>(K(1));
            return;
        }
        Poly<K> g = gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = num_ / g;
            den_ = den_ / g;
        }
        K l = den_.lead();
        if (l != K(1)) {
            K inv = K(1) / l;
            num_ = inv * num_;
            den_ = inv * den_;
        }
    }
};

template <class K> bool is_zero(const RatFunc<K>& f) { return f.zero(); }

using QRatFunc = RatFunc<Rat>;

} // namespace bae
