#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "bae/core/rat.hpp"

namespace bae {

// Dense univariate polynomial, coefficients stored lowest degree first with no
// trailing zeros.  K is a field (Rat or cd).
template <class K> class Poly {
  public:
    std::vector<K> c;

    Poly() = default;
    Poly(const K& a) {
        if (!is_zero(a)) c.push_back(a);
    }
    Poly(int a) : Poly(K(a)) {}
    explicit Poly(std::vector<K> v) : c(std::move(v)) { trim(); }

    static Poly X() { return Poly(std::vector<K>{K(0), K(1)}); }
    static Poly monomial(const K& a, int d) {
        std::vector<K> v(d + 1, K(0));
        v[d] = a;
        return Poly(std::move(v));
    }
    // x - r
    static Poly linear(const K& r) { return Poly(std::vector<K>{K(-r), K(1)}); }

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool zero() const { return c.empty(); }
    K operator[](int i) const { return (i >= 0 && i < static_cast<int>(c.size())) ? c[i] : K(0); }
    const K& lead() const { return c.back(); }

    void trim() {
        while (!c.empty() && is_zero(c.back())) c.pop_back();
    }

    template <class T> T eval(const T& x) const {
        T r(0);
        for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + scalar_cast<T>(*it);
        return r;
    }
    K operator()(const K& x) const { return eval<K>(x); }

    Poly& operator+=(const Poly& o) {
        if (o.c.size() > c.size()) c.resize(o.c.size(), K(0));
        for (size_t i = 0; i < o.c.size(); ++i) c[i] += o.c[i];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        if (o.c.size() > c.size()) c.resize(o.c.size(), K(0));
        for (size_t i = 0; i < o.c.size(); ++i) c[i] -= o.c[i];
        trim();
        return *this;
    }
    Poly operator-() const {
        Poly r = *this;
        for (auto& a : r.c) a = -a;
        return r;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.zero() || b.zero()) return Poly();
        std::vector<K> r(a.c.size() + b.c.size() - 1, K(0));
        for (size_t i = 0; i < a.c.size(); ++i)
            for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
        return Poly(std::move(r));
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    friend Poly operator*(const K& s, Poly p) {
        if (is_zero(s)) return Poly();
        for (auto& a : p.c) a *= s;
        return p;
    }
    friend bool operator==(const Poly& a, const Poly& b) { return a.c == b.c; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    // Euclidean division: *this = q*d + r with deg r < deg d.
    std::pair<Poly, Poly> divmod(const Poly& d) const {
        if (d.zero()) throw std::domain_error("polynomial division by zero");
        if (degree() < d.degree()) return {Poly(), *this};
        std::vector<K> r = c;
        std::vector<K> q(c.size() - d.c.size() + 1, K(0));
        K inv = K(1) / d.lead();
        for (int i = static_cast<int>(q.size()) - 1; i >= 0; --i) {
            K f = r[i + d.degree()] * inv;
            q[i] = f;
            if (is_zero(f)) continue;
            for (size_t j = 0; j < d.c.size(); ++j) r[i + j] -= f * d.c[j];
        }
        r.resize(d.c.size() - 1);
        return {Poly(std::move(q)), Poly(std::move(r))};
    }
    Poly operator/(const Poly& d) const { return divmod(d).first; }
    Poly operator%(const Poly& d) const { return divmod(d).second; }

    Poly monic() const {
        if (zero()) return *this;
        return (K(1) / lead()) * *this;
    }

    Poly derivative() const {
        if (c.size() <= 1) return Poly();
        std::vector<K> r(c.size() - 1);
        for (size_t i = 1; i < c.size(); ++i) r[i - 1] = c[i] * K(static_cast<long>(i));
        return Poly(std::move(r));
    }

    // p(x + a), by Horner in the shifted variable.
    Poly shift(const K& a) const {
        Poly r;
        Poly lin(std::vector<K>{a, K(1)});
        for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * lin + Poly(*it);
        return r;
    }

    template <class F> auto map(F f) const {
        using T = decltype(f(c[0]));
        std::vector<T> v;
        v.reserve(c.size());
        for (auto& a : c) v.push_back(f(a));
        return Poly<T>(std::move(v));
    }
};

template <class K> Poly<K> gcd(Poly<K> a, Poly<K> b) {
    while (!b.zero()) {
        auto r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

template <class K> Poly<K> pow(const Poly<K>& p, int e) {
    Poly<K> r(K(1));
    for (int i = 0; i < e; ++i) r *= p;
    return r;
}

// Inverse of a modulo m (requires gcd(a, m) = 1).
template <class K> Poly<K> inverse_mod(const Poly<K>& a, const Poly<K>& m) {
    Poly<K> r0 = m, r1 = a % m, s0, s1(K(1));
    while (!r1.zero()) {
        auto [q, r] = r0.divmod(r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        Poly<K> s = s0 - q * s1;
        s0 = std::move(s1);
        s1 = std::move(s);
    }
    if (r0.degree() != 0) throw NonGenericInput("polynomial not invertible in quotient ring");
    return ((K(1) / r0.lead()) * s0) % m;
}

using QPoly = Poly<Rat>;
using CPoly = Poly<cd>;

inline CPoly to_complex(const QPoly& p) {
    return p.map([](const Rat& a) { return to_cd(a); });
}

// binom(x, r) as a polynomial in x.
template <class K> Poly<K> binom_poly(int r) {
    Poly<K> p(K(1));
    for (int i = 0; i < r; ++i) p = (K(1) / K(i + 1)) * (p * Poly<K>::linear(K(i)));
    return p;
}

} // namespace bae
