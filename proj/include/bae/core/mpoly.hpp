#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bae/core/poly.hpp"

namespace bae {

// Sparse multivariate polynomial over Rat in at most eight variables.
// Exponent vectors are packed into one 64-bit key, eight bits per variable,
// variable 0 in the most significant byte, so comparing keys is lex order.
// By convention variable 0 is x and variables 1..M are the times t_1..t_M.
class ExactPoly {
  public:
    static constexpr int kMaxVars = 8;
    static constexpr int kMaxExp = 255;
    using Key = std::uint64_t;
    using Term = std::pair<Key, Rat>;

    ExactPoly() = default;
    explicit ExactPoly(int nvars) : nvars_(nvars) { check_nvars(); }
    ExactPoly(const Rat& a, int nvars) : nvars_(nvars) {
        check_nvars();
        if (!is_zero(a)) t_.emplace_back(0, a);
    }

    static ExactPoly var(int i, int nvars) {
        ExactPoly p(nvars);
        p.t_.emplace_back(unit(i), Rat(1));
        return p;
    }
    static ExactPoly monomial(const Rat& a, const std::vector<int>& e, int nvars) {
        ExactPoly p(nvars);
        if (!is_zero(a)) p.t_.emplace_back(pack(e), a);
        return p;
    }
    static ExactPoly from_univariate(const QPoly& q, int v, int nvars) {
        ExactPoly p(nvars);
        for (int d = 0; d <= q.degree(); ++d)
            if (!is_zero(q.c[d])) p.t_.emplace_back(unit(v) * static_cast<Key>(d), q.c[d]);
        std::sort(p.t_.begin(), p.t_.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
        return p;
    }

    int nvars() const { return nvars_; }
    bool zero() const { return t_.empty(); }
    const std::vector<Term>& terms() const { return t_; }
    size_t size() const { return t_.size(); }

    static int exponent(Key k, int v) { return static_cast<int>((k >> shift_of(v)) & 0xff); }
    static Key unit(int v) { return Key(1) << shift_of(v); }
    static Key pack(const std::vector<int>& e) {
        Key k = 0;
        for (size_t v = 0; v < e.size(); ++v) {
            if (e[v] < 0 || e[v] > kMaxExp) throw std::overflow_error("exponent out of range");
            k |= static_cast<Key>(e[v]) << shift_of(static_cast<int>(v));
        }
        return k;
    }
    std::vector<int> exponents(Key k) const {
        std::vector<int> e(nvars_);
        for (int v = 0; v < nvars_; ++v) e[v] = exponent(k, v);
        return e;
    }

    int degree_in(int v) const {
        int d = zero() ? -1 : 0;
        for (auto& [k, c] : t_) d = std::max(d, exponent(k, v));
        return d;
    }
    int total_degree() const {
        int d = zero() ? -1 : 0;
        for (auto& [k, c] : t_) {
            int s = 0;
            for (int v = 0; v < kMaxVars; ++v) s += exponent(k, v);
            d = std::max(d, s);
        }
        return d;
    }
    Rat coeff(const std::vector<int>& e) const {
        Key k = pack(e);
        auto it = std::lower_bound(t_.begin(), t_.end(), k, [](const Term& a, Key b) { return a.first < b; });
        return (it != t_.end() && it->first == k) ? it->second : Rat(0);
    }
    Rat constant_term() const { return (!t_.empty() && t_.front().first == 0) ? t_.front().second : Rat(0); }
    bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_[0].first == 0); }
    const Term& leading() const { return t_.back(); }

    ExactPoly operator-() const {
        ExactPoly r = *this;
        for (auto& [k, c] : r.t_) c = -c;
        return r;
    }
    friend ExactPoly operator+(const ExactPoly& a, const ExactPoly& b) { return combine(a, b, false); }
    friend ExactPoly operator-(const ExactPoly& a, const ExactPoly& b) { return combine(a, b, true); }
    ExactPoly& operator+=(const ExactPoly& o) { return *this = *this + o; }
    ExactPoly& operator-=(const ExactPoly& o) { return *this = *this - o; }

    friend ExactPoly operator*(const ExactPoly& a, const ExactPoly& b) {
        ExactPoly r(std::max(a.nvars_, b.nvars_));
        if (a.zero() || b.zero()) return r;
        for (int v = 0; v < r.nvars_; ++v)
            if (a.degree_in(v) + b.degree_in(v) > kMaxExp) throw std::overflow_error("exponent overflow");
        if (b.t_.size() == 1) {
            r.t_ = a.t_;
            for (auto& [k, c] : r.t_) {
                k += b.t_[0].first;
                c *= b.t_[0].second;
            }
            return r;
        }
        std::vector<Term> prod;
        prod.reserve(a.t_.size() * b.t_.size());
        for (auto& [ka, ca] : a.t_)
            for (auto& [kb, cb] : b.t_) prod.emplace_back(ka + kb, ca * cb);
        std::sort(prod.begin(), prod.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
        for (auto& term : prod) {
            if (!r.t_.empty() && r.t_.back().first == term.first)
                r.t_.back().second += term.second;
            else {
                if (!r.t_.empty() && is_zero(r.t_.back().second)) r.t_.pop_back();
                r.t_.push_back(std::move(term));
            }
        }
        if (!r.t_.empty() && is_zero(r.t_.back().second)) r.t_.pop_back();
        return r;
    }
    ExactPoly& operator*=(const ExactPoly& o) { return *this = *this * o; }
    friend ExactPoly operator*(const Rat& s, ExactPoly p) {
        if (is_zero(s)) return ExactPoly(p.nvars_);
        for (auto& [k, c] : p.t_) c *= s;
        return p;
    }
    friend bool operator==(const ExactPoly& a, const ExactPoly& b) { return a.t_ == b.t_; }
    friend bool operator!=(const ExactPoly& a, const ExactPoly& b) { return !(a == b); }

    ExactPoly pow(int e) const {
        ExactPoly r(Rat(1), nvars_);
        for (int i = 0; i < e; ++i) r *= *this;
        return r;
    }

    // Coefficient of var^d, as a polynomial in the remaining variables.
    ExactPoly coeff_in(int v, int d) const {
        ExactPoly r(nvars_);
        for (auto& [k, c] : t_)
            if (exponent(k, v) == d) r.t_.emplace_back(k - unit(v) * static_cast<Key>(d), c);
        r.sort();
        return r;
    }
    std::vector<ExactPoly> coefficients_in(int v) const {
        int d = degree_in(v);
        std::vector<ExactPoly> out(std::max(d + 1, 0), ExactPoly(nvars_));
        for (auto& [k, c] : t_) {
            int e = exponent(k, v);
            out[e].t_.emplace_back(k - unit(v) * static_cast<Key>(e), c);
        }
        for (auto& p : out) p.sort();
        return out;
    }

    // Substitute var -> var + a.
    ExactPoly shift(int v, const Rat& a) const {
        if (is_zero(a) || degree_in(v) <= 0) return *this;
        auto cs = coefficients_in(v);
        ExactPoly lin = var(v, nvars_) + ExactPoly(a, nvars_);
        ExactPoly r(nvars_);
        for (auto it = cs.rbegin(); it != cs.rend(); ++it) r = r * lin + *it;
        return r;
    }

    ExactPoly derivative(int v) const {
        ExactPoly r(nvars_);
        for (auto& [k, c] : t_) {
            int e = exponent(k, v);
            if (e > 0) r.t_.emplace_back(k - unit(v), c * e);
        }
        return r;
    }

    // Substitute var = value (the variable disappears).
    ExactPoly substitute(int v, const Rat& value) const {
        auto cs = coefficients_in(v);
        ExactPoly r(nvars_);
        for (auto it = cs.rbegin(); it != cs.rend(); ++it) r = value * r + *it;
        return r;
    }
    ExactPoly substitute_poly(int v, const ExactPoly& value) const {
        auto cs = coefficients_in(v);
        ExactPoly r(std::max(nvars_, value.nvars_));
        for (auto it = cs.rbegin(); it != cs.rend(); ++it) r = r * value + *it;
        return r;
    }

    template <class T> T evaluate(const std::vector<T>& point) const {
        T r(0);
        for (auto& [k, c] : t_) {
            T m = scalar_cast<T>(c);
            for (int v = 0; v < nvars_; ++v) {
                int e = exponent(k, v);
                for (int i = 0; i < e; ++i) m *= point[v];
            }
            r += m;
        }
        return r;
    }

    // Keep only variable v (all other variables set to zero).
    QPoly restrict_to(int v) const {
        std::vector<Rat> c(std::max(degree_in(v) + 1, 0), Rat(0));
        for (auto& [k, a] : t_)
            if (k == unit(v) * static_cast<Key>(exponent(k, v))) c[exponent(k, v)] = a;
        return QPoly(std::move(c));
    }

    bool divisible_by_monomial(Key num, Key den) const {
        for (int v = 0; v < kMaxVars; ++v)
            if (exponent(num, v) < exponent(den, v)) return false;
        return true;
    }

    // Exact division; throws if d does not divide *this.
    ExactPoly exact_div(const ExactPoly& d) const {
        if (d.zero()) throw std::domain_error("division by zero polynomial");
        ExactPoly q(std::max(nvars_, d.nvars_)), r = *this;
        if (d.t_.size() == 1) {
            for (auto& [k, c] : r.t_) {
                if (!divisible_by_monomial(k, d.t_[0].first)) throw std::domain_error("inexact polynomial division");
                k -= d.t_[0].first;
                c /= d.t_[0].second;
            }
            r.nvars_ = q.nvars_;
            return r;
        }
        const auto& [dk, dc] = d.leading();
        while (!r.zero()) {
            const auto& [rk, rc] = r.leading();
            if (!divisible_by_monomial(rk, dk)) throw std::domain_error("inexact polynomial division");
            ExactPoly m(q.nvars_);
            m.t_.emplace_back(rk - dk, rc / dc);
            q.t_.push_back(m.t_[0]);
            r -= m * d;
        }
        q.sort();
        return q;
    }
    bool divides(const ExactPoly& p) const {
        try {
            (void)p.exact_div(*this);
            return true;
        } catch (const std::domain_error&) {
            return false;
        }
    }

    ExactPoly with_nvars(int n) const {
        ExactPoly r = *this;
        r.nvars_ = std::max(n, nvars_);
        return r;
    }

    // Rescale so that the leading coefficient in lex order is one.
    ExactPoly monic() const {
        if (zero()) return *this;
        Rat inv = 1 / leading().second;
        return inv * *this;
    }

    std::string to_string(const std::vector<std::string>& names = {}) const {
        if (t_.empty()) return "0";
        std::string s;
        for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
            std::string cs = str(it->second);
            if (!s.empty()) s += (cs[0] == '-') ? " - " : " + ";
            else if (cs[0] == '-') s += "-";
            if (cs[0] == '-') cs = cs.substr(1);
            std::string mono;
            for (int v = 0; v < nvars_; ++v) {
                int e = exponent(it->first, v);
                if (e == 0) continue;
                if (!mono.empty()) mono += "*";
                mono += v < static_cast<int>(names.size()) ? names[v] : (v == 0 ? "x" : "t" + std::to_string(v));
                if (e > 1) mono += "^" + std::to_string(e);
            }
            if (mono.empty()) s += cs;
            else if (cs == "1") s += mono;
            else s += cs + "*" + mono;
        }
        return s;
    }

  private:
    int nvars_ = 1;
    std::vector<Term> t_;

    static int shift_of(int v) { return 56 - 8 * v; }
    void check_nvars() const {
        if (nvars_ < 1 || nvars_ > kMaxVars) throw std::invalid_argument("unsupported number of variables");
    }
    void sort() {
        std::sort(t_.begin(), t_.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    }
    static ExactPoly combine(const ExactPoly& a, const ExactPoly& b, bool subtract) {
        ExactPoly r(std::max(a.nvars_, b.nvars_));
        r.t_.reserve(a.t_.size() + b.t_.size());
        size_t i = 0, j = 0;
        while (i < a.t_.size() || j < b.t_.size()) {
            if (j == b.t_.size() || (i < a.t_.size() && a.t_[i].first < b.t_[j].first)) {
                r.t_.push_back(a.t_[i++]);
            } else if (i == a.t_.size() || b.t_[j].first < a.t_[i].first) {
                r.t_.emplace_back(b.t_[j].first, subtract ? Rat(-b.t_[j].second) : b.t_[j].second);
                ++j;
            } else {
                Rat c = subtract ? Rat(a.t_[i].second - b.t_[j].second) : Rat(a.t_[i].second + b.t_[j].second);
                if (!is_zero(c)) r.t_.emplace_back(a.t_[i].first, std::move(c));
                ++i;
                ++j;
            }
        }
        return r;
    }
};

inline bool is_zero(const ExactPoly& p) { return p.zero(); }

// Fraction-free division used by Bareiss elimination.
inline Rat exact_div(const Rat& a, const Rat& b) { return a / b; }
inline ExactPoly exact_div(const ExactPoly& a, const ExactPoly& b) { return a.exact_div(b); }

inline ExactPoly forward_difference(const ExactPoly& f, int v = 0) { return f.shift(v, Rat(1)) - f; }

// binom(x, r) with x the given variable.
inline ExactPoly binom_var(int r, int v, int nvars) {
    ExactPoly p(Rat(1), nvars);
    for (int i = 0; i < r; ++i) p = Rat(1, i + 1) * (p * (ExactPoly::var(v, nvars) - ExactPoly(Rat(i), nvars)));
    return p;
}

} // namespace bae
