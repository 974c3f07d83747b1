#pragma once

#include <utility>
#include <vector>

#include "bae/core/poly.hpp"
#include "bae/core/ratfunc.hpp"

namespace bae {

// An N-tuple (y_1, ..., y_N) of monic polynomials in x, indexed cyclically.
class SolutionTuple {
  public:
    SolutionTuple() = default;
    explicit SolutionTuple(std::vector<QPoly> polys) : p_(std::move(polys)) {
        if (p_.empty()) throw InputError("empty tuple");
        for (auto& q : p_) {
            if (q.zero()) throw InputError("zero polynomial in tuple");
            q = q.monic();
        }
    }
    static SolutionTuple empty(int N) { return SolutionTuple(std::vector<QPoly>(N, QPoly(Rat(1)))); }

    int N() const { return static_cast<int>(p_.size()); }
    // 1-based cyclic access: y(0) = y(N), y(N+1) = y(1).
    const QPoly& y(int n) const { return p_[index(n)]; }
    void set(int n, QPoly q) { p_[index(n)] = q.monic(); }
    const std::vector<QPoly>& polys() const { return p_; }
    std::vector<int> degrees() const {
        std::vector<int> k;
        for (auto& q : p_) k.push_back(q.degree());
        return k;
    }
    int total_degree() const {
        int s = 0;
        for (auto& q : p_) s += q.degree();
        return s;
    }
    friend bool operator==(const SolutionTuple& a, const SolutionTuple& b) { return a.p_ == b.p_; }

  private:
    std::vector<QPoly> p_;
    int index(int n) const {
        int m = N();
        return (((n - 1) % m) + m) % m;
    }
};

struct BAEReport {
    bool generic = false;
    bool satisfied = false;
    std::vector<std::pair<int, QPoly>> failing_equations;
};

inline bool coprime(const QPoly& a, const QPoly& b) { return gcd(a, b).degree() == 0; }

inline bool is_generic(const SolutionTuple& y) {
    const Rat one(1);
    for (int n = 1; n <= y.N(); ++n) {
        const QPoly& p = y.y(n);
        if (p.degree() == 0) continue;
        if (!coprime(p, p.shift(one))) return false;
        if (!coprime(p, y.y(n - 1).shift(one))) return false;
        if (!coprime(p, y.y(n + 1))) return false;
    }
    return true;
}

// Distinct roots in every slot.  Not part of genericity as defined by the
// three gcd conditions, but needed wherever roots enter as coordinates.
inline bool has_simple_roots(const SolutionTuple& y) {
    for (auto& p : y.polys())
        if (p.degree() > 0 && !coprime(p, p.derivative())) return false;
    return true;
}

// Divisibility form: y_n divides
// y_{n-1}(x+1) y_n(x-1) y_{n+1}(x) + y_{n-1}(x) y_n(x+1) y_{n+1}(x-1).
inline QPoly bae_remainder(const SolutionTuple& y, int n) {
    const Rat one(1), mone(-1);
    const QPoly& p = y.y(n);
    if (p.degree() <= 0) return QPoly();
    const QPoly& a = y.y(n - 1);
    const QPoly& b = y.y(n + 1);
    QPoly s = a.shift(one) * p.shift(mone) * b + a * p.shift(one) * b.shift(mone);
    return s % p;
}

inline BAEReport verify_bae(const SolutionTuple& y) {
    BAEReport r;
    r.generic = is_generic(y);
    for (int n = 1; n <= y.N(); ++n) {
        QPoly rem = bae_remainder(y, n);
        if (!rem.zero()) r.failing_equations.emplace_back(n, rem);
    }
    r.satisfied = r.failing_equations.empty();
    return r;
}

// Sum k_j(k_j - 1) - sum k_j k_{j+1}, cyclic.
inline long long compute_Q(const std::vector<int>& k) {
    long long q = 0;
    const size_t N = k.size();
    for (size_t j = 0; j < N; ++j) {
        q += static_cast<long long>(k[j]) * (k[j] - 1);
        q -= static_cast<long long>(k[j]) * k[(j + 1) % N];
    }
    return q;
}

// L_n(x) = y_n(x+1) y_{n+1}(x-1) / (y_n(x) y_{n+1}(x)).
inline QRatFunc L_term(const SolutionTuple& y, int n) {
    const Rat one(1);
    return QRatFunc(y.y(n).shift(one) * y.y(n + 1).shift(Rat(-1)), y.y(n) * y.y(n + 1));
}

inline bool verify_L_identity(const SolutionTuple& y) {
    if (!is_generic(y)) throw NonGenericInput("tuple is not generic");
    QRatFunc s;
    for (int n = 1; n <= y.N(); ++n) s += L_term(y, n);
    return s == QRatFunc(Rat(y.N()));
}

} // namespace bae
