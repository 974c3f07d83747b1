#pragma once

#include <functional>
#include <vector>

#include "bae/rs_spectral.hpp"

namespace bae {

// Difference operator T^m + sum_{i=1..m} w[i-1](x) T^{m-i}.
template <class F> struct DiffOpX {
    int m = 0;
    std::vector<F> w;
};

inline long long binom_ll(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Coefficients of D_m from the expansion 1 + sum_s xi_s z^{-s} of the
// stripped wave function, so that D_m Psi = z^m Psi + O(z^{k-1}) Omega.
// Matching z^{m-1}, ..., z^0 needs xi_1..xi_m.  shift(f, j) returns f(x + j).
template <class F>
DiffOpX<F> build_Dm(const std::vector<F>& xi, int m, const std::function<F(const F&, int)>& shift, const F& one) {
    if (static_cast<int>(xi.size()) < m) throw InputError("build_Dm needs xi_1..xi_m");
    const F zero = one - one;
    auto X = [&](int s) -> const F& { return s == 0 ? one : xi[s - 1]; };
    DiffOpX<F> D;
    D.m = m;
    std::vector<F> w(m + 1, zero);
    w[0] = one;
    for (int i = 1; i <= m; ++i) {
        F acc = X(i);
        for (int ip = 0; ip < i; ++ip) {
            F inner = zero;
            for (int s = 0; m - i + s <= m - ip; ++s) {
                long long b = binom_ll(m - ip, m - i + s);
                if (b == 0 || s > m) continue;
                inner = inner + Rat(static_cast<long>(b)) * shift(X(s), m - ip);
            }
            acc = acc - w[ip] * inner;
        }
        w[i] = acc;
    }
    D.w.assign(w.begin() + 1, w.end());
    return D;
}

// Sum of simple poles sum c / (x - p).
struct PoleSum {
    std::vector<std::pair<cd, cd>> terms;  // (pole, coefficient)

    static constexpr double kMergeTol = 1e-12;

    void add(const cd& pole, const cd& c) {
        for (auto& [p, a] : terms)
            if (std::abs(p - pole) <= kMergeTol * std::max(1.0, std::abs(p))) {
                a += c;
                return;
            }
        terms.emplace_back(pole, c);
    }
    PoleSum& operator+=(const PoleSum& o) {
        for (auto& [p, c] : o.terms) add(p, c);
        return *this;
    }
    PoleSum scaled(const cd& s) const {
        PoleSum r = *this;
        for (auto& t : r.terms) t.second *= s;
        return r;
    }
    // this(x) / (x - q) by partial fractions; poles must differ from q.
    PoleSum over_linear(const cd& q) const {
        PoleSum r;
        for (auto& [p, c] : terms) {
            if (std::abs(p - q) <= 1e-9 * std::max(1.0, std::abs(p))) throw PoleAtSample("coinciding poles in partial fractions");
            r.add(p, c / (p - q));
            r.add(q, -c / (p - q));
        }
        return r;
    }
    cd residue(const cd& at) const {
        cd s = 0;
        for (auto& [p, c] : terms)
            if (std::abs(p - at) <= 1e-9 * std::max(1.0, std::abs(at))) s += c;
        return s;
    }
    // Constant term of the Laurent expansion at a point.
    cd regular_at(const cd& at) const {
        cd s = 0;
        for (auto& [p, c] : terms)
            if (std::abs(p - at) > 1e-9 * std::max(1.0, std::abs(at))) s += c / (at - p);
        return s;
    }
    cd operator()(const cd& x) const {
        cd s = 0;
        for (auto& [p, c] : terms) s += c / (x - p);
        return s;
    }
};

struct FlowMatrices {
    std::vector<PoleSum> wbar;  // wbar_{s,m}, s = 1..m
    std::vector<CMat> H;        // H_{s,m}
    CMat M;
};

inline FlowMatrices flow_matrices(const PhasePoint& p, int m) {
    if (m < 1) throw InputError("flow index must be positive");
    const int k = p.k();
    CMat L = to_eigen(lax_matrix(p));
    CVec g(k);
    for (int i = 0; i < k; ++i) g(i) = p.gamma[i];
    std::vector<CVec> Lg{g};  // L^j gamma
    for (int j = 1; j < m; ++j) Lg.push_back(L * Lg.back());

    FlowMatrices f;
    for (int s = 1; s <= m; ++s) {
        PoleSum w;
        for (int i = 0; i < k; ++i) {
            const cd a = Lg[s - 1](i);
            w.add(p.u[i], a);
            w.add(p.u[i] - static_cast<double>(m), -a);
            for (int l = 1; l < s; ++l)
                w += f.wbar[l - 1].over_linear(p.u[i] - static_cast<double>(m - l)).scaled(-Lg[s - 1 - l](i));
        }
        f.wbar.push_back(w);
    }
    for (int s = 1; s <= m; ++s) {
        CMat H(k, k);
        for (int i = 0; i < k; ++i) {
            cd r = f.wbar[s - 1].residue(p.u[i]);
            for (int j = 0; j < k; ++j) {
                if (s == m) H(i, j) = i == j ? f.wbar[s - 1].regular_at(p.u[i]) : r / (p.u[i] - p.u[j]);
                else H(i, j) = r / (p.u[i] - p.u[j] + static_cast<double>(m - s));
            }
        }
        f.H.push_back(H);
    }
    f.M = CMat::Zero(k, k);
    CMat P = CMat::Identity(k, k);
    for (int s = m; s >= 1; --s) {
        f.M += f.H[s - 1] * P;
        P = P * L;
    }
    return f;
}

// Direction in t-space of the flow t-bar_m: d/dt-bar_m = sum_j binom(m, j) d/dt_j.
inline std::vector<cd> flow_direction(int m, double h) {
    std::vector<cd> t(m);
    for (int j = 1; j <= m; ++j) t[j - 1] = h * static_cast<double>(binom_ll(m, j));
    return t;
}

struct FlowReport {
    double lax_residual = 0;       // |dL/dt - [M, L]| / max(1, |[M, L]|)
    double velocity_residual = 0;  // |du_i/dt - res wbar_{m,m}|
    double gamma_residual = 0;     // |dgamma/dt - (M_m - L^m) gamma|
    double gamma_diag_residual = 0;  // |dgamma_i/dt + [M_m, L]_ii|
    double trace_drift = 0;        // max relative change of tr L^j, j <= 3, at t-bar_m = 0.1
};

namespace detail {
inline std::vector<int> nearest_order(const std::vector<cd>& a, const std::vector<cd>& b) {
    std::vector<int> perm(a.size());
    std::vector<bool> used(b.size(), false);
    for (size_t i = 0; i < a.size(); ++i) {
        int best = -1;
        for (size_t j = 0; j < b.size(); ++j)
            if (!used[j] && (best < 0 || std::abs(a[i] - b[j]) < std::abs(a[i] - b[best]))) best = static_cast<int>(j);
        used[best] = true;
        perm[i] = best;
    }
    return perm;
}
inline PhasePoint reorder(const PhasePoint& p, const std::vector<int>& perm) {
    PhasePoint r;
    for (int j : perm) {
        r.u.push_back(p.u[j]);
        r.gamma.push_back(p.gamma[j]);
    }
    return r;
}
} // namespace detail

// Probe the flow t-bar_m through the inverse spectral map and compare the
// central difference of L with [M_m, L].
inline FlowReport lax_flow_check(const GenericSpectrum& s, int m, double h = 1e-5) {
    auto base = inverse_transform(s).point;
    auto plus = inverse_transform(s, flow_direction(m, h)).point;
    auto minus = inverse_transform(s, flow_direction(m, -h)).point;
    plus = detail::reorder(plus, detail::nearest_order(base.u, plus.u));
    minus = detail::reorder(minus, detail::nearest_order(base.u, minus.u));
    CMat L0 = to_eigen(lax_matrix(base));
    CMat dL = (to_eigen(lax_matrix(plus)) - to_eigen(lax_matrix(minus))) / (2 * h);
    auto f = flow_matrices(base, m);
    CMat comm = f.M * L0 - L0 * f.M;
    FlowReport r;
    r.lax_residual = max_abs(dL - comm) / std::max(1.0, max_abs(comm));
    for (int i = 0; i < base.k(); ++i) {
        cd du = (plus.u[i] - minus.u[i]) / (2 * h);
        r.velocity_residual = std::max(r.velocity_residual, std::abs(du - f.wbar[m - 1].residue(base.u[i])));
    }
    CVec g(base.k()), dg(base.k());
    for (int i = 0; i < base.k(); ++i) {
        g(i) = base.gamma[i];
        dg(i) = (plus.gamma[i] - minus.gamma[i]) / (2 * h);
    }
    CMat Lm = CMat::Identity(base.k(), base.k());
    for (int j = 0; j < m; ++j) Lm = Lm * L0;
    const double gs = std::max(1.0, dg.cwiseAbs().maxCoeff());
    r.gamma_residual = (dg - (f.M - Lm) * g).cwiseAbs().maxCoeff() / gs;
    r.gamma_diag_residual = (dg + comm.diagonal()).cwiseAbs().maxCoeff() / gs;
    auto far = inverse_transform(s, flow_direction(m, 0.1)).point;
    auto h0 = trace_powers(lax_matrix(base), 3), h1 = trace_powers(lax_matrix(far), 3);
    for (int j = 0; j < 3; ++j) r.trace_drift = std::max(r.trace_drift, rel_err(h0[j], h1[j]));
    return r;
}

} // namespace bae
