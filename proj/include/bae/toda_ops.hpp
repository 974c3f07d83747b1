#pragma once

#include <climits>
#include <cmath>
#include <map>
#include <vector>

#include "bae/periodic_inverse.hpp"

namespace bae {

// sum_{s >= -top} f_s T^{-s} with N-periodic coefficient sequences f_s(n).
// Coefficients are known for s <= depth; kExactDepth marks difference operators.
template <class K> struct PseudoDiffOp {
    static constexpr int kExactDepth = INT_MAX / 4;

    int N = 1;
    int top = 0;
    int depth = kExactDepth;
    std::map<int, std::vector<K>> c;

    bool known(int s) const { return s <= depth; }
    std::vector<K> coeff(int s) const {
        if (!known(s)) throw TruncationExceeded("coefficient beyond the truncation depth");
        auto it = c.find(s);
        return it == c.end() ? std::vector<K>(N, K(0)) : it->second;
    }
    void set(int s, std::vector<K> f) {
        if (static_cast<int>(f.size()) != N) throw InputError("coefficient sequence has the wrong period");
        c[s] = std::move(f);
    }
    // T^k as an operator.
    static PseudoDiffOp shift(int N, int k) {
        PseudoDiffOp p;
        p.N = N;
        p.top = std::max(k, 0);
        p.set(-k, std::vector<K>(N, K(1)));
        return p;
    }
};

// (T^k g)_n = g_{n+k} on periodic sequences.
template <class K> std::vector<K> shift_seq(const std::vector<K>& g, int k) {
    const int N = static_cast<int>(g.size());
    std::vector<K> r(N);
    for (int n = 0; n < N; ++n) r[n] = g[((n + k) % N + N) % N];
    return r;
}

template <class K> PseudoDiffOp<K> op_add(const PseudoDiffOp<K>& a, const PseudoDiffOp<K>& b) {
    if (a.N != b.N) throw InputError("period mismatch");
    PseudoDiffOp<K> r;
    r.N = a.N;
    r.top = std::max(a.top, b.top);
    r.depth = std::min(a.depth, b.depth);
    for (auto* op : {&a, &b})
        for (auto& [s, f] : op->c) {
            if (s > r.depth) continue;
            auto cur = r.c.count(s) ? r.c[s] : std::vector<K>(r.N, K(0));
            for (int n = 0; n < r.N; ++n) cur[n] = cur[n] + f[n];
            r.c[s] = cur;
        }
    return r;
}

// (f T^{-a})(g T^{-b}) = f (T^{-a} g) T^{-a-b}.
template <class K> PseudoDiffOp<K> op_multiply(const PseudoDiffOp<K>& a, const PseudoDiffOp<K>& b) {
    if (a.N != b.N) throw InputError("period mismatch");
    PseudoDiffOp<K> r;
    r.N = a.N;
    r.top = a.top + b.top;
    const long long da = a.depth, db = b.depth;
    r.depth = static_cast<int>(std::min<long long>({da - b.top, db - a.top, PseudoDiffOp<K>::kExactDepth}));
    for (auto& [sa, f] : a.c)
        for (auto& [sb, g] : b.c) {
            const int s = sa + sb;
            if (s > r.depth) continue;
            auto tg = shift_seq(g, -sa);
            auto cur = r.c.count(s) ? r.c[s] : std::vector<K>(r.N, K(0));
            for (int n = 0; n < r.N; ++n) cur[n] = cur[n] + f[n] * tg[n];
            r.c[s] = cur;
        }
    return r;
}

template <class K> PseudoDiffOp<K> op_power(const PseudoDiffOp<K>& a, int m) {
    if (m < 0) throw InputError("negative power");
    PseudoDiffOp<K> r = PseudoDiffOp<K>::shift(a.N, 0);
    for (int i = 0; i < m; ++i) r = op_multiply(r, a);
    return r;
}

// Terms with nonnegative powers of T.
template <class K> PseudoDiffOp<K> positive_part(const PseudoDiffOp<K>& a) {
    if (a.depth < 0) throw TruncationExceeded("positive part needs the T^0 coefficient");
    PseudoDiffOp<K> r;
    r.N = a.N;
    r.top = a.top;
    for (auto& [s, f] : a.c)
        if (s <= 0) r.c[s] = f;
    return r;
}

template <class K> std::vector<K> residue(const PseudoDiffOp<K>& a) { return a.coeff(0); }

// psi_n = z^n (1+z)^x (1 + sum_{s>=1} xi[n][s-1] z^{-s}), n = 0..N-1, extended periodically.
// Coefficients beyond xi[n].size() are zero when exact_tail is set.
template <class K> struct WaveFamily {
    std::vector<std::vector<K>> xi;
    bool exact_tail = true;

    int N() const { return static_cast<int>(xi.size()); }
    K at(int n, int s) const {
        if (s == 0) return K(1);
        const auto& row = xi[((n % N()) + N()) % N()];
        if (s <= static_cast<int>(row.size())) return row[s - 1];
        if (!exact_tail) throw TruncationExceeded("wave coefficient beyond the available tail");
        return K(0);
    }
};

// L = T + sum_{s=0}^{depth} w_s T^{-s} with L psi = z psi:
// w_{n,j-1} = xi_{n,j} - xi_{n+1,j} - sum_{s<j-1} w_{n,s} xi_{n-s,j-1-s}.
template <class K> PseudoDiffOp<K> extract_L(const WaveFamily<K>& w, int depth) {
    const int N = w.N();
    if (N == 0) throw InconsistentWave("empty wave family");
    if (!w.exact_tail)
        for (auto& row : w.xi)
            if (static_cast<int>(row.size()) < depth + 1) throw InconsistentWave("wave family is shorter than the requested depth");
    PseudoDiffOp<K> L = PseudoDiffOp<K>::shift(N, 1);
    L.depth = depth;
    std::vector<std::vector<K>> ws;
    for (int j = 1; j <= depth + 1; ++j) {
        std::vector<K> wj(N);
        for (int n = 0; n < N; ++n) {
            K acc = w.at(n, j) - w.at(n + 1, j);
            for (int s = 0; s < j - 1; ++s) acc = acc - ws[s][n] * w.at(n - s, j - 1 - s);
            wj[n] = acc;
        }
        ws.push_back(wj);
        L.set(j - 1, wj);
    }
    return L;
}

// Applies L to the wave family and returns the coefficients of z^{1-j} in
// (L psi - z psi) / (z^n (1+z)^x) for j = 1..upto, which vanish when L matches.
template <class K> std::vector<std::vector<K>> eigen_defect(const PseudoDiffOp<K>& L, const WaveFamily<K>& w, int upto) {
    const int N = w.N();
    std::vector<std::vector<K>> out;
    for (int j = 1; j <= upto; ++j) {
        std::vector<K> row(N);
        for (int n = 0; n < N; ++n) {
            K acc = w.at(n + 1, j) - w.at(n, j);
            for (int s = 0; s < j; ++s) acc = acc + L.coeff(s)[n] * w.at(n - s, j - 1 - s);
            row[n] = acc;
        }
        out.push_back(row);
    }
    return out;
}

// ---- wave families from the determinant construction ----------------------

inline QRatFunc to_qratfunc(const ExactPoly& num, const ExactPoly& den) {
    if (num.degree_in(kVarZ) > 0 || den.degree_in(kVarZ) > 0) throw InputError("coefficient still depends on z");
    for (int v = 2; v < num.nvars(); ++v)
        if (num.degree_in(v) > 0 || den.degree_in(v) > 0) throw InputError("coefficient still depends on the times");
    return QRatFunc(num.restrict_to(kVarX), den.restrict_to(kVarX));
}

inline std::vector<Rat> full_times(const BAFamily& fam, const std::vector<Rat>& t) {
    std::vector<Rat> full(fam.times, Rat(0));
    for (size_t j = 0; j < t.size() && j < full.size(); ++j) full[j] = t[j];
    return full;
}

// xi_{n,s} at fixed times, n = 0..N-1, from R_n / z^{n+nu}.
inline WaveFamily<QRatFunc> wave_at(const BAFamily& fam, const std::vector<Rat>& t = {}) {
    auto tt = full_times(fam, t);
    WaveFamily<QRatFunc> w;
    for (int n = 0; n < fam.N; ++n) {
        ExactPoly y = at_times(fam.y[n], tt);
        ExactPoly P = at_times(fam.P[n], tt);
        std::vector<QRatFunc> row;
        for (int s = 1; s <= fam.order(n); ++s) row.push_back(to_qratfunc(P.coeff_in(kVarZ, fam.order(n) - s), y));
        w.xi.push_back(row);
    }
    return w;
}

// Same data from the linear-problem wave functions of a solution at t = 0.
inline WaveFamily<QRatFunc> wave_from_tuple(const SolutionTuple& y) {
    auto psis = build_psi_family(y);
    const int N = y.N();
    WaveFamily<QRatFunc> w;
    for (int n = 0; n < N; ++n) {
        const StrippedBA& s = psis[(n == 0 ? N : n) - 1];
        std::vector<QRatFunc> row;
        for (int j = 1; j <= s.zpow; ++j) row.push_back(QRatFunc(s.num.coeff_in(kVarZ, s.zpow - j).restrict_to(kVarX), s.den_x));
        w.xi.push_back(row);
    }
    return w;
}

// d/dt_m of xi_{n,s} at fixed times.
inline WaveFamily<QRatFunc> wave_derivative(const BAFamily& fam, int m, const std::vector<Rat>& t = {}) {
    if (m < 1 || m > fam.times) throw InputError("time index outside the active times");
    auto tt = full_times(fam, t);
    WaveFamily<QRatFunc> w;
    for (int n = 0; n < fam.N; ++n) {
        ExactPoly y0 = at_times(fam.y[n], tt), dy = at_times(fam.y[n].derivative(var_t(m)), tt);
        std::vector<QRatFunc> row;
        for (int s = 1; s <= fam.order(n); ++s) {
            ExactPoly Ps = fam.P[n].coeff_in(kVarZ, fam.order(n) - s);
            ExactPoly p0 = at_times(Ps, tt), dp = at_times(Ps.derivative(var_t(m)), tt);
            row.push_back(to_qratfunc(dp * y0 - p0 * dy, y0 * y0));
        }
        w.xi.push_back(row);
    }
    return w;
}

// d/dt_m of log v_n at fixed times as a rational function of x.
inline QRatFunc dlog_potential(const BAFamily& fam, int n, int m, const std::vector<Rat>& t) {
    if (m < 1 || m > fam.times) throw InputError("time index outside the active times");
    auto tt = full_times(fam, t);
    const Rat one(1);
    auto dlog = [&](int k) {
        ExactPoly y = at_times(fam.y[k], tt), dy = at_times(fam.y[k].derivative(var_t(m)), tt);
        return QRatFunc(dy.restrict_to(kVarX), y.restrict_to(kVarX));
    };
    QRatFunc a = dlog(n), b = dlog(n + 1);
    return a - a.shift(one) + b.shift(one) - b;
}

struct VflowReport {
    bool exact = false;             // identity holds as rational functions
    bool opposite_sign_holds = false;  // F(x) - F(x+1) instead
    double sampled_residual = 0;    // exact sides compared at the sample points
    double fd_residual = 0;         // central difference in t_m against F_m(x) - F_m(x+1)
    std::vector<QRatFunc> lhs, rhs;  // per n = 0..N-1
};

namespace detail {
inline double eval_q(const QRatFunc& f, double x) {
    const double d = f.den().eval<double>(x);
    if (std::abs(d) < 1e-9) throw PoleAtSample("sample point at a pole");
    return f.num().eval<double>(x) / d;
}
// log |v_n(x)|, with the ratio of tau values formed exactly before the log is taken.
inline double log_abs_potential(const BAFamily& fam, int n, const Rat& x, const std::vector<Rat>& t) {
    auto y = [&](int k, const Rat& xx) {
        std::vector<Rat> pt{xx, Rat(0)};
        pt.insert(pt.end(), t.begin(), t.end());
        Rat v = fam.y[k].evaluate(pt);
        if (v == 0) throw PoleAtSample("sample point at a zero of y");
        return v;
    };
    Rat v = y(n, x) * y(n + 1, x + 1) / (y(n, x + 1) * y(n + 1, x));
    return std::log(std::abs(v.get_d()));
}
} // namespace detail

// d_m log v_n(x) = F_{m,n}(x+1) - F_{m,n}(x) with F_m = res L^m, checked exactly
// at the given rational times and by a central difference of step h.
// Sample points hitting a pole are moved.
inline VflowReport vflow_check(const BAFamily& fam, int m, const std::vector<Rat>& t = {}, double h = 1e-5,
                               std::vector<double> samples = {0.37, 1.91, -2.63}) {
    auto w = wave_at(fam, t);
    auto L = extract_L(w, m);
    auto F = residue(op_power(L, m));
    auto tt = full_times(fam, t);
    Rat hr(h);
    VflowReport r;
    r.exact = r.opposite_sign_holds = true;
    const Rat one(1);
    for (int n = 0; n < fam.N; ++n) {
        QRatFunc lhs = dlog_potential(fam, n, m, t);
        QRatFunc rhs = F[n].shift(one) - F[n];
        r.exact = r.exact && lhs == rhs;
        r.opposite_sign_holds = r.opposite_sign_holds && lhs == -rhs;
        for (double& x : samples)
            for (int attempt = 0;; ++attempt) {
                try {
                    const double a = detail::eval_q(lhs, x), fr = detail::eval_q(rhs, x);
                    const Rat xr(x);
                    auto at = [&](int j) {
                        auto ts = tt;
                        ts[m - 1] += Rat(j) * hr;
                        return detail::log_abs_potential(fam, n, xr, ts);
                    };
                    // five-point central stencil, truncation O(h^4)
                    const double fd = (at(-2) - 8 * at(-1) + 8 * at(1) - at(2)) / (12 * hr.get_d());
                    r.sampled_residual = std::max(r.sampled_residual, std::abs(a - fr));
                    r.fd_residual = std::max(r.fd_residual, std::abs(fd - fr));
                    break;
                } catch (const PoleAtSample&) {
                    if (attempt == 20) throw;
                    x += 0.173;
                }
            }
        r.lhs.push_back(lhs);
        r.rhs.push_back(rhs);
    }
    return r;
}

// (d_m - L^m_+) psi = 0 in stripped form:
// z^m R_n + d_m R_n = sum_k c_{n,k} z^k R_{n+k}, coefficientwise in z.
inline bool flow_identity_check(const BAFamily& fam, int m, const std::vector<Rat>& t = {}) {
    auto w = wave_at(fam, t);
    auto dw = wave_derivative(fam, m, t);
    auto Lp = positive_part(op_power(extract_L(w, m), m));
    const int N = fam.N;
    // R_n as map power of z -> coefficient, with R_n = sum_s xi_{n,s} z^{-s}
    auto R = [&](int n) {
        std::map<int, QRatFunc> r;
        for (int s = 0; s <= fam.order(((n % N) + N) % N); ++s) r[-s] = w.at(n, s);
        return r;
    };
    for (int n = 0; n < N; ++n) {
        std::map<int, QRatFunc> lhs, rhs;
        for (auto& [p, c] : R(n)) lhs[p + m] = lhs[p + m] + c;
        for (int s = 1; s <= fam.order(n); ++s) lhs[-s] = lhs[-s] + dw.at(n, s);
        for (int k = 0; k <= m; ++k) {
            QRatFunc ck = Lp.coeff(-k)[n];
            if (ck == QRatFunc(0)) continue;
            for (auto& [p, c] : R(n + k)) rhs[p + k] = rhs[p + k] + ck * c;
        }
        for (auto& [p, c] : rhs) lhs[p] = lhs[p] - c;
        for (auto& [p, c] : lhs)
            if (c != QRatFunc(0)) return false;
    }
    return true;
}

} // namespace bae
