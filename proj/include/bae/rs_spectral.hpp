#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "bae/core/linalg.hpp"
#include "bae/core/numeric.hpp"
#include "bae/core/poly.hpp"

namespace bae {

// Point of the RS phase space: coordinates u and residues gamma.
template <class K> struct PhasePointT {
    std::vector<K> u, gamma;
    int k() const { return static_cast<int>(u.size()); }
};
using PhasePoint = PhasePointT<cd>;
using ExactPhasePoint = PhasePointT<Rat>;

inline PhasePoint to_complex(const ExactPhasePoint& p) {
    PhasePoint r;
    for (auto& a : p.u) r.u.push_back(to_cd(a));
    for (auto& a : p.gamma) r.gamma.push_back(to_cd(a));
    return r;
}

namespace detail {
inline bool near(const Rat& a, const Rat& b) { return a == b; }
inline bool near(const cd& a, const cd& b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }
} // namespace detail

template <class K> void check_phase_point(const PhasePointT<K>& p) {
    if (p.u.size() != p.gamma.size()) throw InputError("u and gamma differ in length");
    for (int i = 0; i < p.k(); ++i) {
        if (is_zero(p.gamma[i])) throw InputError("zero gamma");
        for (int j = 0; j < p.k(); ++j) {
            if (i == j) continue;
            if (detail::near(p.u[i], p.u[j]) || detail::near(p.u[i], p.u[j] + K(1)))
                throw InputError("coordinates collide or differ by one");
        }
    }
}

// L_ij = gamma_i / (u_i - u_j - 1)
template <class K> Matrix<K> lax_matrix(const PhasePointT<K>& p) {
    check_phase_point(p);
    const int k = p.k();
    Matrix<K> L(k, k, K(0));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) L(i, j) = p.gamma[i] / (p.u[i] - p.u[j] - K(1));
    return L;
}

// [U, L] - L - Gamma F, with F the all-ones matrix.
template <class K> Matrix<K> displacement_residual(const PhasePointT<K>& p) {
    Matrix<K> L = lax_matrix(p);
    const int k = p.k();
    Matrix<K> r(k, k, K(0));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) r(i, j) = (p.u[i] - p.u[j]) * L(i, j) - L(i, j) - p.gamma[i];
    return r;
}

// Closed Cauchy form of det L.  The factor (-1)^k comes from the diagonal
// entries gamma_i / (-1).
template <class K> K cauchy_det(const PhasePointT<K>& p) {
    const int k = p.k();
    K d = k % 2 ? K(-1) : K(1);
    for (int i = 0; i < k; ++i) d = d * p.gamma[i];
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            K s = (p.u[i] - p.u[j]) * (p.u[i] - p.u[j]);
            d = d * s / (s - K(1));
        }
    return d;
}

// Equations of motion of the t_1 flow: du_i = gamma_i,
// dgamma_i = sum_{j != i} gamma_i gamma_j (2/d - 1/(d-1) - 1/(d+1)), d = u_i - u_j.
// This sign is the one under which tr L^m is conserved.
template <class K> std::pair<std::vector<K>, std::vector<K>> rs_rhs(const PhasePointT<K>& p) {
    const int k = p.k();
    std::vector<K> du = p.gamma, dg(k, K(0));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            if (i == j) continue;
            K d = p.u[i] - p.u[j];
            dg[i] = dg[i] + p.gamma[i] * p.gamma[j] * (K(2) / d - K(1) / (d - K(1)) - K(1) / (d + K(1)));
        }
    return {du, dg};
}

// Classical RK4 for the RS flow.
inline PhasePoint rs_integrate(PhasePoint p, double dt, int steps) {
    auto axpy = [](const PhasePoint& a, const std::pair<std::vector<cd>, std::vector<cd>>& d, double h) {
        PhasePoint r = a;
        for (int i = 0; i < a.k(); ++i) {
            r.u[i] += h * d.first[i];
            r.gamma[i] += h * d.second[i];
        }
        return r;
    };
    for (int s = 0; s < steps; ++s) {
        auto k1 = rs_rhs(p);
        auto k2 = rs_rhs(axpy(p, k1, dt / 2));
        auto k3 = rs_rhs(axpy(p, k2, dt / 2));
        auto k4 = rs_rhs(axpy(p, k3, dt));
        for (int i = 0; i < p.k(); ++i) {
            p.u[i] += dt / 6 * (k1.first[i] + 2.0 * k2.first[i] + 2.0 * k3.first[i] + k4.first[i]);
            p.gamma[i] += dt / 6 * (k1.second[i] + 2.0 * k2.second[i] + 2.0 * k3.second[i] + k4.second[i]);
        }
    }
    return p;
}

// tr L^m for m = 1..mmax
inline std::vector<cd> trace_powers(const Matrix<cd>& L, int mmax) {
    CMat A = to_eigen(L), P = CMat::Identity(L.rows, L.rows);
    std::vector<cd> h;
    for (int m = 1; m <= mmax; ++m) {
        P = P * A;
        h.push_back(P.trace());
    }
    return h;
}

struct GenericSpectrum {
    std::vector<cd> mu, a;
};

struct SpectralOptions {
    double distinct_tol = 1e-7;     // relative separation below which eigenvalues count as equal
    double consistency_tol = 1e-6;  // cross-component agreement for a_j
    double collision_tol = 1e-9;    // root separation in inverse transforms
    double rank_tol = 1e-8;         // singular value threshold for subspace extraction
};

inline std::vector<cd> sorted(std::vector<cd> v) {
    std::sort(v.begin(), v.end(), [](const cd& a, const cd& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return v;
}

// (u, gamma) -> (mu, a) on points with simple spectrum.
inline GenericSpectrum direct_transform(const PhasePoint& p, const SpectralOptions& opt = {}) {
    const int k = p.k();
    CMat L = to_eigen(lax_matrix(p));
    Eigen::ComplexEigenSolver<CMat> es(L);
    if (es.info() != Eigen::Success) throw DegenerateSpectrum("eigensolver did not converge");
    CVec mu = es.eigenvalues();
    CMat V = es.eigenvectors();
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (std::abs(mu(i) - mu(j)) <= opt.distinct_tol * std::max(1.0, std::abs(mu(i))))
                throw DegenerateSpectrum("eigenvalues are not distinct");
    // A nearly defective L splits a multiple eigenvalue numerically; its
    // eigenvector matrix is then close to singular.
    {
        CMat Vn = V;
        for (int j = 0; j < k; ++j) Vn.col(j).normalize();
        auto sv = Eigen::JacobiSVD<CMat>(Vn).singularValues();
        if (sv(k - 1) <= 1e-6 * sv(0)) throw DegenerateSpectrum("eigenvectors are nearly dependent");
    }
    CVec g(k);
    for (int i = 0; i < k; ++i) g(i) = p.gamma[i];
    CVec beta = V.partialPivLu().solve(g);

    std::vector<std::pair<cd, cd>> out;
    for (int j = 0; j < k; ++j) {
        CVec v = V.col(j);
        cd nu = v.sum();
        if (std::abs(nu) <= 1e-10 * v.norm()) throw NormalizationFailure("eigenvector components sum to zero");
        // Residue and regular part of ((1+z) - L)^{-1} gamma at z = mu_j - 1.
        CVec c = beta(j) * v;
        CVec d = CVec::Zero(k);
        for (int l = 0; l < k; ++l)
            if (l != j) d += beta(l) / (mu(j) - mu(l)) * V.col(l);
        if (std::abs(c.sum() + mu(j)) > opt.consistency_tol * std::max(1.0, std::abs(mu(j))))
            throw NormalizationFailure("residue vector does not sum to -mu");
        int imax = 0;
        for (int i = 1; i < k; ++i)
            if (std::abs(c(i)) > std::abs(c(imax))) imax = i;
        cd a = -(d(imax) + p.u[imax] * c(imax) / mu(j)) / c(imax);
        double scale = 0;
        for (int i = 0; i < k; ++i) scale = std::max(scale, std::abs(d(i)) + std::abs(p.u[i] * c(i) / mu(j)));
        for (int i = 0; i < k; ++i)
            if (std::abs(d(i) + p.u[i] * c(i) / mu(j) + a * c(i)) > opt.consistency_tol * std::max(1.0, scale))
                throw NormalizationFailure("a_j differs across components");
        out.emplace_back(mu(j), a);
    }
    std::sort(out.begin(), out.end(), [](auto& x, auto& y) {
        return x.first.real() != y.first.real() ? x.first.real() < y.first.real() : x.first.imag() < y.first.imag();
    });
    GenericSpectrum s;
    for (auto& [m, a] : out) {
        s.mu.push_back(m);
        s.a.push_back(a);
    }
    return s;
}

struct InverseResult {
    CPoly y;        // polynomial in x
    PhasePoint point;
};

inline void trim_small(CPoly& p, double rel = 1e-12) {
    double mx = 0;
    for (auto& c : p.c) mx = std::max(mx, std::abs(c));
    while (!p.c.empty() && std::abs(p.c.back()) <= rel * mx) p.c.pop_back();
}

inline std::vector<cd> separated_roots(const CPoly& y, double tol) {
    auto u = poly_roots(y);
    for (size_t i = 0; i < u.size(); ++i)
        for (size_t j = i + 1; j < u.size(); ++j)
            if (std::abs(u[i] - u[j]) <= tol * std::max(1.0, std::abs(u[i])))
                throw RootCollision("coordinates collide");
    return u;
}

// Diagonal shift sum_s s t_s (mu - 1)^{s-1}; t[0] holds t_1.
inline cd time_shift(const cd& mu, const std::vector<cd>& t) {
    cd s = 0, p = 1;
    for (size_t i = 0; i < t.size(); ++i) {
        s += static_cast<double>(i + 1) * t[i] * p;
        p *= mu - 1.0;
    }
    return s;
}

// (mu, a) -> y(x, t) = det T(x, t) and (u(t), gamma(t)), gamma = du/dt_1.
inline InverseResult inverse_transform(const GenericSpectrum& s, const std::vector<cd>& t = {},
                                       const SpectralOptions& opt = {}) {
    const int k = static_cast<int>(s.mu.size());
    if (static_cast<int>(s.a.size()) != k) throw InputError("mu and a differ in length");
    for (int i = 0; i < k; ++i) {
        if (std::abs(s.mu[i]) == 0.0) throw InputError("zero eigenvalue");
        for (int j = i + 1; j < k; ++j)
            if (std::abs(s.mu[i] - s.mu[j]) <= opt.distinct_tol * std::max(1.0, std::abs(s.mu[i])))
                throw InputError("eigenvalues are not distinct");
    }
    auto Tconst = [&](int i, int j) -> cd {
        return i == j ? s.a[i] + time_shift(s.mu[i], t) : 1.0 / (s.mu[i] - s.mu[j]);
    };
    Matrix<CPoly> T(k, k, CPoly());
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            T(i, j) = i == j ? CPoly(std::vector<cd>{Tconst(i, i), 1.0 / s.mu[i]}) : CPoly(Tconst(i, j));
    InverseResult r;
    r.y = det_expand(T, CPoly(cd(1)));
    trim_small(r.y);
    r.point.u = separated_roots(r.y, opt.collision_tol);
    // d/dt_1 det T = trace of the adjugate (dT/dt_1 = identity).
    CPoly dy = r.y.derivative();
    for (cd u : r.point.u) {
        CMat Tu(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) Tu(i, j) = i == j ? Tconst(i, i) + u / s.mu[i] : Tconst(i, j);
        cd tr = 0;
        for (int l = 0; l < k; ++l) {
            if (k == 1) {
                tr = 1.0;
                break;
            }
            CMat minor(k - 1, k - 1);
            for (int i = 0, ii = 0; i < k; ++i) {
                if (i == l) continue;
                for (int j = 0, jj = 0; j < k; ++j) {
                    if (j == l) continue;
                    minor(ii, jj++) = Tu(i, j);
                }
                ++ii;
            }
            tr += minor.determinant();
        }
        r.point.gamma.push_back(-tr / dy(u));
    }
    return r;
}

// ---- Extended transforms -------------------------------------------------
//
// Subspaces W_j are stored as m_j x 2m_j row bases of coefficient vectors in
// the local variable w = z - mu_j + 1.  The defining conditions are taken
// against the localized function Psi / h_j, h_j = prod_{l != j} (z - mu_l + 1)^{m_l},
// which has the same local behavior as psi (z - mu_j + 1)^{m_j}.  In that chart
// a simple eigenvalue gives W_j = span{1 + a_j w}.  to_global_chart converts to
// the chart where the conditions are taken against Psi itself.

struct ExtendedSpectrum {
    std::vector<cd> mu;
    std::vector<int> m;
    std::vector<CMat> W;
    int k() const {
        int s = 0;
        for (int x : m) s += x;
        return s;
    }
};

using Series = std::vector<cd>;

inline Series series_mul(const Series& a, const Series& b) {
    Series r(a.size(), 0.0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; i + j < a.size() && j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}
inline Series series_inv(const Series& a) {
    Series r(a.size(), 0.0);
    r[0] = 1.0 / a[0];
    for (size_t n = 1; n < a.size(); ++n) {
        cd s = 0;
        for (size_t i = 1; i <= n; ++i) s += a[i] * r[n - i];
        r[n] = -s / a[0];
    }
    return r;
}
inline Series series_exp(const Series& e) {
    // e[0] must vanish
    Series r(e.size(), 0.0);
    r[0] = 1.0;
    for (size_t n = 1; n < e.size(); ++n) {
        cd s = 0;
        for (size_t i = 1; i <= n; ++i) s += static_cast<double>(i) * e[i] * r[n - i];
        r[n] = s / static_cast<double>(n);
    }
    return r;
}
inline Series poly_series(const CPoly& p, const cd& center, int len) {
    CPoly q = p.shift(center);
    Series s(len, 0.0);
    for (int i = 0; i < len; ++i) s[i] = q[i];
    return s;
}

// Expansion of h_j in w around mu_j - 1.
inline Series local_factor(const std::vector<cd>& mu, const std::vector<int>& m, int j, int len) {
    Series h(len, 0.0);
    h[0] = 1.0;
    for (size_t l = 0; l < mu.size(); ++l) {
        if (static_cast<int>(l) == j) continue;
        Series f(len, 0.0);
        f[0] = mu[j] - mu[l];
        if (len > 1) f[1] = 1.0;
        for (int e = 0; e < m[l]; ++e) h = series_mul(h, f);
    }
    return h;
}

inline std::vector<std::pair<cd, int>> cluster_eigenvalues(const std::vector<cd>& ev, double tol) {
    const int n = static_cast<int>(ev.size());
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int i) { return parent[i] == i ? i : parent[i] = find(parent[i]); };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(ev[i] - ev[j]) <= tol * std::max(1.0, std::abs(ev[i]))) parent[find(i)] = find(j);
    std::vector<std::pair<cd, int>> out;
    std::vector<int> seen(n, -1);
    std::vector<cd> sum;
    for (int i = 0; i < n; ++i) {
        int r = find(i);
        if (seen[r] < 0) {
            seen[r] = static_cast<int>(out.size());
            out.emplace_back(0.0, 0);
        }
        out[seen[r]].first += ev[i];
        out[seen[r]].second += 1;
    }
    for (auto& [mu, m] : out) mu /= static_cast<double>(m);
    std::sort(out.begin(), out.end(), [](auto& a, auto& b) {
        return a.first.real() != b.first.real() ? a.first.real() < b.first.real() : a.first.imag() < b.first.imag();
    });
    return out;
}

// Squarefree decomposition of a rational polynomial: pairs (factor, multiplicity).
inline std::vector<std::pair<QPoly, int>> squarefree_factors(const QPoly& p) {
    std::vector<std::pair<QPoly, int>> out;
    QPoly a = p.monic();
    QPoly b = gcd(a, a.derivative());
    QPoly c = a / b;
    int i = 1;
    while (c.degree() > 0) {
        QPoly g = gcd(b, c);
        QPoly f = c / g;
        if (f.degree() > 0) out.emplace_back(f, i);
        b = b / g;
        c = g;
        ++i;
    }
    return out;
}

// Eigenvalues with exact multiplicities from a rational characteristic polynomial.
inline std::vector<std::pair<cd, int>> spectrum_from_charpoly(const QPoly& p) {
    std::vector<std::pair<cd, int>> out;
    for (auto& [f, m] : squarefree_factors(p))
        for (cd r : poly_roots(f)) out.emplace_back(r, m);
    return out;
}

struct ExtendedOptions {
    double cluster_tol = 1e-7;
    double rank_tol = 1e-8;
    // Eigenvalues with multiplicities known from exact data; skips clustering.
    std::optional<std::vector<std::pair<cd, int>>> spectrum;
};

// Gauge-stripped Psi(x, z) = det L(z) + sum_i N_i(1+z)/(x - u_i) as a
// polynomial in lambda = 1 + z, for a fixed x.
struct PsiPolynomial {
    std::vector<cd> u;
    CPoly charpoly;
    std::vector<CPoly> N;
    CPoly at(const cd& x) const {
        CPoly r = charpoly;
        for (size_t i = 0; i < u.size(); ++i) r = r + (1.0 / (x - u[i])) * N[i];
        return r;
    }
};

inline PsiPolynomial psi_polynomial(const PhasePoint& p) {
    const int k = p.k();
    Matrix<cd> L = lax_matrix(p);
    auto fl = faddeev_leverrier(L);
    PsiPolynomial r;
    r.u = p.u;
    r.charpoly = CPoly(fl.charpoly);
    r.N.assign(k, CPoly());
    for (int i = 1; i <= k; ++i) {
        auto col = fl.adj[i - 1] * p.gamma;
        for (int l = 0; l < k; ++l) r.N[l] = r.N[l] + CPoly::monomial(col[l], k - i);
    }
    return r;
}

inline std::vector<cd> sample_points(int n) {
    std::vector<cd> x;
    for (int s = 0; s < n; ++s) x.emplace_back(0.31 + 0.77 * s, 0.43 - 0.19 * s);
    return x;
}

inline ExtendedSpectrum extended_direct(const PhasePoint& p, const ExtendedOptions& opt = {}) {
    const int k = p.k();
    std::vector<std::pair<cd, int>> spec;
    if (opt.spectrum) {
        spec = *opt.spectrum;
    } else {
        Eigen::ComplexEigenSolver<CMat> es(to_eigen(lax_matrix(p)), false);
        std::vector<cd> ev(es.eigenvalues().data(), es.eigenvalues().data() + k);
        spec = cluster_eigenvalues(ev, opt.cluster_tol);
    }
    ExtendedSpectrum out;
    for (auto& [mu, m] : spec) {
        out.mu.push_back(mu);
        out.m.push_back(m);
    }
    auto P = psi_polynomial(p);
    for (size_t j = 0; j < out.mu.size(); ++j) {
        const int m = out.m[j], len = 2 * m;
        const cd mu = out.mu[j];
        Series hinv = series_inv(local_factor(out.mu, out.m, static_cast<int>(j), len));
        auto xs = sample_points(std::max(len, k) + 2);
        CMat A(static_cast<int>(xs.size()), len);
        for (size_t s = 0; s < xs.size(); ++s) {
            Series B(len, 0.0);
            for (int r = 0; r < len; ++r) B[r] = binom_poly<cd>(r)(xs[s]) * std::pow(mu, -r);
            Series F = series_mul(series_mul(poly_series(P.at(xs[s]), mu, len), B), hinv);
            double nrm = 0;
            for (auto& f : F) nrm = std::max(nrm, std::abs(f));
            for (int r = 0; r < len; ++r) A(s, r) = F[len - 1 - r] / std::max(nrm, 1e-300);
        }
        Eigen::JacobiSVD<CMat> svd(A, Eigen::ComputeFullV);
        auto sv = svd.singularValues();
        int rank = 0;
        for (int i = 0; i < sv.size(); ++i)
            if (sv(i) > opt.rank_tol * sv(0)) ++rank;
        if (len - rank != m)
            throw RankDeficiency("subspace for eigenvalue cluster has dimension " + std::to_string(len - rank) +
                                 ", expected " + std::to_string(m));
        CMat basis = svd.matrixV().rightCols(m).transpose();
        out.W.push_back(basis);
    }
    return out;
}

// Multiply each basis vector by the local series f, modulo w^{2m}.
inline CMat multiply_basis(const CMat& W, const Series& f) {
    CMat r(W.rows(), W.cols());
    for (int i = 0; i < W.rows(); ++i) {
        Series g(W.cols());
        for (int c = 0; c < W.cols(); ++c) g[c] = W(i, c);
        Series h = series_mul(g, f);
        for (int c = 0; c < W.cols(); ++c) r(i, c) = h[c];
    }
    return r;
}

// Chart in which the conditions are res g Psi / w^{2m} = 0 with Psi = det L psi.
inline ExtendedSpectrum to_global_chart(ExtendedSpectrum s) {
    for (size_t j = 0; j < s.mu.size(); ++j)
        s.W[j] = multiply_basis(s.W[j], series_inv(local_factor(s.mu, s.m, static_cast<int>(j), 2 * s.m[j])));
    return s;
}

// sin of the largest principal angle between the row spans.
inline double subspace_distance(const CMat& A, const CMat& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols()) return 1.0;
    Eigen::HouseholderQR<CMat> qa(A.transpose()), qb(B.transpose());
    CMat Qa = qa.householderQ() * CMat::Identity(A.cols(), A.rows());
    CMat Qb = qb.householderQ() * CMat::Identity(B.cols(), B.rows());
    CMat R = Qb - Qa * (Qa.adjoint() * Qb);
    return R.rows() == 0 ? 0.0 : Eigen::JacobiSVD<CMat>(R).singularValues()(0);
}

// The linear system M xi = rhs for the coefficients xi_1..xi_k of
// Psi = Omega (z^k + sum_s xi_s z^{k-s}), entries polynomial in x.
struct ExtendedSystem {
    Matrix<CPoly> M;
    std::vector<CPoly> rhs;
};

inline ExtendedSystem extended_system(const ExtendedSpectrum& s, const std::vector<cd>& t) {
    const int k = s.k();
    ExtendedSystem sys{Matrix<CPoly>(k, k, CPoly()), std::vector<CPoly>(k)};
    int row = 0;
    for (size_t j = 0; j < s.mu.size(); ++j) {
        const int m = s.m[j], len = 2 * m;
        const cd mu = s.mu[j];
        if (s.W[j].rows() != m || s.W[j].cols() != len) throw InputError("subspace basis has wrong shape");
        Series hinv = series_inv(local_factor(s.mu, s.m, static_cast<int>(j), len));
        // exp(sum_s t_s ((mu - 1 + w)^s - (mu - 1)^s))
        Series ex(len, 0.0);
        for (size_t i = 0; i < t.size(); ++i) {
            Series pw = poly_series(CPoly::monomial(1.0, static_cast<int>(i) + 1), mu - 1.0, len);
            for (int r = 1; r < len; ++r) ex[r] += t[i] * pw[r];
        }
        Series E = series_mul(series_exp(ex), hinv);
        // z^e in w: binom(e, q) (mu - 1)^{e - q}
        std::vector<Series> Z(k + 1);
        for (int e = 0; e <= k; ++e) Z[e] = poly_series(CPoly::monomial(1.0, e), mu - 1.0, len);
        for (int b = 0; b < m; ++b, ++row) {
            Series g(len);
            for (int c = 0; c < len; ++c) g[c] = s.W[j](b, c);
            Series G = series_mul(g, E);
            // F_r(x) = sum_{a + c = r} binom(x, a) mu^{-a} G_c
            std::vector<CPoly> F(len);
            for (int a = 0; a < len; ++a) {
                CPoly ba = std::pow(mu, -a) * binom_poly<cd>(a);
                for (int c = 0; a + c < len; ++c) F[a + c] = F[a + c] + G[c] * ba;
            }
            for (int sidx = 1; sidx <= k; ++sidx) {
                CPoly entry;
                for (int r = 0; r < len; ++r) entry = entry + Z[k - sidx][len - 1 - r] * F[r];
                sys.M(row, sidx - 1) = entry;
            }
            CPoly rh;
            for (int r = 0; r < len; ++r) rh = rh - Z[k][len - 1 - r] * F[r];
            sys.rhs[row] = rh;
        }
    }
    return sys;
}

// Psi at a numeric x: coefficients of z^k + sum xi_s z^{k-s}, ascending in z.
inline CPoly extended_psi(const ExtendedSpectrum& s, const std::vector<cd>& t, const cd& x) {
    auto sys = extended_system(s, t);
    const int k = s.k();
    CMat A(k, k);
    CVec b(k);
    for (int i = 0; i < k; ++i) {
        b(i) = sys.rhs[i](x);
        for (int j = 0; j < k; ++j) A(i, j) = sys.M(i, j)(x);
    }
    Eigen::FullPivLU<CMat> lu(A);
    if (!lu.isInvertible()) throw SingularSystem("extended system is singular at the sample point");
    CVec xi = lu.solve(b);
    std::vector<cd> c(k + 1);
    c[k] = 1.0;
    for (int sidx = 1; sidx <= k; ++sidx) c[k - sidx] = xi(sidx - 1);
    return CPoly(c);
}

// y = det M (made monic) and (u, gamma) with gamma_i the residue of xi_1 at u_i.
inline InverseResult extended_inverse(const ExtendedSpectrum& s, const std::vector<cd>& t = {},
                                      const SpectralOptions& opt = {}) {
    auto sys = extended_system(s, t);
    const int k = s.k();
    InverseResult r;
    CPoly y = det_expand(sys.M, CPoly(cd(1)));
    trim_small(y);
    if (y.zero()) throw SingularSystem("determinant of the extended system vanishes identically");
    Matrix<CPoly> M1 = sys.M;
    for (int i = 0; i < k; ++i) M1(i, 0) = sys.rhs[i];
    CPoly n1 = det_expand(M1, CPoly(cd(1)));
    const cd lead = y.lead();
    r.y = (1.0 / lead) * y;
    r.point.u = separated_roots(r.y, opt.collision_tol);
    CPoly dy = y.derivative();
    for (cd u : r.point.u) r.point.gamma.push_back(n1(u) / dy(u));
    return r;
}

} // namespace bae
