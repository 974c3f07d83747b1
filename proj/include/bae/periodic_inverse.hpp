#pragma once

#include <optional>
#include <vector>

#include "bae/core/mfrac.hpp"
#include "bae/linear_problem.hpp"

namespace bae {

// Variables of the deformed family: x, z, then the active times t_1..t_M.
constexpr int kVarX = 0;
inline int var_t(int j) { return 1 + j; }
inline int family_nvars(int times) { return 2 + times; }

// Rows f_k = sum_j a_{k,j} chi_j, k = 1..N+nu; the first nu rows define psi_0.
struct SpectralMatrixA {
    int N = 0, nu = 0;
    Matrix<Rat> a;  // (N+nu) x (D+1)

    int D() const { return a.cols - 1; }
    int rows() const { return a.rows; }
};

struct NilpotentSeed {
    int N = 0, nu = 0;
    Matrix<Rat> W;  // (N+nu) x (N+nu); top-right nu x nu corner is U

    Matrix<Rat> U() const {
        Matrix<Rat> u(nu, nu);
        for (int i = 0; i < nu; ++i)
            for (int j = 0; j < nu; ++j) u(i, j) = W(i, N + j);
        return u;
    }
};

inline void check_shape(const SpectralMatrixA& A) {
    if (A.N < 1 || A.nu < 0) throw InputError("need N >= 1 and nu >= 0");
    if (A.a.rows != A.N + A.nu) throw InputError("A must have N + nu rows");
    if (A.a.cols < 1) throw InputError("A needs at least one column");
}

// Elementary symmetric-type coefficients of exp(sum_{j<=M} t_j z^j).
inline std::vector<ExactPoly> exp_coefficients(int n, int times) {
    const int nv = family_nvars(times);
    std::vector<ExactPoly> h{ExactPoly(Rat(1), nv)};
    for (int k = 1; k <= n; ++k) {
        ExactPoly s(nv);
        for (int j = 1; j <= std::min(k, times); ++j) s = s + Rat(j) * (ExactPoly::var(var_t(j), nv) * h[k - j]);
        h.push_back(Rat(1, k) * s);
    }
    return h;
}

// chi_0..chi_n: the z-expansion coefficients of (1+z)^x exp(sum t_j z^j).
inline std::vector<ExactPoly> chi_table(int n, int times) {
    const int nv = family_nvars(times);
    auto h = exp_coefficients(n, times);
    std::vector<ExactPoly> b;
    for (int k = 0; k <= n; ++k) b.push_back(binom_var(k, kVarX, nv));
    std::vector<ExactPoly> out;
    for (int m = 0; m <= n; ++m) {
        ExactPoly s(nv);
        for (int k = 0; k <= m; ++k) s = s + h[m - k] * b[k];
        out.push_back(s);
    }
    return out;
}

inline ExactPoly chi(int n, int times) {
    if (n < 0) throw InputError("chi index must be nonnegative");
    return chi_table(n, times).back();
}

inline bool is_nondegenerate(const SpectralMatrixA& A) {
    for (int n = 0; n <= A.N; ++n) {
        const int r = n + A.nu;
        if (r == 0) continue;
        Matrix<Rat> top(r, A.a.cols);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < A.a.cols; ++j) top(i, j) = A.a(i, j);
        if (rank(top) != r) return false;
    }
    return true;
}

namespace detail {
// Delta^s f_k = sum_j a_{k,j} chi_{j-s}.
inline ExactPoly difference_of_row(const Matrix<Rat>& a, int k, int s, const std::vector<ExactPoly>& chis) {
    ExactPoly r(chis[0].nvars());
    for (int j = s; j < a.cols; ++j)
        if (a(k, j) != 0) r = r + a(k, j) * chis[j - s];
    return r;
}
inline ExactPoly difference_of_row(const SpectralMatrixA& A, int k, int s, const std::vector<ExactPoly>& chis) {
    return difference_of_row(A.a, k, s, chis);
}

// y = det[Delta^{m-l} f_k] over the first m rows and the numerator P of
// R = P / y = z^m + ..., from Cramer's rule on the defining linear system.
// chis must reach chi_{a.cols - 1}.
inline std::pair<ExactPoly, ExactPoly> wave_pair(const Matrix<Rat>& a, int m, const std::vector<ExactPoly>& chis) {
    const int nv = chis[0].nvars();
    const ExactPoly zvar = ExactPoly::var(kVarZ, nv);
    Matrix<ExactPoly> M(m, m, ExactPoly(nv));
    std::vector<ExactPoly> F;
    for (int k = 0; k < m; ++k) {
        for (int l = 1; l <= m; ++l) M(k, l - 1) = difference_of_row(a, k, m - l, chis);
        F.push_back(-difference_of_row(a, k, m, chis));
    }
    ExactPoly y = det(M, nv);
    if (y.zero()) throw SingularWronskian("discrete Wronskian vanishes");
    ExactPoly P = y * zvar.pow(m);
    for (int l = 1; l <= m; ++l) {
        auto Ml = M;
        for (int k = 0; k < m; ++k) Ml(k, l - 1) = F[k];
        P = P + det(Ml, nv) * zvar.pow(m - l);
    }
    return {y, P};
}
} // namespace detail

inline std::vector<ExactPoly> f_family(const SpectralMatrixA& A, int times = 0) {
    check_shape(A);
    if (!is_nondegenerate(A)) throw DegenerateA("leading row blocks of A are rank deficient");
    auto chis = chi_table(A.D(), times);
    std::vector<ExactPoly> f;
    for (int k = 0; k < A.rows(); ++k) f.push_back(detail::difference_of_row(A, k, 0, chis));
    return f;
}

// Wronskian det[d^j f_i / dt_1^j].
inline ExactPoly wronskian_t1(const std::vector<ExactPoly>& fs) {
    const int n = static_cast<int>(fs.size());
    if (n == 0) return ExactPoly(Rat(1), 2);
    const int nv = fs[0].nvars();
    Matrix<ExactPoly> m(n, n, ExactPoly(nv));
    for (int i = 0; i < n; ++i) {
        ExactPoly d = fs[i];
        for (int j = 0; j < n; ++j) {
            m(i, j) = d;
            d = d.derivative(var_t(1));
        }
    }
    return det(m, nv);
}

// psi_n = Omega * R_n with R_n = P_n / y_n, P_n = y_n z^{n+nu} + sum_l num_l z^{n+nu-l}.
struct BAFamily {
    int N = 0, nu = 0, times = 0;
    std::vector<ExactPoly> y;  // n = 0..N, y_n = det M^(n)
    std::vector<ExactPoly> P;  // numerators of R_n

    int order(int n) const { return n + nu; }
    MFrac R(int n) const { return MFrac(P[n], y[n]); }
    // xi_l^(n) for l = 1..n+nu, zero beyond.
    MFrac xi(int n, int l) const {
        const int nv = family_nvars(times);
        if (l > order(n)) return MFrac(ExactPoly(nv));
        return MFrac(P[n].coeff_in(kVarZ, order(n) - l), y[n]);
    }
};

inline BAFamily build_family(const SpectralMatrixA& A, int times = 0) {
    check_shape(A);
    if (!is_nondegenerate(A)) throw DegenerateA("leading row blocks of A are rank deficient");
    auto chis = chi_table(A.D(), times);
    BAFamily fam;
    fam.N = A.N;
    fam.nu = A.nu;
    fam.times = times;
    for (int n = 0; n <= A.N; ++n) {
        auto [y, P] = detail::wave_pair(A.a, n + A.nu, chis);
        fam.y.push_back(y);
        fam.P.push_back(P);
    }
    return fam;
}

inline MFrac potential(const BAFamily& fam, int n) {
    const Rat one(1);
    const ExactPoly &a = fam.y[n], &b = fam.y[n + 1];
    return MFrac(a * b.shift(kVarX, one), a.shift(kVarX, one) * b);
}

// R_{n+1} = (1+z) R_n(x+1) - v_n R_n for n = 0..N-1, cleared of denominators.
inline IdentityReport family_laxdd(const BAFamily& fam) {
    const Rat one(1);
    const int nv = family_nvars(fam.times);
    const ExactPoly onez = ExactPoly(Rat(1), nv) + ExactPoly::var(kVarZ, nv);
    IdentityReport rep;
    rep.ok = true;
    for (int n = 0; n < fam.N; ++n) {
        const ExactPoly &yn = fam.y[n], &ym = fam.y[n + 1];
        ExactPoly lhs = fam.P[n + 1] * yn.shift(kVarX, one);
        ExactPoly rhs = onez * fam.P[n].shift(kVarX, one) * ym - ym.shift(kVarX, one) * fam.P[n];
        if (lhs != rhs) {
            rep.ok = false;
            rep.witness = n + 1;
            return rep;
        }
    }
    return rep;
}

inline bool proportional(const ExactPoly& a, const ExactPoly& b) {
    if (a.zero() || b.zero()) return a.zero() && b.zero();
    return b.leading().second * a == a.leading().second * b;
}

// y_N = y_0 up to a constant and R_N = z^N R_0.
inline bool check_periodicity(const BAFamily& fam) {
    const int nv = family_nvars(fam.times);
    if (!proportional(fam.y[fam.N], fam.y[0])) return false;
    return fam.P[fam.N] * fam.y[0] == ExactPoly::var(kVarZ, nv).pow(fam.N) * fam.P[0] * fam.y[fam.N];
}

// Substitute numeric times into the family polynomials and keep x (and z).
inline ExactPoly at_times(const ExactPoly& p, const std::vector<Rat>& t) {
    ExactPoly r = p;
    for (int j = 1; j <= static_cast<int>(t.size()); ++j) r = r.substitute(var_t(j), t[j - 1]);
    return r;
}

inline SolutionTuple tuple_at(const BAFamily& fam, const std::vector<Rat>& t = {}) {
    std::vector<QPoly> polys;
    for (int n = 1; n <= fam.N; ++n) {
        std::vector<Rat> full(fam.times, Rat(0));
        for (size_t j = 0; j < t.size() && j < full.size(); ++j) full[j] = t[j];
        polys.push_back(at_times(fam.y[n], full).restrict_to(kVarX));
    }
    return SolutionTuple(polys);
}

inline SolutionTuple bethe_from_A(const SpectralMatrixA& A) {
    auto fam = build_family(A, 0);
    if (!check_periodicity(fam)) throw PeriodicityFailure("family does not extend periodically");
    return tuple_at(fam);
}

inline SpectralMatrixA m_extend(const SpectralMatrixA& A, int m) {
    if (m < 0) throw InputError("extension must be nonnegative");
    SpectralMatrixA r{A.N, A.nu, Matrix<Rat>(A.a.rows, A.a.cols + m)};
    for (int i = 0; i < A.a.rows; ++i)
        for (int j = 0; j < A.a.cols; ++j) r.a(i, j) = A.a(i, j);
    return r;
}

// Smallest r with U^r = 0, or nullopt if U is not nilpotent.
inline std::optional<int> nilpotency_index(const Matrix<Rat>& U) {
    const int n = U.rows;
    Matrix<Rat> P = Matrix<Rat>::identity(n);
    for (int r = 0; r <= n; ++r) {
        if (P.is_zero_matrix()) return r;
        P = P * U;
    }
    return std::nullopt;
}

// A = W diag(E_N, Q) with Q = (v_1..v_N, U v_1, .., U^{nu-1} v_N).
inline SpectralMatrixA seed_to_A(const NilpotentSeed& s) {
    const int N = s.N, nu = s.nu, R = N + nu;
    if (N < 1 || nu < 0 || s.W.rows != R || s.W.cols != R) throw InputError("seed must be (N+nu) x (N+nu)");
    auto U = s.U();
    if (!nilpotency_index(U)) throw NotNilpotent("upper-right corner is not nilpotent");
    const int cols = N * (nu + 1);
    Matrix<Rat> Q(nu, N * nu);
    for (int j = 0; j < N * nu; ++j)
        for (int i = 0; i < nu; ++i) {
            if (j < N) Q(i, j) = s.W(i, j);
            else {
                Rat acc(0);
                for (int l = 0; l < nu; ++l) acc += U(i, l) * Q(l, j - N);
                Q(i, j) = acc;
            }
        }
    Matrix<Rat> P(R, cols);
    for (int i = 0; i < N; ++i) P(i, i) = 1;
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < N * nu; ++j) P(N + i, N + j) = Q(i, j);
    return SpectralMatrixA{N, nu, s.W * P};
}

// Inverse of seed_to_A up to extension: solve W diag(E_N, A0) = [A | 0].
inline NilpotentSeed seed_from_A(const SpectralMatrixA& A) {
    check_shape(A);
    const int N = A.N, nu = A.nu, R = N + nu, C = A.a.cols;
    NilpotentSeed s{N, nu, Matrix<Rat>(R, R)};
    Matrix<Rat> A0t(C, nu);
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < C; ++j) A0t(j, i) = A.a(i, j);
    for (int r = 0; r < R; ++r) {
        for (int j = 0; j < N; ++j) s.W(r, j) = j < C ? A.a(r, j) : Rat(0);
        std::vector<Rat> b(C, Rat(0));
        for (int j = N; j < C; ++j) b[j - N] = A.a(r, j);
        if (nu == 0) {
            for (auto& e : b)
                if (e != 0) throw PeriodicityFailure("A is not of seed form");
            continue;
        }
        auto sol = solve_linear(A0t, b);
        if (sol.status == SolveStatus::NoSolution) throw PeriodicityFailure("A is not of seed form");
        for (int i = 0; i < nu; ++i) s.W(r, N + i) = sol.particular[i];
    }
    if (!nilpotency_index(s.U())) throw NotNilpotent("recovered corner is not nilpotent");
    return s;
}

// ---- reconstruction of A from a solution -----------------------------------

inline QPoly binom_x(int r) {
    if (r < 0) return QPoly();
    QPoly p(Rat(1));
    for (int i = 0; i < r; ++i) p = Rat(1, i + 1) * (p * QPoly::linear(Rat(i)));
    return p;
}

// Polynomial kernel {sum_d a_d binom(x,d), d <= D} of sum_j c_j(x) Delta^j.
inline std::vector<std::vector<Rat>> difference_kernel(const std::vector<QPoly>& c, int D) {
    std::vector<QPoly> cols;
    int deg = 0;
    for (int d = 0; d <= D; ++d) {
        QPoly p;
        for (size_t j = 0; j < c.size(); ++j) p = p + c[j] * binom_x(d - static_cast<int>(j));
        deg = std::max(deg, p.degree());
        cols.push_back(p);
    }
    Matrix<Rat> M(deg + 1, D + 1);
    for (int d = 0; d <= D; ++d)
        for (int i = 0; i <= cols[d].degree(); ++i) M(i, d) = cols[d][i];
    return solve_linear(M, std::vector<Rat>(deg + 1, Rat(0))).nullspace;
}

struct Reconstruction {
    SpectralMatrixA A;
    std::vector<int> kernel_degree;  // highest binomial degree used per level
};

// Build A from a solution: psi_n at t = 0 corresponds to the difference
// operator whose polynomial kernel is spanned by f_1..f_{n+nu}; a basis
// adapted to the nested kernels gives the rows.
inline Reconstruction A_from_tuple(const SolutionTuple& y, int max_degree = 80) {
    auto psis = build_psi_family(y);
    const int N = y.N();
    int nu = psis[N - 1].zpow;
    for (int n = 1; n <= N; ++n) nu = std::max(nu, psis[n - 1].zpow - n);
    auto op = [&](int n) {
        const StrippedBA& s = psis[(n == 0 ? N : n) - 1];
        const int m = n + nu;
        ExactPoly P = s.num * z_pow(m - s.zpow);
        std::vector<QPoly> c;
        for (int j = 0; j <= m; ++j) c.push_back(P.coeff_in(kVarZ, j).restrict_to(kVarX));
        return c;
    };
    std::vector<std::vector<QPoly>> ops;
    for (int n = 0; n <= N; ++n) ops.push_back(op(n));
    int D = N + nu - 1;
    std::vector<std::vector<Rat>> top;
    for (; D <= max_degree; ++D) {
        top = difference_kernel(ops[N], D);
        if (static_cast<int>(top.size()) == N + nu) break;
    }
    if (D > max_degree) throw TruncationExceeded("polynomial kernel not found below the degree limit");
    Reconstruction rec;
    rec.A = SpectralMatrixA{N, nu, Matrix<Rat>(N + nu, D + 1)};
    std::vector<std::vector<Rat>> rows;
    auto row_rank = [&](const std::vector<std::vector<Rat>>& rs) {
        if (rs.empty()) return 0;
        Matrix<Rat> m(static_cast<int>(rs.size()), D + 1);
        for (size_t i = 0; i < rs.size(); ++i)
            for (int j = 0; j <= D; ++j) m(static_cast<int>(i), j) = rs[i][j];
        return rank(m);
    };
    for (int n = 0; n <= N; ++n) {
        auto ker = difference_kernel(ops[n], D);
        if (static_cast<int>(ker.size()) != n + nu) throw InconsistentWave("kernel dimension differs from operator order");
        for (auto& v : ker) {
            if (static_cast<int>(rows.size()) == n + nu) break;
            auto trial = rows;
            trial.push_back(v);
            if (row_rank(trial) == static_cast<int>(trial.size())) rows = trial;
        }
        if (static_cast<int>(rows.size()) != n + nu) throw InconsistentWave("kernels are not nested");
        int top_deg = 0;
        for (auto& r : rows)
            for (int j = 0; j <= D; ++j)
                if (r[j] != 0) top_deg = std::max(top_deg, j);
        rec.kernel_degree.push_back(top_deg);
    }
    for (int i = 0; i < N + nu; ++i)
        for (int j = 0; j <= D; ++j) rec.A.a(i, j) = rows[i][j];
    return rec;
}

} // namespace bae
