#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bae/bethe.hpp"
#include "bae/core/mfrac.hpp"
#include "bae/core/numeric.hpp"
#include "bae/generation.hpp"

namespace bae {

// Bivariate objects here use variable 0 for x and variable 1 for z.
inline constexpr int kVarZ = 1;

inline ExactPoly in_x(const QPoly& p, int nvars = 2) { return ExactPoly::from_univariate(p, 0, nvars); }
inline ExactPoly z_pow(int e, int v = kVarZ, int nvars = 2) {
    std::vector<int> ex(nvars, 0);
    ex[v] = e;
    return ExactPoly::monomial(Rat(1), ex, nvars);
}
inline MFrac to_mfrac(const QRatFunc& f, int nvars = 2) { return MFrac(in_x(f.num(), nvars), in_x(f.den(), nvars)); }

// v_n(x) = y_n(x) y_{n+1}(x+1) / (y_n(x+1) y_{n+1}(x)), n = 1..N.
inline std::vector<QRatFunc> v_sequence(const SolutionTuple& y) {
    if (!is_generic(y)) throw NonGenericInput("tuple is not generic");
    const Rat one(1);
    std::vector<QRatFunc> v;
    for (int n = 1; n <= y.N(); ++n)
        v.emplace_back(y.y(n) * y.y(n + 1).shift(one), y.y(n).shift(one) * y.y(n + 1));
    return v;
}

// Residues as elements of the quotient rings Q[X]/(y_n) and Q[X]/(y_{n+1}):
// evaluating gamma at the root u_i of y_n gives the residue of v_n at u_i - 1,
// evaluating eps at a root of y_{n+1} gives the residue of v_n there.
struct ExactResidues {
    int n = 0;
    QPoly mod_gamma, gamma;
    QPoly mod_eps, eps;
};

struct ResidueData {
    int n = 0;
    std::vector<cd> roots, gamma;      // roots of y_n
    std::vector<cd> next_roots, eps;   // roots of y_{n+1}
};

inline QPoly reduce_mod(const QPoly& a, const QPoly& m) { return m.degree() <= 0 ? QPoly() : a % m; }

inline QPoly quotient_inverse(const QPoly& a, const QPoly& m, const char* what) {
    try {
        return inverse_mod(reduce_mod(a, m), m);
    } catch (const NonGenericInput&) {
        throw NonGenericInput(std::string(what) + " is not invertible modulo y");
    }
}

inline ExactResidues residues_exact(const SolutionTuple& y, int n) {
    if (!is_generic(y)) throw NonGenericInput("tuple is not generic");
    const Rat one(1), mone(-1);
    ExactResidues r;
    r.n = n;
    const QPoly& a = y.y(n);
    const QPoly& b = y.y(n + 1);
    r.mod_gamma = a;
    r.mod_eps = b;
    if (a.degree() > 0) {
        QPoly num = a.shift(mone) * b;
        QPoly den = a.derivative() * b.shift(mone);
        r.gamma = reduce_mod(num * quotient_inverse(den, a, "y_n' y_{n+1}(x-1)"), a);
    }
    if (b.degree() > 0) {
        QPoly num = a * b.shift(one);
        QPoly den = a.shift(one) * b.derivative();
        r.eps = reduce_mod(num * quotient_inverse(den, b, "y_n(x+1) y_{n+1}'"), b);
    }
    return r;
}

inline ResidueData residues_numeric(const SolutionTuple& y, int n, double tol = 1e-9) {
    if (!is_generic(y)) throw NonGenericInput("tuple is not generic");
    const Rat one(1);
    const CPoly a = to_complex(y.y(n)), b = to_complex(y.y(n + 1));
    const CPoly da = a.derivative(), db = b.derivative();
    ResidueData r;
    r.n = n;
    if (a.degree() > 0) r.roots = simple_roots(y.y(n), tol);
    if (b.degree() > 0) r.next_roots = simple_roots(y.y(n + 1), tol);
    for (cd u : r.roots) r.gamma.push_back(a.eval(u - 1.0) * b.eval(u) / (da.eval(u) * b.eval(u - 1.0)));
    for (cd u : r.next_roots) r.eps.push_back(a.eval(u) * b.eval(u + 1.0) / (a.eval(u + 1.0) * db.eval(u)));
    return r;
}

// gamma^{(n+1)} + eps^{(n)} vanishes in Q[X]/(y_{n+1}) for every n.
inline bool residue_relation_holds(const SolutionTuple& y) {
    for (int n = 1; n <= y.N(); ++n) {
        auto cur = residues_exact(y, n);
        auto nxt = residues_exact(y, n + 1);
        if (!reduce_mod(nxt.gamma + cur.eps, y.y(n + 1)).zero()) return false;
    }
    return true;
}

// Gauge-stripped wave function R_n = num(x,z) / (y_n(x) z^zpow).
struct StrippedBA {
    int n = 0;
    ExactPoly num{2};
    QPoly den_x{Rat(1)};
    int zpow = 0;
    QPoly q{Rat(1)};  // normalizing polynomial in z, monic with q(0) != 0
    int kappa = 0;

    MFrac frac() const { return MFrac(num, in_x(den_x) * z_pow(zpow)); }
    template <class T> T eval(const T& x, const T& z) const {
        return num.evaluate(std::vector<T>{x, z}) / (den_x.eval(x) * pow_int(z, zpow));
    }
    // Degree in z of the numerator equals zpow and the top coefficient is den_x.
    bool tends_to_one() const {
        return num.degree_in(kVarZ) == zpow && num.coeff_in(kVarZ, zpow) == in_x(den_x);
    }
    void canonicalize() {
        while (zpow > 0 && !num.zero()) {
            bool all = true;
            for (auto& t : num.terms())
                if (ExactPoly::exponent(t.first, kVarZ) == 0) {
                    all = false;
                    break;
                }
            if (!all) break;
            num = num.exact_div(z_pow(1));
            --zpow;
        }
    }
    friend bool operator==(const StrippedBA& a, const StrippedBA& b) { return equal(a.frac(), b.frac()); }

  private:
    template <class T> static T pow_int(const T& z, int e) {
        T r(1);
        for (int i = 0; i < e; ++i) r = r * z;
        return r;
    }
};

// Matrix of the operator c -> gamma * K(c) on Q[X]/(y), where K(c) evaluated
// at u_i equals sum_j c(u_j) / (u_i - u_j - 1).  The linear problem reads
// ((1+z) I - M) C = gamma.
inline Matrix<Rat> spectral_operator(const QPoly& yn, const QPoly& gamma) {
    const int k = yn.degree();
    const Rat mone(-1);
    const QPoly dy = yn.derivative();
    const QPoly inv_shift = quotient_inverse(yn.shift(mone), yn, "y_n(x-1)");
    Matrix<Rat> M(k, k);
    for (int r = 0; r < k; ++r) {
        QPoly P = reduce_mod(QPoly::monomial(Rat(1), r) * dy, yn);
        QPoly Kc = reduce_mod(P.shift(mone) * inv_shift, yn);
        QPoly col = reduce_mod(gamma * Kc, yn);
        for (int i = 0; i < k; ++i) M(i, r) = col[i];
    }
    return M;
}

inline StrippedBA build_psi(const SolutionTuple& y, int n) {
    StrippedBA s;
    s.n = n;
    const QPoly& yn = y.y(n);
    s.den_x = yn;
    const int k = yn.degree();
    if (k == 0) {
        s.num = ExactPoly(Rat(1), 2);
        return s;
    }
    auto res = residues_exact(y, n);
    Matrix<Rat> M = spectral_operator(yn, res.gamma);
    auto fl = faddeev_leverrier(M);

    // C_r(z) = sum_i (adj_i gamma)_r (1+z)^{k-i} / p(1+z), coordinates in the
    // monomial basis of Q[X]/(y_n).
    std::vector<Rat> gv(k);
    for (int i = 0; i < k; ++i) gv[i] = res.gamma[i];
    const QPoly w = QPoly(std::vector<Rat>{Rat(1), Rat(1)});
    std::vector<QPoly> Cnum(k);
    for (int i = 1; i <= k; ++i) {
        auto col = fl.adj[i - 1] * gv;
        QPoly wp = pow(w, k - i);
        for (int r = 0; r < k; ++r)
            if (col[r] != 0) Cnum[r] = Cnum[r] + col[r] * wp;
    }
    QPoly D = QPoly(fl.charpoly).shift(Rat(1));
    QPoly g = D;
    for (auto& c : Cnum)
        if (!c.zero()) g = gcd(g, c);
    if (g.degree() > 0) {
        D = D / g;
        for (auto& c : Cnum) c = c / g;
    }
    Rat lead = D.lead();
    D = D.monic();
    for (auto& c : Cnum) c = (1 / lead) * c;

    int p = 0;
    while (p <= D.degree() && D[p] == 0) ++p;
    s.q = QPoly(std::vector<Rat>(D.c.begin() + p, D.c.end()));
    s.kappa = s.q.degree();

    // y_n R = y_n + sum_r C_r(z) [X^r y_n'] mod y_n.
    const QPoly dy = yn.derivative();
    ExactPoly Phat(2);
    for (int r = 0; r < k; ++r) {
        if (Cnum[r].zero()) continue;
        Phat = Phat + ExactPoly::from_univariate(Cnum[r], kVarZ, 2) *
                          in_x(reduce_mod(QPoly::monomial(Rat(1), r) * dy, yn));
    }
    s.num = in_x(yn) * ExactPoly::from_univariate(D, kVarZ, 2) + Phat;
    s.zpow = p + s.kappa;
    s.canonicalize();
    return s;
}

inline std::vector<StrippedBA> build_psi_family(const SolutionTuple& y) {
    if (!is_generic(y)) throw NonGenericInput("tuple is not generic");
    if (!verify_bae(y).satisfied) throw BAENotSatisfied("tuple does not satisfy the Bethe equations");
    if (!has_simple_roots(y)) throw NonGenericInput("repeated roots");
    std::vector<StrippedBA> out;
    for (int n = 1; n <= y.N(); ++n) out.push_back(build_psi(y, n));
    return out;
}

// Unnormalized R_n(x,z) = 1 + sum_i C_i(z)/(x - u_i) from numeric roots.
inline cd psi_numeric(const SolutionTuple& y, int n, cd x, cd z, double tol = 1e-9) {
    auto rd = residues_numeric(y, n, tol);
    const int k = static_cast<int>(rd.roots.size());
    if (k == 0) return 1.0;
    CMat L(k, k);
    CVec g(k);
    for (int i = 0; i < k; ++i) {
        g(i) = rd.gamma[i];
        for (int j = 0; j < k; ++j)
            L(i, j) = i == j ? 1.0 + z + rd.gamma[i] : -rd.gamma[i] / (rd.roots[i] - rd.roots[j] - 1.0);
    }
    Eigen::PartialPivLU<CMat> lu(L);
    if (std::abs(lu.determinant()) < 1e-14 * std::max(1.0, L.cwiseAbs().maxCoeff()))
        throw SingularLinearSystem("linear problem is singular at the sample point");
    CVec C = lu.solve(g);
    cd r = 1.0;
    for (int i = 0; i < k; ++i) r += C(i) / (x - rd.roots[i]);
    return r;
}

struct IdentityReport {
    bool ok = true;
    int witness = 0;       // first failing index, 1-based
    ExactPoly residual{2};  // numerator of the failing residual
};

// z R_{n+1} = (1+z) R_n(x+1) - v_n R_n, with R_{N+1} = R_1.
inline IdentityReport verify_laxdd(const std::vector<QRatFunc>& v, const std::vector<StrippedBA>& psis) {
    const int N = static_cast<int>(psis.size());
    if (static_cast<int>(v.size()) != N) throw InputError("potential and wave function lengths differ");
    const MFrac z(z_pow(1)), onez(z_pow(0) + z_pow(1));
    IdentityReport rep;
    for (int n = 0; n < N; ++n) {
        MFrac R = psis[n].frac(), Rn = psis[(n + 1) % N].frac();
        MFrac d = z * Rn - onez * R.shift(0, Rat(1)) + to_mfrac(v[n]) * R;
        if (!d.zero()) {
            rep.ok = false;
            rep.witness = n + 1;
            rep.residual = d.num();
            return rep;
        }
    }
    return rep;
}

inline IdentityReport verify_laxdd(const SolutionTuple& y, const std::vector<StrippedBA>& psis) {
    return verify_laxdd(v_sequence(y), psis);
}

struct GenerationAction {
    SolutionTuple y;
    std::vector<StrippedBA> psis;
    QRatFunc g;
    QRatFunc riccati;  // v_m g(x) - v_{m-1} g(x+1) + g(x) g(x+1)
};

// Psi~_m = Psi_m + g Psi_{m-1}; in stripped form R~_m = R_m + g R_{m-1} / z.
inline GenerationAction generation_action(const SolutionTuple& y, const std::vector<StrippedBA>& psis, int m,
                                          const Rat& c) {
    const int N = y.N();
    if (static_cast<int>(psis.size()) != N) throw InputError("wave function count differs from tuple length");
    auto step = generate_step(y, m, c);
    GenerationAction out;
    out.y = step.y;
    const QPoly& yt = step.y.y(m);
    const Rat beta = -step.scale;  // W(y~_m, y_m) = beta y_{m-1}(x+1) y_{m+1}(x)
    out.g = QRatFunc(beta * y.y(m - 1) * y.y(m + 1), y.y(m) * yt);

    auto v = v_sequence(y);
    const QRatFunc& vm = v[cyc(m, N)];
    const QRatFunc& vp = v[cyc(m - 1, N)];
    QRatFunc g1 = out.g.shift(Rat(1));
    out.riccati = vm * out.g - vp * g1 + out.g * g1;
    if (!out.riccati.zero()) throw InconsistentWave("Riccati identity fails");

    const StrippedBA& Rm = psis[cyc(m, N)];
    const StrippedBA& Rp = psis[cyc(m - 1, N)];
    const int E = std::max(Rm.zpow, Rp.zpow + 1);
    ExactPoly num = Rm.num * in_x(yt) * z_pow(E - Rm.zpow) +
                    beta * in_x(y.y(m + 1)) * Rp.num * z_pow(E - Rp.zpow - 1);
    StrippedBA nt;
    nt.n = Rm.n;
    try {
        nt.num = num.exact_div(in_x(y.y(m)));
    } catch (const std::domain_error&) {
        throw InconsistentWave("transformed wave function has poles outside the new zeros");
    }
    nt.den_x = yt;
    nt.zpow = E;
    nt.canonicalize();
    out.psis = psis;
    out.psis[cyc(m, N)] = nt;
    return out;
}

// (1+z) Phi(x+1) = (Lambda(z) + V(x)) Phi with Phi_n = z^n R_n, Lambda the
// cyclic shift with z^N in the corner and V = diag(v_n).
inline IdentityReport miura_check(const std::vector<QRatFunc>& v, const std::vector<StrippedBA>& psis) {
    const int N = static_cast<int>(psis.size());
    if (static_cast<int>(v.size()) != N) throw InputError("potential and wave function lengths differ");
    Matrix<MFrac> A(N, N, MFrac(ExactPoly(2)));
    for (int i = 0; i < N; ++i) {
        A(i, i) = to_mfrac(v[i]);
        if (i + 1 < N) A(i, i + 1) = MFrac(z_pow(0));
    }
    A(N - 1, 0) = N == 1 ? A(0, 0) + MFrac(z_pow(1)) : MFrac(z_pow(N));
    std::vector<MFrac> Phi;
    for (int n = 0; n < N; ++n) Phi.push_back(MFrac(z_pow(n + 1)) * psis[n].frac());
    const MFrac onez(z_pow(0) + z_pow(1));
    IdentityReport rep;
    for (int i = 0; i < N; ++i) {
        MFrac d = onez * Phi[i].shift(0, Rat(1));
        for (int j = 0; j < N; ++j) d = d - A(i, j) * Phi[j];
        if (!d.zero()) {
            rep.ok = false;
            rep.witness = i + 1;
            rep.residual = d.num();
            return rep;
        }
    }
    return rep;
}

inline IdentityReport miura_check(const SolutionTuple& y, const std::vector<StrippedBA>& psis) {
    return miura_check(v_sequence(y), psis);
}

} // namespace bae
