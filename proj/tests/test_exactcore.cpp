#include <gtest/gtest.h>

#include "bae/core/linalg.hpp"
#include "bae/core/ratfunc.hpp"
#include "bae/core/series.hpp"
#include "oracles.hpp"

using namespace bae;

namespace {

ExactPoly X(int nv = 2) { return ExactPoly::var(0, nv); }
ExactPoly T1(int nv = 2) { return ExactPoly::var(1, nv); }
ExactPoly C(long a, int nv = 2) { return ExactPoly(Rat(a), nv); }

ExactPoly random_poly(std::mt19937_64& rng, int nv, int deg) {
    ExactPoly p(nv);
    std::uniform_int_distribution<int> e(0, deg);
    for (int i = 0; i < 4; ++i) {
        std::vector<int> ex(nv);
        for (auto& v : ex) v = e(rng);
        p += ExactPoly::monomial(oracle::random_rat(rng), ex, nv);
    }
    return p;
}

} // namespace

TEST(Rat, ParsesCanonicalForms) {
    EXPECT_EQ(parse_rat("6/4"), Rat(3, 2));
    EXPECT_EQ(parse_rat(" -7 "), Rat(-7));
    EXPECT_EQ(parse_rat("1.25"), Rat(5, 4));
    EXPECT_THROW(parse_rat("1/0"), InputError);
    EXPECT_THROW(parse_rat("abc"), InputError);
    EXPECT_EQ(str(Rat(-3, 4)), "-3/4");
}

TEST(Poly, DivisionGcdAndShift) {
    QPoly x = QPoly::X();
    QPoly p = x * x - QPoly(Rat(1));
    auto [q, r] = p.divmod(x - QPoly(Rat(1)));
    EXPECT_EQ(q, x + QPoly(Rat(1)));
    EXPECT_TRUE(r.zero());
    EXPECT_EQ(gcd(p, x * x + x), x + QPoly(Rat(1)));
    EXPECT_EQ((x * x).shift(Rat(1)), x * x + QPoly(Rat(2)) * x + QPoly(Rat(1)));
    QPoly inv = inverse_mod(x, x * x + QPoly(Rat(1)));
    EXPECT_EQ((inv * x) % (x * x + QPoly(Rat(1))), QPoly(Rat(1)));
}

TEST(ExactPoly, ShiftExamples) {
    EXPECT_EQ((X() * X()).shift(0, Rat(1)), X() * X() + C(2) * X() + C(1));
    EXPECT_EQ(X().shift(0, Rat(0)), X());
    EXPECT_EQ((X() * T1()).shift(0, Rat(1)), X() * T1() + T1());
}

TEST(ExactPoly, ShiftRoundTrip) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20; ++i) {
        ExactPoly p = random_poly(rng, 3, 4);
        Rat a = oracle::random_rat(rng);
        EXPECT_EQ(p.shift(0, a).shift(0, -a), p);
        EXPECT_EQ(p.shift(1, a).shift(1, -a), p);
    }
}

TEST(ExactPoly, ExactDivisionRecoversFactor) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 20; ++i) {
        ExactPoly a = random_poly(rng, 3, 3), b = random_poly(rng, 3, 3);
        if (b.zero()) continue;
        EXPECT_EQ((a * b).exact_div(b), a);
    }
    EXPECT_THROW(X().exact_div(X() + C(1)), std::domain_error);
}

TEST(ExactPoly, EvaluateAndSubstitute) {
    ExactPoly p = X() * X() * T1() + C(3) * T1() - C(1);
    EXPECT_EQ(p.evaluate<Rat>({Rat(2), Rat(1, 2)}), Rat(5, 2));
    EXPECT_EQ(p.substitute(1, Rat(0)), C(-1));
    EXPECT_EQ(p.derivative(0), C(2) * X() * T1());
}

TEST(DiscreteWronskian, Examples) {
    EXPECT_EQ(discrete_wronskian({C(1, 1), X(1)}), C(1, 1));
    ExactPoly f = X(1) * X(1) + C(3, 1);
    EXPECT_TRUE(discrete_wronskian({f, f}).zero());
    EXPECT_EQ(discrete_wronskian({X(1), X(1) * X(1)}), X(1) * X(1) + X(1));
}

TEST(DiscreteWronskian, MatchesShiftDefinition) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<ExactPoly> fs;
        for (int i = 0; i < 3; ++i) fs.push_back(random_poly(rng, 2, 3));
        Matrix<ExactPoly> m(3, 3, ExactPoly(2));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = fs[i].shift(0, Rat(j));
        EXPECT_EQ(discrete_wronskian(fs), oracle::cofactor_det(m, ExactPoly(Rat(1), 2)));
    }
}

TEST(DiscreteWronskian, LeadingOneReducesToDifferences) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<ExactPoly> fs, dfs;
        fs.push_back(ExactPoly(Rat(1), 2));
        for (int i = 0; i < 3; ++i) {
            ExactPoly f = random_poly(rng, 2, 3);
            fs.push_back(f);
            dfs.push_back(forward_difference(f));
        }
        EXPECT_EQ(discrete_wronskian(fs), discrete_wronskian(dfs));
    }
}

TEST(DiscreteWronskian, JacobiTypeIdentity) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 6; ++trial) {
        std::vector<ExactPoly> f;
        for (int i = 0; i < 2; ++i) f.push_back(random_poly(rng, 1, 3));
        ExactPoly g1 = random_poly(rng, 1, 3), g2 = random_poly(rng, 1, 3);
        auto with = [&](std::vector<ExactPoly> extra) {
            std::vector<ExactPoly> v = f;
            v.insert(v.end(), extra.begin(), extra.end());
            return discrete_wronskian(v);
        };
        ExactPoly lhs = discrete_wronskian({with({g1}), with({g2})});
        // The shift sits on the shorter Wronskian (Desnanot-Jacobi on the
        // 3x3 block); with f empty this reduces to W(g1, g2) = W(g1, g2).
        ExactPoly rhs = discrete_wronskian(f).shift(0, Rat(1)) * with({g1, g2});
        EXPECT_EQ(lhs, rhs);
        if (!lhs.zero()) EXPECT_NE(lhs, discrete_wronskian(f) * with({g1, g2}).shift(0, Rat(1)));
    }
}

TEST(Linalg, SolveExamples) {
    Matrix<Rat> I = Matrix<Rat>::identity(3);
    auto s = solve_linear(I, {Rat(1), Rat(2), Rat(3)});
    ASSERT_EQ(s.status, SolveStatus::Unique);
    EXPECT_EQ(s.particular, (std::vector<Rat>{1, 2, 3}));

    Matrix<Rat> m(2, 2);
    m(0, 0) = 1; m(0, 1) = 1; m(1, 0) = 2; m(1, 1) = 2;
    auto p = solve_linear(m, {Rat(1), Rat(2)});
    ASSERT_EQ(p.status, SolveStatus::Parametrized);
    EXPECT_EQ(p.particular, (std::vector<Rat>{1, 0}));
    ASSERT_EQ(p.nullspace.size(), 1u);
    EXPECT_EQ(p.nullspace[0], (std::vector<Rat>{-1, 1}));
    EXPECT_EQ(solve_linear(m, {Rat(1), Rat(3)}).status, SolveStatus::NoSolution);
}

TEST(Linalg, DeterminantExamples) {
    Matrix<Rat> a(1, 1);
    a(0, 0) = Rat(7, 3);
    EXPECT_EQ(det(a), Rat(7, 3));
    Matrix<Rat> b(2, 2);
    b(0, 0) = 1; b(0, 1) = 2; b(1, 0) = 3; b(1, 1) = 4;
    EXPECT_EQ(det(b), Rat(-2));
    // Cauchy-type matrix gamma_i / (u_i - u_j - 1) with u = (0, 3), gamma = (1, 1).
    Matrix<Rat> c(2, 2);
    std::vector<Rat> u{0, 3};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c(i, j) = Rat(1) / (u[i] - u[j] - 1);
    EXPECT_EQ(det(c), oracle::cofactor_det(c, Rat(1)));
}

TEST(Linalg, BareissMatchesCofactorExpansion) {
    std::mt19937_64 rng(13);
    for (int n = 1; n <= 5; ++n)
        for (int trial = 0; trial < 5; ++trial) {
            Matrix<Rat> m(n, n);
            for (auto& e : m.a) e = oracle::random_rat(rng, 3, 3);
            if (trial == 0 && n > 1) m(0, 0) = 0;  // force a pivot swap
            EXPECT_EQ(det(m), oracle::cofactor_det(m, Rat(1)));
        }
}

TEST(Linalg, PolynomialBareissMatchesCofactorExpansion) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 4; ++trial) {
        Matrix<ExactPoly> m(3, 3, ExactPoly(2));
        for (auto& e : m.a) e = random_poly(rng, 2, 2);
        EXPECT_EQ(det(m, 2), oracle::cofactor_det(m, ExactPoly(Rat(1), 2)));
    }
}

TEST(Linalg, FaddeevLeverrierAdjugate) {
    std::mt19937_64 rng(19);
    Matrix<Rat> A(3, 3);
    for (auto& e : A.a) e = oracle::random_rat(rng);
    auto res = faddeev_leverrier(A);
    Rat w(5, 7);
    Matrix<Rat> wi = w * Matrix<Rat>::identity(3) - A;
    Rat cp = 0, wp = 1;
    for (auto& c : res.charpoly) {
        cp += c * wp;
        wp *= w;
    }
    EXPECT_EQ(cp, det(wi));
    Matrix<Rat> adj(3, 3);
    for (int i = 1; i <= 3; ++i) {
        Rat pw = 1;
        for (int e = 0; e < 3 - i; ++e) pw *= w;
        adj = adj + pw * res.adj[i - 1];
    }
    EXPECT_EQ(adj * wi, det(wi) * Matrix<Rat>::identity(3));
}

TEST(Linalg, ComplexSolvePivots) {
    Matrix<cd> m(2, 2);
    m(0, 0) = 1e-20; m(0, 1) = 1; m(1, 0) = 1; m(1, 1) = 1;
    auto s = solve_linear(m, {cd(1), cd(2)});
    ASSERT_EQ(s.status, SolveStatus::Unique);
    EXPECT_NEAR(std::abs(s.particular[0] - cd(1)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(s.particular[1] - cd(1)), 0.0, 1e-12);
}

TEST(RatFunc, ReducesAndShifts) {
    QPoly x = QPoly::X();
    QRatFunc f(x * x - QPoly(Rat(1)), x - QPoly(Rat(1)));
    EXPECT_TRUE(f.is_polynomial());
    EXPECT_EQ(f.num(), x + QPoly(Rat(1)));
    QRatFunc g(QPoly(Rat(1)), x);
    EXPECT_EQ(g - g.shift(Rat(1)), QRatFunc(QPoly(Rat(1)), x * x + x));
}

TEST(Series, TaylorCoefficients) {
    QPoly x = QPoly::X();
    auto s = taylor(x * x * x, Rat(2), 3);
    EXPECT_EQ(s.c[0], Rat(8));
    EXPECT_EQ(s.c[1], Rat(12));
    EXPECT_EQ(s.c[2], Rat(6));
    EXPECT_EQ(s.c[3], Rat(1));
}

TEST(Numeric, RootsOfProduct) {
    QPoly x = QPoly::X();
    QPoly p = (x - QPoly(Rat(1))) * (x + QPoly(Rat(2))) * (x * x + QPoly(Rat(1)));
    auto r = simple_roots(p);
    ASSERT_EQ(r.size(), 4u);
    for (auto& z : r) EXPECT_LT(std::abs(oracle::eval_naive(p, z)), 1e-12);
}
