#include <gtest/gtest.h>

#include <random>

#include "bae/linear_problem.hpp"
#include "oracles.hpp"
#include "population.hpp"

using namespace bae;

namespace {

SolutionTuple tuple(std::vector<QPoly> p) { return SolutionTuple(std::move(p)); }
QPoly X() { return QPoly::X(); }

SolutionTuple x11() { return tuple({X(), QPoly(1), QPoly(1)}); }

// R = 1 - 1/(z x) written over x z.
StrippedBA x11_first() {
    StrippedBA s;
    s.n = 1;
    s.num = in_x(X()) * z_pow(1) - ExactPoly(Rat(1), 2);
    s.den_x = X();
    s.zpow = 1;
    return s;
}

} // namespace

TEST(VSequence, Examples) {
    auto e = v_sequence(SolutionTuple::empty(3));
    for (auto& v : e) EXPECT_EQ(v, QRatFunc(1));
    auto v = v_sequence(x11());
    EXPECT_EQ(v[0], QRatFunc(X(), X() + QPoly(1)));
    EXPECT_EQ(v[2], QRatFunc(X() + QPoly(1), X()));
    EXPECT_EQ(v[1], QRatFunc(1));
}

TEST(VSequence, RejectsNonGeneric) {
    EXPECT_THROW(v_sequence(tuple({X(), X(), QPoly(1)})), NonGenericInput);
}

TEST(Residues, SingleRoot) {
    auto r = residues_exact(x11(), 1);
    EXPECT_EQ(r.gamma.eval(Rat(0)), Rat(-1));
    auto rn = residues_numeric(x11(), 1);
    ASSERT_EQ(rn.gamma.size(), 1u);
    EXPECT_NEAR(std::abs(rn.gamma[0] - cd(-1)), 0.0, 1e-12);
    // Residue of x/(x+1) at -1 computed directly.
    EXPECT_EQ(QRatFunc(X(), X() + QPoly(1)).num().eval(Rat(-1)), Rat(-1));
}

TEST(Residues, EmptyTupleHasNone) {
    auto r = residues_numeric(SolutionTuple::empty(3), 2);
    EXPECT_TRUE(r.gamma.empty());
    EXPECT_TRUE(r.eps.empty());
}

TEST(Residues, RelationOnGeneratedTuple) {
    // With c = 0 the second slot is x^2 + x, which shares the root 0 with x.
    auto bad = multistep({{1, 2}, {Rat(0), Rat(0)}}, 3);
    ASSERT_EQ(bad.y(2), X() * X() + X());
    EXPECT_THROW(residue_relation_holds(bad), NonGenericInput);
    auto y = multistep({{1, 2}, {Rat(0), Rat(1)}}, 3);
    ASSERT_EQ(y.y(2), X() * X() + X() + QPoly(1));
    EXPECT_TRUE(residue_relation_holds(y));
    auto a = residues_numeric(y, 1), b = residues_numeric(y, 2);
    ASSERT_EQ(a.next_roots.size(), b.roots.size());
    for (size_t i = 0; i < b.roots.size(); ++i) EXPECT_LT(std::abs(b.gamma[i] + a.eps[i]), 1e-10);
}

TEST(Residues, ExactMatchesNumeric) {
    auto y = multistep({{1, 2, 3, 1}, {rat(1, 3), rat(-2, 5), rat(7, 2), rat(1, 7)}}, 3);
    for (int n = 1; n <= 3; ++n) {
        auto ex = residues_exact(y, n);
        auto nu = residues_numeric(y, n);
        for (size_t i = 0; i < nu.roots.size(); ++i)
            EXPECT_LT(rel_err(to_complex(ex.gamma).eval(nu.roots[i]), nu.gamma[i]), 1e-9);
        for (size_t i = 0; i < nu.next_roots.size(); ++i)
            EXPECT_LT(rel_err(to_complex(ex.eps).eval(nu.next_roots[i]), nu.eps[i]), 1e-9);
    }
}

TEST(PsiFamily, EmptyTupleIsTrivial) {
    auto f = build_psi_family(SolutionTuple::empty(3));
    for (auto& s : f) {
        EXPECT_EQ(s.num, ExactPoly(Rat(1), 2));
        EXPECT_EQ(s.zpow, 0);
    }
}

TEST(PsiFamily, SingleRootExample) {
    auto f = build_psi_family(x11());
    EXPECT_TRUE(f[0] == x11_first());
    EXPECT_EQ(f[0].q, QPoly(1));
    EXPECT_EQ(f[1].num, ExactPoly(Rat(1), 2));
}

TEST(PsiFamily, RejectsNonSolution) {
    EXPECT_THROW(build_psi_family(tuple({X() * X() + QPoly(3), QPoly(1), QPoly(1)})), BAENotSatisfied);
}

TEST(Laxdd, Examples) {
    auto e = SolutionTuple::empty(3);
    EXPECT_TRUE(verify_laxdd(e, build_psi_family(e)).ok);
    auto f = build_psi_family(x11());
    EXPECT_TRUE(verify_laxdd(x11(), f).ok);
    // Corrupt C: R_1 = 1 - 2/(z x).
    f[0].num = in_x(X()) * z_pow(1) - ExactPoly(Rat(2), 2);
    auto rep = verify_laxdd(x11(), f);
    EXPECT_FALSE(rep.ok);
    EXPECT_GT(rep.witness, 0);
    EXPECT_FALSE(rep.residual.zero());
}

TEST(GenerationAction, FromEmptyTuple) {
    auto y = SolutionTuple::empty(3);
    const Rat c = rat(2, 3);
    auto act = generation_action(y, build_psi_family(y), 1, c);
    EXPECT_EQ(act.g, QRatFunc(QPoly(-1), QPoly::linear(-c)));
    EXPECT_TRUE(act.riccati.zero());
    // R~_1 = 1 - 1/((x+c) z)
    StrippedBA want;
    want.n = 1;
    want.num = in_x(QPoly::linear(-c)) * z_pow(1) - ExactPoly(Rat(1), 2);
    want.den_x = QPoly::linear(-c);
    want.zpow = 1;
    EXPECT_TRUE(act.psis[0] == want);
    EXPECT_TRUE(act.psis[1] == build_psi_family(y)[1]);
    EXPECT_TRUE(act.psis[2] == build_psi_family(y)[2]);
    // The opposite sign for g breaks the Riccati identity.
    QRatFunc gw(QPoly(1), QPoly::linear(-c));
    QRatFunc g1 = gw.shift(Rat(1));
    EXPECT_FALSE((gw - g1 + gw * g1).zero());
}

TEST(Miura, Examples) {
    auto e = SolutionTuple::empty(3);
    EXPECT_TRUE(miura_check(e, build_psi_family(e)).ok);
    auto y = multistep({{1, 2, 3}, {rat(1, 2), rat(-3, 4), rat(2, 5)}}, 3);
    auto f = build_psi_family(y);
    EXPECT_TRUE(miura_check(y, f).ok);
    auto v = v_sequence(y);
    v[1] = v[1] + QRatFunc(QPoly(1), X());
    auto rep = miura_check(v, f);
    EXPECT_FALSE(rep.ok);
    EXPECT_EQ(rep.witness, 2);
}

// Population over short paths: the family satisfies the lax equation, tends
// to one, has q = 1 with the same q at every n, and agrees with the numeric
// route through roots; generation acts as the family of the new tuple.
TEST(PsiFamily, PopulationProperties) {
    std::mt19937_64 rng(20240611);
    int checked = 0, skipped = 0;
    for (int N : {2, 3, 4}) {
        for (auto& J : population::all_paths(N, N == 4 ? 3 : 4)) {
            auto path = population::random_params(J, rng);
            SolutionTuple y;
            try {
                y = multistep(path, N);
            } catch (const Error&) {
                continue;
            }
            if (!is_generic(y) || !has_simple_roots(y)) {
                ++skipped;
                continue;
            }
            auto f = build_psi_family(y);
            ASSERT_TRUE(verify_laxdd(y, f).ok);
            ASSERT_TRUE(miura_check(y, f).ok);
            for (auto& s : f) {
                EXPECT_TRUE(s.tends_to_one());
                EXPECT_EQ(s.q, QPoly(1));
                EXPECT_EQ(s.q, f[0].q);
            }
            const cd xs(0.37, 0.21), zs(1.3, -0.4);
            for (int n = 1; n <= N; ++n) {
                cd num = psi_numeric(y, n, xs, zs);
                EXPECT_LT(rel_err(num, f[n - 1].eval(xs, zs)), 1e-8);
            }
            ++checked;
        }
    }
    EXPECT_GT(checked, 20);
    RecordProperty("skipped", skipped);
}

TEST(GenerationAction, PopulationMatchesNewFamily) {
    std::mt19937_64 rng(77);
    int checked = 0;
    for (int N : {3, 4}) {
        for (auto& J : population::all_paths(N, 3)) {
            auto path = population::random_params(J, rng);
            SolutionTuple y;
            try {
                y = multistep(path, N);
            } catch (const Error&) {
                continue;
            }
            if (!is_generic(y) || !has_simple_roots(y)) continue;
            auto f = build_psi_family(y);
            for (int m = 1; m <= N; ++m) {
                if (!is_degree_increasing(y.degrees(), m)) continue;
                Rat cm = oracle::random_nonzero_rat(rng, 9, 5);
                GenerationAction act;
                try {
                    act = generation_action(y, f, m, cm);
                } catch (const NotFertile&) {
                    continue;
                }
                if (!is_generic(act.y) || !has_simple_roots(act.y)) continue;
                EXPECT_TRUE(act.riccati.zero());
                EXPECT_TRUE(verify_laxdd(act.y, act.psis).ok);
                auto fresh = build_psi_family(act.y);
                for (int n = 0; n < N; ++n) EXPECT_TRUE(fresh[n] == act.psis[n]) << "slot " << n + 1;
                ++checked;
            }
        }
    }
    EXPECT_GT(checked, 10);
}
