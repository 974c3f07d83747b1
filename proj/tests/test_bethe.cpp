#include <gtest/gtest.h>

#include "bae/bethe.hpp"
#include "bae/generation.hpp"
#include "oracles.hpp"
#include "population.hpp"

using namespace bae;

namespace {

QPoly x() { return QPoly::X(); }
QPoly one() { return QPoly(Rat(1)); }

// Root-wise check of the equations, independent of the divisibility form:
// at every root u of y_n the two products must cancel.
double rootwise_residual(const SolutionTuple& y) {
    double worst = 0.0;
    for (int n = 1; n <= y.N(); ++n) {
        if (y.y(n).degree() <= 0) continue;
        for (cd u : simple_roots(y.y(n))) {
            cd a = oracle::eval_naive(y.y(n - 1), u + 1.0) * oracle::eval_naive(y.y(n), u - 1.0) *
                   oracle::eval_naive(y.y(n + 1), u);
            cd b = oracle::eval_naive(y.y(n - 1), u) * oracle::eval_naive(y.y(n), u + 1.0) *
                   oracle::eval_naive(y.y(n + 1), u - 1.0);
            worst = std::max(worst, std::abs(a + b) / std::max(1.0, std::abs(a)));
        }
    }
    return worst;
}

} // namespace

TEST(Genericity, Examples) {
    EXPECT_TRUE(is_generic(SolutionTuple::empty(3)));
    EXPECT_FALSE(is_generic(SolutionTuple({x(), x(), x()})));
    EXPECT_TRUE(is_generic(SolutionTuple({x(), one(), one()})));
}

TEST(VerifyBae, Examples) {
    EXPECT_TRUE(verify_bae(SolutionTuple::empty(3)).satisfied);
    EXPECT_TRUE(verify_bae(SolutionTuple({x(), one(), one()})).satisfied);
    auto r = verify_bae(SolutionTuple({x(), x() * x(), one()}));
    EXPECT_FALSE(r.satisfied);
    EXPECT_FALSE(r.failing_equations.empty());
}

TEST(VerifyBae, PerturbedCoefficientIsRejected) {
    SolutionTuple y = multistep({{1, 2}, {Rat(0), Rat(0)}}, 3);
    ASSERT_TRUE(verify_bae(y).satisfied);
    SolutionTuple bad = y;
    bad.set(2, y.y(2) + QPoly(Rat(1, 7)) * x());
    EXPECT_FALSE(verify_bae(bad).satisfied);
}

TEST(QuadraticForm, Examples) {
    EXPECT_EQ(compute_Q({0, 0, 0}), 0);
    EXPECT_EQ(compute_Q({1, 0, 0}), 0);
    EXPECT_EQ(compute_Q({1, 1, 1}), -3);
}

TEST(LIdentity, Examples) {
    EXPECT_TRUE(verify_L_identity(SolutionTuple::empty(3)));
    EXPECT_TRUE(verify_L_identity(SolutionTuple({x(), one(), one()})));
    SolutionTuple g = multistep({{1, 2}, {Rat(1, 3), Rat(2)}}, 3);
    ASSERT_EQ(g.degrees(), (std::vector<int>{1, 2, 0}));
    EXPECT_TRUE(verify_L_identity(g));
    EXPECT_THROW(verify_L_identity(SolutionTuple({x(), x(), x()})), NonGenericInput);
}

TEST(GeneratedPopulation, SatisfiesEquationsAndCorollaries) {
    std::mt19937_64 rng(101);
    for (int N : {3, 4}) {
        for (auto& J : population::all_paths(N, 4)) {
            SolutionTuple y = multistep(population::random_params(J, rng), N);
            auto rep = verify_bae(y);
            EXPECT_TRUE(rep.satisfied);
            EXPECT_EQ(compute_Q(y.degrees()), 0);
            if (rep.generic) {
                if (has_simple_roots(y)) EXPECT_LT(rootwise_residual(y), 1e-7);
                EXPECT_TRUE(verify_L_identity(y));
                auto k = y.degrees();
                bool all_equal = std::all_of(k.begin(), k.end(), [&](int d) { return d == k[0]; });
                EXPECT_FALSE(all_equal && k[0] > 0);
            }
        }
    }
}
