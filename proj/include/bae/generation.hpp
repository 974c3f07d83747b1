#pragma once

#include <string>
#include <vector>

#include "bae/bethe.hpp"
#include "bae/core/linalg.hpp"

namespace bae {

struct GenerationPath {
    std::vector<int> J;
    std::vector<Rat> c;
};

inline int cyc(int j, int N) { return ((j - 1) % N + N) % N; }

inline std::vector<int> degree_transform(std::vector<int> k, int j) {
    const int N = static_cast<int>(k.size());
    int i = cyc(j, N);
    k[i] = k[cyc(j - 1, N)] + k[cyc(j + 1, N)] - k[i] + 1;
    return k;
}

inline bool is_degree_increasing(const std::vector<int>& k, int j) {
    const int N = static_cast<int>(k.size());
    return k[cyc(j - 1, N)] + k[cyc(j + 1, N)] + 1 - k[cyc(j, N)] > k[cyc(j, N)];
}

// f(x) g(x+1) - f(x+1) g(x)
inline QPoly wronskian2(const QPoly& f, const QPoly& g) {
    const Rat one(1);
    return f * g.shift(one) - f.shift(one) * g;
}

struct GenerationStep {
    SolutionTuple y;  // tuple with the new slot
    QPoly base;       // the normalized solution (coefficient of x^{k_j} is zero)
    Rat scale;        // W(y_j, base) = scale * y_{j-1}(x+1) y_{j+1}(x)
    bool generic = true;
};

inline GenerationStep generate_step(const SolutionTuple& y, int j, const Rat& c) {
    const int N = y.N();
    if (j < 1 || j > N) throw InputError("direction out of range");
    auto k = y.degrees();
    if (!is_degree_increasing(k, j)) throw DegreeNotIncreasing("direction " + std::to_string(j));
    const int kj = k[cyc(j, N)];
    const int d = k[cyc(j - 1, N)] + k[cyc(j + 1, N)] + 1 - kj;
    const Rat one(1);
    const QPoly& yj = y.y(j);
    const QPoly rhs = y.y(j - 1).shift(one) * y.y(j + 1);

    // Unknowns: coefficients a_i (i < d, i != kj) and the scalar.
    std::vector<int> slots;
    for (int i = 0; i < d; ++i)
        if (i != kj) slots.push_back(i);
    const int nu = static_cast<int>(slots.size()) + 1;
    const int rows = kj + d + 1;
    Matrix<Rat> M(rows, nu);
    std::vector<Rat> b(rows, Rat(0));
    for (int s = 0; s < static_cast<int>(slots.size()); ++s) {
        QPoly w = wronskian2(yj, QPoly::monomial(Rat(1), slots[s]));
        for (int r = 0; r <= w.degree(); ++r) M(r, s) = w.c[r];
    }
    for (int r = 0; r <= rhs.degree(); ++r) M(r, nu - 1) = -rhs.c[r];
    QPoly top = wronskian2(yj, QPoly::monomial(Rat(1), d));
    for (int r = 0; r <= top.degree(); ++r) b[r] = -top.c[r];

    auto sol = solve_linear(M, b);
    if (sol.status == SolveStatus::NoSolution) throw NotFertile("no polynomial solution in direction " + std::to_string(j));
    if (sol.status != SolveStatus::Unique) throw NotFertile("solution not unique in direction " + std::to_string(j));

    std::vector<Rat> coef(d + 1, Rat(0));
    coef[d] = 1;
    for (size_t s = 0; s < slots.size(); ++s) coef[slots[s]] = sol.particular[s];
    GenerationStep out;
    out.base = QPoly(coef);
    out.scale = sol.particular[nu - 1];
    SolutionTuple r = y;
    r.set(j, out.base + c * yj);
    out.y = r;
    out.generic = is_generic(r);
    return out;
}

inline SolutionTuple generate(const SolutionTuple& y, int j, const Rat& c) { return generate_step(y, j, c).y; }

inline SolutionTuple multistep(const GenerationPath& path, int N) {
    if (path.J.size() != path.c.size()) throw InputError("path directions and parameters differ in length");
    SolutionTuple y = SolutionTuple::empty(N);
    for (size_t s = 0; s < path.J.size(); ++s) {
        try {
            y = generate(y, path.J[s], path.c[s]);
        } catch (const DegreeNotIncreasing&) {
            throw DegreeNotIncreasing("step " + std::to_string(s) + " (direction " + std::to_string(path.J[s]) + ")");
        } catch (const NotFertile& e) {
            throw NotFertile("step " + std::to_string(s) + ": " + e.what());
        }
    }
    return y;
}

} // namespace bae
