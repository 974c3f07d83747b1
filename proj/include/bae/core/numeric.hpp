#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "bae/core/linalg.hpp"

namespace bae {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline CMat to_eigen(const Matrix<cd>& m) {
    CMat r(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r(i, j) = m(i, j);
    return r;
}

inline CMat to_eigen(const Matrix<Rat>& m) {
    CMat r(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r(i, j) = to_cd(m(i, j));
    return r;
}

inline double rel_err(const cd& a, const cd& b) {
    return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

// Roots of a polynomial with complex coefficients: companion-matrix
// eigenvalues followed by a few Newton steps on the original polynomial.
inline std::vector<cd> poly_roots(const CPoly& p) {
    const int n = p.degree();
    if (n < 1) return {};
    CMat comp = CMat::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -p.c[i] / p.lead();
    Eigen::ComplexEigenSolver<CMat> es(comp, false);
    if (es.info() != Eigen::Success) throw RootExtractionFailure("companion eigensolver did not converge");
    std::vector<cd> roots(es.eigenvalues().data(), es.eigenvalues().data() + n);
    CPoly dp = p.derivative();
    for (auto& r : roots) {
        for (int it = 0; it < 4; ++it) {
            cd f = p(r), d = dp(r);
            if (std::abs(d) == 0.0) break;
            cd step = f / d;
            if (!std::isfinite(std::abs(step))) break;
            r -= step;
            if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(r))) break;
        }
    }
    std::sort(roots.begin(), roots.end(), [](const cd& a, const cd& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return roots;
}

inline std::vector<cd> poly_roots(const QPoly& p) { return poly_roots(to_complex(p)); }

// Roots are required to be simple and well separated.
inline std::vector<cd> simple_roots(const QPoly& p, double tol = 1e-9) {
    auto r = poly_roots(p);
    for (size_t i = 0; i < r.size(); ++i)
        for (size_t j = i + 1; j < r.size(); ++j)
            if (std::abs(r[i] - r[j]) <= tol * std::max(1.0, std::abs(r[i])))
                throw RootExtractionFailure("roots are not separated");
    return r;
}

inline double max_abs(const CMat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

} // namespace bae
