#pragma once

#include <cmath>
#include <vector>

#include "bae/core/mpoly.hpp"

namespace bae {

template <class T> struct Matrix {
    int rows = 0, cols = 0;
    std::vector<T> a;

    Matrix() = default;
    Matrix(int r, int c, const T& fill = T(0)) : rows(r), cols(c), a(static_cast<size_t>(r) * c, fill) {}

    T& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const T& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    friend Matrix operator*(const Matrix& x, const Matrix& y) {
        Matrix r(x.rows, y.cols);
        for (int i = 0; i < x.rows; ++i)
            for (int k = 0; k < x.cols; ++k) {
                if (is_zero(x(i, k))) continue;
                for (int j = 0; j < y.cols; ++j) r(i, j) += x(i, k) * y(k, j);
            }
        return r;
    }
    friend std::vector<T> operator*(const Matrix& x, const std::vector<T>& v) {
        std::vector<T> r(x.rows, T(0));
        for (int i = 0; i < x.rows; ++i)
            for (int j = 0; j < x.cols; ++j) r[i] += x(i, j) * v[j];
        return r;
    }
    friend Matrix operator+(Matrix x, const Matrix& y) {
        for (size_t i = 0; i < x.a.size(); ++i) x.a[i] += y.a[i];
        return x;
    }
    friend Matrix operator-(Matrix x, const Matrix& y) {
        for (size_t i = 0; i < x.a.size(); ++i) x.a[i] -= y.a[i];
        return x;
    }
    friend Matrix operator*(const T& s, Matrix x) {
        for (auto& e : x.a) e *= s;
        return x;
    }
    friend bool operator==(const Matrix& x, const Matrix& y) {
        return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
    }

    T trace() const {
        T s(0);
        for (int i = 0; i < std::min(rows, cols); ++i) s += (*this)(i, i);
        return s;
    }
    Matrix transpose() const {
        Matrix r(cols, rows);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) r(j, i) = (*this)(i, j);
        return r;
    }
    bool is_zero_matrix() const {
        for (auto& e : a)
            if (!is_zero(e)) return false;
        return true;
    }
};

template <class T> Matrix<T> matrix_pow(const Matrix<T>& m, int e) {
    Matrix<T> r = Matrix<T>::identity(m.rows);
    for (int i = 0; i < e; ++i) r = r * m;
    return r;
}

// Fraction-free (Bareiss) determinant over an integral domain with exact
// division.  Row swaps pick the first usable pivot.
template <class R> R det_bareiss(Matrix<R> m, const R& one) {
    const int n = m.rows;
    if (n == 0) return one;
    bool negate = false;
    R prev = one;
    for (int k = 0; k < n - 1; ++k) {
        if (is_zero(m(k, k))) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (!is_zero(m(i, k))) {
                    p = i;
                    break;
                }
            if (p < 0) return one - one;
            for (int j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
            negate = !negate;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) m(i, j) = exact_div(m(i, j) * m(k, k) - m(i, k) * m(k, j), prev);
        }
        prev = m(k, k);
    }
    R d = m(n - 1, n - 1);
    return negate ? R(-d) : d;
}

// Division-free determinant by expansion over column subsets, O(2^n n)
// ring operations.  For rings without exact division (polynomials over C).
template <class R> R det_expand(const Matrix<R>& m, const R& one) {
    const int n = m.rows;
    if (n > 20) throw InputError("matrix too large for subset expansion");
    const R zero = one - one;
    std::vector<R> dp(size_t(1) << n, zero);
    dp[0] = one;
    for (size_t mask = 0; mask < dp.size(); ++mask) {
        const int r = __builtin_popcountll(mask);
        if (r >= n) continue;
        for (int c = 0; c < n; ++c) {
            if (mask & (size_t(1) << c)) continue;
            R term = dp[mask] * m(r, c);
            if (__builtin_popcountll(mask >> (c + 1)) % 2) dp[mask | (size_t(1) << c)] = dp[mask | (size_t(1) << c)] - term;
            else dp[mask | (size_t(1) << c)] = dp[mask | (size_t(1) << c)] + term;
        }
    }
    return dp.back();
}

inline Rat det(const Matrix<Rat>& m) { return det_bareiss(m, Rat(1)); }
inline ExactPoly det(const Matrix<ExactPoly>& m, int nvars) { return det_bareiss(m, ExactPoly(Rat(1), nvars)); }

// Discrete Wronskian det[f_i(v + j)], evaluated through the equal-valued
// difference form det[Δ^j f_i] whose entries have lower degree.
inline ExactPoly discrete_wronskian(const std::vector<ExactPoly>& fs, int v = 0) {
    int nv = 1;
    for (auto& f : fs) nv = std::max(nv, f.nvars());
    const int n = static_cast<int>(fs.size());
    Matrix<ExactPoly> m(n, n, ExactPoly(nv));
    for (int i = 0; i < n; ++i) {
        ExactPoly d = fs[i].with_nvars(nv);
        for (int j = 0; j < n; ++j) {
            m(i, j) = d;
            d = d.shift(v, Rat(1)) - d;
        }
    }
    return det(m, nv);
}

// Pivoting policy: exact fields take the first nonzero entry, floating point
// takes the largest entry and treats tiny values as zero.
template <class K> struct PivotRule {
    static double size(const K&) { return 1.0; }
    static bool negligible(const K& a, double) { return is_zero(a); }
    static constexpr bool largest = false;
};
template <> struct PivotRule<cd> {
    static double size(const cd& a) { return std::abs(a); }
    static bool negligible(const cd& a, double scale) { return std::abs(a) <= 1e-12 * scale; }
    static constexpr bool largest = true;
};

enum class SolveStatus { Unique, NoSolution, Parametrized };

template <class K> struct LinearSolution {
    SolveStatus status = SolveStatus::NoSolution;
    std::vector<K> particular;
    std::vector<std::vector<K>> nullspace;
    int rank = 0;
};

// Gauss-Jordan elimination on [M | b] over a field.
template <class K> LinearSolution<K> solve_linear(const Matrix<K>& M, const std::vector<K>& b) {
    using P = PivotRule<K>;
    const int n = M.rows, m = M.cols;
    Matrix<K> a(n, m + 1);
    double scale = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            a(i, j) = M(i, j);
            scale = std::max(scale, P::size(M(i, j)));
        }
        a(i, m) = b[i];
    }
    if (scale == 0.0) scale = 1.0;
    std::vector<int> pivot_col;
    int row = 0;
    for (int col = 0; col < m && row < n; ++col) {
        int p = -1;
        double best = -1.0;
        for (int i = row; i < n; ++i) {
            if (P::negligible(a(i, col), scale)) continue;
            if (!P::largest) {
                p = i;
                break;
            }
            if (P::size(a(i, col)) > best) {
                best = P::size(a(i, col));
                p = i;
            }
        }
        if (p < 0) continue;
        if (p != row)
            for (int j = 0; j <= m; ++j) std::swap(a(p, j), a(row, j));
        K inv = K(1) / a(row, col);
        for (int j = col; j <= m; ++j) a(row, j) = a(row, j) * inv;
        for (int i = 0; i < n; ++i) {
            if (i == row || is_zero(a(i, col))) continue;
            K f = a(i, col);
            for (int j = col; j <= m; ++j) a(i, j) -= f * a(row, j);
        }
        pivot_col.push_back(col);
        ++row;
    }
    LinearSolution<K> out;
    out.rank = row;
    for (int i = row; i < n; ++i)
        if (!P::negligible(a(i, m), scale)) {
            out.status = SolveStatus::NoSolution;
            return out;
        }
    out.particular.assign(m, K(0));
    for (int r = 0; r < row; ++r) out.particular[pivot_col[r]] = a(r, m);
    std::vector<bool> is_pivot(m, false);
    for (int c : pivot_col) is_pivot[c] = true;
    for (int f = 0; f < m; ++f) {
        if (is_pivot[f]) continue;
        std::vector<K> v(m, K(0));
        v[f] = K(1);
        for (int r = 0; r < row; ++r) v[pivot_col[r]] = -a(r, f);
        out.nullspace.push_back(std::move(v));
    }
    out.status = out.nullspace.empty() ? SolveStatus::Unique : SolveStatus::Parametrized;
    return out;
}

template <class K> int rank(const Matrix<K>& M) {
    return solve_linear(M, std::vector<K>(M.rows, K(0))).rank;
}

// Faddeev-LeVerrier: characteristic polynomial det(wI - A) (ascending
// coefficients, monic of degree k) and the adjugate
// adj(wI - A) = sum_{i=1..k} adj[i-1] * w^{k-i}.
template <class K> struct Resolvent {
    std::vector<K> charpoly;
    std::vector<Matrix<K>> adj;
};

template <class K> Resolvent<K> faddeev_leverrier(const Matrix<K>& A) {
    const int k = A.rows;
    Resolvent<K> out;
    out.charpoly.assign(k + 1, K(0));
    out.charpoly[k] = K(1);
    Matrix<K> Mi(k, k);
    const Matrix<K> I = Matrix<K>::identity(k);
    for (int i = 1; i <= k; ++i) {
        Mi = A * Mi + out.charpoly[k - i + 1] * I;
        out.adj.push_back(Mi);
        out.charpoly[k - i] = -(A * Mi).trace() / K(i);
    }
    return out;
}

} // namespace bae
