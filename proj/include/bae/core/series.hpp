#pragma once

#include <vector>

#include "bae/core/poly.hpp"

namespace bae {

// Truncated Taylor series sum_{r<=order} c_r (z - center)^r.  C is the
// coefficient ring, S the scalar type of the center.
template <class C, class S = C> struct TruncSeries {
    S center{};
    int order = 0;
    std::vector<C> c;

    TruncSeries() = default;
    TruncSeries(S ctr, int ord, const C& zero) : center(ctr), order(ord), c(ord + 1, zero) {}

    friend TruncSeries operator+(TruncSeries a, const TruncSeries& b) {
        for (int i = 0; i <= a.order; ++i) a.c[i] = a.c[i] + b.c[i];
        return a;
    }
    friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
        TruncSeries r(a.center, a.order, a.c[0] - a.c[0]);
        for (int i = 0; i <= a.order; ++i)
            for (int j = 0; i + j <= a.order; ++j) r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
        return r;
    }
};

// Taylor expansion of a polynomial in z about the given center.
template <class K> TruncSeries<K> taylor(const Poly<K>& p, const K& center, int order) {
    Poly<K> q = p.shift(center);
    TruncSeries<K> s(center, order, K(0));
    for (int i = 0; i <= order; ++i) s.c[i] = q[i];
    return s;
}

} // namespace bae
