#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <vector>

#include "bae/periodic_inverse.hpp"

namespace bae {

// ---- subsets of Z containing every integer from some point on -------------

class IntSet {
public:
    IntSet() = default;
    IntSet(std::set<int> low, int top) : top_(top), low_(std::move(low)) { normalize(); }

    // {s_0 < ... < s_n} together with every j > n.
    static IntSet from_sequence(const std::vector<int>& s) {
        for (size_t i = 1; i < s.size(); ++i)
            if (s[i] <= s[i - 1]) throw InputError("subset entries must increase");
        const int n = static_cast<int>(s.size()) - 1;
        if (!s.empty() && s.back() > n) throw InputError("entry exceeds the depth");
        return IntSet(std::set<int>(s.begin(), s.end()), n + 1);
    }
    static IntSet empty_partition() { return IntSet({}, 0); }

    // lambda_i = i - s_i
    static IntSet from_partition(const std::vector<int>& lambda) {
        std::vector<int> s;
        for (size_t i = 0; i < lambda.size(); ++i) {
            if (lambda[i] < 0 || (i && lambda[i] > lambda[i - 1])) throw InputError("not a partition");
            s.push_back(static_cast<int>(i) - lambda[i]);
        }
        return from_sequence(s);
    }

    bool contains(int k) const { return k >= top_ || low_.count(k); }
    int top() const { return top_; }
    const std::set<int>& low() const { return low_; }
    int min() const { return low_.empty() ? top_ : *low_.begin(); }
    // |low| - top; zero for subsets of virtual cardinal zero
    int charge() const { return static_cast<int>(low_.size()) - top_; }
    bool vcz() const { return charge() == 0; }
    int depth() const { return top_ - 1; }

    IntSet shifted(int k) const {
        std::set<int> l;
        for (int a : low_) l.insert(a + k);
        return IntSet(l, top_ + k);
    }
    IntSet with(int k) const {
        if (k >= top_) return *this;
        auto l = low_;
        l.insert(k);
        return IntSet(l, top_);
    }
    IntSet unite(const IntSet& o) const {
        const int t = std::min(top_, o.top_);
        std::set<int> l;
        for (int k = std::min(min(), o.min()); k < t; ++k)
            if (contains(k) || o.contains(k)) l.insert(k);
        return IntSet(l, t);
    }
    bool subset_of(const IntSet& o) const {
        for (int k = min(); k < std::max(top_, o.top_); ++k)
            if (contains(k) && !o.contains(k)) return false;
        return true;
    }
    // s_0 < ... < s_depth
    std::vector<int> sequence() const {
        if (!vcz()) throw InputError("subset is not of virtual cardinal zero");
        return std::vector<int>(low_.begin(), low_.end());
    }
    std::vector<int> partition() const {
        auto s = sequence();
        std::vector<int> l;
        for (size_t i = 0; i < s.size(); ++i) l.push_back(static_cast<int>(i) - s[i]);
        while (!l.empty() && l.back() == 0) l.pop_back();
        return l;
    }
    int weight() const {
        int w = 0;
        for (int x : partition()) w += x;
        return w;
    }

    friend bool operator==(const IntSet& a, const IntSet& b) { return a.top_ == b.top_ && a.low_ == b.low_; }
    friend bool operator!=(const IntSet& a, const IntSet& b) { return !(a == b); }
    friend bool operator<(const IntSet& a, const IntSet& b) { return std::tie(a.top_, a.low_) < std::tie(b.top_, b.low_); }

private:
    void normalize() {
        for (auto it = low_.begin(); it != low_.end();)
            if (*it >= top_) it = low_.erase(it);
            else ++it;
        while (low_.count(top_ - 1)) low_.erase(--top_);
    }
    int top_ = 0;
    std::set<int> low_;
};

// ---- KdV subsets -----------------------------------------------------------

inline bool is_kdv(const IntSet& S, int N) { return S.vcz() && S.shifted(N).subset_of(S); }

// The N elements of S outside S + N.
inline std::vector<int> leading_term(const IntSet& S, int N) {
    if (N < 2) throw InputError("period must be at least 2");
    if (!is_kdv(S, N)) throw NotKdV("S + N is not contained in S");
    std::vector<int> A;
    const IntSet sh = S.shifted(N);
    for (int k = S.min(); k < S.top() + N; ++k)
        if (S.contains(k) && !sh.contains(k)) A.push_back(k);
    return A;
}

inline bool is_leading_term(const std::vector<int>& A, int N) {
    if (static_cast<int>(A.size()) != N) return false;
    long long sum = 0;
    std::set<int> res;
    for (int a : A) {
        sum += a;
        res.insert(((a % N) + N) % N);
    }
    return sum == static_cast<long long>(N) * (N - 1) / 2 && static_cast<int>(res.size()) == N;
}

inline IntSet kdv_from_leading_term(const std::vector<int>& A, int N) {
    if (!is_leading_term(A, N)) throw NotKdV("not the leading term of a KdV subset");
    const int hi = *std::max_element(A.begin(), A.end());
    std::set<int> low;
    for (int a : A)
        for (int k = a; k <= hi + N; k += N) low.insert(k);
    return IntSet(low, hi + N + 1);
}

// S[a] = {a + 1 - N} + (S + 1)
inline IntSet mutate_subset(const IntSet& S, int a, int N) {
    auto A = leading_term(S, N);
    if (std::find(A.begin(), A.end(), a) == A.end()) throw NotInLeadingTerm("mutation point not in the leading term");
    return S.shifted(1).with(a + 1 - N);
}

// Mutation points leading from S to {0, 1, 2, ...}, found by breadth-first search.
inline std::vector<int> mutation_path_to_empty(const IntSet& S, int N, int max_steps = 0) {
    const IntSet target = IntSet::empty_partition();
    if (max_steps == 0) max_steps = 2 * S.weight() + 2 * N;
    const int cap = S.weight() + N * N;
    std::map<IntSet, std::pair<IntSet, int>> parent;
    std::deque<std::pair<IntSet, int>> q{{S, 0}};
    parent.emplace(S, std::make_pair(S, 0));
    while (!q.empty()) {
        auto [cur, d] = q.front();
        q.pop_front();
        if (cur == target) {
            std::vector<int> path;
            for (IntSet x = cur; x != S; x = parent.at(x).first) path.push_back(parent.at(x).second);
            std::reverse(path.begin(), path.end());
            return path;
        }
        if (d == max_steps) continue;
        for (int a : leading_term(cur, N)) {
            IntSet nx = mutate_subset(cur, a, N);
            if (nx.weight() > cap || parent.count(nx)) continue;
            parent.emplace(nx, std::make_pair(cur, a));
            q.emplace_back(nx, d + 1);
        }
    }
    throw TruncationExceeded("no mutation path within the step limit");
}

// ---- mKdV tuples of subsets ------------------------------------------------

using SubsetTuple = std::vector<IntSet>;  // S_1..S_N

inline bool is_mkdv_tuple(const SubsetTuple& T) {
    const int N = static_cast<int>(T.size());
    for (int i = 0; i < N; ++i) {
        if (!is_kdv(T[i], N)) return false;
        if (!T[i].shifted(1).subset_of(T[(i + 1) % N])) return false;
    }
    return true;
}

// S_i = {a_{sigma(1)} + i - N, .., a_{sigma(i)} + i - N} + (S + i); sigma is 0-based.
// The leading term is indexed in decreasing order so the identity gives the empty tuple.
inline SubsetTuple tuple_from(const IntSet& S, const std::vector<int>& sigma, int N) {
    auto A = leading_term(S, N);
    std::reverse(A.begin(), A.end());
    std::vector<int> chk = sigma;
    std::sort(chk.begin(), chk.end());
    for (int i = 0; i < N; ++i)
        if (static_cast<int>(chk.size()) != N || chk[i] != i) throw InputError("sigma is not a permutation");
    SubsetTuple T;
    for (int i = 1; i <= N; ++i) {
        IntSet Si = S.shifted(i);
        for (int k = 0; k < i; ++k) Si = Si.with(A[sigma[k]] + i - N);
        T.push_back(Si);
    }
    return T;
}

// The unique other subset allowed at position i (1-based).
inline IntSet tuple_mutation(const SubsetTuple& T, int i) {
    const int N = static_cast<int>(T.size());
    if (i < 1 || i > N) throw InputError("position out of range");
    const IntSet& prev = T[(i - 2 + N) % N];
    const IntSet& next = T[i % N];
    std::vector<IntSet> found;
    for (int a : leading_term(prev, N)) {
        IntSet c = prev.shifted(1).with(a + 1 - N);
        if (c != T[i - 1] && c.shifted(1).subset_of(next)) found.push_back(c);
    }
    if (found.size() != 1) throw InputError("tuple mutation is not unique");
    return found[0];
}

inline SubsetTuple mutate_tuple(SubsetTuple T, int i) {
    T[i - 1] = tuple_mutation(T, i);
    return T;
}

inline bool is_degree_decreasing(const SubsetTuple& T, int i) { return tuple_mutation(T, i).weight() < T[i - 1].weight(); }

inline int total_weight(const SubsetTuple& T) {
    int w = 0;
    for (auto& S : T) w += S.weight();
    return w;
}

// Positions of degree decreasing mutations reducing T to (S0, .., S0).
inline std::vector<int> reduce_tuple(SubsetTuple T) {
    const int N = static_cast<int>(T.size());
    std::vector<int> path;
    while (total_weight(T) > 0) {
        int pick = 0;
        for (int i = 1; i <= N && !pick; ++i)
            if (is_degree_decreasing(T, i)) pick = i;
        if (!pick) throw InputError("no degree decreasing mutation");
        T = mutate_tuple(T, pick);
        path.push_back(pick);
    }
    return path;
}

// ---- points of the Grassmannian ---------------------------------------------

using Laurent = std::map<int, Rat>;  // exponent -> nonzero coefficient

inline Laurent laurent_clean(Laurent v) {
    for (auto it = v.begin(); it != v.end();)
        if (it->second == 0) it = v.erase(it);
        else ++it;
    return v;
}
inline Laurent monomial_z(int e, const Rat& c = Rat(1)) { return laurent_clean({{e, c}}); }
inline int laurent_order(const Laurent& v) {
    if (v.empty()) throw InputError("zero Laurent polynomial has no order");
    return v.begin()->first;
}
inline Laurent times_z(const Laurent& v, int k) {
    Laurent r;
    for (auto& [e, c] : v) r[e + k] = c;
    return r;
}
inline Laurent truncate_above(const Laurent& v, int d) {
    Laurent r;
    for (auto& [e, c] : v)
        if (e <= d) r[e] = c;
    return r;
}
inline Laurent laurent_axpy(const Laurent& a, const Rat& s, const Laurent& b) {
    Laurent r = a;
    for (auto& [e, c] : b) r[e] += s * c;
    return laurent_clean(r);
}

// W with z^{depth+1} H_+ in W, presented by depth+1 columns of degree <= depth.
struct GrassmannPoint {
    int depth = -1;
    std::vector<Laurent> basis;

    static GrassmannPoint hplus() { return GrassmannPoint{}; }
};

namespace detail {
// Reduced echelon form by lowest order: distinct orders, pivot 1, pivot
// coefficients cleared from other columns; sorted by order.
inline std::vector<Laurent> echelon(std::vector<Laurent> cols) {
    std::vector<Laurent> done;
    for (auto& c : cols) {
        Laurent v = laurent_clean(c);
        for (auto& p : done) {
            auto it = v.find(laurent_order(p));
            if (it != v.end()) v = laurent_axpy(v, -it->second, p);
        }
        if (v.empty()) continue;
        const Rat lead = v.begin()->second;
        for (auto& [e, x] : v) x /= lead;
        for (auto& p : done) {
            auto it = p.find(laurent_order(v));
            if (it != p.end()) p = laurent_axpy(p, -it->second, v);
        }
        done.push_back(v);
    }
    std::sort(done.begin(), done.end(), [](const Laurent& a, const Laurent& b) { return laurent_order(a) < laurent_order(b); });
    return done;
}
} // namespace detail

// Builds a point from columns spanning W modulo z^{depth+1} H_+.  With
// canonical set the basis is the reduced echelon form at the smallest depth.
inline GrassmannPoint make_point(int depth, const std::vector<Laurent>& cols, bool canonical = true) {
    std::vector<Laurent> t;
    for (auto& c : cols) t.push_back(truncate_above(c, depth));
    auto e = detail::echelon(t);
    if (static_cast<int>(e.size()) != depth + 1 || static_cast<int>(cols.size()) != depth + 1)
        throw InputError("columns do not span a point of virtual dimension zero");
    if (!canonical) return GrassmannPoint{depth, t};
    // drop z^depth while it is a basis vector on its own
    while (!e.empty() && e.back() == monomial_z(depth)) {
        e.pop_back();
        --depth;
        for (auto& v : e) v = truncate_above(v, depth);
    }
    return GrassmannPoint{depth, e};
}

inline GrassmannPoint canonical(const GrassmannPoint& W) { return make_point(W.depth, W.basis); }

inline bool same_subspace(const GrassmannPoint& a, const GrassmannPoint& b) {
    auto A = canonical(a), B = canonical(b);
    return A.depth == B.depth && A.basis == B.basis;
}

inline IntSet order_subset(const GrassmannPoint& W) {
    std::vector<int> s;
    for (auto& v : canonical(W).basis) s.push_back(laurent_order(v));
    return IntSet::from_sequence(s);
}

// u in W: u modulo z^{depth+1} H_+ lies in the span of the basis.
inline bool contains(const GrassmannPoint& W, const Laurent& u) {
    Laurent v = truncate_above(laurent_clean(u), W.depth);
    for (auto& p : canonical(W).basis) {
        if (v.empty()) break;
        auto it = v.find(laurent_order(p));
        if (it != v.end()) v = laurent_axpy(v, -it->second, p);
    }
    return v.empty();
}

inline bool is_kdv_subspace(const GrassmannPoint& W, int N) {
    for (auto& v : W.basis)
        if (!contains(W, times_z(v, N))) return false;
    return true;
}

// f_j = sum_i v_{j, n-i} chi_i as rows of a coefficient matrix in the chi basis.
inline Matrix<Rat> chi_rows(const GrassmannPoint& W) {
    const int n = W.depth;
    int D = 0;
    for (auto& v : W.basis)
        if (!v.empty()) D = std::max(D, n - laurent_order(v));
    Matrix<Rat> a(n + 1, D + 1);
    for (int j = 0; j <= n; ++j)
        for (auto& [e, c] : W.basis[j])
            if (e <= n) a(j, n - e) = c;
    return a;
}

inline std::vector<ExactPoly> chi_polys(const GrassmannPoint& W, int times) {
    auto a = chi_rows(W);
    auto chis = chi_table(a.cols - 1, times);
    std::vector<ExactPoly> f;
    for (int j = 0; j < a.rows; ++j) f.push_back(detail::difference_of_row(a, j, 0, chis));
    return f;
}

// Discrete Wronskian of the chi polynomials of the given basis.
inline ExactPoly tau(const GrassmannPoint& W, int times = 0) {
    if (W.depth < 0) return ExactPoly(Rat(1), family_nvars(times));
    return discrete_wronskian(chi_polys(W, times), kVarX);
}

// Scaled so that the coefficient of the top power of x is 1.
inline ExactPoly normalized(const ExactPoly& tau) {
    if (tau.zero()) throw SingularWronskian("tau function vanishes");
    ExactPoly lc = tau.coeff_in(kVarX, tau.degree_in(kVarX));
    Rat a = lc.leading().second;
    if (lc != ExactPoly(a, lc.nvars())) throw InputError("leading coefficient in x depends on the times");
    return Rat(1) / a * tau;
}

// psi_W / Omega = P / y = z^{depth+1} (1 + O(1/z)).
inline MFrac baker(const GrassmannPoint& W, int times = 0) {
    const int nv = family_nvars(times);
    if (W.depth < 0) return MFrac(ExactPoly(Rat(1), nv));
    auto a = chi_rows(W);
    auto [y, P] = detail::wave_pair(a, W.depth + 1, chi_table(a.cols, times));
    return MFrac(P, y);
}

// Multiplies W by exp(sum_j t_j z^j).
inline GrassmannPoint flow(const GrassmannPoint& W, const std::vector<Rat>& t) {
    const int n = W.depth;
    const int span = [&] {
        int s = 0;
        for (auto& v : W.basis)
            if (!v.empty()) s = std::max(s, n - laurent_order(v));
        return s;
    }();
    std::vector<Rat> h{Rat(1)};
    for (int k = 1; k <= span; ++k) {
        Rat acc(0);
        for (int j = 1; j <= std::min<int>(k, static_cast<int>(t.size())); ++j) acc += Rat(j) * t[j - 1] * h[k - j];
        h.push_back(acc / k);
    }
    std::vector<Laurent> cols;
    for (auto& v : W.basis) {
        Laurent r;
        for (auto& [e, c] : v)
            for (int k = 0; e + k <= n; ++k) r[e + k] += c * h[k];
        cols.push_back(laurent_clean(r));
    }
    return make_point(n, cols);
}

// ---- mKdV tuples of subspaces as flags --------------------------------------

// V_i = z^N W + span(u_1..u_i), W_i = z^{i-N} V_i, i = 1..N.
struct FlagTuple {
    int N = 0;
    GrassmannPoint W;
    std::vector<Laurent> u;
};

inline void validate_flag(const FlagTuple& F) {
    if (F.N < 2 || static_cast<int>(F.u.size()) != F.N) throw FlagInvalid("need N >= 2 flag vectors");
    if (!is_kdv_subspace(F.W, F.N)) throw FlagInvalid("z^N W is not contained in W");
    for (auto& u : F.u)
        if (!contains(F.W, u)) throw FlagInvalid("flag vector outside W");
    // dimensions of V_i / z^N W are 1, 2, .., N
    const int d = F.W.depth + F.N;
    std::vector<Laurent> cols;
    for (auto& v : F.W.basis) cols.push_back(times_z(v, F.N));
    for (int i = 0; i < F.N; ++i) {
        cols.push_back(truncate_above(F.u[i], d));
        if (static_cast<int>(detail::echelon(cols).size()) != static_cast<int>(cols.size()))
            throw FlagInvalid("flag vectors are dependent modulo z^N W");
    }
}

// W_i with the basis z^{i-N} u_i, z^{i-N} u_{i-1}, .., z^{i-N} u_1, z^i v_j in that order.
inline GrassmannPoint raw_subspace(const FlagTuple& F, int i) {
    if (i < 1 || i > F.N) throw InputError("flag position out of range");
    std::vector<Laurent> cols;
    for (int k = i; k >= 1; --k) cols.push_back(times_z(F.u[k - 1], i - F.N));
    for (auto& v : F.W.basis) cols.push_back(times_z(v, i));
    return make_point(F.W.depth + i, cols, false);
}

inline GrassmannPoint subspace(const FlagTuple& F, int i) { return canonical(raw_subspace(F, i)); }

struct MKdVTaus {
    std::vector<GrassmannPoint> W;  // W_1..W_N
    std::vector<ExactPoly> tau;     // normalized
};

inline MKdVTaus mkdv_from_flag(const FlagTuple& F, int times = 0) {
    validate_flag(F);
    MKdVTaus r;
    for (int i = 1; i <= F.N; ++i) {
        r.W.push_back(subspace(F, i));
        r.tau.push_back(normalized(tau(r.W.back(), times)));
    }
    return r;
}

// zW_i in W_{i+1}, cyclically.
inline bool check_mkdv_containment(const MKdVTaus& m) {
    const int N = static_cast<int>(m.W.size());
    for (int i = 0; i < N; ++i) {
        const auto& next = m.W[(i + 1) % N];
        for (auto& v : m.W[i].basis)
            if (!contains(next, times_z(v, 1))) return false;
        for (int j = m.W[i].depth + 1; j <= next.depth; ++j)
            if (!contains(next, monomial_z(j + 1))) return false;
    }
    return true;
}

// Same tuple with the first subspace moved to the end: (W_2, .., W_N, W_1).
inline FlagTuple rotate(const FlagTuple& F) {
    FlagTuple r;
    r.N = F.N;
    std::vector<Laurent> cols;
    for (auto& v : F.W.basis) cols.push_back(times_z(v, 1));
    cols.push_back(times_z(F.u[0], 1 - F.N));
    r.W = make_point(F.W.depth + 1, cols);
    for (int k = 1; k < F.N; ++k) r.u.push_back(times_z(F.u[k], 1));
    r.u.push_back(times_z(F.u[0], 1 - F.N));
    return r;
}

// Replace V_i by V_{i-1} + span(u_{i+1} + c u_i).
inline FlagTuple generate_flag(const FlagTuple& F, int i, const Rat& c) {
    validate_flag(F);
    if (i < 1 || i > F.N) throw InputError("direction out of range");
    if (i == F.N) {
        FlagTuple r = generate_flag(rotate(F), F.N - 1, c);
        for (int k = 1; k < F.N; ++k) r = rotate(r);
        return r;
    }
    FlagTuple r = F;
    r.u[i - 1] = laurent_axpy(F.u[i], c, F.u[i - 1]);
    r.u[i] = F.u[i - 1];
    return r;
}

// Monic tau of W_i at t = 0 as a polynomial in x.
inline QPoly tau_at_zero(const FlagTuple& F, int i) {
    return tau(subspace(F, i), 0).restrict_to(kVarX).monic();
}

// Generation with the parameter read as in the polynomial generation: c is
// the coefficient of x^{k_i} in the new monic tau at t = 0, k_i = deg tau_i.
// The monic tau is affine in the flag parameter, so two samples fix the map.
inline FlagTuple generate_flag_matching(const FlagTuple& F, int i, const Rat& c) {
    const int k = tau_at_zero(F, i).degree();
    QPoly p0 = tau_at_zero(generate_flag(F, i, Rat(0)), i);
    QPoly p1 = tau_at_zero(generate_flag(F, i, Rat(1)), i);
    if (p0.degree() <= k || p1.degree() != p0.degree())
        throw DegreeNotIncreasing("direction " + std::to_string(i));
    const Rat alpha = p0[k], beta = p1[k] - p0[k];
    if (beta == 0) throw DegreeNotIncreasing("parameter does not move the tau function");
    return generate_flag(F, i, (c - alpha) / beta);
}

// V_i = z^N W + span(u_1..u_i) presented at depth(W) + N (not of virtual dimension zero).
inline std::vector<Laurent> flag_space(const FlagTuple& F, int i) {
    const int d = F.W.depth + F.N;
    std::vector<Laurent> cols;
    for (auto& v : F.W.basis) cols.push_back(times_z(v, F.N));
    for (int k = 0; k < i; ++k) cols.push_back(truncate_above(F.u[k], d));
    return detail::echelon(cols);
}

// Replace V_i by V_{i-1} + span(w) for w in V_{i+1}, 1 <= i < N.
inline FlagTuple replace_line(const FlagTuple& F, int i, const Laurent& w) {
    validate_flag(F);
    if (i < 1 || i >= F.N) throw InputError("direction out of range");
    const int d = F.W.depth + F.N;
    auto rank_with = [&](int k) {
        auto cols = flag_space(F, k);
        cols.push_back(truncate_above(w, d));
        return static_cast<int>(detail::echelon(cols).size());
    };
    const int base = F.W.depth + 1;
    if (rank_with(i + 1) != base + i + 1) throw FlagInvalid("new line is not inside V_{i+1}");
    if (rank_with(i) == base + i) throw LineCoincidesWithOld("new line equals V_i / V_{i-1}");
    FlagTuple r = F;
    // keep V_{i+1}: the old u_i completes the new line to a basis
    r.u[i] = F.u[i - 1];
    r.u[i - 1] = w;
    validate_flag(r);
    return r;
}

// Q_i = psi_{W_i} / (Omega z^{depth_i + 1}) = 1 + O(1/z) satisfy
// z Q_{i+1} = (1+z) Q_i(x+1) - v_i Q_i, v_i = tau_i tau_{i+1}(x+1) / (tau_i(x+1) tau_{i+1}),
// with Q_{N+1} = Q_1.  Witness is the failing i.
inline IdentityReport ba_relations(const FlagTuple& F, int times = 0) {
    validate_flag(F);
    const int nv = family_nvars(times);
    const Rat one(1);
    const ExactPoly z = ExactPoly::var(kVarZ, nv), onez = ExactPoly(one, nv) + z;
    std::vector<MFrac> Q;
    std::vector<ExactPoly> t;
    for (int i = 1; i <= F.N; ++i) {
        auto W = subspace(F, i);
        MFrac R = baker(W, times);
        Q.push_back(MFrac(R.num(), R.den() * z.pow(W.depth + 1)));
        t.push_back(tau(W, times));
    }
    IdentityReport rep;
    rep.ok = true;
    for (int i = 0; i < F.N; ++i) {
        const int j = (i + 1) % F.N;
        MFrac v(t[i] * t[j].shift(kVarX, one), t[i].shift(kVarX, one) * t[j]);
        MFrac rhs = MFrac(onez) * Q[i].shift(kVarX, one) - v * Q[i];
        if (!equal(MFrac(z) * Q[j], rhs)) {
            rep.ok = false;
            rep.witness = i + 1;
            return rep;
        }
    }
    return rep;
}

// The flag whose subspaces carry the rows of A: W = span of the first nu
// rows, u_i from row nu + i - 1.
inline FlagTuple flag_from_A(const SpectralMatrixA& A) {
    check_shape(A);
    const int N = A.N, nu = A.nu;
    auto column = [&](int k, int shift) {
        Laurent v;
        for (int j = 0; j < A.a.cols; ++j)
            if (A.a(k, j) != 0) v[shift - j] = A.a(k, j);
        return v;
    };
    FlagTuple F;
    F.N = N;
    std::vector<Laurent> cols;
    for (int k = 0; k < nu; ++k) cols.push_back(column(k, nu - 1));
    F.W = make_point(nu - 1, cols);
    for (int i = 1; i <= N; ++i) F.u.push_back(column(nu + i - 1, N + nu - 1));
    validate_flag(F);
    return F;
}

// Inverse of flag_from_A: rows from the columns of W and the flag vectors
// (reduced modulo z^{N+nu} H_+).
inline SpectralMatrixA A_from_flag(const FlagTuple& F) {
    validate_flag(F);
    const int N = F.N, nu = F.W.depth + 1;
    std::vector<std::pair<Laurent, int>> rows;  // column, exponent of the first matrix column
    for (auto& v : F.W.basis) rows.emplace_back(v, nu - 1);
    for (auto& u : F.u) rows.emplace_back(truncate_above(u, N + nu - 1), N + nu - 1);
    int D = 0;
    for (auto& [v, top] : rows) D = std::max(D, top - laurent_order(v));
    SpectralMatrixA A{N, nu, Matrix<Rat>(N + nu, D + 1)};
    for (int k = 0; k < N + nu; ++k)
        for (auto& [e, c] : rows[k].first) A.a(k, rows[k].second - e) = c;
    return A;
}

// The trivial tuple (H_+, .., H_+) with u_i = z^{N-i}.
inline FlagTuple trivial_flag(int N) {
    FlagTuple F;
    F.N = N;
    for (int i = 1; i <= N; ++i) F.u.push_back(monomial_z(N - i));
    return F;
}

} // namespace bae
