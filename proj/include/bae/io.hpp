#pragma once

// JSON encoding of the library's values.  Exact rationals travel as strings
// ("3/4"), complex numbers as {"re", "im"}, Laurent polynomials in z as
// {"exponent": "coefficient"} objects.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bae/grassmann.hpp"
#include "bae/periodic_inverse.hpp"
#include "bae/rs_spectral.hpp"

namespace bae::io {

using json = nlohmann::json;

inline json to_json(const Rat& r) { return r.get_str(); }

inline Rat rat_from(const json& j) {
    if (j.is_number_integer()) return Rat(j.get<long>());
    if (!j.is_string()) throw InputError("expected a rational as a string, got " + j.dump());
    Rat r;
    if (r.set_str(j.get<std::string>(), 10) != 0) throw InputError("bad rational '" + j.get<std::string>() + "'");
    if (r.get_den() == 0) throw InputError("zero denominator");
    r.canonicalize();
    return r;
}

inline json to_json(const cd& z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

inline cd complex_from(const json& j) {
    if (j.is_number()) return cd(j.get<double>(), 0.0);
    if (!j.is_object() || !j.contains("re")) throw InputError("expected {re, im}, got " + j.dump());
    return cd(j.at("re").get<double>(), j.value("im", 0.0));
}

template <class T, class F> json array_of(const std::vector<T>& v, F f) {
    json a = json::array();
    for (auto& x : v) a.push_back(f(x));
    return a;
}

template <class F> auto vector_from(const json& j, F f) {
    if (!j.is_array()) throw InputError("expected an array, got " + j.dump());
    std::vector<decltype(f(j))> r;
    for (auto& x : j) r.push_back(f(x));
    return r;
}

inline std::vector<Rat> rats_from(const json& j) { return vector_from(j, rat_from); }
inline std::vector<cd> complexes_from(const json& j) { return vector_from(j, complex_from); }
inline json to_json(const std::vector<cd>& v) { return array_of(v, [](const cd& z) { return to_json(z); }); }

// Univariate polynomials: coefficients from degree 0 upwards.
inline json to_json(const QPoly& p) {
    json a = json::array();
    for (auto& c : p.c) a.push_back(to_json(c));
    return a;
}

inline QPoly qpoly_from(const json& j) { return QPoly(rats_from(j)); }

inline std::string poly_text(const QPoly& p) {
    return ExactPoly::from_univariate(p, 0, 1).to_string({"x"});
}

inline std::vector<std::string> var_names(int nvars) {
    std::vector<std::string> n{"x", "z"};
    for (int j = 1; j + 2 <= nvars; ++j) n.push_back("t" + std::to_string(j));
    n.resize(nvars);
    return n;
}

inline json to_json(const ExactPoly& p) {
    json terms = json::array();
    for (auto& [key, c] : p.terms()) {
        std::vector<int> e(p.nvars());
        for (int v = 0; v < p.nvars(); ++v) e[v] = ExactPoly::exponent(key, v);
        terms.push_back({{"e", e}, {"c", to_json(c)}});
    }
    return json{{"vars", var_names(p.nvars())}, {"terms", terms}, {"text", p.to_string(var_names(p.nvars()))}};
}

inline ExactPoly exact_poly_from(const json& j) {
    const int nv = static_cast<int>(j.at("vars").size());
    ExactPoly p(nv);
    for (auto& t : j.at("terms")) {
        auto e = t.at("e").get<std::vector<int>>();
        if (static_cast<int>(e.size()) != nv) throw InputError("exponent vector length differs from vars");
        for (int x : e)
            if (x < 0 || x > 255) throw InputError("exponent out of range");
        p = p + ExactPoly::monomial(rat_from(t.at("c")), e, nv);
    }
    return p;
}

inline json to_json(const SolutionTuple& y) {
    std::vector<std::string> text;
    for (auto& q : y.polys()) text.push_back(poly_text(q));
    return json{{"N", y.N()}, {"y", array_of(y.polys(), [](const QPoly& q) { return to_json(q); })},
                {"degrees", y.degrees()}, {"text", text}};
}

inline SolutionTuple solution_from(const json& j) {
    if (!j.contains("y")) throw InputError("solution needs a 'y' array");
    SolutionTuple y(vector_from(j.at("y"), qpoly_from));
    if (j.contains("N") && j.at("N").get<int>() != y.N()) throw InputError("N does not match the number of polynomials");
    return y;
}

inline json to_json(const Matrix<Rat>& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows; ++i) {
        json r = json::array();
        for (int k = 0; k < m.cols; ++k) r.push_back(to_json(m(i, k)));
        rows.push_back(r);
    }
    return rows;
}

inline Matrix<Rat> rat_matrix_from(const json& j) {
    auto rows = vector_from(j, rats_from);
    if (rows.empty()) return Matrix<Rat>(0, 0);
    Matrix<Rat> m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int i = 0; i < m.rows; ++i) {
        if (static_cast<int>(rows[i].size()) != m.cols) throw InputError("ragged matrix");
        for (int k = 0; k < m.cols; ++k) m(i, k) = rows[i][k];
    }
    return m;
}

inline json to_json(const SpectralMatrixA& A) { return json{{"N", A.N}, {"nu", A.nu}, {"A", to_json(A.a)}}; }

inline SpectralMatrixA matrix_a_from(const json& j) {
    SpectralMatrixA A{j.at("N").get<int>(), j.at("nu").get<int>(), rat_matrix_from(j.at("A"))};
    check_shape(A);
    return A;
}

inline json to_json(const NilpotentSeed& s) { return json{{"N", s.N}, {"nu", s.nu}, {"seed", to_json(s.W)}}; }

inline NilpotentSeed seed_from(const json& j) {
    NilpotentSeed s{j.at("N").get<int>(), j.at("nu").get<int>(), rat_matrix_from(j.at("seed"))};
    if (s.W.rows != s.N + s.nu || s.W.cols != s.N + s.nu) throw InputError("seed must be (N+nu) x (N+nu)");
    return s;
}

inline json to_json(const PhasePoint& p) { return json{{"u", to_json(p.u)}, {"gamma", to_json(p.gamma)}}; }

inline PhasePoint phase_point_from(const json& j) {
    PhasePoint p{complexes_from(j.at("u")), complexes_from(j.at("gamma"))};
    if (p.u.size() != p.gamma.size()) throw InputError("u and gamma differ in length");
    return p;
}

inline json to_json(const GenericSpectrum& s) { return json{{"mu", to_json(s.mu)}, {"a", to_json(s.a)}}; }

inline GenericSpectrum spectrum_from(const json& j) {
    GenericSpectrum s{complexes_from(j.at("mu")), complexes_from(j.at("a"))};
    if (s.mu.size() != s.a.size()) throw InputError("mu and a differ in length");
    return s;
}

inline json to_json(const Laurent& v) {
    json o = json::object();
    for (auto& [e, c] : v) o[std::to_string(e)] = to_json(c);
    return o;
}

inline Laurent laurent_from(const json& j) {
    if (!j.is_object()) throw InputError("expected a Laurent polynomial {exponent: coefficient}");
    Laurent v;
    for (auto& [k, c] : j.items()) {
        size_t used = 0;
        int e = 0;
        try {
            e = std::stoi(k, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != k.size()) throw InputError("bad exponent '" + k + "'");
        v[e] += rat_from(c);
    }
    return laurent_clean(v);
}

// W is given by its columns; the depth is one less than their number.
inline json to_json(const FlagTuple& F) {
    return json{{"N", F.N},
                {"W_basis", array_of(F.W.basis, [](const Laurent& v) { return to_json(v); })},
                {"flag_vectors", array_of(F.u, [](const Laurent& v) { return to_json(v); })}};
}

inline FlagTuple flag_from(const json& j) {
    FlagTuple F;
    F.N = j.at("N").get<int>();
    auto cols = vector_from(j.at("W_basis"), laurent_from);
    for (auto& c : cols)
        if (c.empty()) throw FlagInvalid("zero column in W_basis");
    try {
        F.W = cols.empty() ? GrassmannPoint::hplus() : make_point(static_cast<int>(cols.size()) - 1, cols, false);
    } catch (const InputError& e) {
        throw FlagInvalid(std::string("W_basis: ") + e.what());
    }
    F.u = vector_from(j.at("flag_vectors"), laurent_from);
    validate_flag(F);
    return F;
}

inline json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
}

inline void write_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << j.dump(2) << "\n";
}

} // namespace bae::io
