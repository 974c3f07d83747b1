#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>

#include "bae/core/errors.hpp"

namespace bae {

using Rat = mpq_class;
using cd = std::complex<double>;

inline Rat rat(long p, long q = 1) {
    Rat r(p, q);
    r.canonicalize();
    return r;
}

// Accepts "p/q", "p", "-p/q" and plain decimals such as "1.25".
inline Rat parse_rat(std::string s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    size_t b = 0;
    while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    s = s.substr(b);
    if (s.empty()) throw InputError("empty rational");
    auto dot = s.find('.');
    if (dot != std::string::npos && s.find('/') == std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        std::string den = "1" + std::string(s.size() - dot - 1, '0');
        s = digits + "/" + den;
    }
    Rat r;
    if (r.set_str(s, 10) != 0) throw InputError("not a rational: " + s);
    if (r.get_den() == 0) throw InputError("zero denominator: " + s);
    r.canonicalize();
    return r;
}

inline std::string str(const Rat& r) { return r.get_str(); }

inline bool is_zero(const Rat& r) { return sgn(r) == 0; }
inline bool is_zero(const cd& z) { return z == cd(0.0, 0.0); }
inline bool is_zero(double z) { return z == 0.0; }

inline double to_double(const Rat& r) { return r.get_d(); }
inline cd to_cd(const Rat& r) { return cd(r.get_d(), 0.0); }

// Scalar conversion used by generic evaluation code.
template <class T> struct ScalarCast {
    template <class S> static T from(const S& a) { return T(a); }
};
template <> struct ScalarCast<cd> {
    static cd from(const cd& a) { return a; }
    static cd from(const Rat& a) { return to_cd(a); }
    static cd from(double a) { return cd(a, 0.0); }
};
template <> struct ScalarCast<double> {
    static double from(double a) { return a; }
    static double from(const Rat& a) { return a.get_d(); }
};
template <class T, class S> T scalar_cast(const S& a) { return ScalarCast<T>::from(a); }

} // namespace bae
