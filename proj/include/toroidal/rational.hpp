#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace toroidal {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& r) { return numerator(r); }
inline Int rat_den(const Rat& r) { return denominator(r); }

inline bool is_integer(const Rat& r) { return denominator(r) == 1; }

inline Int to_int(const Rat& r) {
    if (!is_integer(r)) throw std::domain_error("expected integer, got " + r.str());
    return numerator(r);
}

// floor(a/b) for exact integers, b > 0
inline Int floor_div(const Int& a, const Int& b) {
    if (b <= 0) throw std::domain_error("floor_div needs positive divisor");
    Int q = a / b;
    if (a % b != 0 && a < 0) --q;
    return q;
}

inline Int floor_rat(const Rat& r) { return floor_div(numerator(r), denominator(r)); }

// non-negative remainder a - b*floor(a/b)
inline Int mod_floor(const Int& a, const Int& b) { return a - b * floor_div(a, b); }

inline Int gcd_int(Int a, Int b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        Int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// g = gcd(a,b) >= 0 together with x,y such that x*a + y*b = g
inline Int ext_gcd(const Int& a, const Int& b, Int& x, Int& y) {
    if (b == 0) {
        x = (a >= 0) ? 1 : -1;
        y = 0;
        return (a >= 0) ? a : Int(-a);
    }
    Int x1, y1;
    Int g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

inline std::string rat_str(const Rat& r) { return r.str(); }

// monomial exponent vectors m in Z^d; b^m with b in (Q*)^d
inline Rat eval_monomial(const std::vector<Rat>& point, const std::vector<long>& m) {
    if (point.size() != m.size()) throw std::invalid_argument("monomial arity mismatch");
    Rat out = 1;
    for (size_t i = 0; i < m.size(); ++i) {
        if (point[i] == 0) throw std::domain_error("evaluation point has zero coordinate");
        Rat p = point[i];
        long e = m[i];
        if (e < 0) {
            p = Rat(1) / p;
            e = -e;
        }
        for (long j = 0; j < e; ++j) out *= p;
    }
    return out;
}

}  // namespace toroidal
