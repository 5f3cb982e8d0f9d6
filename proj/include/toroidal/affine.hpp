#pragma once

#include "toroidal/finite_lie.hpp"
#include "toroidal/rootsys.hpp"

#include <compare>
#include <stdexcept>
#include <vector>

namespace toroidal {

// Weight of g_aff = g_fin (x) C[t1^{+-1}] + C K1 + C d1, stored by its values
// on the coroots, on K1 and on d1: lambda = level*Lambda_{n+1} + finite + delta1*delta_1.
struct AffineWeight {
    Rat level;
    FiniteWeight finite;
    Rat delta1;

    bool operator==(const AffineWeight& o) const {
        return level == o.level && finite == o.finite && delta1 == o.delta1;
    }
    bool operator<(const AffineWeight& o) const {
        if (level != o.level) return level < o.level;
        if (!(finite == o.finite)) return finite < o.finite;
        return delta1 < o.delta1;
    }
    AffineWeight operator+(const AffineWeight& o) const {
        return {level + o.level, finite + o.finite, delta1 + o.delta1};
    }
};

// <Lambda, alpha_i^vee> for i = 1..n+1 (affine numbering, 1-based)
inline Rat pair_affine_coroot(const RootSystem& rs, const AffineWeight& w, size_t i) {
    if (i >= 1 && i <= rs.rank()) return Rat(w.finite.omega[i - 1]);
    if (i == rs.rank() + 1) return w.level - rs.pair_coroot(w.finite, rs.theta());
    throw std::invalid_argument("affine coroot index out of range");
}

inline bool is_dominant(const RootSystem& rs, const AffineWeight& w) {
    for (size_t i = 1; i <= rs.rank() + 1; ++i) {
        Rat p = pair_affine_coroot(rs, w, i);
        if (!is_integer(p) || p < 0) return false;
    }
    return true;
}

// invariant form on h_aff^*: (a|b) = (a_fin|b_fin) + level_a*delta1_b + level_b*delta1_a
inline Rat affine_form(const RootSystem& rs, const AffineWeight& a, const AffineWeight& b) {
    return rs.form_ww(a.finite, b.finite) + a.level * b.delta1 + b.level * a.delta1;
}

inline AffineWeight affine_rho(const RootSystem& rs) {
    return {Rat(rs.dual_coxeter_number()), rs.rho(), Rat(0)};
}

// Basis element of g_aff.
struct AffGen {
    enum class Kind { Loop, K1, D1 };
    Kind kind = Kind::Loop;
    size_t fin = 0;  // FiniteLieAlgebra basis index, for Loop
    long m = 0;      // t1 exponent, for Loop

    static AffGen loop(size_t fin, long m) { return {Kind::Loop, fin, m}; }
    static AffGen k1() { return {Kind::K1, 0, 0}; }
    static AffGen d1() { return {Kind::D1, 0, 0}; }

    auto operator<=>(const AffGen&) const = default;
};

enum class GenClass { Raising, Cartan, Lowering };

class AffineAlgebra {
  public:
    AffineAlgebra(const RootSystem& rs, const FiniteLieAlgebra& g) : rs_(rs), g_(g) {}

    const RootSystem& root_system() const { return rs_; }
    const FiniteLieAlgebra& finite() const { return g_; }

    using Combo = std::vector<std::pair<AffGen, Rat>>;

    Combo bracket(const AffGen& a, const AffGen& b) const {
        Combo out;
        if (a.kind == AffGen::Kind::K1 || b.kind == AffGen::Kind::K1) return out;
        if (a.kind == AffGen::Kind::D1 && b.kind == AffGen::Kind::D1) return out;
        if (a.kind == AffGen::Kind::D1) {
            if (b.m != 0) out.push_back({b, Rat(b.m)});
            return out;
        }
        if (b.kind == AffGen::Kind::D1) {
            if (a.m != 0) out.push_back({a, Rat(-a.m)});
            return out;
        }
        for (const auto& [idx, c] : g_.bracket(a.fin, b.fin))
            out.push_back({AffGen::loop(idx, a.m + b.m), c});
        if (a.m + b.m == 0 && a.m != 0) {
            Rat f = Rat(a.m) * g_.form(a.fin, b.fin);
            if (f != 0) out.push_back({AffGen::k1(), f});
        }
        return out;
    }

    GenClass classify(const AffGen& x) const {
        if (x.kind != AffGen::Kind::Loop) return GenClass::Cartan;
        if (x.m > 0) return GenClass::Raising;
        if (x.m < 0) return GenClass::Lowering;
        if (g_.is_e(x.fin)) return GenClass::Raising;
        if (g_.is_f(x.fin)) return GenClass::Lowering;
        return GenClass::Cartan;
    }

    // transpose anti-automorphism; fixes h_aff pointwise
    AffGen sigma(const AffGen& x) const {
        if (x.kind != AffGen::Kind::Loop) return x;
        return AffGen::loop(g_.sigma(x.fin), -x.m);
    }

    // value of a weight on a Cartan basis element
    Rat eval(const AffineWeight& w, const AffGen& x) const {
        switch (x.kind) {
            case AffGen::Kind::K1:
                return w.level;
            case AffGen::Kind::D1:
                return w.delta1;
            case AffGen::Kind::Loop:
                if (x.m != 0 || !g_.is_h(x.fin)) throw std::invalid_argument("eval on non-Cartan element");
                return Rat(w.finite.omega[x.fin - 2 * g_.positive_count()]);
        }
        throw std::logic_error("unreachable");
    }

    // depth coordinates of the affine root of a loop element: gamma + m*delta as
    // (coords over alpha_1..alpha_n, coefficient of alpha_{n+1})
    std::vector<long> root_ccoords(const AffGen& x) const {
        if (x.kind != AffGen::Kind::Loop) throw std::invalid_argument("not a loop element");
        size_t n = rs_.rank();
        std::vector<long> c(n + 1, 0);
        RootCoords gamma = g_.root_of(x.fin);
        const RootCoords& th = rs_.theta();
        for (size_t i = 0; i < n; ++i) c[i] = gamma[i] + x.m * th[i];
        c[n] = x.m;
        return c;
    }

  private:
    const RootSystem& rs_;
    const FiniteLieAlgebra& g_;
};

}  // namespace toroidal
