#pragma once

#include "toroidal/pi_function.hpp"
#include "toroidal/standard_module.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace toroidal {

// Polynomial with rational coefficients in commuting h_1, h_2, ... where h_s
// stands for alpha^vee (x) t^s; deg(h_s) = s. Keyed by exponent vectors with
// trailing zeros stripped.
using HPoly = std::map<std::vector<int>, Rat>;

inline void hpoly_add(HPoly& p, const std::vector<int>& mono, const Rat& c) {
    if (c == 0) return;
    std::vector<int> m = mono;
    while (!m.empty() && m.back() == 0) m.pop_back();
    auto [it, inserted] = p.emplace(std::move(m), c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) p.erase(it);
    }
}

inline HPoly hpoly_mul(const HPoly& a, const HPoly& b) {
    HPoly out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            std::vector<int> m(std::max(ma.size(), mb.size()), 0);
            for (size_t i = 0; i < ma.size(); ++i) m[i] += ma[i];
            for (size_t i = 0; i < mb.size(); ++i) m[i] += mb[i];
            hpoly_add(out, m, ca * cb);
        }
    return out;
}

inline long hpoly_mono_degree(const std::vector<int>& m) {
    long d = 0;
    for (size_t i = 0; i < m.size(); ++i) d += static_cast<long>(i + 1) * m[i];
    return d;
}

// Coefficient of u^s in exp(-sum_r h_r u^r / r), by the Newton recursion
// s p^s = -sum_{r=1}^{s} h_r p^{s-r}; recomputed per call, so thread safe.
inline HPoly garland_p(long s) {
    if (s < 0) throw std::invalid_argument("negative Garland index");
    std::vector<HPoly> p(s + 1);
    hpoly_add(p[0], {}, Rat(1));
    for (long t = 1; t <= s; ++t) {
        HPoly acc;
        for (long r = 1; r <= t; ++r) {
            HPoly hr;
            std::vector<int> m(r, 0);
            m[r - 1] = 1;
            hpoly_add(hr, m, Rat(1));
            for (const auto& [mono, c] : hpoly_mul(hr, p[t - r])) hpoly_add(acc, mono, c);
        }
        for (const auto& [mono, c] : acc) hpoly_add(p[t], mono, -c / Rat(t));
    }
    return p[s];
}

// Element of U(h_aff (x) C[t_2^{+-1},..,t_k^{+-1}]) as a commutative polynomial
// in symbols (h, t^m) where h is alpha_i^vee (index i >= 0) or K1 (index -1).
using UVar = std::pair<long, std::vector<long>>;
using UMono = std::vector<UVar>;  // kept sorted
using UPoly = std::map<UMono, Rat>;

inline void upoly_add(UPoly& p, UMono m, const Rat& c) {
    if (c == 0) return;
    std::sort(m.begin(), m.end());
    auto [it, inserted] = p.emplace(std::move(m), c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) p.erase(it);
    }
}

inline UPoly upoly_mul(const UPoly& a, const UPoly& b) {
    UPoly out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            UMono m = ma;
            m.insert(m.end(), mb.begin(), mb.end());
            upoly_add(out, std::move(m), ca * cb);
        }
    return out;
}

// The transported coroot beta^vee for beta = alpha + r delta_1 as a linear
// UPoly in degree s: (alpha^vee + (2r/(alpha|alpha)) K1) (x) a^s.
inline UPoly transported_h(const FiniteLieAlgebra& g, const RootCoords& alpha, long r,
                           const std::vector<long>& a, long s) {
    const RootSystem& rs = g.root_system();
    UPoly out;
    std::vector<long> as(a.size());
    for (size_t i = 0; i < a.size(); ++i) as[i] = a[i] * s;
    std::vector<Rat> hc = g.coroot_coords(alpha);
    for (size_t i = 0; i < rs.rank(); ++i)
        if (hc[i] != 0) upoly_add(out, {UVar{static_cast<long>(i), as}}, hc[i]);
    Rat ck = Rat(2 * r) / rs.root_norm2(alpha);
    if (ck != 0) upoly_add(out, {UVar{-1, as}}, ck);
    return out;
}

inline void require_positive_real_affine(const RootSystem& rs, const RootCoords& alpha, long r) {
    if (!rs.is_root(alpha)) throw std::domain_error("not a positive real affine root");
    if (r < 0) throw std::domain_error("not a positive real affine root");
    if (r == 0) {
        for (long c : alpha)
            if (c < 0) throw std::domain_error("not a positive real affine root");
    }
}

// phi_{alpha,r}^a applied to an HPoly: the substitution h_s -> beta^vee (x) a^s
// is an algebra map.
inline UPoly transport(const FiniteLieAlgebra& g, const HPoly& p, const RootCoords& alpha, long r,
                       const std::vector<long>& a) {
    require_positive_real_affine(g.root_system(), alpha, r);
    UPoly out;
    for (const auto& [mono, c] : p) {
        UPoly term;
        upoly_add(term, {}, Rat(1));
        for (size_t i = 0; i < mono.size(); ++i)
            for (int e = 0; e < mono[i]; ++e)
                term = upoly_mul(term, transported_h(g, alpha, r, a, static_cast<long>(i + 1)));
        for (const auto& [m, cc] : term) upoly_add(out, m, c * cc);
    }
    return out;
}

// Coefficient of u^s in prod_M (1 - ev_M(a) u)^{pi(M)(beta^vee)}; negative
// exponents expand as a power series.
inline Rat evaluate_under_pi(const RootSystem& rs, const RootCoords& alpha, long r,
                             const std::vector<long>& a, long s, const PiFunction& pi) {
    require_positive_real_affine(rs, alpha, r);
    if (s < 0) return Rat(0);
    std::vector<Rat> series(s + 1, Rat(0));
    series[0] = 1;
    auto mul_factor = [&](const Rat& x, Int c) {
        // multiply the truncated series by (1 - x u)^c
        if (c >= 0) {
            for (Int rep = 0; rep < c; ++rep)
                for (long j = s; j >= 1; --j) series[j] -= x * series[j - 1];
        } else {
            // (1 - x u)^{-1} repeated: geometric series
            for (Int rep = 0; rep < -c; ++rep)
                for (long j = 1; j <= s; ++j) series[j] += x * series[j - 1];
        }
    };
    Rat factor = Rat(2 * r) / rs.root_norm2(alpha);
    for (size_t i = 0; i < pi.support_size(); ++i) {
        Rat cr = rs.pair_coroot(pi.weights[i].finite, alpha) + factor * pi.weights[i].level;
        Int c = to_int(cr);
        mul_factor(pi.ev(i, a), c);
    }
    return series[s];
}

// pi(M)(beta^vee) summed over the support: the degree bound for Eq-style
// vanishing of p_{beta,a}^s on the highest weight line.
inline Int pi_coroot_total(const RootSystem& rs, const RootCoords& alpha, long r,
                           const PiFunction& pi) {
    Rat factor = Rat(2 * r) / rs.root_norm2(alpha);
    Rat s = 0;
    for (const AffineWeight& w : pi.weights) s += rs.pair_coroot(w.finite, alpha) + factor * w.level;
    return to_int(s);
}

// numeric evaluation of a UPoly under phi_pi (every variable is a scalar)
inline Rat evaluate_upoly_under_pi(const RootSystem& rs, const UPoly& p, const PiFunction& pi) {
    Rat out = 0;
    for (const auto& [mono, c] : p) {
        Rat term = c;
        for (const UVar& v : mono) {
            Rat val = 0;
            for (size_t i = 0; i < pi.support_size(); ++i) {
                Rat wv = (v.first < 0) ? pi.weights[i].level
                                       : Rat(pi.weights[i].finite.omega[v.first]);
                val += wv * pi.ev(i, v.second);
            }
            term *= val;
        }
        out += term;
    }
    return out;
}

// On-module verification of the Garland identities on the highest weight
// vector: (x_a^+ ox t)^r (x_a^- ox 1)^{r+1} v = sum_s (x_a^- ox t^{r-s}) p^s v
// and (x_a^+ ox t)^{r+1} (x_a^- ox 1)^{r+1} v = p^{r+1} v, exactly.
struct GarlandReport {
    bool sum_identity = false;
    bool power_identity = false;
    bool ok() const { return sum_identity && power_identity; }
};

inline TruncatedModule::Vec vec_add(const TruncatedModule::Vec& a, const TruncatedModule::Vec& b,
                                    const Rat& cb) {
    if (b.key.empty() || cb == 0) return a;
    if (a.key.empty()) {
        TruncatedModule::Vec out = b;
        for (Rat& c : out.coords) c *= cb;
        return out;
    }
    if (a.key != b.key) throw std::invalid_argument("adding vectors of different weights");
    TruncatedModule::Vec out = a;
    for (size_t i = 0; i < out.coords.size(); ++i) out.coords[i] += cb * b.coords[i];
    return out;
}

inline bool vec_equal(const TruncatedModule::Vec& a, const TruncatedModule::Vec& b) {
    bool az = a.key.empty() || a.zero();
    bool bz = b.key.empty() || b.zero();
    if (az || bz) return az && bz;
    return a.key == b.key && a.coords == b.coords;
}

inline TruncatedModule::Vec apply_hpoly(TruncatedModule& x, const HPoly& p, const RootCoords& alpha,
                                        const TruncatedModule::Vec& v) {
    const FiniteLieAlgebra& g = x.algebra().finite();
    std::vector<Rat> hc = g.coroot_coords(alpha);
    auto apply_h = [&](long s, const TruncatedModule::Vec& w) {
        TruncatedModule::Vec acc = x.zero_vec();
        for (size_t i = 0; i < hc.size(); ++i) {
            if (hc[i] == 0) continue;
            TruncatedModule::Vec part = x.act(AffGen::loop(g.h_index(i), s), w);
            acc = vec_add(acc, part, hc[i]);
        }
        return acc;
    };
    TruncatedModule::Vec out = x.zero_vec();
    for (const auto& [mono, c] : p) {
        TruncatedModule::Vec term = v;
        for (size_t i = 0; i < mono.size() && !term.key.empty(); ++i)
            for (int e = 0; e < mono[i] && !term.key.empty(); ++e)
                term = apply_h(static_cast<long>(i + 1), term);
        out = vec_add(out, term, c);
    }
    return out;
}

inline GarlandReport verify_garland_on_module(TruncatedModule& x, long r, size_t root_idx = 0) {
    if (r < 1) throw std::invalid_argument("Garland identities need r >= 1");
    if (x.depth() < r + 1) throw std::domain_error("depth too small");
    const FiniteLieAlgebra& g = x.algebra().finite();
    const RootCoords& alpha = x.algebra().root_system().positive_roots()[root_idx];
    AffGen e_t = AffGen::loop(g.e_index(root_idx), 1);
    AffGen f_0 = AffGen::loop(g.f_index(root_idx), 0);

    TruncatedModule::Vec low = x.highest_vector();
    for (long i = 0; i <= r; ++i) low = x.act(f_0, low);

    GarlandReport rep;
    {   // sum identity
        TruncatedModule::Vec lhs = low;
        for (long i = 0; i < r; ++i) lhs = x.act(e_t, lhs);
        TruncatedModule::Vec rhs = x.zero_vec();
        for (long s = 0; s <= r; ++s) {
            TruncatedModule::Vec term = apply_hpoly(x, garland_p(s), alpha, x.highest_vector());
            term = x.act(AffGen::loop(g.f_index(root_idx), r - s), term);
            rhs = vec_add(rhs, term, Rat(1));
        }
        rep.sum_identity = vec_equal(lhs, rhs);
    }
    {   // power identity
        TruncatedModule::Vec lhs = low;
        for (long i = 0; i <= r; ++i) lhs = x.act(e_t, lhs);
        TruncatedModule::Vec rhs = apply_hpoly(x, garland_p(r + 1), alpha, x.highest_vector());
        rep.power_identity = vec_equal(lhs, rhs);
    }
    return rep;
}

// sorted monomial rendering, e.g. "(1/2)h1^2 - (1/2)h2"
inline std::string hpoly_to_string(const HPoly& p) {
    if (p.empty()) return "0";
    // descending lexicographic exponent order
    std::vector<std::pair<std::vector<int>, Rat>> terms(p.begin(), p.end());
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::string out;
    for (size_t t = 0; t < terms.size(); ++t) {
        const auto& [mono, c] = terms[t];
        Rat a = c;
        if (t == 0) {
            if (a < 0) {
                out += "-";
                a = -a;
            }
        } else {
            out += (a < 0) ? " - " : " + ";
            if (a < 0) a = -a;
        }
        bool unit = (a == 1) && !mono.empty();
        if (!unit) {
            if (is_integer(a))
                out += a.str();
            else
                out += "(" + a.str() + ")";
        }
        for (size_t i = 0; i < mono.size(); ++i) {
            if (mono[i] == 0) continue;
            out += "h" + std::to_string(i + 1);
            if (mono[i] > 1) out += "^" + std::to_string(mono[i]);
        }
    }
    return out;
}

}  // namespace toroidal
