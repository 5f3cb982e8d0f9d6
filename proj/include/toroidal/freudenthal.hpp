#pragma once

#include "toroidal/affine.hpp"

#include <map>
#include <stdexcept>
#include <vector>

namespace toroidal {

// Freudenthal recursion for symmetrizable affine g_aff, working purely on
// weight data: imaginary roots m*delta_1 enter with multiplicity rank(g_fin).
// Independent of the Verma/Gram construction; serves as its oracle.
class FreudenthalAffine {
  public:
    FreudenthalAffine(const RootSystem& rs, const AffineWeight& hw) : rs_(rs), hw_(hw) {
        if (!is_dominant(rs_, hw_)) throw std::domain_error("highest weight not dominant");
        rho_ = affine_rho(rs_);
        top_ = affine_form(rs_, hw_ + rho_, hw_ + rho_);
    }

    // multiplicity of mu = hw - sum c_i alpha_i - c_{n+1} alpha_{n+1}
    Int mult(const std::vector<long>& c) {
        for (long v : c)
            if (v < 0) return 0;
        auto it = memo_.find(c);
        if (it != memo_.end()) return it->second;
        bool zero = true;
        for (long v : c)
            if (v != 0) zero = false;
        if (zero) return memo_[c] = 1;

        AffineWeight mu = weight_of(c);
        Rat denom = top_ - affine_form(rs_, mu + rho_, mu + rho_);
        if (denom == 0) return memo_[c] = 0;

        size_t n = rs_.rank();
        Rat sum = 0;
        long depth_budget = c[n];
        // real roots gamma + m*delta, m = 0..depth; imaginary m*delta with mult n
        for (long m = 0; m <= depth_budget; ++m) {
            if (m == 0) {
                for (const RootCoords& gamma : rs_.positive_roots()) sum += string_sum(c, gamma, 0, 1);
            } else {
                for (const RootCoords& gamma : rs_.roots()) sum += string_sum(c, gamma, m, 1);
                RootCoords zero_root(n, 0);
                sum += string_sum(c, zero_root, m, static_cast<long>(n));
            }
        }
        Rat m2 = Rat(2) * sum / denom;
        Int r = to_int(m2);
        if (r < 0) throw std::logic_error("negative multiplicity in Freudenthal recursion");
        return memo_[c] = r;
    }

    Int mult_weight(const AffineWeight& mu, long depth_cap) {
        std::vector<long> c = depth_coords(mu);
        if (c.empty()) return 0;
        if (c.back() > depth_cap) throw std::domain_error("depth exceeded");
        return mult(c);
    }

    // depth coordinates of hw - mu, or empty if mu is not below hw
    std::vector<long> depth_coords(const AffineWeight& mu) const {
        size_t n = rs_.rank();
        if (mu.level != hw_.level) return {};
        Rat dd = hw_.delta1 - mu.delta1;
        if (!is_integer(dd)) return {};
        long cn1 = static_cast<long>(to_int(dd));
        std::vector<Rat> rc = rs_.omega_to_root(hw_.finite - mu.finite);
        const RootCoords& th = rs_.theta();
        std::vector<long> c(n + 1, 0);
        for (size_t i = 0; i < n; ++i) {
            Rat v = rc[i] + Rat(cn1) * Rat(th[i]);
            if (!is_integer(v)) return {};
            c[i] = static_cast<long>(to_int(v));
        }
        c[n] = cn1;
        return c;
    }

    AffineWeight weight_of(const std::vector<long>& c) const {
        size_t n = rs_.rank();
        AffineWeight mu = hw_;
        mu.delta1 -= Rat(c[n]);
        FiniteWeight drop = rs_.zero_weight();
        for (size_t i = 0; i < n; ++i) {
            RootCoords a(n, 0);
            a[i] = 1;
            FiniteWeight aw = rs_.root_to_weight(a);
            for (size_t j = 0; j < n; ++j) drop.omega[j] += c[i] * aw.omega[j];
        }
        FiniteWeight thw = rs_.root_to_weight(rs_.theta());
        for (size_t j = 0; j < n; ++j) drop.omega[j] -= c[n] * thw.omega[j];
        mu.finite = hw_.finite - drop;
        return mu;
    }

  private:
    const RootSystem& rs_;
    AffineWeight hw_, rho_;
    Rat top_;
    std::map<std::vector<long>, Int> memo_;

    // sum over t >= 1 of mult(mu + t*alpha) * (mu + t*alpha | alpha) * root_mult
    Rat string_sum(const std::vector<long>& c, const RootCoords& gamma, long m, long root_mult) {
        size_t n = rs_.rank();
        // alpha = gamma + m*delta in depth coordinates
        std::vector<long> ac(n + 1, 0);
        const RootCoords& th = rs_.theta();
        for (size_t i = 0; i < n; ++i) ac[i] = gamma[i] + m * th[i];
        ac[n] = m;
        Rat s = 0;
        std::vector<long> cc = c;
        for (long t = 1;; ++t) {
            bool ok = true;
            for (size_t i = 0; i <= n; ++i) {
                cc[i] -= ac[i];
                if (cc[i] < 0) ok = false;
            }
            if (!ok) break;
            Int mm = mult(cc);
            if (mm != 0) {
                AffineWeight nu = weight_of(cc);
                // (nu | alpha) with alpha = gamma + m delta: level 0, delta1 coeff m
                Rat pairing = rs_.form_wr(nu.finite, gamma) + nu.level * Rat(m);
                s += Rat(mm) * pairing * Rat(root_mult);
            }
        }
        return s;
    }
};

}  // namespace toroidal
