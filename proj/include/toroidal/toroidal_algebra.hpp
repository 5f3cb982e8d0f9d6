#pragma once

#include "toroidal/finite_lie.hpp"
#include "toroidal/rootsys.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace toroidal {

// Element of the degree-r slice of the center Z = Omega_k/dL_k, coefficients
// on t^r K_1..t^r K_k. Canonical form: for r != 0 the first coordinate i0 with
// r_{i0} != 0 carries coefficient 0 (the relation sum_i r_i t^r K_i = 0 is
// quotiented out); for r = 0 all k coordinates are free.
struct CentralVector {
    std::vector<long> degree;
    std::vector<Rat> coeffs;

    bool zero() const {
        for (const Rat& c : coeffs)
            if (c != 0) return false;
        return true;
    }
};

inline CentralVector reduce_central(CentralVector v) {
    if (v.degree.size() != v.coeffs.size()) throw std::invalid_argument("central vector arity mismatch");
    for (size_t i0 = 0; i0 < v.degree.size(); ++i0) {
        if (v.degree[i0] == 0) continue;
        Rat f = v.coeffs[i0] / Rat(v.degree[i0]);
        if (f != 0)
            for (size_t i = 0; i < v.coeffs.size(); ++i) v.coeffs[i] -= f * Rat(v.degree[i]);
        break;
    }
    return v;
}

// Root of T(g): alpha + delta_m with alpha in R_fin (real) or alpha = 0, m != 0
// (imaginary).
struct ToroidalRoot {
    RootCoords alpha;
    std::vector<long> m;

    bool real() const {
        for (long c : alpha)
            if (c != 0) return true;
        return false;
    }
};

// Weight of T(g) as a function on h_tor = h_fin + Z_0 + D_k.
struct ToroidalWeight {
    FiniteWeight finite;
    std::vector<Rat> central;  // values on K_1..K_k
    std::vector<Rat> deriv;    // values on d_1..d_k

    bool operator==(const ToroidalWeight& o) const {
        return finite == o.finite && central == o.central && deriv == o.deriv;
    }
};

// Element of T(g) = L_k(g) + Z + D_k with exact rational coefficients.
struct ToroidalElement {
    size_t k = 0;
    std::map<std::pair<size_t, std::vector<long>>, Rat> loop;  // (finite basis index, exponent)
    std::map<std::vector<long>, std::vector<Rat>> central;     // degree -> reduced coefficients
    std::vector<Rat> deriv;                                    // coefficients on d_1..d_k

    explicit ToroidalElement(size_t k_ = 1) : k(k_), deriv(k_, Rat(0)) {}

    bool zero() const {
        if (!loop.empty() || !central.empty()) return false;
        for (const Rat& c : deriv)
            if (c != 0) return false;
        return true;
    }
};

class ToroidalAlgebra {
  public:
    ToroidalAlgebra(const RootSystem& rs, const FiniteLieAlgebra& g, size_t k)
        : rs_(rs), g_(g), k_(k) {
        if (k_ < 1) throw std::invalid_argument("need at least one loop variable");
    }

    const RootSystem& root_system() const { return rs_; }
    const FiniteLieAlgebra& finite() const { return g_; }
    size_t variables() const { return k_; }

    ToroidalElement zero() const { return ToroidalElement(k_); }

    ToroidalElement loop_element(size_t fin, const std::vector<long>& m, const Rat& c = Rat(1)) const {
        check_exp(m);
        ToroidalElement e(k_);
        if (c != 0) e.loop[{fin, m}] = c;
        return e;
    }

    ToroidalElement central_element(const CentralVector& v) const {
        check_exp(v.degree);
        ToroidalElement e(k_);
        add_central(e, v.degree, v.coeffs);
        return e;
    }

    ToroidalElement derivation(size_t i, const Rat& c = Rat(1)) const {
        if (i >= k_) throw std::invalid_argument("derivation index out of range");
        ToroidalElement e(k_);
        e.deriv[i] = c;
        return e;
    }

    ToroidalElement add(const ToroidalElement& a, const ToroidalElement& b) const {
        ToroidalElement out = a;
        for (const auto& [key, c] : b.loop) add_loop(out, key.first, key.second, c);
        for (const auto& [r, c] : b.central) add_central(out, r, c);
        for (size_t i = 0; i < k_; ++i) out.deriv[i] += b.deriv[i];
        return out;
    }

    ToroidalElement scale(const ToroidalElement& a, const Rat& f) const {
        if (f == 0) return zero();
        ToroidalElement out = a;
        for (auto& [key, c] : out.loop) c *= f;
        for (auto& [r, c] : out.central)
            for (Rat& x : c) x *= f;
        for (Rat& x : out.deriv) x *= f;
        return out;
    }

    // Lie bracket: loop terms by [x ox t^m, y ox t^p] = [x,y] ox t^{m+p}
    // + (x|y) sum_i m_i t^{m+p} K_i, derivations act by degree, Z is central.
    ToroidalElement bracket(const ToroidalElement& a, const ToroidalElement& b) const {
        ToroidalElement out(k_);
        for (const auto& [ka, ca] : a.loop) {
            for (const auto& [kb, cb] : b.loop) {
                const auto& [x, m] = ka;
                const auto& [y, p] = kb;
                Rat c = ca * cb;
                std::vector<long> mp(k_);
                for (size_t i = 0; i < k_; ++i) mp[i] = m[i] + p[i];
                for (const auto& [z, cz] : g_.bracket(x, y)) add_loop(out, z, mp, c * cz);
                Rat f = g_.form(x, y);
                if (f != 0) {
                    std::vector<Rat> cc(k_, Rat(0));
                    bool any = false;
                    for (size_t i = 0; i < k_; ++i) {
                        if (m[i] != 0) {
                            cc[i] = c * f * Rat(m[i]);
                            any = true;
                        }
                    }
                    if (any) add_central(out, mp, cc);
                }
            }
        }
        // derivation parts act on loop and central parts of the other side
        for (size_t i = 0; i < k_; ++i) {
            if (a.deriv[i] != 0) {
                for (const auto& [kb, cb] : b.loop)
                    add_loop(out, kb.first, kb.second, a.deriv[i] * Rat(kb.second[i]) * cb);
                for (const auto& [r, c] : b.central) {
                    if (r[i] == 0) continue;
                    std::vector<Rat> cc(k_);
                    for (size_t j = 0; j < k_; ++j) cc[j] = a.deriv[i] * Rat(r[i]) * c[j];
                    add_central(out, r, cc);
                }
            }
            if (b.deriv[i] != 0) {
                for (const auto& [ka, ca] : a.loop)
                    add_loop(out, ka.first, ka.second, -b.deriv[i] * Rat(ka.second[i]) * ca);
                for (const auto& [r, c] : a.central) {
                    if (r[i] == 0) continue;
                    std::vector<Rat> cc(k_);
                    for (size_t j = 0; j < k_; ++j) cc[j] = -b.deriv[i] * Rat(r[i]) * c[j];
                    add_central(out, r, cc);
                }
            }
        }
        return out;
    }

    bool is_toroidal_root(const ToroidalRoot& beta) const {
        if (beta.m.size() != k_) return false;
        if (beta.real()) return rs_.is_root(beta.alpha);
        for (long c : beta.m)
            if (c != 0) return true;
        return false;
    }

    // alpha_m^vee = alpha^vee + (2/|alpha|^2) sum_i m_i K_i
    ToroidalElement coroot(const ToroidalRoot& beta) const {
        if (!beta.real()) throw std::domain_error("imaginary root has no coroot");
        if (!rs_.is_root(beta.alpha)) throw std::domain_error("not a root");
        ToroidalElement out(k_);
        std::vector<Rat> hc = g_.coroot_coords(beta.alpha);
        std::vector<long> zero_exp(k_, 0);
        for (size_t i = 0; i < rs_.rank(); ++i)
            if (hc[i] != 0) add_loop(out, g_.h_index(i), zero_exp, hc[i]);
        Rat factor = Rat(2) / rs_.root_norm2(beta.alpha);
        std::vector<Rat> cc(k_, Rat(0));
        bool any = false;
        for (size_t i = 0; i < k_; ++i) {
            if (beta.m[i] != 0) {
                cc[i] = factor * Rat(beta.m[i]);
                any = true;
            }
        }
        if (any) add_central(out, std::vector<long>(k_, 0), cc);
        return out;
    }

    // <lambda, beta^vee> for a real root beta
    Rat pair_coroot(const ToroidalWeight& lambda, const ToroidalRoot& beta) const {
        if (!beta.real()) throw std::domain_error("imaginary root has no coroot");
        Rat p = rs_.pair_coroot(lambda.finite, beta.alpha);
        Rat factor = Rat(2) / rs_.root_norm2(beta.alpha);
        for (size_t i = 0; i < k_; ++i) p += factor * Rat(beta.m[i]) * lambda.central[i];
        return p;
    }

    // r_beta(lambda) = lambda - <lambda, beta^vee> beta; preserves every lambda(K_i)
    ToroidalWeight reflect(const ToroidalWeight& lambda, const ToroidalRoot& beta) const {
        Rat p = pair_coroot(lambda, beta);
        if (!is_integer(p)) throw std::domain_error("non-integrable weight");
        Int pi = to_int(p);
        ToroidalWeight out = lambda;
        FiniteWeight aw = rs_.root_to_weight(beta.alpha);
        for (size_t i = 0; i < rs_.rank(); ++i)
            out.finite.omega[i] -= static_cast<long>(pi) * aw.omega[i];
        for (size_t i = 0; i < k_; ++i) out.deriv[i] -= Rat(pi) * Rat(beta.m[i]);
        return out;
    }

    ToroidalRoot alpha_n1() const {
        ToroidalRoot r;
        r.alpha.assign(rs_.rank(), 0);
        const RootCoords& th = rs_.theta();
        for (size_t i = 0; i < rs_.rank(); ++i) r.alpha[i] = -th[i];
        r.m.assign(k_, 0);
        r.m[0] = 1;
        return r;
    }

    // Box reduction of Corollary-style weights: requires <lambda, alpha_{n+1}^vee> = m > 0
    // and lambda(K_j) = 0 for j >= 2. Returns the reduced weight, whose d_j values for
    // j >= 2 lie in [0, m), and the word of reflections applied (in application order).
    std::pair<ToroidalWeight, std::vector<ToroidalRoot>> box_reduce(const ToroidalWeight& lambda) const {
        Rat mr = pair_coroot(lambda, alpha_n1());
        if (!is_integer(mr) || mr <= 0) throw std::domain_error("box_reduce needs positive pairing with alpha_{n+1}^vee");
        for (size_t j = 1; j < k_; ++j)
            if (lambda.central[j] != 0) throw std::domain_error("box_reduce needs lambda(K_j) = 0 for j >= 2");
        Int m = to_int(mr);
        ToroidalWeight cur = lambda;
        std::vector<ToroidalRoot> word;
        const RootCoords& th = rs_.theta();
        for (size_t j = 1; j < k_; ++j) {
            Rat v = cur.deriv[j];
            Int steps = floor_rat(v / Rat(m));
            ToroidalRoot pair_root;  // beta_j = delta_j + alpha_{n+1} or gamma_j = delta_j - alpha_{n+1}
            pair_root.alpha.assign(rs_.rank(), 0);
            pair_root.m.assign(k_, 0);
            bool subtract = steps > 0;
            for (size_t i = 0; i < rs_.rank(); ++i)
                pair_root.alpha[i] = subtract ? -th[i] : th[i];
            pair_root.m[j] = 1;
            pair_root.m[0] = subtract ? 1 : -1;
            Int reps = steps > 0 ? steps : Int(-steps);
            for (Int s = 0; s < reps; ++s) {
                cur = reflect(cur, pair_root);
                word.push_back(pair_root);
                cur = reflect(cur, alpha_n1());
                word.push_back(alpha_n1());
            }
            if (!(cur.deriv[j] >= 0 && cur.deriv[j] < Rat(m)))
                throw std::logic_error("box reduction missed the fundamental box");
        }
        return {cur, word};
    }

    // integer coefficients of beta over the simple system alpha_1..alpha_{n+k}
    std::vector<long> express_in_simple_system(const ToroidalRoot& beta) const {
        if (!is_toroidal_root(beta)) throw std::domain_error("not a root");
        size_t n = rs_.rank();
        std::vector<long> out(n + k_, 0);
        long msum = 0;
        for (size_t i = 0; i < k_; ++i) {
            out[n + i] = beta.m[i];
            msum += beta.m[i];
        }
        const RootCoords& th = rs_.theta();
        for (size_t i = 0; i < n; ++i) out[i] = beta.alpha[i] + msum * th[i];
        return out;
    }

    // sl2(beta) triple (e, f, h) with [e,f] = h, [h,e] = 2e, [h,f] = -2f
    struct Sl2Triple {
        ToroidalElement e, f, h;
    };

    Sl2Triple sl2_triple(const ToroidalRoot& beta) const {
        if (!beta.real()) throw std::domain_error("imaginary root has no sl2 triple");
        Sl2Triple t{zero(), zero(), zero()};
        RootCoords pos = beta.alpha;
        bool negative = false;
        for (long c : pos)
            if (c < 0) negative = true;
        if (negative)
            for (long& c : pos) c = -c;
        size_t ridx = g_.root_index(pos);
        size_t ei = negative ? g_.f_index(ridx) : g_.e_index(ridx);
        size_t fi = negative ? g_.e_index(ridx) : g_.f_index(ridx);
        std::vector<long> mneg(k_);
        for (size_t i = 0; i < k_; ++i) mneg[i] = -beta.m[i];
        t.e = loop_element(ei, beta.m);
        t.f = loop_element(fi, mneg);
        t.h = coroot(beta);
        return t;
    }

  private:
    const RootSystem& rs_;
    const FiniteLieAlgebra& g_;
    size_t k_;

    void check_exp(const std::vector<long>& m) const {
        if (m.size() != k_) throw std::invalid_argument("exponent arity mismatch");
    }

    static void add_loop(ToroidalElement& e, size_t fin, const std::vector<long>& m, const Rat& c) {
        if (c == 0) return;
        auto key = std::make_pair(fin, m);
        auto [it, inserted] = e.loop.emplace(key, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) e.loop.erase(it);
        }
    }

    static void add_central(ToroidalElement& e, const std::vector<long>& r, const std::vector<Rat>& c) {
        CentralVector v{r, c};
        v = reduce_central(std::move(v));
        if (v.zero()) return;
        auto [it, inserted] = e.central.emplace(r, v.coeffs);
        if (!inserted) {
            for (size_t i = 0; i < v.coeffs.size(); ++i) it->second[i] += v.coeffs[i];
            bool all_zero = true;
            for (const Rat& x : it->second)
                if (x != 0) all_zero = false;
            if (all_zero) e.central.erase(it);
        }
    }
};

}  // namespace toroidal
