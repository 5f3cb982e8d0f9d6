#pragma once

#include "toroidal/matrix.hpp"
#include "toroidal/rational.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace toroidal {

// Integral weight in the fundamental-weight basis.
struct FiniteWeight {
    std::vector<long> omega;  // coefficients on omega_1..omega_n

    bool operator==(const FiniteWeight& o) const { return omega == o.omega; }
    bool operator<(const FiniteWeight& o) const { return omega < o.omega; }

    bool is_zero() const {
        for (long c : omega)
            if (c != 0) return false;
        return true;
    }
    bool dominant() const {
        for (long c : omega)
            if (c < 0) return false;
        return true;
    }
    FiniteWeight operator+(const FiniteWeight& o) const {
        FiniteWeight r = *this;
        for (size_t i = 0; i < omega.size(); ++i) r.omega[i] += o.omega[i];
        return r;
    }
    FiniteWeight operator-(const FiniteWeight& o) const {
        FiniteWeight r = *this;
        for (size_t i = 0; i < omega.size(); ++i) r.omega[i] -= o.omega[i];
        return r;
    }
};

// Root stored by its integer coordinates over the simple roots.
using RootCoords = std::vector<long>;

struct GammaClass {
    FiniteWeight rep;  // minimal dominant representative (0 or a fundamental weight)
    bool operator==(const GammaClass& o) const { return rep == o.rep; }
};

class RootSystem {
  public:
    RootSystem(char type, size_t rank) : type_(type), rank_(rank) {
        build_cartan();
        build_symmetrizer();
        build_roots();
        invert_cartan();
    }

    static RootSystem from_code(const std::string& code) {
        if (code.size() < 2) throw std::invalid_argument("bad root system code: " + code);
        char t = code[0];
        size_t r = std::stoul(code.substr(1));
        return RootSystem(t, r);
    }

    char type() const { return type_; }
    size_t rank() const { return rank_; }
    std::string code() const { return std::string(1, type_) + std::to_string(rank_); }

    const IntMatrix& cartan() const { return cartan_; }                 // a_ij = <alpha_j, alpha_i^vee>
    const std::vector<Rat>& symmetrizer() const { return d_; }          // d_i = (alpha_i|alpha_i)/2
    const std::vector<RootCoords>& roots() const { return roots_; }
    const std::vector<RootCoords>& positive_roots() const { return pos_roots_; }
    const RootCoords& theta() const { return theta_; }        // highest root
    const RootCoords& theta_short() const { return theta_s_; }  // highest short root (= theta if simply laced)
    bool simply_laced() const { return simply_laced_; }

    size_t root_count() const { return roots_.size(); }

    bool is_root(const RootCoords& c) const { return root_set_.count(c) > 0; }

    long height(const RootCoords& c) const {
        long h = 0;
        for (long x : c) h += x;
        return h;
    }

    // weight coordinates (omega basis) of an element given in root coordinates
    std::vector<Rat> root_to_omega(const std::vector<Rat>& c) const {
        std::vector<Rat> m(rank_, Rat(0));
        for (size_t i = 0; i < rank_; ++i)
            for (size_t j = 0; j < rank_; ++j) m[i] += Rat(cartan_(i, j)) * c[j];
        return m;
    }
    FiniteWeight root_to_weight(const RootCoords& c) const {
        FiniteWeight w;
        w.omega.assign(rank_, 0);
        for (size_t i = 0; i < rank_; ++i) {
            Int v = 0;
            for (size_t j = 0; j < rank_; ++j) v += cartan_(i, j) * c[j];
            w.omega[i] = static_cast<long>(v);
        }
        return w;
    }
    // root coordinates of a weight (rational in general)
    std::vector<Rat> omega_to_root(const FiniteWeight& w) const {
        std::vector<Rat> c(rank_, Rat(0));
        for (size_t i = 0; i < rank_; ++i)
            for (size_t j = 0; j < rank_; ++j) c[i] += cartan_inv_(i, j) * Rat(w.omega[j]);
        return c;
    }

    // invariant form normalized so (theta|theta) = 2
    Rat form_rr(const RootCoords& a, const RootCoords& b) const {
        // (a|b) = sum_ij a_i b_j d_i a_ij  via (alpha_i|alpha_j) = d_i a_ij
        Rat s = 0;
        for (size_t i = 0; i < rank_; ++i) {
            if (a[i] == 0) continue;
            for (size_t j = 0; j < rank_; ++j)
                s += Rat(a[i]) * Rat(b[j]) * d_[i] * Rat(cartan_(i, j));
        }
        return s;
    }
    Rat form_ww(const FiniteWeight& a, const FiniteWeight& b) const {
        std::vector<Rat> c = omega_to_root(a);
        Rat s = 0;
        for (size_t j = 0; j < rank_; ++j) s += c[j] * d_[j] * Rat(b.omega[j]);
        return s;
    }
    Rat form_wr(const FiniteWeight& a, const RootCoords& b) const {
        Rat s = 0;
        for (size_t j = 0; j < rank_; ++j) s += Rat(b[j]) * d_[j] * Rat(a.omega[j]);
        return s;
    }
    Rat root_norm2(const RootCoords& a) const { return form_rr(a, a); }

    // <lambda, alpha^vee> = 2(lambda|alpha)/(alpha|alpha)
    Rat pair_coroot(const FiniteWeight& lambda, const RootCoords& alpha) const {
        return Rat(2) * form_wr(lambda, alpha) / root_norm2(alpha);
    }

    FiniteWeight reflect(const FiniteWeight& lambda, const RootCoords& alpha) const {
        if (!is_root(alpha)) throw std::domain_error("reflection by non-root");
        Rat p = pair_coroot(lambda, alpha);
        Int pi = to_int(p);
        FiniteWeight aw = root_to_weight(alpha);
        FiniteWeight out = lambda;
        for (size_t i = 0; i < rank_; ++i) out.omega[i] -= static_cast<long>(pi) * aw.omega[i];
        return out;
    }

    FiniteWeight simple_root_weight(size_t i) const {
        RootCoords c(rank_, 0);
        c[i] = 1;
        return root_to_weight(c);
    }

    FiniteWeight fundamental_weight(size_t i) const {
        FiniteWeight w;
        w.omega.assign(rank_, 0);
        w.omega[i] = 1;
        return w;
    }

    FiniteWeight zero_weight() const {
        FiniteWeight w;
        w.omega.assign(rank_, 0);
        return w;
    }

    FiniteWeight rho() const {
        FiniteWeight w;
        w.omega.assign(rank_, 1);
        return w;
    }

    long dual_coxeter_number() const {
        // h^vee = 1 + <rho, theta^vee>
        return 1 + static_cast<long>(to_int(pair_coroot(rho(), theta_)));
    }

    // dominant Weyl-chamber representative of the orbit of lambda
    FiniteWeight dominant_rep(FiniteWeight lambda) const {
        bool moved = true;
        while (moved) {
            moved = false;
            for (size_t i = 0; i < rank_; ++i) {
                if (lambda.omega[i] < 0) {
                    RootCoords a(rank_, 0);
                    a[i] = 1;
                    lambda = reflect(lambda, a);
                    moved = true;
                }
            }
        }
        return lambda;
    }

    // Freudenthal multiplicities of the irreducible V(lambda), lambda dominant.
    std::map<FiniteWeight, Int> finite_multiplicities(const FiniteWeight& lambda) const {
        if (!lambda.dominant()) throw std::domain_error("finite_multiplicities needs dominant weight");
        std::map<FiniteWeight, Int> mult;
        mult[lambda] = 1;
        FiniteWeight r = rho();
        Rat top = form_ww(lambda + r, lambda + r);
        // breadth-first by height of lambda - mu; prune at multiplicity zero
        std::vector<FiniteWeight> frontier{lambda};
        while (!frontier.empty()) {
            std::set<FiniteWeight> next;
            for (const FiniteWeight& mu : frontier) {
                for (size_t i = 0; i < rank_; ++i) {
                    FiniteWeight nu = mu - simple_root_weight(i);
                    if (mult.count(nu) || next.count(nu)) continue;
                    Int m = freudenthal_entry(lambda, nu, mult, top);
                    if (m > 0) {
                        mult[nu] = m;
                        next.insert(nu);
                    } else {
                        mult[nu] = 0;  // cached zero, removed below
                    }
                }
            }
            frontier.assign(next.begin(), next.end());
        }
        for (auto it = mult.begin(); it != mult.end();) {
            if (it->second == 0)
                it = mult.erase(it);
            else
                ++it;
        }
        return mult;
    }

    Int weyl_dimension(const FiniteWeight& lambda) const {
        if (!lambda.dominant()) throw std::domain_error("weyl_dimension needs dominant weight");
        FiniteWeight r = rho();
        Rat num = 1, den = 1;
        for (const RootCoords& a : pos_roots_) {
            num *= form_wr(lambda + r, a);
            den *= form_wr(r, a);
        }
        return to_int(num / den);
    }

    // Unique minimal dominant representative of lambda mod Q_fin (Prop: it exists),
    // returned with its Gamma-class.
    std::pair<GammaClass, FiniteWeight> minimal_coset_rep(const FiniteWeight& lambda) const {
        FiniteWeight mu1 = dominant_rep(lambda);
        // all dominant mu = mu1 - A c with integer c >= 0 lie in the box c <= A^{-1} m1
        std::vector<long> bound(rank_, 0);
        for (size_t i = 0; i < rank_; ++i) {
            Rat b = 0;
            for (size_t j = 0; j < rank_; ++j) b += cartan_inv_(i, j) * Rat(mu1.omega[j]);
            bound[i] = static_cast<long>(floor_rat(b));
            if (bound[i] < 0) bound[i] = 0;
        }
        std::vector<FiniteWeight> cands;
        std::vector<long> c(rank_, 0);
        while (true) {
            FiniteWeight mu = mu1;
            bool ok = true;
            for (size_t i = 0; i < rank_ && ok; ++i) {
                Int v = mu1.omega[i];
                for (size_t j = 0; j < rank_; ++j) v -= cartan_(i, j) * c[j];
                if (v < 0) ok = false;
                mu.omega[i] = static_cast<long>(v);
            }
            if (ok) cands.push_back(mu);
            size_t j = 0;
            while (j < rank_) {
                if (++c[j] <= bound[j]) break;
                c[j] = 0;
                ++j;
            }
            if (j == rank_) break;
        }
        // pick the candidate below all others in dominance order
        for (const FiniteWeight& m : cands) {
            bool minimal = true;
            for (const FiniteWeight& other : cands) {
                if (!difference_in_qplus(other, m)) {
                    minimal = false;
                    break;
                }
            }
            if (minimal) return {GammaClass{m}, m};
        }
        throw std::logic_error("coset has no minimal dominant representative");
    }

    // lambda - mu in Z_{>=0}-span of simple roots?
    bool difference_in_qplus(const FiniteWeight& lambda, const FiniteWeight& mu) const {
        std::vector<Rat> c = omega_to_root(lambda - mu);
        for (const Rat& x : c)
            if (!is_integer(x) || x < 0) return false;
        return true;
    }

    std::vector<GammaClass> gamma_classes() const {
        std::vector<GammaClass> out;
        auto push_unique = [&](const FiniteWeight& w) {
            GammaClass g = minimal_coset_rep(w).first;
            for (const GammaClass& h : out)
                if (h == g) return;
            out.push_back(g);
        };
        push_unique(zero_weight());
        for (size_t i = 0; i < rank_; ++i) push_unique(fundamental_weight(i));
        return out;
    }

  private:
    char type_;
    size_t rank_;
    IntMatrix cartan_;
    RatMatrix cartan_inv_;
    std::vector<Rat> d_;
    std::vector<RootCoords> roots_, pos_roots_;
    std::set<RootCoords> root_set_;
    RootCoords theta_, theta_s_;
    bool simply_laced_ = true;

    void build_cartan() {
        auto bad = [&]() { return std::invalid_argument("unsupported root system " + code()); };
        size_t n = rank_;
        cartan_ = IntMatrix(n, n);
        for (size_t i = 0; i < n; ++i) cartan_(i, i) = 2;
        auto chain = [&](size_t i, size_t j) {  // single edge
            cartan_(i, j) = -1;
            cartan_(j, i) = -1;
        };
        switch (type_) {
            case 'A':
                if (n < 1) throw bad();
                for (size_t i = 0; i + 1 < n; ++i) chain(i, i + 1);
                break;
            case 'B':  // alpha_n short
                if (n < 2) throw bad();
                for (size_t i = 0; i + 2 < n; ++i) chain(i, i + 1);
                cartan_(n - 2, n - 1) = -1;
                cartan_(n - 1, n - 2) = -2;
                break;
            case 'C':  // alpha_n long
                if (n < 2) throw bad();
                for (size_t i = 0; i + 2 < n; ++i) chain(i, i + 1);
                cartan_(n - 2, n - 1) = -2;
                cartan_(n - 1, n - 2) = -1;
                break;
            case 'D':
                if (n < 3) throw bad();
                for (size_t i = 0; i + 2 < n; ++i) chain(i, i + 1);
                chain(n - 3, n - 1);
                break;
            case 'E':
                if (n < 6 || n > 8) throw bad();
                // Bourbaki: chain 1-3-4-5-...-n, node 2 attached to node 4
                chain(0, 2);
                for (size_t i = 2; i + 1 < n; ++i) chain(i, i + 1);
                chain(1, 3);
                break;
            case 'F':  // alpha_1, alpha_2 long; alpha_3, alpha_4 short
                if (n != 4) throw bad();
                chain(0, 1);
                cartan_(1, 2) = -1;
                cartan_(2, 1) = -2;
                chain(2, 3);
                break;
            case 'G':  // alpha_1 long, alpha_2 short
                if (n != 2) throw bad();
                cartan_(0, 1) = -1;
                cartan_(1, 0) = -3;
                break;
            default:
                throw bad();
        }
    }

    void build_symmetrizer() {
        // d_i a_ij = d_j a_ji, scaled afterwards so long roots get norm 2
        size_t n = rank_;
        d_.assign(n, Rat(0));
        d_[0] = 1;
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j) {
                    if (i == j || cartan_(i, j) == 0) continue;
                    if (d_[i] != 0 && d_[j] == 0) {
                        d_[j] = d_[i] * Rat(cartan_(i, j)) / Rat(cartan_(j, i));
                        changed = true;
                    }
                }
        }
        Rat dmax = d_[0];
        for (const Rat& x : d_) dmax = std::max(dmax, x);
        for (Rat& x : d_) {
            x /= dmax;
            if (x != 1) simply_laced_ = false;
        }
    }

    void build_roots() {
        std::set<RootCoords> all;
        for (size_t i = 0; i < rank_; ++i) {
            RootCoords c(rank_, 0);
            c[i] = 1;
            all.insert(c);
        }
        bool grew = true;
        while (grew) {
            grew = false;
            std::vector<RootCoords> cur(all.begin(), all.end());
            for (const RootCoords& b : cur) {
                for (size_t i = 0; i < rank_; ++i) {
                    // s_i(b) = b - (A b)_i alpha_i
                    Int p = 0;
                    for (size_t j = 0; j < rank_; ++j) p += cartan_(i, j) * b[j];
                    RootCoords r = b;
                    r[i] -= static_cast<long>(p);
                    if (all.insert(r).second) grew = true;
                }
            }
        }
        roots_.assign(all.begin(), all.end());
        root_set_ = all;
        theta_.clear();
        Rat short_norm = root_norm2(*roots_.begin());
        for (const RootCoords& r : roots_) short_norm = std::min(short_norm, root_norm2(r));
        long best_h = 0, best_hs = 0;
        for (const RootCoords& r : roots_) {
            bool pos = true;
            for (long x : r)
                if (x < 0) pos = false;
            if (pos) pos_roots_.push_back(r);
            long h = height(r);
            if (theta_.empty() || h > best_h) {
                theta_ = r;
                best_h = h;
            }
            if (root_norm2(r) == short_norm && (theta_s_.empty() || h > best_hs)) {
                theta_s_ = r;
                best_hs = h;
            }
        }
        for (const RootCoords& r : roots_) {
            for (size_t i = 0; i < rank_; ++i)
                if (theta_[i] < r[i]) throw std::logic_error("highest root not dominant over roots");
        }
        if (simply_laced_) theta_s_ = theta_;
    }

    void invert_cartan() {
        size_t n = rank_;
        RatMatrix aug(n, 2 * n);
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < n; ++j) aug(i, j) = Rat(cartan_(i, j));
            aug(i, n + i) = 1;
        }
        rref(aug);
        cartan_inv_ = RatMatrix(n, n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) cartan_inv_(i, j) = aug(i, n + j);
    }

    Int freudenthal_entry(const FiniteWeight& lambda, const FiniteWeight& mu,
                          const std::map<FiniteWeight, Int>& mult, const Rat& top) const {
        FiniteWeight r = rho();
        Rat denom = top - form_ww(mu + r, mu + r);
        if (denom == 0) return 0;
        Rat s = 0;
        for (const RootCoords& a : pos_roots_) {
            FiniteWeight aw = root_to_weight(a);
            FiniteWeight nu = mu;
            for (long t = 1;; ++t) {
                nu = nu + aw;
                auto it = mult.find(nu);
                if (it == mult.end() || it->second == 0) {
                    if (!difference_in_qplus(lambda, nu)) break;  // left the cone for good
                    continue;
                }
                s += Rat(it->second) * form_wr(nu, a);
            }
        }
        Rat m = Rat(2) * s / denom;
        return to_int(m);
    }
};

}  // namespace toroidal
