#pragma once

#include "toroidal/flat_module.hpp"
#include "toroidal/lattice.hpp"
#include "toroidal/pi_function.hpp"
#include "toroidal/toroidal_algebra.hpp"

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace toroidal {

// phi_pi(h, m) = sum_i pi(M_i)(h) * b_i^m for h in h_aff
inline Rat phi_pi(const AffineAlgebra& alg, const PiFunction& pi, const AffGen& h,
                  const std::vector<long>& m) {
    Rat s = 0;
    for (size_t i = 0; i < pi.support_size(); ++i) s += alg.eval(pi.weights[i], h) * pi.ev(i, m);
    return s;
}

inline std::vector<AffGen> cartan_basis(const FiniteLieAlgebra& g) {
    std::vector<AffGen> out;
    for (size_t i = 0; i < g.root_system().rank(); ++i) out.push_back(AffGen::loop(g.h_index(i), 0));
    out.push_back(AffGen::k1());
    out.push_back(AffGen::d1());
    return out;
}

// The lattice G_pi generated by { m : phi_pi(h, m) != 0 for some basis h },
// collected over the box [-N, N]^{k-1} and verified stable under doubling.
inline lattice::Lattice compute_G_pi(const AffineAlgebra& alg, const PiFunction& pi, long box) {
    if (box < 2) throw std::invalid_argument("G_pi box must be at least 2");
    pi.validate(alg.root_system());
    size_t d = pi.k - 1;
    std::vector<AffGen> hs = cartan_basis(alg.finite());
    auto collect = [&](long n) {
        std::vector<std::vector<Int>> gens;
        std::vector<long> m(d, -n);
        while (true) {
            for (const AffGen& h : hs) {
                if (phi_pi(alg, pi, h, m) != 0) {
                    std::vector<Int> v(d);
                    for (size_t i = 0; i < d; ++i) v[i] = m[i];
                    gens.push_back(v);
                    break;
                }
            }
            size_t j = 0;
            while (j < d) {
                if (++m[j] <= n) break;
                m[j] = -n;
                ++j;
            }
            if (j == d) break;
        }
        return lattice::hnf(gens, d);
    };
    lattice::Lattice l1 = collect(box);
    lattice::Lattice l2 = collect(2 * box);
    if (!(l1.basis == l2.basis) || !l1.full_rank()) throw std::domain_error("box too small");
    return l1;
}

// X_pi = X(pi(M_1)) (x) ... (x) X(pi(M_l)) with Y (x) f acting through the
// evaluations ev_{M_i}(f).
class EvalTensorModule {
  public:
    EvalTensorModule(const AffineAlgebra& alg, const PiFunction& pi, long depth)
        : alg_(alg), pi_(pi), depth_(depth) {
        pi.validate(alg.root_system());
        for (const AffineWeight& w : pi.weights) factors_.push_back(std::make_unique<FlatModule>(alg, w, depth));
        std::vector<size_t> idx(factors_.size(), 0);
        enumerate(idx, 0);
        for (size_t t = 0; t < tuples_.size(); ++t) tuple_id_[tuples_[t]] = t;
        for (size_t t = 0; t < tuples_.size(); ++t) {
            JointKey k = joint_key(t);
            position_[t] = spaces_[k].size();
            spaces_[k].push_back(t);
        }
    }

    // joint weight: finite part (omega coords) and d1 value; the level is
    // wt(pi)(K1) throughout
    using JointKey = std::pair<std::vector<long>, Rat>;

    const AffineAlgebra& algebra() const { return alg_; }
    const PiFunction& pi() const { return pi_; }
    long depth() const { return depth_; }
    size_t factor_count() const { return factors_.size(); }
    FlatModule& factor(size_t i) { return *factors_[i]; }

    size_t tuple_count() const { return tuples_.size(); }
    const std::vector<size_t>& tuple(size_t t) const { return tuples_[t]; }
    const std::map<JointKey, std::vector<size_t>>& spaces() const { return spaces_; }
    size_t position(size_t t) const { return position_.at(t); }

    JointKey joint_key(size_t t) const {
        AffineWeight s{Rat(0), alg_.root_system().zero_weight(), Rat(0)};
        for (size_t i = 0; i < factors_.size(); ++i) s = s + factors_[i]->weight_of(tuples_[t][i]);
        return {s.finite.omega, s.delta1};
    }

    AffineWeight joint_weight(size_t t) const {
        AffineWeight s{Rat(0), alg_.root_system().zero_weight(), Rat(0)};
        for (size_t i = 0; i < factors_.size(); ++i) s = s + factors_[i]->weight_of(tuples_[t][i]);
        return s;
    }

    size_t highest_tuple() const {
        std::vector<size_t> idx;
        for (const auto& f : factors_) idx.push_back(f->highest());
        return tuple_id_.at(idx);
    }

    using Sparse = std::vector<std::pair<size_t, Rat>>;

    // (Y (x) t^m) . tuple = sum_i ev_i(m) (Y on factor i); empty image drops
    // out, nullopt marks truncation overflow in some factor
    std::optional<Sparse> act(const AffGen& y, const std::vector<long>& m, size_t t) {
        Sparse out;
        for (size_t i = 0; i < factors_.size(); ++i) {
            Rat e = pi_.ev(i, m);
            auto col = factors_[i]->act(y, tuples_[t][i]);
            if (!col) return std::nullopt;
            for (const auto& [tgt, c] : *col) {
                std::vector<size_t> nt = tuples_[t];
                nt[i] = tgt;
                out.push_back({tuple_id_.at(nt), e * c});
            }
        }
        return out;
    }

  private:
    const AffineAlgebra& alg_;
    PiFunction pi_;
    long depth_;
    std::vector<std::unique_ptr<FlatModule>> factors_;
    std::vector<std::vector<size_t>> tuples_;
    std::map<std::vector<size_t>, size_t> tuple_id_;
    std::map<JointKey, std::vector<size_t>> spaces_;
    std::map<size_t, size_t> position_;

    void enumerate(std::vector<size_t>& idx, size_t i) {
        if (i == factors_.size()) {
            tuples_.push_back(idx);
            return;
        }
        for (size_t v = 0; v < factors_[i]->dim(); ++v) {
            idx[i] = v;
            enumerate(idx, i + 1);
        }
    }
};

// L(X_pi) = X_pi (x) C[t_2^{+-1},..,t_k^{+-1}] truncated to a window box
// [-w, w]^{k-1}; d_i (i >= 2) reads the monomial degree, K_j t^m acts as zero
// for j >= 2 and K_1 t^m as zero unless the t_1 degree vanishes.
class LoopedModule {
  public:
    LoopedModule(const AffineAlgebra& alg, const PiFunction& pi, long depth, long window)
        : base_(alg, pi, depth), window_(window) {
        if (window < 1) throw std::invalid_argument("window must be at least 1");
    }

    EvalTensorModule& base() { return base_; }
    long window() const { return window_; }
    size_t k() const { return base_.pi().k; }

    bool in_window(const std::vector<long>& m) const {
        for (long v : m)
            if (v < -window_ || v > window_) return false;
        return true;
    }

    // sparse vector over pairs (tuple, monomial slice)
    struct Key {
        size_t tuple;
        std::vector<long> m;
        auto operator<=>(const Key&) const = default;
    };
    using LVec = std::map<Key, Rat>;

    LVec unit(size_t tuple, const std::vector<long>& m) const {
        if (!in_window(m)) throw std::domain_error("extend truncation");
        return LVec{{Key{tuple, m}, Rat(1)}};
    }

    LVec v_pi(const std::vector<long>& m) const { return unit(base_.highest_tuple(), m); }

    static void add(LVec& v, const Key& k, const Rat& c) {
        if (c == 0) return;
        auto [it, inserted] = v.emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) v.erase(it);
        }
    }

    // Y (x) t^s . (w (x) t^m) = (Y (x) t^s . w) (x) t^{m+s}; throws when the
    // image leaves the window, nullopt when it leaves the factor truncation
    std::optional<LVec> act_loop(const AffGen& y, const std::vector<long>& s, const LVec& v) {
        LVec out;
        for (const auto& [key, c] : v) {
            std::vector<long> nm(key.m);
            for (size_t i = 0; i < nm.size(); ++i) nm[i] += s[i];
            if (!in_window(nm)) throw std::domain_error("extend truncation");
            auto img = base_.act(y, s, key.tuple);
            if (!img) return std::nullopt;
            for (const auto& [t, cc] : *img) add(out, Key{t, nm}, c * cc);
        }
        return out;
    }

    // d_i for i >= 2 reads the monomial exponent; d_1 acts through the factors
    LVec act_deriv(size_t i, const LVec& v) const {
        LVec out;
        for (const auto& [key, c] : v) {
            if (i == 0)
                add(out, key, c * base_.joint_weight(key.tuple).delta1);
            else
                add(out, key, c * Rat(key.m[i - 1]));
        }
        return out;
    }

    // action of a graded central element sum_j c_j t^r K_j; the relation
    // sum_j r_j t^r K_j = 0 rewrites K_1 t^r for r_1 != 0 into higher K_j's,
    // which act as zero
    LVec act_central(const CentralVector& cv, const LVec& v) {
        if (cv.degree.size() != k()) throw std::invalid_argument("central degree arity mismatch");
        CentralVector red = reduce_central(cv);
        Rat c1 = red.coeffs[0];
        if (red.degree[0] != 0 || c1 == 0) return {};  // K_j (j >= 2) and t_1-graded K_1 act as zero
        std::vector<long> m(red.degree.begin() + 1, red.degree.end());
        LVec out;
        for (const auto& [key, c] : v) {
            std::vector<long> nm(key.m);
            for (size_t i = 0; i < nm.size(); ++i) nm[i] += m[i];
            if (!in_window(nm)) throw std::domain_error("extend truncation");
            // K_1 (x) t^m: evaluation-weighted levels, with the grading shift
            Rat scale = 0;
            for (size_t i = 0; i < base_.pi().support_size(); ++i)
                scale += base_.pi().weights[i].level * base_.pi().ev(i, m);
            add(out, Key{key.tuple, nm}, c * c1 * scale);
        }
        return out;
    }

    // dimension of the (joint weight, m) slice
    size_t slice_dim(const EvalTensorModule::JointKey& jk) const {
        auto it = base_.spaces().find(jk);
        return it == base_.spaces().end() ? 0 : it->second.size();
    }

  private:
    EvalTensorModule base_;
    long window_;
};

// simple raising generators of n_aff^+ paired with monomial steps
inline std::vector<AffGen> simple_raisings(const FiniteLieAlgebra& g) {
    const RootSystem& rs = g.root_system();
    std::vector<AffGen> out;
    for (size_t i = 0; i < rs.rank(); ++i) {
        RootCoords a(rs.rank(), 0);
        a[i] = 1;
        out.push_back(AffGen::loop(g.e_index(g.root_index(a)), 0));
    }
    out.push_back(AffGen::loop(g.f_index(g.root_index(rs.theta())), 1));
    return out;
}

inline std::vector<AffGen> simple_lowerings(const FiniteLieAlgebra& g) {
    const RootSystem& rs = g.root_system();
    std::vector<AffGen> out;
    for (size_t i = 0; i < rs.rank(); ++i) {
        RootCoords a(rs.rank(), 0);
        a[i] = 1;
        out.push_back(AffGen::loop(g.f_index(g.root_index(a)), 0));
    }
    out.push_back(AffGen::loop(g.e_index(g.root_index(rs.theta())), -1));
    return out;
}

inline std::vector<std::vector<long>> step_box(size_t d, long radius) {
    std::vector<std::vector<long>> out;
    std::vector<long> m(d, -radius);
    while (true) {
        out.push_back(m);
        size_t j = 0;
        while (j < d) {
            if (++m[j] <= radius) break;
            m[j] = -radius;
            ++j;
        }
        if (j == d) break;
    }
    return out;
}

using SliceKey = std::pair<EvalTensorModule::JointKey, std::vector<long>>;

// shift of a joint key by the affine weight of a loop generator
inline EvalTensorModule::JointKey shift_joint(const RootSystem& rs, const FiniteLieAlgebra& g,
                                              const EvalTensorModule::JointKey& jk, const AffGen& y) {
    EvalTensorModule::JointKey out = jk;
    FiniteWeight gw = rs.root_to_weight(g.root_of(y.fin));
    for (size_t i = 0; i < out.first.size(); ++i) out.first[i] += gw.omega[i];
    out.second += Rat(y.m);
    return out;
}

// Exact kernel of the positive generators over the interior slices: vectors v
// with (n_aff^+ (x) t^s) v = 0 for every simple raising and every step in the
// box. Kernel rows are per (joint weight, monomial) slice.
struct HighestVectors {
    std::map<SliceKey, RatMatrix> kernels;
    size_t total_dim = 0;
    bool nonempty() const { return total_dim > 0; }
};

inline HighestVectors highest_vectors(LoopedModule& l, long interior, long steps = 2) {
    const AffineAlgebra& alg = l.base().algebra();
    const RootSystem& rs = alg.root_system();
    const FiniteLieAlgebra& g = alg.finite();
    if (interior + steps > l.window()) throw std::domain_error("extend truncation");
    std::vector<AffGen> raisings = simple_raisings(g);
    std::vector<std::vector<long>> box = step_box(l.k() - 1, steps);
    HighestVectors out;
    for (const auto& [jk, tuples] : l.base().spaces()) {
        size_t d = tuples.size();
        for (const std::vector<long>& m : step_box(l.k() - 1, interior)) {
            // stack all constraint blocks
            std::vector<std::vector<Rat>> rows;
            for (const AffGen& y : raisings) {
                EvalTensorModule::JointKey tk = shift_joint(rs, g, jk, y);
                auto target = l.base().spaces().find(tk);
                size_t td = (target == l.base().spaces().end()) ? 0 : target->second.size();
                if (td == 0) continue;  // image space is zero, no constraint
                for (const std::vector<long>& s : box) {
                    std::vector<std::vector<Rat>> block(td, std::vector<Rat>(d, Rat(0)));
                    for (size_t j = 0; j < d; ++j) {
                        auto img = l.base().act(y, s, tuples[j]);
                        for (const auto& [t, c] : *img) block[l.base().position(t)][j] += c;
                    }
                    for (auto& r : block) rows.push_back(std::move(r));
                }
            }
            RatMatrix a(rows.size(), d);
            for (size_t i = 0; i < rows.size(); ++i)
                for (size_t j = 0; j < d; ++j) a(i, j) = rows[i][j];
            RatMatrix k = kernel_basis(a);
            if (k.rows() > 0) {
                out.total_dim += k.rows();
                out.kernels[{jk, m}] = k;
            }
        }
    }
    return out;
}

// One irreducible summand X_pi^g of L(X_pi): the subspace generated from
// v_pi (x) t^g within the truncation, tracked slice by slice.
struct Component {
    std::vector<Int> coset;
    std::map<SliceKey, size_t> dims;
    size_t total = 0;
};

namespace detail {

// echelon row store per slice
struct SliceSpace {
    RatMatrix rows{0, 0};
    size_t dim = 0;
};

inline bool insert_vector(SliceSpace& s, std::vector<Rat> v) {
    size_t n = v.size();
    if (s.rows.cols() == 0) s.rows = RatMatrix(0, n);
    RatMatrix a(s.dim + 1, n);
    for (size_t i = 0; i < s.dim; ++i)
        for (size_t j = 0; j < n; ++j) a(i, j) = s.rows(i, j);
    for (size_t j = 0; j < n; ++j) a(s.dim, j) = v[j];
    size_t r = rref(a).size();
    if (r == s.dim) return false;
    RatMatrix nr(r, n);
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < n; ++j) nr(i, j) = a(i, j);
    s.rows = std::move(nr);
    s.dim = r;
    return true;
}

}  // namespace detail

// L(X_pi) ~ (+)_{g in G^pi} X_pi^g: generate each summand from v_pi (x) t^g by
// repeated generator application inside the window.
inline std::vector<Component> decompose(LoopedModule& l, const lattice::Lattice& gpi,
                                        long steps = 2) {
    const AffineAlgebra& alg = l.base().algebra();
    const RootSystem& rs = alg.root_system();
    const FiniteLieAlgebra& g = alg.finite();
    size_t d = l.k() - 1;
    if (gpi.ambient_rank != d) throw std::invalid_argument("lattice arity mismatch");
    if (!gpi.full_rank()) throw std::domain_error("infinite quotient");
    // the window must hold a full coset system plus one lattice period
    long need = 1;
    for (size_t i = 0; i < d; ++i)
        need = std::max(need, static_cast<long>(gpi.basis(i, i).convert_to<long>()));
    if (need + steps > l.window()) throw std::domain_error("window too small for the coset system");

    std::vector<AffGen> gens = simple_raisings(g);
    for (const AffGen& x : simple_lowerings(g)) gens.push_back(x);
    for (size_t i = 0; i < rs.rank(); ++i) gens.push_back(AffGen::loop(g.h_index(i), 0));
    gens.push_back(AffGen::k1());
    std::vector<std::vector<long>> box = step_box(d, steps);

    std::vector<Component> out;
    for (const std::vector<Int>& rep : lattice::quotient_reps(gpi)) {
        Component comp;
        comp.coset = rep;
        std::map<SliceKey, detail::SliceSpace> spaces;
        std::vector<std::pair<SliceKey, std::vector<Rat>>> work;

        std::vector<long> g0(d);
        for (size_t i = 0; i < d; ++i) g0[i] = rep[i].convert_to<long>();
        size_t t0 = l.base().highest_tuple();
        EvalTensorModule::JointKey jk0 = l.base().joint_key(t0);
        size_t d0 = l.base().spaces().at(jk0).size();
        std::vector<Rat> v0(d0, Rat(0));
        v0[l.base().position(t0)] = 1;
        SliceKey k0{jk0, g0};
        detail::insert_vector(spaces[k0], v0);
        work.push_back({k0, v0});

        while (!work.empty()) {
            auto [sk, vec] = work.back();
            work.pop_back();
            const auto& [jk, m] = sk;
            const std::vector<size_t>& tuples = l.base().spaces().at(jk);
            for (const AffGen& y : gens) {
                EvalTensorModule::JointKey tk =
                    (y.kind == AffGen::Kind::Loop) ? shift_joint(rs, g, jk, y) : jk;
                auto target = l.base().spaces().find(tk);
                if (target == l.base().spaces().end()) continue;
                size_t td = target->second.size();
                for (const std::vector<long>& s : box) {
                    std::vector<long> nm(m);
                    for (size_t i = 0; i < d; ++i) nm[i] += s[i];
                    if (!l.in_window(nm)) continue;
                    std::vector<Rat> img(td, Rat(0));
                    bool overflow = false, any = false;
                    for (size_t j = 0; j < tuples.size() && !overflow; ++j) {
                        if (vec[j] == 0) continue;
                        auto col = l.base().act(y, s, tuples[j]);
                        if (!col) {
                            overflow = true;  // beyond factor truncation: skip honestly
                            break;
                        }
                        for (const auto& [t, c] : *col) {
                            img[l.base().position(t)] += vec[j] * c;
                            any = true;
                        }
                    }
                    if (overflow || !any) continue;
                    SliceKey nk{tk, nm};
                    if (detail::insert_vector(spaces[nk], img)) work.push_back({nk, img});
                }
            }
        }
        for (const auto& [sk, sp] : spaces) {
            if (sp.dim == 0) continue;
            comp.dims[sk] = sp.dim;
            comp.total += sp.dim;
        }
        out.push_back(std::move(comp));
    }
    return out;
}

// Regression check of the central action rules on L(X_pi).
struct CentralReport {
    bool kj_trivial = true;       // K_j t^r for j >= 2 act as zero
    bool k1_graded_trivial = true;  // K_1 t^r with r_1 != 0 act as zero
    Rat k1_scalar;                // K_1 acts by wt(pi)(K_1)
    bool ok() const { return kj_trivial && k1_graded_trivial; }
};

inline CentralReport central_triviality_check(LoopedModule& l) {
    size_t k = l.k();
    CentralReport rep;
    LoopedModule::LVec v = l.v_pi(std::vector<long>(k - 1, 0));
    for (size_t j = 1; j < k; ++j) {
        for (const std::vector<long>& m : step_box(k, 1)) {
            CentralVector cv;
            cv.degree = m;
            cv.coeffs.assign(k, Rat(0));
            cv.coeffs[j] = 1;
            if (!l.act_central(cv, v).empty()) rep.kj_trivial = false;
        }
    }
    for (const std::vector<long>& m : step_box(k, 1)) {
        if (m[0] == 0) continue;
        CentralVector cv;
        cv.degree = m;
        cv.coeffs.assign(k, Rat(0));
        cv.coeffs[0] = 1;
        if (!l.act_central(cv, v).empty()) rep.k1_graded_trivial = false;
    }
    CentralVector k1;
    k1.degree.assign(k, 0);
    k1.coeffs.assign(k, Rat(0));
    k1.coeffs[0] = 1;
    LoopedModule::LVec w = l.act_central(k1, v);
    rep.k1_scalar = w.empty() ? Rat(0) : w.begin()->second;
    return rep;
}

// ---- isomorphism classification -------------------------------------------

struct IsoInstance {
    PiFunction pi;
    std::vector<long> g;  // coset label in Z^{k-1}
};

struct IsoResult {
    bool isomorphic = false;
    std::vector<Rat> witness;  // scaling b with s_b(supp pi) = supp pi'
    std::string reason;
};

inline bool weights_match_mod_delta1(const AffineWeight& a, const AffineWeight& b) {
    return a.level == b.level && a.finite == b.finite;  // delta1 shifts quotiented out
}

inline PiFunction scale_pi(const PiFunction& pi, const std::vector<Rat>& b) {
    PiFunction out = pi;
    for (auto& p : out.points)
        for (size_t i = 0; i < p.size(); ++i) p[i] *= b[i];
    return out;
}

// conditions (i) and (ii): some scaling b maps supp(pi) onto supp(pi') with
// matching weights (delta1 coefficients ignored)
inline IsoResult iso_check_evaluation(const AffineAlgebra& alg, const PiFunction& a,
                                      const PiFunction& b) {
    if (a.k != b.k) throw std::invalid_argument("mismatched k");
    a.validate(alg.root_system());
    b.validate(alg.root_system());
    IsoResult res;
    if (a.support_size() != b.support_size()) {
        res.reason = "support size mismatch";
        return res;
    }
    size_t d = a.k - 1;
    const std::vector<Rat>& p0 = a.points[0];
    for (const std::vector<Rat>& q : b.points) {
        std::vector<Rat> w(d);
        for (size_t i = 0; i < d; ++i) w[i] = q[i] / p0[i];
        bool all = true;
        for (size_t i = 0; i < a.support_size() && all; ++i) {
            std::vector<Rat> image(d);
            for (size_t j = 0; j < d; ++j) image[j] = w[j] * a.points[i][j];
            bool found = false;
            for (size_t j = 0; j < b.support_size(); ++j) {
                if (b.points[j] == image) {
                    found = weights_match_mod_delta1(a.weights[i], b.weights[j]);
                    break;
                }
            }
            all = found;
        }
        if (all) {
            res.isomorphic = true;
            res.witness = w;
            return res;
        }
    }
    res.reason = "no scaling matches supports and weights";
    return res;
}

// full criterion for X_pi^g ~ X_pi'^g': conditions (i), (ii) and g = g' mod G_pi
inline IsoResult iso_check(const AffineAlgebra& alg, const IsoInstance& a, const IsoInstance& b,
                           long box = 4) {
    IsoResult res = iso_check_evaluation(alg, a.pi, b.pi);
    if (!res.isomorphic) return res;
    size_t d = a.pi.k - 1;
    if (a.g.size() != d || b.g.size() != d) throw std::invalid_argument("coset label arity mismatch");
    lattice::Lattice gpi = compute_G_pi(alg, a.pi, box);
    std::vector<Int> diff(d);
    for (size_t i = 0; i < d; ++i) diff[i] = Int(a.g[i]) - Int(b.g[i]);
    if (!lattice::contains(gpi, diff)) {
        res.isomorphic = false;
        res.witness.clear();
        res.reason = "coset labels differ modulo G_pi";
        return res;
    }
    lattice::Lattice gpi2 = compute_G_pi(alg, b.pi, box);
    if (!(gpi.basis == gpi2.basis)) throw std::logic_error("isomorphic instances with different G_pi");
    return res;
}

}  // namespace toroidal
