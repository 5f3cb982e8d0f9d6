#pragma once

#include "toroidal/affine.hpp"
#include "toroidal/matrix.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace toroidal {

// PBW monomial in the lowering generators, stored as a weakly increasing
// sequence of generator indices.
using Monomial = std::vector<unsigned>;
using VermaVec = std::map<Monomial, Rat>;

// depth coordinates: Lambda - mu = sum_i c_i alpha_i + c_n1 alpha_{n+1},
// keyed as (c_1..c_n, c_{n+1})
using DepthKey = std::vector<long>;

inline size_t thread_count_from_env() {
    const char* s = std::getenv("TOROIDAL_THREADS");
    if (!s) return 1;
    long v = std::strtol(s, nullptr, 10);
    if (v < 1) return 1;
    if (v > 16) return 16;
    return static_cast<size_t>(v);
}

// Highest-weight standard module X(Lambda) truncated at depth D. Weight spaces
// are realized as Verma spaces modulo the radical of the contravariant form:
// the Gram matrix of PBW monomials is computed by commutator reduction, the
// multiplicity is its rank, and generators act through the Verma action
// followed by projection along the radical.
class TruncatedModule {
  public:
    TruncatedModule(const AffineAlgebra& alg, const AffineWeight& hw, long depth)
        : alg_(alg), rs_(alg.root_system()), g_(alg.finite()), hw_(hw), depth_(depth) {
        if (hw_.level == 0) throw std::domain_error("use LoopModule");
        if (hw_.level < 0 || !is_dominant(rs_, hw_)) throw std::domain_error("highest weight not dominant");
        if (depth_ < 0) throw std::invalid_argument("negative depth");
        build_generators();
        build_all();
    }

    const AffineWeight& highest_weight() const { return hw_; }
    long depth() const { return depth_; }
    const AffineAlgebra& algebra() const { return alg_; }

    // Lambda - mu in depth coordinates; throws if mu is not below Lambda
    DepthKey depth_key(const AffineWeight& mu) const {
        size_t n = rs_.rank();
        if (mu.level != hw_.level) throw std::domain_error("weight has wrong level");
        Rat dd = hw_.delta1 - mu.delta1;
        if (!is_integer(dd)) throw std::domain_error("weight not below highest weight");
        long cn1 = static_cast<long>(to_int(dd));
        FiniteWeight diff = hw_.finite - mu.finite;
        // finite part of Lambda - mu equals sum c_i alpha_i - c_{n+1} theta
        std::vector<Rat> rc = rs_.omega_to_root(diff);
        const RootCoords& th = rs_.theta();
        DepthKey c(n + 1, 0);
        for (size_t i = 0; i < n; ++i) {
            Rat v = rc[i] + Rat(cn1) * Rat(th[i]);
            if (!is_integer(v)) throw std::domain_error("weight not below highest weight");
            c[i] = static_cast<long>(to_int(v));
        }
        c[n] = cn1;
        return c;
    }

    AffineWeight weight_of(const DepthKey& c) const {
        size_t n = rs_.rank();
        AffineWeight mu = hw_;
        mu.delta1 -= Rat(c[n]);
        const RootCoords& th = rs_.theta();
        FiniteWeight drop = rs_.zero_weight();
        for (size_t i = 0; i < n; ++i) {
            RootCoords a(n, 0);
            a[i] = 1;
            FiniteWeight aw = rs_.root_to_weight(a);
            for (size_t j = 0; j < n; ++j) drop.omega[j] += c[i] * aw.omega[j];
        }
        FiniteWeight thw = rs_.root_to_weight(th);
        for (size_t j = 0; j < n; ++j) drop.omega[j] -= c[n] * thw.omega[j];
        mu.finite = hw_.finite - drop;
        return mu;
    }

    Int multiplicity(const AffineWeight& mu) {
        DepthKey c;
        try {
            c = depth_key(mu);
        } catch (const std::domain_error&) {
            return 0;
        }
        for (long v : c)
            if (v < 0) return 0;
        if (c.back() > depth_) throw std::domain_error("depth exceeded; extend truncation");
        return Int(space(c).mult);
    }

    // all weights with nonzero multiplicity within the truncation depth
    std::vector<std::pair<AffineWeight, Int>> weight_table() {
        std::vector<std::pair<AffineWeight, Int>> out;
        for (const DepthKey& c : enumerate_candidates()) {
            const WeightSpace& ws = space(c);
            if (ws.mult > 0) out.push_back({weight_of(c), Int(ws.mult)});
        }
        return out;
    }

    // Coordinates of module vectors over the selected monomial basis of a
    // weight space.
    struct Vec {
        DepthKey key;
        std::vector<Rat> coords;
        bool zero() const {
            for (const Rat& c : coords)
                if (c != 0) return false;
            return true;
        }
    };

    Vec highest_vector() {
        Vec v;
        v.key = DepthKey(rs_.rank() + 1, 0);
        v.coords = {Rat(1)};
        return v;
    }

    size_t dim(const DepthKey& c) { return space(c).mult; }

    // canonical zero vector: empty key, no coordinates
    static Vec zero_vec() { return Vec{}; }

    // Action of a basis element of g_aff on a module vector.
    Vec act(const AffGen& x, const Vec& v) {
        if (v.key.empty()) return zero_vec();
        if (x.kind == AffGen::Kind::K1) {
            Vec out = v;
            for (Rat& c : out.coords) c *= hw_.level;
            return out;
        }
        if (x.kind == AffGen::Kind::D1) {
            Vec out = v;
            Rat ev = eval_d1(v.key);
            for (Rat& c : out.coords) c *= ev;
            return out;
        }
        std::vector<long> rc = alg_.root_ccoords(x);
        DepthKey target = v.key;
        for (size_t i = 0; i < target.size(); ++i) target[i] -= rc[i];
        for (long t : target)
            if (t < 0) return zero_vec();  // outside the cone, the space vanishes
        if (target.back() > depth_) throw std::domain_error("depth exceeded; extend truncation");

        const WeightSpace& src = space(v.key);
        WeightSpace& dst = space_mut(target);
        Vec out;
        out.key = target;
        out.coords.assign(dst.mult, Rat(0));
        if (dst.mult == 0) return out;
        // Verma action on the selected representatives, then Gram projection
        VermaVec w;
        ApplyCache cache;
        for (size_t j = 0; j < src.sel.size(); ++j) {
            if (v.coords[j] == 0) continue;
            apply_gen(x, src.monomials[src.sel[j]], v.coords[j], w, cache);
        }
        std::vector<Rat> rhs(dst.mult, Rat(0));
        for (const auto& [mono, coef] : w) {
            auto it = dst.index.find(mono);
            if (it == dst.index.end()) throw std::logic_error("verma image outside enumerated weight space");
            for (size_t r = 0; r < dst.mult; ++r) rhs[r] += coef * dst.rows(r, it->second);
        }
        out.coords = solve(dst.gsel, rhs);
        return out;
    }

    Rat eval_d1(const DepthKey& c) const { return hw_.delta1 - Rat(c.back()); }

    // contravariant pairing of two vectors in the same weight space
    Rat pair(const Vec& a, const Vec& b) {
        if (a.key != b.key) return Rat(0);
        const WeightSpace& ws = space(a.key);
        Rat s = 0;
        for (size_t i = 0; i < a.coords.size(); ++i)
            for (size_t j = 0; j < b.coords.size(); ++j)
                s += a.coords[i] * b.coords[j] * ws.gsel(i, j);
        return s;
    }

    // candidate depth keys within the truncation (Kac norm bound)
    std::vector<DepthKey> enumerate_candidates() {
        std::vector<DepthKey> out;
        size_t n = rs_.rank();
        // |rho^vee|^2, with rho^vee identified with the weight of omega
        // coordinates 1/d_i; it bounds ht(v)^2 <= |v|^2 |rho^vee|^2
        Rat rho_vee2 = 0;
        {
            std::vector<Rat> w(n);
            for (size_t i = 0; i < n; ++i) w[i] = Rat(1) / rs_.symmetrizer()[i];
            std::vector<Rat> root_c = solve_cartan(w);
            for (size_t j = 0; j < n; ++j) rho_vee2 += root_c[j] * rs_.symmetrizer()[j] * w[j];
        }
        for (long cd = 0; cd <= depth_; ++cd) {
            // |mu_fin + rho_fin|^2 <= r2 for any weight at this delta-depth
            Rat r2 = rs_.form_ww(hw_.finite + rs_.rho(), hw_.finite + rs_.rho()) +
                     Rat(2) * (hw_.level + Rat(rs_.dual_coxeter_number())) * Rat(cd);
            if (r2 < 0) continue;
            // | sum c_i alpha_i | <= |Lambda_fin + rho_fin| + R + cd*|theta|, squared via 3x bound
            Rat lam2 = rs_.form_ww(hw_.finite + rs_.rho(), hw_.finite + rs_.rho());
            Rat th2 = rs_.root_norm2(rs_.theta());
            Rat bound2 = Rat(3) * (lam2 + r2 + Rat(cd) * Rat(cd) * th2);
            // ht^2 <= bound2 * |rho_vee|^2
            long hmax = 0;
            while (Rat(hmax + 1) * Rat(hmax + 1) <= bound2 * rho_vee2) ++hmax;
            // all finite coordinate vectors with sum <= hmax, filtered by the
            // exact Kac inequality |mu + rho|^2 <= |Lambda + rho|^2
            DepthKey c(n + 1, 0);
            c[n] = cd;
            std::vector<DepthKey> raw;
            enumerate_fin(raw, c, 0, hmax);
            AffineWeight rho = affine_rho(rs_);
            Rat top = affine_form(rs_, hw_ + rho, hw_ + rho);
            for (const DepthKey& k : raw) {
                AffineWeight mu = weight_of(k);
                if (affine_form(rs_, mu + rho, mu + rho) <= top) out.push_back(k);
            }
        }
        return out;
    }

  private:
    const AffineAlgebra& alg_;
    const RootSystem& rs_;
    const FiniteLieAlgebra& g_;
    AffineWeight hw_;
    long depth_;

    struct GenInfo {
        AffGen gen;
        DepthKey drop;  // contribution to Lambda - mu
    };
    std::vector<GenInfo> gens_;
    std::map<AffGen, unsigned> gen_index_;

    struct WeightSpace {
        std::vector<Monomial> monomials;
        std::map<Monomial, size_t> index;
        std::vector<size_t> sel;   // monomials forming a basis of the quotient
        RatMatrix gsel;            // Gram restricted to sel x sel
        RatMatrix rows;            // Gram(sel_r, j) for every monomial j
        size_t mult = 0;
    };
    std::map<DepthKey, WeightSpace> spaces_;
    std::mutex mutex_;

    std::vector<Rat> solve_cartan(const std::vector<Rat>& omega_coords) const {
        size_t n = rs_.rank();
        RatMatrix a(n, n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) a(i, j) = Rat(rs_.cartan()(i, j));
        return solve(a, omega_coords);
    }

    void enumerate_fin(std::vector<DepthKey>& out, DepthKey& c, size_t i, long budget) {
        size_t n = rs_.rank();
        if (i == n) {
            out.push_back(c);
            return;
        }
        for (long v = 0; v <= budget; ++v) {
            c[i] = v;
            enumerate_fin(out, c, i + 1, budget - v);
        }
        c[i] = 0;
    }

    void build_generators() {
        size_t n = rs_.rank();
        const auto& pos = rs_.positive_roots();
        std::vector<std::pair<std::tuple<long, long, size_t>, GenInfo>> tmp;
        auto add = [&](AffGen g) {
            std::vector<long> rc = alg_.root_ccoords(g);  // root of g = -(drop)
            GenInfo info;
            info.gen = g;
            info.drop.assign(rc.size(), 0);
            for (size_t i = 0; i < rc.size(); ++i) info.drop[i] = -rc[i];
            long ht = 0;
            RootCoords gamma = g_.root_of(g.fin);
            for (long x : gamma) ht += x;
            tmp.push_back({{info.drop.back(), ht, g.fin}, info});
        };
        for (size_t a = 0; a < pos.size(); ++a) add(AffGen::loop(g_.f_index(a), 0));
        for (long m = 1; m <= depth_; ++m) {
            for (size_t a = 0; a < pos.size(); ++a) {
                add(AffGen::loop(g_.e_index(a), -m));
                add(AffGen::loop(g_.f_index(a), -m));
            }
            for (size_t i = 0; i < n; ++i) add(AffGen::loop(g_.h_index(i), -m));
        }
        std::sort(tmp.begin(), tmp.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (auto& [key, info] : tmp) {
            gen_index_[info.gen] = static_cast<unsigned>(gens_.size());
            gens_.push_back(info);
        }
    }

    void build_all() {
        std::vector<DepthKey> cands = enumerate_candidates();
        size_t nthreads = thread_count_from_env();
        if (nthreads <= 1 || cands.size() < 2) {
            for (const DepthKey& c : cands) space(c);
            return;
        }
        std::vector<std::optional<WeightSpace>> slots(cands.size());
        std::vector<std::thread> pool;
        std::mutex take;
        size_t next = 0;
        for (size_t t = 0; t < nthreads; ++t) {
            pool.emplace_back([&]() {
                while (true) {
                    size_t i;
                    {
                        std::lock_guard<std::mutex> lk(take);
                        if (next >= cands.size()) return;
                        i = next++;
                    }
                    slots[i] = compute_space(cands[i]);
                }
            });
        }
        for (auto& th : pool) th.join();
        // deterministic merge in candidate order
        for (size_t i = 0; i < cands.size(); ++i) spaces_.emplace(cands[i], std::move(*slots[i]));
    }

    const WeightSpace& space(const DepthKey& c) { return space_mut(c); }

    WeightSpace& space_mut(const DepthKey& c) {
        {
            std::lock_guard<std::mutex> lk(mutex_);
            auto it = spaces_.find(c);
            if (it != spaces_.end()) return it->second;
        }
        WeightSpace ws = compute_space(c);
        std::lock_guard<std::mutex> lk(mutex_);
        return spaces_.emplace(c, std::move(ws)).first->second;
    }

    WeightSpace compute_space(const DepthKey& c) {
        WeightSpace ws;
        Monomial cur;
        DepthKey rem = c;
        enumerate_monomials(ws.monomials, cur, rem, 0);
        std::sort(ws.monomials.begin(), ws.monomials.end());
        for (size_t i = 0; i < ws.monomials.size(); ++i) ws.index[ws.monomials[i]] = i;
        size_t nmono = ws.monomials.size();
        ApplyCache cache;
        std::map<std::pair<size_t, size_t>, Rat> entries;
        auto entry = [&](size_t i, size_t j) -> const Rat& {
            if (i > j) std::swap(i, j);
            auto it = entries.find({i, j});
            if (it != entries.end()) return it->second;
            // apply the shorter raising chain
            const Monomial &a = ws.monomials[i], &b = ws.monomials[j];
            Rat v = (a.size() <= b.size()) ? gram_entry(a, b, cache) : gram_entry(b, a, cache);
            return entries.emplace(std::make_pair(i, j), std::move(v)).first->second;
        };
        // Greedy selection of a nonsingular principal submatrix; the form is
        // positive semidefinite for dominant Lambda, so this reaches the rank.
        for (size_t cand = 0; cand < nmono; ++cand) {
            size_t s = ws.sel.size();
            RatMatrix sub(s + 1, s + 1);
            for (size_t i = 0; i <= s; ++i)
                for (size_t j = 0; j <= s; ++j) {
                    size_t a = (i == s) ? cand : ws.sel[i];
                    size_t b = (j == s) ? cand : ws.sel[j];
                    sub(i, j) = entry(a, b);
                }
            if (det(sub) != 0) ws.sel.push_back(cand);
        }
        ws.mult = ws.sel.size();
        ws.gsel = RatMatrix(ws.mult, ws.mult);
        for (size_t i = 0; i < ws.mult; ++i)
            for (size_t j = 0; j < ws.mult; ++j) ws.gsel(i, j) = entry(ws.sel[i], ws.sel[j]);
        ws.rows = RatMatrix(ws.mult, nmono);
        for (size_t r = 0; r < ws.mult; ++r)
            for (size_t j = 0; j < nmono; ++j) ws.rows(r, j) = entry(ws.sel[r], j);
        return ws;
    }

    // All multisets of lowering generators whose drops sum to rem. Every drop
    // is componentwise non-negative (positive affine roots), so pruning is a
    // plain componentwise budget check.
    void enumerate_monomials(std::vector<Monomial>& out, Monomial& cur, DepthKey& rem,
                             size_t from) const {
        bool zero = true;
        for (long v : rem)
            if (v != 0) zero = false;
        if (zero) {
            out.push_back(cur);
            return;
        }
        for (size_t gi = from; gi < gens_.size(); ++gi) {
            const DepthKey& d = gens_[gi].drop;
            bool fits = true;
            for (size_t i = 0; i < rem.size(); ++i)
                if (rem[i] < d[i]) fits = false;
            if (!fits) continue;
            for (size_t i = 0; i < rem.size(); ++i) rem[i] -= d[i];
            cur.push_back(static_cast<unsigned>(gi));
            enumerate_monomials(out, cur, rem, gi);
            cur.pop_back();
            for (size_t i = 0; i < rem.size(); ++i) rem[i] += d[i];
        }
    }

    // Memoized Verma arithmetic: the same (generator, suffix) applications
    // recur across Gram entries of a weight space, so cache them.
    struct ApplyCache {
        std::map<std::pair<AffGen, Monomial>, VermaVec> app;
        std::map<std::pair<unsigned, Monomial>, VermaVec> low;
    };

    // <v_I, v_J> by raising: apply sigma of I's factors to the monomial J
    Rat gram_entry(const Monomial& I, const Monomial& J, ApplyCache& cache) const {
        VermaVec w;
        w[J] = 1;
        for (unsigned gi : I) {
            VermaVec next;
            AffGen raised = alg_.sigma(gens_[gi].gen);
            for (const auto& [mono, coef] : w) apply_gen(raised, mono, coef, next, cache);
            w = std::move(next);
            if (w.empty()) return Rat(0);
        }
        auto it = w.find(Monomial{});
        return it == w.end() ? Rat(0) : it->second;
    }

    // out += c * (x . M) in the Verma module
    void apply_gen(const AffGen& x, const Monomial& M, const Rat& c, VermaVec& out,
                   ApplyCache& cache) const {
        if (c == 0) return;
        for (const auto& [mono, coef] : apply_gen_memo(x, M, cache)) add_to(out, mono, c * coef);
    }

    const VermaVec& apply_gen_memo(const AffGen& x, const Monomial& M, ApplyCache& cache) const {
        auto key = std::make_pair(x, M);
        auto hit = cache.app.find(key);
        if (hit != cache.app.end()) return hit->second;
        VermaVec out;
        if (x.kind == AffGen::Kind::K1) {
            add_to(out, M, hw_.level);
        } else if (x.kind == AffGen::Kind::D1) {
            Rat ev = hw_.delta1;
            for (unsigned gi : M) ev -= Rat(gens_[gi].drop.back());
            add_to(out, M, ev);
        } else if (M.empty()) {
            switch (alg_.classify(x)) {
                case GenClass::Raising:
                    break;
                case GenClass::Cartan:
                    add_to(out, M, alg_.eval(hw_, x));
                    break;
                case GenClass::Lowering: {
                    auto it = gen_index_.find(x);
                    if (it == gen_index_.end())
                        throw std::domain_error("depth exceeded; extend truncation");
                    add_to(out, Monomial{it->second}, Rat(1));
                    break;
                }
            }
        } else {
            unsigned head = M.front();
            Monomial rest(M.begin() + 1, M.end());
            for (const auto& [b, cb] : alg_.bracket(x, gens_[head].gen))
                apply_gen(b, rest, cb, out, cache);
            for (const auto& [mono, coef] : apply_gen_memo(x, rest, cache))
                mult_lowering(head, mono, coef, out, cache);
        }
        return cache.app.emplace(std::move(key), std::move(out)).first->second;
    }

    // out += c * (f_gi . M) with straightening into the PBW order
    void mult_lowering(unsigned gi, const Monomial& M, const Rat& c, VermaVec& out,
                       ApplyCache& cache) const {
        if (c == 0) return;
        if (M.empty() || gi <= M.front()) {
            Monomial r;
            r.reserve(M.size() + 1);
            r.push_back(gi);
            r.insert(r.end(), M.begin(), M.end());
            add_to(out, r, c);
            return;
        }
        for (const auto& [mono, coef] : mult_lowering_memo(gi, M, cache)) add_to(out, mono, c * coef);
    }

    const VermaVec& mult_lowering_memo(unsigned gi, const Monomial& M, ApplyCache& cache) const {
        auto key = std::make_pair(gi, M);
        auto hit = cache.low.find(key);
        if (hit != cache.low.end()) return hit->second;
        VermaVec out;
        unsigned head = M.front();
        Monomial rest(M.begin() + 1, M.end());
        VermaVec tail;
        mult_lowering(gi, rest, Rat(1), tail, cache);
        for (const auto& [mono, coef] : tail) mult_lowering(head, mono, coef, out, cache);
        for (const auto& [b, cb] : alg_.bracket(gens_[gi].gen, gens_[head].gen)) {
            auto it = gen_index_.find(b);
            if (it == gen_index_.end()) throw std::logic_error("bracket left the lowering algebra");
            mult_lowering(it->second, rest, cb, out, cache);
        }
        return cache.low.emplace(std::move(key), std::move(out)).first->second;
    }

    static void add_to(VermaVec& v, const Monomial& m, const Rat& c) {
        if (c == 0) return;
        auto [it, inserted] = v.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) v.erase(it);
        }
    }
};

}  // namespace toroidal
