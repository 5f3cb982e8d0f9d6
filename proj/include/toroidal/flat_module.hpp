#pragma once

#include "toroidal/standard_module.hpp"

#include <memory>

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace toroidal {

// Flat-indexed view of a TruncatedModule: basis vectors of all weight spaces
// in one list, with sparse action columns.
class FlatModule {
  public:
    FlatModule(const AffineAlgebra& alg, const AffineWeight& hw, long depth)
        : mod_(alg, hw, depth) {
        for (const auto& [w, m] : mod_.weight_table()) {
            DepthKey key = mod_.depth_key(w);
            size_t d = m.convert_to<size_t>();
            offsets_[key] = basis_.size();
            for (size_t c = 0; c < d; ++c) basis_.push_back({key, c});
        }
    }

    TruncatedModule& module() { return mod_; }
    const AffineWeight& highest_weight() const { return mod_.highest_weight(); }

    size_t dim() const { return basis_.size(); }

    AffineWeight weight_of(size_t flat) const { return mod_.weight_of(basis_[flat].first); }

    size_t highest() const {
        DepthKey top(mod_.highest_weight().finite.omega.size() + 1, 0);
        return offsets_.at(top);
    }

    using Sparse = std::vector<std::pair<size_t, Rat>>;

    // action column; empty when the image leaves the weight cone, nullopt when
    // it leaves the truncation depth
    std::optional<Sparse> act(const AffGen& g, size_t flat) {
        auto key = std::make_pair(g, flat);
        auto it = act_cache_.find(key);
        if (it != act_cache_.end()) return it->second;
        const auto& [wkey, col] = basis_[flat];
        TruncatedModule::Vec v;
        v.key = wkey;
        v.coords.assign(mod_.dim(wkey), Rat(0));
        v.coords[col] = 1;
        std::optional<Sparse> out;
        try {
            TruncatedModule::Vec w = mod_.act(g, v);
            Sparse s;
            if (!w.key.empty()) {
                auto off = offsets_.find(w.key);
                for (size_t i = 0; i < w.coords.size(); ++i)
                    if (w.coords[i] != 0) s.push_back({off->second + i, w.coords[i]});
            }
            out = std::move(s);
        } catch (const std::domain_error&) {
            out = std::nullopt;  // beyond the truncation depth
        }
        act_cache_.emplace(key, out);
        return out;
    }

  private:
    TruncatedModule mod_;
    std::vector<std::pair<DepthKey, size_t>> basis_;
    std::map<DepthKey, size_t> offsets_;
    std::map<std::pair<AffGen, size_t>, std::optional<Sparse>> act_cache_;
};

// Explicit V(lambda) for the finite algebra: the depth-zero slice of a
// standard module carries exactly the finite irreducible with its action.
class FiniteModule {
  public:
    FiniteModule(const AffineAlgebra& alg, const FiniteWeight& lambda)
        : flat_(alg, lift(alg.root_system(), lambda), 0) {}

    static AffineWeight lift(const RootSystem& rs, const FiniteWeight& lambda) {
        if (!lambda.dominant()) throw std::domain_error("highest weight not dominant");
        Rat lvl = rs.pair_coroot(lambda, rs.theta()) + 1;
        return AffineWeight{lvl, lambda, Rat(0)};
    }

    size_t dim() const { return flat_.dim(); }
    size_t highest() const { return flat_.highest(); }
    FiniteWeight weight_of(size_t flat) const { return flat_.weight_of(flat).finite; }

    // action of a finite basis element (t1-degree zero); never leaves depth 0
    FlatModule::Sparse act(size_t fin_elt, size_t flat) {
        auto s = flat_.act(AffGen::loop(fin_elt, 0), flat);
        return *s;
    }

  private:
    FlatModule flat_;
};

// Loop module V(lambda, a, b): V(lambda_1) (x) ... (x) V(lambda_r) (x) C[t1^{+-1}]
// truncated to a finite t1 window. K1 acts as zero; d1 acts on the t1^p slice
// by b + p.
class LoopModule {
  public:
    LoopModule(const AffineAlgebra& alg, std::vector<FiniteWeight> lambdas, std::vector<Rat> a,
               Rat b, long window_lo, long window_hi)
        : a_(std::move(a)), b_(std::move(b)), lo_(window_lo), hi_(window_hi) {
        if (lambdas.empty()) throw std::invalid_argument("loop module needs at least one factor");
        if (lambdas.size() != a_.size()) throw std::invalid_argument("factor/point count mismatch");
        for (const Rat& x : a_)
            if (x == 0) throw std::invalid_argument("evaluation points must be nonzero");
        for (size_t i = 0; i < a_.size(); ++i)
            for (size_t j = i + 1; j < a_.size(); ++j)
                if (a_[i] == a_[j]) throw std::invalid_argument("evaluation points must be distinct");
        if (lo_ > hi_) throw std::invalid_argument("empty t1 window");
        for (const FiniteWeight& l : lambdas) factors_.push_back(std::make_unique<FiniteModule>(alg, l));
    }

    size_t factor_count() const { return factors_.size(); }
    long window_lo() const { return lo_; }
    long window_hi() const { return hi_; }
    FiniteModule& factor(size_t i) { return *factors_[i]; }

    // basis label: factor indices plus t1 exponent
    struct Key {
        std::vector<size_t> idx;
        long p = 0;
        auto operator<=>(const Key&) const = default;
    };
    using LVec = std::map<Key, Rat>;

    LVec unit(const Key& k) const {
        check_window(k.p);
        return LVec{{k, Rat(1)}};
    }

    Key highest(long p) const {
        Key k;
        for (const auto& f : factors_) k.idx.push_back(f->highest());
        k.p = p;
        return k;
    }

    // x (x) t1^s: sum_i a_i^s v_1 (x) .. (x) x.v_i (x) .. (x) f t1^s
    LVec act_loop(size_t fin_elt, long s, const LVec& v) {
        LVec out;
        for (const auto& [key, c] : v) {
            check_window(key.p + s);
            for (size_t i = 0; i < factors_.size(); ++i) {
                Rat as = pow_rat(a_[i], s);
                for (const auto& [tgt, cc] : factors_[i]->act(fin_elt, key.idx[i])) {
                    Key nk = key;
                    nk.idx[i] = tgt;
                    nk.p = key.p + s;
                    add(out, nk, c * as * cc);
                }
            }
        }
        return out;
    }

    LVec act_k1(const LVec&) const { return {}; }

    LVec act_d1(const LVec& v) const {
        LVec out;
        for (const auto& [key, c] : v) add(out, key, c * (b_ + Rat(key.p)));
        return out;
    }

    FiniteWeight weight_of_key(const Key& k) const {
        FiniteWeight w = factors_[0]->weight_of(k.idx[0]);
        for (size_t i = 1; i < factors_.size(); ++i) w = w + factors_[i]->weight_of(k.idx[i]);
        return w;
    }

    // dimension of the (mu, p) weight slice; independent of p inside the window
    Int dim_weight(const FiniteWeight& mu) const {
        Int count = 0;
        std::vector<size_t> idx(factors_.size(), 0);
        count_tuples(mu, 0, idx, count);
        return count;
    }

  private:
    std::vector<std::unique_ptr<FiniteModule>> factors_;
    std::vector<Rat> a_;
    Rat b_;
    long lo_, hi_;

    void check_window(long p) const {
        if (p < lo_ || p > hi_) throw std::domain_error("extend truncation");
    }

    static Rat pow_rat(const Rat& x, long e) {
        Rat out = 1;
        Rat base = x;
        long n = e;
        if (n < 0) {
            base = Rat(1) / x;
            n = -n;
        }
        for (long i = 0; i < n; ++i) out *= base;
        return out;
    }

    static void add(LVec& v, const Key& k, const Rat& c) {
        if (c == 0) return;
        auto [it, inserted] = v.emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) v.erase(it);
        }
    }

    void count_tuples(const FiniteWeight& target, size_t i, std::vector<size_t>& idx, Int& count) const {
        if (i == factors_.size()) {
            FiniteWeight s = factors_[0]->weight_of(idx[0]);
            for (size_t j = 1; j < factors_.size(); ++j) s = s + factors_[j]->weight_of(idx[j]);
            if (s == target) ++count;
            return;
        }
        for (size_t v = 0; v < factors_[i]->dim(); ++v) {
            idx[i] = v;
            count_tuples(target, i + 1, idx, count);
        }
    }
};

}  // namespace toroidal
