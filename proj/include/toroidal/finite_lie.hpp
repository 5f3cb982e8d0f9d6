#pragma once

#include "toroidal/rootsys.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace toroidal {

// Chevalley basis of sl(n+1) realized by matrix units: e_alpha = E_ij (i<j),
// f_alpha = E_ji, h_i = E_ii - E_{i+1,i+1}. Brackets are exact matrix
// commutators decomposed back into the basis; the invariant form is the trace
// form, which already satisfies (theta|theta) = 2.
//
// Only type A carries explicit structure constants here; that is all the
// module actions downstream need.
class FiniteLieAlgebra {
  public:
    explicit FiniteLieAlgebra(const RootSystem& rs) : rs_(rs), n_(rs.rank()) {
        if (rs.type() != 'A')
            throw std::domain_error("no structure constants for type " + rs.code());
        // basis: e's over positive roots (rs order), then f's, then h's
        const auto& pos = rs_.positive_roots();
        p_ = pos.size();
        for (size_t a = 0; a < p_; ++a) {
            auto [i, j] = root_to_pair(pos[a]);
            mats_.push_back(unit(i, j));
            names_.push_back("E" + std::to_string(i + 1) + std::to_string(j + 1));
        }
        for (size_t a = 0; a < p_; ++a) {
            auto [i, j] = root_to_pair(pos[a]);
            mats_.push_back(unit(j, i));
            names_.push_back("E" + std::to_string(j + 1) + std::to_string(i + 1));
        }
        for (size_t i = 0; i < n_; ++i) {
            RatMatrix h(n_ + 1, n_ + 1);
            h(i, i) = 1;
            h(i + 1, i + 1) = -1;
            mats_.push_back(h);
            names_.push_back("H" + std::to_string(i + 1));
        }
        for (size_t i = 0; i < dim(); ++i) name_index_[names_[i]] = i;
        // bracket table
        table_.resize(dim());
        for (size_t a = 0; a < dim(); ++a) {
            table_[a].resize(dim());
            for (size_t b = 0; b < dim(); ++b) {
                RatMatrix c = commutator(mats_[a], mats_[b]);
                table_[a][b] = decompose(c);
            }
        }
    }

    const RootSystem& root_system() const { return rs_; }
    size_t dim() const { return 2 * p_ + n_; }
    size_t positive_count() const { return p_; }

    size_t e_index(size_t root_idx) const { return root_idx; }
    size_t f_index(size_t root_idx) const { return p_ + root_idx; }
    size_t h_index(size_t i) const { return 2 * p_ + i; }

    bool is_e(size_t b) const { return b < p_; }
    bool is_f(size_t b) const { return b >= p_ && b < 2 * p_; }
    bool is_h(size_t b) const { return b >= 2 * p_; }

    // root attached to a basis element: +alpha for e, -alpha for f, 0 for h
    RootCoords root_of(size_t b) const {
        RootCoords r(n_, 0);
        if (is_h(b)) return r;
        const RootCoords& a = rs_.positive_roots()[b % p_];
        for (size_t i = 0; i < n_; ++i) r[i] = is_e(b) ? a[i] : -a[i];
        return r;
    }

    const std::string& name(size_t b) const { return names_[b]; }
    size_t index_of(const std::string& name) const {
        auto it = name_index_.find(name);
        if (it == name_index_.end()) throw std::invalid_argument("unknown basis element " + name);
        return it->second;
    }

    size_t root_index(const RootCoords& alpha) const {
        const auto& pos = rs_.positive_roots();
        for (size_t a = 0; a < pos.size(); ++a)
            if (pos[a] == alpha) return a;
        throw std::invalid_argument("not a positive root");
    }

    using Combo = std::vector<std::pair<size_t, Rat>>;

    const Combo& bracket(size_t a, size_t b) const { return table_[a][b]; }

    // trace form (x|y); normalized so (theta|theta) = 2 by construction
    Rat form(size_t a, size_t b) const {
        Rat s = 0;
        for (size_t i = 0; i <= n_; ++i)
            for (size_t j = 0; j <= n_; ++j) s += mats_[a](i, j) * mats_[b](j, i);
        return s;
    }

    // transpose anti-automorphism: e_alpha <-> f_alpha, h fixed
    size_t sigma(size_t b) const {
        if (is_e(b)) return f_index(b % p_);
        if (is_f(b)) return e_index(b % p_);
        return b;
    }

    // value of an integral weight on h_i = alpha_i^vee
    static Rat weight_on_h(const FiniteWeight& w, size_t i) { return Rat(w.omega[i]); }

    // coroot coordinates of alpha^vee on the basis h_1..h_n
    std::vector<Rat> coroot_coords(const RootCoords& alpha) const {
        Rat norm = rs_.root_norm2(alpha);
        std::vector<Rat> c(n_);
        for (size_t i = 0; i < n_; ++i)
            c[i] = Rat(2) * Rat(alpha[i]) * rs_.symmetrizer()[i] / norm;
        return c;
    }

  private:
    const RootSystem& rs_;
    size_t n_, p_ = 0;
    std::vector<RatMatrix> mats_;
    std::vector<std::string> names_;
    std::map<std::string, size_t> name_index_;
    std::vector<std::vector<Combo>> table_;

    RatMatrix unit(size_t i, size_t j) const {
        RatMatrix m(n_ + 1, n_ + 1);
        m(i, j) = 1;
        return m;
    }

    std::pair<size_t, size_t> root_to_pair(const RootCoords& c) const {
        // alpha = eps_i - eps_j corresponds to a contiguous block of 1's
        size_t first = n_, last = n_;
        for (size_t i = 0; i < n_; ++i) {
            if (c[i] == 1) {
                if (first == n_) first = i;
                last = i;
            } else if (c[i] != 0) {
                throw std::logic_error("bad type-A root coordinates");
            }
        }
        return {first, last + 1};
    }

    static RatMatrix commutator(const RatMatrix& a, const RatMatrix& b) {
        RatMatrix ab = a * b;
        RatMatrix ba = b * a;
        RatMatrix c(a.rows(), a.cols());
        for (size_t i = 0; i < a.rows(); ++i)
            for (size_t j = 0; j < a.cols(); ++j) c(i, j) = ab(i, j) - ba(i, j);
        return c;
    }

    Combo decompose(const RatMatrix& m) const {
        Combo out;
        for (size_t b = 0; b < 2 * p_; ++b) {
            // coefficient of E_ij is just the (i,j) entry
            size_t i = 0, j = 0;
            for (size_t r = 0; r <= n_; ++r)
                for (size_t c = 0; c <= n_; ++c)
                    if (mats_[b](r, c) != 0) {
                        i = r;
                        j = c;
                    }
            if (m(i, j) != 0) out.push_back({b, m(i, j)});
        }
        // diagonal part: partial sums give the h-coordinates
        Rat acc = 0;
        for (size_t i = 0; i < n_; ++i) {
            acc += m(i, i);
            if (acc != 0) out.push_back({h_index(i), acc});
        }
        return out;
    }
};

}  // namespace toroidal
