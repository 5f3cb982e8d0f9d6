#pragma once

#include "toroidal/matrix.hpp"
#include "toroidal/rational.hpp"

#include <stdexcept>
#include <vector>

namespace toroidal::lattice {

// Unimodular B with B*n = (gcd(n), 0, ..., 0), gcd normalized positive.
// Built by folding extended Euclid over the coordinates.
inline IntMatrix gcd_unimodular(const std::vector<Int>& n) {
    size_t k = n.size();
    if (k == 0) throw std::domain_error("undefined gcd direction");
    bool all_zero = true;
    for (const Int& v : n)
        if (v != 0) all_zero = false;
    if (all_zero) throw std::domain_error("undefined gcd direction");

    if (k == 1) {
        IntMatrix b(1, 1);
        b(0, 0) = (n[0] >= 0) ? 1 : -1;
        return b;
    }

    std::vector<Int> head(n.begin(), n.end() - 1);
    bool head_zero = true;
    for (const Int& v : head)
        if (v != 0) head_zero = false;

    if (head_zero) {
        // gcd direction is the last coordinate; permute it to the front
        IntMatrix b(k, k);
        b(0, k - 1) = (n[k - 1] >= 0) ? 1 : -1;
        for (size_t i = 1; i < k; ++i) b(i, i - 1) = 1;
        return b;
    }

    IntMatrix bp = gcd_unimodular(head);
    Int gp = 0;
    for (size_t j = 0; j < k - 1; ++j) gp += bp(0, j) * head[j];
    // gp = gcd(n_1..n_{k-1}) > 0
    Int x, y;
    Int g = ext_gcd(gp, n[k - 1], x, y);
    IntMatrix b(k, k);
    for (size_t j = 0; j < k - 1; ++j) {
        b(0, j) = x * bp(0, j);
        b(1, j) = -(n[k - 1] / g) * bp(0, j);
    }
    b(0, k - 1) = y;
    b(1, k - 1) = gp / g;
    for (size_t i = 1; i + 1 < k; ++i)
        for (size_t j = 0; j < k - 1; ++j) b(i + 1, j) = bp(i, j);
    return b;
}

// Subgroup of Z^n in row-style Hermite normal form: pivots positive,
// entries above a pivot reduced into [0, pivot).
struct Lattice {
    size_t ambient_rank = 0;
    IntMatrix basis;  // one row per basis vector, in HNF

    size_t rank() const { return basis.rows(); }
    bool full_rank() const { return rank() == ambient_rank; }

    Int index() const {
        if (!full_rank()) throw std::domain_error("infinite quotient");
        Int d = det(basis);
        return d < 0 ? Int(-d) : d;
    }
};

inline Lattice hnf(const std::vector<std::vector<Int>>& generators, size_t ambient_rank) {
    for (const auto& g : generators)
        if (g.size() != ambient_rank) throw std::invalid_argument("generator length mismatch");
    IntMatrix m(generators.size(), ambient_rank);
    for (size_t i = 0; i < generators.size(); ++i)
        for (size_t j = 0; j < ambient_rank; ++j) m(i, j) = generators[i][j];

    size_t r = 0;
    std::vector<size_t> pivot_col;
    for (size_t c = 0; c < ambient_rank && r < m.rows(); ++c) {
        // Euclidean elimination in column c over rows r..end
        while (true) {
            size_t best = m.rows();
            for (size_t i = r; i < m.rows(); ++i) {
                if (m(i, c) == 0) continue;
                if (best == m.rows() || abs(m(i, c)) < abs(m(best, c))) best = i;
            }
            if (best == m.rows()) break;  // column is zero below r
            m.swap_rows(r, best);
            if (m(r, c) < 0) m.scale_row(r, Int(-1));
            bool clean = true;
            for (size_t i = r + 1; i < m.rows(); ++i) {
                if (m(i, c) == 0) continue;
                Int q = floor_div(m(i, c), m(r, c));
                m.add_row(i, r, -q);
                if (m(i, c) != 0) clean = false;
            }
            if (clean) break;
        }
        if (r < m.rows() && m(r, c) != 0) {
            pivot_col.push_back(c);
            ++r;
        }
    }
    // reduce entries above each pivot into [0, pivot)
    for (size_t p = 0; p < pivot_col.size(); ++p) {
        size_t c = pivot_col[p];
        for (size_t i = 0; i < p; ++i) {
            Int q = floor_div(m(i, c), m(p, c));
            if (q != 0) m.add_row(i, p, -q);
        }
    }
    Lattice out;
    out.ambient_rank = ambient_rank;
    out.basis = IntMatrix(r, ambient_rank);
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < ambient_rank; ++j) out.basis(i, j) = m(i, j);
    return out;
}

inline Lattice hnf(const std::vector<std::vector<Int>>& generators) {
    if (generators.empty()) throw std::invalid_argument("ambient rank unknown for empty generator list");
    return hnf(generators, generators.front().size());
}

// Canonical representative of v modulo the full-rank lattice L: every
// coordinate reduced into [0, pivot) using the upper-triangular HNF rows.
inline std::vector<Int> reduce_mod(const Lattice& l, std::vector<Int> v) {
    if (!l.full_rank()) throw std::domain_error("infinite quotient");
    if (v.size() != l.ambient_rank) throw std::invalid_argument("vector length mismatch");
    for (size_t j = 0; j < l.ambient_rank; ++j) {
        Int q = floor_div(v[j], l.basis(j, j));
        if (q == 0) continue;
        for (size_t c = j; c < l.ambient_rank; ++c) v[c] -= q * l.basis(j, c);
    }
    return v;
}

inline bool contains(const Lattice& l, const std::vector<Int>& v) {
    if (l.full_rank()) {
        std::vector<Int> r = reduce_mod(l, v);
        for (const Int& x : r)
            if (x != 0) return false;
        return true;
    }
    // rank-deficient: exact rational solve against the basis rows
    if (l.rank() == 0) {
        for (const Int& x : v)
            if (x != 0) return false;
        return true;
    }
    RatMatrix bt(l.ambient_rank, l.rank());
    for (size_t i = 0; i < l.rank(); ++i)
        for (size_t j = 0; j < l.ambient_rank; ++j) bt(j, i) = Rat(l.basis(i, j));
    std::vector<Rat> rhs(v.size());
    for (size_t j = 0; j < v.size(); ++j) rhs[j] = Rat(v[j]);
    try {
        std::vector<Rat> x = solve(bt, rhs);
        for (const Rat& c : x)
            if (!is_integer(c)) return false;
        return true;
    } catch (const std::domain_error&) {
        return false;
    }
}

// All |det| coset representatives of Z^n / L, reduced into the HNF box.
inline std::vector<std::vector<Int>> quotient_reps(const Lattice& l) {
    if (!l.full_rank()) throw std::domain_error("infinite quotient");
    size_t n = l.ambient_rank;
    std::vector<std::vector<Int>> reps;
    std::vector<Int> cur(n, 0);
    // odometer over the diagonal box [0, H_jj)
    while (true) {
        reps.push_back(reduce_mod(l, cur));
        size_t j = 0;
        while (j < n) {
            cur[j] += 1;
            if (cur[j] < l.basis(j, j)) break;
            cur[j] = 0;
            ++j;
        }
        if (j == n) break;
    }
    return reps;
}

}  // namespace toroidal::lattice
