#pragma once

#include "toroidal/affine.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace toroidal {

// Finitely supported map from rational points of (Q*)^{k-1} (standing for
// maximal ideals of C[t_2^{+-1},..,t_k^{+-1}]) to dominant affine weights of
// positive level.
struct PiFunction {
    size_t k = 2;                          // number of toroidal variables
    std::vector<std::vector<Rat>> points;  // support, pairwise distinct, coords nonzero
    std::vector<AffineWeight> weights;     // value at each point

    size_t support_size() const { return points.size(); }

    AffineWeight wt(const RootSystem& rs) const {
        AffineWeight s{Rat(0), rs.zero_weight(), Rat(0)};
        for (const AffineWeight& w : weights) s = s + w;
        return s;
    }

    void validate(const RootSystem& rs) const {
        if (k < 2) throw std::invalid_argument("pi-function needs k >= 2");
        if (points.size() != weights.size()) throw std::invalid_argument("points/weights mismatch");
        if (points.empty()) throw std::invalid_argument("pi-function has empty support");
        for (const auto& p : points) {
            if (p.size() != k - 1) throw std::invalid_argument("point arity mismatch");
            for (const Rat& c : p)
                if (c == 0) throw std::invalid_argument("point coordinate must be nonzero");
        }
        for (size_t i = 0; i < points.size(); ++i)
            for (size_t j = i + 1; j < points.size(); ++j)
                if (points[i] == points[j]) throw std::invalid_argument("support points must be distinct");
        for (const AffineWeight& w : weights) {
            if (!is_dominant(rs, w)) throw std::invalid_argument("pi-function value not dominant");
            if (w.level <= 0) throw std::invalid_argument("pi-function value needs positive level");
        }
    }

    // evaluation of the monomial t^m at support point i
    Rat ev(size_t i, const std::vector<long>& m) const { return eval_monomial(points[i], m); }
};

}  // namespace toroidal
