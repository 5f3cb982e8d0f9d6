#pragma once

#include "toroidal/pimod.hpp"
#include "toroidal/toroidal_algebra.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace toroidal {

using json = nlohmann::json;

// rationals travel as [numerator, denominator] integer pairs
inline json rat_to_json(const Rat& r) {
    return json::array({numerator(r).convert_to<long long>(), denominator(r).convert_to<long long>()});
}

inline Rat rat_from_json(const json& j) {
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
        throw std::invalid_argument("expected [numerator, denominator]");
    long long den = j[1].get<long long>();
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rat(j[0].get<long long>()) / Rat(den);
}

inline json weight_to_json(const AffineWeight& w) {
    // [level, finite coefficients..., delta1]
    json a = json::array();
    a.push_back(to_int(w.level).convert_to<long long>());
    for (long c : w.finite.omega) a.push_back(c);
    a.push_back(rat_to_json(w.delta1));
    return a;
}

inline json pi_to_json(const PiFunction& pi) {
    json points = json::array();
    for (const auto& p : pi.points) {
        json pt = json::array();
        for (const Rat& c : p) pt.push_back(rat_to_json(c));
        points.push_back(pt);
    }
    json weights = json::array();
    for (const AffineWeight& w : pi.weights) {
        json jw;
        jw["level"] = to_int(w.level).convert_to<long long>();
        jw["finite"] = w.finite.omega;
        jw["delta1"] = rat_to_json(w.delta1);
        weights.push_back(jw);
    }
    return json{{"k", pi.k}, {"points", points}, {"weights", weights}};
}

inline PiFunction pi_from_json(const json& j, size_t rank) {
    PiFunction pi;
    if (!j.contains("k") || !j.contains("points") || !j.contains("weights"))
        throw std::invalid_argument("pi-function needs k, points, weights");
    pi.k = j.at("k").get<size_t>();
    for (const json& pt : j.at("points")) {
        std::vector<Rat> p;
        for (const json& c : pt) p.push_back(rat_from_json(c));
        pi.points.push_back(std::move(p));
    }
    for (const json& jw : j.at("weights")) {
        AffineWeight w;
        w.level = Rat(jw.at("level").get<long long>());
        w.finite.omega = jw.at("finite").get<std::vector<long>>();
        if (w.finite.omega.size() != rank) throw std::invalid_argument("finite part has wrong rank");
        w.delta1 = jw.contains("delta1") ? rat_from_json(jw.at("delta1")) : Rat(0);
        pi.weights.push_back(std::move(w));
    }
    return pi;
}

inline json element_to_json(const FiniteLieAlgebra& g, const ToroidalElement& e) {
    json loop = json::array();
    for (const auto& [key, c] : e.loop) {
        json t;
        t["elt"] = g.name(key.first);
        t["m"] = key.second;
        t["coeff"] = rat_to_json(c);
        loop.push_back(t);
    }
    json central = json::array();
    for (const auto& [r, c] : e.central) {
        json t;
        t["r"] = r;
        json cc = json::array();
        for (const Rat& x : c) cc.push_back(rat_to_json(x));
        t["c"] = cc;
        central.push_back(t);
    }
    json deriv = json::array();
    for (const Rat& x : e.deriv) deriv.push_back(rat_to_json(x));
    return json{{"loop", loop}, {"central", central}, {"deriv", deriv}};
}

inline ToroidalElement element_from_json(const ToroidalAlgebra& t, const json& j) {
    ToroidalElement e = t.zero();
    if (j.contains("loop"))
        for (const json& term : j.at("loop")) {
            size_t fin = t.finite().index_of(term.at("elt").get<std::string>());
            std::vector<long> m = term.at("m").get<std::vector<long>>();
            Rat c = term.contains("coeff") ? rat_from_json(term.at("coeff")) : Rat(1);
            e = t.add(e, t.loop_element(fin, m, c));
        }
    if (j.contains("central"))
        for (const json& term : j.at("central")) {
            CentralVector v;
            v.degree = term.at("r").get<std::vector<long>>();
            for (const json& c : term.at("c")) v.coeffs.push_back(rat_from_json(c));
            e = t.add(e, t.central_element(v));
        }
    if (j.contains("deriv")) {
        std::vector<json> d = j.at("deriv").get<std::vector<json>>();
        for (size_t i = 0; i < d.size(); ++i) e = t.add(e, t.derivation(i, rat_from_json(d[i])));
    }
    return e;
}

inline json lattice_to_json(const lattice::Lattice& l) {
    json basis = json::array();
    for (size_t i = 0; i < l.basis.rows(); ++i) {
        json row = json::array();
        for (size_t j = 0; j < l.basis.cols(); ++j) row.push_back(l.basis(i, j).convert_to<long long>());
        basis.push_back(row);
    }
    return json{{"ambient_rank", l.ambient_rank}, {"basis", basis}};
}

}  // namespace toroidal
