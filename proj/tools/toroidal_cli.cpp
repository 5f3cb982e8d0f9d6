// Command-line front end: exact computations on toroidal Lie algebras with
// JSON input/output. All persisted numbers are integers or [num, den] pairs.

#include "toroidal/freudenthal.hpp"
#include "toroidal/garland.hpp"
#include "toroidal/json_io.hpp"
#include "toroidal/pimod.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>

namespace {

using namespace toroidal;

constexpr long kMaxDepth = 8;
constexpr long kMaxWindow = 6;
constexpr long kMaxBox = 8;
constexpr long kMaxGarland = 12;
constexpr size_t kMaxRank = 2;
constexpr long kMaxLevel = 3;
constexpr size_t kMaxFactors = 3;

struct CapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Context {
    RootSystem rs;
    FiniteLieAlgebra g;
    AffineAlgebra alg;
    explicit Context(const std::string& code)
        : rs(RootSystem::from_code(code)), g(rs), alg(rs, g) {}
    Context(const Context&) = delete;
};

void check_cap(bool ok, const std::string& what) {
    if (!ok) throw CapError("cap exceeded: " + what);
}

json read_json_arg(const std::string& arg) {
    std::string text = arg;
    if (!arg.empty() && arg[0] != '{' && arg[0] != '[') {
        std::ifstream in(arg);
        if (!in) throw std::invalid_argument("cannot open " + arg);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    return json::parse(text);
}

void emit(const json& j, const std::string& out_path) {
    std::string s = j.dump(2);
    s += "\n";
    if (out_path.empty()) {
        std::cout << s;
    } else {
        std::ofstream out(out_path);
        out << s;
    }
}

void emit_text(const std::string& s, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << s << "\n";
    } else {
        std::ofstream out(out_path);
        out << s << "\n";
    }
}

int cmd_rootsys(const std::string& type, const std::string& out) {
    RootSystem rs = RootSystem::from_code(type);
    json j;
    j["type"] = rs.code();
    j["rank"] = rs.rank();
    j["root_count"] = rs.root_count();
    json cart = json::array();
    for (size_t i = 0; i < rs.rank(); ++i) {
        json row = json::array();
        for (size_t k = 0; k < rs.rank(); ++k) row.push_back(rs.cartan()(i, k).convert_to<long long>());
        cart.push_back(row);
    }
    j["cartan"] = cart;
    j["theta"] = rs.theta();
    j["theta_short"] = rs.theta_short();
    j["simply_laced"] = rs.simply_laced();
    json classes = json::array();
    for (const GammaClass& c : rs.gamma_classes()) classes.push_back(c.rep.omega);
    j["gamma_classes"] = classes;
    emit(j, out);
    return 0;
}

int cmd_affine_mult(const std::string& type, long level, const std::vector<long>& finite,
                    const std::string& delta1, long depth, const std::string& oracle,
                    const std::string& out) {
    check_cap(depth >= 0 && depth <= kMaxDepth, "depth");
    Context ctx(type);
    check_cap(ctx.rs.rank() <= kMaxRank, "rank");
    check_cap(level >= 1 && level <= kMaxLevel, "level");
    AffineWeight hw;
    hw.level = level;
    hw.finite.omega = finite;
    if (hw.finite.omega.empty()) hw.finite.omega.assign(ctx.rs.rank(), 0);
    if (hw.finite.omega.size() != ctx.rs.rank()) throw std::invalid_argument("finite part has wrong rank");
    hw.delta1 = rat_from_json(json::parse(delta1));
    if (!is_dominant(ctx.rs, hw)) throw std::invalid_argument("highest weight not dominant");

    json table = json::array();
    if (oracle == "freudenthal") {
        FreudenthalAffine fr(ctx.rs, hw);
        TruncatedModule probe(ctx.alg, hw, depth);  // weight list only
        for (const auto& [w, m] : probe.weight_table()) {
            (void)m;
            json e;
            e["weight"] = weight_to_json(w);
            e["mult"] = fr.mult_weight(w, depth).convert_to<long long>();
            table.push_back(e);
        }
    } else {
        TruncatedModule x(ctx.alg, hw, depth);
        std::unique_ptr<FreudenthalAffine> fr;
        if (oracle == "both") fr = std::make_unique<FreudenthalAffine>(ctx.rs, hw);
        for (const auto& [w, m] : x.weight_table()) {
            json e;
            e["weight"] = weight_to_json(w);
            e["mult"] = m.convert_to<long long>();
            if (fr && fr->mult_weight(w, depth) != m)
                throw std::logic_error("oracle disagreement in multiplicity table");
            table.push_back(e);
        }
    }
    json j;
    j["highest_weight"] = weight_to_json(hw);
    j["depth"] = depth;
    j["oracle"] = oracle;
    j["multiplicities"] = table;
    emit(j, out);
    return 0;
}

int cmd_garland(long s, const std::string& out) {
    check_cap(s >= 0 && s <= kMaxGarland, "garland degree");
    emit_text(hpoly_to_string(garland_p(s)), out);
    return 0;
}

int cmd_gcdmat(const std::vector<long long>& n, const std::string& out) {
    check_cap(n.size() >= 1 && n.size() <= 8, "vector length");
    std::vector<Int> v(n.begin(), n.end());
    IntMatrix b = lattice::gcd_unimodular(v);
    Int g = 0;
    for (size_t j = 0; j < v.size(); ++j) g += b(0, j) * v[j];
    json rows = json::array();
    for (size_t i = 0; i < b.rows(); ++i) {
        json row = json::array();
        for (size_t j = 0; j < b.cols(); ++j) row.push_back(b(i, j).convert_to<long long>());
        rows.push_back(row);
    }
    json j;
    j["gcd"] = g.convert_to<long long>();
    j["matrix"] = rows;
    j["det"] = det(b).convert_to<long long>();
    emit(j, out);
    return 0;
}

int cmd_gpi(const std::string& type, const std::string& pi_arg, long box, const std::string& out) {
    check_cap(box >= 2 && box <= kMaxBox, "box");
    Context ctx(type);
    PiFunction pi = pi_from_json(read_json_arg(pi_arg), ctx.rs.rank());
    pi.validate(ctx.rs);
    lattice::Lattice l = compute_G_pi(ctx.alg, pi, box);
    json j = lattice_to_json(l);
    j["quotient_order"] = l.index().convert_to<long long>();
    json reps = json::array();
    for (const auto& r : lattice::quotient_reps(l)) {
        json row = json::array();
        for (const Int& x : r) row.push_back(x.convert_to<long long>());
        reps.push_back(row);
    }
    j["reps"] = reps;
    emit(j, out);
    return 0;
}

void check_pi_caps(const RootSystem& rs, const PiFunction& pi) {
    check_cap(rs.rank() <= kMaxRank, "rank");
    check_cap(pi.support_size() <= kMaxFactors, "tensor factors");
    for (const AffineWeight& w : pi.weights) check_cap(w.level <= kMaxLevel, "level");
}

int cmd_build_l(const std::string& type, const std::string& pi_arg, long depth, long window,
                const std::string& out) {
    check_cap(depth >= 0 && depth <= kMaxDepth, "depth");
    check_cap(window >= 1 && window <= kMaxWindow, "window");
    Context ctx(type);
    PiFunction pi = pi_from_json(read_json_arg(pi_arg), ctx.rs.rank());
    pi.validate(ctx.rs);
    check_pi_caps(ctx.rs, pi);
    LoopedModule l(ctx.alg, pi, depth, window);
    json weights = json::array();
    for (const auto& [jk, tuples] : l.base().spaces()) {
        json e;
        json w = json::array();
        w.push_back(to_int(pi.wt(ctx.rs).level).convert_to<long long>());
        for (long c : jk.first) w.push_back(c);
        w.push_back(rat_to_json(jk.second));
        e["weight"] = w;
        e["dim"] = tuples.size();
        weights.push_back(e);
    }
    json j;
    j["pi"] = pi_to_json(pi);
    j["depth"] = depth;
    j["window"] = window;
    j["slice_count"] = step_box(pi.k - 1, window).size();
    j["weights"] = weights;  // per monomial slice; dims are slice independent
    emit(j, out);
    return 0;
}

int cmd_decompose(const std::string& type, const std::string& pi_arg, long depth, long window,
                  long box, const std::string& out) {
    check_cap(depth >= 0 && depth <= kMaxDepth, "depth");
    check_cap(window >= 1 && window <= kMaxWindow, "window");
    check_cap(box >= 2 && box <= kMaxBox, "box");
    Context ctx(type);
    PiFunction pi = pi_from_json(read_json_arg(pi_arg), ctx.rs.rank());
    pi.validate(ctx.rs);
    check_pi_caps(ctx.rs, pi);
    lattice::Lattice gpi = compute_G_pi(ctx.alg, pi, box);
    LoopedModule l(ctx.alg, pi, depth, window);
    std::vector<Component> comps = decompose(l, gpi, 2);
    json cosets = json::array();
    json dims;
    for (const Component& c : comps) {
        json rep = json::array();
        std::string key = "g=[";
        for (size_t i = 0; i < c.coset.size(); ++i) {
            rep.push_back(c.coset[i].convert_to<long long>());
            if (i) key += ",";
            key += c.coset[i].str();
        }
        key += "]";
        cosets.push_back(rep);
        json entries = json::array();
        for (const auto& [sk, d] : c.dims) {
            json e;
            json w = json::array();
            for (long x : sk.first.first) w.push_back(x);
            w.push_back(rat_to_json(sk.first.second));
            e["weight"] = w;
            e["m"] = sk.second;
            e["dim"] = d;
            entries.push_back(e);
        }
        dims[key] = json{{"total", c.total}, {"slices", entries}};
    }
    json j;
    j["G_pi"] = lattice_to_json(gpi);
    j["cosets"] = cosets;
    j["dims"] = dims;
    emit(j, out);
    return 0;
}

int cmd_iso_check(const std::string& type, const std::string& arg, long box, const std::string& out) {
    check_cap(box >= 2 && box <= kMaxBox, "box");
    Context ctx(type);
    json spec = read_json_arg(arg);
    auto parse_side = [&](const json& side) {
        IsoInstance inst;
        inst.pi = pi_from_json(side.at("pi"), ctx.rs.rank());
        inst.pi.validate(ctx.rs);
        inst.g = side.contains("g") ? side.at("g").get<std::vector<long>>()
                                    : std::vector<long>(inst.pi.k - 1, 0);
        return inst;
    };
    IsoInstance a = parse_side(spec.at("a"));
    IsoInstance b = parse_side(spec.at("b"));
    IsoResult r = iso_check(ctx.alg, a, b, box);
    json j;
    j["isomorphic"] = r.isomorphic;
    if (r.isomorphic) {
        json w = json::array();
        for (const Rat& x : r.witness) w.push_back(rat_to_json(x));
        j["witness"] = w;
    } else {
        j["reason"] = r.reason;
    }
    emit(j, out);
    return 0;
}

Int gcd_vec(const std::vector<Int>& n) {
    Int g = 0;
    for (const Int& x : n) g = gcd_int(g, x);
    return g;
}

// compact invariant battery; exit nonzero on any failure
int cmd_verify() {
    size_t failures = 0;
    auto report = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "ok   " : "FAIL ") << name << "\n";
        if (!ok) ++failures;
    };
    std::mt19937_64 rng(20240811);

    {   // gcd unimodular equations on random vectors
        bool ok = true;
        std::uniform_int_distribution<long> coef(-50, 50), len(1, 5);
        for (int t = 0; t < 50 && ok; ++t) {
            size_t k = len(rng);
            std::vector<Int> n(k);
            bool nz = false;
            for (auto& x : n) {
                x = coef(rng);
                if (x != 0) nz = true;
            }
            if (!nz) continue;
            IntMatrix b = lattice::gcd_unimodular(n);
            Int g = 0;
            for (size_t j = 0; j < k; ++j) g += b(0, j) * n[j];
            if (g <= 0 || g != gcd_vec(n)) ok = false;
            for (size_t i = 1; i < k && ok; ++i) {
                Int z = 0;
                for (size_t j = 0; j < k; ++j) z += b(i, j) * n[j];
                if (z != 0) ok = false;
            }
            Int d = det(b);
            if (d != 1 && d != -1) ok = false;
        }
        report("lattice: gcd unimodular matrices", ok);
    }
    {   // hnf idempotence
        bool ok = true;
        std::uniform_int_distribution<long> coef(-6, 6);
        for (int t = 0; t < 25 && ok; ++t) {
            std::vector<std::vector<Int>> gens(3, std::vector<Int>(2));
            for (auto& r : gens)
                for (auto& x : r) x = coef(rng);
            lattice::Lattice l = lattice::hnf(gens, 2);
            std::vector<std::vector<Int>> rows;
            for (size_t i = 0; i < l.basis.rows(); ++i) rows.push_back(l.basis.row(i));
            lattice::Lattice l2 = lattice::hnf(rows, 2);
            if (!(l.basis == l2.basis)) ok = false;
        }
        report("lattice: hnf idempotent", ok);
    }
    {   // root counts and dimension formula
        bool ok = true;
        ok = ok && RootSystem('A', 2).root_count() == 6;
        ok = ok && RootSystem('G', 2).root_count() == 12;
        ok = ok && RootSystem('B', 2).root_count() == 8;
        RootSystem a2('A', 2);
        for (int t = 0; t < 5 && ok; ++t) {
            FiniteWeight l{{static_cast<long>(rng() % 3), static_cast<long>(rng() % 3)}};
            Int dim = 0;
            for (const auto& [w, m] : a2.finite_multiplicities(l)) dim += m;
            if (dim != a2.weyl_dimension(l)) ok = false;
        }
        report("rootsys: multiplicities match Weyl dimension", ok);
    }
    {   // Garland recursion vs series
        bool ok = true;
        for (long s = 0; s <= 5 && ok; ++s) {
            HPoly p = garland_p(s);
            for (const auto& [m, c] : p)
                if (hpoly_mono_degree(m) != s) ok = false;
        }
        HPoly p2 = garland_p(2);
        HPoly expect;
        hpoly_add(expect, {2}, Rat(1, 2));
        hpoly_add(expect, {0, 1}, Rat(-1, 2));
        ok = ok && (p2 == expect);
        report("garland: Newton recursion", ok);
    }
    {   // toroidal Jacobi on random triples
        RootSystem a1('A', 1);
        FiniteLieAlgebra g(a1);
        ToroidalAlgebra tor(a1, g, 2);
        std::uniform_int_distribution<long> exp(-2, 2), pick(0, 2);
        auto rnd_elt = [&]() {
            ToroidalElement e = tor.zero();
            for (int i = 0; i < 2; ++i) {
                std::vector<long> m{exp(rng), exp(rng)};
                e = tor.add(e, tor.loop_element(pick(rng), m, Rat(exp(rng))));
            }
            e = tor.add(e, tor.derivation(pick(rng) % 2, Rat(exp(rng))));
            return e;
        };
        bool ok = true;
        for (int t = 0; t < 100 && ok; ++t) {
            ToroidalElement x = rnd_elt(), y = rnd_elt(), z = rnd_elt();
            ToroidalElement j1 = tor.bracket(x, tor.bracket(y, z));
            ToroidalElement j2 = tor.bracket(y, tor.bracket(z, x));
            ToroidalElement j3 = tor.bracket(z, tor.bracket(x, y));
            if (!tor.add(tor.add(j1, j2), j3).zero()) ok = false;
        }
        report("toroidal: Jacobi identity", ok);
    }
    {   // affine oracle agreement at small depth
        RootSystem a1('A', 1);
        FiniteLieAlgebra g(a1);
        AffineAlgebra alg(a1, g);
        AffineWeight basic{Rat(1), a1.zero_weight(), Rat(0)};
        TruncatedModule x(alg, basic, 4);
        FreudenthalAffine fr(a1, basic);
        bool ok = true;
        for (const auto& [w, m] : x.weight_table())
            if (fr.mult_weight(w, 4) != m) ok = false;
        report("affine: Gram and Freudenthal oracles agree", ok);
    }
    {   // classification pipeline on the two-point example
        RootSystem a1('A', 1);
        FiniteLieAlgebra g(a1);
        AffineAlgebra alg(a1, g);
        PiFunction pi;
        pi.k = 2;
        pi.points = {{Rat(1)}, {Rat(-1)}};
        pi.weights = {AffineWeight{Rat(1), a1.zero_weight(), Rat(0)},
                      AffineWeight{Rat(1), a1.zero_weight(), Rat(0)}};
        lattice::Lattice gpi = compute_G_pi(alg, pi, 4);
        bool ok = gpi.basis(0, 0) == 2 && gpi.index() == 2;
        LoopedModule l(alg, pi, 1, 4);
        ok = ok && highest_vectors(l, 2, 2).nonempty();
        ok = ok && central_triviality_check(l).ok();
        std::vector<Component> comps = decompose(l, gpi, 2);
        ok = ok && comps.size() == 2;
        report("pimod: two-point pipeline", ok);
    }
    if (failures) {
        std::cout << failures << " failure(s)\n";
        return 1;
    }
    std::cout << "all invariants hold\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact computations on toroidal Lie algebras"};
    app.require_subcommand(1);

    std::string type = "A1", out_path, json_arg, oracle = "gram", delta1 = "0";
    long depth = 4, window = 4, box = 4, s = 2, level = 1;
    std::vector<long> finite;
    std::vector<long long> gcd_args;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--out", out_path, "write output to a file instead of stdout");
        c->add_option("--type", type, "root system code, e.g. A1, A2, G2");
    };

    CLI::App* c_root = app.add_subcommand("rootsys", "finite root system data");
    add_common(c_root);

    CLI::App* c_mult = app.add_subcommand("affine-mult", "truncated standard module multiplicities");
    add_common(c_mult);
    c_mult->add_option("--level", level, "level (value on K1)");
    c_mult->add_option("--finite", finite, "finite part in the fundamental weight basis");
    c_mult->add_option("--delta1", delta1, "delta1 coefficient, integer or [num,den]");
    c_mult->add_option("--depth", depth, "truncation depth");
    c_mult->add_option("--oracle", oracle, "gram | freudenthal | both");

    CLI::App* c_gar = app.add_subcommand("garland", "Garland polynomial p^s");
    c_gar->add_option("--s", s, "degree")->required();
    c_gar->add_option("--out", out_path, "write output to a file instead of stdout");

    CLI::App* c_gcd = app.add_subcommand("gcdmat", "unimodular matrix taking n to (gcd,0,..,0)");
    c_gcd->add_option("n", gcd_args, "integer vector")->required();
    c_gcd->add_option("--out", out_path, "write output to a file instead of stdout");

    CLI::App* c_gpi = app.add_subcommand("gpi", "the lattice G_pi and its quotient");
    add_common(c_gpi);
    c_gpi->add_option("--json", json_arg, "pi-function (file path or inline JSON)")->required();
    c_gpi->add_option("--box", box, "search box radius");

    CLI::App* c_build = app.add_subcommand("build-l", "construct L(X_pi) and report weight dims");
    add_common(c_build);
    c_build->add_option("--json", json_arg, "pi-function")->required();
    c_build->add_option("--depth", depth, "factor truncation depth");
    c_build->add_option("--window", window, "monomial window radius");

    CLI::App* c_dec = app.add_subcommand("decompose", "decompose L(X_pi) into components");
    add_common(c_dec);
    c_dec->add_option("--json", json_arg, "pi-function")->required();
    c_dec->add_option("--depth", depth, "factor truncation depth");
    c_dec->add_option("--window", window, "monomial window radius");
    c_dec->add_option("--box", box, "G_pi search box radius");

    CLI::App* c_iso = app.add_subcommand("iso-check", "isomorphism test for (pi, g) pairs");
    add_common(c_iso);
    c_iso->add_option("--json", json_arg, "JSON {a:{pi,g}, b:{pi,g}}")->required();
    c_iso->add_option("--box", box, "G_pi search box radius");

    app.add_subcommand("verify", "run the invariant suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_root->parsed()) return cmd_rootsys(type, out_path);
        if (c_mult->parsed()) return cmd_affine_mult(type, level, finite, delta1, depth, oracle, out_path);
        if (c_gar->parsed()) return cmd_garland(s, out_path);
        if (c_gcd->parsed()) return cmd_gcdmat(gcd_args, out_path);
        if (c_gpi->parsed()) return cmd_gpi(type, json_arg, box, out_path);
        if (c_build->parsed()) return cmd_build_l(type, json_arg, depth, window, out_path);
        if (c_dec->parsed()) return cmd_decompose(type, json_arg, depth, window, box, out_path);
        if (c_iso->parsed()) return cmd_iso_check(type, json_arg, box, out_path);
        return cmd_verify();
    } catch (const CapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: malformed JSON: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
