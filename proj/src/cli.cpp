#include "gridhom/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <random>

#include "CLI11.hpp"

#include "gridhom/homology.hpp"
#include "gridhom/library.hpp"
#include "gridhom/maps.hpp"
#include "gridhom/report.hpp"

namespace gridhom {

namespace {

using nlohmann::json;

struct Opts {
    std::string knot;
    std::string variant;
    std::string window;
    std::string format = "human";
    std::string suite;
    std::vector<std::string> moves;
    std::uint64_t seed = 1;
    int rmax = 4;
    int threads = 1;
    int n = 0;
    int col = 0;
    int vmax = 3;
    long samples = 500;
    int diagrams = 20;
    bool exhaustive = false;
    bool rows = false;
    bool check = false;
};

struct UsageError : GridError {
    explicit UsageError(const std::string& m) : GridError("UsageError", m) {}
};

// Alexander value as written on the command line: integer or p/2
int parse_half(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return 2 * std::stoi(s);
        if (s.substr(slash + 1) != "2") throw UsageError("bad half-integer " + s);
        return std::stoi(s.substr(0, slash));
    } catch (const std::logic_error&) {
        throw UsageError("bad number " + s);
    }
}

Window make_window(const Opts& o, const GridDiagram& g) {
    Window w = default_window(g, o.vmax);
    if (o.window.empty()) return w;
    std::vector<std::string> parts;
    std::string cur;
    for (char c : o.window) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (parts.size() < 2 || parts.size() > 3) throw UsageError("window is LO:HI or LO:HI:VMAX");
    w.a2_lo = parse_half(parts[0]);
    w.a2_hi = parse_half(parts[1]);
    if (parts.size() == 3) w.vmax = std::stoi(parts[2]);
    if (w.a2_lo > w.a2_hi) throw UsageError("window low end above high end");
    return w;
}

void put_window(Report& r, const Window& w) {
    r.setting("window", json{{"a_lo", half_value(w.a2_lo)}, {"a_hi", half_value(w.a2_hi)}, {"vmax", w.vmax}});
}

GridDiagram need_knot(const Opts& o) {
    if (o.knot.empty()) throw UsageError("--knot is required");
    return load_diagram(o.knot);
}

ReportCheck as_check(const MapCheck& c) { return {c.name, c.checked, c.violations}; }

std::string table_key(const std::string& v) {
    if (v == "gc_minus" || v == "collapsed_gc_minus") return "gc_minus";
    if (v == "gc_hat") return "gc_hat";
    if (v == "gcl" || v == "collapsed_gcl") return "gcl";
    if (v == "gcl_z" || v == "collapsed_gcl_z") return "gcl_z";
    throw UsageError("unknown variant " + v);
}

ReportTable homology_table(const HomologyReport& h) {
    ReportTable t;
    t.name = h.variant;
    bool z = h.variant == "gcl_z", v = h.variant == "gcl" || z;
    t.columns = {"rank"};
    if (z) t.columns.push_back("torsion");
    t.columns.push_back("u_rank");
    if (v && !z) t.columns.push_back("v_rank");
    for (auto& r : h.rows) {
        ReportTable::Row row{r.m, r.a2, {r.rank}};
        if (z) row.values.push_back(r.torsion);
        row.values.push_back(r.u_rank);
        if (v && !z) row.values.push_back(r.v_rank);
        t.rows.push_back(row);
    }
    return t;
}

void cmd_homology(const Opts& o, Report& rep) {
    GridDiagram g = need_knot(o);
    rep.set_diagram(g);
    std::string key = table_key(o.variant.empty() ? "gc_minus" : o.variant);
    Window w = make_window(o, g);
    put_window(rep, w);
    rep.setting("variant", key);
    Homology h(g, o.threads);
    rep.add_table(homology_table(h.table(key, w)));
}

ReportCheck uct_check(const Homology& h, const Window& w) {
    ReportCheck c{"universal_coefficients"};
    auto even = [&](int m, int a2) {
        int t = 0;
        for (auto& s : h.ghl_z().hom_z(m, a2).torsion) t += (s.back() - '0') % 2 == 0;
        return t;
    };
    for (int a2 = w.a2_hi; a2 >= w.a2_lo; --a2) {
        auto [lo, hi] = h.ghl().big().m_range(a2);
        if (lo > hi) continue;
        for (int m = lo - 1; m <= hi + 2 * w.vmax; ++m) {
            ++c.checked;
            int mod2 = h.ghl().dim(m, a2), z = h.ghl_z().hom_z(m, a2).free_rank + even(m, a2) + even(m - 1, a2);
            if (mod2 != z)
                c.violations.push_back("(" + std::to_string(m) + "," + half_text(a2) + "): mod 2 " + std::to_string(mod2) +
                                       ", from Z " + std::to_string(z));
        }
    }
    return c;
}

void cmd_ghl(const Opts& o, Report& rep) {
    GridDiagram g = need_knot(o);
    rep.set_diagram(g);
    Window w = make_window(o, g);
    put_window(rep, w);
    Homology h(g, o.threads);
    rep.add_table(homology_table(h.table("gcl", w)));
    rep.add_table(homology_table(h.table("gcl_z", w)));
    rep.add_check(uct_check(h, w));
}

void cmd_invariants(const Opts& o, Report& rep) {
    GridDiagram g = need_knot(o);
    rep.set_diagram(g);
    Window w = make_window(o, g);
    put_window(rep, w);
    Homology h(g, o.threads);
    rep.add_table(homology_table(h.table("gc_hat", w)));
    if (h.components() != 1) {
        rep.result("components", h.components());
        rep.result("note", "tau-type invariants are defined for knots");
        return;
    }
    auto inv = h.invariants(w);
    rep.result("tau", inv.tau);
    rep.result("tau_plus", inv.tau_plus);
    rep.result("tau_plus_u", inv.tau_plus_u);
    rep.result("rho", inv.rho);
    auto dec = h.decompose_minus(w);
    rep.result("tower", json{{"m", dec.tower_m}, {"a", half_value(dec.tower_a2)}});
    json tors = json::array();
    for (auto& t : dec.torsion) tors.push_back({{"m", t.d}, {"a", half_value(t.s2)}, {"u_order", t.n}});
    rep.result("u_torsion", tors);
    auto d1 = h.del1_star(w);
    rep.result("del1_star",
               json{{"identically_zero", d1.identically_zero},
                    {"squares_to_zero", d1.squares_to_zero},
                    {"image_u_torsion", d1.image_u_torsion},
                    {"representative_independent", d1.representative_independent},
                    {"max_u_power_on_image", d1.max_u_power_on_image},
                    {"max_u_power_into_tower", d1.max_u_power_into_tower}});
    ReportTable t{"del1_star_rank", {"rank"}, {}};
    for (auto [m, a2, r] : d1.rank) t.rows.push_back({m, a2, {r}});
    rep.add_table(t);
    ReportTable hh{"del1_star_homology", {"dim"}, {}};
    for (auto [m, a2, r] : d1.homology) hh.rows.push_back({m, a2, {r}});
    rep.add_table(hh);
    ReportCheck c{"del1_star_structure", 1, {}};
    if (!d1.squares_to_zero) c.violations.push_back("del1* does not square to zero");
    if (!d1.image_u_torsion) c.violations.push_back("image of del1* is not U-torsion");
    if (!d1.representative_independent) c.violations.push_back("del1* depends on representatives");
    rep.add_check(c);
}

void cmd_spectral(const Opts& o, Report& rep) {
    GridDiagram g = need_knot(o);
    rep.set_diagram(g);
    Window w = make_window(o, g);
    put_window(rep, w);
    rep.setting("rmax", o.rmax);
    Homology h(g, o.threads);
    auto s = h.spectral(w, o.rmax);
    rep.result("collapsed_at", s.collapsed_at);
    rep.result("converges_to_ghl", s.converges_to_ghl);
    for (auto& p : s.pages) {
        ReportTable t{"E" + std::to_string(p.r), {"p", "dim"}, {}};
        for (auto [m, a2, fp, d] : p.dims) t.rows.push_back({m, a2, {fp, d}});
        rep.add_table(t);
    }
    ReportCheck c{"converges_to_ghl", 1, {}};
    if (!s.converges_to_ghl) c.violations.push_back("last page differs from GHL");
    rep.add_check(c);
}

std::vector<GridDiagram> all_diagrams(int n) {
    std::vector<GridDiagram> out;
    auto ps = all_states(n);
    for (auto& o : ps)
        for (auto& x : ps) {
            bool ok = true;
            for (int i = 0; i < n; ++i) ok = ok && (n == 1 || o[i] != x[i]);
            if (ok) out.push_back(make_diagram(o, x));
        }
    return out;
}

GridDiagram random_diagram(int n, std::mt19937_64& rng) {
    for (;;) {
        Perm o = unrank_perm(n, rng() % factorial(n)), x = unrank_perm(n, rng() % factorial(n));
        bool ok = true;
        for (int i = 0; i < n; ++i) ok = ok && (n == 1 || o[i] != x[i]);
        if (ok) return make_diagram(o, x);
    }
}

void skein_into(const GridDiagram& g, int col, std::uint64_t seed, int vmax, Report& rep) {
    SkeinQuadruple q = skein_quadruple(g, col);
    for (auto* d : {&q.plus, &q.minus, &q.zero, &q.zero_prime}) rep.set_diagram(*d);
    rep.result("components", json{{"plus", q.l}, {"zero", q.l0}, {"minus", link_components(q.minus).count}});
    rep.result("crossing", json{{"column", q.col}, {"row", q.row}, {"input_was_plus", q.input_was_plus}});
    auto ms = skein_maps_suite(q, seed);
    for (auto& c : ms.checks) rep.add_check(as_check(c));
    rep.result("composite_annuli", ms.annuli);
    json br = json::array();
    for (auto& c : ms.bridge) br.push_back({{"name", c.name}, {"checked", c.checked}, {"violations", c.violations.size()}});
    rep.result("bridge_identities", br);
    auto les = skein_les_check(q, vmax, seed);
    for (auto& c : les.checks) rep.add_check(as_check(c));
    ReportTable t{"les", {"dim_plus", "dim_minus", "dim_cone", "rank_in", "rank_out", "rank_conn", "exact"}, {}};
    for (auto& r : les.rows)
        if (r.dim_plus || r.dim_minus || r.dim_cone)
            t.rows.push_back({r.m, r.a2, {r.dim_plus, r.dim_minus, r.dim_cone, r.rank_in, r.rank_out, r.rank_conn, r.exact}});
    rep.add_table(t);
    ReportTable l0{"cone_vs_zero", {"cone", "expected"}, {}};
    for (auto [m, a2, a, b] : les.l0_table) l0.rows.push_back({m, a2, {a, b}});
    rep.add_table(l0);
    rep.result("exact", les.exact());
    rep.result("tensor_j", les.tensor_j);
    rep.result("l0_shift", json{{"m", les.l0_shift.first}, {"a", half_value(les.l0_shift.second)}});
    rep.result("plus_shift", json{{"m", les.plus_shift.first}, {"a", half_value(les.plus_shift.second)}});
    rep.result("minus_shift", json{{"m", les.minus_shift.first}, {"a", half_value(les.minus_shift.second)}});
    rep.result("v_exponent", "R read as T");
    json jm = json::array();
    for (auto& [k, c] : j_module()) jm.push_back({{"m", k.first}, {"a", half_value(k.second)}, {"dim", c}});
    rep.result("j_module", jm);
    if (!les.exact()) rep.add_violation("ExactnessFailure: " + les.failure);
    if (!les.l0_match) rep.add_violation("cone homology does not match the resolved diagram");
}

void cmd_verify(const Opts& o, Report& rep) {
    const std::string& s = o.suite;
    rep.setting("suite", s);
    rep.setting("seed", o.seed);
    if (s == "d_squared" || s == "homotopy" || s == "d1_relations" || s == "homogeneity") {
        std::vector<GridDiagram> gs;
        if (!o.knot.empty()) {
            gs.push_back(load_diagram(o.knot));
        } else {
            if (o.n <= 0) throw UsageError("--n or --knot is required");
            if (o.exhaustive) {
                gs = all_diagrams(o.n);
            } else {
                std::mt19937_64 rng(o.seed);
                for (int i = 0; i < o.diagrams; ++i) gs.push_back(random_diagram(o.n, rng));
            }
        }
        std::vector<Variant> vs;
        if (!o.variant.empty()) {
            vs.push_back(parse_variant(o.variant));
        } else {
            vs = {Variant::gc_minus, Variant::gc_hat, Variant::gcl, Variant::gcl_z, Variant::collapsed_gc_minus,
                  Variant::collapsed_gcl, Variant::collapsed_gcl_z};
        }
        rep.setting("exhaustive", o.exhaustive);
        rep.setting("diagram_count", (long)gs.size());
        if (gs.size() == 1) rep.set_diagram(gs[0]);
        for (Variant v : vs) {
            ReportCheck c{std::string(s) + ":" + variant_name(v)};
            std::uint64_t k = 0;
            for (auto& g : gs) {
                IdentityReport r;
                try {
                    r = verify_identities(make_complex(g, v, o.seed), s, o.exhaustive || !o.knot.empty(), o.samples, o.seed + k++);
                } catch (const GridError& e) {
                    if (e.kind == "VariantMismatch" && o.variant.empty()) break;
                    throw;
                }
                c.checked += r.checked;
                for (auto& x : r.violations) c.violations.push_back(to_text(g) + " " + x);
            }
            rep.add_check(c);
        }
    } else if (s == "signs") {
        int n = o.n;
        if (n <= 0 && !o.knot.empty()) n = load_diagram(o.knot).n;
        if (n <= 0) throw UsageError("--n is required");
        std::mt19937_64 rng(o.seed);
        GridDiagram g = random_diagram(n, rng);
        auto r = verify_sign_axioms(g, SignAssignment(n, o.seed), o.exhaustive, o.samples, o.seed);
        rep.result("domains", r.domains);
        ReportCheck c{"sign_axioms", r.checked, {}};
        for (auto& v : r.violations) c.violations.push_back("axiom " + v.axiom + ": " + v.detail);
        rep.add_check(c);
    } else if (s == "pentagon") {
        GridDiagram g = need_knot(o);
        rep.set_diagram(g);
        auto r = pentagon_suite(g, o.col, o.variant.empty() ? Variant::gcl_z : parse_variant(o.variant), o.seed);
        for (auto& c : r.checks) rep.add_check(as_check(c));
        ReportTable t{"pentagon_homology", {"dim_source", "dim_target", "rank"}, {}};
        for (auto [m, a2, d1, d2, rk] : r.homology) t.rows.push_back({m, a2, {d1, d2, rk}});
        rep.add_table(t);
        if (!r.iso) rep.add_violation("pentagon map is not an isomorphism on homology");
    } else if (s == "stabilization") {
        GridDiagram g = need_knot(o);
        rep.set_diagram(g);
        auto r = stabilization_cone_check(g, o.col, o.seed, std::min(o.vmax, 2));
        rep.set_diagram(r.gp);
        for (auto& c : r.checks) rep.add_check(as_check(c));
        ReportTable t{"stabilization", {"dim_stabilized", "dim_cone", "dim_original"}, {}};
        for (auto [m, a2, a, b, c] : r.dims) t.rows.push_back({m, a2, {a, b, c}});
        rep.add_table(t);
        if (!r.tables_agree) rep.add_violation("homology tables disagree");
    } else if (s == "skein") {
        skein_into(o.knot.empty() ? builtin_skein().g : load_diagram(o.knot), o.knot.empty() ? builtin_skein().col : o.col,
                   o.seed, std::min(o.vmax, 2), rep);
    } else if (s == "library") {
        ReportCheck c{"library", (long)builtin_library().size(), check_library()};
        rep.add_check(c);
    } else {
        throw UsageError("unknown suite " + s);
    }
}

Move parse_move(const std::string& text, bool rows) {
    std::vector<std::string> p;
    std::string cur;
    for (char c : text) {
        if (c == ':') {
            p.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    p.push_back(cur);
    Move mv;
    mv.on_rows = rows;
    auto num = [&](size_t i) {
        if (i >= p.size()) throw UsageError("move " + text + " is missing a number");
        try {
            return std::stoi(p[i]);
        } catch (const std::logic_error&) {
            throw UsageError("bad number in move " + text);
        }
    };
    if (p[0] == "commutation") {
        mv.kind = MoveKind::commutation;
        mv.col = num(1);
    } else if (p[0] == "switch") {
        mv.kind = MoveKind::switch_move;
        mv.col = num(1);
    } else if (p[0] == "stabilize") {
        mv.kind = MoveKind::stabilize_xsw;
        mv.col = num(1);
    } else if (p[0] == "destabilize") {
        mv.kind = MoveKind::destabilize_xsw;
        mv.col = num(1);
        mv.row = num(2);
    } else {
        throw UsageError("unknown move " + p[0]);
    }
    return mv;
}

void cmd_moves(const Opts& o, Report& rep) {
    GridDiagram g = need_knot(o);
    rep.set_diagram(g);
    json steps = json::array();
    std::vector<Move> mvs;
    for (auto& t : o.moves) mvs.push_back(parse_move(t, o.rows));
    json legal = json::array();
    for (int c = 0; c + 1 < g.n; ++c)
        legal.push_back({{"column", c}, {"commutation", commutation_legal(g, c)}, {"switch", switch_legal(g, c)}});
    rep.result("legal_at_start", legal);
    for (size_t i = 0; i < mvs.size(); ++i) {
        g = apply_move(g, mvs[i]);
        steps.push_back({{"move", o.moves[i]}, {"n", g.n}, {"o_rows", g.o_rows}, {"x_rows", g.x_rows}});
    }
    rep.result("steps", steps);
    rep.result("result", to_text(g));
    rep.result("components", link_components(g).count);
}

void cmd_skein(const Opts& o, Report& rep) {
    SkeinSource src = builtin_skein();
    GridDiagram g = o.knot.empty() ? src.g : load_diagram(o.knot);
    int col = o.knot.empty() ? src.col : o.col;
    rep.setting("seed", o.seed);
    skein_into(g, col, o.seed, std::min(o.vmax, 2), rep);
}

void cmd_library(const Opts& o, Report& rep) {
    json list = json::array();
    for (auto& e : builtin_library())
        list.push_back({{"name", e.name}, {"description", e.description}, {"n", e.g.n}, {"components", e.components},
                        {"text", to_text(e.g)}});
    rep.result("builtins", list);
    if (o.check) rep.add_check({"library", (long)builtin_library().size(), check_library()});
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Opts o;
    if (const char* t = std::getenv("GRIDHOM_THREADS")) o.threads = std::max(1, std::atoi(t));
    CLI::App app{"grid homology of knots and links"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--seed", o.seed, "sign gauge and sampling seed");
    app.add_option("--window", o.window, "Alexander window LO:HI[:VMAX], halves as p/2");
    app.add_option("--rmax", o.rmax, "last spectral page");
    app.add_option("--format", o.format, "human or json")->check(CLI::IsMember({"human", "table", "json"}));
    app.add_option("--threads", o.threads, "worker threads");
    app.add_option("--vmax", o.vmax, "v powers above the top grading");

    auto knot = [&](CLI::App* sc) { sc->add_option("--knot", o.knot, "builtin:NAME, a file, or diagram text"); };
    auto* hom = app.add_subcommand("homology", "homology table of one variant");
    knot(hom);
    hom->add_option("--variant", o.variant, "gc_minus | gc_hat | gcl | gcl_z");
    auto* ghl = app.add_subcommand("ghl", "enhanced homology mod 2 and over Z");
    knot(ghl);
    auto* inv = app.add_subcommand("invariants", "tau, tau+, tau+_U, rho and del1*");
    knot(inv);
    auto* pages = app.add_subcommand("spectral", "pages of the v spectral sequence");
    knot(pages);
    auto* ver = app.add_subcommand("verify", "identity and axiom suites");
    knot(ver);
    ver->add_option("--suite", o.suite, "d_squared | homotopy | d1_relations | homogeneity | signs | pentagon | "
                                        "stabilization | skein | library")
        ->required();
    ver->add_option("--variant", o.variant);
    ver->add_option("--n", o.n, "grid size");
    ver->add_flag("--exhaustive", o.exhaustive);
    ver->add_option("--samples", o.samples);
    ver->add_option("--diagrams", o.diagrams, "random diagrams when not exhaustive");
    ver->add_option("--col", o.col);
    auto* mov = app.add_subcommand("moves", "apply grid moves in order");
    knot(mov);
    mov->add_option("--move", o.moves, "commutation:C | switch:C | stabilize:C | destabilize:C:R");
    mov->add_flag("--rows", o.rows, "commutations and switches act on rows");
    auto* sk = app.add_subcommand("skein", "skein quadruple, skein maps and the exact sequence");
    knot(sk);
    sk->add_option("--col", o.col, "left column of the crossing");
    auto* lib = app.add_subcommand("library", "list built-in diagrams");
    lib->add_flag("--check", o.check, "recompute stored values");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }
    CLI::App* cmd = app.get_subcommands().front();
    Report rep(cmd->get_name());
    try {
        Format f = parse_format(o.format);
        rep.setting("seed", o.seed);
        const std::string& name = cmd->get_name();
        if (name == "homology") cmd_homology(o, rep);
        else if (name == "ghl") cmd_ghl(o, rep);
        else if (name == "invariants") cmd_invariants(o, rep);
        else if (name == "spectral") cmd_spectral(o, rep);
        else if (name == "verify") cmd_verify(o, rep);
        else if (name == "moves") cmd_moves(o, rep);
        else if (name == "skein") cmd_skein(o, rep);
        else if (name == "library") cmd_library(o, rep);
        out << rep.render(f);
        return rep.ok() ? 0 : 1;
    } catch (const UsageError& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const GridError& e) {
        err << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace gridhom
