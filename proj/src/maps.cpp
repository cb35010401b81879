#include "gridhom/maps.hpp"

#include "gridhom/homology.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <sstream>

namespace gridhom {

namespace {

int mod(int a, int n) { return ((a % n) + n) % n; }

// rows strictly inside the northward arc from lo to hi
bool strictly_inside(int lo, int hi, int r, int n) {
    int d = mod(r - lo, n);
    return d > 0 && d < mod(hi - lo, n);
}

std::string perm_text(const Perm& x) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
    os << "]";
    return os.str();
}

}  // namespace

Superimposed superimpose(const GridDiagram& g, int col) {
    if (!commutation_legal(g, col) && !switch_legal(g, col))
        throw GridError("IllegalMove", "columns " + std::to_string(col) + "," + std::to_string(col + 1));
    int n = g.n;
    Superimposed s;
    s.g = g;
    s.gp = g;
    std::swap(s.gp.o_rows[col], s.gp.o_rows[col + 1]);
    std::swap(s.gp.x_rows[col], s.gp.x_rows[col + 1]);
    s.col = col;
    s.line = col + 1;
    s.is_switch = switch_legal(g, col);
    int r1 = g.o_rows[col + 1], r2 = g.x_rows[col + 1];
    int w1 = g.o_rows[col], w2 = g.x_rows[col];
    int first = r1, last = r2;
    if (strictly_inside(r1, r2, w1, n) || strictly_inside(r1, r2, w2, n)) std::swap(first, last);
    if (strictly_inside(first, last, w1, n) || strictly_inside(first, last, w2, n))
        throw GridError("BigonConditionViolated", "no bigon arc separates the two columns");
    s.a = 20 * first + 5;
    s.b = 20 * last + 15;
    if (s.b < s.a) s.b += 20 * n;
    auto place = [&](int row, bool east) {
        if (east) return 20 * row + 10;
        if (row == first) return 20 * row + 2;
        if (row == last) return 20 * row + 18;
        return 20 * row + 10;
    };
    for (int c : {col, col + 1}) {
        bool east = c == col + 1;
        s.marks.push_back({true, c, place(g.o_rows[c], east), east});
        s.marks.push_back({false, c, place(g.x_rows[c], east), east});
    }
    return s;
}

namespace {

// enumerate polygons from x: src/dst 0 = straight line, 1 = curve
template <class F>
void for_each_poly(const Superimposed& s, const Perm& x, int src, int dst, F f) {
    const GridDiagram& g = s.g;
    int n = g.n, N = 20 * n, L = s.line;
    std::vector<int> oc(n), xc(n);
    for_each_rect(g, x, true, [&](const RectGeom& r) {
        bool east;
        if (r.c1 == L)
            east = true;
        else if (r.c2 == L)
            east = false;
        else
            return;
        int lo = 20 * r.row0, hi = 20 * (r.row0 + r.h) + (r.dir == 'v' ? N : 0);
        int bottom = east ? src : dst, top = east ? dst : src;
        // switch points inside the edge, northward; up = curve the edge moves onto
        std::vector<std::pair<int, int>> pts;
        for (int base : {s.a, s.b}) {
            int t = base - N * ((base - lo) / N + 2);
            for (; t < hi; t += N)
                if (t > lo) {
                    bool at_a = base == s.a;
                    // east: straight->curve at a, curve->straight at b; west: reversed
                    int onto = (at_a == east) ? 1 : 0;
                    pts.push_back({t, onto});
                }
        }
        std::sort(pts.begin(), pts.end());
        std::vector<std::vector<int>> choices;
        if (bottom != top) {
            for (int i = 0; i < (int)pts.size(); ++i)
                if (pts[i].second == top) choices.push_back({i});
        } else {
            for (int i = 0; i < (int)pts.size(); ++i)
                for (int j = i + 1; j < (int)pts.size(); ++j)
                    if (pts[i].second != bottom && pts[j].second == bottom) choices.push_back({i, j});
        }
        if (choices.empty()) return;
        Rect cells;
        cells.c1 = r.c1;
        cells.row0 = r.row0;
        cells.w = r.w;
        cells.h = r.h;
        cells.dir = r.dir;
        for (int c = 0; c < n; ++c) {
            oc[c] = cells.cell(n, c, g.o_rows[c]);
            xc[c] = cells.cell(n, c, g.x_rows[c]);
        }
        for (auto& ch : choices) {
            auto curve_at = [&](int t) {
                int k = bottom;
                for (int i : ch)
                    if (pts[i].first < t) k = pts[i].second;
                return k;
            };
            auto inc = [&](bool mark_east, int k) {
                // included marks: east region keeps the east bigon on the straight edge
                return (mark_east == east) == (k == 0) ? 1 : 0;
            };
            std::vector<int> o2 = oc, x2 = xc;
            for (auto& m : s.marks) {
                int t = m.height - N * ((m.height - lo) / N + 2);
                for (; t < hi; t += N) {
                    if (t <= lo) continue;
                    int d = inc(m.east, curve_at(t)) - inc(m.east, 0);
                    (m.is_o ? o2 : x2)[m.gcol] += d;
                }
            }
            bool bad = false;
            for (int c = 0; c < n; ++c) bad = bad || x2[c] != 0 || o2[c] < 0;
            if (bad) continue;
            Perm y = x;
            std::swap(y[r.c1], y[r.c2]);
            bool is_long = r.dir != '-';
            RectKind kind = ch.size() == 1 ? (is_long ? RectKind::long_pentagon : RectKind::pentagon)
                                           : (is_long ? RectKind::long_hexagon : RectKind::hexagon);
            f(PolyTerm{y, o2, r.dir == '-' ? r.interior : 1, 1, kind, east ? 0 : 1}, r);
        }
    });
}

}  // namespace

std::vector<PolyTerm> pentagon_terms(const Superimposed& s, const SignAssignment& sa, const Perm& x, int from_side) {
    std::vector<PolyTerm> out;
    for_each_poly(s, x, from_side, 1 - from_side, [&](PolyTerm t, const RectGeom& r) {
        int m = from_side == 0 ? grading(s.g, x).m : grading(s.g, t.to).m;
        t.sign = ((m + t.left) % 2 ? -1 : 1) * sa.sign(x, r.c1, r.c2);
        out.push_back(std::move(t));
    });
    return out;
}

std::vector<PolyTerm> hexagon_terms(const Superimposed& s, const SignAssignment& sa, const Perm& x, int side) {
    std::vector<PolyTerm> out;
    for_each_poly(s, x, side, side, [&](PolyTerm t, const RectGeom& r) {
        t.sign = sa.sign(x, r.c1, r.c2);
        out.push_back(std::move(t));
    });
    return out;
}

Perm closest_point(const Superimposed&, const Perm& x) { return x; }

int closest_triangle_os(const Superimposed& s, const Perm& x) {
    int N = 20 * s.g.n;
    int h = 20 * x[s.line];
    int a = s.a, b = s.b;
    // lift h into [a, a+N)
    while (h < a) h += N;
    while (h >= a + N) h -= N;
    bool east = h < b;
    int lo = east ? a : h, hi = east ? h : a + N;
    int count = 0;
    for (auto& m : s.marks) {
        if (!m.is_o || m.east != east) continue;
        int t = m.height;
        while (t < lo) t += N;
        if (t < hi) ++count;
    }
    return count;
}

PairSpecs pair_specs(const Superimposed& s, Variant v, std::uint64_t gauge_seed) {
    PairSpecs p;
    p.src = make_complex(s.g, v, gauge_seed);
    p.dst = p.src;
    p.dst.g = s.gp;
    std::swap(p.dst.var_of_col[s.col], p.dst.var_of_col[s.col + 1]);
    return p;
}

ChainElement apply_terms(const ComplexSpec& from, const ComplexSpec& to, const std::vector<int>& var_of_gcol,
                         const ChainElement& e, const std::function<std::vector<PolyTerm>(const Perm&)>& terms) {
    ChainElement out;
    out.ring = to.ring;
    for (auto& [key, coef] : e.terms) {
        for (auto& t : terms(key.first)) {
            if (t.T > 0 && !to.with_v) continue;
            auto mono = key.second;
            bool dead = false;
            for (int c = 0; c < (int)t.o.size(); ++c) {
                if (!t.o[c]) continue;
                int var = var_of_gcol[c];
                if (var < 0) dead = true;
                else mono[var] += t.o[c];
            }
            if (dead) continue;
            mono[to.nvars] += t.T;
            out.add({t.to, mono}, (to.is_signed ? t.sign : 1) * coef);
        }
    }
    (void)from;
    return out;
}

bool PentagonReport::ok() const {
    for (auto& c : checks)
        if (!c.ok()) return false;
    return iso;
}

PentagonReport pentagon_suite(const GridDiagram& g, int col, Variant v, std::uint64_t gauge_seed, bool with_homology) {
    Superimposed s = superimpose(g, col);
    PairSpecs ps = pair_specs(s, v, gauge_seed);
    const ComplexSpec &A = ps.src, &B = ps.dst;
    const SignAssignment& sa = A.signs;
    const auto& vm = A.var_of_col;
    auto P = [&](const ChainElement& e) {
        return apply_terms(A, B, vm, e, [&](const Perm& x) { return pentagon_terms(s, sa, x, 0); });
    };
    auto Pp = [&](const ChainElement& e) {
        return apply_terms(B, A, vm, e, [&](const Perm& x) { return pentagon_terms(s, sa, x, 1); });
    };
    auto H = [&](const ChainElement& e) {
        return apply_terms(A, A, vm, e, [&](const Perm& x) { return hexagon_terms(s, sa, x, 0); });
    };
    auto Hp = [&](const ChainElement& e) {
        return apply_terms(B, B, vm, e, [&](const Perm& x) { return hexagon_terms(s, sa, x, 1); });
    };
    PentagonReport rep;
    MapCheck chain{"chain_map_P"}, chainp{"chain_map_P_prime"}, homot{"homotopy_source"}, homotp{"homotopy_target"},
        homog{"homogeneity"}, tri{"closest_point_grading"};
    for (const Perm& x : all_states(g.n)) {
        ChainElement gx = generator(A, x);
        ChainElement gy = generator(B, x);
        ++chain.checked;
        auto r = boundary(B, P(gx));
        r -= P(boundary(A, gx));
        if (!r.zero()) chain.violations.push_back("d'P - Pd on " + perm_text(x) + ": " + describe(r));
        ++chainp.checked;
        auto rp = boundary(A, Pp(gy));
        rp -= Pp(boundary(B, gy));
        if (!rp.zero()) chainp.violations.push_back("dP' - P'd' on " + perm_text(x) + ": " + describe(rp));
        ++homot.checked;
        auto h = H(boundary(A, gx));
        h += boundary(A, H(gx));
        h += Pp(P(gx));
        h += gx;
        if (!h.zero()) homot.violations.push_back("Hd + dH + P'P + Id on " + perm_text(x) + ": " + describe(h));
        ++homotp.checked;
        auto hp = Hp(boundary(B, gy));
        hp += boundary(B, Hp(gy));
        hp += P(Pp(gy));
        hp += gy;
        if (!hp.zero()) homotp.violations.push_back("H'd' + d'H' + PP' + Id on " + perm_text(x) + ": " + describe(hp));
        ++homog.checked;
        auto b0 = term_grading(A, gx.terms.begin()->first);
        for (auto& t : P(gx).terms) {
            auto b = term_grading(B, t.first);
            if (b.m != b0.m || b.a2 != b0.a2) homog.violations.push_back("P not of degree (0,0) on " + perm_text(x));
        }
        for (auto& t : H(gx).terms) {
            auto b = term_grading(A, t.first);
            if (b.m != b0.m + 1 || b.a2 != b0.a2) homog.violations.push_back("H not of degree (1,0) on " + perm_text(x));
        }
        ++tri.checked;
        int dm = grading(s.g, x).m - grading(s.gp, closest_point(s, x)).m;
        int want = -1 + 2 * closest_triangle_os(s, x);
        if (dm != want)
            tri.violations.push_back("M(x) - M(I(x)) = " + std::to_string(dm) + " on " + perm_text(x) + ", triangle gives " +
                                     std::to_string(want));
    }
    rep.checks = {chain, chainp, homot, homotp, homog, tri};
    if (with_homology) {
        bool wv = variant_has_v(v);
        SliceComplex cg(s.g, all_collapsed_config(s.g, wv, false));
        SliceComplex cgp(s.gp, all_collapsed_config(s.gp, wv, false));
        ArrowTable f(cg.states().size());
        for (size_t i = 0; i < f.size(); ++i)
            for (auto& t : pentagon_terms(s, sa, cg.states()[i], 0)) {
                int o = 0;
                for (int c : t.o) o += c;
                f[i].push_back({(std::uint32_t)rank_perm(t.to), t.T, t.sign, {o}});
            }
        int vmax = wv ? 2 : 0;
        for (int a2 = cg.a2_min() - 2; a2 <= std::max(cg.a2_max(), cgp.a2_max()); ++a2) {
            auto [lo, hi] = cg.m_range(a2);
            auto [lo2, hi2] = cgp.m_range(a2);
            for (int m = std::min(lo, lo2); m <= std::max(hi, hi2) + 2 * vmax; ++m) {
                int d1 = cg.dim_mod2(m, a2), d2 = cgp.dim_mod2(m, a2);
                if (!d1 && !d2) continue;
                int r = cg.induced_rank_to(m, a2, cg.map_matrix(m, a2, f, cgp, m, a2), cgp, m, a2);
                rep.homology.emplace_back(m, a2, d1, d2, r);
                if (r != d1 || r != d2) rep.iso = false;
            }
        }
    }
    return rep;
}

bool StabilizationReport::ok() const {
    for (auto& c : checks)
        if (!c.ok()) return false;
    return tables_agree;
}

namespace {

// states of g as the states of gp through the center point (line, row)
Perm embed_state(const Perm& x, int line, int row) {
    Perm y;
    for (int i = 0; i < (int)x.size(); ++i) {
        if (i == line) y.push_back(row);
        y.push_back(x[i] >= row ? x[i] + 1 : x[i]);
    }
    if (line == (int)x.size()) y.push_back(row);
    return y;
}

Perm remove_point(const Perm& y, int line, int row) {
    Perm x;
    for (int i = 0; i < (int)y.size(); ++i)
        if (i != line) x.push_back(y[i] > row ? y[i] - 1 : y[i]);
    return x;
}

ChainElement keep_if(const ChainElement& e, const std::function<bool(const Perm&)>& f) {
    ChainElement o;
    o.ring = e.ring;
    for (auto& [k, c] : e.terms)
        if (f(k.first)) o.add(k, c);
    return o;
}

}  // namespace

StabilizationReport stabilization_cone_check(const GridDiagram& g, const GridDiagram& gp, std::uint64_t gauge_seed, int vmax) {
    for (int c = 0; c < g.n; ++c)
        if (apply_move(g, Move{MoveKind::stabilize_xsw, c, 0, false}) == gp)
            return stabilization_cone_check(g, c, gauge_seed, vmax);
    throw GridError("NotAStabilizationPair", "second diagram is not an X:SW stabilization of the first");
}

StabilizationReport stabilization_cone_check(const GridDiagram& g, int col, std::uint64_t gauge_seed, int vmax) {
    StabilizationReport rep;
    rep.g = g;
    rep.col = col;
    GridDiagram gp = apply_move(g, Move{MoveKind::stabilize_xsw, col, 0, false});
    rep.gp = gp;
    int n = g.n, L = col + 1, R = g.x_rows[col] + 1;
    ComplexSpec sp = make_complex(gp, Variant::gcl_z, gauge_seed);
    int o2 = -1;
    for (int i = 0; i < gp.n; ++i)
        if (gp.o_rows[i] == gp.x_rows[col + 1]) o2 = i;
    int v1 = sp.var_of_col[col + 1], v2 = sp.var_of_col[o2];
    auto in_i = [&](const Perm& x) { return x[L] == R; };
    auto proj = [&](const ChainElement& e) { return keep_if(e, in_i); };
    auto dA = [&](const ChainElement& e) { return proj(boundary(sp, e)); };
    using Pair = std::pair<ChainElement, ChainElement>;
    auto D = [&](const ChainElement& e) {
        Pair out;
        out.first.ring = out.second.ring = e.ring;
        for (auto& [k, c] : e.terms) {
            ChainElement one;
            one.ring = e.ring;
            one.add(k, grading(gp, k.first).m % 2 ? -c : c);
            out.first += proj(one);
            out.second += proj(homotopy_H(sp, col + 1, one));
        }
        return out;
    };
    // cone differential (a, b) -> (-d a, (V1 - V2) a + d b)
    auto dC = [&](const Pair& p) {
        Pair out;
        out.first = dA(p.first).scaled(-1);
        out.second = times_var(sp, p.first, v1);
        out.second -= times_var(sp, p.first, v2);
        out.second += dA(p.second);
        return out;
    };

    MapCheck egr{"e_bigraded"}, ed{"e_commutes_mod2"}, gauge{"pullback_gauge"}, dd{"cone_d_squared"}, chain{"chain_map_D"};
    // e against the complex of g, mod 2
    ComplexSpec sg = make_complex(g, Variant::gcl, gauge_seed);
    std::vector<int> var_to_g(gp.n + 1, -1);
    for (int i = 0; i < gp.n; ++i)
        if (i != col + 1) var_to_g[sp.var_of_col[i]] = sg.var_of_col[i < col + 1 ? i : i - 1];
    auto e_map = [&](const ChainElement& a) {
        ChainElement o;
        o.ring = Ring::mod2;
        for (auto& [k, c] : a.terms) {
            std::vector<int> mono(sg.nvars + 1, 0);
            bool dead = false;
            for (int v = 0; v < sp.nvars; ++v) {
                if (!k.second[v]) continue;
                if (var_to_g[v] < 0) dead = true;
                else mono[var_to_g[v]] += k.second[v];
            }
            mono[sg.nvars] = k.second[sp.nvars];
            if (!dead) o.add({remove_point(k.first, L, R), mono}, c);
        }
        return o;
    };
    for (const Perm& x : all_states(n)) {
        Perm xp = embed_state(x, L, R);
        ++egr.checked;
        auto a = grading(g, x), b = grading(gp, xp);
        if (a.m != b.m + 1 || a.a2 != b.a2 + 2)
            egr.violations.push_back("grading of " + perm_text(x) + " is not shifted by (1,1)");
        ++ed.checked;
        ChainElement ex = generator(sp, xp);
        ex.ring = Ring::mod2;
        ComplexSpec sp2 = sp;
        sp2.ring = Ring::mod2;
        sp2.is_signed = false;
        auto r = e_map(keep_if(boundary(sp2, ex), in_i));
        r -= boundary(sg, generator(sg, x));
        if (!r.zero()) ed.violations.push_back("e d - d e on " + perm_text(x) + ": " + describe(r));
    }
    // the pulled back signs differ from the default assignment of g by a gauge
    {
        SignAssignment sa(n, gauge_seed);
        std::vector<Perm> st = all_states(n);
        std::vector<int> eps(st.size(), 0);
        std::vector<std::uint64_t> queue{0};
        eps[0] = 1;
        auto pulled = [&](const Perm& x, int c1, int c2) {
            int d1 = c1 >= L ? c1 + 1 : c1, d2 = c2 >= L ? c2 + 1 : c2;
            return sp.signs.sign(embed_state(x, L, R), d1, d2);
        };
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            const Perm& x = st[queue[qi]];
            int ex = eps[queue[qi]];
            for_each_rect(g, x, false, [&](const RectGeom& r) {
                Perm y = x;
                std::swap(y[r.c1], y[r.c2]);
                auto yi = rank_perm(y);
                int want = ex * pulled(x, r.c1, r.c2) * sa.sign(x, r.c1, r.c2);
                ++gauge.checked;
                if (!eps[yi]) {
                    eps[yi] = want;
                    queue.push_back(yi);
                } else if (eps[yi] != want) {
                    gauge.violations.push_back("no gauge matches the rectangle from " + perm_text(x) + " to " + perm_text(y));
                }
            });
        }
    }
    for (const Perm& x : all_states(gp.n)) {
        ChainElement gx = generator(sp, x);
        ++chain.checked;
        Pair lhs = dC(D(gx)), rhs = D(boundary(sp, gx));
        lhs.first -= rhs.first;
        lhs.second -= rhs.second;
        if (!lhs.first.zero() || !lhs.second.zero())
            chain.violations.push_back("d D - D d on " + perm_text(x) + ": " + describe(lhs.first) + " | " + describe(lhs.second));
        if (!in_i(x)) continue;
        for (int side = 0; side < 2; ++side) {
            ++dd.checked;
            Pair p;
            p.first.ring = p.second.ring = gx.ring;
            (side ? p.second : p.first) = gx;
            Pair q = dC(dC(p));
            if (!q.first.zero() || !q.second.zero()) dd.violations.push_back("cone d^2 on " + perm_text(x));
        }
    }
    rep.checks = {egr, ed, gauge, dd, chain};

    // homology tables: cone of V1 - U over the all-collapsed complex of g with V1 kept free
    std::vector<Perm> ist;
    std::map<Perm, std::uint32_t> idx;
    for (const Perm& x : all_states(gp.n))
        if (in_i(x)) {
            idx[x] = (std::uint32_t)ist.size();
            ist.push_back(x);
        }
    std::uint32_t K = (std::uint32_t)ist.size();
    std::vector<Bigrading> gens(2 * K);
    ArrowTable arrows(2 * K);
    for (std::uint32_t i = 0; i < K; ++i) {
        Bigrading b = grading(gp, ist[i]);
        gens[i] = b;
        gens[K + i] = Bigrading{b.m + 1, b.a2 + 2};
        auto d = dA(generator(sp, ist[i]));
        for (auto& [k, c] : d.terms) {
            int u = 0;
            for (int v = 0; v < sp.nvars; ++v) u += k.second[v];
            std::uint32_t j = idx.at(k.first);
            int T = k.second[sp.nvars];
            arrows[i].push_back({j, T, (int)-c, {u, 0}});
            arrows[K + i].push_back({K + j, T, (int)c, {u, 0}});
        }
        arrows[i].push_back({K + i, 0, 1, {0, 1}});
        arrows[i].push_back({K + i, 0, -1, {1, 0}});
    }
    EngineConfig cfg;
    cfg.nvars = 2;
    cfg.with_v = true;
    cfg.is_signed = true;
    auto cone = std::make_shared<SliceComplex>(gens, arrows, cfg);
    int comps = link_components(g).count;
    DeconvolvedTable tc(cone, n - comps);
    Homology hg(g), hgp(gp);
    const DeconvolvedTable& tg = hg.ghl_z();
    const DeconvolvedTable& tgp = hgp.ghl_z();
    Window w = default_window(g, vmax);
    MapCheck zcheck{"integral_tables"};
    for (int a2 = w.a2_hi; a2 >= w.a2_lo; a2 -= 2) {
        auto [lo, hi] = tg.big().m_range(a2);
        for (int m = lo; m <= hi + 2 * vmax; ++m) {
            int d1 = tgp.dim(m, a2), d2 = tc.dim(m, a2), d3 = tg.dim(m, a2);
            if (d1 || d2 || d3) rep.dims.emplace_back(m, a2, d1, d2, d3);
            if (d1 != d2 || d2 != d3) rep.tables_agree = false;
            ++zcheck.checked;
            auto z1 = tgp.hom_z(m, a2), z2 = tc.hom_z(m, a2), z3 = tg.hom_z(m, a2);
            if (z1.free_rank != z2.free_rank || z2.free_rank != z3.free_rank || z1.torsion != z2.torsion ||
                z2.torsion != z3.torsion)
                zcheck.violations.push_back("integral homology differs at (" + std::to_string(m) + "," + std::to_string(a2) + ")");
        }
    }
    rep.checks.push_back(zcheck);
    return rep;
}

SkeinMaps::SkeinMaps(const SkeinQuadruple& q, std::uint64_t gauge_seed) : q_(q), s_(superimpose(q.zero, q.col)) {
    zero_ = make_complex(q.zero, Variant::gcl_z, gauge_seed);
    plus_ = zero_;
    plus_.g = q.plus;
    zero_p_ = zero_;
    zero_p_.g = q.zero_prime;
    std::swap(zero_p_.var_of_col[q.col], zero_p_.var_of_col[q.col + 1]);
    minus_ = zero_p_;
    minus_.g = q.minus;
}

ChainElement SkeinMaps::T(const ChainElement& e) const {
    return keep_if(e, [&](const Perm& x) { return in_i(x); });
}

ChainElement SkeinMaps::d_plus_ni(const ChainElement& e) const {
    auto i = [&](const Perm& x) { return in_i(x); };
    auto n = [&](const Perm& x) { return !in_i(x); };
    return keep_if(boundary(plus_, keep_if(e, i)), n);
}

ChainElement SkeinMaps::d_zero_in(const ChainElement& e) const {
    auto i = [&](const Perm& x) { return in_i(x); };
    auto n = [&](const Perm& x) { return !in_i(x); };
    return keep_if(boundary(zero_, keep_if(e, n)), i);
}

ChainElement SkeinMaps::d_zerop_ni(const ChainElement& e) const {
    auto i = [&](const Perm& x) { return in_i(x); };
    auto n = [&](const Perm& x) { return !in_i(x); };
    return keep_if(boundary(zero_p_, keep_if(e, i)), n);
}

ChainElement SkeinMaps::d_minus_in(const ChainElement& e) const {
    auto i = [&](const Perm& x) { return in_i(x); };
    auto n = [&](const Perm& x) { return !in_i(x); };
    return keep_if(boundary(minus_, keep_if(e, n)), i);
}

ChainElement SkeinMaps::phi(const ChainElement& e) const {
    ChainElement out;
    out.ring = e.ring;
    for (auto& [k, c] : e.terms) {
        ChainElement one;
        one.ring = e.ring;
        one.add(k, grading(q_.zero_prime, k.first).m % 2 ? -c : c);
        out += d_plus_ni(T(one));
        out -= T(d_minus_in(one));
    }
    return out;
}

ChainElement SkeinMaps::P(const ChainElement& e) const {
    return apply_terms(zero_, zero_p_, zero_.var_of_col, e,
                       [&](const Perm& x) { return pentagon_terms(s_, zero_.signs, x, 0); });
}

ChainElement SkeinMaps::rect_map(const ChainElement& e, int kind, int which) const {
    const GridDiagram& d = q_.zero_prime;
    int n = d.n, col = q_.col;
    return apply_terms(zero_p_, zero_p_, zero_p_.var_of_col, e, [&](const Perm& x) {
        std::vector<PolyTerm> out;
        for_each_rect(d, x, true, [&](const RectGeom& r) {
            Rect c;
            c.c1 = r.c1;
            c.row0 = r.row0;
            c.w = r.w;
            c.h = r.h;
            c.dir = r.dir;
            auto at = [&](std::pair<int, int> p) { return c.cell(n, p.first, p.second); };
            int x1 = at(q_.x1), x2 = at(q_.x2), y1 = at(q_.y1), y2 = at(q_.y2);
            std::vector<int> o(n);
            for (int k = 0; k < n; ++k) {
                o[k] = c.cell(n, k, d.o_rows[k]);
                if (k != col && k != col + 1 && c.cell(n, k, d.x_rows[k])) return;
            }
            bool ok;
            if (kind == 0) {
                ok = x2 >= 1 && x1 == 0 && y1 == 0 && y2 == 0;
            } else {
                bool only1 = y1 == 1 && y2 == 0, only2 = y2 == 1 && y1 == 0;
                ok = (which == 1 ? only1 : which == 2 ? only2 : only1 || only2) && (kind == 1 ? x2 == 0 : x2 >= 1) && x1 <= 1;
            }
            if (!ok) return;
            Perm y = x;
            std::swap(y[r.c1], y[r.c2]);
            out.push_back(PolyTerm{y, o, r.dir == '-' ? r.interior : 1, zero_p_.signs.sign(x, r.c1, r.c2),
                                   r.dir == '-' ? RectKind::rectangle : RectKind::long_rectangle, 0});
        });
        return out;
    });
}

ChainElement SkeinMaps::h_x2(const ChainElement& e) const { return rect_map(e, 0, 0); }
ChainElement SkeinMaps::h_y(const ChainElement& e, int which) const { return rect_map(e, 1, which); }
ChainElement SkeinMaps::h_x2_y(const ChainElement& e, int which) const { return rect_map(e, 2, which); }

bool SkeinMapsReport::ok() const {
    for (auto& c : checks)
        if (!c.ok()) return false;
    return true;
}

SkeinMapsReport skein_maps_suite(const SkeinQuadruple& q, std::uint64_t gauge_seed) {
    SkeinMaps sm(q, gauge_seed);
    const ComplexSpec &Sp = sm.plus(), &S0 = sm.zero(), &S0p = sm.zero_prime();
    SkeinMapsReport rep;
    MapCheck comp{"composite_on_I"}, compp{"composite_on_I_prime"}, tiso{"T_isomorphism"}, chain{"phi_chain_map"},
        deg{"phi_degree"}, homot{"homotopy_V2_minus_V4"}, vx{"h_x2_vanishes_on_N_prime"}, vxi{"h_x2_maps_I_prime_to_N_prime"},
        vy{"h_y_vanishes_on_I_prime"}, vxy{"h_x2_y_image_in_N_prime"}, b1{"bridge_P_T_d"}, b2{"bridge_P_d_T"};
    auto sgn = [](const GridDiagram& d, const ChainElement& e) {
        ChainElement o;
        o.ring = e.ring;
        for (auto& [k, c] : e.terms) o.add(k, grading(d, k.first).m % 2 ? -c : c);
        return o;
    };
    auto four = [&](const ComplexSpec& c, const ChainElement& g) {
        ChainElement w = times_var(c, g, sm.var(0));
        w += times_var(c, g, sm.var(1));
        w -= times_var(c, g, sm.var(2));
        w -= times_var(c, g, sm.var(3));
        return w;
    };
    auto not_i = [&](const Perm& y) { return !sm.in_i(y); };
    for (const Perm& x : all_states(q.plus.n)) {
        ChainElement gp = generator(Sp, x), g0p = generator(S0p, x);
        bool in = sm.in_i(x);
        if (in) {
            ++comp.checked;
            auto first = sm.d_plus_ni(gp);
            auto r = sm.d_zero_in(first);
            int count = 0;
            for (auto& [k, c] : first.terms) {
                ChainElement one;
                one.ring = first.ring;
                one.add(k, 1);
                for (auto& [k2, c2] : sm.d_zero_in(one).terms)
                    if (k2.first == x) count += (int)std::abs(c * c2);
            }
            rep.annuli = std::max(rep.annuli, count);
            r -= four(Sp, gp);
            if (!r.zero()) comp.violations.push_back("on " + perm_text(x) + ": " + describe(r));
            ++compp.checked;
            auto rp = sm.d_minus_in(sm.d_zerop_ni(g0p));
            rp -= four(S0p, g0p);
            if (!rp.zero()) compp.violations.push_back("on " + perm_text(x) + ": " + describe(rp));
            ++tiso.checked;
            auto t = sm.T(keep_if(boundary(S0p, g0p), [&](const Perm& y) { return sm.in_i(y); }));
            t -= keep_if(boundary(S0, sm.T(g0p)), [&](const Perm& y) { return sm.in_i(y); });
            if (!t.zero()) tiso.violations.push_back("T d' - d T on " + perm_text(x) + ": " + describe(t));
        }
        ++chain.checked;
        auto ph = sm.phi(g0p);
        auto c = boundary(S0, ph);
        c -= sm.phi(boundary(S0p, g0p));
        if (!c.zero()) chain.violations.push_back("d phi - phi d on " + perm_text(x) + ": " + describe(c));
        ++deg.checked;
        auto b0 = grading(q.zero_prime, x);
        for (auto& [k, cf] : ph.terms) {
            auto b = term_grading(S0, k);
            if (b.m != b0.m - 2 || b.a2 != b0.a2 - 2) deg.violations.push_back("phi not of degree (-2,-1) on " + perm_text(x));
        }
        ++homot.checked;
        auto h = sm.h_x2(sm.h_y(g0p));
        h += sm.h_y(sm.h_x2(g0p));
        h += sm.h_x2_y(boundary(S0p, g0p));
        h += boundary(S0p, sm.h_x2_y(g0p));
        h -= times_var(S0p, g0p, sm.var(1));
        h += times_var(S0p, g0p, sm.var(3));
        if (!h.zero()) homot.violations.push_back("on " + perm_text(x) + ": " + describe(h));
        if (!in) {
            ++vx.checked;
            auto a = sm.h_x2(g0p);
            if (!a.zero()) vx.violations.push_back("h_X2 on " + perm_text(x) + ": " + describe(a));
        } else {
            ++vxi.checked;
            auto a = sm.h_x2(g0p);
            if (!keep_if(a, [&](const Perm& y) { return sm.in_i(y); }).zero())
                vxi.violations.push_back("h_X2 on " + perm_text(x) + " leaves N'");
            ++vy.checked;
            auto b = sm.h_y(g0p);
            if (!b.zero()) vy.violations.push_back("h_Y on " + perm_text(x) + ": " + describe(b));
        }
        ++vxy.checked;
        auto xy = sm.h_x2_y(g0p);
        if (!keep_if(xy, [&](const Perm& y) { return sm.in_i(y); }).zero())
            vxy.violations.push_back("h_X2,Y on " + perm_text(x) + " has terms in I'");
        if (!in) {
            ++b1.checked;
            auto l = sgn(q.zero_prime, sm.P(sm.T(sm.d_minus_in(g0p))));
            l -= sm.h_x2(sm.h_y(g0p));
            if (!l.zero()) b1.violations.push_back("on " + perm_text(x) + ": " + describe(l));
        } else {
            ++b2.checked;
            auto l = sgn(q.zero_prime, sm.P(sm.d_plus_ni(sm.T(g0p)))).scaled(-1);
            l -= sm.h_y(sm.h_x2(g0p));
            if (!l.zero()) b2.violations.push_back("on " + perm_text(x) + ": " + describe(l));
        }
        (void)not_i;
    }
    rep.checks = {comp, compp, tiso, chain, deg, homot, vx, vxi, vy, vxy};
    rep.bridge = {b1, b2};
    return rep;
}

std::map<std::pair<int, int>, int> j_module() { return {{{0, 2}, 1}, {{-2, -2}, 1}, {{-1, 0}, 2}}; }

bool SkeinLesReport::ok() const {
    for (auto& c : checks)
        if (!c.ok()) return false;
    return exact() && l0_match;
}

namespace {

// collapse a chain element to arrows of the one-variable engine, mod 2
void push_arrows(std::vector<GenArrow>& out, const ChainElement& e, int nvars,
                 const std::function<long(const Perm&)>& index) {
    for (auto& [k, c] : e.terms) {
        if (c % 2 == 0) continue;
        long j = index(k.first);
        if (j < 0) continue;
        int o = 0;
        for (int v = 0; v < nvars; ++v) o += k.second[v];
        out.push_back({(std::uint32_t)j, k.second[nvars], 1, {o}});
    }
}

// arrows of a sub-collection of generators, reindexed
ArrowTable restrict_arrows(const ArrowTable& d, const std::vector<long>& to_sub) {
    ArrowTable r;
    for (size_t i = 0; i < d.size(); ++i) {
        if (to_sub[i] < 0) continue;
        r.emplace_back();
        for (auto a : d[i])
            if (to_sub[a.to] >= 0) {
                a.to = (std::uint32_t)to_sub[a.to];
                r.back().push_back(a);
            }
    }
    return r;
}

// canonical mod 2 arrow multiset for comparing two differentials
std::map<std::tuple<std::uint32_t, std::uint32_t, int, int>, int> arrow_set(const ArrowTable& d) {
    std::map<std::tuple<std::uint32_t, std::uint32_t, int, int>, int> m;
    for (size_t i = 0; i < d.size(); ++i)
        for (auto& a : d[i]) m[{(std::uint32_t)i, a.to, a.T, a.o.empty() ? 0 : a.o[0]}] ^= 1;
    for (auto it = m.begin(); it != m.end();) it = it->second ? std::next(it) : m.erase(it);
    return m;
}

}  // namespace

SkeinLesReport skein_les_check(const SkeinQuadruple& q, int vmax, std::uint64_t gauge_seed) {
    SkeinMaps sm(q, gauge_seed);
    SkeinLesReport rep;
    rep.q = q;
    int n = q.plus.n;
    std::vector<Perm> st = all_states(n);
    long K = (long)st.size();
    const ComplexSpec &S0 = sm.zero(), &S0p = sm.zero_prime();
    int nv = S0.nvars;
    int sh_p = q.l0 - q.l - 1, sh = q.l0 - q.l + 1;
    // cone generators: [0, K) zero_prime, [K, 2K) zero
    std::vector<Bigrading> gens(2 * K);
    ArrowTable d(2 * K);
    auto rank_of = [](const Perm& x) { return (long)rank_perm(x); };
    for (long i = 0; i < K; ++i) {
        auto b = grading(q.zero_prime, st[i]);
        gens[i] = {b.m, b.a2 + sh_p};
        auto b0 = grading(q.zero, st[i]);
        gens[K + i] = {b0.m + 1, b0.a2 + sh};
        ChainElement g0p = generator(S0p, st[i]), g0 = generator(S0, st[i]);
        push_arrows(d[i], boundary(S0p, g0p), nv, rank_of);
        push_arrows(d[i], sm.phi(g0p), nv, [&](const Perm& y) { return K + rank_of(y); });
        push_arrows(d[K + i], boundary(S0, g0), nv, [&](const Perm& y) { return K + rank_of(y); });
    }
    EngineConfig cfg;
    cfg.nvars = 1;
    cfg.with_v = true;
    auto cone = std::make_shared<SliceComplex>(gens, d, cfg);
    // sub: N' and I, quotient: I' and N
    std::vector<long> to_sub(2 * K, -1), to_quo(2 * K, -1);
    std::vector<Bigrading> gsub, gquo;
    std::vector<Perm> psub, pquo;
    for (long i = 0; i < 2 * K; ++i) {
        bool in = sm.in_i(st[i % K]);
        bool sub = (i < K) ? !in : in;
        if (sub) {
            to_sub[i] = (long)gsub.size();
            gsub.push_back(gens[i]);
            psub.push_back(st[i % K]);
        } else {
            to_quo[i] = (long)gquo.size();
            gquo.push_back(gens[i]);
            pquo.push_back(st[i % K]);
        }
    }
    ArrowTable dsub = restrict_arrows(d, to_sub), dquo = restrict_arrows(d, to_quo);
    SliceComplex sub(gsub, dsub, cfg), quo(gquo, dquo, cfg);
    ArrowTable incl(gsub.size()), proj(2 * K), conn(gquo.size());
    for (long i = 0; i < 2 * K; ++i) {
        if (to_sub[i] >= 0) incl[to_sub[i]].push_back({(std::uint32_t)i, 0, 1, {0}});
        if (to_quo[i] >= 0) {
            proj[i].push_back({(std::uint32_t)to_quo[i], 0, 1, {0}});
            for (auto a : d[i])
                if (to_sub[a.to] >= 0) {
                    a.to = (std::uint32_t)to_sub[a.to];
                    conn[to_quo[i]].push_back(a);
                }
        }
    }

    // the columns against minus and plus
    MapCheck gm{"sub_gradings_shift_minus"}, gp{"quotient_gradings_shift_plus"}, dm{"sub_differential_is_minus"},
        dp{"quotient_differential_is_plus"}, dd{"cone_d_squared"}, zero_comp{"compositions_vanish"};
    auto own_arrows = [&](const GridDiagram& g, const std::vector<Perm>& ps) {
        ComplexSpec c = make_complex(g, Variant::gcl_z, gauge_seed);
        std::map<Perm, long> where;
        for (size_t i = 0; i < ps.size(); ++i) where[ps[i]] = (long)i;
        ArrowTable t(ps.size());
        for (size_t i = 0; i < ps.size(); ++i)
            push_arrows(t[i], boundary(c, generator(c, ps[i])), c.nvars,
                        [&](const Perm& y) { auto it = where.find(y); return it == where.end() ? -1L : it->second; });
        return t;
    };
    std::map<std::pair<int, int>, int> shifts;
    std::map<std::pair<int, int>, int> mshifts;
    for (size_t i = 0; i < psub.size(); ++i) {
        auto b = grading(q.minus, psub[i]);
        ++mshifts[{gsub[i].m - b.m, gsub[i].a2 - b.a2}];
    }
    gm.checked = (long)psub.size();
    if (!mshifts.empty()) rep.minus_shift = mshifts.begin()->first;
    if (mshifts.size() != 1) gm.violations.push_back("sub gradings are not a constant shift of minus");
    for (size_t i = 0; i < pquo.size(); ++i) {
        auto b = grading(q.plus, pquo[i]);
        ++shifts[{gquo[i].m - b.m, gquo[i].a2 - b.a2}];
    }
    gp.checked = (long)pquo.size();
    if (!shifts.empty()) rep.plus_shift = shifts.begin()->first;
    if (shifts.size() != 1) gp.violations.push_back("quotient gradings are not a constant shift of plus");
    ++dm.checked;
    if (arrow_set(dsub) != arrow_set(own_arrows(q.minus, psub))) dm.violations.push_back("differentials differ");
    ++dp.checked;
    if (arrow_set(dquo) != arrow_set(own_arrows(q.plus, pquo))) dp.violations.push_back("differentials differ");

    int lo_a2 = cone->a2_min() - 2, hi_a2 = cone->a2_max();
    auto fail = [&](const std::string& node, int m, int a2) {
        if (rep.failure.empty())
            rep.failure = node + " at (" + std::to_string(m) + "," + std::to_string(a2) + ")";
    };
    for (int a2 = hi_a2; a2 >= lo_a2; --a2) {
        int mlo = 1 << 30, mhi = -(1 << 30);
        for (const SliceComplex* c : {cone.get(), &sub, &quo}) {
            auto [l, h] = c->m_range(a2);
            mlo = std::min(mlo, l);
            mhi = std::max(mhi, h);
        }
        if (mlo > mhi) continue;
        for (int m = mlo - 1; m <= mhi + 2 * vmax + 1; ++m) {
            SkeinLesRow row;
            row.m = m;
            row.a2 = a2;
            row.dim_plus = quo.dim_mod2(m, a2);
            row.dim_minus = sub.dim_mod2(m, a2);
            row.dim_cone = cone->dim_mod2(m, a2);
            ++dd.checked;
            if (!cone->d_squared_zero(m, a2)) dd.violations.push_back("at (" + std::to_string(m) + "," + std::to_string(a2) + ")");
            BitMatrix fi = sub.map_matrix(m, a2, incl, *cone, m, a2);
            BitMatrix fp = cone->map_matrix(m, a2, proj, quo, m, a2);
            BitMatrix fc = quo.map_matrix(m, a2, conn, sub, m - 1, a2);
            row.rank_in = sub.induced_rank_to(m, a2, fi, *cone, m, a2);
            row.rank_out = cone->induced_rank_to(m, a2, fp, quo, m, a2);
            row.rank_conn = quo.induced_rank_to(m, a2, fc, sub, m - 1, a2);
            row.rank_conn_in = quo.induced_rank_to(m + 1, a2, quo.map_matrix(m + 1, a2, conn, sub, m, a2), sub, m, a2);
            zero_comp.checked += 3;
            if (sub.induced_rank_to(m, a2, fi.multiply(fp), quo, m, a2))
                zero_comp.violations.push_back("minus -> cone -> plus at (" + std::to_string(m) + "," + std::to_string(a2) + ")");
            if (cone->induced_rank_to(m, a2, fp.multiply(fc), sub, m - 1, a2))
                zero_comp.violations.push_back("cone -> plus -> minus at (" + std::to_string(m) + "," + std::to_string(a2) + ")");
            if (quo.induced_rank_to(m, a2, fc.multiply(sub.map_matrix(m - 1, a2, incl, *cone, m - 1, a2)), *cone, m - 1, a2))
                zero_comp.violations.push_back("plus -> minus -> cone at (" + std::to_string(m) + "," + std::to_string(a2) + ")");
            rep.rows.push_back(row);
        }
    }
    // exactness: kernel dimension equals the rank of the incoming map at each node
    for (auto& r : rep.rows) {
        bool ok = true;
        if (r.rank_conn_in + r.rank_in != r.dim_minus) ok = false, fail("minus", r.m, r.a2);
        if (r.rank_in + r.rank_out != r.dim_cone) ok = false, fail("cone", r.m, r.a2);
        if (r.rank_out + r.rank_conn != r.dim_plus) ok = false, fail("plus", r.m, r.a2);
        r.exact = ok;
    }
    rep.checks = {gm, gp, dm, dp, dd, zero_comp};

    // the cone against the table of zero after dividing out the W factors
    rep.tensor_j = q.l0 == q.l - 1;
    DeconvolvedTable dc(cone, n - q.l);
    Homology h0(q.zero);
    const DeconvolvedTable& t0 = h0.ghl();
    auto jm = j_module();
    auto expected = [&](int m, int a2) {
        if (!rep.tensor_j) return t0.dim(m, a2);
        int s = 0;
        for (auto& [k, c] : jm) s += c * t0.dim(m - k.first, a2 - k.second);
        return s;
    };
    std::vector<std::pair<int, int>> cells;
    for (int a2 = hi_a2 + 2; a2 >= lo_a2; --a2) {
        auto [l, h] = cone->m_range(a2);
        if (l > h) continue;
        for (int m = l - 2; m <= h + 2 * vmax; ++m) cells.push_back({m, a2});
    }
    rep.l0_match = false;
    for (int sm_ = -3; sm_ <= 3 && !rep.l0_match; ++sm_)
        for (int sa = -6; sa <= 6 && !rep.l0_match; ++sa) {
            bool all = true, any = false;
            for (auto [m, a2] : cells) {
                int a = dc.dim(m, a2), b = expected(m - sm_, a2 - sa);
                any = any || a;
                if (a != b) {
                    all = false;
                    break;
                }
            }
            if (all && any) {
                rep.l0_match = true;
                rep.l0_shift = {sm_, sa};
            }
        }
    for (auto [m, a2] : cells) {
        int a = dc.dim(m, a2), b = expected(m - rep.l0_shift.first, a2 - rep.l0_shift.second);
        if (a || b) rep.l0_table.emplace_back(m, a2, a, b);
    }
    return rep;
}

}  // namespace gridhom
