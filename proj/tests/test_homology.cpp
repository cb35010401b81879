#include <random>

#include "doctest.h"
#include "gridhom/homology.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace gridhom;
using testutil::random_grid;

namespace {

std::map<std::pair<int, int>, int> deconvolved_dims(const DeconvolvedTable& t, int a2_lo, int a2_hi, int m_pad) {
    std::map<std::pair<int, int>, int> out;
    for (int a2 = a2_hi; a2 >= a2_lo; a2 -= 2) {
        auto [lo, hi] = t.big().m_range(a2);
        for (int m = lo - 4; m <= hi + m_pad; ++m) {
            int d = t.dim(m, a2);
            if (d) out[{m, a2}] = d;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("collapsed deconvolution matches the full complex") {
    std::mt19937_64 rng(21);
    std::vector<GridDiagram> gs = {testutil::unknot2(), testutil::trefoil5(), testutil::hopf4(), random_grid(4, rng),
                                   random_grid(4, rng)};
    for (auto& g : gs) {
        int comps = link_components(g).count;
        for (auto [full, hat] : {std::pair{Variant::gc_minus, false}, std::pair{Variant::gc_hat, true}}) {
            if (hat && comps > 1) continue;
            SliceComplex direct(g, engine_config(make_complex(g, comps > 1 ? Variant::collapsed_gc_minus : full)));
            auto big = std::make_shared<SliceComplex>(g, all_collapsed_config(g, false, false, hat));
            DeconvolvedTable t(big, g.n - comps);
            int hi = big->a2_max(), lo = hi - 6;
            auto a = direct_dims(direct, lo, hi, 0);
            auto b = deconvolved_dims(t, lo, hi, 0);
            std::string sa, sb;
            for (auto& [k, v] : a) sa += "(" + std::to_string(k.first) + "," + std::to_string(k.second) + "):" + std::to_string(v) + " ";
            for (auto& [k, v] : b) sb += "(" + std::to_string(k.first) + "," + std::to_string(k.second) + "):" + std::to_string(v) + " ";
            CHECK_MESSAGE(sa == sb, to_text(g), std::string(hat ? " hat" : " minus"));
        }
    }
}

TEST_CASE("unknot ground truth") {
    auto g = testutil::unknot2();
    Homology h(g);
    auto w = default_window(g);
    auto dec = h.decompose_minus(w);
    CHECK(dec.has_tower);
    CHECK(dec.tower_m == 0);
    CHECK(dec.tower_a2 == 0);
    CHECK(dec.torsion.empty());
    auto rep = h.table("gcl", w);
    std::map<std::pair<int, int>, int> engine;
    for (auto& r : rep.rows) engine[{r.m, r.a2}] = r.rank;
    int cells = 0;
    for (int a2 = w.a2_hi; a2 >= w.a2_lo; a2 -= 2) {
        auto [lo, hi] = h.ghl().big().m_range(a2);
        for (int m = lo - 2; m <= hi + 2 * w.vmax; ++m) {
            int free_module = (a2 <= 0 && m >= a2 && (m - a2) % 2 == 0) ? 1 : 0;
            int brute = testutil::unknot_ghl_dim(m, a2);
            CHECK(brute == free_module);
            CHECK(engine[{m, a2}] == brute);
            ++cells;
        }
    }
    CHECK(cells > 50);
    for (auto& r : rep.rows) {
        CHECK(r.u_rank == 1);
        CHECK(r.v_rank == 1);
    }
    auto inv = h.invariants(w);
    CHECK(inv.tau == 0);
    CHECK(inv.tau_plus == 0);
    CHECK(inv.tau_plus_u == 0);
    CHECK(inv.rho == 0);
}

TEST_CASE("GHL and integral homology deconvolve like the full complex") {
    std::mt19937_64 rng(31);
    std::vector<GridDiagram> gs = {testutil::trefoil5(), random_grid(4, rng), random_grid(4, rng)};
    for (auto& g : gs) {
        if (link_components(g).count != 1) continue;
        SliceComplex direct(g, engine_config(make_complex(g, Variant::gcl)));
        SliceComplex direct_z(g, engine_config(make_complex(g, Variant::gcl_z)));
        Homology h(g);
        int hi = h.ghl().a2_top();
        for (int a2 = hi; a2 >= hi - 4; a2 -= 2) {
            auto [lo, mhi] = h.ghl().big().m_range(a2);
            for (int m = lo; m <= mhi + 4; ++m) {
                CHECK(direct.dim_mod2(m, a2) == h.ghl().dim(m, a2));
                auto a = direct_z.hom_z(m, a2);
                auto b = h.ghl_z().hom_z(m, a2);
                CHECK(a.free_rank == b.free_rank);
                CHECK(a.torsion == b.torsion);
            }
        }
    }
}

TEST_CASE("U action: deconvolved ranks and equal V ranks on the full complex") {
    std::mt19937_64 rng(41);
    std::vector<GridDiagram> gs = {testutil::trefoil5(), testutil::unknot2(), random_grid(4, rng), random_grid(4, rng)};
    for (auto& g : gs) {
        if (link_components(g).count != 1) continue;
        SliceComplex direct(g, engine_config(make_complex(g, Variant::gc_minus)));
        Homology h(g);
        int hi = h.minus().a2_top();
        for (int a2 = hi; a2 >= hi - 6; a2 -= 2) {
            auto [lo, mhi] = direct.m_range(a2);
            for (int m = lo; m <= mhi; ++m) {
                int r0 = direct.induced_rank(m, a2, direct.times_mod2(m, a2, 0, 1), m - 2, a2 - 2);
                CHECK(r0 == h.minus().u_rank(m, a2, 1));
                if (g.n <= 4)
                    for (int v = 1; v < g.n; ++v)
                        CHECK(direct.induced_rank(m, a2, direct.times_mod2(m, a2, v, 1), m - 2, a2 - 2) == r0);
            }
        }
    }
}

namespace {

// E_s^p from ranks of filtered submatrices, independent of the persistence pairing
int spectral_by_ranks(const SliceComplex& c, int m, int a2, int p, int s) {
    auto zc = [&](int pp, int ss) {
        auto S = c.slice(m, a2);
        std::vector<int> rows;
        for (int i = 0; i < S->size(); ++i)
            if (S->vpow[i] >= pp) rows.push_back(i);
        if (ss <= 0 || rows.empty()) return (int)rows.size();
        auto T = c.slice(m - 1, a2);
        std::vector<int> cols;
        for (int i = 0; i < T->size(); ++i)
            if (T->vpow[i] < pp + ss) cols.push_back(i);
        if (cols.empty()) return (int)rows.size();
        return (int)rows.size() - gf2_rank(c.d_mod2(m, a2).select_rows(rows).select_cols(cols));
    };
    auto bc = [&](int pp, int ss) {
        auto U = c.slice(m + 1, a2);
        std::vector<int> rows;
        for (int i = 0; i < U->size(); ++i)
            if (U->vpow[i] >= pp - ss) rows.push_back(i);
        if (rows.empty()) return 0;
        BitMatrix d = c.d_mod2(m + 1, a2).select_rows(rows);
        auto S = c.slice(m, a2);
        std::vector<int> low;
        for (int i = 0; i < S->size(); ++i)
            if (S->vpow[i] < pp) low.push_back(i);
        return gf2_rank(d) - (low.empty() ? 0 : gf2_rank(d.select_cols(low)));
    };
    return zc(p, s) - zc(p + 1, s - 1) - bc(p, s - 1) + bc(p + 1, s);
}

}  // namespace

TEST_CASE("spectral pages: pairing agrees with filtered ranks, E2 is GH-[v]") {
    auto g = make_diagram({4, 3, 2, 1, 0}, {2, 1, 0, 4, 3});
    Homology h(g);
    const auto& big = h.ghl().big();
    int hi = big.a2_max();
    for (int a2 = hi; a2 >= hi - 6; a2 -= 2) {
        auto [lo, mhi] = big.m_range(a2);
        for (int m = lo; m <= mhi + 4; ++m)
            for (int p = 0; 2 * p <= m - lo; ++p) {
                for (int s = 0; s <= 4; ++s) CHECK(big.spectral_dim(m, a2, p, s) == spectral_by_ranks(big, m, a2, p, s));
                CHECK(h.ghl().spectral_dim(m, a2, p, 1) == h.minus().dim(m - 2 * p, a2));
            }
    }
    auto w = default_window(g);
    auto rep = h.spectral(w, 3);
    CHECK(rep.collapsed_at == 2);
    CHECK(rep.converges_to_ghl);
}

TEST_CASE("universal coefficients between integral and mod 2 GHL") {
    for (auto g : {testutil::unknot2(), make_diagram({4, 3, 2, 1, 0}, {2, 1, 0, 4, 3})}) {
        Homology h(g);
        auto w = default_window(g);
        auto even = [&](int m, int a2) {
            int t = 0;
            for (auto& s : h.ghl_z().hom_z(m, a2).torsion) t += (std::stoll(s) % 2 == 0);
            return t;
        };
        for (int a2 = w.a2_hi; a2 >= w.a2_hi - 8; a2 -= 2) {
            auto [lo, hi] = h.ghl().big().m_range(a2);
            for (int m = lo; m <= hi + 4; ++m)
                CHECK(h.ghl().dim(m, a2) == h.ghl_z().hom_z(m, a2).free_rank + even(m, a2) + even(m - 1, a2));
        }
    }
}

TEST_CASE("trefoil invariants and U decomposition") {
    auto g = make_diagram({4, 3, 2, 1, 0}, {2, 1, 0, 4, 3});
    Homology h(g);
    auto w = default_window(g);
    auto dec = h.decompose_minus(w);
    CHECK(dec.tower_m == -2);
    CHECK(dec.tower_a2 == -2);
    REQUIRE(dec.torsion.size() == 1);
    CHECK(dec.torsion[0].d - dec.torsion[0].s2 / 2 == -1);
    // expansion reproduces the table
    auto tab = h.table("gc_minus", w);
    for (auto& r : tab.rows) {
        int e = 0;
        if ((r.m - dec.tower_m) == (r.a2 - dec.tower_a2) && r.a2 <= dec.tower_a2) e = 1;
        for (auto& t : dec.torsion)
            for (int k = 0; k < t.n; ++k) e += (r.m == t.d - 2 * k && r.a2 == t.s2 - 2 * k);
        CHECK(e == r.rank);
    }
    auto inv = h.invariants(w);
    CHECK(inv.tau == 1);
    CHECK(-inv.tau_plus <= -inv.tau_plus_u);
    CHECK(-inv.tau_plus_u <= -inv.tau);
    Window shallow = w;
    shallow.a2_lo = w.a2_hi - 4;
    CHECK_THROWS_AS(h.decompose_minus(shallow), WindowNotStabilized);
}

TEST_CASE("del1 star vanishes on small knots") {
    for (auto g : {testutil::unknot2(), testutil::trefoil5()}) {
        Homology h(g);
        auto r = h.del1_star(default_window(g));
        CHECK(r.identically_zero);
        CHECK(r.squares_to_zero);
        CHECK(r.image_u_torsion);
        CHECK(r.representative_independent);
        CHECK(r.max_u_power_into_tower == -1);
    }
}
