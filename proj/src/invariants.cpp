#include <algorithm>
#include <set>

#include "gridhom/homology.hpp"

namespace gridhom {

Homology::Homology(const GridDiagram& g, int threads)
    : g_(g), comps_(link_components(g).count), threads_(std::max(1, threads)) {}

const DeconvolvedTable& Homology::minus() const {
    std::call_once(f1_, [this] {
        minus_ = std::make_unique<DeconvolvedTable>(
            std::make_shared<SliceComplex>(g_, all_collapsed_config(g_, false, false)), g_.n - comps_);
    });
    return *minus_;
}

const DeconvolvedTable& Homology::ghl() const {
    std::call_once(f2_, [this] {
        ghl_ = std::make_unique<DeconvolvedTable>(std::make_shared<SliceComplex>(g_, all_collapsed_config(g_, true, false)),
                                                  g_.n - comps_);
    });
    return *ghl_;
}

const DeconvolvedTable& Homology::ghl_z() const {
    std::call_once(f3_, [this] {
        ghlz_ = std::make_unique<DeconvolvedTable>(std::make_shared<SliceComplex>(g_, all_collapsed_config(g_, true, true)),
                                                   g_.n - comps_);
    });
    return *ghlz_;
}

const DeconvolvedTable& Homology::hat() const {
    std::call_once(f4_, [this] {
        hat_ = std::make_unique<DeconvolvedTable>(
            std::make_shared<SliceComplex>(g_, all_collapsed_config(g_, false, false, true)), g_.n - comps_);
    });
    return *hat_;
}

namespace {

std::vector<int> levels(const Window& w) {
    std::vector<int> out;
    for (int a2 = w.a2_hi; a2 >= w.a2_lo; a2 -= 2) out.push_back(a2);
    return out;
}

// (m, 2a) cells of a table inside the window; mpad extends the Maslov range for v powers
std::vector<std::pair<int, int>> cells(const DeconvolvedTable& t, const Window& w, int mpad) {
    std::vector<std::pair<int, int>> out;
    for (int a2 : levels(w)) {
        auto [lo, hi] = t.big().m_range(a2);
        for (int m = lo; m <= hi + mpad; ++m) out.emplace_back(m, a2);
    }
    return out;
}

struct Bar {
    int m, a2, len;  // birth cell and U-order; len < 0 for bars reaching the window bottom
    int count;
};

// persistence of the U-action along each line m - 2a = const
std::vector<Bar> u_barcode(const DeconvolvedTable& t, const Window& w, const std::set<int>& lines, int threads) {
    auto lv = levels(w);
    int L = (int)lv.size();
    std::vector<int> lines_v(lines.begin(), lines.end());
    std::vector<std::vector<Bar>> per(lines_v.size());
    parallel_for((int)lines_v.size(), threads, [&](int li) {
        int c = lines_v[li];
        std::vector<int> dim(L);
        for (int i = 0; i < L; ++i) dim[i] = t.dim(c + lv[i], lv[i]);
        std::map<std::pair<int, int>, int> memo;
        auto r = [&](int i, int j) -> int {
            if (i < 0 || j >= L) return 0;
            if (!dim[i] || !dim[j]) return 0;
            if (i == j) return dim[i];
            auto it = memo.find({i, j});
            if (it != memo.end()) return it->second;
            int v = t.u_rank(c + lv[i], lv[i], j - i);
            memo[{i, j}] = v;
            return v;
        };
        for (int i = 0; i < L; ++i) {
            if (!dim[i]) continue;
            for (int j = i; j < L; ++j) {
                int b = r(i, j) - r(i - 1, j);
                if (j + 1 < L) b += -r(i, j + 1) + r(i - 1, j + 1);
                if (b > 0) per[li].push_back({c + lv[i], lv[i], j + 1 < L ? j - i + 1 : -1, b});
                if (!r(i, j)) break;
            }
        }
    });
    std::vector<Bar> out;
    for (auto& v : per) out.insert(out.end(), v.begin(), v.end());
    return out;
}

std::set<int> lines_of(const DeconvolvedTable& t, const Window& w, int mpad) {
    std::set<int> out;
    for (auto [m, a2] : cells(t, w, mpad))
        if (t.dim(m, a2)) out.insert(m - a2);
    return out;
}

}  // namespace

HomologyReport Homology::table(const std::string& which, const Window& w) const {
    HomologyReport rep;
    rep.variant = which;
    rep.window = w;
    const DeconvolvedTable* t;
    int mpad = 0;
    if (which == "gc_minus")
        t = &minus();
    else if (which == "gc_hat")
        t = &hat();
    else if (which == "gcl" || which == "gcl_z")
        t = &ghl(), mpad = 2 * w.vmax;
    else
        throw GridError("VariantMismatch", "unknown table " + which);
    auto cs = cells(*t, w, mpad);
    std::vector<std::optional<TableRow>> rows(cs.size());
    parallel_for((int)cs.size(), threads_, [&](int i) {
        auto [m, a2] = cs[i];
        TableRow row;
        row.m = m;
        row.a2 = a2;
        if (which == "gcl_z") {
            auto h = ghl_z().hom_z(m, a2);
            row.rank = h.free_rank;
            row.torsion = h.torsion;
            if (!row.rank && row.torsion.empty()) return;
        } else {
            row.rank = t->dim(m, a2);
            if (!row.rank) return;
        }
        row.u_rank = which == "gc_hat" ? 0 : t->u_rank(m, a2, 1);
        if (mpad) row.v_rank = ghl().v_rank(m, a2, 1);
        rows[i] = row;
    });
    for (auto& r : rows)
        if (r) rep.rows.push_back(*r);
    return rep;
}

UDecomposition Homology::decompose_minus(const Window& w) const {
    if (comps_ != 1) throw GridError("VariantMismatch", "U decomposition needs a knot");
    const auto& t = minus();
    auto lv = levels(w);
    int L = (int)lv.size();
    // the bottom n levels must carry exactly the tower
    if (L < g_.n) throw WindowNotStabilized("window shorter than the grid size");
    for (int i = L - g_.n; i < L; ++i) {
        int a2 = lv[i];
        auto [lo, hi] = t.big().m_range(a2);
        int tot = 0, ur = 0;
        for (int m = lo; m <= hi; ++m) {
            int d = t.dim(m, a2);
            tot += d;
            if (d) ur += t.u_rank(m, a2, 1);
        }
        if (tot != 1 || ur != 1)
            throw WindowNotStabilized("rank " + std::to_string(tot) + " at 2A=" + std::to_string(a2));
    }
    UDecomposition dec;
    for (auto& b : u_barcode(t, w, lines_of(t, w, 0), threads_)) {
        if (b.len < 0) {
            if (dec.has_tower || b.count != 1) throw WindowNotStabilized("more than one tower");
            dec.has_tower = true;
            dec.tower_m = b.m;
            dec.tower_a2 = b.a2;
        } else {
            for (int k = 0; k < b.count; ++k) dec.torsion.push_back({b.m, b.a2, b.len});
        }
    }
    if (!dec.has_tower) throw WindowNotStabilized("no tower reaches the window bottom");
    std::sort(dec.torsion.begin(), dec.torsion.end(),
              [](const UPiece& a, const UPiece& b) { return std::tie(b.s2, b.d, b.n) < std::tie(a.s2, a.d, a.n); });
    return dec;
}

Invariants Homology::invariants(const Window& w) const {
    Invariants inv;
    auto dec = decompose_minus(w);
    inv.tau = -dec.tower_a2 / 2;
    const auto& t = ghl();
    int mpad = 2 * w.vmax;
    bool have_u = false, have_uv = false;
    for (int a2 : levels(w)) {
        auto [lo, hi] = t.big().m_range(a2);
        int k = (a2 - w.a2_lo) / 2;
        for (int m = lo; m <= hi + mpad; ++m) {
            if (!t.dim(m, a2) || !t.u_rank(m, a2, k)) continue;
            if (!have_u) have_u = true, inv.tau_plus_u = -a2 / 2;
            if (!have_uv && t.v_rank(m, a2, w.vmax)) have_uv = true, inv.tau_plus = -a2 / 2;
        }
        if (have_u && have_uv) break;
    }
    if (!have_u || !have_uv) throw WindowNotStabilized("no nontorsion class in the window");
    inv.rho = 0;
    for (auto& b : u_barcode(t, w, lines_of(t, w, mpad), threads_))
        if (b.len > 0) inv.rho = std::max(inv.rho, b.len);
    return inv;
}

Del1Report Homology::del1_star(const Window& w) const {
    Del1Report rep;
    const auto& t = minus();
    auto cs = cells(t, w, 0);
    int K = 0;
    for (auto [m, a2] : cs) {
        int d = t.dim(m, a2);
        if (!d) continue;
        int r = t.d1_rank(m, a2);
        int rin = t.d1_rank(m + 3, a2);
        if (r) {
            rep.rank.emplace_back(m, a2, r);
            rep.identically_zero = false;
            if (t.u_after_d1_rank(m, a2, (a2 - w.a2_lo) / 2)) rep.image_u_torsion = false;
            for (K = 0; t.u_after_d1_rank(m, a2, K) > 0 && a2 - 2 * K >= w.a2_lo; ++K)
                rep.max_u_power_on_image = std::max(rep.max_u_power_on_image, K);
            if (t.d1_squared_rank(m, a2)) rep.squares_to_zero = false;
        }
        int shuffled = (int)t.deconvolve("d1shuf", m, a2, [&t](int mm, int aa) -> long {
            const auto& big = t.big();
            auto [mc, ac] = big.canonical(mm, aa);
            if (big.dim_mod2(mc, ac) == 0) return 0;
            return big.induced_rank_shuffled(mc, ac, big.d1_mod2(mc, ac), mc - 3, ac, 0x5eed + mc * 131 + ac);
        });
        if (shuffled != r) rep.representative_independent = false;
        int h = d - r - rin;
        if (h) rep.homology.emplace_back(m, a2, h);
    }
    if (comps_ == 1) {
        auto dec = decompose_minus(w);
        for (int k = 0; dec.tower_a2 - 2 * k >= w.a2_lo; ++k)
            if (t.d1_after_u_rank(dec.tower_m, dec.tower_a2, k)) rep.max_u_power_into_tower = k;
    }
    const auto& h = hat();
    for (int a2 = h.a2_top(); a2 >= h.big().a2_min(); a2 -= 2) {
        auto [lo, hi] = h.big().m_range(a2);
        for (int m = lo; m <= hi; ++m)
            if (h.dim(m, a2)) {
                int r = h.d1_rank(m, a2);
                if (r) {
                    rep.hat_rank.emplace_back(m, a2, r);
                    rep.identically_zero = false;
                }
            }
    }
    return rep;
}

SpectralReport Homology::spectral(const Window& w, int r_max) const {
    SpectralReport rep;
    const auto& t = ghl();
    auto cs = cells(t, w, 2 * w.vmax);
    // (m, a2, p) cells with filtration levels present in the slice
    std::vector<std::tuple<int, int, int>> cps;
    int smax = 1;
    for (auto [m, a2] : cs) {
        auto [lo, hi] = t.big().m_range(a2);
        for (int p = 0; 2 * p <= m - lo; ++p) cps.emplace_back(m, a2, p);
        smax = std::max(smax, (m - lo) / 2 + 2);
    }
    auto page = [&](int s) {
        std::vector<int> d(cps.size());
        parallel_for((int)cps.size(), threads_, [&](int i) {
            auto [m, a2, p] = cps[i];
            d[i] = t.spectral_dim(m, a2, p, s);
        });
        return d;
    };
    auto inf = page(smax);
    std::vector<std::vector<int>> pages;
    int rlast = std::max(r_max, 3);
    for (int r = 1; r <= rlast + 1; ++r) pages.push_back(page(r - 1));
    for (int r = 1; r <= r_max; ++r) {
        SpectralPage pg;
        pg.r = r;
        for (size_t i = 0; i < cps.size(); ++i)
            if (pages[r - 1][i]) pg.dims.emplace_back(std::get<0>(cps[i]), std::get<1>(cps[i]), std::get<2>(cps[i]), pages[r - 1][i]);
        rep.pages.push_back(pg);
    }
    for (int r = 2; r <= rlast; ++r)
        if (pages[r - 1] == pages[r] && pages[r - 1] == inf) {
            rep.collapsed_at = r;
            break;
        }
    if (rep.collapsed_at < 0 && pages[rlast - 1] != inf) {
        for (int r = rlast + 1; r < smax + 2; ++r)
            if (page(r - 1) == inf) {
                rep.collapsed_at = r;
                break;
            }
    }
    std::map<std::pair<int, int>, int> sums;
    for (size_t i = 0; i < cps.size(); ++i) sums[{std::get<0>(cps[i]), std::get<1>(cps[i])}] += inf[i];
    rep.converges_to_ghl = true;
    for (auto [m, a2] : cs)
        if (sums[{m, a2}] != t.dim(m, a2)) rep.converges_to_ghl = false;
    return rep;
}

std::map<std::pair<int, int>, int> Homology::hat_table() const {
    const auto& t = hat();
    const auto& big = t.big();
    std::vector<std::pair<int, int>> cs;
    for (int a2 = big.a2_max(); a2 >= big.a2_min(); a2 -= 2) {
        auto [lo, hi] = big.m_range(a2);
        for (int m = lo; m <= hi + 1; ++m) cs.emplace_back(m, a2);
    }
    // boundary ranks are the expensive part; fill the cache in parallel
    parallel_for((int)cs.size(), threads_, [&](int i) { big.d_rank(cs[i].first, cs[i].second); });
    std::map<std::pair<int, int>, int> out;
    for (auto [m, a2] : cs) {
        int d = t.dim(m, a2);
        if (d) out[{m, a2}] = d;
    }
    return out;
}

}  // namespace gridhom
