#include "gridhom/homology.hpp"

#include <algorithm>
#include <atomic>
#include <cstring>
#include <random>
#include <thread>

namespace gridhom {

EngineConfig engine_config(const ComplexSpec& c) {
    EngineConfig e;
    // drop killed variables from the numbering
    std::vector<int> used(c.nvars, 0), renum(c.nvars, -1);
    for (int v : c.var_of_col)
        if (v >= 0) used[v] = 1;
    for (int v = 0; v < c.nvars; ++v)
        if (used[v]) renum[v] = e.nvars++;
    for (int v : c.var_of_col) e.var_of_col.push_back(v < 0 ? -1 : renum[v]);
    e.with_v = c.with_v;
    e.is_signed = c.is_signed;
    e.gauge_seed = c.signs.gauge_seed();
    return e;
}

EngineConfig all_collapsed_config(const GridDiagram& g, bool with_v, bool is_signed, bool hat) {
    EngineConfig e;
    e.var_of_col.assign(g.n, hat ? -1 : 0);
    e.nvars = hat ? 0 : 1;
    e.with_v = with_v;
    e.is_signed = is_signed;
    return e;
}

namespace {

std::string slice_key(std::uint32_t s, const std::uint16_t* e, int k, int j) {
    std::string key(4 + 2 * k + 2, '\0');
    std::memcpy(key.data(), &s, 4);
    if (k) std::memcpy(key.data() + 4, e, 2 * k);
    std::uint16_t jj = (std::uint16_t)j;
    std::memcpy(key.data() + 4 + 2 * k, &jj, 2);
    return key;
}

// all exponent vectors of total degree `deg` in k variables
void compositions(int k, int deg, std::vector<std::uint16_t>& cur, const std::function<void()>& f) {
    if (k == 0) {
        if (deg == 0) f();
        return;
    }
    int pos = (int)cur.size();
    if (k == 1) {
        cur.push_back((std::uint16_t)deg);
        f();
        cur.pop_back();
        return;
    }
    for (int d = deg; d >= 0; --d) {
        cur.push_back((std::uint16_t)d);
        compositions(k - 1, deg - d, cur, f);
        cur.resize(pos);
    }
}

}  // namespace

int Slice::find(std::uint32_t s, const std::uint16_t* e, int j) const {
    auto it = index.find(slice_key(s, e, nvars, j));
    return it == index.end() ? -1 : it->second;
}

SliceComplex::SliceComplex(const GridDiagram& g, EngineConfig cfg) : g_(g), cfg_(std::move(cfg)) {
    int n = g.n;
    periodic_ = cfg_.nvars == 1 && std::all_of(cfg_.var_of_col.begin(), cfg_.var_of_col.end(), [](int v) { return v == 0; });
    states_ = all_states(n);
    grad_.reserve(states_.size());
    a2_max_ = -1 << 30;
    a2_min_ = 1 << 30;
    for (auto& x : states_) {
        grad_.push_back(grading(g, x));
        a2_max_ = std::max(a2_max_, grad_.back().a2);
        a2_min_ = std::min(a2_min_, grad_.back().a2);
    }
    std::vector<unsigned char> sbit;
    if (cfg_.is_signed) {
        SignAssignment sa(n, cfg_.gauge_seed);
        sbit.resize(states_.size());
        for (size_t i = 0; i < states_.size(); ++i) sbit[i] = (unsigned char)sa.state_bit(states_[i]);
    }
    int k = cfg_.nvars;
    arrow_start_.reserve(states_.size() + 1);
    std::vector<std::uint8_t> oc(std::max(k, 1));
    for (size_t xi = 0; xi < states_.size(); ++xi) {
        arrow_start_.push_back((std::uint32_t)arrows_.size());
        const Perm& x = states_[xi];
        for_each_rect(g, x, false, [&](const RectGeom& r) {
            if (!cfg_.with_v && r.interior > 1) return;
            Rect cells;
            cells.c1 = r.c1;
            cells.row0 = r.row0;
            cells.w = r.w;
            cells.h = r.h;
            cells.dir = r.dir;
            std::fill(oc.begin(), oc.end(), 0);
            for (int col = 0; col < n; ++col) {
                if (cells.cell(n, col, g.x_rows[col])) return;
                if (cells.cell(n, col, g.o_rows[col])) {
                    int v = cfg_.var_of_col[col];
                    if (v < 0) return;
                    ++oc[v];
                }
            }
            Perm y = x;
            std::swap(y[r.c1], y[r.c2]);
            Arrow a;
            a.to = (std::uint32_t)rank_perm(y);
            a.T = (std::uint8_t)r.interior;
            a.sign = 1;
            if (cfg_.is_signed && ((local_sign_bit(x, r.c1, r.c2) ^ sbit[xi] ^ sbit[a.to]) & 1)) a.sign = -1;
            a.ooff = (std::uint32_t)ocount_.size();
            ocount_.insert(ocount_.end(), oc.begin(), oc.begin() + k);
            arrows_.push_back(a);
        });
    }
    arrow_start_.push_back((std::uint32_t)arrows_.size());
}

SliceComplex::SliceComplex(std::vector<Bigrading> gens, const ArrowTable& d, EngineConfig cfg) : cfg_(std::move(cfg)) {
    periodic_ = cfg_.nvars == 1;
    grad_ = std::move(gens);
    a2_max_ = -1 << 30;
    a2_min_ = 1 << 30;
    for (auto& b : grad_) {
        a2_max_ = std::max(a2_max_, b.a2);
        a2_min_ = std::min(a2_min_, b.a2);
    }
    int k = cfg_.nvars;
    for (size_t i = 0; i < grad_.size(); ++i) {
        arrow_start_.push_back((std::uint32_t)arrows_.size());
        for (auto& g : d[i]) {
            Arrow a;
            a.to = g.to;
            a.T = (std::uint8_t)g.T;
            a.sign = (std::int8_t)g.sign;
            a.ooff = (std::uint32_t)ocount_.size();
            for (int t = 0; t < k; ++t) ocount_.push_back((std::uint8_t)(t < (int)g.o.size() ? g.o[t] : 0));
            arrows_.push_back(a);
        }
    }
    arrow_start_.push_back((std::uint32_t)arrows_.size());
}

BitMatrix SliceComplex::map_matrix(int m, int a2, const ArrowTable& f, const SliceComplex& other, int mt, int a2t) const {
    auto S = slice(m, a2);
    auto T = other.slice(mt, a2t);
    BitMatrix mat(S->size(), T->size());
    int k = cfg_.nvars;
    if (other.cfg_.nvars != k) throw GridError("VariantMismatch", "map between complexes with different variables");
    std::vector<std::uint16_t> e(std::max(k, 1));
    for (int i = 0; i < S->size(); ++i)
        for (auto& ar : f[S->state[i]]) {
            if (ar.T > 0 && !other.cfg_.with_v) continue;
            for (int t = 0; t < k; ++t) e[t] = (std::uint16_t)(S->mono[(size_t)i * k + t] + (t < (int)ar.o.size() ? ar.o[t] : 0));
            int c = T->find(ar.to, e.data(), S->vpow[i] + (other.cfg_.with_v ? ar.T : 0));
            if (c < 0) throw GridError("InternalGradingNonIntegral", "map is not homogeneous");
            mat.flip(i, c);
        }
    return mat;
}

int SliceComplex::induced_rank_to(int m, int a2, const BitMatrix& f, const SliceComplex& other, int mt, int a2t) const {
    auto src = hom_basis(m, a2);
    if (src->nh == 0) return 0;
    auto tgt = other.hom_basis(mt, a2t);
    BitMatrix reps(0, src->ech.cols());
    for (int r = src->nb; r < src->ech.rows(); ++r) reps.append_row(src->ech.row(r));
    return induced_from_reps(reps, f, *tgt);
}

bool SliceComplex::d_squared_zero(int m, int a2) const {
    BitMatrix dd = d_mod2(m, a2).multiply(d_mod2(m - 1, a2));
    for (int i = 0; i < dd.rows(); ++i)
        for (int w = 0; w < dd.words(); ++w)
            if (dd.row(i)[w]) return false;
    return true;
}

std::pair<int, int> SliceComplex::m_range(int a2) const {
    int lo = 1 << 30, hi = -(1 << 30);
    for (size_t i = 0; i < grad_.size(); ++i) {
        int d = grad_[i].a2 - a2;
        if (d < 0 || (d & 1)) continue;
        if (cfg_.nvars == 0 && d) continue;
        int m0 = grad_[i].m - d;
        lo = std::min(lo, m0);
        hi = std::max(hi, m0);
    }
    return {lo, hi};
}

std::shared_ptr<Slice> SliceComplex::build_slice(int m, int a2) const {
    auto s = std::make_shared<Slice>();
    s->m = m;
    s->a2 = a2;
    int k = cfg_.nvars;
    s->nvars = k;
    std::vector<std::uint16_t> cur;
    for (size_t i = 0; i < grad_.size(); ++i) {
        int d = grad_[i].a2 - a2;
        if (d < 0 || (d & 1)) continue;
        int E = d / 2;
        int m0 = grad_[i].m - 2 * E;
        if (m < m0 || ((m - m0) & 1)) continue;
        int j = (m - m0) / 2;
        if (!cfg_.with_v && j) continue;
        cur.clear();
        compositions(k, E, cur, [&] {
            int idx = s->size();
            s->state.push_back((std::uint32_t)i);
            s->mono.insert(s->mono.end(), cur.begin(), cur.end());
            s->vpow.push_back((std::uint16_t)j);
            s->index.emplace(slice_key((std::uint32_t)i, cur.data(), k, j), idx);
        });
    }
    return s;
}

std::shared_ptr<const Slice> SliceComplex::slice(int m, int a2) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = slices_.find({m, a2});
        if (it != slices_.end()) return it->second;
    }
    std::shared_ptr<const Slice> s = build_slice(m, a2);
    std::lock_guard<std::mutex> lk(mu_);
    return slices_.emplace(std::make_pair(m, a2), s).first->second;
}

// want(arrow) returns the v power the term gains, or -1 to drop it
template <class Want>
BitMatrix SliceComplex::arrow_matrix(int m, int a2, int mt, Want want) const {
    auto S = slice(m, a2);
    auto T = slice(mt, a2);
    BitMatrix mat(S->size(), T->size());
    int k = cfg_.nvars;
    std::vector<std::uint16_t> e(std::max(k, 1));
    for (int i = 0; i < S->size(); ++i) {
        std::uint32_t x = S->state[i];
        for (std::uint32_t a = arrow_start_[x]; a < arrow_start_[x + 1]; ++a) {
            const Arrow& ar = arrows_[a];
            int dv = want(ar);
            if (dv < 0) continue;
            for (int t = 0; t < k; ++t) e[t] = (std::uint16_t)(S->mono[(size_t)i * k + t] + ocount_[ar.ooff + t]);
            int c = T->find(ar.to, e.data(), S->vpow[i] + dv);
            if (c < 0) throw GridError("InternalGradingNonIntegral", "arrow leaves its slice");
            mat.flip(i, c);
        }
    }
    return mat;
}

BitMatrix SliceComplex::d_mod2(int m, int a2) const {
    bool wv = cfg_.with_v;
    return arrow_matrix(m, a2, m - 1, [wv](const Arrow& a) { return a.T == 0 ? 0 : (wv ? (int)a.T : -1); });
}

BitMatrix SliceComplex::d1_mod2(int m, int a2) const {
    return arrow_matrix(m, a2, m - 3, [](const Arrow& a) { return a.T == 1 ? 0 : -1; });
}

BitMatrix SliceComplex::times_mod2(int m, int a2, int var, int power) const {
    int k = cfg_.nvars;
    int mt = var < 0 ? m + 2 * power : m - 2 * power;
    int at = var < 0 ? a2 : a2 - 2 * power;
    auto S = slice(m, a2);
    auto T = slice(mt, at);
    BitMatrix mat(S->size(), T->size());
    std::vector<std::uint16_t> e(std::max(k, 1));
    for (int i = 0; i < S->size(); ++i) {
        for (int t = 0; t < k; ++t) e[t] = S->mono[(size_t)i * k + t];
        int j = S->vpow[i];
        if (var < 0)
            j += power;
        else
            e[var] = (std::uint16_t)(e[var] + power);
        int c = T->find(S->state[i], e.data(), j);
        if (c >= 0) mat.flip(i, c);
    }
    return mat;
}

std::vector<std::vector<std::pair<int, long long>>> SliceComplex::d_int(int m, int a2) const {
    auto S = slice(m, a2);
    auto T = slice(m - 1, a2);
    std::vector<std::vector<std::pair<int, long long>>> rows(S->size());
    int k = cfg_.nvars;
    std::vector<std::uint16_t> e(std::max(k, 1));
    for (int i = 0; i < S->size(); ++i) {
        std::uint32_t x = S->state[i];
        for (std::uint32_t a = arrow_start_[x]; a < arrow_start_[x + 1]; ++a) {
            const Arrow& ar = arrows_[a];
            if (ar.T > 0 && !cfg_.with_v) continue;
            for (int t = 0; t < k; ++t) e[t] = (std::uint16_t)(S->mono[(size_t)i * k + t] + ocount_[ar.ooff + t]);
            int c = T->find(ar.to, e.data(), S->vpow[i] + (cfg_.with_v ? ar.T : 0));
            if (c < 0) throw GridError("InternalGradingNonIntegral", "arrow leaves its slice");
            rows[i].emplace_back(c, (long long)ar.sign);
        }
    }
    return rows;
}

int SliceComplex::d_rank(int m, int a2) const {
    std::tie(m, a2) = canonical(m, a2);
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = d_ranks_.find({m, a2});
        if (it != d_ranks_.end()) return it->second;
    }
    auto S = slice(m, a2);
    auto T = slice(m - 1, a2);
    int r;
    if ((long)S->size() * T->size() > 600'000'000L)
        r = (int)d_rank_sparse(m, a2);
    else
        r = gf2_rank(d_mod2(m, a2));
    std::lock_guard<std::mutex> lk(mu_);
    d_ranks_[{m, a2}] = r;
    return r;
}

long SliceComplex::d_rank_sparse(int m, int a2) const {
    auto rows = d_int(m, a2);
    std::vector<std::vector<std::uint32_t>> sp(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        auto& r = sp[i];
        for (auto [c, v] : rows[i]) r.push_back((std::uint32_t)c);
        std::sort(r.begin(), r.end());
        // cancel repeated columns mod 2
        std::vector<std::uint32_t> odd;
        for (size_t a = 0; a < r.size();) {
            size_t b = a;
            while (b < r.size() && r[b] == r[a]) ++b;
            if ((b - a) & 1) odd.push_back(r[a]);
            a = b;
        }
        r.swap(odd);
    }
    return sparse_gf2_rank(std::move(sp));
}

int SliceComplex::dim_mod2(int m, int a2) const {
    std::tie(m, a2) = canonical(m, a2);
    return slice(m, a2)->size() - d_rank(m, a2) - d_rank(m + 1, a2);
}

ZHomology SliceComplex::hom_z(int m, int a2) const {
    std::tie(m, a2) = canonical(m, a2);
    auto S = slice(m, a2);
    auto out = int_smith(S->size(), slice(m - 1, a2)->size(), d_int(m, a2));
    auto in = int_smith(slice(m + 1, a2)->size(), S->size(), d_int(m + 1, a2));
    ZHomology h;
    h.free_rank = S->size() - out.rank - in.rank;
    h.torsion = in.torsion;
    return h;
}

std::pair<int, int> SliceComplex::canonical(int m, int a2) const {
    if (!periodic_ || a2 >= a2_min_) return {m, a2};
    return {m + (a2_min_ - a2), a2_min_};
}

std::shared_ptr<const SliceComplex::HomBasis> SliceComplex::hom_basis(int m, int a2) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = bases_.find({m, a2});
        if (it != bases_.end()) return it->second;
    }
    auto hb = std::make_shared<HomBasis>();
    auto S = slice(m, a2);
    int N = S->size();
    hb->ech = BitMatrix(0, N);
    int want = dim_mod2(m, a2);
    if (want > 0) {
        std::vector<std::uint64_t> row(hb->ech.words());
        auto insert = [&](const std::uint64_t* src) {
            std::copy(src, src + row.size(), row.begin());
            for (int r = 0; r < hb->ech.rows(); ++r) {
                int pc = hb->piv[r];
                if ((row[pc >> 6] >> (pc & 63)) & 1) {
                    const std::uint64_t* q = hb->ech.row(r);
                    for (size_t w = 0; w < row.size(); ++w) row[w] ^= q[w];
                }
            }
            for (size_t w = 0; w < row.size(); ++w)
                if (row[w]) {
                    hb->piv.push_back((int)(w * 64 + __builtin_ctzll(row[w])));
                    hb->ech.append_row(row.data());
                    return true;
                }
            return false;
        };
        BitMatrix din = d_mod2(m + 1, a2);
        for (int i = 0; i < din.rows(); ++i) insert(din.row(i));
        hb->nb = hb->ech.rows();
        BitMatrix z = gf2_left_kernel(d_mod2(m, a2));
        for (int i = 0; i < z.rows() && hb->nh < want; ++i)
            if (insert(z.row(i))) ++hb->nh;
        if (hb->nh != want) throw GridError("InternalGradingNonIntegral", "homology basis size mismatch");
    }
    std::lock_guard<std::mutex> lk(mu_);
    return bases_.emplace(std::make_pair(m, a2), hb).first->second;
}

std::vector<std::uint64_t> SliceComplex::coords(const HomBasis& b, std::vector<std::uint64_t> v) const {
    std::vector<std::uint64_t> c((b.nh + 63) / 64, 0);
    for (int r = 0; r < b.ech.rows(); ++r) {
        int pc = b.piv[r];
        if ((v[pc >> 6] >> (pc & 63)) & 1) {
            const std::uint64_t* q = b.ech.row(r);
            for (size_t w = 0; w < v.size(); ++w) v[w] ^= q[w];
            if (r >= b.nb) c[(r - b.nb) >> 6] ^= 1ULL << ((r - b.nb) & 63);
        }
    }
    for (auto w : v)
        if (w) throw GridError("InternalGradingNonIntegral", "image is not a cycle");
    return c;
}

int SliceComplex::induced_from_reps(const BitMatrix& reps, const BitMatrix& f, const HomBasis& tgt) const {
    if (reps.rows() == 0 || tgt.nh == 0) return 0;
    BitMatrix img = reps.multiply(f);
    BitMatrix m(0, tgt.nh);
    for (int i = 0; i < img.rows(); ++i) {
        std::vector<std::uint64_t> v(img.row(i), img.row(i) + img.words());
        auto c = coords(tgt, std::move(v));
        m.append_row(c.data());
    }
    return gf2_rank(m);
}

int SliceComplex::induced_rank(int m, int a2, const BitMatrix& f, int mt, int a2t) const {
    auto src = hom_basis(m, a2);
    if (src->nh == 0) return 0;
    auto tgt = hom_basis(mt, a2t);
    BitMatrix reps(0, src->ech.cols());
    for (int r = src->nb; r < src->ech.rows(); ++r) reps.append_row(src->ech.row(r));
    return induced_from_reps(reps, f, *tgt);
}

int SliceComplex::induced_rank_shuffled(int m, int a2, const BitMatrix& f, int mt, int a2t, std::uint64_t seed) const {
    auto src = hom_basis(m, a2);
    if (src->nh == 0) return 0;
    auto tgt = hom_basis(mt, a2t);
    std::mt19937_64 rng(seed);
    // other representatives: unitriangular recombination plus random boundaries
    BitMatrix reps(0, src->ech.cols());
    for (int r = src->nb; r < src->ech.rows(); ++r) {
        reps.append_row(src->ech.row(r));
        std::uint64_t* dst = reps.row(reps.rows() - 1);
        for (int q = 0; q < r; ++q)
            if (rng() & 1) {
                const std::uint64_t* add = q < src->nb ? src->ech.row(q) : reps.row(q - src->nb);
                for (int w = 0; w < reps.words(); ++w) dst[w] ^= add[w];
            }
    }
    return induced_from_reps(reps, f, *tgt);
}

std::shared_ptr<const std::vector<std::pair<int, int>>> SliceComplex::filtered_pairs(int m, int a2) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = pairs_.find({m, a2});
        if (it != pairs_.end()) return it->second;
    }
    auto S = slice(m, a2);
    auto T = slice(m - 1, a2);
    auto out = std::make_shared<std::vector<std::pair<int, int>>>();
    if (S->size() && T->size()) {
        BitMatrix d = d_mod2(m, a2);
        // targets by descending level so the last set bit is the lowest level hit
        std::vector<int> tord(T->size()), sord(S->size());
        for (int i = 0; i < T->size(); ++i) tord[i] = i;
        for (int i = 0; i < S->size(); ++i) sord[i] = i;
        std::stable_sort(tord.begin(), tord.end(), [&](int a, int b) { return T->vpow[a] > T->vpow[b]; });
        std::stable_sort(sord.begin(), sord.end(), [&](int a, int b) { return S->vpow[a] > S->vpow[b]; });
        BitMatrix r = d.select_rows(sord).select_cols(tord);
        int W = r.words();
        std::vector<int> owner(T->size(), -1);
        auto low = [&](int i) {
            const std::uint64_t* q = r.row(i);
            for (int w = W - 1; w >= 0; --w)
                if (q[w]) return w * 64 + 63 - __builtin_clzll(q[w]);
            return -1;
        };
        for (int i = 0; i < r.rows(); ++i) {
            int l = low(i);
            while (l >= 0 && owner[l] >= 0) {
                const std::uint64_t* q = r.row(owner[l]);
                std::uint64_t* p = r.row(i);
                for (int w = 0; w < W; ++w) p[w] ^= q[w];
                l = low(i);
            }
            if (l >= 0) {
                owner[l] = i;
                out->emplace_back(S->vpow[sord[i]], T->vpow[tord[l]]);
            }
        }
    }
    std::lock_guard<std::mutex> lk(mu_);
    return pairs_.emplace(std::make_pair(m, a2), out).first->second;
}

int SliceComplex::spectral_dim(int m, int a2, int p, int s) const {
    std::tie(m, a2) = canonical(m, a2);
    auto S = slice(m, a2);
    int d = 0;
    for (int i = 0; i < S->size(); ++i) d += S->vpow[i] == p;
    if (!d) return 0;
    for (auto [ps, pt] : *filtered_pairs(m, a2))
        if (ps == p && pt - ps < s) --d;
    for (auto [ps, pt] : *filtered_pairs(m + 1, a2))
        if (pt == p && pt - ps < s) --d;
    return d;
}

namespace {

long binom(int n, int k) {
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

DeconvolvedTable::DeconvolvedTable(std::shared_ptr<const SliceComplex> big, int wfactors)
    : big_(std::move(big)), w_(wfactors) {}

long DeconvolvedTable::deconvolve(const std::string& tag, int m, int a2, const std::function<long(int, int)>& big_value) const {
    if (a2 > a2_top()) return 0;
    auto key = std::make_tuple(tag, m, a2);
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    }
    long v = big_value(m, a2);
    for (int k = 1; k <= w_; ++k) v -= binom(w_, k) * deconvolve(tag, m + k, a2 + 2 * k, big_value);
    std::lock_guard<std::mutex> lk(mu_);
    memo_[key] = v;
    return v;
}

int DeconvolvedTable::dim(int m, int a2) const {
    return (int)deconvolve("dim", m, a2, [this](int mm, int aa) { return (long)big_->dim_mod2(mm, aa); });
}

std::pair<long, std::map<std::string, long>> DeconvolvedTable::z_counts(int m, int a2) const {
    if (a2 > a2_top()) return {};
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = zmemo_.find({m, a2});
        if (it != zmemo_.end()) return it->second;
    }
    ZHomology h = big_->hom_z(m, a2);
    std::pair<long, std::map<std::string, long>> r;
    r.first = h.free_rank;
    for (auto& t : h.torsion) ++r.second[t];
    for (int k = 1; k <= w_; ++k) {
        auto sub = z_counts(m + k, a2 + 2 * k);
        long c = binom(w_, k);
        r.first -= c * sub.first;
        for (auto& [t, cnt] : sub.second) r.second[t] -= c * cnt;
    }
    for (auto it = r.second.begin(); it != r.second.end();)
        it = it->second == 0 ? r.second.erase(it) : std::next(it);
    std::lock_guard<std::mutex> lk(mu_);
    zmemo_[{m, a2}] = r;
    return r;
}

ZHomology DeconvolvedTable::hom_z(int m, int a2) const {
    auto c = z_counts(m, a2);
    ZHomology h;
    h.free_rank = (int)c.first;
    for (auto& [t, cnt] : c.second)
        for (long i = 0; i < cnt; ++i) h.torsion.push_back(t);
    std::sort(h.torsion.begin(), h.torsion.end(), [](const std::string& a, const std::string& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return h;
}

namespace {

// U^k with the source below the lowest state grading is an isomorphism followed by nothing new:
// shorten k and move the source to its representative slice
std::tuple<int, int, int> shorten(const SliceComplex& big, int m, int a2, int k) {
    if (!big.u_periodic()) return {m, a2, k};
    int room = std::max(0, (a2 - big.a2_min()) / 2);
    k = std::min(k, room);
    auto [mc, ac] = big.canonical(m, a2);
    return {mc, ac, k};
}

}  // namespace

int DeconvolvedTable::u_rank(int m, int a2, int k) const {
    return (int)deconvolve("u" + std::to_string(k), m, a2, [this, k](int mm, int aa) -> long {
        auto [mc, ac, kk] = shorten(*big_, mm, aa, k);
        if (kk == 0) return big_->dim_mod2(mc, ac);
        if (big_->dim_mod2(mc, ac) == 0) return 0;
        return big_->induced_rank(mc, ac, big_->times_mod2(mc, ac, 0, kk), mc - 2 * kk, ac - 2 * kk);
    });
}

int DeconvolvedTable::v_rank(int m, int a2, int k) const {
    return (int)deconvolve("v" + std::to_string(k), m, a2, [this, k](int mm, int aa) -> long {
        auto [mc, ac] = big_->canonical(mm, aa);
        if (big_->dim_mod2(mc, ac) == 0) return 0;
        return big_->induced_rank(mc, ac, big_->times_mod2(mc, ac, -1, k), mc + 2 * k, ac);
    });
}

int DeconvolvedTable::d1_rank(int m, int a2) const {
    return (int)deconvolve("d1", m, a2, [this](int mm, int aa) -> long {
        auto [mc, ac] = big_->canonical(mm, aa);
        if (big_->dim_mod2(mc, ac) == 0) return 0;
        return big_->induced_rank(mc, ac, big_->d1_mod2(mc, ac), mc - 3, ac);
    });
}

int DeconvolvedTable::d1_squared_rank(int m, int a2) const {
    return (int)deconvolve("d1d1", m, a2, [this](int mm, int aa) -> long {
        auto [mc, ac] = big_->canonical(mm, aa);
        if (big_->dim_mod2(mc, ac) == 0) return 0;
        return big_->induced_rank(mc, ac, big_->d1_mod2(mc, ac).multiply(big_->d1_mod2(mc - 3, ac)), mc - 6, ac);
    });
}

int DeconvolvedTable::u_after_d1_rank(int m, int a2, int k) const {
    return (int)deconvolve("ud1_" + std::to_string(k), m, a2, [this, k](int mm, int aa) -> long {
        auto [mc, ac, kk] = shorten(*big_, mm, aa, k);
        if (big_->dim_mod2(mc, ac) == 0) return 0;
        BitMatrix f = big_->d1_mod2(mc, ac);
        if (kk) f = f.multiply(big_->times_mod2(mc - 3, ac, 0, kk));
        return big_->induced_rank(mc, ac, f, mc - 3 - 2 * kk, ac - 2 * kk);
    });
}

int DeconvolvedTable::d1_after_u_rank(int m, int a2, int k) const {
    return (int)deconvolve("d1u_" + std::to_string(k), m, a2, [this, k](int mm, int aa) -> long {
        auto [mc, ac, kk] = shorten(*big_, mm, aa, k);
        if (big_->dim_mod2(mc, ac) == 0) return 0;
        BitMatrix f = big_->d1_mod2(mc - 2 * kk, ac - 2 * kk);
        if (kk) f = big_->times_mod2(mc, ac, 0, kk).multiply(f);
        return big_->induced_rank(mc, ac, f, mc - 3 - 2 * kk, ac - 2 * kk);
    });
}

int DeconvolvedTable::spectral_dim(int m, int a2, int p, int s) const {
    std::string tag = "E" + std::to_string(p) + "_" + std::to_string(s);
    return (int)deconvolve(tag, m, a2, [this, p, s](int mm, int aa) -> long { return big_->spectral_dim(mm, aa, p, s); });
}

Window default_window(const GridDiagram& g, int vmax) {
    int lo = 1 << 30, hi = -(1 << 30);
    for (auto& x : all_states(g.n)) {
        int a2 = grading(g, x).a2;
        lo = std::min(lo, a2);
        hi = std::max(hi, a2);
    }
    Window w;
    w.a2_hi = hi;
    w.a2_lo = lo - 2 * (g.n + 2);
    w.vmax = vmax;
    return w;
}

std::map<std::pair<int, int>, int> direct_dims(const SliceComplex& c, int a2_lo, int a2_hi, int m_pad) {
    std::map<std::pair<int, int>, int> out;
    for (int a2 = a2_hi; a2 >= a2_lo; a2 -= 2) {
        auto [lo, hi] = c.m_range(a2);
        for (int m = lo; m <= hi + m_pad; ++m) {
            int d = c.dim_mod2(m, a2);
            if (d) out[{m, a2}] = d;
        }
    }
    return out;
}

void parallel_for(int count, int threads, const std::function<void(int)>& f) {
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex emu;
    for (int t = 0; t < std::min(threads, count); ++t)
        pool.emplace_back([&] {
            for (int i; (i = next++) < count;) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(emu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace gridhom
