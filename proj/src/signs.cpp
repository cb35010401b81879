#include "gridhom/signs.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

namespace gridhom {

namespace {

// inverted value pairs of s that are disjoint from {s[k], s[k+1]} and lex-greater than it
int disjoint_later(const Perm& s, int k) {
    int p = std::min(s[k], s[k + 1]), q = std::max(s[k], s[k + 1]);
    int n = (int)s.size(), cnt = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (s[i] < s[j]) continue;
            int a = s[j], b = s[i];
            if (a == p || a == q || b == p || b == q) continue;
            if (a > p) ++cnt;
        }
    return cnt & 1;
}

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::vector<int> canonical_word(const Perm& p) {
    Perm s = p;
    int n = (int)s.size();
    std::vector<int> pos(n);
    std::vector<int> w;
    for (;;) {
        for (int i = 0; i < n; ++i) pos[s[i]] = i;
        int k = 0;
        while (k + 1 < n && pos[k] < pos[k + 1]) ++k;
        if (k + 1 >= n) break;
        // left multiply by (k k+1): swap the values k and k+1
        std::swap(s[pos[k]], s[pos[k + 1]]);
        w.push_back(k);
    }
    return w;
}

int section_parity(const Perm& p) {
    int n = (int)p.size();
    Perm s(n);
    std::iota(s.begin(), s.end(), 0);
    int f = 0;
    for (int k : canonical_word(p)) {
        f ^= disjoint_later(s, k);
        std::swap(s[k], s[k + 1]);
    }
    return f;
}

SpinElement spin_identity(int n) {
    SpinElement e;
    e.perm.resize(n);
    std::iota(e.perm.begin(), e.perm.end(), 0);
    return e;
}

SpinElement spin_mul_gen(const SpinElement& a, int k) {
    SpinElement r = a;
    Perm& s = r.perm;
    int bit;
    if (s[k] < s[k + 1]) {
        bit = section_parity(s) ^ disjoint_later(s, k);
        std::swap(s[k], s[k + 1]);
        bit ^= section_parity(s);
    } else {
        bit = section_parity(s);
        std::swap(s[k], s[k + 1]);
        bit ^= section_parity(s) ^ disjoint_later(s, k) ^ 1;
    }
    r.z ^= bit;
    return r;
}

SpinElement spin_gen(int n, int k) { return spin_mul_gen(spin_identity(n), k); }

SpinElement spin_tau(int n, int i, int j) {
    int lo = std::min(i, j), hi = std::max(i, j);
    SpinElement e = spin_identity(n);
    for (int k = hi - 1; k > lo; --k) e = spin_mul_gen(e, k);
    for (int k = lo; k < hi; ++k) e = spin_mul_gen(e, k);
    if (i > j) e.z ^= 1;
    return e;
}

SpinElement spin_section(const Perm& p) { return SpinElement{p, 0}; }

SpinElement spin_mul(const SpinElement& a, const SpinElement& b) {
    SpinElement r = a;
    for (int k : canonical_word(b.perm)) r = spin_mul_gen(r, k);
    r.z ^= b.z;
    return r;
}

SpinElement spin_inverse(const SpinElement& a) {
    // inverse of a word of length m is the reversed word times z^m
    auto w = canonical_word(a.perm);
    SpinElement r = spin_identity((int)a.perm.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) r = spin_mul_gen(r, *it);
    r.z ^= ((int)w.size() & 1) ^ a.z;
    return r;
}

int local_sign_bit(const Perm& x, int c1, int c2) {
    int lo = std::min(c1, c2), hi = std::max(c1, c2);
    Perm s = x;
    int bit = c1 > c2 ? 1 : 0;
    auto step = [&](int k) {
        if (s[k] < s[k + 1]) {
            bit ^= disjoint_later(s, k);
            std::swap(s[k], s[k + 1]);
        } else {
            std::swap(s[k], s[k + 1]);
            bit ^= disjoint_later(s, k) ^ 1;
        }
    };
    for (int k = hi - 1; k > lo; --k) step(k);
    for (int k = lo; k < hi; ++k) step(k);
    return bit;
}

int rect_sign(const Perm& x, int c1, int c2) {
    Perm y = x;
    std::swap(y[c1], y[c2]);
    int bit = local_sign_bit(x, c1, c2) ^ section_parity(x) ^ section_parity(y);
    return bit ? -1 : 1;
}

SignAssignment::SignAssignment(int n, std::uint64_t gauge_seed) : n_(n), gauge_seed_(gauge_seed) {
    if (n > 7) return;
    auto t = std::make_shared<std::vector<unsigned char>>(factorial(n));
    std::uint64_t r = 0;
    for (const Perm& p : all_states(n)) (*t)[r++] = (unsigned char)section_parity(p);
    table_ = t;
}

int SignAssignment::state_bit(const Perm& x) const {
    int b = table_ ? (*table_)[rank_perm(x)] : section_parity(x);
    if (gauge_seed_) b ^= (int)(mix(gauge_seed_ ^ mix(rank_perm(x))) & 1);
    return b;
}

int SignAssignment::sign(const Perm& x, int c1, int c2) const {
    Perm y = x;
    std::swap(y[c1], y[c2]);
    int bit = local_sign_bit(x, c1, c2) ^ state_bit(x) ^ state_bit(y);
    return bit ? -1 : 1;
}

AxiomReport verify_sign_axioms(const GridDiagram& g, const SignAssignment& s, bool exhaustive, long samples,
                               std::uint64_t seed) {
    int n = g.n;
    AxiomReport rep;
    struct Decomp {
        int sgn;
        bool l1, l2;
        Perm mid;
    };
    auto domain_key = [&](const Rect& a, const Rect& b) {
        std::vector<int> key(n * n);
        for (int c = 0; c < n; ++c)
            for (int r = 0; r < n; ++r) key[c * n + r] = a.cell(n, c, r) + b.cell(n, c, r);
        return key;
    };
    auto classify_annulus = [&](const std::vector<int>& key) -> char {
        // columns (resp. rows) each entirely one or entirely zero
        bool vert = true, hor = true;
        for (int c = 0; c < n; ++c)
            for (int r = 0; r < n; ++r) {
                int v = key[c * n + r];
                if (v > 1) return '?';
                if (v != key[c * n]) vert = false;
                if (v != key[r]) hor = false;
            }
        return vert ? 'v' : hor ? 'h' : '?';
    };
    auto check_start = [&](const Perm& x, const std::vector<int>* only_key, const Perm* only_end) {
        std::map<std::pair<Perm, std::vector<int>>, std::vector<Decomp>> groups;
        for (const Rect& r1 : rects_from(g, x, true))
            for (const Rect& r2 : rects_from(g, r1.to, true)) {
                if (only_end && r2.to != *only_end) continue;
                auto key = domain_key(r1, r2);
                if (only_key && key != *only_key) continue;
                groups[{r2.to, key}].push_back(Decomp{s.sign(r1) * s.sign(r2), r1.dir != '-', r2.dir != '-', r1.to});
            }
        for (auto& [k, ds] : groups) {
            ++rep.domains;
            const Perm& z = k.first;
            if (z == x) {
                char kind = classify_annulus(k.second);
                for (auto& d : ds) {
                    if (d.l1 || d.l2 || kind == '?') continue;
                    ++rep.checked;
                    int want = kind == 'v' ? -1 : 1;
                    if (d.sgn != want)
                        rep.violations.push_back({kind == 'v' ? "(3)" : "(2)", x, z, "annulus product " + std::to_string(d.sgn)});
                }
                continue;
            }
            for (size_t i = 0; i < ds.size(); ++i)
                for (size_t j = i + 1; j < ds.size(); ++j) {
                    if (ds[i].mid == ds[j].mid) continue;
                    if ((ds[i].l1 && ds[i].l2) || (ds[j].l1 && ds[j].l2)) continue;
                    bool any_long = ds[i].l1 || ds[i].l2 || ds[j].l1 || ds[j].l2;
                    ++rep.checked;
                    if (ds[i].sgn != -ds[j].sgn) rep.violations.push_back({any_long ? "(1')" : "(1)", x, z, "equal products"});
                }
        }
    };
    if (exhaustive) {
        for (const Perm& x : all_states(n)) check_start(x, nullptr, nullptr);
        return rep;
    }
    std::mt19937_64 rng(seed);
    for (long t = 0; t < samples; ++t) {
        Perm x = unrank_perm(n, rng() % factorial(n));
        auto r1s = rects_from(g, x, true);
        const Rect& r1 = r1s[rng() % r1s.size()];
        auto r2s = rects_from(g, r1.to, true);
        const Rect& r2 = r2s[rng() % r2s.size()];
        auto key = domain_key(r1, r2);
        check_start(x, &key, &r2.to);
    }
    return rep;
}

}  // namespace gridhom
