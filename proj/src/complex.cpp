#include "gridhom/complex.hpp"

#include <random>
#include <sstream>

namespace gridhom {

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::gc_minus: return "gc_minus";
        case Variant::gc_hat: return "gc_hat";
        case Variant::gcl: return "gcl";
        case Variant::gcl_z: return "gcl_z";
        case Variant::collapsed_gc_minus: return "collapsed_gc_minus";
        case Variant::collapsed_gcl: return "collapsed_gcl";
        case Variant::collapsed_gcl_z: return "collapsed_gcl_z";
    }
    return "?";
}

Variant parse_variant(const std::string& s) {
    for (Variant v : {Variant::gc_minus, Variant::gc_hat, Variant::gcl, Variant::gcl_z, Variant::collapsed_gc_minus,
                      Variant::collapsed_gcl, Variant::collapsed_gcl_z})
        if (s == variant_name(v)) return v;
    throw GridError("VariantMismatch", "unknown variant " + s);
}

bool variant_has_v(Variant v) {
    return v == Variant::gcl || v == Variant::gcl_z || v == Variant::collapsed_gcl || v == Variant::collapsed_gcl_z;
}
bool variant_signed(Variant v) { return v == Variant::gcl_z || v == Variant::collapsed_gcl_z; }
bool variant_collapsed(Variant v) {
    return v == Variant::collapsed_gc_minus || v == Variant::collapsed_gcl || v == Variant::collapsed_gcl_z;
}

ComplexSpec make_complex(const GridDiagram& g, Variant v, std::uint64_t gauge_seed, const std::vector<int>& collapse_cols) {
    ComplexSpec c;
    c.g = g;
    c.variant = v;
    c.is_signed = variant_signed(v);
    c.ring = c.is_signed ? Ring::integers : Ring::mod2;
    c.with_v = variant_has_v(v);
    c.signs = SignAssignment(g.n, gauge_seed);
    c.var_of_col.resize(g.n);
    for (int i = 0; i < g.n; ++i) c.var_of_col[i] = i;
    c.nvars = g.n;
    if (v == Variant::gc_hat) c.var_of_col[g.n - 1] = -1;
    if (variant_collapsed(v)) {
        auto comp = link_components(g);
        std::vector<int> chosen = collapse_cols.empty() ? comp.first_column : collapse_cols;
        if ((int)chosen.size() != comp.count) throw GridError("VariantMismatch", "need one O per component");
        std::vector<char> hit(comp.count, 0);
        for (int col : chosen) {
            if (col < 0 || col >= g.n || hit[comp.of_column[col]]) throw GridError("VariantMismatch", "bad collapse choice");
            hit[comp.of_column[col]] = 1;
        }
        // chosen columns share variable 0, the rest keep their own
        int next = 1;
        for (int i = 0; i < g.n; ++i) {
            bool is_chosen = false;
            for (int col : chosen) is_chosen = is_chosen || col == i;
            c.var_of_col[i] = is_chosen ? 0 : next++;
        }
        c.nvars = next;
    }
    return c;
}

void ChainElement::add(const Key& k, long long c) {
    if (ring == Ring::mod2) c &= 1;
    if (c == 0) return;
    auto it = terms.find(k);
    if (it == terms.end()) {
        terms.emplace(k, c);
        return;
    }
    long long s;
    if (__builtin_add_overflow(it->second, c, &s)) throw GridError("Overflow", "coefficient overflow");
    if (ring == Ring::mod2) s &= 1;
    if (s == 0)
        terms.erase(it);
    else
        it->second = s;
}

ChainElement& ChainElement::operator+=(const ChainElement& o) {
    for (auto& [k, c] : o.terms) add(k, c);
    return *this;
}

ChainElement& ChainElement::operator-=(const ChainElement& o) {
    for (auto& [k, c] : o.terms) add(k, -c);
    return *this;
}

ChainElement ChainElement::scaled(long long c) const {
    ChainElement r;
    r.ring = ring;
    for (auto& [k, v] : terms) {
        long long p;
        if (__builtin_mul_overflow(v, c, &p)) throw GridError("Overflow", "coefficient overflow");
        r.add(k, p);
    }
    return r;
}

ChainElement generator(const ComplexSpec& c, const Perm& x) {
    ChainElement e;
    e.ring = c.ring;
    e.add({x, std::vector<int>(c.nvars + 1, 0)}, 1);
    return e;
}

ChainElement times_var(const ComplexSpec& c, const ChainElement& e, int var, long long coef) {
    ChainElement r;
    r.ring = c.ring;
    if (var < 0) return r;
    for (auto& [k, v] : e.terms) {
        auto key = k;
        key.second[var] += 1;
        r.add(key, v * coef);
    }
    return r;
}

namespace {

// shared rectangle operator: keep(x_counts, geom) decides membership,
// want_interior >= 0 restricts to short rectangles with that many interior points
template <class Keep>
ChainElement rect_op(const ComplexSpec& c, const ChainElement& e, bool include_long, Keep keep, int want_interior,
                     bool use_v, bool use_sign) {
    const GridDiagram& g = c.g;
    int n = g.n;
    ChainElement out;
    out.ring = c.ring;
    std::vector<int> xc(n), oc(n);
    for (auto& [key, coef] : e.terms) {
        const Perm& x = key.first;
        for_each_rect(g, x, include_long, [&](const RectGeom& r) {
            if (want_interior >= 0 && (r.dir != '-' || r.interior != want_interior)) return;
            Rect cells;
            cells.c1 = r.c1;
            cells.row0 = r.row0;
            cells.w = r.w;
            cells.h = r.h;
            cells.dir = r.dir;
            for (int col = 0; col < n; ++col) {
                xc[col] = cells.cell(n, col, g.x_rows[col]);
                oc[col] = cells.cell(n, col, g.o_rows[col]);
            }
            if (!keep(xc, r)) return;
            int T = r.dir == '-' ? r.interior : 1;
            if (use_v && !c.with_v && T > 0) return;
            auto mono = key.second;
            for (int col = 0; col < n; ++col) {
                if (!oc[col]) continue;
                int var = c.var_of_col[col];
                if (var < 0) return;
                mono[var] += oc[col];
            }
            if (use_v) mono[c.nvars] += T;
            Perm y = x;
            std::swap(y[r.c1], y[r.c2]);
            long long s = use_sign && c.is_signed ? c.signs.sign(x, r.c1, r.c2) : 1;
            out.add({y, mono}, s * coef);
        });
    }
    return out;
}

bool all_zero(const std::vector<int>& v) {
    for (int a : v)
        if (a) return false;
    return true;
}

}  // namespace

ChainElement boundary(const ComplexSpec& c, const ChainElement& e) {
    if (e.ring != c.ring) throw GridError("VariantMismatch", "element ring differs from complex ring");
    return rect_op(c, e, false, [](const std::vector<int>& xc, const RectGeom&) { return all_zero(xc); }, -1, true, true);
}

ChainElement homotopy_H(const ComplexSpec& c, int x_col, const ChainElement& e) {
    if (x_col < 0 || x_col >= c.g.n) throw GridError("BadMarkingIndex", "no X in column " + std::to_string(x_col));
    return rect_op(
        c, e, true,
        [x_col](const std::vector<int>& xc, const RectGeom&) {
            for (int i = 0; i < (int)xc.size(); ++i)
                if (xc[i] != (i == x_col ? 1 : 0)) return false;
            return true;
        },
        -1, true, true);
}

ChainElement boundary_part(const ComplexSpec& c, const ChainElement& e, int k) {
    return rect_op(c, e, false, [](const std::vector<int>& xc, const RectGeom&) { return all_zero(xc); }, k, false, true);
}

ChainElement d1_operator(const ComplexSpec& c, const ChainElement& e) {
    if (c.ring != Ring::mod2) throw GridError("VariantMismatch", "d1 is defined over the two-element field");
    return boundary_part(c, e, 1);
}

Bigrading term_grading(const ComplexSpec& c, const ChainElement::Key& k) {
    Bigrading b = grading(c.g, k.first);
    int ve = 0;
    for (int i = 0; i < c.nvars; ++i) ve += k.second[i];
    b.m += -2 * ve + 2 * k.second[c.nvars];
    b.a2 -= 2 * ve;
    return b;
}

std::string describe(const ChainElement& e) {
    std::ostringstream os;
    bool first = true;
    for (auto& [k, c] : e.terms) {
        if (!first) os << " + ";
        first = false;
        os << c << "*[";
        for (size_t i = 0; i < k.first.size(); ++i) os << (i ? "," : "") << k.first[i];
        os << "]";
        for (size_t i = 0; i + 1 < k.second.size(); ++i)
            if (k.second[i]) os << "V" << i << "^" << k.second[i];
        if (k.second.back()) os << "v^" << k.second.back();
    }
    if (first) os << "0";
    return os.str();
}

IdentityReport verify_identities(const ComplexSpec& c, const std::string& suite, bool exhaustive, long samples,
                                 std::uint64_t seed) {
    IdentityReport rep;
    rep.suite = suite;
    int n = c.g.n;
    std::vector<Perm> gens;
    if (exhaustive) {
        gens = all_states(n);
    } else {
        std::mt19937_64 rng(seed);
        for (long t = 0; t < samples; ++t) gens.push_back(unrank_perm(n, rng() % factorial(n)));
    }
    std::vector<int> o_col(n);
    for (int i = 0; i < n; ++i) o_col[c.g.o_rows[i]] = i;
    auto note = [&](const Perm& x, const std::string& what, const ChainElement& residue) {
        std::ostringstream os;
        os << what << " on [";
        for (int i = 0; i < n; ++i) os << (i ? "," : "") << x[i];
        os << "]: " << describe(residue);
        rep.violations.push_back(os.str());
    };
    for (const Perm& x : gens) {
        ChainElement gx = generator(c, x);
        if (suite == "d_squared") {
            ++rep.checked;
            auto r = boundary(c, boundary(c, gx));
            if (!r.zero()) note(x, "d^2", r);
        } else if (suite == "homotopy") {
            for (int col = 0; col < n; ++col) {
                ++rep.checked;
                // O sharing the row of this X, and the O sharing its column
                int i = o_col[c.g.x_rows[col]], j = col;
                auto lhs = homotopy_H(c, col, boundary(c, gx));
                lhs += boundary(c, homotopy_H(c, col, gx));
                lhs -= times_var(c, gx, c.var_of_col[i]);
                lhs += times_var(c, gx, c.var_of_col[j]);
                if (!lhs.zero()) note(x, "H d + d H - (V_i - V_j), X column " + std::to_string(col), lhs);
            }
        } else if (suite == "d1_relations") {
            ++rep.checked;
            ChainElement gm = gx;
            gm.ring = Ring::mod2;
            ComplexSpec cm = c;
            cm.ring = Ring::mod2;
            cm.is_signed = false;
            auto r1 = boundary_part(cm, boundary_part(cm, gm, 1), 0);
            r1 += boundary_part(cm, boundary_part(cm, gm, 0), 1);
            if (!r1.zero()) note(x, "d0 d1 + d1 d0", r1);
            auto r2 = boundary_part(cm, boundary_part(cm, gm, 2), 0);
            r2 += boundary_part(cm, boundary_part(cm, gm, 1), 1);
            r2 += boundary_part(cm, boundary_part(cm, gm, 0), 2);
            if (!r2.zero()) note(x, "d0 d2 + d1 d1 + d2 d0", r2);
        } else if (suite == "homogeneity") {
            ++rep.checked;
            auto b0 = term_grading(c, gx.terms.begin()->first);
            for (auto& t : boundary(c, gx).terms) {
                auto b = term_grading(c, t.first);
                if (b.m != b0.m - 1 || b.a2 != b0.a2) note(x, "d not of degree (-1,0)", boundary(c, gx));
            }
        } else {
            throw GridError("UnknownSuite", suite);
        }
    }
    return rep;
}

}  // namespace gridhom
