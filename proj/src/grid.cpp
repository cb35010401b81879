#include "gridhom/grid.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace gridhom {

namespace {

void check_perm(const std::vector<int>& p, int n, const char* what) {
    if ((int)p.size() != n) throw GridError("SizeMismatch", std::string(what) + " has wrong length");
    std::vector<char> seen(n, 0);
    for (int v : p) {
        if (v < 0 || v >= n) throw GridError("NotAPermutation", std::string(what) + " entry out of range");
        if (seen[v]) throw GridError("NotAPermutation", std::string(what) + " repeats row " + std::to_string(v));
        seen[v] = 1;
    }
}

std::vector<int> parse_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
        if (tok.empty()) continue;
        size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size()) throw GridError("ParseError", "bad integer '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

inline int mod(int a, int n) { return ((a % n) + n) % n; }

}  // namespace

GridDiagram make_diagram(const std::vector<int>& o_rows, const std::vector<int>& x_rows, const std::string& name) {
    int n = (int)o_rows.size();
    if (n == 0) throw GridError("SizeMismatch", "empty diagram");
    check_perm(o_rows, n, "O");
    check_perm(x_rows, n, "X");
    if (n >= 2)
        for (int i = 0; i < n; ++i)
            if (o_rows[i] == x_rows[i]) throw GridError("MarkingCollision", "column " + std::to_string(i));
    return GridDiagram{n, o_rows, x_rows, name};
}

GridDiagram parse_diagram(const std::string& text) {
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const std::exception& e) {
            throw GridError("ParseError", e.what());
        }
        if (!j.contains("n") || !j.contains("o_rows") || !j.contains("x_rows"))
            throw GridError("ParseError", "missing n/o_rows/x_rows");
        int n = j["n"].get<int>();
        auto o = j["o_rows"].get<std::vector<int>>();
        auto x = j["x_rows"].get<std::vector<int>>();
        if ((int)o.size() != n || (int)x.size() != n) throw GridError("SizeMismatch", "n does not match list lengths");
        return make_diagram(o, x, j.value("name", std::string()));
    }
    int n = -1;
    std::vector<int> o, x;
    bool have_o = false, have_x = false;
    std::string name;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw GridError("ParseError", "expected key=value: " + line);
        std::string key = line.substr(0, eq), val = line.substr(eq + 1);
        if (key == "n")
            n = std::stoi(val);
        else if (key == "O")
            o = parse_list(val), have_o = true;
        else if (key == "X")
            x = parse_list(val), have_x = true;
        else if (key == "name")
            name = val;
        else
            throw GridError("ParseError", "unknown key " + key);
    }
    if (n < 0 || !have_o || !have_x) throw GridError("ParseError", "need n=, O= and X= lines");
    if ((int)o.size() != n || (int)x.size() != n) throw GridError("SizeMismatch", "n does not match list lengths");
    return make_diagram(o, x, name);
}

std::string to_text(const GridDiagram& g) {
    std::string s = "n=" + std::to_string(g.n) + "\nO=";
    for (int i = 0; i < g.n; ++i) s += (i ? "," : "") + std::to_string(g.o_rows[i]);
    s += "\nX=";
    for (int i = 0; i < g.n; ++i) s += (i ? "," : "") + std::to_string(g.x_rows[i]);
    s += "\n";
    if (!g.name.empty()) s += "name=" + g.name + "\n";
    return s;
}

Components link_components(const GridDiagram& g) {
    int n = g.n;
    std::vector<int> o_col(n);
    for (int c = 0; c < n; ++c) o_col[g.o_rows[c]] = c;
    Components r;
    r.of_column.assign(n, -1);
    for (int c = 0; c < n; ++c) {
        if (r.of_column[c] >= 0) continue;
        int k = r.count++;
        r.first_column.push_back(c);
        int d = c;
        while (r.of_column[d] < 0) {
            r.of_column[d] = k;
            d = o_col[g.x_rows[d]];
        }
    }
    return r;
}

// I(P,Q) summed both ways, with points scaled by 2 so markings sit on odd coordinates
int maslov_for(const GridDiagram& g, const Perm& x, const std::vector<int>& marks) {
    int n = g.n;
    int ixx = 0, ixm = 0, imm = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (x[i] < x[j]) ++ixx;
            if (marks[i] < marks[j]) ++imm;
        }
    // x point (i, x[i]) vs mark (j+1/2, m[j]+1/2)
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i <= j && x[i] <= marks[j]) ++ixm;
            if (j < i && marks[j] < x[i]) ++ixm;
        }
    return ixx - ixm + imm + 1;
}

Bigrading grading(const GridDiagram& g, const Perm& x) {
    int mo = maslov_for(g, x, g.o_rows);
    int mx = maslov_for(g, x, g.x_rows);
    int a2 = mo - mx - (g.n - 1);
    Components c = link_components(g);
    if (c.count == 1 && (a2 % 2) != 0) throw GridError("InternalGradingNonIntegral", "odd Alexander for a knot");
    return Bigrading{mo, a2};
}

std::uint64_t factorial(int n) {
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

Perm unrank_perm(int n, std::uint64_t r) {
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    Perm p(n);
    for (int i = 0; i < n; ++i) {
        std::uint64_t f = factorial(n - 1 - i);
        int k = (int)(r / f);
        r %= f;
        p[i] = pool[k];
        pool.erase(pool.begin() + k);
    }
    return p;
}

std::uint64_t rank_perm(const Perm& p) {
    int n = (int)p.size();
    std::uint64_t r = 0;
    for (int i = 0; i < n; ++i) {
        int smaller = 0;
        for (int j = i + 1; j < n; ++j)
            if (p[j] < p[i]) ++smaller;
        r += smaller * factorial(n - 1 - i);
    }
    return r;
}

std::vector<Perm> all_states(int n) {
    std::vector<Perm> out;
    Perm p(n);
    std::iota(p.begin(), p.end(), 0);
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

const char* kind_name(RectKind k) {
    switch (k) {
        case RectKind::rectangle: return "rectangle";
        case RectKind::long_rectangle: return "long-rectangle";
        case RectKind::pentagon: return "pentagon";
        case RectKind::long_pentagon: return "long-pentagon";
        case RectKind::hexagon: return "hexagon";
        case RectKind::long_hexagon: return "long-hexagon";
    }
    return "?";
}

int Rect::cell(int n, int col, int row) const {
    int v = (mod(col - c1, n) < w && mod(row - row0, n) < h) ? 1 : 0;
    if (dir == 'v' && col == c1) ++v;
    if (dir == 'h' && row == row0) ++v;
    return v;
}

void for_each_rect(const GridDiagram& g, const Perm& x, bool include_long, const std::function<void(const RectGeom&)>& f) {
    int n = g.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            int w = mod(j - i, n), h = mod(x[j] - x[i], n);
            int interior = 0;
            for (int c = 0; c < n; ++c) {
                int dc = mod(c - i, n), dr = mod(x[c] - x[i], n);
                if (dc > 0 && dc < w && dr > 0 && dr < h) ++interior;
            }
            f(RectGeom{i, j, x[i], w, h, '-', interior});
            if (include_long) {
                if (w == 1) f(RectGeom{i, j, x[i], w, h, 'v', interior});
                if (h == 1) f(RectGeom{i, j, x[i], w, h, 'h', interior});
            }
        }
}

static Rect to_rect(const Perm& x, const RectGeom& r) {
    Rect out;
    out.kind = r.dir == '-' ? RectKind::rectangle : RectKind::long_rectangle;
    out.from = x;
    out.to = x;
    std::swap(out.to[r.c1], out.to[r.c2]);
    out.c1 = r.c1;
    out.c2 = r.c2;
    out.row0 = r.row0;
    out.w = r.w;
    out.h = r.h;
    out.dir = r.dir;
    out.interior = r.interior;
    return out;
}

std::vector<Rect> rects_from(const GridDiagram& g, const Perm& x, bool include_long) {
    std::vector<Rect> out;
    for_each_rect(g, x, include_long, [&](const RectGeom& r) { out.push_back(to_rect(x, r)); });
    return out;
}

std::vector<Rect> rectangles_between(const GridDiagram& g, const Perm& x, const Perm& y, bool include_long) {
    std::vector<int> diff;
    for (int i = 0; i < g.n; ++i)
        if (x[i] != y[i]) diff.push_back(i);
    std::vector<Rect> out;
    if (diff.size() != 2 || x[diff[0]] != y[diff[1]]) return out;
    for (int k = 0; k < 2; ++k) {
        int i = diff[k], j = diff[1 - k];
        int n = g.n;
        int w = mod(j - i, n), h = mod(x[j] - x[i], n);
        int interior = 0;
        for (int c = 0; c < n; ++c) {
            int dc = mod(c - i, n), dr = mod(x[c] - x[i], n);
            if (dc > 0 && dc < w && dr > 0 && dr < h) ++interior;
        }
        out.push_back(to_rect(x, RectGeom{i, j, x[i], w, h, '-', interior}));
        if (include_long) {
            if (w == 1) out.push_back(to_rect(x, RectGeom{i, j, x[i], w, h, 'v', interior}));
            if (h == 1) out.push_back(to_rect(x, RectGeom{i, j, x[i], w, h, 'h', interior}));
        }
    }
    return out;
}

std::vector<std::vector<int>> mult_matrix(const GridDiagram& g, const Rect& r) {
    std::vector<std::vector<int>> m(g.n, std::vector<int>(g.n));
    for (int c = 0; c < g.n; ++c)
        for (int row = 0; row < g.n; ++row) m[c][row] = r.cell(g.n, c, row);
    return m;
}

Multiplicities multiplicities(const GridDiagram& g, const Rect& r) {
    Multiplicities m;
    m.o.resize(g.n);
    m.x.resize(g.n);
    for (int c = 0; c < g.n; ++c) {
        m.o[c] = r.cell(g.n, c, g.o_rows[c]);
        m.x[c] = r.cell(g.n, c, g.x_rows[c]);
    }
    m.interior = r.interior;
    m.T = r.T();
    return m;
}

namespace {
bool interleaved(int a1, int a2, int b1, int b2) {
    auto in = [](int lo, int hi, int v) { return lo < v && v < hi; };
    int lo = std::min(a1, a2), hi = std::max(a1, a2);
    return in(lo, hi, b1) != in(lo, hi, b2);
}
}  // namespace

bool commutation_legal(const GridDiagram& g, int col) {
    if (col < 0 || col + 1 >= g.n) return false;
    int o1 = g.o_rows[col], x1 = g.x_rows[col], o2 = g.o_rows[col + 1], x2 = g.x_rows[col + 1];
    if (o1 == x2 || x1 == o2) return false;
    return !interleaved(o1, x1, o2, x2);
}

bool switch_legal(const GridDiagram& g, int col) {
    if (col < 0 || col + 1 >= g.n) return false;
    int o1 = g.o_rows[col], x1 = g.x_rows[col], o2 = g.o_rows[col + 1], x2 = g.x_rows[col + 1];
    return o1 == x2 || x1 == o2;
}

bool destabilize_legal(const GridDiagram& g, int col, int row) {
    int n = g.n;
    if (n < 3 || col < 0 || row < 0 || col + 1 >= n || row + 1 >= n) return false;
    return g.x_rows[col] == row + 1 && g.o_rows[col + 1] == row + 1 && g.x_rows[col + 1] == row && g.o_rows[col] != row;
}

GridDiagram transpose(const GridDiagram& g) {
    GridDiagram t = g;
    for (int c = 0; c < g.n; ++c) {
        t.o_rows[g.o_rows[c]] = c;
        t.x_rows[g.x_rows[c]] = c;
    }
    return t;
}

GridDiagram apply_move(const GridDiagram& g, const Move& mv) {
    int n = g.n;
    if (mv.kind == MoveKind::commutation || mv.kind == MoveKind::switch_move) {
        if (mv.on_rows) {
            Move m2 = mv;
            m2.on_rows = false;
            return transpose(apply_move(transpose(g), m2));
        }
        if (mv.col < 0 || mv.col + 1 >= n) throw GridError("BadLocation", "column pair out of range");
        bool ok = mv.kind == MoveKind::commutation ? commutation_legal(g, mv.col) : switch_legal(g, mv.col);
        if (!ok) throw GridError("IllegalMove", "columns " + std::to_string(mv.col) + "," + std::to_string(mv.col + 1));
        GridDiagram h = g;
        std::swap(h.o_rows[mv.col], h.o_rows[mv.col + 1]);
        std::swap(h.x_rows[mv.col], h.x_rows[mv.col + 1]);
        return h;
    }
    if (mv.kind == MoveKind::stabilize_xsw) {
        int c = mv.col;
        if (c < 0 || c >= n) throw GridError("BadLocation", "no such column");
        int r = g.x_rows[c];
        auto shift = [&](int row) { return row > r ? row + 1 : row; };
        GridDiagram h;
        h.n = n + 1;
        h.name = g.name;
        for (int i = 0; i < n; ++i) {
            if (i == c) {
                h.o_rows.push_back(shift(g.o_rows[i]));
                h.x_rows.push_back(r + 1);
                h.o_rows.push_back(r + 1);
                h.x_rows.push_back(r);
            } else {
                h.o_rows.push_back(shift(g.o_rows[i]));
                h.x_rows.push_back(shift(g.x_rows[i]));
            }
        }
        return make_diagram(h.o_rows, h.x_rows, h.name);
    }
    int c = mv.col, r = mv.row;
    if (c < 0 || r < 0 || c + 1 >= n || r + 1 >= n) throw GridError("BadLocation", "block out of range");
    if (!destabilize_legal(g, c, r)) throw GridError("IllegalMove", "no X:SW block at column " + std::to_string(c));
    auto unshift = [&](int row) { return row > r + 1 ? row - 1 : row; };
    std::vector<int> o, x;
    for (int i = 0; i < n; ++i) {
        if (i == c + 1) continue;
        if (i == c) {
            o.push_back(unshift(g.o_rows[i]));
            x.push_back(r);
        } else {
            o.push_back(unshift(g.o_rows[i]));
            x.push_back(unshift(g.x_rows[i]));
        }
    }
    return make_diagram(o, x, g.name);
}

SkeinQuadruple skein_quadruple(const GridDiagram& g, int col) {
    int n = g.n;
    if (col < 0 || col + 1 >= n) throw GridError("NotACrossing", "column pair out of range");
    int o1 = g.o_rows[col], x1 = g.x_rows[col], o2 = g.o_rows[col + 1], x2 = g.x_rows[col + 1];
    if (!interleaved(o1, x1, o2, x2)) throw GridError("NotACrossing", "segments of the two columns do not cross");
    SkeinQuadruple q;
    q.col = col;
    if (mod(x1 - x2, n) == 1) {
        q.input_was_plus = true;
        q.plus = g;
        q.row = x2;
    } else if (mod(x2 - x1, n) == 1) {
        q.input_was_plus = false;
        q.plus = g;
        std::swap(q.plus.o_rows[col], q.plus.o_rows[col + 1]);
        std::swap(q.plus.x_rows[col], q.plus.x_rows[col + 1]);
        q.row = x1;
    } else {
        throw GridError("NotACrossing", "X markings of the two columns are not in adjacent rows");
    }
    int j = q.row, j1 = mod(j + 1, n);
    for (int c : {col, col + 1})
        if (g.o_rows[c] == j || g.o_rows[c] == j1)
            throw GridError("QuadrupleGeometryInvalid", "an O of the crossing columns shares a row with the X's");
    auto swapped = [&](const GridDiagram& d) {
        GridDiagram e = d;
        std::swap(e.o_rows[col], e.o_rows[col + 1]);
        std::swap(e.x_rows[col], e.x_rows[col + 1]);
        return e;
    };
    q.zero = q.plus;
    std::swap(q.zero.x_rows[col], q.zero.x_rows[col + 1]);
    q.minus = swapped(q.plus);
    q.zero_prime = swapped(q.zero);
    q.plus.name = g.name.empty() ? "plus" : g.name + "+";
    q.minus.name = g.name.empty() ? "minus" : g.name + "-";
    q.zero.name = g.name.empty() ? "zero" : g.name + "0";
    q.zero_prime.name = g.name.empty() ? "zero'" : g.name + "0'";
    q.c_line = col + 1;
    q.c_row = j1;
    q.l = link_components(q.plus).count;
    q.l0 = link_components(q.zero).count;
    q.x1 = {col, j};
    q.x2 = {col + 1, j1};
    q.y2 = {col, j1};
    q.y1 = {col + 1, j};
    for (int c = 0; c < n; ++c) {
        if (q.plus.o_rows[c] == j) q.o_col[0] = c;
        if (q.plus.o_rows[c] == j1) q.o_col[1] = c;
    }
    // zero_prime column col holds the O of plus column col+1
    q.o_col[2] = col + 1;
    q.o_col[3] = col;
    return q;
}

}  // namespace gridhom
