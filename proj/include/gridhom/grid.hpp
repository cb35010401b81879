#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridhom {

// kind is the error name surfaced by the cli (NotAPermutation, IllegalMove, ...)
struct GridError : std::runtime_error {
    std::string kind;
    GridError(std::string k, const std::string& msg) : std::runtime_error(k + ": " + msg), kind(std::move(k)) {}
};

using Perm = std::vector<int>;

struct GridDiagram {
    int n = 0;
    std::vector<int> o_rows;
    std::vector<int> x_rows;
    std::string name;
    bool operator==(const GridDiagram& o) const { return n == o.n && o_rows == o.o_rows && x_rows == o.x_rows; }
};

GridDiagram make_diagram(const std::vector<int>& o_rows, const std::vector<int>& x_rows, const std::string& name = {});
// accepts the n=/O=/X=/name= text form or a json document {n, o_rows, x_rows, name}
GridDiagram parse_diagram(const std::string& text);
std::string to_text(const GridDiagram& g);

struct Components {
    int count = 0;
    std::vector<int> of_column;
    // lexicographically least O (lowest column) per component
    std::vector<int> first_column;
};
Components link_components(const GridDiagram& g);

// Alexander grading is kept doubled so link gradings stay exact
struct Bigrading {
    int m = 0;
    int a2 = 0;
    bool operator==(const Bigrading&) const = default;
};

int maslov_for(const GridDiagram& g, const Perm& x, const std::vector<int>& marks);
Bigrading grading(const GridDiagram& g, const Perm& x);

std::uint64_t factorial(int n);
Perm unrank_perm(int n, std::uint64_t r);
std::uint64_t rank_perm(const Perm& p);
std::vector<Perm> all_states(int n);

enum class RectKind { rectangle, long_rectangle, pentagon, long_pentagon, hexagon, long_hexagon };
const char* kind_name(RectKind k);

// columns run c1 -> c2 eastward, rows row0 -> row0+h northward (cyclic).
// from has its points at the SW and NE corners, to at the NW and SE corners.
// long rectangles add a full column annulus at c1 (dir 'v') or a full row annulus at row0 (dir 'h').
struct Rect {
    RectKind kind = RectKind::rectangle;
    Perm from, to;
    int c1 = 0, c2 = 0;
    int row0 = 0;
    int w = 0, h = 0;
    char dir = '-';
    int interior = 0;
    int cell(int n, int col, int row) const;
    int T() const { return dir == '-' ? interior : 1; }
};

struct RectGeom {
    int c1, c2, row0, w, h;
    char dir;
    int interior;
};

// callback-based enumeration without allocation
void for_each_rect(const GridDiagram& g, const Perm& x, bool include_long, const std::function<void(const RectGeom&)>& f);
std::vector<Rect> rects_from(const GridDiagram& g, const Perm& x, bool include_long);
std::vector<Rect> rectangles_between(const GridDiagram& g, const Perm& x, const Perm& y, bool include_long);
std::vector<std::vector<int>> mult_matrix(const GridDiagram& g, const Rect& r);

struct Multiplicities {
    std::vector<int> o, x;
    int interior = 0;
    int T = 0;
};
Multiplicities multiplicities(const GridDiagram& g, const Rect& r);

enum class MoveKind { commutation, switch_move, stabilize_xsw, destabilize_xsw };
struct Move {
    MoveKind kind = MoveKind::commutation;
    int col = 0;   // left column of the pair / column of the X
    int row = 0;   // row of the X (stabilize) or lower row of the block (destabilize)
    bool on_rows = false;  // commutation/switch of rows, done by transposing
};
bool commutation_legal(const GridDiagram& g, int col);
bool switch_legal(const GridDiagram& g, int col);
bool destabilize_legal(const GridDiagram& g, int col, int row);
GridDiagram transpose(const GridDiagram& g);
GridDiagram apply_move(const GridDiagram& g, const Move& mv);

// four diagrams around one crossing between columns col and col+1, whose X's sit in rows row and row+1.
// plus has X's NW and SE of c = (line col+1, row+1); zero has them SW and NE;
// minus and zero_prime are plus and zero with the two columns exchanged, c' sits at the same point.
struct SkeinQuadruple {
    GridDiagram plus, minus, zero, zero_prime;
    int col = 0, row = 0;
    int c_line = 0, c_row = 0;
    bool input_was_plus = true;
    int l = 0, l0 = 0;  // components of plus and of zero
    // markings in minus / zero_prime coordinates as (column, row): X's of minus and of zero_prime near c'
    std::pair<int, int> x1, x2, y1, y2;
    // O1..O4 as columns of plus: the O in row `row`, the O in row `row`+1, then the O's of zero_prime columns col, col+1
    int o_col[4] = {0, 0, 0, 0};
};
SkeinQuadruple skein_quadruple(const GridDiagram& g, int col);

}  // namespace gridhom
