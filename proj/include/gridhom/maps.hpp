#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gridhom/complex.hpp"
#include "gridhom/grid.hpp"
#include "gridhom/signs.hpp"

namespace gridhom {

// two diagrams on one torus: g uses the straight vertical line `line`, gp replaces it by a curve
// crossing it twice; gp is g with columns col and col+1 exchanged
struct Superimposed {
    GridDiagram g, gp;
    int col = 0;
    int line = 0;
    bool is_switch = false;
    // heights in units of 1/20 row; alpha_k sits at 20k
    int a = 0, b = 0;  // a: southern end of the bigon east of the line
    struct Mark {
        bool is_o = false;
        int gcol = 0;    // column in g
        int height = 0;
        bool east = false;  // inside the bigon east of the straight line
    };
    std::vector<Mark> marks;
};

Superimposed superimpose(const GridDiagram& g, int col);

// one polygon counted by a map: target state, O counts by column of g, v power, total sign
struct PolyTerm {
    Perm to;
    std::vector<int> o;
    int T = 0;
    int sign = 1;
    RectKind kind = RectKind::pentagon;
    int left = 0;
};

// from_side 0: states of g to states of gp; 1: gp to g
std::vector<PolyTerm> pentagon_terms(const Superimposed& s, const SignAssignment& sa, const Perm& x, int from_side);
// side 0: g to g, 1: gp to gp
std::vector<PolyTerm> hexagon_terms(const Superimposed& s, const SignAssignment& sa, const Perm& x, int side);

// closest point map and the triangle count used by its grading shift
Perm closest_point(const Superimposed& s, const Perm& x);
// O markings in the triangle cut from the bigon by the points of x and I(x), the one with a corner at a
int closest_triangle_os(const Superimposed& s, const Perm& x);

// complex specs of the pair sharing variable labels (gp's variables follow the exchanged O markings)
struct PairSpecs {
    ComplexSpec src, dst;
};
PairSpecs pair_specs(const Superimposed& s, Variant v, std::uint64_t gauge_seed = 0);

ChainElement apply_terms(const ComplexSpec& from, const ComplexSpec& to, const std::vector<int>& var_of_gcol,
                         const ChainElement& e, const std::function<std::vector<PolyTerm>(const Perm&)>& terms);

struct MapCheck {
    std::string name;
    long checked = 0;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

struct PentagonReport {
    std::vector<MapCheck> checks;
    // per bigrading induced rank of P against the homology dims on both sides (all-collapsed engine)
    std::vector<std::tuple<int, int, int, int, int>> homology;  // (m, 2a, dim g, dim gp, rank P*)
    bool iso = true;
    bool ok() const;
};

PentagonReport pentagon_suite(const GridDiagram& g, int col, Variant v, std::uint64_t gauge_seed = 0,
                              bool with_homology = true);

struct StabilizationReport {
    GridDiagram g, gp;
    int col = 0;
    std::vector<MapCheck> checks;
    // (m, 2a, dim for gp, dim for the cone, dim for g) after dividing out the W factors, mod 2
    std::vector<std::tuple<int, int, int, int, int>> dims;
    bool tables_agree = true;
    bool ok() const;
};

// gp = X:SW stabilization of g at column col; the cone is built over Z with v
StabilizationReport stabilization_cone_check(const GridDiagram& g, int col, std::uint64_t gauge_seed = 0, int vmax = 2);
// finds the column; NotAStabilizationPair when gp is not an X:SW stabilization of g
StabilizationReport stabilization_cone_check(const GridDiagram& g, const GridDiagram& gp, std::uint64_t gauge_seed = 0,
                                             int vmax = 2);

// chain maps around one crossing; specs share variable labels (index = column of the O in plus)
class SkeinMaps {
public:
    SkeinMaps(const SkeinQuadruple& q, std::uint64_t gauge_seed = 0);
    const SkeinQuadruple& quadruple() const { return q_; }
    const ComplexSpec& plus() const { return plus_; }
    const ComplexSpec& minus() const { return minus_; }
    const ComplexSpec& zero() const { return zero_; }
    const ComplexSpec& zero_prime() const { return zero_p_; }
    bool in_i(const Perm& x) const { return x[q_.c_line] == q_.c_row; }
    int var(int k) const { return q_.o_col[k]; }  // k = 0..3 for V1..V4

    // I' of zero_prime -> I of zero (or plus): the same state with the point moved across
    ChainElement T(const ChainElement& e) const;
    ChainElement d_plus_ni(const ChainElement& e) const;    // I -> N part of the differential of plus
    ChainElement d_zero_in(const ChainElement& e) const;    // N -> I part of zero
    ChainElement d_zerop_ni(const ChainElement& e) const;   // I' -> N' part of zero_prime
    ChainElement d_minus_in(const ChainElement& e) const;   // N' -> I' part of minus
    // (-1)^M (d_plus_ni T - T d_minus_in): zero_prime -> zero
    ChainElement phi(const ChainElement& e) const;
    ChainElement P(const ChainElement& e) const;            // zero -> zero_prime, pentagons avoiding the X's of zero
    ChainElement h_x2(const ChainElement& e) const;
    ChainElement h_y(const ChainElement& e, int which = 0) const;     // which 1 or 2 picks Y1 or Y2, 0 both
    ChainElement h_x2_y(const ChainElement& e, int which = 0) const;

private:
    SkeinQuadruple q_;
    ComplexSpec plus_, minus_, zero_, zero_p_;
    Superimposed s_;
    ChainElement rect_map(const ChainElement& e, int kind, int which) const;
};

struct SkeinMapsReport {
    std::vector<MapCheck> checks;
    std::vector<MapCheck> bridge;  // the two composite identities through P, reported separately
    int annuli = 0;                // distinct thin annuli seen in the composite on I
    bool ok() const;
};
SkeinMapsReport skein_maps_suite(const SkeinQuadruple& q, std::uint64_t gauge_seed = 0);

// the module with one generator in (0,1), one in (-2,-1), two in (-1,0); keys (m, 2a)
std::map<std::pair<int, int>, int> j_module();

struct SkeinLesRow {
    int m = 0, a2 = 0;
    int dim_plus = 0, dim_minus = 0, dim_cone = 0;  // homology of the quotient, the sub and the whole cone
    int rank_in = 0;    // minus -> cone
    int rank_out = 0;   // cone -> plus
    int rank_conn = 0;     // plus (m) -> minus (m-1)
    int rank_conn_in = 0;  // plus (m+1) -> minus (m)
    bool exact = true;
};

struct SkeinLesReport {
    SkeinQuadruple q;
    std::vector<MapCheck> checks;
    std::vector<SkeinLesRow> rows;  // all-collapsed complexes with v, mod 2
    std::pair<int, int> plus_shift{0, 0};   // grading in the cone minus own grading, quotient against plus
    std::pair<int, int> minus_shift{0, 0};  // sub against minus
    bool tensor_j = false;
    // deconvolved cone table against the table of zero (tensored with J when l0 = l-1), shifted by l0_shift
    std::vector<std::tuple<int, int, int, int>> l0_table;  // (m, 2a, cone, expected)
    std::pair<int, int> l0_shift{0, 0};
    bool l0_match = false;
    std::string failure;  // offending node and bigrading
    bool exact() const { return failure.empty(); }
    bool ok() const;
};
// vmax bounds the v powers above the top state grading
SkeinLesReport skein_les_check(const SkeinQuadruple& q, int vmax = 2, std::uint64_t gauge_seed = 0);

}  // namespace gridhom
