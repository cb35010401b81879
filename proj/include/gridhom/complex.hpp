#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gridhom/grid.hpp"
#include "gridhom/signs.hpp"

namespace gridhom {

enum class Ring { mod2, integers };

enum class Variant { gc_minus, gc_hat, gcl, gcl_z, collapsed_gc_minus, collapsed_gcl, collapsed_gcl_z };
const char* variant_name(Variant v);
Variant parse_variant(const std::string& s);
bool variant_has_v(Variant v);
bool variant_signed(Variant v);
bool variant_collapsed(Variant v);

struct ComplexSpec {
    GridDiagram g;
    Variant variant = Variant::gc_minus;
    Ring ring = Ring::mod2;
    bool with_v = false;
    bool is_signed = false;
    // variable index for each O (by column); -1 means the variable is set to zero
    std::vector<int> var_of_col;
    int nvars = 0;
    SignAssignment signs{1};
};

// collapse_cols: one O column per link component (defaults to the lowest column of each)
ComplexSpec make_complex(const GridDiagram& g, Variant v, std::uint64_t gauge_seed = 0,
                         const std::vector<int>& collapse_cols = {});

struct ChainElement {
    // (state, exponents of the variables followed by the v exponent) -> coefficient
    using Key = std::pair<Perm, std::vector<int>>;
    Ring ring = Ring::mod2;
    std::map<Key, long long> terms;

    void add(const Key& k, long long c);
    ChainElement& operator+=(const ChainElement& o);
    ChainElement& operator-=(const ChainElement& o);
    ChainElement scaled(long long c) const;
    bool zero() const { return terms.empty(); }
    bool operator==(const ChainElement& o) const { return terms == o.terms; }
};

ChainElement generator(const ComplexSpec& c, const Perm& x);
ChainElement times_var(const ComplexSpec& c, const ChainElement& e, int var, long long coef = 1);

ChainElement boundary(const ComplexSpec& c, const ChainElement& e);
// rectangles (and long rectangles) through the X in column x_col exactly once and no other X
ChainElement homotopy_H(const ComplexSpec& c, int x_col, const ChainElement& e);
// X-free rectangles with exactly k interior state points, no v weight
ChainElement boundary_part(const ComplexSpec& c, const ChainElement& e, int k);
ChainElement d1_operator(const ComplexSpec& c, const ChainElement& e);

// (m, 2a) of a generator term before any link shift
Bigrading term_grading(const ComplexSpec& c, const ChainElement::Key& k);

struct IdentityReport {
    std::string suite;
    long checked = 0;
    std::vector<std::string> violations;
};

// suite: d_squared | homotopy | d1_relations | homogeneity
IdentityReport verify_identities(const ComplexSpec& c, const std::string& suite, bool exhaustive, long samples = 500,
                                 std::uint64_t seed = 1);

std::string describe(const ChainElement& e);

}  // namespace gridhom
