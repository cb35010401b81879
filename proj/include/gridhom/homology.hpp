#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "gridhom/complex.hpp"
#include "gridhom/linalg.hpp"

namespace gridhom {

struct EngineConfig {
    std::vector<int> var_of_col;  // -1 kills the variable
    int nvars = 0;
    bool with_v = false;
    bool is_signed = false;
    std::uint64_t gauge_seed = 0;
};

EngineConfig engine_config(const ComplexSpec& c);
// every O sent to one variable U (or killed when hat is set)
EngineConfig all_collapsed_config(const GridDiagram& g, bool with_v, bool is_signed, bool hat = false);

// one bigraded piece: generators (state, monomial, v power) of a fixed (m, 2a)
struct Slice {
    int m = 0, a2 = 0;
    int nvars = 0;
    std::vector<std::uint32_t> state;
    std::vector<std::uint16_t> mono;  // nvars entries per generator
    std::vector<std::uint16_t> vpow;
    std::unordered_map<std::string, int> index;
    int size() const { return (int)state.size(); }
    int find(std::uint32_t s, const std::uint16_t* e, int j) const;
};

struct ZHomology {
    int free_rank = 0;
    std::vector<std::string> torsion;
};

// explicit arrow between generators: O counts per engine variable, v power T
struct GenArrow {
    std::uint32_t to = 0;
    int T = 0;
    int sign = 1;
    std::vector<int> o;
};
// arrows leaving each source generator
using ArrowTable = std::vector<std::vector<GenArrow>>;

// the chain complex of one engine configuration, realised slice by slice
class SliceComplex {
public:
    SliceComplex(const GridDiagram& g, EngineConfig cfg);
    // complex given by generators with their base gradings and an explicit differential
    SliceComplex(std::vector<Bigrading> gens, const ArrowTable& d, EngineConfig cfg);
    int generator_count() const { return (int)grad_.size(); }
    // matrix of a map f: this (m,a) -> other (mt,at) given by arrows between generators
    BitMatrix map_matrix(int m, int a2, const ArrowTable& f, const SliceComplex& other, int mt, int a2t) const;
    // rank of the map induced on homology by f: this (m,a) -> other (mt,at)
    int induced_rank_to(int m, int a2, const BitMatrix& f, const SliceComplex& other, int mt, int a2t) const;
    // d d = 0 on the slice, mod 2
    bool d_squared_zero(int m, int a2) const;
    const GridDiagram& diagram() const { return g_; }
    const EngineConfig& config() const { return cfg_; }
    int a2_max() const { return a2_max_; }
    int a2_min() const { return a2_min_; }
    // Maslov range of nonempty slices at 2a (without v powers)
    std::pair<int, int> m_range(int a2) const;

    std::shared_ptr<const Slice> slice(int m, int a2) const;
    // matrices with rows = source generators, columns = target generators
    BitMatrix d_mod2(int m, int a2) const;         // (m,a) -> (m-1,a)
    BitMatrix d1_mod2(int m, int a2) const;        // one interior point, no v: (m,a) -> (m-3,a)
    BitMatrix times_mod2(int m, int a2, int var, int power) const;  // var -1 is v
    std::vector<std::vector<std::pair<int, long long>>> d_int(int m, int a2) const;

    // below the lowest state Alexander grading multiplication by U is an isomorphism of slices;
    // returns the representative slice at the lowest grading when that applies
    std::pair<int, int> canonical(int m, int a2) const;
    bool u_periodic() const { return periodic_; }

    int d_rank(int m, int a2) const;  // cached
    int dim_mod2(int m, int a2) const;
    ZHomology hom_z(int m, int a2) const;
    // rank of the map induced on homology by a chain map F: (m,a) -> (mt,at)
    int induced_rank(int m, int a2, const BitMatrix& f, int mt, int a2t) const;
    // same with the homology bases taken in a shuffled order (representative independence)
    int induced_rank_shuffled(int m, int a2, const BitMatrix& f, int mt, int a2t, std::uint64_t seed) const;
    // dimension of E_s^p in standard indexing (s = 0 is the associated graded) of the v filtration
    int spectral_dim(int m, int a2, int p, int s) const;
    // sparse rank path for large hat tables
    long d_rank_sparse(int m, int a2) const;

    std::uint32_t state_count() const { return (std::uint32_t)states_.size(); }
    const std::vector<Perm>& states() const { return states_; }
    const std::vector<Bigrading>& gradings() const { return grad_; }

private:
    struct Arrow {
        std::uint32_t to;
        std::uint8_t T;
        std::int8_t sign;
        std::uint32_t ooff;  // O counts per variable at ooff in ocount_
    };
    GridDiagram g_;
    EngineConfig cfg_;
    std::vector<Perm> states_;
    std::vector<Bigrading> grad_;
    std::vector<std::uint32_t> arrow_start_;
    std::vector<Arrow> arrows_;
    std::vector<std::uint8_t> ocount_;
    int a2_max_ = 0, a2_min_ = 0;
    mutable std::mutex mu_;
    mutable std::map<std::pair<int, int>, std::shared_ptr<const Slice>> slices_;
    mutable std::map<std::pair<int, int>, int> d_ranks_;

    std::shared_ptr<Slice> build_slice(int m, int a2) const;
    template <class Want>
    BitMatrix arrow_matrix(int m, int a2, int mt, Want want) const;
    bool periodic_ = false;
    // echelon rows: boundaries first, then homology representatives (all cycles)
    struct HomBasis {
        BitMatrix ech;
        std::vector<int> piv;
        int nb = 0, nh = 0;
    };
    mutable std::map<std::pair<int, int>, std::shared_ptr<const HomBasis>> bases_;
    // v-filtration persistence pairs of the outgoing differential: (source level, target level)
    mutable std::map<std::pair<int, int>, std::shared_ptr<const std::vector<std::pair<int, int>>>> pairs_;
    std::shared_ptr<const HomBasis> hom_basis(int m, int a2) const;
    std::shared_ptr<const std::vector<std::pair<int, int>>> filtered_pairs(int m, int a2) const;
    // homology coordinates of a cycle of the slice
    std::vector<std::uint64_t> coords(const HomBasis& b, std::vector<std::uint64_t> v) const;
    int induced_from_reps(const BitMatrix& reps, const BitMatrix& f, const HomBasis& tgt) const;
};

// counts on the knot or link after dividing out the W factors of the all-collapsed complex
class DeconvolvedTable {
public:
    // big holds the all-collapsed complex; wfactors = n - components
    DeconvolvedTable(std::shared_ptr<const SliceComplex> big, int wfactors);
    int wfactors() const { return w_; }
    const SliceComplex& big() const { return *big_; }
    int a2_top() const { return big_->a2_max(); }

    // generic: deconvolve any per-bigrading count that is additive over the W tensor factors
    long deconvolve(const std::string& tag, int m, int a2, const std::function<long(int, int)>& big_value) const;
    int dim(int m, int a2) const;
    ZHomology hom_z(int m, int a2) const;
    // rank of U^k : (m,a) -> (m-2k, a-1k)
    int u_rank(int m, int a2, int k) const;
    int v_rank(int m, int a2, int k) const;
    int d1_rank(int m, int a2) const;
    int d1_squared_rank(int m, int a2) const;
    int u_after_d1_rank(int m, int a2, int k) const;   // U^k d1
    int d1_after_u_rank(int m, int a2, int k) const;   // d1 U^k
    int spectral_dim(int m, int a2, int p, int s) const;

private:
    std::shared_ptr<const SliceComplex> big_;
    int w_;
    mutable std::mutex mu_;
    mutable std::map<std::tuple<std::string, int, int>, long> memo_;
    mutable std::map<std::pair<int, int>, std::pair<long, std::map<std::string, long>>> zmemo_;
    std::pair<long, std::map<std::string, long>> z_counts(int m, int a2) const;
};

struct Window {
    int a2_lo = 0, a2_hi = 0;
    int vmax = 3;
};
Window default_window(const GridDiagram& g, int vmax = 3);

struct TableRow {
    int m = 0, a2 = 0;
    int rank = 0;
    std::vector<std::string> torsion;
    int u_rank = 0;
    int v_rank = -1;  // -1 when the variant has no v
};

struct HomologyReport {
    std::string variant;
    Window window;
    std::vector<TableRow> rows;  // nonzero slices only
};

struct UPiece {
    int d = 0, s2 = 0, n = 0;
};
struct UDecomposition {
    bool has_tower = false;
    int tower_m = 0, tower_a2 = 0;
    std::vector<UPiece> torsion;
};

struct Invariants {
    int tau = 0, tau_plus = 0, tau_plus_u = 0, rho = 0;
};

struct Del1Report {
    std::vector<std::tuple<int, int, int>> rank;         // (m, 2a, rank of del1*) nonzero entries only
    std::vector<std::tuple<int, int, int>> homology;     // dims of H(GH-, del1*)
    std::vector<std::tuple<int, int, int>> hat_rank;     // del1* on GH-hat
    int max_u_power_on_image = -1;
    int max_u_power_into_tower = -1;
    bool image_u_torsion = true;
    bool squares_to_zero = true;
    bool representative_independent = true;
    bool identically_zero = true;
};

struct SpectralPage {
    int r = 0;  // page index with E_2 = GH-[v]
    std::vector<std::tuple<int, int, int, int>> dims;  // (m, 2a, p, dim) nonzero only
};
struct SpectralReport {
    std::vector<SpectralPage> pages;
    int collapsed_at = -1;
    bool converges_to_ghl = false;
};

class WindowNotStabilized : public GridError {
public:
    explicit WindowNotStabilized(const std::string& m) : GridError("WindowNotStabilized", m) {}
};

// computation context for one diagram: caches the collapsed engines
class Homology {
public:
    explicit Homology(const GridDiagram& g, int threads = 1);
    const GridDiagram& diagram() const { return g_; }
    int components() const { return comps_; }
    const DeconvolvedTable& minus() const;   // GH- (collapsed for links)
    const DeconvolvedTable& ghl() const;     // GHL mod 2
    const DeconvolvedTable& ghl_z() const;   // signed GHL over Z
    const DeconvolvedTable& hat() const;     // GH-hat from the tilde complex

    HomologyReport table(const std::string& which, const Window& w) const;  // gc_minus | gc_hat | gcl | gcl_z
    UDecomposition decompose_minus(const Window& w) const;
    Invariants invariants(const Window& w) const;
    Del1Report del1_star(const Window& w) const;
    SpectralReport spectral(const Window& w, int r_max) const;
    // total dimension of GH-hat, all bigradings
    std::map<std::pair<int, int>, int> hat_table() const;

private:
    GridDiagram g_;
    int comps_;
    int threads_;
    mutable std::once_flag f1_, f2_, f3_, f4_;
    mutable std::unique_ptr<DeconvolvedTable> minus_, ghl_, ghlz_, hat_;
};

// homology slice table computed straight from one engine configuration (no deconvolution);
// used for the full multi-variable complexes at small n
std::map<std::pair<int, int>, int> direct_dims(const SliceComplex& c, int a2_lo, int a2_hi, int m_pad = 0);

// parallel map over independent work items, results in input order
void parallel_for(int count, int threads, const std::function<void(int)>& f);

}  // namespace gridhom
