#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "gridhom/grid.hpp"

namespace gridhom {

// element of the spin extension: (underlying permutation, exponent of the central z)
struct SpinElement {
    Perm perm;
    int z = 0;
    bool operator==(const SpinElement&) const = default;
};

SpinElement spin_identity(int n);
SpinElement spin_gen(int n, int k);             // lift of (k k+1)
SpinElement spin_tau(int n, int i, int j);      // lift of (i j), ordered
SpinElement spin_section(const Perm& p);        // gamma(p), z = 0
SpinElement spin_mul(const SpinElement& a, const SpinElement& b);
SpinElement spin_inverse(const SpinElement& a);
SpinElement spin_mul_gen(const SpinElement& a, int k);

// lexicographically least reduced word (letters k mean (k k+1)) of p
std::vector<int> canonical_word(const Perm& p);
// parity of the canonical word's inversion order; gamma(p) differs from other reduced words by z^(parity diff)
int section_parity(const Perm& p);

// sign of the rectangle from x with SW corner on column c1 and NE corner on column c2,
// split as g(x) g(y) local(x,c1,c2) so callers can cache the state factor
int local_sign_bit(const Perm& x, int c1, int c2);
int rect_sign(const Perm& x, int c1, int c2);

class SignAssignment {
public:
    explicit SignAssignment(int n, std::uint64_t gauge_seed = 0);
    int n() const { return n_; }
    std::uint64_t gauge_seed() const { return gauge_seed_; }
    // +1/-1; long rectangles share the sign of their short companion
    int sign(const Perm& x, int c1, int c2) const;
    int sign(const Rect& r) const { return sign(r.from, r.c1, r.c2); }
    int state_bit(const Perm& x) const;

private:
    int n_;
    std::uint64_t gauge_seed_;
    // state factor by permutation rank, filled once for small n and read-only afterwards
    std::shared_ptr<const std::vector<unsigned char>> table_;
};

struct AxiomViolation {
    std::string axiom;
    Perm from, to;
    std::string detail;
};

struct AxiomReport {
    long domains = 0;  // composite domains examined
    long checked = 0;  // sign comparisons made
    std::vector<AxiomViolation> violations;
};

// exhaustive over all composites (intended for n <= 3), or `samples` random composites from `seed`
AxiomReport verify_sign_axioms(const GridDiagram& g, const SignAssignment& s, bool exhaustive, long samples = 0,
                               std::uint64_t seed = 1);

}  // namespace gridhom
