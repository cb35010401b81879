#pragma once

#include <random>

#include "gridhom/grid.hpp"

namespace testutil {

inline gridhom::GridDiagram random_grid(int n, std::mt19937_64& rng) {
    using namespace gridhom;
    for (;;) {
        Perm o = unrank_perm(n, rng() % factorial(n)), x = unrank_perm(n, rng() % factorial(n));
        bool ok = true;
        for (int i = 0; i < n; ++i) ok = ok && o[i] != x[i];
        if (ok) return make_diagram(o, x);
    }
}

inline gridhom::GridDiagram trefoil5() { return gridhom::make_diagram({0, 1, 2, 3, 4}, {3, 4, 0, 1, 2}); }
inline gridhom::GridDiagram unknot2() { return gridhom::make_diagram({0, 1}, {1, 0}); }
inline gridhom::GridDiagram hopf4() { return gridhom::make_diagram({1, 2, 3, 0}, {3, 0, 1, 2}); }

}  // namespace testutil
