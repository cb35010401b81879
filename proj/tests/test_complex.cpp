#include <random>

#include "doctest.h"
#include "gridhom/complex.hpp"
#include "gridhom/homology.hpp"
#include "helpers.hpp"

using namespace gridhom;
using testutil::random_grid;

TEST_CASE("unknot boundary") {
    auto g = testutil::unknot2();
    auto c = make_complex(g, Variant::gc_minus);
    auto d01 = boundary(c, generator(c, {0, 1}));
    auto expect = times_var(c, generator(c, {1, 0}), 0);
    expect += times_var(c, generator(c, {1, 0}), 1);
    CHECK(d01 == expect);
    CHECK(boundary(c, generator(c, {1, 0})).zero());
    auto h = make_complex(g, Variant::gc_hat);
    CHECK(describe(boundary(h, generator(h, {0, 1}))) == "1*[1,0]V0^1");
}

TEST_CASE("d squared vanishes") {
    std::mt19937_64 rng(11);
    std::vector<GridDiagram> gs = {testutil::trefoil5(), testutil::hopf4()};
    for (int t = 0; t < 4; ++t) gs.push_back(random_grid(4, rng));
    for (auto& g : gs)
        for (Variant v : {Variant::gc_minus, Variant::gc_hat, Variant::gcl, Variant::gcl_z, Variant::collapsed_gc_minus,
                          Variant::collapsed_gcl, Variant::collapsed_gcl_z}) {
            auto c = make_complex(g, v, 0);
            auto r = verify_identities(c, "d_squared", true);
            CHECK_MESSAGE(r.violations.empty(), variant_name(v), " ", to_text(g));
            auto h = verify_identities(c, "homogeneity", true);
            CHECK(h.violations.empty());
        }
    auto gz = make_complex(testutil::trefoil5(), Variant::gcl_z, 99);
    CHECK(verify_identities(gz, "d_squared", true).violations.empty());
}

TEST_CASE("homotopy identity for each X") {
    std::mt19937_64 rng(12);
    std::vector<GridDiagram> gs = {testutil::trefoil5(), testutil::hopf4(), random_grid(4, rng)};
    for (auto& g : gs)
        for (Variant v : {Variant::gc_minus, Variant::gcl, Variant::gcl_z}) {
            auto r = verify_identities(make_complex(g, v), "homotopy", true);
            CHECK_MESSAGE(r.violations.empty(), variant_name(v), " ", (r.violations.empty() ? "" : r.violations[0]));
            CHECK(r.checked == (long)factorial(g.n) * g.n);
        }
}

TEST_CASE("relations among the interior-graded parts") {
    auto c = make_complex(testutil::trefoil5(), Variant::gc_minus);
    auto r = verify_identities(c, "d1_relations", true);
    CHECK(r.violations.empty());
    std::mt19937_64 rng(5);
    auto g6 = random_grid(6, rng);
    CHECK(verify_identities(make_complex(g6, Variant::gc_minus), "d1_relations", false, 60, 3).violations.empty());
}

TEST_CASE("integer boundary reduces to the mod 2 boundary") {
    auto g = testutil::trefoil5();
    auto cz = make_complex(g, Variant::gcl_z);
    auto c2 = make_complex(g, Variant::gcl);
    for (auto& x : all_states(g.n)) {
        auto dz = boundary(cz, generator(cz, x));
        ChainElement red;
        red.ring = Ring::mod2;
        for (auto& [k, v] : dz.terms) red.add(k, v);
        CHECK(red == boundary(c2, generator(c2, x)));
    }
}

TEST_CASE("boundary is linear") {
    auto g = testutil::trefoil5();
    auto c = make_complex(g, Variant::gcl_z);
    auto a = generator(c, {0, 1, 2, 3, 4}), b = generator(c, {2, 0, 4, 1, 3});
    auto s = a.scaled(3);
    s -= b.scaled(2);
    auto lhs = boundary(c, s);
    auto rhs = boundary(c, a).scaled(3);
    rhs -= boundary(c, b).scaled(2);
    CHECK(lhs == rhs);
}

TEST_CASE("no interior rectangles on the 2x2 grid") {
    auto c = make_complex(testutil::unknot2(), Variant::gc_minus);
    for (auto& x : all_states(2)) CHECK(d1_operator(c, generator(c, x)).zero());
}

TEST_CASE("slice matrices agree with the chain-level boundary") {
    auto g = testutil::trefoil5();
    for (Variant v : {Variant::gc_minus, Variant::gcl, Variant::gc_hat, Variant::collapsed_gcl}) {
        auto c = make_complex(g, v);
        SliceComplex sc(g, engine_config(c));
        // killed variables come last, so engine variables are a prefix
        int en = sc.config().nvars;
        int checked = 0;
        for (int a2 = sc.a2_max(); a2 >= sc.a2_max() - 6; a2 -= 2) {
            auto [lo, hi] = sc.m_range(a2);
            for (int m = lo; m <= hi + 2; ++m) {
                auto S = sc.slice(m, a2);
                auto T = sc.slice(m - 1, a2);
                BitMatrix d = sc.d_mod2(m, a2);
                for (int i = 0; i < S->size(); ++i) {
                    ChainElement e;
                    e.ring = Ring::mod2;
                    std::vector<int> mono(c.nvars + 1, 0);
                    for (int t = 0; t < en; ++t) mono[t] = S->mono[(size_t)i * en + t];
                    mono[c.nvars] = S->vpow[i];
                    e.add({sc.states()[S->state[i]], mono}, 1);
                    auto de = boundary(c, e);
                    int nnz = 0;
                    for (int j = 0; j < T->size(); ++j) nnz += d.get(i, j);
                    CHECK(nnz == (int)de.terms.size());
                    for (auto& [k, coef] : de.terms) {
                        std::vector<std::uint16_t> ee(k.second.begin(), k.second.begin() + en);
                        int col = T->find((std::uint32_t)rank_perm(k.first), ee.data(), k.second.back());
                        REQUIRE(col >= 0);
                        CHECK(d.get(i, col));
                    }
                    ++checked;
                }
            }
        }
        CHECK(checked > 0);
    }
}
