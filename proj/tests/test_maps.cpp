#include "doctest.h"

#include <random>

#include "gridhom/library.hpp"
#include "gridhom/maps.hpp"
#include "helpers.hpp"

using namespace gridhom;

namespace {

std::string first_failure(const std::vector<MapCheck>& cs) {
    for (auto& c : cs)
        if (!c.ok()) return c.name + ": " + c.violations.front();
    return "";
}

}  // namespace

TEST_CASE("pentagon maps on the trefoil: chain law, homotopy, homology iso") {
    GridDiagram g = builtin_entry("trefoil").g;
    for (int col = 0; col + 1 < g.n; ++col) {
        if (!commutation_legal(g, col) && !switch_legal(g, col)) continue;
        auto r = pentagon_suite(g, col, Variant::gcl_z, 3);
        INFO("column " << col << " " << first_failure(r.checks));
        CHECK(r.ok());
        CHECK(r.iso);
    }
}

TEST_CASE("pentagon maps on random small grids") {
    std::mt19937_64 rng(11);
    int tried = 0;
    for (int i = 0; i < 40 && tried < 6; ++i) {
        GridDiagram g = testutil::random_grid(4, rng);
        int col = (int)(rng() % 3);
        if (!commutation_legal(g, col) && !switch_legal(g, col)) continue;
        ++tried;
        auto r = pentagon_suite(g, col, Variant::gcl_z, i);
        INFO(to_text(g) << " column " << col << " " << first_failure(r.checks));
        CHECK(r.ok());
    }
    CHECK(tried > 0);
}

TEST_CASE("stabilization cone recovers the original homology") {
    for (const char* name : {"unknot2", "trefoil"}) {
        GridDiagram g = builtin_entry(name).g;
        auto r = stabilization_cone_check(g, 0, 5);
        INFO(name << " " << first_failure(r.checks));
        CHECK(r.ok());
        CHECK(r.tables_agree);
        CHECK(r.gp.n == g.n + 1);
    }
}

TEST_CASE("stabilization pair lookup rejects unrelated diagrams") {
    GridDiagram g = builtin_entry("trefoil").g;
    CHECK_THROWS(stabilization_cone_check(g, builtin_entry("figure_eight").g));
    GridDiagram gp = apply_move(g, Move{MoveKind::stabilize_xsw, 2, 0, false});
    auto r = stabilization_cone_check(g, gp);
    CHECK(r.col == 2);
    CHECK(r.ok());
}

TEST_CASE("skein quadruple of the trefoil") {
    auto src = builtin_skein();
    SkeinQuadruple q = skein_quadruple(src.g, src.col);
    CHECK(q.l == 1);
    CHECK(q.l0 == 2);
    CHECK(link_components(q.minus).count == 1);
    CHECK(link_components(q.zero).count == 2);
    CHECK(link_components(q.zero_prime).count == 2);
    SkeinQuadruple back = skein_quadruple(q.minus, q.col);
    CHECK(back.plus.o_rows == q.plus.o_rows);
    CHECK(back.plus.x_rows == q.plus.x_rows);
    CHECK_FALSE(back.input_was_plus);
}

TEST_CASE("skein quadruple rejects columns without a crossing") {
    GridDiagram u = builtin_entry("unknot2").g;
    try {
        (void)skein_quadruple(u, 0);
        FAIL("expected NotACrossing");
    } catch (const GridError& e) {
        CHECK(e.kind == "NotACrossing");
    }
    CHECK_THROWS(skein_quadruple(builtin_entry("trefoil").g, 7));
}

TEST_CASE("skein maps suite on the trefoil") {
    auto src = builtin_skein();
    auto r = skein_maps_suite(skein_quadruple(src.g, src.col), 2);
    INFO(first_failure(r.checks));
    CHECK(r.ok());
    CHECK(r.annuli == 4);
    CHECK(r.bridge.size() == 2);
}

TEST_CASE("skein exact sequence for the trefoil") {
    auto src = builtin_skein();
    auto r = skein_les_check(skein_quadruple(src.g, src.col), 2, 2);
    INFO(r.failure << " " << first_failure(r.checks));
    CHECK(r.ok());
    CHECK(r.exact());
    CHECK(r.l0_match);
    for (auto& row : r.rows) CHECK(row.exact);
}

TEST_CASE("skein exact sequence on random crossings") {
    std::mt19937_64 rng(23);
    int done = 0;
    for (int i = 0; i < 200 && done < 4; ++i) {
        GridDiagram g = testutil::random_grid(5, rng);
        int col = (int)(rng() % 4);
        SkeinQuadruple q;
        try {
            q = skein_quadruple(g, col);
        } catch (const GridError&) {
            continue;
        }
        ++done;
        auto r = skein_les_check(q, 2, i);
        INFO(to_text(g) << " column " << col << " " << r.failure);
        CHECK(r.exact());
        CHECK(r.l0_match);
        auto m = skein_maps_suite(q, i);
        INFO(first_failure(m.checks));
        CHECK(m.ok());
    }
    CHECK(done == 4);
}

TEST_CASE("J module dims") {
    auto j = j_module();
    CHECK(j.size() == 3);
    CHECK(j[{0, 2}] == 1);
    CHECK(j[{-2, -2}] == 1);
    CHECK(j[{-1, 0}] == 2);
}
