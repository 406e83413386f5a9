#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "meshsizer/errors.hpp"
#include "meshsizer/spacing.hpp"
#include "meshsizer/synthetic.hpp"
#include "meshsizer/transfer.hpp"
#include "test_helpers.hpp"

using namespace meshsizer;
using namespace test_helpers;

namespace {

SpacingField spacing_of(const HybridMesh&, double lo, double hi,
                        const std::vector<double>& values) {
    SpacingField s;
    s.delta_min = lo;
    s.delta_max = hi;
    s.values = values;
    return s;
}

bool point_in_element(const HybridMesh& mesh, int e, const Vec2& p) {
    auto ids = mesh.element_nodes(e);
    const int n = static_cast<int>(ids.size());
    for (int k = 0; k < n; ++k) {
        if (signed_area2(mesh.nodes[ids[k]], mesh.nodes[ids[(k + 1) % n]], p) < -1e-12)
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("uniform spacing transfers as the constant") {
    const HybridMesh comp = structured_tri_grid(12, 12);
    const HybridMesh bg = structured_tri_grid(4, 4);
    const auto result = transfer_spacing(
        comp, spacing_of(comp, 0.1, 1.0, std::vector<double>(comp.node_count(), 0.4)), bg);
    for (int i = 0; i < bg.node_count(); ++i) CHECK(result.spacing[i] == 0.4);
    CHECK(result.spacing.delta_min == 0.1);
    CHECK(result.spacing.delta_max == 1.0);
}

TEST_CASE("patch minimum rule") {
    // One background triangle; a small computational triangle inside it with
    // nodal values {0.5, 0.2, 0.9}: every background node sees min 0.2.
    HybridMesh bg;
    bg.nodes = {{0, 0}, {4, 0}, {0, 4}};
    bg.triangles = {{0, 1, 2}};
    HybridMesh comp;
    comp.nodes = {{1, 1}, {2, 1}, {1, 2}};
    comp.triangles = {{0, 1, 2}};
    const auto result = transfer_spacing(comp, spacing_of(comp, 0.1, 1.0, {0.5, 0.2, 0.9}), bg);
    for (int i = 0; i < 3; ++i) CHECK(result.spacing[i] == 0.2);
}

TEST_CASE("conservativity on random mesh pairs") {
    std::mt19937_64 rng(99);
    auto rnd = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int rep = 0; rep < 50; ++rep) {
        const int nc = 8 + static_cast<int>(rng() % 13);
        const int nb = 3 + static_cast<int>(rng() % 5);
        const HybridMesh comp = structured_tri_grid(nc, nc);
        const HybridMesh bg = structured_tri_grid(nb, nb);

        const double lo = 0.01, hi = 1.0;
        std::vector<double> values(comp.node_count());
        for (double& v : values) v = lo + (hi - lo) * rnd();
        const SpacingField spacing = spacing_of(comp, lo, hi, values);

        const auto result = transfer_spacing(comp, spacing, bg);

        // Independent patch minima by brute force.
        std::vector<double> brute(bg.node_count(), std::numeric_limits<double>::infinity());
        for (int j = 0; j < comp.node_count(); ++j) {
            for (int e = 0; e < bg.element_count(); ++e) {
                if (!point_in_element(bg, e, comp.nodes[j])) continue;
                for (int id : bg.element_nodes(e)) brute[id] = std::min(brute[id], values[j]);
            }
        }
        for (int i = 0; i < bg.node_count(); ++i) {
            CHECK(result.spacing[i] >= lo);
            CHECK(result.spacing[i] <= hi);
            if (std::isfinite(brute[i])) CHECK(result.spacing[i] <= brute[i] + 1e-15);
        }
    }
}

TEST_CASE("transfer is deterministic") {
    const HybridMesh comp = structured_tri_grid(15, 15);
    const HybridMesh bg = structured_tri_grid(5, 5);
    std::vector<double> values(comp.node_count());
    std::mt19937_64 rng(3);
    for (double& v : values) v = 0.1 + 0.9 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    const SpacingField spacing = spacing_of(comp, 0.1, 1.0, values);
    const auto a = transfer_spacing(comp, spacing, bg);
    const auto b = transfer_spacing(comp, spacing, bg);
    CHECK(a.spacing.values == b.spacing.values);
}

TEST_CASE("orphan computational nodes reach the closest background element") {
    // Computational mesh hangs over the background boundary; the outside
    // corner node carries the global minimum and must not be lost.
    HybridMesh comp = structured_tri_grid(6, 6, 1.2, 1.2);
    for (auto& p : comp.nodes) {
        p.x -= 0.1;
        p.y -= 0.1;
    }
    const HybridMesh bg = structured_tri_grid(4, 4);
    std::vector<double> values(comp.node_count(), 0.5);
    values[0] = 0.01;  // corner node at (-0.1, -0.1), outside the background
    const auto result = transfer_spacing(comp, spacing_of(comp, 0.01, 1.0, values), bg);
    double lowest = 1.0;
    for (int i = 0; i < bg.node_count(); ++i) lowest = std::min(lowest, result.spacing[i]);
    CHECK(lowest == 0.01);
}

TEST_CASE("isolated background nodes take the containing-element minimum") {
    // Two coarse computational triangles; a fine background grid so that
    // interior background patches capture no computational node.
    HybridMesh comp;
    comp.nodes = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    comp.triangles = {{0, 1, 2}, {0, 2, 3}};
    const SpacingField spacing = spacing_of(comp, 0.1, 1.0, {0.9, 0.3, 0.6, 0.8});
    const HybridMesh bg = structured_tri_grid(8, 8);
    const auto result = transfer_spacing(comp, spacing, bg);

    // Background nodes well inside the square are isolated: their patches
    // capture no computational node (those sit at the four corners only).
    const PointLocator locator(comp);
    int checked = 0;
    for (int i = 0; i < bg.node_count(); ++i) {
        const Vec2 p = bg.nodes[i];
        if (p.x < 0.24 || p.x > 0.76 || p.y < 0.24 || p.y > 0.76) continue;
        const auto loc = locator.locate(p);
        REQUIRE(loc.has_value());
        double expectation = std::numeric_limits<double>::infinity();
        for (int id : comp.element_nodes(loc->element))
            expectation = std::min(expectation, spacing[id]);
        CHECK(result.spacing[i] == expectation);
        ++checked;
    }
    CHECK(checked > 10);
}

TEST_CASE("background nodes outside the computational mesh warn and use the nearest node") {
    const HybridMesh comp = structured_tri_grid(4, 4);          // [0,1]^2
    const HybridMesh bg = structured_tri_grid(4, 4, 2.0, 2.0);  // [0,2]^2
    std::vector<double> values(comp.node_count(), 0.5);
    int warnings = 0;
    const auto result = transfer_spacing(comp, spacing_of(comp, 0.1, 1.0, values), bg,
                                         [&warnings](const std::string&) { ++warnings; });
    CHECK(warnings > 0);
    for (int i = 0; i < bg.node_count(); ++i) CHECK(result.spacing[i] == 0.5);
}

TEST_CASE("coarse and nested fine background meshes") {
    SyntheticCase d;
    d.nx = 32;
    d.box = {0.0, 0.0, 1.0, 1.0};
    d.spacing = 0.04;
    d.reynolds = 1e5;
    const SyntheticResult solved = synthesize_case(d);
    SpacingConfig cfg;
    const SpacingField target =
        compute_target_spacing(solved.mesh, solved.pressure, solved.mach, cfg);

    const HybridMesh coarse = structured_tri_grid(4, 4);
    const HybridMesh fine = structured_tri_grid(8, 8);
    const auto on_coarse = transfer_spacing(solved.mesh, target, coarse);
    const auto on_fine = transfer_spacing(solved.mesh, target, fine);

    // Shared locations: every coarse node is the (2r, 2c) fine node. Coarser
    // patches cover more of the domain, so their minima can only be smaller.
    for (int r = 0; r <= 4; ++r) {
        for (int c = 0; c <= 4; ++c) {
            const int ci = r * 5 + c;
            const int fi = 2 * r * 9 + 2 * c;
            CHECK(on_coarse.spacing[ci] <= on_fine.spacing[fi] + 1e-15);
        }
    }
}

TEST_CASE("query_spacing") {
    HybridMesh bg;
    bg.nodes = {{0, 0}, {1, 0}, {0, 1}};
    bg.triangles = {{0, 1, 2}};
    BackgroundMesh mesh_with_spacing{bg, spacing_of(bg, 0.05, 1.0, {0.1, 0.2, 0.3})};

    SUBCASE("nodal values are reproduced exactly") {
        CHECK(query_spacing(mesh_with_spacing, {0, 0}) == doctest::Approx(0.1).epsilon(1e-14));
        CHECK(query_spacing(mesh_with_spacing, {1, 0}) == doctest::Approx(0.2).epsilon(1e-14));
    }
    SUBCASE("centroid averages the three nodal values") {
        CHECK(query_spacing(mesh_with_spacing, {1.0 / 3, 1.0 / 3}) ==
              doctest::Approx(0.2).epsilon(1e-13));
    }
    SUBCASE("interpolation stays within the element's nodal range") {
        const HybridMesh grid = structured_tri_grid(6, 6);
        std::vector<double> values(grid.node_count());
        std::mt19937_64 rng(8);
        for (double& v : values) v = 0.1 + 0.9 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
        BackgroundMesh bgm{grid, spacing_of(grid, 0.1, 1.0, values)};
        const PointLocator locator(grid);
        for (int k = 0; k < 1000; ++k) {
            const Vec2 p{static_cast<double>(rng() >> 11) * 0x1.0p-53,
                         static_cast<double>(rng() >> 11) * 0x1.0p-53};
            const double v = query_spacing(bgm, locator, p);
            const auto loc = locator.locate(p);
            REQUIRE(loc.has_value());
            double lo = 1.0, hi = 0.0;
            for (int id : grid.element_nodes(loc->element)) {
                lo = std::min(lo, values[id]);
                hi = std::max(hi, values[id]);
            }
            CHECK(v >= lo - 1e-12);
            CHECK(v <= hi + 1e-12);
        }
    }
    SUBCASE("points outside the domain are an error") {
        CHECK_THROWS_AS(query_spacing(mesh_with_spacing, {5, 5}), NumericError);
    }
}
