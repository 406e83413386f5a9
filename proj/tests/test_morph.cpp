#include <doctest.h>

#include <cmath>

#include "meshsizer/errors.hpp"
#include "meshsizer/morph.hpp"
#include "meshsizer/synthetic.hpp"
#include "test_helpers.hpp"

using namespace meshsizer;
using namespace test_helpers;

namespace {

HybridMesh aerofoil_background(int segments = 32) {
    SyntheticCase d;
    d.kind = SyntheticCase::Kind::aerofoil;
    d.wall_segments = segments;
    d.spacing = 0.15;
    d.farfield_offset = 2.0;
    d.reynolds = 1e4;  // few, thick inflation layers: a coarse background
    return synthesize_case(d).mesh;
}

double max_norm(const std::vector<Vec2>& v) {
    double m = 0.0;
    for (const auto& u : v) m = std::max(m, u.norm());
    return m;
}

}  // namespace

TEST_CASE("recover_wall_params") {
    const AerofoilGeometry geom = base_aerofoil();
    const HybridMesh bg = aerofoil_background();

    SUBCASE("wall nodes invert with tiny residuals") {
        const WallParametrization wall = recover_wall_params(bg, geom);
        CHECK(!wall.entries.empty());
        for (const auto& e : wall.entries) {
            CHECK(e.residual < 1e-10);
            CHECK(e.lambda >= 0.0);
            CHECK(e.lambda <= 1.0);
        }
    }
    SUBCASE("sampled curve points give monotone parameters") {
        // 50 wall nodes laid out along the upper curve of the Table-2
        // aerofoil; inversion must recover an increasing parameter sequence.
        std::vector<double> lambdas;
        for (int k = 0; k < 50; ++k) {
            const double lambda = 0.01 + 0.98 * k / 49.0;
            const InversionResult r = invert_point(geom.upper, eval_curve(geom.upper, lambda));
            lambdas.push_back(r.lambda);
        }
        for (size_t k = 1; k < lambdas.size(); ++k) CHECK(lambdas[k] > lambdas[k - 1]);
    }
    SUBCASE("a mesh off the geometry is rejected") {
        HybridMesh shifted = bg;
        for (auto& p : shifted.nodes) p.y += 0.05;
        CHECK_THROWS_AS(recover_wall_params(shifted, geom), NumericError);
    }
}

TEST_CASE("identity morph returns the input mesh") {
    const AerofoilGeometry geom = base_aerofoil();
    const HybridMesh bg = aerofoil_background();
    const WallParametrization wall = recover_wall_params(bg, geom);
    const HybridMesh morphed = morph_background(bg, wall, geom, ElasticityConfig{});
    for (int i = 0; i < bg.node_count(); ++i)
        CHECK((morphed.nodes[i] - bg.nodes[i]).norm() < 1e-10);
}

TEST_CASE("affine patch test") {
    // Dirichlet data from an affine map on every boundary node; linear
    // triangles must reproduce the affine displacement exactly.
    const HybridMesh mesh = structured_tri_grid(9, 7);
    auto affine = [](const Vec2& p) {
        return Vec2{0.02 * p.x - 0.01 * p.y + 0.003, 0.015 * p.x + 0.025 * p.y - 0.002};
    };
    std::vector<int> dirichlet_nodes;
    std::vector<Vec2> dirichlet_values;
    for (const auto& be : mesh.boundary) {
        for (int id : {be.a, be.b}) {
            if (std::find(dirichlet_nodes.begin(), dirichlet_nodes.end(), id) ==
                dirichlet_nodes.end()) {
                dirichlet_nodes.push_back(id);
                dirichlet_values.push_back(affine(mesh.nodes[id]));
            }
        }
    }
    const auto u = solve_elastic_displacement(mesh, dirichlet_nodes, dirichlet_values,
                                              ElasticityConfig{});
    for (int i = 0; i < mesh.node_count(); ++i)
        CHECK((u[i] - affine(mesh.nodes[i])).norm() < 1e-8);
}

TEST_CASE("morph to a perturbed theta") {
    const AerofoilGeometry ref = base_aerofoil();
    const std::array<double, 22> zero{};
    const AerofoilGeometry target = build_aerofoil(zero, 1.05);
    const HybridMesh bg = aerofoil_background();
    const WallParametrization wall = recover_wall_params(bg, ref);
    const HybridMesh morphed = morph_background(bg, wall, target, ElasticityConfig{});

    SUBCASE("connectivity is bit-identical") {
        CHECK(morphed.triangles == bg.triangles);
        CHECK(morphed.quads == bg.quads);
        CHECK(morphed.wall_columns == bg.wall_columns);
        REQUIRE(morphed.boundary.size() == bg.boundary.size());
        for (size_t k = 0; k < bg.boundary.size(); ++k) {
            CHECK(morphed.boundary[k].a == bg.boundary[k].a);
            CHECK(morphed.boundary[k].b == bg.boundary[k].b);
            CHECK(morphed.boundary[k].tag == bg.boundary[k].tag);
        }
    }
    SUBCASE("wall nodes land on the target geometry") {
        for (const auto& e : wall.entries) {
            const NurbsCurve& curve = e.curve == 0 ? target.upper : target.lower;
            CHECK((morphed.nodes[e.node] - eval_curve(curve, e.lambda)).norm() < 1e-8);
        }
    }
    SUBCASE("farfield nodes stay fixed exactly") {
        for (const auto& be : bg.boundary) {
            if (be.tag != BoundaryTag::farfield) continue;
            CHECK(morphed.nodes[be.a].x == bg.nodes[be.a].x);
            CHECK(morphed.nodes[be.a].y == bg.nodes[be.a].y);
        }
    }
    SUBCASE("interior displacements obey the wall maximum") {
        std::vector<Vec2> wall_disp, interior_disp;
        std::vector<char> is_wall(bg.node_count(), 0);
        for (const auto& e : wall.entries) is_wall[e.node] = 1;
        for (int i = 0; i < bg.node_count(); ++i) {
            const Vec2 u = morphed.nodes[i] - bg.nodes[i];
            (is_wall[i] ? wall_disp : interior_disp).push_back(u);
        }
        CHECK(max_norm(interior_disp) <= max_norm(wall_disp) + 1e-12);
    }
}

TEST_CASE("morph without Dirichlet data is singular") {
    const HybridMesh mesh = structured_tri_grid(3, 3);
    CHECK_THROWS_AS(solve_elastic_displacement(mesh, {}, {}, ElasticityConfig{}), NumericError);
}

TEST_CASE("invalid Poisson ratio is rejected") {
    const HybridMesh mesh = structured_tri_grid(3, 3);
    ElasticityConfig cfg;
    cfg.poisson = 0.5;
    CHECK_THROWS_AS(solve_elastic_displacement(mesh, {0}, {Vec2{0, 0}}, cfg), UsageError);
}
