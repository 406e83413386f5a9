#include <doctest.h>

#include <cmath>
#include <random>

#include "meshsizer/errors.hpp"
#include "meshsizer/nurbs.hpp"

using namespace meshsizer;

namespace {

double rand01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

NurbsCurve degree0_curve() {
    NurbsCurve c;
    c.degree = 0;
    c.knots = {0.0, 0.5, 1.0};
    c.control_points = {{0, 0}, {1, 0}};
    c.weights = {1.0, 1.0};
    return c;
}

NurbsCurve degree2_curve() {
    NurbsCurve c;
    c.degree = 2;
    c.knots = {0, 0, 0, 0.5, 1, 1, 1};
    c.control_points = {{0, 0}, {1, 0}, {2, 1}, {3, 0}};
    c.weights = {1, 1, 1, 1};
    return c;
}

}  // namespace

TEST_CASE("degree-0 basis is the span indicator") {
    const auto basis = eval_basis(degree0_curve(), 0.25);
    REQUIRE(basis.size() == 2);
    CHECK(basis[0] == 1.0);
    CHECK(basis[1] == 0.0);
}

TEST_CASE("hand-evaluated quadratic basis at 0.25") {
    const auto basis = eval_basis(degree2_curve(), 0.25);
    REQUIRE(basis.size() == 4);
    CHECK(basis[0] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(basis[1] == doctest::Approx(0.625).epsilon(1e-14));
    CHECK(basis[2] == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(basis[3] == 0.0);
}

TEST_CASE("partition of unity at 1000 random parameters") {
    const AerofoilGeometry geom = base_aerofoil();
    std::mt19937_64 rng(11);
    for (int k = 0; k < 1000; ++k) {
        const double lambda = rand01(rng);
        for (const NurbsCurve* c : {&geom.upper, &geom.lower}) {
            const auto basis = eval_basis(*c, lambda);
            double sum = 0.0;
            for (double b : basis) {
                CHECK(b >= 0.0);
                sum += b;
            }
            CHECK(std::abs(sum - 1.0) < 1e-12);
        }
    }
    // Spot checks at tighter tolerance, including both ends.
    for (double lambda : {0.0, 0.3, 0.999, 1.0}) {
        const auto basis = eval_basis(geom.upper, lambda);
        double sum = 0.0;
        for (double b : basis) sum += b;
        CHECK(std::abs(sum - 1.0) < 1e-14);
    }
}

TEST_CASE("parameter outside [0,1] is rejected") {
    CHECK_THROWS_AS(eval_basis(degree2_curve(), 1.5), UsageError);
    CHECK_THROWS_AS(eval_curve(degree2_curve(), -0.1), UsageError);
}

TEST_CASE("unsupported derivative order is rejected") {
    CHECK_THROWS_AS(eval_curve(degree2_curve(), 0.5, 2), UsageError);
    CHECK_THROWS_AS(eval_curve(degree2_curve(), 0.5, -1), UsageError);
}

TEST_CASE("endpoint interpolation and tangent alignment") {
    const AerofoilGeometry geom = base_aerofoil();
    for (const NurbsCurve* c : {&geom.upper, &geom.lower}) {
        const Vec2 p0 = eval_curve(*c, 0.0);
        const Vec2 p1 = eval_curve(*c, 1.0);
        CHECK(p0.x == doctest::Approx(c->control_points.front().x).epsilon(1e-15));
        CHECK(p0.y == doctest::Approx(c->control_points.front().y).epsilon(1e-15));
        CHECK(p1.x == doctest::Approx(c->control_points.back().x).epsilon(1e-15));
        CHECK(p1.y == doctest::Approx(c->control_points.back().y).epsilon(1e-15));

        // Tangents aligned with the first/last control polygon legs.
        const Vec2 t0 = eval_curve(*c, 0.0, 1);
        const Vec2 leg0 = c->control_points[1] - c->control_points[0];
        CHECK(std::abs(t0.cross(leg0)) < 1e-12);
        CHECK(t0.dot(leg0) > 0.0);
        const Vec2 t1 = eval_curve(*c, 1.0, 1);
        const Vec2 leg1 = c->control_points[c->cp_count() - 1] - c->control_points[c->cp_count() - 2];
        CHECK(std::abs(t1.cross(leg1)) < 1e-12);
        CHECK(t1.dot(leg1) > 0.0);
    }
}

TEST_CASE("collinear control points stay on the segment") {
    NurbsCurve c;
    c.degree = 3;
    c.knots = {0, 0, 0, 0, 0.5, 1, 1, 1, 1};
    c.control_points = {{0, 0}, {0.1, 0}, {0.4, 0}, {0.8, 0}, {1, 0}};
    c.weights = {1, 1, 1, 1, 1};
    for (double lambda = 0.0; lambda <= 1.0; lambda += 0.05)
        CHECK(eval_curve(c, lambda).y == 0.0);
}

TEST_CASE("first derivative matches central finite differences") {
    const AerofoilGeometry geom = base_aerofoil();
    const double h = 1e-6;
    for (double lambda = 0.05; lambda < 0.999; lambda += 0.037) {
        for (const NurbsCurve* c : {&geom.upper, &geom.lower}) {
            const Vec2 d = eval_curve(*c, lambda, 1);
            const Vec2 fd = (eval_curve(*c, lambda + h) - eval_curve(*c, lambda - h)) / (2.0 * h);
            CHECK((d - fd).norm() <= 1e-6 * d.norm());
        }
    }
}

TEST_CASE("point inversion") {
    const AerofoilGeometry geom = base_aerofoil();

    SUBCASE("round trip through a curve point") {
        const InversionResult r = invert_point(geom.upper, eval_curve(geom.upper, 0.3));
        CHECK(std::abs(r.lambda - 0.3) < 1e-10);
        CHECK(r.residual < 1e-12);
    }
    SUBCASE("control point B0 inverts to the start") {
        const InversionResult r = invert_point(geom.upper, geom.upper.control_points.front());
        CHECK(r.lambda == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("off-curve point matches a dense-sampling oracle") {
        const Vec2 p{0.5, 0.5};
        const InversionResult r = invert_point(geom.upper, p);
        double best_lambda = 0.0, best = std::numeric_limits<double>::infinity();
        for (int k = 0; k <= 100000; ++k) {
            const double lambda = k / 100000.0;
            const double d = (eval_curve(geom.upper, lambda) - p).squared_norm();
            if (d < best) {
                best = d;
                best_lambda = lambda;
            }
        }
        CHECK(std::abs(r.lambda - best_lambda) < 1e-4);
        CHECK(r.residual <= std::sqrt(best) + 1e-12);
    }
    SUBCASE("inversion is the identity on [0.01, 0.99]") {
        for (const NurbsCurve* c : {&geom.upper, &geom.lower}) {
            for (double lambda = 0.01; lambda <= 0.99; lambda += 0.0099) {
                const InversionResult r = invert_point(*c, eval_curve(*c, lambda));
                CHECK(std::abs(r.lambda - lambda) < 1e-8);
            }
        }
    }
}

TEST_CASE("aerofoil construction") {
    SUBCASE("theta = 1 with zero offsets reproduces the base lower B2") {
        const AerofoilGeometry g = base_aerofoil();
        CHECK(g.lower.control_points[1].x == 0.0);
        CHECK(g.lower.control_points[1].y == -0.024);
    }
    SUBCASE("theta = 0.5 halves the mirrored control point") {
        const std::array<double, 22> zero{};
        const AerofoilGeometry g = build_aerofoil(zero, 0.5);
        CHECK(g.lower.control_points[1].x == 0.0);
        CHECK(g.lower.control_points[1].y == -0.012);
    }
    SUBCASE("leading-edge tangents are anti-parallel") {
        std::mt19937_64 rng(3);
        const auto ranges = aerofoil_offset_ranges();
        for (int rep = 0; rep < 20; ++rep) {
            std::array<double, 22> offsets;
            for (int k = 0; k < 22; ++k) offsets[k] = ranges[k] * (2.0 * rand01(rng) - 1.0);
            const double theta = 0.5 + rand01(rng);
            const AerofoilGeometry g = build_aerofoil(offsets, theta);
            const Vec2 lower_leg = g.lower.control_points[1] - g.lower.control_points[0];
            const Vec2 upper_leg = g.upper.control_points[0] - g.upper.control_points[1];
            CHECK(std::abs(lower_leg.cross(upper_leg)) < 1e-12);
            CHECK(lower_leg.dot(upper_leg) > 0.0);  // same direction: anti-parallel to the
                                                    // upper tangent leaving the leading edge
        }
    }
    SUBCASE("curves join at the leading and trailing edges") {
        const std::array<double, 22> zero{};
        const AerofoilGeometry g = build_aerofoil(zero, 1.3);
        const Vec2 le_u = eval_curve(g.upper, 0.0), le_l = eval_curve(g.lower, 0.0);
        const Vec2 te_u = eval_curve(g.upper, 1.0), te_l = eval_curve(g.lower, 1.0);
        CHECK((le_u - le_l).norm() == 0.0);
        CHECK((te_u - te_l).norm() == 0.0);
    }
    SUBCASE("construction is affine in each offset") {
        const std::array<double, 22> zero{};
        const AerofoilGeometry base = build_aerofoil(zero, 1.0);
        const auto ranges = aerofoil_offset_ranges();
        for (int k = 0; k < 22; ++k) {
            std::array<double, 22> offsets{};
            const double h = 0.5 * ranges[k];
            offsets[k] = h;
            const AerofoilGeometry g = build_aerofoil(offsets, 1.0);

            // Expected control points: exactly one coordinate shifted by h,
            // plus the theta-coupled lower B2 when upper B2 moves.
            auto expect_u = base.upper.control_points;
            auto expect_l = base.lower.control_points;
            if (k < 6)
                expect_u[k + 1].x += h;
            else if (k < 12)
                expect_u[k - 5].y += h;
            else if (k < 17)
                expect_l[k - 10].x += h;
            else
                expect_l[k - 15].y += h;
            expect_l[1] = expect_l[0] + 1.0 * (expect_l[0] - expect_u[1]);

            for (int i = 0; i < 8; ++i) {
                CHECK(g.upper.control_points[i].x == expect_u[i].x);
                CHECK(g.upper.control_points[i].y == expect_u[i].y);
                CHECK(g.lower.control_points[i].x == expect_l[i].x);
                CHECK(g.lower.control_points[i].y == expect_l[i].y);
            }
        }
    }
    SUBCASE("out-of-range offsets and theta are rejected") {
        std::array<double, 22> offsets{};
        offsets[0] = 0.05;  // range is 4.3e-2
        CHECK_THROWS_AS(build_aerofoil(offsets, 1.0), UsageError);
        const std::array<double, 22> zero{};
        CHECK_THROWS_AS(build_aerofoil(zero, 0.4), UsageError);
        CHECK_THROWS_AS(build_aerofoil(zero, 1.6), UsageError);
    }
}
