#include "meshsizer/synthetic.hpp"

#include <cmath>

#include "meshsizer/errors.hpp"

namespace meshsizer {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Layer heights of the inflation band: h1 = C Re^(-3/4), h_k = G h_{k-1},
/// stopping when the next layer would exceed half the isotropic spacing.
std::vector<double> inflation_heights(const SyntheticCase& d) {
    if (!(d.reynolds > 0.0) || !(d.c_first > 0.0))
        throw UsageError("synthetic case requires positive Reynolds number and C");
    if (!(d.growth > 1.0)) throw UsageError("inflation growth factor G must exceed 1");
    const double h1 = d.c_first * std::pow(d.reynolds, -0.75);
    std::vector<double> heights;
    double h = h1;
    while (h <= 0.5 * d.spacing && static_cast<int>(heights.size()) < d.max_layers) {
        heights.push_back(h);
        h *= d.growth;
    }
    return heights;
}

/// Row offsets above the inflation band: keep growing geometrically until
/// the isotropic spacing is reached, then uniform rows filling `extent`.
std::vector<double> triangle_heights(const SyntheticCase& d, double start, double extent) {
    std::vector<double> heights;
    double h = start * d.growth;
    double used = 0.0;
    while (h < d.spacing && used + h < extent) {
        heights.push_back(h);
        used += h;
        h *= d.growth;
    }
    const double remaining = extent - used;
    const int n_uniform = std::max(1, static_cast<int>(std::ceil(remaining / d.spacing)));
    for (int k = 0; k < n_uniform; ++k) heights.push_back(remaining / n_uniform);
    return heights;
}

struct FieldEval {
    const SyntheticFieldParams& f;
    double bl;  // boundary-layer thickness for the Mach profile

    double pressure(const Vec2& p, double dist_wall) const {
        (void)dist_wall;
        const double bump =
            f.bump_amplitude * std::exp(-((p - f.bump_center).squared_norm()) /
                                        (2.0 * f.bump_radius * f.bump_radius));
        const double shock = f.shock_amplitude * std::tanh((p.x - f.shock_position) / f.shock_width) *
                             std::exp(-(p.y * p.y) / (2.0 * f.shock_height * f.shock_height));
        return f.p_base + bump - shock;
    }

    double mach(const Vec2& p, double dist_wall) const {
        const double phi = f.wake_angle_deg * kPi / 180.0;
        const Vec2 dir{std::cos(phi), std::sin(phi)};
        const Vec2 rel = p - f.wake_origin;
        const double along = rel.dot(dir);
        const double perp = rel.cross(dir);
        const double onset = 0.5 * (1.0 + std::tanh(along / 0.1));
        const double deficit =
            f.wake_deficit * onset * std::exp(-perp * perp / (2.0 * f.wake_width * f.wake_width));
        const double shock_drop =
            0.15 * f.shock_amplitude *
            (1.0 + std::tanh((p.x - f.shock_position) / f.shock_width));
        const double profile = std::tanh(dist_wall / bl);
        return f.mach_base * (1.0 - deficit) * (1.0 - shock_drop) * profile;
    }
};

SyntheticResult build_box(const SyntheticCase& d) {
    if (d.nx < 2) throw UsageError("box case needs nx >= 2");
    const auto [x0, y0, x1, y1] = d.box;
    if (!(x1 > x0 && y1 > y0)) throw UsageError("box extents must be positive");

    const auto quad_h = inflation_heights(d);
    double band = 0.0;
    for (double h : quad_h) band += h;
    if (band >= (y1 - y0) * 0.5)
        throw UsageError("inflation band fills more than half of the box height");

    std::vector<double> row_y{y0};
    for (double h : quad_h) row_y.push_back(row_y.back() + h);
    const double start = quad_h.empty() ? d.spacing / d.growth : quad_h.back();
    for (double h : triangle_heights(d, start, (y1 - y0) - band))
        row_y.push_back(row_y.back() + h);

    const int n_cols = d.nx + 1;
    const int n_rows = static_cast<int>(row_y.size());
    const int n_quad_rows = static_cast<int>(quad_h.size());
    const double dx = (x1 - x0) / d.nx;

    HybridMesh mesh;
    mesh.nodes.reserve(static_cast<size_t>(n_rows) * n_cols);
    for (int r = 0; r < n_rows; ++r)
        for (int c = 0; c < n_cols; ++c) mesh.nodes.push_back({x0 + c * dx, row_y[r]});
    auto id = [n_cols](int r, int c) { return r * n_cols + c; };

    for (int r = 0; r < n_quad_rows; ++r)
        for (int c = 0; c < d.nx; ++c)
            mesh.quads.push_back({id(r, c), id(r, c + 1), id(r + 1, c + 1), id(r + 1, c)});
    for (int r = n_quad_rows; r + 1 < n_rows; ++r) {
        for (int c = 0; c < d.nx; ++c) {
            mesh.triangles.push_back({id(r, c), id(r, c + 1), id(r + 1, c + 1)});
            mesh.triangles.push_back({id(r, c), id(r + 1, c + 1), id(r + 1, c)});
        }
    }

    for (int c = 0; c < d.nx; ++c)
        mesh.boundary.push_back({id(0, c), id(0, c + 1), BoundaryTag::wall});
    for (int c = 0; c < d.nx; ++c)
        mesh.boundary.push_back({id(n_rows - 1, c), id(n_rows - 1, c + 1), BoundaryTag::farfield});
    for (int r = 0; r + 1 < n_rows; ++r) {
        mesh.boundary.push_back({id(r, 0), id(r + 1, 0), BoundaryTag::farfield});
        mesh.boundary.push_back({id(r, d.nx), id(r + 1, d.nx), BoundaryTag::farfield});
    }

    for (int c = 0; c < n_cols; ++c) {
        std::vector<int> column;
        for (int r = 0; r <= n_quad_rows; ++r) column.push_back(id(r, c));
        if (column.size() >= 2) mesh.wall_columns.push_back(std::move(column));
    }

    SyntheticResult out;
    out.mesh = std::move(mesh);
    out.first_layer_height = quad_h.empty() ? 0.0 : quad_h.front();
    out.inflation_height = band;

    FieldEval eval{d.fields, d.fields.bl_thickness > 0.0 ? d.fields.bl_thickness
                                                         : std::max(1.5 * band, 1e-3)};
    out.pressure = NodalField("pressure", std::vector<double>(out.mesh.node_count()));
    out.mach = NodalField("mach", std::vector<double>(out.mesh.node_count()));
    for (int i = 0; i < out.mesh.node_count(); ++i) {
        const Vec2 p = out.mesh.nodes[i];
        out.pressure[i] = eval.pressure(p, p.y - y0);
        out.mach[i] = eval.mach(p, p.y - y0);
    }
    return out;
}

SyntheticResult build_aerofoil(const SyntheticCase& d) {
    if (d.wall_segments < 8 || d.wall_segments % 2 != 0)
        throw UsageError("aerofoil case needs an even wall_segments >= 8");
    const AerofoilGeometry geom = d.geometry ? *d.geometry : base_aerofoil();
    const Vec2 centre{0.45, 0.0};

    // Wall ring, clockwise around the body (counter-clockwise as seen from
    // the annulus domain): trailing edge, lower surface reversed, leading
    // edge, upper surface.
    const int m = d.wall_segments / 2;
    std::vector<Vec2> ring;
    for (int k = 0; k < m; ++k)
        ring.push_back(eval_curve(geom.lower, 1.0 - static_cast<double>(k) / m));
    for (int k = 0; k < m; ++k)
        ring.push_back(eval_curve(geom.upper, static_cast<double>(k) / m));
    const int n_ring = static_cast<int>(ring.size());

    const auto quad_h = inflation_heights(d);
    std::vector<double> offsets{0.0};
    for (double h : quad_h) offsets.push_back(offsets.back() + h);
    const double band = offsets.back();
    const int n_quad_rows = static_cast<int>(quad_h.size());

    // Outward wall normals: the inflation band follows fixed per-node
    // directions so the layer heights stay an exact geometric progression.
    std::vector<Vec2> normals(n_ring);
    for (int i = 0; i < n_ring; ++i) {
        const Vec2 prev = ring[(i + n_ring - 1) % n_ring];
        const Vec2 next = ring[(i + 1) % n_ring];
        normals[i] = (next - prev).perp().normalized();
    }

    HybridMesh mesh;
    for (int r = 0; r <= n_quad_rows; ++r)
        for (int i = 0; i < n_ring; ++i) mesh.nodes.push_back(ring[i] + offsets[r] * normals[i]);

    // Beyond the band: blend from the offset ring to a far-field circle.
    const double radius = d.farfield_offset;
    std::vector<Vec2> inner(n_ring), outer(n_ring);
    double mean_gap = 0.0;
    for (int i = 0; i < n_ring; ++i) {
        inner[i] = ring[i] + band * normals[i];
        const Vec2 rel = inner[i] - centre;
        if (rel.norm() >= radius)
            throw UsageError("farfield_offset must exceed the inflation band extent");
        outer[i] = centre + radius * rel.normalized();
        mean_gap += (outer[i] - inner[i]).norm();
    }
    mean_gap /= n_ring;

    const double start = quad_h.empty() ? d.spacing / d.growth : quad_h.back();
    std::vector<double> gaps = triangle_heights(d, start, mean_gap);
    double cumulative = 0.0;
    for (double h : gaps) cumulative += h;
    double partial = 0.0;
    for (double h : gaps) {
        partial += h;
        const double s = partial / cumulative;
        for (int i = 0; i < n_ring; ++i)
            mesh.nodes.push_back(inner[i] + s * (outer[i] - inner[i]));
    }

    const int n_rings = n_quad_rows + 1 + static_cast<int>(gaps.size());
    auto id = [n_ring](int r, int i) { return r * n_ring + (i % n_ring); };

    for (int r = 0; r < n_quad_rows; ++r)
        for (int i = 0; i < n_ring; ++i)
            mesh.quads.push_back({id(r, i), id(r, i + 1), id(r + 1, i + 1), id(r + 1, i)});
    for (int r = n_quad_rows; r + 1 < n_rings; ++r) {
        for (int i = 0; i < n_ring; ++i) {
            mesh.triangles.push_back({id(r, i), id(r, i + 1), id(r + 1, i + 1)});
            mesh.triangles.push_back({id(r, i), id(r + 1, i + 1), id(r + 1, i)});
        }
    }

    for (int i = 0; i < n_ring; ++i)
        mesh.boundary.push_back({id(0, i), id(0, i + 1), BoundaryTag::wall});
    for (int i = 0; i < n_ring; ++i)
        mesh.boundary.push_back(
            {id(n_rings - 1, i), id(n_rings - 1, i + 1), BoundaryTag::farfield});

    for (int i = 0; i < n_ring; ++i) {
        std::vector<int> column;
        for (int r = 0; r <= n_quad_rows; ++r) column.push_back(id(r, i));
        if (column.size() >= 2) mesh.wall_columns.push_back(std::move(column));
    }

    SyntheticResult out;
    out.mesh = std::move(mesh);
    out.first_layer_height = quad_h.empty() ? 0.0 : quad_h.front();
    out.inflation_height = band;

    SyntheticFieldParams fields = d.fields;
    fields.wake_origin = eval_curve(geom.upper, 1.0);  // trailing edge
    FieldEval eval{fields, fields.bl_thickness > 0.0 ? fields.bl_thickness
                                                     : std::max(1.5 * band, 1e-3)};
    out.pressure = NodalField("pressure", std::vector<double>(out.mesh.node_count()));
    out.mach = NodalField("mach", std::vector<double>(out.mesh.node_count()));
    for (int r = 0; r < n_rings; ++r) {
        for (int i = 0; i < n_ring; ++i) {
            const Vec2 p = out.mesh.nodes[id(r, i)];
            const double dist_wall = (p - ring[i]).norm();
            out.pressure[id(r, i)] = eval.pressure(p, dist_wall);
            out.mach[id(r, i)] = eval.mach(p, dist_wall);
        }
    }
    return out;
}

}  // namespace

SyntheticResult synthesize_case(const SyntheticCase& descriptor) {
    SyntheticResult out = descriptor.kind == SyntheticCase::Kind::box ? build_box(descriptor)
                                                                      : build_aerofoil(descriptor);
    canonicalize_boundary(out.mesh);
    validate_mesh(out.mesh);
    return out;
}

}  // namespace meshsizer
