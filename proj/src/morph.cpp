#include "meshsizer/morph.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <set>

#include "meshsizer/errors.hpp"

namespace meshsizer {

namespace {

std::vector<int> tagged_nodes(const HybridMesh& mesh, BoundaryTag tag) {
    std::set<int> ids;
    for (const auto& be : mesh.boundary)
        if (be.tag == tag) {
            ids.insert(be.a);
            ids.insert(be.b);
        }
    return {ids.begin(), ids.end()};
}

}  // namespace

WallParametrization recover_wall_params(const HybridMesh& bg, const AerofoilGeometry& ref_geom,
                                        double tolerance) {
    WallParametrization wall;
    for (int node : tagged_nodes(bg, BoundaryTag::wall)) {
        const Vec2 p = bg.nodes[node];
        const InversionResult up = invert_point(ref_geom.upper, p);
        const InversionResult lo = invert_point(ref_geom.lower, p);
        WallNodeParam entry;
        entry.node = node;
        if (up.residual <= lo.residual) {
            entry.curve = 0;
            entry.lambda = up.lambda;
            entry.residual = up.residual;
        } else {
            entry.curve = 1;
            entry.lambda = lo.lambda;
            entry.residual = lo.residual;
        }
        if (entry.residual > tolerance)
            throw NumericError("wall node " + std::to_string(node) + " lies " +
                               std::to_string(entry.residual) +
                               " off the reference geometry (tolerance " +
                               std::to_string(tolerance) + ")");
        wall.entries.push_back(entry);
    }
    return wall;
}

std::vector<Vec2> solve_elastic_displacement(const HybridMesh& mesh,
                                             const std::vector<int>& dirichlet_nodes,
                                             const std::vector<Vec2>& dirichlet_values,
                                             const ElasticityConfig& cfg) {
    if (dirichlet_nodes.size() != dirichlet_values.size())
        throw UsageError("Dirichlet node and value counts differ");
    if (dirichlet_nodes.empty())
        throw NumericError("singular elastic stiffness system: no Dirichlet data");
    if (!(cfg.poisson >= 0.0 && cfg.poisson < 0.5))
        throw UsageError("Poisson ratio must lie in [0, 0.5)");

    const int nn = mesh.node_count();
    std::vector<int> fixed(nn, -1);
    for (size_t k = 0; k < dirichlet_nodes.size(); ++k) {
        const int id = dirichlet_nodes[k];
        if (id < 0 || id >= nn) throw UsageError("Dirichlet node out of range");
        fixed[id] = static_cast<int>(k);
    }

    std::vector<int> free_index(nn, -1);
    int n_free = 0;
    for (int i = 0; i < nn; ++i)
        if (fixed[i] < 0) free_index[i] = n_free++;

    std::vector<Vec2> displacement(nn, Vec2{});
    for (size_t k = 0; k < dirichlet_nodes.size(); ++k)
        displacement[dirichlet_nodes[k]] = dirichlet_values[k];
    if (n_free == 0) return displacement;

    // Plane-strain constitutive matrix.
    const double e = cfg.young, nu = cfg.poisson;
    const double f = e / ((1.0 + nu) * (1.0 - 2.0 * nu));
    const double d11 = f * (1.0 - nu), d12 = f * nu, d33 = f * (1.0 - 2.0 * nu) / 2.0;

    // Assembly triangles: mesh triangles plus split quads.
    std::vector<std::array<int, 3>> tris(mesh.triangles.begin(), mesh.triangles.end());
    for (const auto& q : mesh.quads) {
        const double d02 = distance(mesh.nodes[q[0]], mesh.nodes[q[2]]);
        const double d13 = distance(mesh.nodes[q[1]], mesh.nodes[q[3]]);
        if (d02 <= d13) {
            tris.push_back({q[0], q[1], q[2]});
            tris.push_back({q[0], q[2], q[3]});
        } else {
            tris.push_back({q[0], q[1], q[3]});
            tris.push_back({q[1], q[2], q[3]});
        }
    }

    std::vector<Eigen::Triplet<double>> triplets;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * n_free);

    for (const auto& t : tris) {
        const Vec2 a = mesh.nodes[t[0]], b = mesh.nodes[t[1]], c = mesh.nodes[t[2]];
        const double area2 = signed_area2(a, b, c);
        if (area2 <= 0.0) throw NumericError("degenerate element in elasticity assembly");
        const double area = 0.5 * area2;
        // Shape-function gradients.
        const Vec2 g[3] = {(c - b).perp() / area2, (a - c).perp() / area2, (b - a).perp() / area2};

        double ke[6][6];
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                const double bi = g[i].x, ci = g[i].y, bj = g[j].x, cj = g[j].y;
                ke[2 * i][2 * j] = area * (d11 * bi * bj + d33 * ci * cj);
                ke[2 * i][2 * j + 1] = area * (d12 * bi * cj + d33 * ci * bj);
                ke[2 * i + 1][2 * j] = area * (d12 * ci * bj + d33 * bi * cj);
                ke[2 * i + 1][2 * j + 1] = area * (d11 * ci * cj + d33 * bi * bj);
            }
        }

        for (int i = 0; i < 3; ++i) {
            for (int ci = 0; ci < 2; ++ci) {
                if (fixed[t[i]] >= 0) continue;
                const int row = 2 * free_index[t[i]] + ci;
                for (int j = 0; j < 3; ++j) {
                    for (int cj = 0; cj < 2; ++cj) {
                        const double v = ke[2 * i + ci][2 * j + cj];
                        if (fixed[t[j]] >= 0) {
                            const Vec2 u = displacement[t[j]];
                            rhs[row] -= v * (cj == 0 ? u.x : u.y);
                        } else {
                            triplets.emplace_back(row, 2 * free_index[t[j]] + cj, v);
                        }
                    }
                }
            }
        }
    }

    Eigen::SparseMatrix<double> k_mat(2 * n_free, 2 * n_free);
    k_mat.setFromTriplets(triplets.begin(), triplets.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
    solver.compute(k_mat);
    if (solver.info() != Eigen::Success) throw NumericError("singular elastic stiffness system");
    const Eigen::VectorXd u = solver.solve(rhs);
    if (solver.info() != Eigen::Success) throw NumericError("elastic solve failed");

    for (int i = 0; i < nn; ++i)
        if (fixed[i] < 0) displacement[i] = {u[2 * free_index[i]], u[2 * free_index[i] + 1]};
    return displacement;
}

HybridMesh morph_background(const HybridMesh& bg, const WallParametrization& wall,
                            const AerofoilGeometry& new_geom, const ElasticityConfig& cfg,
                            const std::function<void(const std::string&)>& warn) {
    std::vector<int> nodes;
    std::vector<Vec2> values;
    for (const auto& entry : wall.entries) {
        const NurbsCurve& curve = entry.curve == 0 ? new_geom.upper : new_geom.lower;
        nodes.push_back(entry.node);
        values.push_back(eval_curve(curve, entry.lambda) - bg.nodes[entry.node]);
    }
    for (int node : tagged_nodes(bg, BoundaryTag::farfield)) {
        nodes.push_back(node);
        values.push_back(Vec2{});
    }

    const auto u = solve_elastic_displacement(bg, nodes, values, cfg);

    HybridMesh out = bg;
    for (int i = 0; i < out.node_count(); ++i) out.nodes[i] += u[i];

    if (warn) {
        for (int e = 0; e < out.element_count(); ++e)
            if (out.element_area(e) <= 0.0)
                warn("morphed element " + std::to_string(e) + " is inverted");
    }
    return out;
}

}  // namespace meshsizer
