#include "meshsizer/spacing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "meshsizer/errors.hpp"

namespace meshsizer {

namespace {

void check_field(const HybridMesh& mesh, const NodalField& field) {
    if (field.size() != mesh.node_count())
        throw UsageError("field '" + field.name + "' has " + std::to_string(field.size()) +
                         " values for a mesh with " + std::to_string(mesh.node_count()) +
                         " nodes");
}

std::vector<char> triangle_node_mask(const HybridMesh& mesh) {
    std::vector<char> mask(mesh.node_count(), 0);
    for (const auto& t : mesh.triangles)
        for (int id : t) mask[id] = 1;
    return mask;
}

/// Triangles of the mesh with quads split along their shorter diagonal.
struct SplitTriangle {
    std::array<int, 3> nodes;
};

std::vector<SplitTriangle> split_all_triangles(const HybridMesh& mesh) {
    std::vector<SplitTriangle> tris;
    tris.reserve(mesh.triangles.size() + 2 * mesh.quads.size());
    for (const auto& t : mesh.triangles) tris.push_back({t});
    for (const auto& q : mesh.quads) {
        const double d02 = distance(mesh.nodes[q[0]], mesh.nodes[q[2]]);
        const double d13 = distance(mesh.nodes[q[1]], mesh.nodes[q[3]]);
        if (d02 <= d13) {
            tris.push_back({{q[0], q[1], q[2]}});
            tris.push_back({{q[0], q[2], q[3]}});
        } else {
            tris.push_back({{q[0], q[1], q[3]}});
            tris.push_back({{q[1], q[2], q[3]}});
        }
    }
    return tris;
}

/// Constant gradient of the linear interpolant on a triangle. Differenced
/// against the first value: the shape-function gradients sum to zero, and
/// dropping the constant keeps large field offsets out of the rounding.
Vec2 p1_gradient(const Vec2& a, const Vec2& b, const Vec2& c, double fa, double fb, double fc,
                 double area2) {
    const Vec2 gb = (a - c).perp();
    const Vec2 gc = (b - a).perp();
    return ((fb - fa) * gb + (fc - fa) * gc) / area2;
}

std::vector<Vec2> recover_fe(const HybridMesh& mesh, const NodalField& field, bool split_quads) {
    std::vector<Vec2> grad(mesh.node_count(), Vec2{});
    std::vector<double> weight(mesh.node_count(), 0.0);

    auto add_triangle = [&](int na, int nb, int nc) {
        const Vec2 a = mesh.nodes[na], b = mesh.nodes[nb], c = mesh.nodes[nc];
        const double area2 = signed_area2(a, b, c);
        if (area2 == 0.0) throw NumericError("zero-area element in gradient recovery");
        const Vec2 g = p1_gradient(a, b, c, field[na], field[nb], field[nc], area2);
        const double w = 0.5 * area2;
        for (int id : {na, nb, nc}) {
            grad[id] += w * g;
            weight[id] += w;
        }
    };

    if (split_quads) {
        for (const auto& t : split_all_triangles(mesh)) add_triangle(t.nodes[0], t.nodes[1], t.nodes[2]);
    } else {
        for (const auto& t : mesh.triangles) add_triangle(t[0], t[1], t[2]);
        for (const auto& q : mesh.quads) {
            std::array<Vec2, 4> x;
            std::array<double, 4> f;
            for (int k = 0; k < 4; ++k) {
                x[k] = mesh.nodes[q[k]];
                f[k] = field[q[k]];
            }
            // Bilinear gradient at the element centre.
            const Vec2 xs = 0.5 * ((x[1] - x[0]) + (x[2] - x[3]));
            const Vec2 xt = 0.5 * ((x[3] - x[0]) + (x[2] - x[1]));
            const double fs = 0.5 * ((f[1] - f[0]) + (f[2] - f[3]));
            const double ft = 0.5 * ((f[3] - f[0]) + (f[2] - f[1]));
            const double det = xs.cross(xt);
            if (det == 0.0) throw NumericError("degenerate quad in gradient recovery");
            const Vec2 g{(fs * xt.y - ft * xs.y) / det, (ft * xs.x - fs * xt.x) / det};
            double area = 0.0;
            for (int k = 0; k < 4; ++k) area += x[k].cross(x[(k + 1) % 4]);
            area *= 0.5;
            for (int id : q) {
                grad[id] += area * g;
                weight[id] += area;
            }
        }
    }

    for (int i = 0; i < mesh.node_count(); ++i) {
        if (weight[i] == 0.0) throw NumericError("node " + std::to_string(i) + " has an empty patch");
        grad[i] = grad[i] / weight[i];
    }
    return grad;
}

std::vector<Vec2> recover_fv_dual(const HybridMesh& mesh, const NodalField& field) {
    std::vector<Vec2> flux(mesh.node_count(), Vec2{});
    std::vector<double> volume(mesh.node_count(), 0.0);

    // Edge incidence counts distinguish boundary edges of the element mesh.
    std::unordered_map<long long, int> edge_count;
    auto key = [](int a, int b) {
        if (a > b) std::swap(a, b);
        return (static_cast<long long>(a) << 32) | static_cast<unsigned>(b);
    };
    for (int e = 0; e < mesh.element_count(); ++e) {
        auto ids = mesh.element_nodes(e);
        const int n = static_cast<int>(ids.size());
        for (int k = 0; k < n; ++k) edge_count[key(ids[k], ids[(k + 1) % n])] += 1;
    }

    for (int e = 0; e < mesh.element_count(); ++e) {
        auto ids = mesh.element_nodes(e);
        const int n = static_cast<int>(ids.size());
        Vec2 centroid;
        double fc = 0.0;
        for (int id : ids) {
            centroid += mesh.nodes[id];
            fc += field[id];
        }
        centroid = centroid / n;
        fc /= n;

        for (int k = 0; k < n; ++k) {
            const int u = ids[k], v = ids[(k + 1) % n];
            const Vec2 xu = mesh.nodes[u], xv = mesh.nodes[v];
            const Vec2 m = 0.5 * (xu + xv);
            const double fm = 0.5 * (field[u] + field[v]);

            // Interior facet from the edge midpoint to the element centroid,
            // oriented from the u side towards the v side. Facet values are
            // taken relative to the receiving node: the closed-boundary
            // integral of a constant vanishes, so this only removes rounding.
            Vec2 nvec = (centroid - m).perp();
            if (nvec.dot(xv - xu) < 0.0) nvec = -1.0 * nvec;
            const double facet_value = 0.5 * (fm + fc);
            flux[u] += (facet_value - field[u]) * nvec;
            flux[v] -= (facet_value - field[v]) * nvec;

            volume[u] += 0.5 * signed_area2(xu, m, centroid);
            volume[v] += 0.5 * signed_area2(m, xv, centroid);

            if (edge_count.at(key(u, v)) == 1) {
                // Domain-boundary closure along the two half edges.
                const Vec2 nu{(m - xu).y, -(m - xu).x};
                const Vec2 nv{(xv - m).y, -(xv - m).x};
                flux[u] += (0.5 * (field[u] + fm) - field[u]) * nu;
                flux[v] += (0.5 * (fm + field[v]) - field[v]) * nv;
            }
        }
    }

    std::vector<Vec2> grad(mesh.node_count());
    for (int i = 0; i < mesh.node_count(); ++i) {
        if (volume[i] <= 0.0)
            throw NumericError("degenerate dual control volume at node " + std::to_string(i));
        grad[i] = flux[i] / volume[i];
    }
    return grad;
}

}  // namespace

double max_abs_eigenvalue(const SymMatrix2& m) {
    const double mean = 0.5 * (m.xx + m.yy);
    const double disc = std::hypot(0.5 * (m.xx - m.yy), m.xy);
    return std::max(std::abs(mean + disc), std::abs(mean - disc));
}

PrimitiveFields derive_primitives(const NodalField& rho, const NodalField& rho_u,
                                  const NodalField& rho_v, const NodalField& rho_e,
                                  const GasModel& gas) {
    const int n = rho.size();
    if (rho_u.size() != n || rho_v.size() != n || rho_e.size() != n)
        throw UsageError("conserved fields have mismatched lengths");
    if (!(gas.gamma > 1.0)) throw UsageError("gamma must exceed 1");

    PrimitiveFields out;
    out.pressure = NodalField("pressure", std::vector<double>(n));
    out.mach = NodalField("mach", std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
        const double r = rho[i];
        if (!(r > 0.0)) throw NumericError("non-positive density at node " + std::to_string(i));
        const double vx = rho_u[i] / r;
        const double vy = rho_v[i] / r;
        const double v2 = vx * vx + vy * vy;
        const double p = (gas.gamma - 1.0) * r * (rho_e[i] / r - 0.5 * v2);
        if (!(p > 0.0)) throw NumericError("non-positive pressure at node " + std::to_string(i));
        out.pressure[i] = p;
        out.mach[i] = std::sqrt(v2 / (gas.gamma * p / r));
    }
    return out;
}

std::vector<Vec2> recover_gradient(const HybridMesh& mesh, const NodalField& field,
                                   RecoveryStrategy strategy) {
    check_field(mesh, field);
    switch (strategy) {
        case RecoveryStrategy::fv_dual: return recover_fv_dual(mesh, field);
        case RecoveryStrategy::fe_hybrid: return recover_fe(mesh, field, false);
        case RecoveryStrategy::fe_split: return recover_fe(mesh, field, true);
    }
    throw UsageError("unknown recovery strategy");
}

NodalHessian recover_hessian(const HybridMesh& mesh, const NodalField& field,
                             RecoveryStrategy strategy) {
    const auto g = recover_gradient(mesh, field, strategy);
    NodalField gx("gx", std::vector<double>(mesh.node_count()));
    NodalField gy("gy", std::vector<double>(mesh.node_count()));
    for (int i = 0; i < mesh.node_count(); ++i) {
        gx[i] = g[i].x;
        gy[i] = g[i].y;
    }
    const auto hx = recover_gradient(mesh, gx, strategy);
    const auto hy = recover_gradient(mesh, gy, strategy);
    NodalHessian h;
    h.values.resize(mesh.node_count());
    for (int i = 0; i < mesh.node_count(); ++i) {
        h.values[i].xx = hx[i].x;
        h.values[i].yy = hy[i].y;
        h.values[i].xy = 0.5 * (hx[i].y + hy[i].x);
    }
    return h;
}

SpacingField spacing_from_hessian(const NodalHessian& hessian, std::pair<double, double> bounds,
                                  double scaling, const std::vector<char>* active) {
    const auto [dmin, dmax] = bounds;
    if (!(dmin > 0.0)) throw UsageError("delta_min must be positive");
    if (!(dmin <= dmax)) throw UsageError("delta_min must not exceed delta_max");
    if (!(scaling > 0.0 && scaling <= 1.0)) throw UsageError("scaling S must lie in (0,1]");
    if (active && static_cast<int>(active->size()) != hessian.size())
        throw UsageError("active mask length mismatch");

    const int n = hessian.size();
    std::vector<double> lam(n, 0.0);
    double lam_max = 0.0;
    for (int i = 0; i < n; ++i) {
        if (active && !(*active)[i]) continue;
        lam[i] = max_abs_eigenvalue(hessian.values[i]);
        if (!std::isfinite(lam[i])) throw NumericError("non-finite Hessian at node " + std::to_string(i));
        lam_max = std::max(lam_max, lam[i]);
    }

    SpacingField out;
    out.delta_min = dmin;
    out.delta_max = dmax;
    out.values.assign(n, dmax);
    if (lam_max <= 0.0) return out;

    const double k_const = scaling * scaling * dmin * dmin * lam_max;
    for (int i = 0; i < n; ++i) {
        if (active && !(*active)[i]) continue;
        if (lam[i] * dmin * dmin > k_const) {
            out.values[i] = dmin;
        } else if (lam[i] * dmax * dmax < k_const) {
            out.values[i] = dmax;
        } else {
            const double d = scaling * dmin * std::sqrt(lam_max / lam[i]);
            out.values[i] = std::clamp(d, dmin, dmax);
        }
    }
    return out;
}

SpacingField combine_spacings(const SpacingField& a, const SpacingField& b) {
    if (a.size() != b.size()) throw UsageError("spacing fields have mismatched lengths");
    if (a.delta_min != b.delta_min || a.delta_max != b.delta_max)
        throw UsageError("spacing fields have mismatched clamp bounds");
    SpacingField out = a;
    for (int i = 0; i < out.size(); ++i) out.values[i] = std::min(a[i], b[i]);
    return out;
}

NodalField smooth_along_chains(const HybridMesh& mesh, const NodalField& field,
                               const std::vector<std::vector<int>>& chains) {
    check_field(mesh, field);
    NodalField out = field;
    for (const auto& chain : chains) {
        const int n = static_cast<int>(chain.size());
        if (n < 3) continue;
        std::vector<double> d(n);
        for (int j = 0; j < n; ++j) d[j] = distance(mesh.nodes[chain[0]], mesh.nodes[chain[j]]);
        for (int j = 0; j + 1 < n; ++j)
            if (!(d[j] < d[j + 1]))
                throw NumericError("chain distances not strictly increasing at node " +
                                   std::to_string(chain[j + 1]));

        const int s = n - 2, last = n - 1;
        const double a = field[chain[0]];
        const double ds = d[s];
        const double ps = field[chain[s]];
        const double slope = (field[chain[last]] - ps) / (d[last] - ds);
        // p~(t) = a + c t^2 + e t^3 with p~(ds) = ps and p~'(ds) = slope.
        const double c = (3.0 * (ps - a) - ds * slope) / (ds * ds);
        const double e = (slope * ds - 2.0 * (ps - a)) / (ds * ds * ds);
        for (int j = 0; j <= n - 2; ++j) out[chain[j]] = a + c * d[j] * d[j] + e * d[j] * d[j] * d[j];
    }
    return out;
}

NodalField smooth_pressure_columns(const HybridMesh& mesh, const NodalField& pressure) {
    return smooth_along_chains(mesh, pressure, mesh.wall_columns);
}

std::vector<std::vector<int>> stretched_wake_chains(const HybridMesh& mesh, const Vec2& origin,
                                                    double aspect_threshold) {
    // Shortest edges of stretched triangles downstream of the origin.
    std::set<std::pair<int, int>> short_edges;
    for (const auto& t : mesh.triangles) {
        if (mesh.nodes[t[0]].x + mesh.nodes[t[1]].x + mesh.nodes[t[2]].x < 3.0 * origin.x) continue;
        double shortest = std::numeric_limits<double>::infinity(), longest = 0.0;
        std::pair<int, int> se{-1, -1};
        for (int k = 0; k < 3; ++k) {
            const int a = t[k], b = t[(k + 1) % 3];
            const double len = distance(mesh.nodes[a], mesh.nodes[b]);
            longest = std::max(longest, len);
            if (len < shortest) {
                shortest = len;
                se = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
            }
        }
        if (longest > aspect_threshold * shortest) short_edges.insert(se);
    }

    std::map<int, std::vector<int>> adj;
    for (const auto& [a, b] : short_edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }

    std::vector<std::vector<int>> chains;
    std::unordered_set<int> visited;
    for (const auto& [start, nbrs] : adj) {
        if (visited.count(start) || nbrs.size() != 1) continue;  // walk from path endpoints
        std::vector<int> chain{start};
        visited.insert(start);
        int prev = start, cur = nbrs[0];
        while (true) {
            chain.push_back(cur);
            visited.insert(cur);
            const auto& next_nbrs = adj[cur];
            if (next_nbrs.size() > 2) {
                chain.clear();  // branching: not a column-like strip
                break;
            }
            int next = -1;
            for (int nb : next_nbrs)
                if (nb != prev) next = nb;
            if (next < 0 || visited.count(next)) break;
            prev = cur;
            cur = next;
        }
        if (chain.size() < 3) continue;
        // Orient from the end nearest the wake centreline.
        if (std::abs(mesh.nodes[chain.back()].y - origin.y) <
            std::abs(mesh.nodes[chain.front()].y - origin.y))
            std::reverse(chain.begin(), chain.end());
        chains.push_back(std::move(chain));
    }
    return chains;
}

SpacingField extend_mach_spacing(const HybridMesh& mesh, const SpacingField& spacing) {
    if (spacing.size() != mesh.node_count()) throw UsageError("spacing length mismatch");
    const auto tri_mask = triangle_node_mask(mesh);
    SpacingField out = spacing;
    for (const auto& col : mesh.wall_columns) {
        const int outer = col.back();
        if (!tri_mask[outer])
            throw NumericError("column outermost node " + std::to_string(outer) +
                               " has no computed spacing value");
        for (size_t j = 0; j + 1 < col.size(); ++j) out.values[col[j]] = spacing[outer];
    }
    return out;
}

SpacingField compute_target_spacing(const HybridMesh& mesh, const NodalField& pressure,
                                    const NodalField& mach, const SpacingConfig& config) {
    check_field(mesh, pressure);
    check_field(mesh, mach);
    if (config.key_variables.empty()) throw UsageError("at least one key variable is required");

    const auto bounds = mesh_spacing_bounds(mesh);
    const auto tri_mask = triangle_node_mask(mesh);

    std::optional<SpacingField> result;
    for (const KeyVariable kv : config.key_variables) {
        SpacingField part;
        switch (kv) {
            case KeyVariable::pressure:
            case KeyVariable::smoothed_pressure: {
                NodalField f = pressure;
                if (kv == KeyVariable::smoothed_pressure) {
                    f = smooth_pressure_columns(mesh, f);
                    if (config.wake_origin) {
                        const auto chains = stretched_wake_chains(mesh, *config.wake_origin,
                                                                  config.wake_aspect_threshold);
                        f = smooth_along_chains(mesh, f, chains);
                    }
                }
                const auto h = recover_hessian(mesh, f, config.strategy);
                part = spacing_from_hessian(h, bounds, config.scaling);
                break;
            }
            case KeyVariable::mach: {
                const auto h = recover_hessian(mesh, mach, config.strategy);
                part = spacing_from_hessian(h, bounds, config.scaling, &tri_mask);
                part = extend_mach_spacing(mesh, part);
                break;
            }
        }
        result = result ? combine_spacings(*result, part) : part;
    }
    return *result;
}

}  // namespace meshsizer
