#include "meshsizer/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "meshsizer/errors.hpp"

namespace meshsizer {

namespace {

double element_hull_distance(const HybridMesh& mesh, int element, const Vec2& p) {
    auto ids = mesh.element_nodes(element);
    const int n = static_cast<int>(ids.size());
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k)
        best = std::min(best, point_segment_distance(p, mesh.nodes[ids[k]],
                                                     mesh.nodes[ids[(k + 1) % n]]));
    return best;
}

int closest_element(const HybridMesh& mesh, const PointLocator& locator, const Vec2& p) {
    if (const auto loc = locator.locate(p)) return loc->element;
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int e = 0; e < mesh.element_count(); ++e) {
        const double d = element_hull_distance(mesh, e, p);
        if (d < best_dist) {
            best_dist = d;
            best = e;
        }
    }
    return best;
}

}  // namespace

BackgroundMesh transfer_spacing(const HybridMesh& comp_mesh, const SpacingField& comp_spacing,
                                const HybridMesh& bg_mesh, const WarnHandler& warn) {
    if (comp_spacing.size() != comp_mesh.node_count())
        throw UsageError("spacing field does not match the computational mesh");

    const PointLocator bg_locator(bg_mesh);
    constexpr double kUnset = std::numeric_limits<double>::infinity();
    std::vector<double> result(bg_mesh.node_count(), kUnset);

    auto assign_element = [&](int element, double value) {
        for (int id : bg_mesh.element_nodes(element))
            result[id] = std::min(result[id], value);
    };

    for (int j = 0; j < comp_mesh.node_count(); ++j) {
        const Vec2 p = comp_mesh.nodes[j];
        const auto hits = bg_locator.locate_all(p);
        if (!hits.empty()) {
            // A node on a shared edge or vertex belongs to every incident
            // element's patch.
            for (const auto& loc : hits) assign_element(loc.element, comp_spacing[j]);
        } else {
            // Computational node outside the background mesh: contribute to
            // the closest background element.
            assign_element(closest_element(bg_mesh, bg_locator, p), comp_spacing[j]);
        }
    }

    // Isolated background nodes: patch captured no computational node.
    PointLocator comp_locator(comp_mesh);
    for (int i = 0; i < bg_mesh.node_count(); ++i) {
        if (result[i] != kUnset) continue;
        if (const auto loc = comp_locator.locate(bg_mesh.nodes[i])) {
            double lo = std::numeric_limits<double>::infinity();
            for (int id : comp_mesh.element_nodes(loc->element))
                lo = std::min(lo, comp_spacing[id]);
            result[i] = lo;
        } else {
            int nearest = 0;
            double best = std::numeric_limits<double>::infinity();
            for (int j = 0; j < comp_mesh.node_count(); ++j) {
                const double d = (comp_mesh.nodes[j] - bg_mesh.nodes[i]).squared_norm();
                if (d < best) {
                    best = d;
                    nearest = j;
                }
            }
            result[i] = comp_spacing[nearest];
            if (warn)
                warn("background node " + std::to_string(i) +
                     " lies outside the computational mesh; using nearest node spacing");
        }
    }

    BackgroundMesh out;
    out.mesh = bg_mesh;
    out.spacing.delta_min = comp_spacing.delta_min;
    out.spacing.delta_max = comp_spacing.delta_max;
    out.spacing.values = std::move(result);
    return out;
}

double query_spacing(const BackgroundMesh& bg, const PointLocator& locator, const Vec2& point) {
    const auto loc = locator.locate(point);
    if (!loc)
        throw NumericError("query point (" + std::to_string(point.x) + ", " +
                           std::to_string(point.y) + ") lies outside the background mesh");
    auto ids = bg.mesh.element_nodes(loc->element);
    if (loc->quad) {
        const double s = loc->coords[0], t = loc->coords[1];
        return (1 - s) * (1 - t) * bg.spacing[ids[0]] + s * (1 - t) * bg.spacing[ids[1]] +
               s * t * bg.spacing[ids[2]] + (1 - s) * t * bg.spacing[ids[3]];
    }
    return loc->coords[0] * bg.spacing[ids[0]] + loc->coords[1] * bg.spacing[ids[1]] +
           loc->coords[2] * bg.spacing[ids[2]];
}

double query_spacing(const BackgroundMesh& bg, const Vec2& point) {
    return query_spacing(bg, PointLocator(bg.mesh), point);
}

}  // namespace meshsizer
