#pragma once

#include <functional>
#include <string>
#include <vector>

#include "meshsizer/mesh.hpp"
#include "meshsizer/nurbs.hpp"

namespace meshsizer {

struct WallNodeParam {
    int node = -1;
    int curve = 0;  ///< 0 = upper, 1 = lower
    double lambda = 0.0;
    double residual = 0.0;
};

/// Curve parameters of the background-mesh wall nodes on the reference
/// geometry; kept constant across morphs.
struct WallParametrization {
    std::vector<WallNodeParam> entries;
};

struct ElasticityConfig {
    double young = 1.0;
    double poisson = 0.3;  ///< plane strain; must lie in [0, 0.5)
};

/// Inverts every wall boundary node onto the reference geometry. Throws
/// NumericError if any residual exceeds the tolerance.
WallParametrization recover_wall_params(const HybridMesh& bg, const AerofoilGeometry& ref_geom,
                                        double tolerance = 1e-8);

/// Linear P1 elasticity solve with the given Dirichlet data; free nodes get
/// the equilibrium displacement. Quads are split for assembly only.
std::vector<Vec2> solve_elastic_displacement(const HybridMesh& mesh,
                                             const std::vector<int>& dirichlet_nodes,
                                             const std::vector<Vec2>& dirichlet_values,
                                             const ElasticityConfig& cfg);

/// Moves the wall nodes onto new_geom at their stored curve parameters,
/// holds the far field fixed, and relaxes the interior elastically.
/// Connectivity is preserved; inverted output elements are reported through
/// warn but are not fatal.
HybridMesh morph_background(const HybridMesh& bg, const WallParametrization& wall,
                            const AerofoilGeometry& new_geom, const ElasticityConfig& cfg,
                            const std::function<void(const std::string&)>& warn = {});

}  // namespace meshsizer
