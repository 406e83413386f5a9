#pragma once

#include <functional>
#include <string>

#include "meshsizer/mesh.hpp"

namespace meshsizer {

/// Coarse mesh carrying a nodal spacing field, queried by interpolation
/// during mesh generation.
struct BackgroundMesh {
    HybridMesh mesh;
    SpacingField spacing;
};

using WarnHandler = std::function<void(const std::string&)>;

/// Conservative transfer: each background node receives the minimum spacing
/// over the computational nodes falling inside its element patch.
/// Computational nodes outside the background mesh contribute to the nodes of
/// the closest background element; background nodes whose patch captured
/// nothing take the minimum over the computational element containing them,
/// falling back to the nearest computational node (with a warning).
BackgroundMesh transfer_spacing(const HybridMesh& comp_mesh, const SpacingField& comp_spacing,
                                const HybridMesh& bg_mesh, const WarnHandler& warn = {});

/// Interpolated spacing at a point: barycentric on triangles, bilinear on
/// quads. Throws NumericError if the point lies outside the background mesh.
double query_spacing(const BackgroundMesh& bg, const Vec2& point);

/// Same, but with a caller-owned locator for repeated queries.
double query_spacing(const BackgroundMesh& bg, const PointLocator& locator, const Vec2& point);

}  // namespace meshsizer
