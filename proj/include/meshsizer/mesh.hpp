#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "meshsizer/geometry2d.hpp"

namespace meshsizer {

enum class BoundaryTag { wall, farfield };

struct BoundaryEdge {
    int a = -1;
    int b = -1;
    BoundaryTag tag = BoundaryTag::farfield;
};

/// 2D hybrid mesh: triangles plus quadrilaterals arranged in wall-normal
/// inflation columns. Elements share one id space, triangles first.
struct HybridMesh {
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::array<int, 4>> quads;
    std::vector<BoundaryEdge> boundary;
    /// Node-index chains ordered from the wall outward; wall_columns[i][0]
    /// lies on a wall boundary edge.
    std::vector<std::vector<int>> wall_columns;

    int node_count() const { return static_cast<int>(nodes.size()); }
    int triangle_count() const { return static_cast<int>(triangles.size()); }
    int quad_count() const { return static_cast<int>(quads.size()); }
    int element_count() const { return triangle_count() + quad_count(); }
    bool is_quad(int element) const { return element >= triangle_count(); }

    std::span<const int> element_nodes(int element) const {
        if (is_quad(element)) return quads[element - triangle_count()];
        return triangles[element];
    }

    double element_area(int element) const;
    Vec2 element_centroid(int element) const;
};

/// One scalar value per mesh node.
struct NodalField {
    std::string name;
    std::vector<double> values;

    NodalField() = default;
    NodalField(std::string name_, std::vector<double> values_)
        : name(std::move(name_)), values(std::move(values_)) {}

    int size() const { return static_cast<int>(values.size()); }
    double operator[](int i) const { return values[i]; }
    double& operator[](int i) { return values[i]; }
};

/// Nodal spacing values together with the clamp bounds that produced them.
struct SpacingField {
    std::vector<double> values;
    double delta_min = 0.0;
    double delta_max = 0.0;

    int size() const { return static_cast<int>(values.size()); }
    double operator[](int i) const { return values[i]; }
    double& operator[](int i) { return values[i]; }
};

struct GasModel {
    double gamma = 1.4;
};

struct ElementLocation {
    int element = -1;
    /// Barycentric (l0,l1,l2) for triangles; (s,t,0) reference coordinates
    /// for quads.
    std::array<double, 3> coords = {0.0, 0.0, 0.0};
    bool quad = false;
};

/// Throws IoError describing the first violated invariant, if any.
void validate_mesh(const HybridMesh& mesh);

/// Orients every boundary edge as traversed by its unique owning element
/// (domain on the left) and sorts edges by (tag, a, b).
void canonicalize_boundary(HybridMesh& mesh);

/// Rebuilds wall_columns by climbing the quad layers from the wall edges.
/// Throws IoError if the quads do not form a manifold inflation layer.
std::vector<std::vector<int>> reconstruct_wall_columns(const HybridMesh& mesh);

HybridMesh load_mesh(const std::string& path);
void save_mesh(const HybridMesh& mesh, const std::string& path);

NodalField load_field(const std::string& path);
void save_field(const NodalField& field, const std::string& path);

/// For each node, the ids of the elements containing it.
std::vector<std::vector<int>> node_patches(const HybridMesh& mesh);

/// (shortest, longest) element edge length over the whole mesh.
std::pair<double, double> mesh_spacing_bounds(const HybridMesh& mesh);

/// Point-location accelerator over a uniform bin grid. Ties between elements
/// containing the same point resolve to the lowest element id.
class PointLocator {
public:
    explicit PointLocator(const HybridMesh& mesh);

    std::optional<ElementLocation> locate(const Vec2& p) const;

    /// Every element containing the point (several on shared edges/vertices),
    /// in ascending element id.
    std::vector<ElementLocation> locate_all(const Vec2& p) const;

    /// Maps reference coordinates of an element back to physical space.
    static Vec2 map_to_physical(const HybridMesh& mesh, const ElementLocation& loc);

private:
    const HybridMesh& mesh_;
    double bin_size_ = 1.0;
    Vec2 origin_;
    int nx_ = 1, ny_ = 1;
    std::vector<std::vector<int>> bins_;

    int bin_index(int ix, int iy) const { return iy * nx_ + ix; }
};

/// One-shot convenience wrapper around PointLocator.
std::optional<ElementLocation> locate_point(const HybridMesh& mesh, const Vec2& p);

/// Sum of element areas computed for the whole mesh.
double total_element_area(const HybridMesh& mesh);

/// Area of the region enclosed by the boundary edges (holes subtracted),
/// using the orientation established by validate_mesh.
double boundary_polygon_area(const HybridMesh& mesh);

}  // namespace meshsizer
