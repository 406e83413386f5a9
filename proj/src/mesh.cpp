#include "meshsizer/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "meshsizer/errors.hpp"

namespace meshsizer {

namespace {

std::pair<int, int> undirected(int a, int b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

struct EdgeHash {
    size_t operator()(const std::pair<int, int>& e) const {
        return std::hash<long long>()((static_cast<long long>(e.first) << 32) ^ e.second);
    }
};

using EdgeMap = std::unordered_map<std::pair<int, int>, std::vector<int>, EdgeHash>;

EdgeMap build_edge_map(const HybridMesh& mesh) {
    EdgeMap edges;
    for (int e = 0; e < mesh.element_count(); ++e) {
        auto nodes = mesh.element_nodes(e);
        const int n = static_cast<int>(nodes.size());
        for (int k = 0; k < n; ++k) {
            edges[undirected(nodes[k], nodes[(k + 1) % n])].push_back(e);
        }
    }
    return edges;
}

double polygon_area(std::span<const Vec2> pts) {
    double twice = 0.0;
    const int n = static_cast<int>(pts.size());
    for (int k = 0; k < n; ++k) twice += pts[k].cross(pts[(k + 1) % n]);
    return 0.5 * twice;
}

}  // namespace

double HybridMesh::element_area(int element) const {
    auto ids = element_nodes(element);
    std::array<Vec2, 4> pts;
    for (size_t k = 0; k < ids.size(); ++k) pts[k] = nodes[ids[k]];
    return polygon_area(std::span<const Vec2>(pts.data(), ids.size()));
}

Vec2 HybridMesh::element_centroid(int element) const {
    auto ids = element_nodes(element);
    Vec2 c;
    for (int id : ids) c += nodes[id];
    return c / static_cast<double>(ids.size());
}

void canonicalize_boundary(HybridMesh& mesh) {
    std::unordered_map<std::pair<int, int>, std::pair<int, int>, EdgeHash> directed;
    std::unordered_map<std::pair<int, int>, int, EdgeHash> owners;
    for (int e = 0; e < mesh.element_count(); ++e) {
        auto ids = mesh.element_nodes(e);
        const int n = static_cast<int>(ids.size());
        for (int k = 0; k < n; ++k) {
            const int a = ids[k], b = ids[(k + 1) % n];
            owners[undirected(a, b)] += 1;
            directed[undirected(a, b)] = {a, b};
        }
    }
    for (auto& be : mesh.boundary) {
        auto it = owners.find(undirected(be.a, be.b));
        if (it == owners.end())
            throw IoError("boundary edge (" + std::to_string(be.a) + "," + std::to_string(be.b) +
                          ") is not an element edge");
        if (it->second != 1)
            throw IoError("boundary edge (" + std::to_string(be.a) + "," + std::to_string(be.b) +
                          ") is interior to the mesh");
        const auto [a, b] = directed.at(undirected(be.a, be.b));
        be.a = a;
        be.b = b;
    }
    std::sort(mesh.boundary.begin(), mesh.boundary.end(), [](const auto& l, const auto& r) {
        return std::tie(l.tag, l.a, l.b) < std::tie(r.tag, r.a, r.b);
    });
}

void validate_mesh(const HybridMesh& mesh) {
    const int nn = mesh.node_count();
    for (const auto& p : mesh.nodes) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw IoError("mesh has a non-finite node coordinate");
    }
    for (int e = 0; e < mesh.element_count(); ++e) {
        for (int id : mesh.element_nodes(e)) {
            if (id < 0 || id >= nn)
                throw IoError("dangling node index " + std::to_string(id) + " in element " +
                              std::to_string(e));
        }
        if (mesh.element_area(e) <= 0.0)
            throw IoError("inverted element " + std::to_string(e));
    }
    for (const auto& be : mesh.boundary) {
        if (be.a < 0 || be.a >= nn || be.b < 0 || be.b >= nn)
            throw IoError("dangling node index in boundary edge");
    }

    if (mesh.quad_count() == 0) {
        if (!mesh.wall_columns.empty())
            throw IoError("wall_columns present but mesh has no quadrilaterals");
        return;
    }

    // Inflation-layer structure checks.
    const EdgeMap edges = build_edge_map(mesh);
    std::unordered_set<int> wall_nodes;
    for (const auto& be : mesh.boundary)
        if (be.tag == BoundaryTag::wall) {
            wall_nodes.insert(be.a);
            wall_nodes.insert(be.b);
        }

    std::vector<std::pair<int, int>> column_pos(nn, {-1, -1});  // (column, index)
    for (size_t c = 0; c < mesh.wall_columns.size(); ++c) {
        const auto& col = mesh.wall_columns[c];
        if (col.size() < 2) throw IoError("wall column " + std::to_string(c) + " has fewer than 2 nodes");
        if (!wall_nodes.count(col[0]))
            throw IoError("wall column " + std::to_string(c) + " does not start on a wall boundary edge");
        for (size_t j = 0; j + 1 < col.size(); ++j) {
            auto it = edges.find(undirected(col[j], col[j + 1]));
            bool on_quad = false;
            if (it != edges.end())
                for (int e : it->second) on_quad |= mesh.is_quad(e);
            if (!on_quad)
                throw IoError("consecutive nodes of wall column " + std::to_string(c) +
                              " do not share a quad edge");
        }
        for (size_t j = 0; j < col.size(); ++j) {
            if (column_pos[col[j]].first >= 0)
                throw IoError("node " + std::to_string(col[j]) + " appears in two wall columns");
            column_pos[col[j]] = {static_cast<int>(c), static_cast<int>(j)};
        }
    }

    for (int q = 0; q < mesh.quad_count(); ++q) {
        const int e = mesh.triangle_count() + q;
        std::set<int> cols;
        std::set<int> levels;
        for (int id : mesh.element_nodes(e)) {
            auto [c, j] = column_pos[id];
            if (c < 0)
                throw IoError("quad " + std::to_string(q) + " node " + std::to_string(id) +
                              " belongs to no wall column");
            cols.insert(c);
            levels.insert(j);
        }
        if (cols.size() != 2 || levels.size() != 2 ||
            *levels.rbegin() != *levels.begin() + 1)
            throw IoError("quad " + std::to_string(q) +
                          " does not span one pair of adjacent wall columns");
    }
}

std::vector<std::vector<int>> reconstruct_wall_columns(const HybridMesh& mesh) {
    if (mesh.quad_count() == 0) return {};

    EdgeMap quad_edges;
    for (int q = 0; q < mesh.quad_count(); ++q) {
        const auto& quad = mesh.quads[q];
        for (int k = 0; k < 4; ++k) quad_edges[undirected(quad[k], quad[(k + 1) % 4])].push_back(q);
    }

    std::vector<std::vector<int>> columns;
    std::vector<int> column_of(mesh.node_count(), -1);
    std::vector<char> used(mesh.quad_count(), 0);
    std::vector<std::pair<int, int>> front;  // directed bottom edges

    auto start_column = [&](int node) {
        if (column_of[node] < 0) {
            column_of[node] = static_cast<int>(columns.size());
            columns.push_back({node});
        }
    };

    for (const auto& be : mesh.boundary) {
        if (be.tag != BoundaryTag::wall) continue;
        auto it = quad_edges.find(undirected(be.a, be.b));
        if (it == quad_edges.end()) continue;
        if (it->second.size() != 1)
            throw IoError("non-manifold inflation layer: wall edge shared by several quads");
        start_column(be.a);
        start_column(be.b);
        front.emplace_back(be.a, be.b);
    }
    if (front.empty()) throw IoError("mesh has quads but no wall edge touches a quad");

    auto extend = [&](int tip, int next) {
        const int c = column_of[tip];
        if (c < 0 || columns[c].back() != tip) {
            if (column_of[next] >= 0) return;  // already appended from the twin quad
            throw IoError("non-manifold inflation layer near node " + std::to_string(next));
        }
        if (column_of[next] >= 0)
            throw IoError("non-manifold inflation layer: node " + std::to_string(next) +
                          " reached from two columns");
        columns[c].push_back(next);
        column_of[next] = c;
    };

    for (size_t head = 0; head < front.size(); ++head) {
        const auto [a, b] = front[head];
        auto it = quad_edges.find(undirected(a, b));
        if (it == quad_edges.end()) continue;
        int q = -1;
        for (int cand : it->second)
            if (!used[cand]) {
                if (q >= 0) throw IoError("non-manifold inflation layer at quad " + std::to_string(cand));
                q = cand;
            }
        if (q < 0) continue;  // top of the strip
        used[q] = 1;

        const auto& quad = mesh.quads[q];
        int k = -1;
        bool flipped = false;
        for (int i = 0; i < 4; ++i) {
            const int u = quad[i], v = quad[(i + 1) % 4];
            if (u == a && v == b) { k = i; break; }
            if (u == b && v == a) { k = i; flipped = true; break; }
        }
        if (k < 0) throw IoError("internal error: quad does not contain its bottom edge");
        const int above_second = quad[(k + 2) % 4];  // above quad[k+1]
        const int above_first = quad[(k + 3) % 4];   // above quad[k]
        const int u = quad[k], v = quad[(k + 1) % 4];
        (void)flipped;
        extend(u, above_first);
        extend(v, above_second);
        front.emplace_back(above_first, above_second);
    }

    for (int q = 0; q < mesh.quad_count(); ++q)
        if (!used[q])
            throw IoError("quad " + std::to_string(q) + " is not part of any wall column strip");

    std::sort(columns.begin(), columns.end(),
              [](const auto& l, const auto& r) { return l.front() < r.front(); });
    return columns;
}

std::vector<std::vector<int>> node_patches(const HybridMesh& mesh) {
    std::vector<std::vector<int>> patches(mesh.node_count());
    for (int e = 0; e < mesh.element_count(); ++e)
        for (int id : mesh.element_nodes(e)) patches[id].push_back(e);
    return patches;
}

std::pair<double, double> mesh_spacing_bounds(const HybridMesh& mesh) {
    if (mesh.element_count() == 0) throw IoError("mesh has no elements");
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int e = 0; e < mesh.element_count(); ++e) {
        auto ids = mesh.element_nodes(e);
        const int n = static_cast<int>(ids.size());
        for (int k = 0; k < n; ++k) {
            const double len = distance(mesh.nodes[ids[k]], mesh.nodes[ids[(k + 1) % n]]);
            lo = std::min(lo, len);
            hi = std::max(hi, len);
        }
    }
    return {lo, hi};
}

double total_element_area(const HybridMesh& mesh) {
    double area = 0.0;
    for (int e = 0; e < mesh.element_count(); ++e) area += mesh.element_area(e);
    return area;
}

double boundary_polygon_area(const HybridMesh& mesh) {
    double twice = 0.0;
    for (const auto& be : mesh.boundary) twice += mesh.nodes[be.a].cross(mesh.nodes[be.b]);
    return 0.5 * twice;
}

// ---------------------------------------------------------------------------
// Point location
// ---------------------------------------------------------------------------

namespace {

constexpr double kInsideTol = 1e-10;

bool triangle_coords(const HybridMesh& mesh, int e, const Vec2& p, std::array<double, 3>& bary) {
    const auto& t = mesh.triangles[e];
    const Vec2 a = mesh.nodes[t[0]], b = mesh.nodes[t[1]], c = mesh.nodes[t[2]];
    const double area2 = signed_area2(a, b, c);
    bary[0] = signed_area2(p, b, c) / area2;
    bary[1] = signed_area2(a, p, c) / area2;
    bary[2] = 1.0 - bary[0] - bary[1];
    return bary[0] >= -kInsideTol && bary[1] >= -kInsideTol && bary[2] >= -kInsideTol;
}

Vec2 bilinear_map(const std::array<Vec2, 4>& q, double s, double t) {
    return (1 - s) * (1 - t) * q[0] + s * (1 - t) * q[1] + s * t * q[2] + (1 - s) * t * q[3];
}

bool quad_coords(const HybridMesh& mesh, int e, const Vec2& p, std::array<double, 3>& st) {
    const auto& ids = mesh.quads[e - mesh.triangle_count()];
    std::array<Vec2, 4> q;
    for (int k = 0; k < 4; ++k) q[k] = mesh.nodes[ids[k]];

    // Newton inversion of the bilinear map from (0.5, 0.5).
    double s = 0.5, t = 0.5;
    for (int it = 0; it < 50; ++it) {
        const Vec2 r = bilinear_map(q, s, t) - p;
        const Vec2 ds = (1 - t) * (q[1] - q[0]) + t * (q[2] - q[3]);
        const Vec2 dt = (1 - s) * (q[3] - q[0]) + s * (q[2] - q[1]);
        const double det = ds.cross(dt);
        if (det == 0.0) return false;
        const double inc_s = (r.cross(dt)) / det;
        const double inc_t = (ds.cross(r)) / det;
        s -= inc_s;
        t -= inc_t;
        if (std::abs(inc_s) + std::abs(inc_t) < 1e-15) break;
    }
    st = {s, t, 0.0};
    if (s < -kInsideTol || s > 1 + kInsideTol || t < -kInsideTol || t > 1 + kInsideTol) return false;
    return (bilinear_map(q, s, t) - p).norm() <= 1e-9 * (1.0 + p.norm());
}

}  // namespace

PointLocator::PointLocator(const HybridMesh& mesh) : mesh_(mesh) {
    Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Vec2 hi{-lo.x, -lo.y};
    for (const auto& p : mesh.nodes) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
    }
    origin_ = lo;
    const auto [dmin, dmax] = mesh_spacing_bounds(mesh);
    (void)dmin;
    const double ext = std::max(hi.x - lo.x, hi.y - lo.y);
    bin_size_ = std::max(dmax, ext / 1024.0);
    if (bin_size_ <= 0.0) bin_size_ = 1.0;
    nx_ = std::max(1, static_cast<int>(std::ceil((hi.x - lo.x) / bin_size_)) + 1);
    ny_ = std::max(1, static_cast<int>(std::ceil((hi.y - lo.y) / bin_size_)) + 1);
    bins_.resize(static_cast<size_t>(nx_) * ny_);

    for (int e = 0; e < mesh.element_count(); ++e) {
        Vec2 elo = mesh.nodes[mesh.element_nodes(e)[0]], ehi = elo;
        for (int id : mesh.element_nodes(e)) {
            elo.x = std::min(elo.x, mesh.nodes[id].x);
            elo.y = std::min(elo.y, mesh.nodes[id].y);
            ehi.x = std::max(ehi.x, mesh.nodes[id].x);
            ehi.y = std::max(ehi.y, mesh.nodes[id].y);
        }
        const int ix0 = std::max(0, static_cast<int>((elo.x - origin_.x) / bin_size_));
        const int iy0 = std::max(0, static_cast<int>((elo.y - origin_.y) / bin_size_));
        const int ix1 = std::min(nx_ - 1, static_cast<int>((ehi.x - origin_.x) / bin_size_));
        const int iy1 = std::min(ny_ - 1, static_cast<int>((ehi.y - origin_.y) / bin_size_));
        for (int iy = iy0; iy <= iy1; ++iy)
            for (int ix = ix0; ix <= ix1; ++ix) bins_[bin_index(ix, iy)].push_back(e);
    }
}

std::optional<ElementLocation> PointLocator::locate(const Vec2& p) const {
    const int ix = std::clamp(static_cast<int>((p.x - origin_.x) / bin_size_), 0, nx_ - 1);
    const int iy = std::clamp(static_cast<int>((p.y - origin_.y) / bin_size_), 0, ny_ - 1);
    // Bin contents are in ascending element id, so the first hit is the
    // lowest-id containing element.
    for (int e : bins_[bin_index(ix, iy)]) {
        ElementLocation loc;
        loc.element = e;
        loc.quad = mesh_.is_quad(e);
        const bool inside = loc.quad ? quad_coords(mesh_, e, p, loc.coords)
                                     : triangle_coords(mesh_, e, p, loc.coords);
        if (inside) return loc;
    }
    return std::nullopt;
}

std::vector<ElementLocation> PointLocator::locate_all(const Vec2& p) const {
    const int ix = std::clamp(static_cast<int>((p.x - origin_.x) / bin_size_), 0, nx_ - 1);
    const int iy = std::clamp(static_cast<int>((p.y - origin_.y) / bin_size_), 0, ny_ - 1);
    std::vector<ElementLocation> hits;
    for (int e : bins_[bin_index(ix, iy)]) {
        ElementLocation loc;
        loc.element = e;
        loc.quad = mesh_.is_quad(e);
        const bool inside = loc.quad ? quad_coords(mesh_, e, p, loc.coords)
                                     : triangle_coords(mesh_, e, p, loc.coords);
        if (inside) hits.push_back(loc);
    }
    return hits;
}

Vec2 PointLocator::map_to_physical(const HybridMesh& mesh, const ElementLocation& loc) {
    auto ids = mesh.element_nodes(loc.element);
    if (loc.quad) {
        std::array<Vec2, 4> q;
        for (int k = 0; k < 4; ++k) q[k] = mesh.nodes[ids[k]];
        return bilinear_map(q, loc.coords[0], loc.coords[1]);
    }
    return loc.coords[0] * mesh.nodes[ids[0]] + loc.coords[1] * mesh.nodes[ids[1]] +
           loc.coords[2] * mesh.nodes[ids[2]];
}

std::optional<ElementLocation> locate_point(const HybridMesh& mesh, const Vec2& p) {
    return PointLocator(mesh).locate(p);
}

}  // namespace meshsizer
