#include "meshsizer/evaluation.hpp"

#include <algorithm>
#include <fstream>

#include "meshsizer/errors.hpp"

namespace meshsizer {

namespace {

void check_same_topology(const BackgroundMesh& a, const BackgroundMesh& b) {
    if (a.mesh.node_count() != b.mesh.node_count() ||
        a.mesh.triangles != b.mesh.triangles || a.mesh.quads != b.mesh.quads)
        throw UsageError("background meshes differ in topology");
    if (a.spacing.size() != a.mesh.node_count() || b.spacing.size() != b.mesh.node_count())
        throw UsageError("spacing field does not match its background mesh");
}

/// Interpolated spacing at the centroid of element e: the average of the
/// element's nodal values for both triangles and bilinear quads.
double centroid_spacing(const BackgroundMesh& bg, int e) {
    auto ids = bg.mesh.element_nodes(e);
    double sum = 0.0;
    for (int id : ids) sum += bg.spacing[id];
    return sum / static_cast<double>(ids.size());
}

}  // namespace

RatioHistogram::RatioHistogram() {
    edges = {1.0 / 2.0, 1.0 / 1.5, 1.0 / 1.25, 1.0 / 1.15, 1.0 / 1.05,
             1.05,      1.15,      1.25,       1.5,        2.0};
    counts.assign(edges.size() + 1, 0);
}

void RatioHistogram::add(double ratio) {
    const size_t bin = std::upper_bound(edges.begin(), edges.end(), ratio) - edges.begin();
    counts[bin] += 1;
    total += 1;
    if (ratio >= 1.0 / 1.15 && ratio <= 1.15) within_tight += 1;
    if (ratio >= 1.0 / 1.5 && ratio <= 1.5) within_loose += 1;
}

void RatioHistogram::merge(const RatioHistogram& other) {
    for (size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
    total += other.total;
    within_tight += other.within_tight;
    within_loose += other.within_loose;
}

RatioHistogram spacing_ratio_histogram(const BackgroundMesh& target,
                                       const BackgroundMesh& predicted) {
    check_same_topology(target, predicted);
    RatioHistogram h;
    for (int e = 0; e < target.mesh.element_count(); ++e)
        h.add(centroid_spacing(predicted, e) / centroid_spacing(target, e));
    return h;
}

NodalField spacing_error_map(const BackgroundMesh& target, const BackgroundMesh& predicted) {
    check_same_topology(target, predicted);
    NodalField err("spacing_error_percent", std::vector<double>(target.mesh.node_count()));
    for (int i = 0; i < target.mesh.node_count(); ++i) {
        if (!(target.spacing[i] > 0.0))
            throw NumericError("zero target spacing at node " + std::to_string(i));
        err[i] = 100.0 * std::abs(predicted.spacing[i] - target.spacing[i]) / target.spacing[i];
    }
    return err;
}

void write_histogram_csv(const RatioHistogram& histogram, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write file: " + path);
    out << "bin_low,bin_high,count\n";
    for (size_t bin = 0; bin < histogram.counts.size(); ++bin) {
        if (bin == 0)
            out << "0";
        else
            out << histogram.edges[bin - 1];
        out << ",";
        if (bin == histogram.counts.size() - 1)
            out << "inf";
        else
            out << histogram.edges[bin];
        out << "," << histogram.counts[bin] << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace meshsizer
