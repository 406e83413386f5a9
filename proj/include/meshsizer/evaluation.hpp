#pragma once

#include <string>
#include <vector>

#include "meshsizer/transfer.hpp"

namespace meshsizer {

/// Histogram of predicted/target spacing ratios at element centroids, on a
/// ratio scale symmetric around 1, plus the fractions inside the two
/// headline accuracy bands.
struct RatioHistogram {
    std::vector<double> edges;   ///< interior bin edges, ascending
    std::vector<long> counts;    ///< edges.size() + 1 bins including open tails
    long total = 0;
    long within_tight = 0;  ///< ratio in [1/1.15, 1.15]
    long within_loose = 0;  ///< ratio in [1/1.5, 1.5]

    RatioHistogram();
    void add(double ratio);
    void merge(const RatioHistogram& other);
    double fraction_tight() const { return total ? static_cast<double>(within_tight) / total : 0.0; }
    double fraction_loose() const { return total ? static_cast<double>(within_loose) / total : 0.0; }
};

/// Requires identical background topology.
RatioHistogram spacing_ratio_histogram(const BackgroundMesh& target,
                                       const BackgroundMesh& predicted);

/// Per-node percentage error 100 |pred - target| / target.
NodalField spacing_error_map(const BackgroundMesh& target, const BackgroundMesh& predicted);

void write_histogram_csv(const RatioHistogram& histogram, const std::string& path);

}  // namespace meshsizer
