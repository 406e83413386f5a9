#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace meshsizer {

struct DesignDimension {
    std::string label;
    double lower = 0.0;
    double upper = 1.0;
};

struct DesignSpace {
    std::vector<DesignDimension> dims;
    int dim_count() const { return static_cast<int>(dims.size()); }
};

/// Per-dimension digit permutations (size = prime base of that dimension,
/// always fixing digit 0).
using DigitPermutations = std::vector<std::vector<int>>;

/// Plain Halton point for a 1-based index; dimension d uses the d-th prime
/// as radical-inverse base. dims <= 25.
std::vector<double> halton_point(std::int64_t index, int dims);

/// Identity permutations: scrambled sequence degenerates to plain Halton.
DigitPermutations identity_scramble(int dims);

/// Seeded random digit permutations fixing 0, one per base.
DigitPermutations build_scramble(std::uint64_t seed, int dims);

std::vector<double> scrambled_halton_point(std::int64_t index, int dims,
                                           const DigitPermutations& perms);

struct DesignSample {
    std::vector<std::vector<double>> train;
    std::vector<std::vector<double>> validation;
    std::vector<std::vector<double>> test;
};

/// Quasi-random samples mapped to the design space. The three splits draw
/// disjoint contiguous index blocks (train first); validation and test map
/// onto ranges shrunk by 3% and 6% per end respectively, so they never
/// extrapolate relative to the training range.
DesignSample sample_design(const DesignSpace& space, int n_train, int n_validation, int n_test,
                           bool scrambled, std::uint64_t seed);

}  // namespace meshsizer
