#include "meshsizer/sampling.hpp"

#include <numeric>
#include <random>

#include "meshsizer/errors.hpp"

namespace meshsizer {

namespace {

constexpr int kPrimes[25] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                             43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

void check_dims(int dims) {
    if (dims < 1 || dims > 25)
        throw UsageError("halton supports 1..25 dimensions, got " + std::to_string(dims));
}

double radical_inverse(std::int64_t index, int base, const std::vector<int>* perm) {
    double result = 0.0;
    double factor = 1.0 / base;
    while (index > 0) {
        int digit = static_cast<int>(index % base);
        if (perm) digit = (*perm)[digit];
        result += digit * factor;
        factor /= base;
        index /= base;
    }
    return result;
}

}  // namespace

std::vector<double> halton_point(std::int64_t index, int dims) {
    check_dims(dims);
    if (index < 1) throw UsageError("halton index must be >= 1");
    std::vector<double> p(dims);
    for (int d = 0; d < dims; ++d) p[d] = radical_inverse(index, kPrimes[d], nullptr);
    return p;
}

DigitPermutations identity_scramble(int dims) {
    check_dims(dims);
    DigitPermutations perms(dims);
    for (int d = 0; d < dims; ++d) {
        perms[d].resize(kPrimes[d]);
        std::iota(perms[d].begin(), perms[d].end(), 0);
    }
    return perms;
}

DigitPermutations build_scramble(std::uint64_t seed, int dims) {
    DigitPermutations perms = identity_scramble(dims);
    for (int d = 0; d < dims; ++d) {
        std::mt19937_64 rng(seed * 1000003ull + static_cast<std::uint64_t>(d));
        auto& p = perms[d];
        // Fisher-Yates over digits 1..base-1; digit 0 stays fixed so the
        // radical-inverse tail terminates.
        for (size_t i = p.size() - 1; i >= 2; --i) {
            const size_t j = 1 + static_cast<size_t>(rng() % i);
            std::swap(p[i], p[j]);
        }
    }
    return perms;
}

std::vector<double> scrambled_halton_point(std::int64_t index, int dims,
                                           const DigitPermutations& perms) {
    check_dims(dims);
    if (index < 1) throw UsageError("halton index must be >= 1");
    if (static_cast<int>(perms.size()) < dims)
        throw UsageError("scramble permutations cover fewer dimensions than requested");
    std::vector<double> p(dims);
    for (int d = 0; d < dims; ++d) p[d] = radical_inverse(index, kPrimes[d], &perms[d]);
    return p;
}

DesignSample sample_design(const DesignSpace& space, int n_train, int n_validation, int n_test,
                           bool scrambled, std::uint64_t seed) {
    if (n_train < 0 || n_validation < 0 || n_test < 0)
        throw UsageError("split counts must be non-negative");
    const int dims = space.dim_count();
    check_dims(dims);

    const DigitPermutations perms = scrambled ? build_scramble(seed, dims) : DigitPermutations{};

    auto emit = [&](std::int64_t first_index, int count, double shrink) {
        std::vector<std::vector<double>> rows;
        rows.reserve(count);
        for (int k = 0; k < count; ++k) {
            const std::int64_t idx = first_index + k;
            std::vector<double> unit = scrambled ? scrambled_halton_point(idx, dims, perms)
                                                 : halton_point(idx, dims);
            for (int d = 0; d < dims; ++d) {
                const auto& dim = space.dims[d];
                const double span = dim.upper - dim.lower;
                const double lo = dim.lower + shrink * span;
                unit[d] = lo + unit[d] * span * (1.0 - 2.0 * shrink);
            }
            rows.push_back(std::move(unit));
        }
        return rows;
    };

    DesignSample s;
    s.train = emit(1, n_train, 0.0);
    s.validation = emit(1 + n_train, n_validation, 0.03);
    s.test = emit(1 + n_train + n_validation, n_test, 0.06);
    return s;
}

}  // namespace meshsizer
