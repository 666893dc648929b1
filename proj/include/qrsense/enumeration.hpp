#pragma once

#include <cstdint>
#include <vector>

#include "qrsense/placement.hpp"
#include "qrsense/pod.hpp"

namespace qrsense {

struct EnumerationOptions {
    std::uint64_t cap = 10'000'000;  // refuse enumerations larger than this
    int threads = 1;                 // contiguous leading-index partitions
};

// Exhaustive scan of all feasible r-subsets in lexicographic order. The
// objective list keeps -infinity sentinels for singular placements; partition
// count never changes any output.
struct EnumerationResult {
    std::vector<double> objective_values;
    Placement best_placement;
    double best_value = 0.0;
    std::uint64_t total_count = 0;
    std::uint64_t singular_count = 0;
};

EnumerationResult enumerate_placements(const PodBasis& basis, const ConstraintSpec& constraint,
                                       const EnumerationOptions& options = {});

// Closed-form feasible-subset count; the min-distance kind has no closed form
// and reports the unconstrained C(n, r) upper bound (used for cap checks).
std::uint64_t feasible_count(int n, int r, const ConstraintSpec& constraint);

// C(n, k), saturating at 2^64-1 instead of overflowing.
std::uint64_t binomial(int n, int k);

// Share of enumerated objectives strictly below `value`, in [0, 100].
// -infinity sentinels count as below everything finite.
double percentile_rank(const EnumerationResult& result, double value);

struct Histogram {
    std::vector<double> edges;          // bins + 1 uniform edges over [min, max]
    std::vector<std::uint64_t> counts;  // sums to the number of finite values
    std::uint64_t excluded = 0;         // non-finite (singular-placement) values
};

Histogram histogram(const std::vector<double>& values, int bins);

}  // namespace qrsense
