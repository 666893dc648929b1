#include "qrsense/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include <Eigen/LU>

#include "qrsense/error.hpp"

namespace qrsense {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a == kSaturated || b == kSaturated) return kSaturated;
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    return p > kSaturated ? kSaturated : static_cast<std::uint64_t>(p);
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
    return a > kSaturated - b ? kSaturated : a + b;
}

struct FeasibilityFilter {
    const ConstraintSpec* constraint;
    std::vector<char> in_region;

    explicit FeasibilityFilter(const ConstraintSpec& c, int n) : constraint(&c), in_region(n, 0) {
        for (int i : c.constrained_indices) in_region[i] = 1;
    }

    bool ok(const std::vector<int>& subset) const {
        switch (constraint->kind) {
            case ConstraintKind::Unconstrained:
                return true;
            case ConstraintKind::RegionMax:
            case ConstraintKind::RegionExact: {
                int count = 0;
                for (int g : subset) count += in_region[g];
                return constraint->kind == ConstraintKind::RegionMax ? count <= constraint->budget
                                                                     : count == constraint->budget;
            }
            case ConstraintKind::Predetermined: {
                int count = 0;
                for (int g : subset) count += in_region[g];
                return count == constraint->budget;
            }
            case ConstraintKind::MinDistance: {
                const GridGeometry& g = *constraint->geometry;
                for (std::size_t a = 0; a < subset.size(); ++a) {
                    for (std::size_t b = a + 1; b < subset.size(); ++b) {
                        if (g.distance(subset[a], subset[b]) <= constraint->min_distance)
                            return false;
                    }
                }
                return true;
            }
        }
        return false;
    }
};

struct Partition {
    std::vector<double> values;
    std::vector<int> best_subset;
    double best_value = -kInf;
    bool has_best = false;
    std::uint64_t singular = 0;
};

// Scan all feasible subsets whose leading index lies in [c0_lo, c0_hi).
// Identical arithmetic to log_det_of_selection's square branch, so the values
// match the public objective bit for bit.
void scan_range(const Matrix& modes, const FeasibilityFilter& filter, int n, int r, int c0_lo,
                int c0_hi, Partition& out) {
    Matrix m(r, r);
    Eigen::PartialPivLU<Matrix> lu(r);
    std::vector<int> subset(static_cast<std::size_t>(r));
    for (int c0 = c0_lo; c0 < c0_hi; ++c0) {
        if (c0 + r > n) break;
        for (int i = 0; i < r; ++i) subset[i] = c0 + i;
        while (true) {
            if (filter.ok(subset)) {
                double value;
                for (int i = 0; i < r; ++i) m.row(i) = modes.row(subset[i]);
                lu.compute(m);
                value = 0.0;
                for (int i = 0; i < r; ++i) {
                    const double d = std::abs(lu.matrixLU()(i, i));
                    if (d == 0.0 || !std::isfinite(d)) {
                        value = -kInf;
                        break;
                    }
                    value += 2.0 * std::log(d);
                }
                out.values.push_back(value);
                if (std::isinf(value)) ++out.singular;
                if (!out.has_best || value > out.best_value) {
                    out.best_value = value;
                    out.best_subset = subset;
                    out.has_best = true;
                }
            }
            // advance within fixed leading index
            bool advanced = false;
            for (int i = r - 1; i >= 1; --i) {
                if (subset[i] < n - r + i) {
                    ++subset[i];
                    for (int j = i + 1; j < r; ++j) subset[j] = subset[j - 1] + 1;
                    advanced = true;
                    break;
                }
            }
            if (!advanced) break;
        }
    }
}

}  // namespace

std::uint64_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (int i = 1; i <= k; ++i) {
        // result * (n - k + i) / i is integral at every step
        const unsigned __int128 num =
            static_cast<unsigned __int128>(result) * static_cast<std::uint64_t>(n - k + i);
        const unsigned __int128 q = num / static_cast<std::uint64_t>(i);
        if (q > kSaturated) return kSaturated;
        result = static_cast<std::uint64_t>(q);
    }
    return result;
}

std::uint64_t feasible_count(int n, int r, const ConstraintSpec& constraint) {
    const int nc = static_cast<int>(constraint.constrained_indices.size());
    const int s = constraint.budget;
    switch (constraint.kind) {
        case ConstraintKind::Unconstrained:
            return binomial(n, r);
        case ConstraintKind::RegionExact:
            return saturating_mul(binomial(n - nc, r - s), binomial(nc, s));
        case ConstraintKind::RegionMax: {
            std::uint64_t total = 0;
            for (int j = 0; j <= s; ++j) {
                total = saturating_add(total,
                                       saturating_mul(binomial(n - nc, r - j), binomial(nc, j)));
            }
            return total;
        }
        case ConstraintKind::Predetermined:
            return binomial(n - s, r - s);
        case ConstraintKind::MinDistance:
            return binomial(n, r);  // upper bound; no closed form
    }
    return 0;
}

EnumerationResult enumerate_placements(const PodBasis& basis, const ConstraintSpec& constraint,
                                       const EnumerationOptions& options) {
    const int n = basis.state_dim();
    const int r = basis.rank();
    require(r >= 1 && r <= n, "domain", "rank must lie in [1, state dimension]");
    constraint.validate(n);

    const std::uint64_t expected = feasible_count(n, r, constraint);
    if (expected > options.cap) {
        fail("cap-exceeded",
             "enumeration of " + std::to_string(expected) + " placements exceeds the cap of " +
                 std::to_string(options.cap) +
                 "; brute-force validation is only tractable for small state dimensions");
    }

    const FeasibilityFilter filter(constraint, n);
    const int c0_max = n - r;  // last admissible leading index

    int threads = std::max(1, options.threads);
    threads = std::min(threads, c0_max + 1);

    // Balance contiguous leading-index ranges by their unconstrained subtree sizes.
    std::vector<Partition> parts(static_cast<std::size_t>(threads));
    std::vector<int> range_start;
    {
        std::vector<double> weight(static_cast<std::size_t>(c0_max + 1));
        double total = 0.0;
        for (int c0 = 0; c0 <= c0_max; ++c0) {
            weight[c0] = static_cast<double>(binomial(n - 1 - c0, r - 1));
            total += weight[c0];
        }
        range_start.push_back(0);
        double acc = 0.0;
        int next_cut = 1;
        for (int c0 = 0; c0 <= c0_max && next_cut < threads; ++c0) {
            acc += weight[c0];
            if (acc >= total * next_cut / threads) {
                range_start.push_back(c0 + 1);
                ++next_cut;
            }
        }
        while (static_cast<int>(range_start.size()) < threads) range_start.push_back(c0_max + 1);
        range_start.push_back(c0_max + 1);
    }

    if (threads == 1) {
        scan_range(basis.modes, filter, n, r, 0, c0_max + 1, parts[0]);
    } else {
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) {
            workers.emplace_back([&, t] {
                scan_range(basis.modes, filter, n, r, range_start[t], range_start[t + 1],
                           parts[static_cast<std::size_t>(t)]);
            });
        }
        for (auto& w : workers) w.join();
    }

    EnumerationResult result;
    std::size_t total = 0;
    for (const auto& p : parts) total += p.values.size();
    result.objective_values.reserve(total);
    bool has_best = false;
    for (const auto& p : parts) {
        result.objective_values.insert(result.objective_values.end(), p.values.begin(),
                                       p.values.end());
        result.singular_count += p.singular;
        if (p.has_best && (!has_best || p.best_value > result.best_value)) {
            result.best_value = p.best_value;
            result.best_placement.gamma = p.best_subset;
            has_best = true;
        }
    }
    result.best_placement.state_dim = n;
    result.total_count = result.objective_values.size();
    require(has_best, "domain", "constraint admits no feasible placement");
    return result;
}

double percentile_rank(const EnumerationResult& result, double value) {
    require(!result.objective_values.empty(), "domain", "empty enumeration");
    std::uint64_t below = 0;
    for (double v : result.objective_values) {
        if (v < value) ++below;
    }
    return 100.0 * static_cast<double>(below) /
           static_cast<double>(result.objective_values.size());
}

Histogram histogram(const std::vector<double>& values, int bins) {
    require(bins >= 1, "domain", "histogram needs at least one bin");
    double lo = kInf, hi = -kInf;
    std::uint64_t finite = 0;
    for (double v : values) {
        if (!std::isfinite(v)) continue;
        ++finite;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    require(finite > 0, "domain", "no finite values to bin");

    if (lo == hi) {
        const double pad = std::max(std::abs(lo), 1.0) * 1e-9;
        lo -= pad;
        hi += pad;
    }

    Histogram h;
    h.excluded = values.size() - finite;
    h.edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int i = 0; i <= bins; ++i) h.edges[i] = lo + (hi - lo) * i / bins;
    h.edges[0] = lo;
    h.edges[static_cast<std::size_t>(bins)] = hi;
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    const double width = hi - lo;
    for (double v : values) {
        if (!std::isfinite(v)) continue;
        int idx = static_cast<int>((v - lo) / width * bins);
        idx = std::clamp(idx, 0, bins - 1);
        ++h.counts[static_cast<std::size_t>(idx)];
    }
    return h;
}

}  // namespace qrsense
