#include "qrsense/pod.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "qrsense/error.hpp"

namespace qrsense {

PodBasis compute_pod(const SnapshotMatrix& snapshots, int rank) {
    const auto n = snapshots.rows();
    const auto m = snapshots.cols();
    require(n >= 1 && m >= 1, "domain", "snapshot matrix must be at least 1x1");
    require(snapshots.allFinite(), "domain", "snapshot matrix contains non-finite entries");
    const auto max_rank = std::min(n, m);
    if (rank < 1 || rank > max_rank) {
        fail("domain", "rank " + std::to_string(rank) + " out of range [1, " +
                           std::to_string(max_rank) + "]");
    }

    Eigen::BDCSVD<Matrix> svd(snapshots, Eigen::ComputeThinU);

    PodBasis basis;
    basis.singular_values = svd.singularValues();
    basis.modes = svd.matrixU().leftCols(rank);

    // Sign convention: largest-magnitude entry of each mode is positive, so
    // downstream pivot choices are reproducible across SVD backends.
    for (int k = 0; k < rank; ++k) {
        Eigen::Index imax = 0;
        double amax = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double a = std::abs(basis.modes(i, k));
            if (a > amax) {
                amax = a;
                imax = i;
            }
        }
        if (basis.modes(imax, k) < 0.0) basis.modes.col(k) = -basis.modes.col(k);
    }
    return basis;
}

PodBasis truncate(const PodBasis& basis, int rank) {
    require(rank >= 1 && rank <= basis.rank(), "domain",
            "truncation rank out of range [1, " + std::to_string(basis.rank()) + "]");
    return PodBasis{basis.modes.leftCols(rank), basis.singular_values};
}

EnergyContent energy_content(const PodBasis& basis) {
    const Vector& sv = basis.singular_values;
    require(sv.size() > 0, "domain", "empty singular-value list");
    const double total = sv.sum();
    require(total > 0.0, "domain", "all singular values are zero");

    EnergyContent out;
    out.per_mode.resize(static_cast<std::size_t>(sv.size()));
    out.cumulative.resize(static_cast<std::size_t>(sv.size()));
    double running = 0.0;
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
        const double share = sv[k] / total;
        running += share;
        out.per_mode[static_cast<std::size_t>(k)] = share;
        out.cumulative[static_cast<std::size_t>(k)] = running;
    }
    return out;
}

int suggest_rank(const Vector& singular_values, double threshold) {
    require(singular_values.size() > 0, "domain", "empty singular-value list");
    require(threshold > 0.0 && threshold <= 1.0, "domain", "threshold must be in (0, 1]");
    const double total = singular_values.sum();
    require(total > 0.0, "domain", "all singular values are zero");
    double running = 0.0;
    for (Eigen::Index k = 0; k < singular_values.size(); ++k) {
        running += singular_values[k] / total;
        if (running >= threshold) return static_cast<int>(k) + 1;
    }
    return static_cast<int>(singular_values.size());
}

}  // namespace qrsense
