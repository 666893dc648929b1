#pragma once

#include <vector>

#include <Eigen/Core>

namespace qrsense {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Simulation states stacked as columns: n state components by m snapshots.
using SnapshotMatrix = Matrix;

// Truncated POD basis: orthonormal modes ordered by energy, plus the full
// singular-value list of the snapshot matrix they came from.
struct PodBasis {
    Matrix modes;            // n x r, orthonormal columns
    Vector singular_values;  // all min(n, m) values, nonincreasing

    int rank() const { return static_cast<int>(modes.cols()); }
    int state_dim() const { return static_cast<int>(modes.rows()); }
};

// Leading-r left singular vectors of the snapshot matrix. Deterministic for a
// fixed input; each mode is sign-fixed so its largest-magnitude entry is
// positive. Snapshots are used raw (no mean subtraction).
PodBasis compute_pod(const SnapshotMatrix& snapshots, int rank);

// Keep the leading `rank` modes of an already computed basis.
PodBasis truncate(const PodBasis& basis, int rank);

struct EnergyContent {
    std::vector<double> per_mode;    // sigma_k / sum_j sigma_j
    std::vector<double> cumulative;  // running sum of per_mode
};

// Normalized singular values and their running sum, over the full list.
EnergyContent energy_content(const PodBasis& basis);

// Smallest rank whose cumulative (normalized) energy reaches the threshold.
// Advisory only: compute_pod always takes an explicit user rank.
int suggest_rank(const Vector& singular_values, double threshold = 0.99);

}  // namespace qrsense
