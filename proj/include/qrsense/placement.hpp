#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "qrsense/pod.hpp"

namespace qrsense {

// Coordinates for every state index, used by the min-distance constraint and
// for reporting sensor locations.
struct GridGeometry {
    Matrix coords;  // n x dim

    static GridGeometry line(int n);  // 1D: coordinate = index
    static GridGeometry grid(int nx, int ny, double dx = 1.0, double dy = 1.0);
    static GridGeometry points(Matrix coords);

    int size() const { return static_cast<int>(coords.rows()); }
    double distance(int i, int j) const { return (coords.row(i) - coords.row(j)).norm(); }
};

enum class ConstraintKind { Unconstrained, RegionMax, RegionExact, Predetermined, MinDistance };

const char* to_string(ConstraintKind kind);

// Spatial constraint on the greedy selection. Indices are 0-based here; the
// CLI layer owns the 1-based boundary.
struct ConstraintSpec {
    ConstraintKind kind = ConstraintKind::Unconstrained;
    std::vector<int> constrained_indices;  // s_c: region members or predetermined locations
    int budget = 0;                        // s: max/exact count in region; |s_c| for predetermined
    double min_distance = 0.0;             // d
    std::optional<GridGeometry> geometry;  // required for MinDistance

    static ConstraintSpec unconstrained();
    static ConstraintSpec region_max(std::vector<int> indices, int budget);
    static ConstraintSpec region_exact(std::vector<int> indices, int budget);
    static ConstraintSpec predetermined(std::vector<int> indices);
    static ConstraintSpec distance(double min_distance, GridGeometry geometry);

    // Consistency against a state dimension: indices distinct and in range,
    // budgets sane, geometry size matching.
    void validate(int state_dim) const;
};

// Ordered sensor index set; the order is the greedy pivot order.
struct Placement {
    std::vector<int> gamma;  // 0-based, distinct
    int state_dim = 0;

    int size() const { return static_cast<int>(gamma.size()); }
};

// Rows of `m` picked by the placement, in selection order (the action of the
// selection operator S on a matrix of row-indexed quantities).
Matrix select_rows(const Matrix& m, const Placement& placement);

// S x = (x_{g1}, ..., x_{gp})
Vector measure(const Vector& x, const Placement& placement);

// Dense p x n 0/1 selection matrix, rows e_{gi}^T. Intended for tests and
// small systems.
Matrix selection_matrix(const Placement& placement);

// Unit vector u with H = I - 2 u u^T mapping v to -sign(v1) ||v|| e1
// (sign(0) = +1). Errors on the zero vector.
Vector householder_reflector(const Vector& v);

struct ConstrainedQrResult {
    Placement placement;
    Matrix r_factor;                       // upper-triangular R with W*Pi = Q*R
    int first_constrained_iteration = -1;  // first pivot step where masking bit; -1 if never
};

// Greedy constrained column-pivoted QR of W (= Psi_r^T, r x n). Selects
// `sensors` pivots (default: all r). Masked columns still receive Householder
// updates; only the pivot argmax skips them. Ties pick the first maximal
// column in the current ordering.
ConstrainedQrResult constrained_qr(const Matrix& w, const ConstraintSpec& constraint);
ConstrainedQrResult constrained_qr(const Matrix& w, const ConstraintSpec& constraint, int sensors);

// log det((S Psi_r)^T (S Psi_r)); equals 2 log |det(S Psi_r)| when p = r.
// Singular information matrices return -infinity rather than throwing, so
// enumeration histograms can bin degenerate placements.
double log_det_objective(const PodBasis& basis, const Placement& placement);

// Same objective evaluated on an already gathered p x r matrix S*Psi_r.
double log_det_of_selection(const Matrix& selected_modes);

// Post-hoc constraint check on a finished placement.
bool satisfies(const Placement& placement, const ConstraintSpec& constraint);

}  // namespace qrsense
