#include "qrsense/placement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>

#include <Eigen/LU>
#include <Eigen/QR>

#include "qrsense/error.hpp"

namespace qrsense {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_indices(const std::vector<int>& indices, int state_dim, const char* what) {
    std::unordered_set<int> seen;
    for (int i : indices) {
        if (i < 0 || i >= state_dim) {
            fail("domain", std::string(what) + " index " + std::to_string(i + 1) +
                               " outside state dimension " + std::to_string(state_dim));
        }
        if (!seen.insert(i).second) {
            fail("domain", std::string(what) + " index " + std::to_string(i + 1) + " repeated");
        }
    }
}
}  // namespace

GridGeometry GridGeometry::line(int n) {
    require(n >= 1, "domain", "geometry needs at least one point");
    Matrix c(n, 1);
    for (int i = 0; i < n; ++i) c(i, 0) = static_cast<double>(i);
    return GridGeometry{std::move(c)};
}

GridGeometry GridGeometry::grid(int nx, int ny, double dx, double dy) {
    require(nx >= 1 && ny >= 1, "domain", "grid dimensions must be positive");
    require(dx > 0.0 && dy > 0.0, "domain", "grid spacings must be positive");
    Matrix c(static_cast<Eigen::Index>(nx) * ny, 2);
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const Eigen::Index idx = static_cast<Eigen::Index>(iy) * nx + ix;
            c(idx, 0) = ix * dx;
            c(idx, 1) = iy * dy;
        }
    }
    return GridGeometry{std::move(c)};
}

GridGeometry GridGeometry::points(Matrix coords) {
    require(coords.rows() >= 1, "domain", "geometry needs at least one point");
    require(coords.allFinite(), "domain", "geometry coordinates must be finite");
    return GridGeometry{std::move(coords)};
}

const char* to_string(ConstraintKind kind) {
    switch (kind) {
        case ConstraintKind::Unconstrained: return "unconstrained";
        case ConstraintKind::RegionMax: return "region-max";
        case ConstraintKind::RegionExact: return "region-exact";
        case ConstraintKind::Predetermined: return "predetermined";
        case ConstraintKind::MinDistance: return "min-distance";
    }
    return "unknown";
}

ConstraintSpec ConstraintSpec::unconstrained() { return {}; }

ConstraintSpec ConstraintSpec::region_max(std::vector<int> indices, int budget) {
    ConstraintSpec c;
    c.kind = ConstraintKind::RegionMax;
    c.constrained_indices = std::move(indices);
    c.budget = budget;
    return c;
}

ConstraintSpec ConstraintSpec::region_exact(std::vector<int> indices, int budget) {
    ConstraintSpec c;
    c.kind = ConstraintKind::RegionExact;
    c.constrained_indices = std::move(indices);
    c.budget = budget;
    return c;
}

ConstraintSpec ConstraintSpec::predetermined(std::vector<int> indices) {
    ConstraintSpec c;
    c.kind = ConstraintKind::Predetermined;
    c.budget = static_cast<int>(indices.size());
    c.constrained_indices = std::move(indices);
    return c;
}

ConstraintSpec ConstraintSpec::distance(double min_distance, GridGeometry geometry) {
    ConstraintSpec c;
    c.kind = ConstraintKind::MinDistance;
    c.min_distance = min_distance;
    c.geometry = std::move(geometry);
    return c;
}

void ConstraintSpec::validate(int state_dim) const {
    require(state_dim >= 1, "domain", "state dimension must be positive");
    switch (kind) {
        case ConstraintKind::Unconstrained:
            break;
        case ConstraintKind::RegionMax:
        case ConstraintKind::RegionExact:
            check_indices(constrained_indices, state_dim, "region");
            require(budget >= 0, "domain", "region budget must be nonnegative");
            if (budget > static_cast<int>(constrained_indices.size())) {
                fail("infeasible-constraint",
                     "region budget " + std::to_string(budget) + " exceeds region size " +
                         std::to_string(constrained_indices.size()));
            }
            break;
        case ConstraintKind::Predetermined:
            check_indices(constrained_indices, state_dim, "predetermined");
            require(budget == static_cast<int>(constrained_indices.size()), "domain",
                    "predetermined budget must equal the number of predetermined indices");
            require(!constrained_indices.empty(), "domain",
                    "predetermined constraint needs at least one index");
            break;
        case ConstraintKind::MinDistance:
            require(min_distance >= 0.0, "domain", "min distance must be nonnegative");
            require(geometry.has_value(), "domain", "min-distance constraint requires a geometry");
            if (geometry->size() != state_dim) {
                fail("domain", "geometry has " + std::to_string(geometry->size()) +
                                   " points but state dimension is " + std::to_string(state_dim));
            }
            break;
    }
}

Matrix select_rows(const Matrix& m, const Placement& placement) {
    Matrix out(placement.size(), m.cols());
    for (int i = 0; i < placement.size(); ++i) out.row(i) = m.row(placement.gamma[i]);
    return out;
}

Vector measure(const Vector& x, const Placement& placement) {
    Vector y(placement.size());
    for (int i = 0; i < placement.size(); ++i) y[i] = x[placement.gamma[i]];
    return y;
}

Matrix selection_matrix(const Placement& placement) {
    Matrix s = Matrix::Zero(placement.size(), placement.state_dim);
    for (int i = 0; i < placement.size(); ++i) s(i, placement.gamma[i]) = 1.0;
    return s;
}

Vector householder_reflector(const Vector& v) {
    require(v.size() >= 1, "domain", "empty vector");
    const double sigma = v.norm();
    require(sigma > 0.0, "domain", "zero vector has no Householder reflector");
    const double sign = v[0] >= 0.0 ? 1.0 : -1.0;  // sign(0) = +1
    Vector u = v;
    u[0] += sign * sigma;
    u /= u.norm();
    return u;
}

ConstrainedQrResult constrained_qr(const Matrix& w, const ConstraintSpec& constraint) {
    return constrained_qr(w, constraint, static_cast<int>(w.rows()));
}

ConstrainedQrResult constrained_qr(const Matrix& w, const ConstraintSpec& constraint, int sensors) {
    const int r = static_cast<int>(w.rows());
    const int n = static_cast<int>(w.cols());
    require(r >= 1 && n >= 1, "domain", "input matrix must be at least 1x1");
    require(w.allFinite(), "domain", "input matrix contains non-finite entries");
    require(r <= n, "domain", "basis rank exceeds the number of candidate locations");
    require(sensors >= 1, "domain", "sensor count must be positive");
    if (sensors > r) {
        fail("not-supported", "oversampling (p = " + std::to_string(sensors) + " > r = " +
                                  std::to_string(r) + " sensors) is not supported");
    }
    constraint.validate(n);

    const int p = sensors;
    std::vector<char> in_region(n, 0);
    for (int i : constraint.constrained_indices) in_region[i] = 1;
    std::vector<char> dist_masked(n, 0);
    std::vector<char> selected(n, 0);

    if (constraint.kind == ConstraintKind::Predetermined && constraint.budget > p) {
        fail("infeasible-constraint",
             std::to_string(constraint.budget) + " predetermined sensors do not fit in " +
                 std::to_string(p) + " selections");
    }

    Matrix rfac = w;
    std::vector<int> gamma(n);
    for (int j = 0; j < n; ++j) gamma[j] = j;

    // Scale reference for declaring a residual column numerically zero.
    double initial_scale = 0.0;
    for (int j = 0; j < n; ++j) initial_scale = std::max(initial_scale, w.col(j).norm());
    const double zero_tol =
        initial_scale * std::numeric_limits<double>::epsilon() * static_cast<double>(std::max(r, n));

    int region_count = 0;
    int first_constrained = -1;
    Vector norms(n);

    for (int k = 0; k < p; ++k) {
        // Residual column norms of the trailing block, recomputed (no downdating).
        for (int j = k; j < n; ++j) norms[j] = rfac.col(j).segment(k, r - k).norm();

        // Eligibility of each trailing column, keyed by its original index.
        std::vector<char> eligible(n, 1);
        bool masked_any = false;
        switch (constraint.kind) {
            case ConstraintKind::Unconstrained:
                break;
            case ConstraintKind::RegionMax:
            case ConstraintKind::RegionExact: {
                const int s = constraint.budget;
                if (region_count >= s) {
                    for (int j = k; j < n; ++j) {
                        if (in_region[gamma[j]]) {
                            eligible[j] = 0;
                            masked_any = true;
                        }
                    }
                } else if (constraint.kind == ConstraintKind::RegionExact) {
                    const int deficit = s - region_count;
                    const int remaining = p - k;
                    if (deficit > remaining) {
                        fail("infeasible-constraint",
                             "region-exact deficit of " + std::to_string(deficit) +
                                 " exceeds the " + std::to_string(remaining) +
                                 " remaining selections at iteration " + std::to_string(k + 1));
                    }
                    if (remaining == deficit) {
                        for (int j = k; j < n; ++j) {
                            if (!in_region[gamma[j]]) {
                                eligible[j] = 0;
                                masked_any = true;
                            }
                        }
                    }
                }
                break;
            }
            case ConstraintKind::Predetermined: {
                const int s = constraint.budget;
                if (k >= p - s) {
                    if (k == p - s) {
                        for (int idx : constraint.constrained_indices) {
                            if (selected[idx]) {
                                fail("infeasible-constraint",
                                     "predetermined index " + std::to_string(idx + 1) +
                                         " was already selected as a pivot; infeasible at iteration " +
                                         std::to_string(k + 1));
                            }
                        }
                    }
                    for (int j = k; j < n; ++j) {
                        if (!in_region[gamma[j]]) {
                            eligible[j] = 0;
                            masked_any = true;
                        }
                    }
                }
                break;
            }
            case ConstraintKind::MinDistance: {
                for (int j = k; j < n; ++j) {
                    if (dist_masked[gamma[j]]) {
                        eligible[j] = 0;
                        masked_any = true;
                    }
                }
                break;
            }
        }
        if (masked_any && first_constrained < 0) first_constrained = k;

        // Pivot: maximal residual norm among eligible columns, first wins ties.
        int pivot = -1;
        double pivot_norm = -1.0;
        for (int j = k; j < n; ++j) {
            if (eligible[j] && norms[j] > pivot_norm) {
                pivot_norm = norms[j];
                pivot = j;
            }
        }
        if (pivot < 0) {
            fail("infeasible-constraint", std::string("no eligible sensor location at iteration ") +
                                              std::to_string(k + 1) + " under the " +
                                              to_string(constraint.kind) + " constraint");
        }
        if (pivot_norm <= zero_tol) {
            fail("rank-deficient", "all eligible residual columns are numerically zero at iteration " +
                                       std::to_string(k + 1));
        }

        rfac.col(k).swap(rfac.col(pivot));
        std::swap(gamma[k], gamma[pivot]);
        selected[gamma[k]] = 1;
        if (in_region[gamma[k]]) ++region_count;

        // Householder step: zero the subdiagonal of the pivot column.
        const Vector v = rfac.col(k).segment(k, r - k);
        const double sigma = v.norm();
        if (sigma > 0.0) {
            const Vector u = householder_reflector(v);
            auto block = rfac.block(k, k, r - k, n - k);
            const Eigen::RowVectorXd proj = u.transpose() * block;
            block.noalias() -= 2.0 * u * proj;
            const double sign = v[0] >= 0.0 ? 1.0 : -1.0;
            rfac(k, k) = -sign * sigma;
            if (k + 1 < r) rfac.col(k).segment(k + 1, r - k - 1).setZero();
        }

        if (constraint.kind == ConstraintKind::MinDistance) {
            const GridGeometry& g = *constraint.geometry;
            const int chosen = gamma[k];
            for (int t = 0; t < n; ++t) {
                if (g.distance(t, chosen) <= constraint.min_distance) dist_masked[t] = 1;
            }
        }
    }

    ConstrainedQrResult out;
    out.placement.gamma.assign(gamma.begin(), gamma.begin() + p);
    out.placement.state_dim = n;
    out.r_factor = std::move(rfac);
    out.first_constrained_iteration = first_constrained;
    return out;
}

double log_det_of_selection(const Matrix& selected_modes) {
    const auto p = selected_modes.rows();
    const auto r = selected_modes.cols();
    if (p < r) return -kInf;  // information matrix cannot have full rank

    double logdet = 0.0;
    if (p == r) {
        const Eigen::PartialPivLU<Matrix> lu(selected_modes);
        for (Eigen::Index i = 0; i < r; ++i) {
            const double d = std::abs(lu.matrixLU()(i, i));
            if (d == 0.0 || !std::isfinite(d)) return -kInf;
            logdet += 2.0 * std::log(d);
        }
    } else {
        const Eigen::HouseholderQR<Matrix> qr(selected_modes);
        for (Eigen::Index i = 0; i < r; ++i) {
            const double d = std::abs(qr.matrixQR()(i, i));
            if (d == 0.0 || !std::isfinite(d)) return -kInf;
            logdet += 2.0 * std::log(d);
        }
    }
    return logdet;
}

double log_det_objective(const PodBasis& basis, const Placement& placement) {
    require(placement.size() >= 1, "domain", "empty placement");
    check_indices(placement.gamma, basis.state_dim(), "sensor");
    return log_det_of_selection(select_rows(basis.modes, placement));
}

bool satisfies(const Placement& placement, const ConstraintSpec& constraint) {
    std::unordered_set<int> chosen;
    for (int g : placement.gamma) {
        if (g < 0 || g >= placement.state_dim) return false;
        if (!chosen.insert(g).second) return false;
    }
    switch (constraint.kind) {
        case ConstraintKind::Unconstrained:
            return true;
        case ConstraintKind::RegionMax:
        case ConstraintKind::RegionExact: {
            int count = 0;
            for (int i : constraint.constrained_indices) count += chosen.count(i) ? 1 : 0;
            return constraint.kind == ConstraintKind::RegionMax ? count <= constraint.budget
                                                                : count == constraint.budget;
        }
        case ConstraintKind::Predetermined:
            for (int i : constraint.constrained_indices) {
                if (!chosen.count(i)) return false;
            }
            return true;
        case ConstraintKind::MinDistance: {
            const GridGeometry& g = *constraint.geometry;
            for (std::size_t a = 0; a < placement.gamma.size(); ++a) {
                for (std::size_t b = a + 1; b < placement.gamma.size(); ++b) {
                    if (g.distance(placement.gamma[a], placement.gamma[b]) <=
                        constraint.min_distance) {
                        return false;
                    }
                }
            }
            return true;
        }
    }
    return false;
}

}  // namespace qrsense
