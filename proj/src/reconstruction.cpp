#include "qrsense/reconstruction.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "qrsense/error.hpp"

namespace qrsense {

CoefficientEstimate estimate_coefficients(const PodBasis& basis, const Measurement& measurement) {
    const int p = measurement.placement.size();
    const int r = basis.rank();
    require(measurement.values.size() == p, "domain",
            "measurement has " + std::to_string(measurement.values.size()) + " values for " +
                std::to_string(p) + " sensors");
    require(measurement.values.allFinite(), "domain", "measurement values must be finite");
    if (p < r) {
        fail("domain", "under-determined estimate: " + std::to_string(p) + " sensors for " +
                           std::to_string(r) + " modes");
    }

    const Matrix m = select_rows(basis.modes, measurement.placement);

    CoefficientEstimate out;
    out.coefficients = m.colPivHouseholderQr().solve(measurement.values);

    const Eigen::JacobiSVD<Matrix> svd(m);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    out.condition_number = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    const double warn_at = 1e-3 / std::numeric_limits<double>::epsilon();
    out.ill_conditioned = !(out.condition_number < warn_at);
    return out;
}

Vector reconstruct_state(const PodBasis& basis, const Vector& coefficients) {
    require(coefficients.size() == basis.rank(), "domain",
            "coefficient length " + std::to_string(coefficients.size()) +
                " does not match rank " + std::to_string(basis.rank()));
    return basis.modes * coefficients;
}

double relative_error(const Vector& x_true, const Vector& x_hat) {
    require(x_true.size() == x_hat.size(), "domain", "state length mismatch");
    const double denom = x_true.norm();
    require(denom > 0.0, "domain", "relative error undefined for a zero true state");
    return 100.0 * (x_true - x_hat).norm() / denom;
}

Measurement take_measurement(const Vector& state, const Placement& placement, double noise_std,
                             const CounterRng& rng, std::uint64_t counter_base) {
    require(noise_std >= 0.0, "domain", "noise standard deviation must be nonnegative");
    Measurement m;
    m.placement = placement;
    m.noise_std = noise_std;
    m.values = measure(state, placement);
    if (noise_std > 0.0) {
        for (int i = 0; i < placement.size(); ++i) {
            m.values[i] += noise_std * rng.normal(counter_base + static_cast<std::uint64_t>(i));
        }
    }
    return m;
}

}  // namespace qrsense
