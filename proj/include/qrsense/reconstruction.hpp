#pragma once

#include <cstdint>

#include "qrsense/placement.hpp"
#include "qrsense/pod.hpp"
#include "qrsense/rng.hpp"

namespace qrsense {

// Sparse (possibly noisy) point measurements y = S x + eta.
struct Measurement {
    Vector values;
    Placement placement;
    double noise_std = 0.0;  // beta; 0 when noiseless or unknown
};

struct CoefficientEstimate {
    Vector coefficients;            // a-hat = (S Psi_r)^+ y
    double condition_number = 0.0;  // of S Psi_r
    bool ill_conditioned = false;   // warning, not an error
};

// Gappy-POD coefficient estimate via a QR least-squares solve (direct solve
// when p = r). Requires p >= r; attaching an ill-conditioning warning instead
// of failing lets deliberately bad placements be evaluated.
CoefficientEstimate estimate_coefficients(const PodBasis& basis, const Measurement& measurement);

// x-hat = Psi_r a-hat
Vector reconstruct_state(const PodBasis& basis, const Vector& coefficients);

// 100 * ||x_true - x_hat|| / ||x_true||
double relative_error(const Vector& x_true, const Vector& x_hat);

// Measure a state at the placement, adding N(0, beta^2) noise from the
// counter RNG (counters counter_base .. counter_base + p - 1).
Measurement take_measurement(const Vector& state, const Placement& placement, double noise_std,
                             const CounterRng& rng, std::uint64_t counter_base);

}  // namespace qrsense
