#include "qrsense/stats.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qrsense/error.hpp"

namespace qrsense {

namespace {

// Lower-incomplete-gamma series: P(a, x) = x^a e^-x / Gamma(a) * sum x^n / (a)_n
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper-incomplete-gamma continued fraction (modified Lentz).
double gamma_q_fraction(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_p(double a, double x) {
    require(a > 0.0, "domain", "gamma shape must be positive");
    require(x >= 0.0, "domain", "gamma argument must be nonnegative");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_fraction(a, x);
}

double chi_squared_cdf(double x, int dof) {
    require(dof >= 1, "domain", "degrees of freedom must be positive");
    if (x <= 0.0) return 0.0;
    return regularized_gamma_p(0.5 * dof, 0.5 * x);
}

double chi_squared_quantile(double probability, int dof) {
    require(dof >= 1, "domain", "degrees of freedom must be positive");
    require(probability > 0.0 && probability < 1.0, "domain",
            "probability must lie strictly between 0 and 1, got " + std::to_string(probability));

    double lo = 0.0;
    double hi = std::max(1.0, static_cast<double>(dof));
    while (chi_squared_cdf(hi, dof) < probability) {
        hi *= 2.0;
        if (hi > 1e12) break;
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (chi_squared_cdf(mid, dof) < probability) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-10 * std::max(1.0, lo)) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace qrsense
