#include "traitlab/oracles.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace traitlab {
namespace oracles {

namespace {
constexpr double kKZeroCutoff = 1e-12;  // below this, use the K→0 limits
}

double GaussianState::eval(double theta) const {
    return lambda * std::sqrt(alpha) / std::sqrt(2.0 * std::numbers::pi) *
           std::exp(-0.5 * alpha * theta * theta);
}

double GaussianState::peak() const { return eval(0.0); }

Field GaussianState::sample(const Grid& grid) const {
    return sample_field(grid, 0.0, [&](double theta) { return eval(theta); });
}

GaussianState gaussian_ground_state(double r_max, double alpha) {
    if (!(alpha > 0.0)) throw ValidationError("gaussian_ground_state: alpha must be positive");
    if (!(alpha < r_max))
        throw ValidationError("gaussian_ground_state: no positive steady state for alpha >= r_max");
    return GaussianState{r_max, alpha, r_max - alpha};
}

double peak_height(double r_max, double alpha) {
    return gaussian_ground_state(r_max, alpha).peak();
}

double optimal_alpha(double r_max) { return r_max / 3.0; }

double logistic_mass(double rho0, double r_max, double t) {
    if (!(rho0 > 0.0)) throw ValidationError("logistic_mass: rho0 must be positive");
    if (t < 0.0) throw ValidationError("logistic_mass: t must be nonnegative");
    // rho(t) = r / (1 + (r/rho0 - 1) e^{-r t})
    return r_max / (1.0 + (r_max / rho0 - 1.0) * std::exp(-r_max * t));
}

double lower_mass(double rho0, double K, double t) {
    if (!(rho0 > 0.0)) throw ValidationError("lower_mass: rho0 must be positive");
    if (K < kKZeroCutoff) return rho0 / (1.0 + rho0 * t);
    return K / ((1.0 + K / rho0) * std::exp(K * t) - 1.0);
}

double envelope_ubar(double M, double r_max, double K, double rho0, double t) {
    if (K < kKZeroCutoff) return M * std::exp(r_max * t) / (1.0 + rho0 * t);
    return M * std::exp(r_max * t) / (1.0 + rho0 / K * (1.0 - std::exp(-K * t)));
}

double tstar(double r_max, double K, double rho0) {
    if (!(rho0 > r_max))
        throw ValidationError("tstar: the envelope has an interior minimum only for rho0 > r_max");
    if (K < kKZeroCutoff) return 1.0 / r_max - 1.0 / rho0;
    return std::log((rho0 * r_max + rho0 * K) / (rho0 * r_max + r_max * K)) / K;
}

double ubar_min(double M, double r_max, double K, double rho0) {
    if (!(rho0 > r_max))
        throw ValidationError("ubar_min: the envelope has an interior minimum only for rho0 > r_max");
    if (K < kKZeroCutoff) return M * (r_max / rho0) * std::exp(1.0 - r_max / rho0);
    return M * std::pow((r_max + K) / (rho0 + K), 1.0 + r_max / K) *
           std::pow(rho0 / r_max, r_max / K);
}

}  // namespace oracles
}  // namespace traitlab
