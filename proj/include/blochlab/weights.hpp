// Radial weight functions on [0,1) and the checks that qualify them as
// normal: a decay exponent pair (a, b), grid-checked monotonicity of the
// ratios mu(t)/(1-t)^a and mu(t)/(1-t)^b, and the weighted-integral constant
// R_mu that controls growth estimates downstream.
#pragma once

#include <memory>
#include <utility>
#include <vector>

#include <json.hpp>

#include "blochlab/common.hpp"

namespace blochlab::weights {

// Evaluation grids stay this far away from the boundary t = 1.
inline constexpr double kEdgeGuard = 1e-6;

class NormalWeight {
  public:
    // mu(t) = (1 - t^2)^alpha with exponents (a, b) = (alpha/2, alpha + 1/2)
    // and delta = 1/3, the point where mu(t)/(1-t)^a starts decreasing.
    static NormalWeight power(double alpha);

    // Monotone-cubic (PCHIP) interpolant through (t, value) knots. Knots must
    // start at t = 0, be strictly increasing in t, and positive in value;
    // beyond the last knot the end slope continues linearly. The caller
    // supplies the decay exponents and tail metadata, since they are not
    // derivable from samples.
    static NormalWeight table(std::vector<std::pair<double, double>> knots,
                              double delta, double a, double b,
                              bool integral_divergent,
                              double tail_monotone_from);

    double operator()(double t) const;

    double delta() const { return delta_; }
    double exponent_a() const { return a_; }
    double exponent_b() const { return b_; }
    // Whether the integral of 1/mu over [0,1) diverges; drives the choice of
    // compactness criterion downstream.
    bool integral_divergent() const { return integral_divergent_; }
    // Leftmost point from which mu is non-increasing; inversion happens here.
    double tail_monotone_from() const { return tail_from_; }

    nlohmann::ordered_json describe() const;
    static NormalWeight from_json(const nlohmann::json& j);

  private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    double delta_ = 0.0, a_ = 0.0, b_ = 0.0, tail_from_ = 0.0;
    bool integral_divergent_ = true;

    NormalWeight() = default;
};

struct NormalityReport {
    bool positive = false;
    bool w1_monotone = false;  // mu(t)/(1-t)^a non-increasing past delta
    bool w1_limit = false;     // that ratio decays towards 0 on the grid
    bool w2_monotone = false;  // mu(t)/(1-t)^b non-decreasing past delta
    bool w2_divergent = false; // that ratio grows without bound on the grid
    double worst_w1_violation = 0.0;  // largest relative increase observed
    double worst_w2_violation = 0.0;  // largest relative decrease observed
    double t_worst_w1 = 0.0;
    double t_worst_w2 = 0.0;
    bool all() const {
        return positive && w1_monotone && w1_limit && w2_monotone && w2_divergent;
    }
};

// Evaluates both ratio conditions on the grid
// { delta + k (1 - delta - kEdgeGuard) / grid_points : k = 0..grid_points }.
// Non-positivity of the weight anywhere on the grid is a hard failure and
// throws DomainError naming the offending t.
NormalityReport check_normality(const NormalWeight& w, int grid_points = 2048);

// Integral of 1/mu over [0, r], adaptive quadrature at absolute tolerance
// 1e-9. Requires 0 <= r < 1.
double integral_reciprocal(const NormalWeight& w, double r);

// Solves mu(t) = y by bisection on the monotone tail; the returned t
// satisfies |mu(t) - y| <= 1e-12. Throws RangeError when y is not attained.
double weight_inverse(const NormalWeight& w, double y);

struct RMuDetails {
    double r_mu = 0.0;
    double m_mu = 0.0;  // min of mu over [0, delta]
    double big_m_mu = 0.0;  // sup of mu over [0, 1), grid estimate
    double max_weighted_integral = 0.0;  // largest observed mu(r) * I(r)
};

// R_mu = delta * M_mu / m_mu + 1 - delta. Also verifies the defining bound
// mu(r) * integral_reciprocal(r) < R_mu on a radius sweep and throws
// ConsistencyError if it fails.
RMuDetails r_mu_details(const NormalWeight& w);
double r_mu_constant(const NormalWeight& w);

}  // namespace blochlab::weights
