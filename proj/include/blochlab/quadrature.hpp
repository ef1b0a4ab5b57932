// Adaptive Gauss-Kronrod integration on finite intervals.
//
// A 15-point Kronrod rule with its embedded 7-point Gauss rule estimates each
// subinterval; intervals whose discrepancy exceeds their share of the error
// budget are bisected. All nodes are interior, so integrands may be left
// undefined at the endpoints (used for integrands with a removable
// singularity at 0).
#pragma once

#include <functional>

#include "blochlab/common.hpp"

namespace blochlab {

struct QuadratureResult {
    Cplx value{0.0, 0.0};
    double error_estimate = 0.0;
    long evaluations = 0;
};

// Integrates f over [a, b] to the requested absolute tolerance. Throws
// AccuracyError (carrying the achieved error estimate) if the budget cannot
// be met within the subdivision depth limit.
QuadratureResult integrate(const std::function<Cplx(double)>& f, double a,
                           double b, double abs_tol, int max_depth = 52);

double integrate_real(const std::function<double(double)>& f, double a,
                      double b, double abs_tol, int max_depth = 52);

}  // namespace blochlab
