// Lacunary test series for a normal weight nu: the coefficients 2^k attached
// to exponents n_k = floor(1/(1-r_k)) with nu(r_k) = 2^-k, the extremal
// constants of the weighted series, and the two-parameter test functions
// built from its antiderivative. These are the functions whose norms stay
// bounded while they concentrate near a chosen boundary direction.
#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "blochlab/common.hpp"
#include "blochlab/holo.hpp"
#include "blochlab/weights.hpp"

namespace blochlab::testfuncs {

struct GTerm {
    int k = 0;            // first series index contributing this exponent
    std::uint64_t n = 0;  // exponent
    double coeff = 0.0;   // sum of 2^k over merged indices
};

class GSeries {
  public:
    const weights::NormalWeight& nu() const { return nu_; }
    int k0() const { return k0_; }
    int k_max() const { return k_max_; }
    double eval_radius_max() const { return radius_; }
    const std::vector<GTerm>& terms() const { return terms_; }
    // Certified bound on everything dropped from the truncated series,
    // valid for all |z| <= eval_radius_max. Always below 1e-9.
    double tail_bound() const { return tail_bound_; }

    nlohmann::ordered_json summary() const;

  private:
    friend GSeries build_g(const weights::NormalWeight&, int, double);
    GSeries() = default;

    weights::NormalWeight nu_ = weights::NormalWeight::power(1.0);
    int k0_ = 0;
    int k_max_ = 0;
    double radius_ = 0.0;
    double tail_bound_ = 0.0;
    std::vector<GTerm> terms_;
};

// Builds the truncated series for a weight that passes the normality check.
// Equal exponents produced by consecutive k are merged by summing their
// coefficients. Construction certifies the truncation error at
// eval_radius_max and throws TruncationError when the bound 1e-9 cannot be
// met there (shrink the radius or raise k_max).
GSeries build_g(const weights::NormalWeight& nu, int k_max,
                double eval_radius_max = 0.999);

// g(z) = 1 + sum coeff_k z^{n_k}; |z| <= eval_radius_max or DomainError.
Cplx g_eval(const GSeries& g, Cplx z);
double g_eval_real(const GSeries& g, double t);

// Term-wise antiderivative eta + sum coeff_k eta^{n_k + 1} / (n_k + 1).
Cplx g_antiderivative(const GSeries& g, Cplx eta);
double g_antiderivative_real(const GSeries& g, double r);

struct TestConstants {
    double C1 = 0.0;  // inf of nu(t) g(t) over [0, eval_radius_max]
    double C2 = 0.0;  // sup of nu(t) g(t) over the same range
    double C3 = 0.0;  // sup over [r1, radius] of int_0^r g / int_0^{r^2} g
    // The two radii that both go by the name r1 in different roles: the unit
    // integral point int_0^{r1} g = 1, and the half-weight point
    // nu(r1) = 1/2. They are distinct constants and are never interchanged.
    double r1_unit_integral = 0.0;
    double r1_half_weight = 0.0;
};

// Grid extrema with golden-section polish; r1_unit_integral by bisection on
// the antiderivative (|integral - 1| <= 1e-9 guaranteed).
TestConstants constants(const GSeries& g, int grid_points = 4096);

// beta_w(z) = int_0^{<z,w>} g; defined whenever |<z,w>| is inside the
// certified radius.
Cplx beta(const GSeries& g, const CVec& w, const CVec& z);

// gamma_w(z) = (int_0^{<z,w>} g)^2 / int_0^{||w||^2} g; requires w != 0.
Cplx gamma(const GSeries& g, const CVec& w, const CVec& z);

// Function-interface adapters so that the seminorm machinery applies. Both
// carry exact gradients: grad beta_w(z) = g(<z,w>) conj(w), and the gamma
// gradient follows by the product rule.
class BetaFunction : public holo::Function {
  public:
    BetaFunction(GSeries g, CVec w);
    int dim() const override;
    Cplx value(const CVec& z) const override;
    CVec gradient(const CVec& z) const override;
    Cplx radial(const CVec& z) const override;
    const CVec& w() const { return w_; }

  private:
    GSeries g_;
    CVec w_;
};

class GammaFunction : public holo::Function {
  public:
    GammaFunction(GSeries g, CVec w);
    int dim() const override;
    Cplx value(const CVec& z) const override;
    CVec gradient(const CVec& z) const override;
    Cplx radial(const CVec& z) const override;
    const CVec& w() const { return w_; }

  private:
    GSeries g_;
    CVec w_;
    Cplx denom_;  // int_0^{||w||^2} g, fixed at construction
};

}  // namespace blochlab::testfuncs
