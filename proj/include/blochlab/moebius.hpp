// Moebius automorphisms of the unit ball, the invariant gradient they
// induce, and the pseudohyperbolic distance. These supply the
// geometry-invariant seminorm variant and the separation bounds used by the
// compactness probes.
#pragma once

#include "blochlab/common.hpp"
#include "blochlab/holo.hpp"

namespace blochlab::moebius {

// phi_a(z) = (a - P_a z - s_a Q_a z) / (1 - <z,a>) with s_a = sqrt(1-||a||^2),
// P_a the orthogonal projection onto span{a} and Q_a = I - P_a. For a = 0 the
// map is z -> -z. phi_a swaps 0 and a and is an involution of the ball.
class MoebiusMap {
  public:
    explicit MoebiusMap(CVec center);

    const CVec& center() const { return a_; }
    int dim() const { return static_cast<int>(a_.size()); }
    // s_a = sqrt(1 - ||a||^2).
    double s() const { return s_; }

    CVec apply(const CVec& z) const;

  private:
    CVec a_;
    double norm_a_sq_ = 0.0;
    double s_ = 1.0;
};

// ||grad(f o phi_z)(0)||, computed by central differences on the composed
// map (step 1e-5, one Richardson extrapolation per coordinate). The
// composition is not polynomial, so this stays numerical by design.
double invariant_gradient(const holo::Function& f, const CVec& z);

// rho(z,w) = sqrt(1 - (1-||z||^2)(1-||w||^2) / |1 - <z,w>|^2), the
// Moebius-invariant distance on the ball. Satisfies ||z-w||/2 <= rho(z,w) < 1.
double pseudohyperbolic(const CVec& z, const CVec& w);

}  // namespace blochlab::moebius
