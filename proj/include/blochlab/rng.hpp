// Deterministic random source. The generator (xoshiro256++ seeded through
// splitmix64) and every derived distribution are written out explicitly so a
// given seed yields the same stream on any platform, which is what makes the
// reports reproducible bit for bit.
#pragma once

#include <cstdint>

#include "blochlab/common.hpp"

namespace blochlab {

class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    // Uniform in [0,1) with 53 random bits.
    double uniform01();
    double uniform(double lo, double hi);

    // Standard normal via the Marsaglia polar method (no trigonometry, so the
    // stream depends only on sqrt/log which are stable across libms).
    double normal();

    Cplx complex_normal();

    // Uniform on the unit sphere of C^dim.
    CVec unit_vector(int dim);

    // Uniform w.r.t. volume on the ball of given radius in C^dim.
    CVec ball_point(int dim, double radius);

  private:
    std::uint64_t state_[4];
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace blochlab
