// Bloch-type seminorms on the unit ball: four variants of the weighted
// derivative supremum, the norm |f(0)| + seminorm, boundary decay profiles
// for the little-Bloch classification, and the growth / restriction
// consistency checks built on them.
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "blochlab/common.hpp"
#include "blochlab/holo.hpp"
#include "blochlab/weights.hpp"

namespace blochlab::bloch {

enum class Variant { gradient, radial, affine, invariant };

std::string to_string(Variant v);
// Accepts the four names above; anything else -> ConfigError.
Variant variant_from_string(const std::string& name);

struct SamplerConfig {
    int shells = 14;       // sweep radii 1 - 2^-j, j = 1..shells, plus 0
    int directions = 512;  // random unit directions per shell
    int refine_passes = 3; // coordinate-wise golden-section passes
    int refine_top = 8;    // witnesses kept for refinement
    std::uint64_t seed = 0xB10C5EEDULL;
};

struct SupremumEstimate {
    double value = 0.0;
    CVec witness;
    long samples_used = 0;
    int refinement_passes = 0;
    double final_gain = 0.0;  // relative improvement in the last pass
};

using Objective = std::function<double(const CVec&)>;

// Multi-start maximization over the open ball: a radial shell sweep seeds a
// pool of witnesses, the best of which are polished by coordinate-wise
// golden-section search. The result is a certified lower bound of the
// supremum and `value` equals objective(witness) exactly. extra_seeds join
// the candidate pool after being clamped into the ball; their dimension must
// match.
SupremumEstimate estimate_sup(const Objective& objective, int dim,
                              const SamplerConfig& cfg = {},
                              const std::vector<CVec>& extra_seeds = {});

// Pointwise quantity whose supremum over the ball defines each seminorm:
//   gradient   mu(||z||) ||grad f(z)||
//   radial     mu(||z||) |Rf(z)|          (R = radial derivative)
//   affine     mu(||z||) |Rf(z)| / ||z||, continued as mu(0)||grad f(0)|| at 0
//   invariant  ||grad(f o phi_z)(0)||, defined for the weight 1 - t^2 only
double seminorm_objective(const holo::Function& f,
                          const weights::NormalWeight& mu, Variant variant,
                          const CVec& z);

SupremumEstimate seminorm(const holo::Function& f,
                          const weights::NormalWeight& mu, Variant variant,
                          const SamplerConfig& cfg = {},
                          const std::vector<CVec>& extra_seeds = {});

// |f(0)| + seminorm value.
double bloch_norm(const holo::Function& f, const weights::NormalWeight& mu,
                  Variant variant, const SamplerConfig& cfg = {});

// Little-Bloch surrogate thresholds: membership requires the final profile
// value to drop below kLittleBlochRatio times the peak and the profile to be
// non-increasing over the last kLittleBlochTail shells.
inline constexpr double kLittleBlochRatio = 1e-3;
inline constexpr int kLittleBlochTail = 4;

struct DecayProfile {
    std::vector<double> radii;   // strictly increasing, inside [0, 1)
    std::vector<double> values;  // max of mu(r)|Rf(r u)| over directions u
    double peak = 0.0;
    bool little_bloch = false;
};

// Per-shell maxima of the weighted radial derivative over sampled directions.
// Radii must be strictly increasing and lie in [0, 1 - kEdgeGuard].
DecayProfile decay_profile(const holo::Function& f,
                           const weights::NormalWeight& mu,
                           const std::vector<double>& radii);

// The default shell ladder 1 - 2^-j, j = 1..shells.
std::vector<double> geometric_radii(int shells);

// CSV rows "radius,value" with a header line.
void write_decay_csv(const DecayProfile& profile, std::ostream& os);

struct GrowthReport {
    bool ok = false;
    double seminorm_used = 0.0;   // gradient-seminorm estimate in the bound
    double worst_excess = 0.0;    // max of |f(z)| - |f(0)| - I_mu(||z||) * s
    CVec witness;
    int samples = 0;
    int rounds = 1;  // 2 when a violation forced a seminorm refinement
};

// Checks |f(z)| <= |f(0)| + integral_reciprocal(mu, ||z||) * s + 1e-8 on
// sampled points, where s is the gradient-seminorm estimate. A violation
// triggers one refinement round that reseeds the seminorm search along the
// ray of the worst witness before re-checking.
GrowthReport growth_check(const holo::Function& f,
                          const weights::NormalWeight& mu, int samples,
                          std::uint64_t seed = 0x6207713ULL);
GrowthReport growth_check(const holo::Function& f,
                          const weights::NormalWeight& mu,
                          double seminorm_value, int samples,
                          std::uint64_t seed = 0x6207713ULL);

// (|f(w)| - |f(0)|) / integral_reciprocal(mu, ||w||), clamped at 0: a
// certified lower bound for the gradient seminorm obtained by reading the
// growth estimate backwards. Returns 0 at w = 0.
double growth_seminorm_floor(const holo::Function& f,
                             const weights::NormalWeight& mu, const CVec& w);

struct RestrictionReport {
    double direct = 0.0;          // gradient seminorm of f itself
    double restricted_max = 0.0;  // best seminorm among sampled restrictions
    double ratio = 0.0;           // restricted_max / direct
    bool ok = false;              // ratio within [0.95, 1 + 1e-9]
    int best_system = -1;
    std::vector<double> per_system;
};

// Samples `systems` k-dimensional orthonormal systems, restricts f to each,
// and compares the best restricted gradient seminorm against the ambient
// one. The first system is aligned with the ambient witness (its direction
// plus the conjugate gradient direction there, the slice on which the
// supremum is attained); the rest are random. The restricted witnesses are
// embedded and fed back into the ambient search, which pins the ratio at or
// below 1.
RestrictionReport restriction_sup_check(const holo::PolyFunction& f,
                                        const weights::NormalWeight& mu, int k,
                                        int systems,
                                        const SamplerConfig& cfg = {});

}  // namespace blochlab::bloch
