// The weighted composition integral operator
//     f  ->  z -> integral_0^1 f(phi(t z)) (R psi)(t z) dt / t
// acting between two weighted Bloch-type spaces, together with the pointwise
// criterion quantities whose suprema govern boundedness, decay profiles of
// those quantities towards the boundary for compactness probing, an epsilon-
// net probe for relative compactness of the map's image, and consistency
// checks (radial identity, two-path evaluation, vector factorization).
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "blochlab/bloch.hpp"
#include "blochlab/common.hpp"
#include "blochlab/holo.hpp"
#include "blochlab/testfuncs.hpp"
#include "blochlab/weights.hpp"

namespace blochlab::cesaro {

// Immutable description of one operator: integral symbol psi, composition
// self-map phi, and the weights of the source (nu) and target (mu) spaces.
struct OperatorSpec {
    holo::PolyFunction symbol;
    holo::SelfMap map;
    weights::NormalWeight domain_weight;
    weights::NormalWeight codomain_weight;

    OperatorSpec(holo::PolyFunction psi, holo::SelfMap phi,
                 weights::NormalWeight nu, weights::NormalWeight mu);
    int dim() const { return symbol.dim(); }
};

// The four flavors of the boundedness criterion: restricted to an orthonormal
// slice (B1), to a coordinate subset (B2), with the map truncated to its
// first k coordinates (B3), or unrestricted (B4).
enum class Kind { B1, B2, B3, B4 };

std::string to_string(Kind k);
// Accepts "B1".."B4"; anything else -> ConfigError.
Kind kind_from_string(const std::string& s);

// The domain restriction matching a Kind; construction fixes the shape and
// criterion_quantity validates it against the kind and the operator.
class Restriction {
  public:
    static Restriction none();
    static Restriction system(holo::OrthonormalSystem x);
    static Restriction coordinates(std::vector<int> which);
    static Restriction truncation(int k);

    bool has_system() const { return system_.has_value(); }
    bool has_coordinates() const { return coords_.has_value(); }
    bool has_truncation() const { return trunc_.has_value(); }
    bool empty() const {
        return !has_system() && !has_coordinates() && !has_truncation();
    }
    const holo::OrthonormalSystem& system() const;
    const std::vector<int>& coordinates() const;
    int truncation() const;
    std::string describe() const;

  private:
    Restriction() = default;
    std::optional<holo::OrthonormalSystem> system_;
    std::optional<std::vector<int>> coords_;
    std::optional<int> trunc_;
};

// Closed-form application: with h = (f o phi) * R psi split into homogeneous
// parts h = sum_n P_n (no constant part since R psi vanishes at 0), the
// result is sum_n P_n / n. Each coefficient division picks, among the
// representable quotients nearest c/n, one whose product with n restores the
// numerator bit-for-bit whenever such a double exists, so the radial
// derivative of the result reproduces h exactly up to that representability
// caveat.
holo::PolyFunction apply_exact(const OperatorSpec& spec,
                               const holo::PolyFunction& f,
                               unsigned degree_cap = holo::kDegreeCap);

// Direct quadrature of the defining integral at one point; the integrand
// extends by 0 at t = 0 and all quadrature nodes are interior. Agrees with
// evaluating apply_exact to ~1e-6 absolute.
Cplx apply_quadrature(const OperatorSpec& spec, const holo::PolyFunction& f,
                      const CVec& z, double abs_tol = 1e-9);

struct IdentityReport {
    bool ok = false;
    double max_rel_error = 0.0;  // |R(Cf) - (f o phi) R psi| / max(1, |ref|)
    CVec witness;
    int samples = 0;
};

// Samples the radial-derivative identity R(C f) = (f o phi) * R psi; a
// violation beyond 1e-8 flags a homogeneous-decomposition bug.
IdentityReport radial_identity_check(const OperatorSpec& spec,
                                     const holo::PolyFunction& f, int samples,
                                     std::uint64_t seed = 0x1DE47175ULL);

// Pointwise criterion value mu(||y||) |R psi(y)| max{1, I_nu(||phi(y)||)}
// where I_nu is the integral of 1/nu and the restriction reshapes the domain:
// B1 takes y in the coordinates of the orthonormal slice, B2 in the listed
// coordinates, B3 measures only the first k components of phi(y), B4 nothing.
double criterion_quantity(const OperatorSpec& spec, Kind kind,
                          const Restriction& restriction, const CVec& y);

// The supremum M of the criterion quantity over its domain, by the shell
// sampler of bloch::estimate_sup.
bloch::SupremumEstimate sup_quantity(const OperatorSpec& spec, Kind kind,
                                     const Restriction& restriction,
                                     const bloch::SamplerConfig& cfg = {},
                                     const std::vector<CVec>& extra_seeds = {});

struct DictionaryEntry {
    std::string name;
    holo::PolyFunction f;
};

// Probe functions for norm bounds: monomials through degree 6, polynomial
// truncations of the extremal test functions seeded at images of the
// criterion witness (when the domain weight supports the series), and 32
// seeded random polynomials.
std::vector<DictionaryEntry> default_dictionary(
    const OperatorSpec& spec, const bloch::SamplerConfig& cfg = {});

// |f(0)| plus a certified upper bound of the gradient seminorm, from the
// triangle inequality on coefficients reduced to a one-variable sweep.
double gradient_norm_upper_bound(const holo::PolyFunction& f,
                                 const weights::NormalWeight& mu);

struct BoundRow {
    std::string name;
    double image_norm = 0.0;   // radial-variant norm of C f in the target
    double source_norm = 0.0;  // gradient-variant norm floor of f (certified)
    double bound = 0.0;        // M * source_norm * (1 + 1e-6)
    bool ok = false;
};

struct BoundReport {
    bool ok = false;
    double m_estimate = 0.0;  // unrestricted criterion supremum used
    std::vector<BoundRow> rows;
};

// Checks ||C f|| <= M * ||f|| * (1 + 1e-6) across the dictionary. The source
// norm combines the sampled gradient seminorm with the growth floor read at
// phi(witness), and the criterion search is reseeded at each image witness,
// which makes the sampled inequality a consequence of the pointwise one.
BoundReport operator_bound_check(const OperatorSpec& spec,
                                 const std::vector<DictionaryEntry>& dict,
                                 const bloch::SamplerConfig& cfg = {});

struct LowerBoundReport {
    double value = 0.0;  // certified lower bound for the operator norm
    std::string best;
    std::vector<std::pair<std::string, double>> ratios;
};

// Max over the dictionary of ||C f|| / (certified upper bound of ||f||); the
// numerator is itself a certified lower bound, so the ratio never overshoots
// the true operator norm.
LowerBoundReport norm_lower_bound(const OperatorSpec& spec,
                                  const std::vector<DictionaryEntry>& dict,
                                  const bloch::SamplerConfig& cfg = {});

// One criterion kind evaluated for a report: the supremum estimate, a decay
// profile of the quantity against ||phi(y)|| (tail suprema over the shells
// 1 - 2^-j, nonincreasing by construction and never above the supremum), and
// a verdict string.
struct CriterionReport {
    Kind kind = Kind::B4;
    std::string restriction;
    bloch::SupremumEstimate sup;
    bloch::DecayProfile decay;
    std::string verdict;
    std::string rationale;

    nlohmann::ordered_json to_json() const;
};

struct ClassifyOptions {
    // Defaults: the full standard basis for B1, all coordinates for B2, and
    // the full truncation order for B3, each of which reduces to B4.
    std::optional<holo::OrthonormalSystem> b1_system;
    std::optional<std::vector<int>> b2_coordinates;
    std::optional<int> b3_truncation;
    bloch::SamplerConfig sampler;
    int decay_shells = 18;          // shell ladder depth for profiles
    int decay_directions = 64;      // directions per shell on top of axes
    int gamma_family_points = 5;    // test-family sweep length (0 disables)
};

struct BoundednessReport {
    std::vector<CriterionReport> criteria;  // B1..B4
    double lower_bound = 0.0;
    double sandwich_ratio = 0.0;  // lower_bound / M(B4)
    bool symbol_little_bloch = false;
    std::string verdict;

    nlohmann::ordered_json to_json() const;
};

// Computes M for all four kinds (restrictions given by the options), the
// dictionary lower bound and its sandwich ratio, and the boundary decay of
// the symbol's weighted radial derivative for the little-space side.
BoundednessReport classify_boundedness(const OperatorSpec& spec,
                                       const ClassifyOptions& opts = {});

struct CompactnessReport {
    bool integral_divergent = false;
    std::vector<CriterionReport> profiles;  // B4 and, when configured, B3
    // ||w||, radial-variant norm of C applied to the truncated test family.
    std::vector<std::pair<double, double>> gamma_family;
    double symbol_norm = 0.0;  // radial-variant norm of psi (convergent case)
    std::string verdict;

    nlohmann::ordered_json to_json() const;
};

// Divergent domain integral: decides from the boundary decay of the
// criterion quantity, with "compact" reserved for maps whose certified image
// radius stays clearly inside the ball and "-consistent" verdicts for trend
// evidence. Convergent: reduces to the symbol's norm in the target space.
CompactnessReport classify_compactness(const OperatorSpec& spec,
                                       const ClassifyOptions& opts = {});

struct NetReport {
    int net_size = 0;
    std::vector<CVec> net;       // greedy farthest-point representatives
    int image_points = 0;        // sampled images inside the radius
    double max_uncovered = 0.0;  // final farthest distance (<= eps)

    nlohmann::ordered_json to_json() const;
};

// Greedy epsilon-net of {phi(y) : ||phi(y)|| < r} over sampled inputs: axis
// rays and random ball points, plus any explicitly supplied inputs. Growing
// net size along a dimension sweep emulates the loss of relative compactness
// in the infinite-dimensional limit.
NetReport epsnet_probe(const holo::SelfMap& phi, double r, double eps,
                       int random_samples, std::uint64_t seed = 0xE7A09EBULL,
                       const std::vector<CVec>& extra_inputs = {});

// Rows "i,j,distance" for all pairs, with a header line.
void write_pairwise_csv(const std::vector<CVec>& points, std::ostream& os);

struct FactorizationReport {
    bool ok = false;
    double max_abs_error = 0.0;
    CVec witness;
    int samples = 0;
};

// Routes f through the rank-one factorization: embed as a k-vector-valued
// function along the first basis vector, apply the operator componentwise,
// read off the first coordinate. Must agree with the scalar path pointwise.
FactorizationReport weak_factorization_check(const OperatorSpec& spec, int k,
                                             int samples,
                                             std::uint64_t seed = 0xFAC70ULL);

struct ChainReport {
    bool ok = false;
    int checked = 0;  // samples with ||phi(z)|| past the unit-integral radius
    int skipped = 0;
    double worst_slack = 0.0;  // max of lhs - rhs (negative when comfortable)
    CVec witness;
};

// At sampled z with w = phi(z) and ||w|| >= r1: verifies
//   mu(z)|R psi(z)| I_nu(||w||) <= (C3/C1) mu(z)|R psi(z)| A(||w||^2) + tol,
// the inequality chain that turns the growth estimate into the criterion
// quantity via the extremal series (A is its antiderivative).
ChainReport proof_chain_check(const OperatorSpec& spec,
                              const testfuncs::GSeries& g,
                              const testfuncs::TestConstants& constants,
                              int samples, std::uint64_t seed = 0xC4A17ULL);

}  // namespace blochlab::cesaro
