// Polynomial maps on the finite-dimensional unit ball: coefficient tables
// indexed by multi-indices, directional structure (gradient, radial
// derivative, homogeneous grading), composition, restriction to orthonormal
// slices, and certified polynomial self-maps of the ball.
#pragma once

#include <map>
#include <vector>

#include <json.hpp>

#include "blochlab/common.hpp"
#include "blochlab/rng.hpp"

namespace blochlab::holo {

using MultiIndex = std::vector<unsigned>;

unsigned total_degree(const MultiIndex& a);

// Minimal interface the norm machinery needs from a holomorphic function.
struct Function {
    virtual ~Function() = default;
    virtual int dim() const = 0;
    virtual Cplx value(const CVec& z) const = 0;
    virtual CVec gradient(const CVec& z) const = 0;
    // Radial derivative sum_k z_k d_k f(z); the default contracts the
    // gradient, concrete classes may provide an independent path.
    virtual Cplx radial(const CVec& z) const;
};

// Polynomial with complex coefficients; zero coefficients are never stored.
class PolyFunction : public Function {
  public:
    explicit PolyFunction(int dim);

    static PolyFunction constant(int dim, Cplx c);
    static PolyFunction coordinate(int dim, int k);
    static PolyFunction monomial(int dim, MultiIndex a, Cplx c);

    int dim() const override { return dim_; }
    const std::map<MultiIndex, Cplx>& terms() const { return terms_; }
    int term_count() const { return static_cast<int>(terms_.size()); }
    unsigned degree() const;  // 0 for the zero polynomial
    bool is_zero() const { return terms_.empty(); }

    Cplx coefficient(const MultiIndex& a) const;
    void set_coefficient(const MultiIndex& a, Cplx c);

    Cplx value(const CVec& z) const override { return evaluate(z); }
    Cplx evaluate(const CVec& z) const;
    CVec gradient(const CVec& z) const override;
    // Direct evaluation of sum |a| c_a z^a, not routed through the gradient.
    Cplx radial(const CVec& z) const override;

    PolyFunction partial(int k) const;
    PolyFunction radial_derivative() const;
    std::map<unsigned, PolyFunction> homogeneous_parts() const;

    PolyFunction operator+(const PolyFunction& o) const;
    PolyFunction operator-(const PolyFunction& o) const;
    PolyFunction operator*(const PolyFunction& o) const;
    PolyFunction operator*(Cplx s) const;

    nlohmann::ordered_json to_json() const;
    static PolyFunction from_json(const nlohmann::json& j);

  private:
    int dim_;
    std::map<MultiIndex, Cplx> terms_;

    void max_exponents(std::vector<unsigned>& out) const;
    friend PolyFunction compose(const PolyFunction&, const std::vector<PolyFunction>&, unsigned);
};

inline constexpr unsigned kDegreeCap = 64;

// f after substituting components[j] for coordinate j. Throws TruncationError
// when the degree bound deg(f) * max_j deg(components[j]) exceeds the cap.
PolyFunction compose(const PolyFunction& f,
                     const std::vector<PolyFunction>& components,
                     unsigned degree_cap = kDegreeCap);

// Orthonormal vectors in C^ambient_dim; construction verifies the pairwise
// inner products to 1e-12.
class OrthonormalSystem {
  public:
    OrthonormalSystem(int ambient_dim, std::vector<CVec> vectors);
    static OrthonormalSystem coordinate_axes(int ambient_dim,
                                             const std::vector<int>& which);
    static OrthonormalSystem random(int ambient_dim, int count, Rng& rng);

    int ambient_dim() const { return ambient_dim_; }
    int count() const { return static_cast<int>(vectors_.size()); }
    const CVec& vec(int j) const { return vectors_[j]; }

    // sum_j u_j x_j as a point of the ambient space.
    CVec embed(const CVec& u) const;

  private:
    int ambient_dim_;
    std::vector<CVec> vectors_;
};

// f on the slice spanned by the system: u maps to f(sum_j u_j x_j).
PolyFunction restrict(const PolyFunction& f, const OrthonormalSystem& x);

// Polynomial self-map of the unit ball. Construction certifies by sampling
// (boundary-biased shells plus uniform volume points) that every image stays
// inside the ball, and records the largest image norm seen, which is a lower
// bound for the true range supremum.
class SelfMap {
  public:
    static constexpr std::uint64_t kCertSeed = 0x5E1FCAFEu;

    explicit SelfMap(std::vector<PolyFunction> components,
                     int cert_samples = 10000,
                     std::uint64_t cert_seed = kCertSeed);

    int dim() const { return static_cast<int>(components_.size()); }
    const std::vector<PolyFunction>& components() const { return components_; }
    CVec apply(const CVec& z) const;
    double range_sup() const { return range_sup_; }
    bool fixes_origin() const { return fixes_origin_; }

    nlohmann::ordered_json to_json() const;
    static SelfMap from_json(const nlohmann::json& j);

  private:
    std::vector<PolyFunction> components_;
    double range_sup_ = 0.0;
    bool fixes_origin_ = false;
};

struct SchwarzReport {
    bool ok = false;
    double worst_excess = 0.0;  // max of ||phi(z)|| - ||z||
    CVec witness;
};

// For origin-fixing self-maps, samples the contraction bound
// ||phi(z)|| <= ||z|| + 1e-10. Non-origin-fixing input is a domain error.
SchwarzReport schwarz_check(const SelfMap& phi, int samples = 10000,
                            std::uint64_t seed = 0x5C4A0857u);

// Deterministic generators used by tests and experiment drivers.
PolyFunction random_polynomial(Rng& rng, int dim, unsigned max_degree,
                               double keep_probability = 0.4);
// Coefficients are scaled so that sum of absolute coefficient norms keeps the
// image inside radius `margin` of the ball; origin is fixed.
SelfMap random_selfmap(Rng& rng, int dim, unsigned max_degree,
                       double margin = 0.9);

// Complex vectors as JSON arrays of [re, im] pairs.
nlohmann::ordered_json cvec_to_json(const CVec& z);
CVec cvec_from_json(const nlohmann::json& j);

}  // namespace blochlab::holo
