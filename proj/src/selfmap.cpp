#include <cmath>
#include <sstream>

#include "blochlab/holo.hpp"

namespace blochlab::holo {

namespace {

// Boundary-biased sample stream: geometric shells approaching the sphere,
// then uniform volume points. Used for both certification and the Schwarz
// bound so results depend only on (dim, count, seed).
template <typename Visit>
void sample_ball(int dim, int count, std::uint64_t seed, const Visit& visit) {
    Rng rng(seed);
    const int shells = 16;
    const int per_shell = std::max(1, count / (2 * shells));
    int used = 0;
    for (int j = 1; j <= shells && used < count; ++j) {
        const double r = 1.0 - std::pow(2.0, -j);
        for (int i = 0; i < per_shell && used < count; ++i, ++used) {
            CVec z = rng.unit_vector(dim);
            for (auto& c : z) c *= r;
            visit(z);
        }
    }
    for (; used < count; ++used) visit(rng.ball_point(dim, 1.0));
}

}  // namespace

SelfMap::SelfMap(std::vector<PolyFunction> components, int cert_samples,
                 std::uint64_t cert_seed)
    : components_(std::move(components)) {
    if (components_.empty()) throw DomainError("self-map: no components");
    const int d = static_cast<int>(components_.size());
    for (const auto& c : components_)
        if (c.dim() != d)
            throw ConsistencyError(
                "self-map: component dimension must equal component count");
    if (cert_samples < 100) throw DomainError("self-map: too few certification samples");

    const CVec origin(d, Cplx{0.0, 0.0});
    fixes_origin_ = norm(apply(origin)) <= 1e-14;

    double worst = 0.0;
    CVec worst_z;
    sample_ball(d, cert_samples, cert_seed, [&](const CVec& z) {
        const double n = norm(apply(z));
        if (n > worst) {
            worst = n;
            worst_z = z;
        }
    });
    if (worst >= 1.0) {
        std::ostringstream msg;
        msg << "self-map: image norm " << worst << " at sampled point of norm "
            << norm(worst_z) << " leaves the unit ball";
        throw RangeError(msg.str());
    }
    range_sup_ = worst;
}

CVec SelfMap::apply(const CVec& z) const {
    CVec out(components_.size());
    for (std::size_t k = 0; k < components_.size(); ++k)
        out[k] = components_[k].evaluate(z);
    return out;
}

nlohmann::ordered_json SelfMap::to_json() const {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : components_) arr.push_back(c.to_json());
    return arr;
}

SelfMap SelfMap::from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty())
        throw ConfigError("self-map: expected a non-empty array of components");
    std::vector<PolyFunction> comps;
    for (const auto& c : j) comps.push_back(PolyFunction::from_json(c));
    return SelfMap(std::move(comps));
}

SchwarzReport schwarz_check(const SelfMap& phi, int samples, std::uint64_t seed) {
    if (!phi.fixes_origin())
        throw DomainError("schwarz_check: map must fix the origin");
    SchwarzReport rep;
    rep.worst_excess = -1.0;
    sample_ball(phi.dim(), samples, seed, [&](const CVec& z) {
        const double excess = norm(phi.apply(z)) - norm(z);
        if (excess > rep.worst_excess) {
            rep.worst_excess = excess;
            rep.witness = z;
        }
    });
    rep.ok = rep.worst_excess <= 1e-10;
    return rep;
}

PolyFunction random_polynomial(Rng& rng, int dim, unsigned max_degree,
                               double keep_probability) {
    PolyFunction p(dim);
    MultiIndex a(dim, 0);
    // Walk all multi-indices of total degree <= max_degree in lexicographic
    // order, keeping a sparse subset with degree-damped coefficients.
    const auto advance = [&a, dim, max_degree]() -> bool {
        for (int j = dim - 1; j >= 0; --j) {
            ++a[j];
            if (total_degree(a) <= max_degree) return true;
            a[j] = 0;
        }
        return false;
    };
    do {
        if (rng.uniform01() < keep_probability) {
            const double damp = std::pow(2.0, -0.5 * total_degree(a));
            p.set_coefficient(a, damp * rng.complex_normal());
        }
    } while (advance());
    if (p.is_zero()) p.set_coefficient(MultiIndex(dim, 0), Cplx{1.0, 0.0});
    return p;
}

SelfMap random_selfmap(Rng& rng, int dim, unsigned max_degree, double margin) {
    if (!(margin > 0.0) || margin >= 1.0)
        throw DomainError("random_selfmap: margin must lie in (0,1)");
    std::vector<PolyFunction> comps;
    double row_sq = 0.0;
    for (int k = 0; k < dim; ++k) {
        PolyFunction p = random_polynomial(rng, dim, max_degree, 0.5);
        p.set_coefficient(MultiIndex(dim, 0), Cplx{0.0, 0.0});
        if (p.is_zero()) p = PolyFunction::coordinate(dim, k) * Cplx{0.5, 0.0};
        double abs_sum = 0.0;
        for (const auto& [a, c] : p.terms()) abs_sum += std::abs(c);
        row_sq += abs_sum * abs_sum;
        comps.push_back(std::move(p));
    }
    // sum_j |c_{k,j}| bounds each |phi_k| on the closed ball, so scaling the
    // row norms to `margin` certifies range containment analytically.
    const double scale = margin / std::sqrt(row_sq);
    for (auto& p : comps) p = p * Cplx{scale, 0.0};
    return SelfMap(std::move(comps));
}

}  // namespace blochlab::holo
