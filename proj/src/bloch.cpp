#include "blochlab/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>

#include "blochlab/moebius.hpp"
#include "blochlab/rng.hpp"

namespace blochlab::bloch {

namespace {

// Points are kept strictly inside the ball; the weight is evaluated at the
// norm, which must stay below 1.
constexpr double kBoundRadius = 1.0 - 1e-9;
constexpr double kRejected = -std::numeric_limits<double>::infinity();
constexpr double kInvPhi = 0.6180339887498949;

struct Candidate {
    double value = kRejected;
    CVec point;
};

// Golden-section maximization on [lo, hi]; returns the best probed point.
// Counts evaluations into `evals`.
std::pair<double, double> golden_max(const std::function<double(double)>& g,
                                     double lo, double hi, int iters,
                                     long& evals) {
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = g(x1), f2 = g(x2);
    evals += 2;
    double best_x = f1 >= f2 ? x1 : x2;
    double best_f = std::max(f1, f2);
    for (int it = 0; it < iters; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = g(x2);
            ++evals;
            if (f2 > best_f) { best_f = f2; best_x = x2; }
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = g(x1);
            ++evals;
            if (f1 > best_f) { best_f = f1; best_x = x1; }
        }
    }
    return {best_x, best_f};
}

bool is_standard_weight(const weights::NormalWeight& mu) {
    const auto j = mu.describe();
    return j.value("family", std::string{}) == "power" &&
           j.value("alpha", 0.0) == 1.0;
}

}  // namespace

std::string to_string(Variant v) {
    switch (v) {
        case Variant::gradient: return "gradient";
        case Variant::radial: return "radial";
        case Variant::affine: return "affine";
        case Variant::invariant: return "invariant";
    }
    throw ConsistencyError("unknown variant value");
}

Variant variant_from_string(const std::string& name) {
    if (name == "gradient") return Variant::gradient;
    if (name == "radial") return Variant::radial;
    if (name == "affine") return Variant::affine;
    if (name == "invariant") return Variant::invariant;
    throw ConfigError("unknown seminorm variant \"" + name +
                      "\" (expected gradient, radial, affine or invariant)");
}

SupremumEstimate estimate_sup(const Objective& objective, int dim,
                              const SamplerConfig& cfg,
                              const std::vector<CVec>& extra_seeds) {
    if (dim < 1) throw DomainError("estimate_sup: dimension must be positive");
    if (cfg.shells < 1 || cfg.directions < 1 || cfg.refine_top < 1 ||
        cfg.refine_passes < 0)
        throw ConfigError("estimate_sup: sampler parameters must be positive");

    long evals = 0;
    const auto guarded = [&](const CVec& z) {
        ++evals;
        return norm(z) >= kBoundRadius ? kRejected : objective(z);
    };

    // Candidate pool: keep the best refine_top witnesses, ordered by value.
    std::vector<Candidate> top;
    const auto offer = [&](CVec z, double value) {
        if (value == kRejected) return;
        const std::size_t cap = static_cast<std::size_t>(cfg.refine_top);
        if (top.size() == cap && value <= top.back().value) return;
        const auto pos = std::find_if(top.begin(), top.end(),
                                      [&](const Candidate& c) { return c.value < value; });
        top.insert(pos, Candidate{value, std::move(z)});
        if (top.size() > cap) top.pop_back();
    };

    const CVec origin(dim, Cplx{0.0, 0.0});
    offer(origin, guarded(origin));
    for (const CVec& seed : extra_seeds) {
        if (static_cast<int>(seed.size()) != dim)
            throw ConsistencyError("estimate_sup: extra seed dimension mismatch");
        CVec z = seed;
        const double r = norm(z);
        if (r >= kBoundRadius) z = scaled(z, Cplx{0.999999 * kBoundRadius / r, 0.0});
        offer(z, guarded(z));
    }

    Rng rng(cfg.seed);
    for (int j = 1; j <= cfg.shells; ++j) {
        const double r = 1.0 - std::ldexp(1.0, -j);
        // Coordinate axes and the diagonal catch axis-aligned maxima exactly.
        for (int k = 0; k < std::min(dim, 8); ++k) {
            CVec z(dim, Cplx{0.0, 0.0});
            z[k] = Cplx{r, 0.0};
            offer(z, guarded(z));
        }
        {
            CVec z(dim, Cplx{r / std::sqrt(static_cast<double>(dim)), 0.0});
            offer(z, guarded(z));
        }
        for (int d = 0; d < cfg.directions; ++d) {
            CVec z = scaled(rng.unit_vector(dim), Cplx{r, 0.0});
            offer(z, guarded(z));
        }
    }

    double best_value = top.empty() ? kRejected : top.front().value;
    CVec best_point = top.empty() ? origin : top.front().point;

    double before_last_pass = best_value;
    for (int pass = 0; pass < cfg.refine_passes; ++pass) {
        const double trust = 0.35 * std::ldexp(1.0, -pass);
        if (pass == cfg.refine_passes - 1) before_last_pass = best_value;
        for (Candidate& cand : top) {
            // Real and imaginary parts of every coordinate, then a radial
            // scaling move; each is a 1-d golden-section line search and only
            // improvements are kept.
            for (int c = 0; c < 2 * dim; ++c) {
                const int comp = c / 2;
                const bool real_part = (c % 2 == 0);
                const double center = real_part ? cand.point[comp].real()
                                               : cand.point[comp].imag();
                const auto g = [&](double x) {
                    CVec z = cand.point;
                    z[comp] = real_part ? Cplx{x, z[comp].imag()}
                                        : Cplx{z[comp].real(), x};
                    return guarded(z);
                };
                const auto [x, fx] =
                    golden_max(g, center - trust, center + trust, 28, evals);
                if (fx > cand.value) {
                    cand.value = fx;
                    cand.point[comp] = real_part
                                           ? Cplx{x, cand.point[comp].imag()}
                                           : Cplx{cand.point[comp].real(), x};
                }
            }
            const double r = norm(cand.point);
            if (r > 1e-12) {
                const double hi = std::min(1.0 + trust, kBoundRadius / r);
                const double lo = std::max(0.0, 1.0 - trust);
                const auto g = [&](double s) {
                    return guarded(scaled(cand.point, Cplx{s, 0.0}));
                };
                const auto [s, fs] = golden_max(g, lo, hi, 28, evals);
                if (fs > cand.value) {
                    cand.value = fs;
                    cand.point = scaled(cand.point, Cplx{s, 0.0});
                }
            }
            if (cand.value > best_value) {
                best_value = cand.value;
                best_point = cand.point;
            }
        }
    }

    SupremumEstimate out;
    out.witness = best_value == kRejected ? origin : best_point;
    // Re-evaluate so that value == objective(witness) holds exactly.
    out.value = objective(out.witness);
    out.samples_used = evals;
    out.refinement_passes = cfg.refine_passes;
    out.final_gain =
        best_value > 0.0 && best_value > before_last_pass
            ? (best_value - before_last_pass) / best_value
            : 0.0;
    return out;
}

namespace {

// Core pointwise values, preconditions already validated.
double objective_value(const holo::Function& f, const weights::NormalWeight& mu,
                       Variant variant, const CVec& z) {
    switch (variant) {
        case Variant::gradient:
            return mu(norm(z)) * norm(f.gradient(z));
        case Variant::radial:
            return mu(norm(z)) * std::abs(f.radial(z));
        case Variant::affine: {
            const double r = norm(z);
            if (r == 0.0) return mu(0.0) * norm(f.gradient(z));
            return mu(r) * std::abs(f.radial(z)) / r;
        }
        case Variant::invariant:
            return moebius::invariant_gradient(f, z);
    }
    throw ConsistencyError("unknown variant value");
}

void validate_variant(const weights::NormalWeight& mu, Variant variant) {
    if (variant == Variant::invariant && !is_standard_weight(mu))
        throw DomainError(
            "invariant seminorm is only defined for the weight 1 - t^2");
}

}  // namespace

double seminorm_objective(const holo::Function& f,
                          const weights::NormalWeight& mu, Variant variant,
                          const CVec& z) {
    validate_variant(mu, variant);
    if (static_cast<int>(z.size()) != f.dim())
        throw ConsistencyError("seminorm_objective: dimension mismatch");
    if (norm(z) >= 1.0) throw DomainError("seminorm_objective: point outside ball");
    return objective_value(f, mu, variant, z);
}

SupremumEstimate seminorm(const holo::Function& f,
                          const weights::NormalWeight& mu, Variant variant,
                          const SamplerConfig& cfg,
                          const std::vector<CVec>& extra_seeds) {
    validate_variant(mu, variant);
    const auto obj = [&](const CVec& z) {
        return objective_value(f, mu, variant, z);
    };
    return estimate_sup(obj, f.dim(), cfg, extra_seeds);
}

double bloch_norm(const holo::Function& f, const weights::NormalWeight& mu,
                  Variant variant, const SamplerConfig& cfg) {
    const CVec origin(f.dim(), Cplx{0.0, 0.0});
    return std::abs(f.value(origin)) + seminorm(f, mu, variant, cfg).value;
}

std::vector<double> geometric_radii(int shells) {
    if (shells < 1) throw DomainError("geometric_radii: shells must be positive");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(shells));
    for (int j = 1; j <= shells; ++j) out.push_back(1.0 - std::ldexp(1.0, -j));
    return out;
}

DecayProfile decay_profile(const holo::Function& f,
                           const weights::NormalWeight& mu,
                           const std::vector<double>& radii) {
    if (radii.empty()) throw DomainError("decay_profile: radii must be non-empty");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] < 0.0 || radii[i] > 1.0 - weights::kEdgeGuard)
            throw DomainError("decay_profile: radius outside [0, 1 - 1e-6]");
        if (i > 0 && radii[i] <= radii[i - 1])
            throw DomainError("decay_profile: radii must be strictly increasing");
    }
    const int dim = f.dim();
    Rng rng(0xDECA11ULL);
    std::vector<CVec> directions;
    for (int k = 0; k < dim; ++k) {
        CVec e(dim, Cplx{0.0, 0.0});
        e[k] = Cplx{1.0, 0.0};
        directions.push_back(std::move(e));
    }
    for (int d = 0; d < 512; ++d) directions.push_back(rng.unit_vector(dim));

    DecayProfile out;
    out.radii = radii;
    out.values.reserve(radii.size());
    for (const double r : radii) {
        double best = 0.0;
        const double w = mu(r);
        for (const CVec& u : directions)
            best = std::max(best, w * std::abs(f.radial(scaled(u, Cplx{r, 0.0}))));
        out.values.push_back(best);
    }
    out.peak = *std::max_element(out.values.begin(), out.values.end());
    if (out.peak == 0.0) {
        out.little_bloch = true;
        return out;
    }
    bool tail_ok = true;
    const std::size_t n = out.values.size();
    const std::size_t steps = std::min<std::size_t>(kLittleBlochTail, n - 1);
    for (std::size_t s = 0; s < steps; ++s) {
        const std::size_t i = n - 1 - s;
        if (out.values[i] > out.values[i - 1] * (1.0 + 1e-9)) tail_ok = false;
    }
    out.little_bloch = tail_ok && out.values.back() < kLittleBlochRatio * out.peak;
    return out;
}

void write_decay_csv(const DecayProfile& profile, std::ostream& os) {
    os << "radius,value\n";
    char buf[80];
    for (std::size_t i = 0; i < profile.radii.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", profile.radii[i],
                      profile.values[i]);
        os << buf;
    }
}

namespace {

GrowthReport growth_round(const holo::Function& f,
                          const weights::NormalWeight& mu, double s,
                          const std::vector<CVec>& points) {
    GrowthReport rep;
    rep.seminorm_used = s;
    rep.samples = static_cast<int>(points.size());
    const CVec origin(f.dim(), Cplx{0.0, 0.0});
    const double f0 = std::abs(f.value(origin));
    double worst = -std::numeric_limits<double>::infinity();
    for (const CVec& z : points) {
        const double bound = f0 + weights::integral_reciprocal(mu, norm(z)) * s;
        const double excess = std::abs(f.value(z)) - bound;
        if (excess > worst) {
            worst = excess;
            rep.witness = z;
        }
    }
    rep.worst_excess = worst;
    rep.ok = worst <= 1e-8;
    return rep;
}

std::vector<CVec> growth_points(int dim, int samples, std::uint64_t seed) {
    if (samples < 1) throw DomainError("growth_check: samples must be positive");
    Rng rng(seed);
    std::vector<CVec> points;
    points.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        if (i % 2 == 0) {
            const int j = 1 + (i / 2) % 12;
            const double r = 1.0 - std::ldexp(1.0, -j);
            points.push_back(scaled(rng.unit_vector(dim), Cplx{r, 0.0}));
        } else {
            points.push_back(rng.ball_point(dim, 0.999));
        }
    }
    return points;
}

}  // namespace

GrowthReport growth_check(const holo::Function& f,
                          const weights::NormalWeight& mu,
                          double seminorm_value, int samples,
                          std::uint64_t seed) {
    const auto points = growth_points(f.dim(), samples, seed);
    GrowthReport rep = growth_round(f, mu, seminorm_value, points);
    if (rep.ok) return rep;
    // The bound failed, which means the seminorm estimate missed the peak
    // along some ray. Reseed the search on the ray of the worst witness and
    // try once more with the sharper estimate.
    std::vector<CVec> ray;
    for (int k = 1; k <= 8; ++k)
        ray.push_back(scaled(rep.witness, Cplx{k / 8.0, 0.0}));
    const double refined =
        seminorm(f, mu, Variant::gradient, SamplerConfig{}, ray).value;
    GrowthReport second =
        growth_round(f, mu, std::max(seminorm_value, refined), points);
    second.rounds = 2;
    return second;
}

GrowthReport growth_check(const holo::Function& f,
                          const weights::NormalWeight& mu, int samples,
                          std::uint64_t seed) {
    const double s = seminorm(f, mu, Variant::gradient).value;
    return growth_check(f, mu, s, samples, seed);
}

double growth_seminorm_floor(const holo::Function& f,
                             const weights::NormalWeight& mu, const CVec& w) {
    const double r = norm(w);
    if (r == 0.0) return 0.0;
    if (r >= 1.0) throw DomainError("growth_seminorm_floor: point outside ball");
    const double denom = weights::integral_reciprocal(mu, r);
    if (denom <= 0.0) return 0.0;
    const CVec origin(f.dim(), Cplx{0.0, 0.0});
    const double gap = std::abs(f.value(w)) - std::abs(f.value(origin));
    return std::max(0.0, gap) / denom;
}

namespace {

// Gram-Schmidt completion of the given directions to k orthonormal vectors,
// padded with random draws; returns nothing when the input directions are
// degenerate.
std::optional<holo::OrthonormalSystem> spanned_system(
    int dim, int k, const std::vector<CVec>& directions, Rng& rng) {
    std::vector<CVec> basis;
    std::size_t next_given = 0;
    int random_budget = 4 * k;
    while (static_cast<int>(basis.size()) < k) {
        CVec v;
        const bool given = next_given < directions.size();
        if (given)
            v = directions[next_given++];
        else if (random_budget-- > 0)
            v = rng.unit_vector(dim);
        else
            return std::nullopt;
        for (int pass = 0; pass < 2; ++pass)
            for (const CVec& b : basis) {
                const Cplx c = inner(v, b);
                for (std::size_t j = 0; j < v.size(); ++j) v[j] -= c * b[j];
            }
        const double n = norm(v);
        if (n < (given ? 1e-8 : 1e-3)) {
            if (given) continue;  // collinear with earlier directions
            continue;
        }
        for (Cplx& c : v) c /= n;
        basis.push_back(std::move(v));
    }
    if (basis.empty()) return std::nullopt;
    return holo::OrthonormalSystem(dim, std::move(basis));
}

}  // namespace

RestrictionReport restriction_sup_check(const holo::PolyFunction& f,
                                        const weights::NormalWeight& mu, int k,
                                        int systems, const SamplerConfig& cfg) {
    if (k < 2 || k > f.dim())
        throw DomainError("restriction_sup_check: need 2 <= k <= dim");
    if (systems < 1)
        throw DomainError("restriction_sup_check: need at least one system");

    const SupremumEstimate first = seminorm(f, mu, Variant::gradient, cfg);

    Rng rng(cfg.seed + 0x52535953ULL);
    RestrictionReport rep;
    rep.per_system.reserve(static_cast<std::size_t>(systems));
    std::vector<CVec> embedded;
    embedded.push_back(first.witness);
    for (int i = 0; i < systems; ++i) {
        std::optional<holo::OrthonormalSystem> sys;
        std::vector<CVec> slice_seeds;
        if (i == 0 && norm(first.witness) > 1e-12) {
            // Witness-aligned slice: the span of the witness direction and
            // the conjugate gradient direction there is the slice on which
            // the ambient supremum is attained, so one sampled system always
            // aims at it; the rest stay random.
            CVec grad_dir = f.gradient(first.witness);
            for (Cplx& c : grad_dir) c = std::conj(c);
            sys = spanned_system(f.dim(), k, {first.witness, grad_dir}, rng);
            if (sys) {
                CVec u(static_cast<std::size_t>(k), Cplx{0.0, 0.0});
                for (int j = 0; j < k; ++j)
                    u[static_cast<std::size_t>(j)] =
                        inner(first.witness, sys->vec(j));
                slice_seeds.push_back(std::move(u));
            }
        }
        if (!sys) sys = holo::OrthonormalSystem::random(f.dim(), k, rng);
        const holo::PolyFunction fr = restrict(f, *sys);
        const SupremumEstimate est =
            seminorm(fr, mu, Variant::gradient, cfg, slice_seeds);
        rep.per_system.push_back(est.value);
        embedded.push_back(sys->embed(est.witness));
        if (est.value > rep.restricted_max) {
            rep.restricted_max = est.value;
            rep.best_system = i;
        }
    }

    // Ambient gradients dominate restricted ones at embedded points, so
    // reseeding the ambient search with the restricted witnesses guarantees
    // restricted_max <= direct up to floating-point noise.
    const SupremumEstimate second =
        seminorm(f, mu, Variant::gradient, cfg, embedded);
    rep.direct = std::max(first.value, second.value);
    rep.ratio = rep.direct < 1e-300 && rep.restricted_max < 1e-300
                    ? 1.0
                    : rep.restricted_max / rep.direct;
    rep.ok = rep.ratio >= 0.95 && rep.ratio <= 1.0 + 1e-9;
    return rep;
}

}  // namespace blochlab::bloch
