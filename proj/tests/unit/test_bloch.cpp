#include <cmath>
#include <sstream>

#include <doctest.h>

#include "blochlab/bloch.hpp"
#include "blochlab/moebius.hpp"
#include "blochlab/rng.hpp"
#include "blochlab/weights.hpp"

using namespace blochlab;
using namespace blochlab::bloch;

namespace {

const double kRadialPeak = 2.0 / (3.0 * std::sqrt(3.0));  // max of (1-r^2) r

holo::PolyFunction identity_1d() { return holo::PolyFunction::coordinate(1, 0); }

holo::PolyFunction square_1d() {
    return holo::PolyFunction::coordinate(1, 0) * holo::PolyFunction::coordinate(1, 0);
}

SamplerConfig small_config() {
    SamplerConfig cfg;
    cfg.shells = 10;
    cfg.directions = 128;
    cfg.refine_passes = 2;
    cfg.refine_top = 4;
    return cfg;
}

}  // namespace

TEST_SUITE_BEGIN("bloch");

TEST_CASE("variant names round trip") {
    for (const auto v : {Variant::gradient, Variant::radial, Variant::affine,
                         Variant::invariant})
        CHECK(variant_from_string(to_string(v)) == v);
    CHECK_THROWS_AS(variant_from_string("euclidean"), ConfigError);
}

TEST_CASE("estimate_sup finds interior and origin maxima") {
    const auto bump = [](const CVec& z) { return 1.0 - norm_sq(z); };
    const auto est = estimate_sup(bump, 2);
    CHECK(est.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(norm(est.witness) < 1e-9);
    CHECK(est.samples_used > 5000);
    // The reported value is always the objective at the witness.
    CHECK(est.value == bump(est.witness));

    const auto ridge = [](const CVec& z) {
        const double r = norm(z);
        return (1.0 - r * r) * r;
    };
    const auto est2 = estimate_sup(ridge, 1);
    CHECK(est2.value == doctest::Approx(kRadialPeak).epsilon(1e-8));
    CHECK(norm(est2.witness) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-4));
}

TEST_CASE("estimate_sup honors extra seeds") {
    // A needle the shell sweep cannot see: nonzero only within 1e-4 of p.
    const CVec p{Cplx{0.123456, 0.0}, Cplx{0.0, -0.654321}};
    const auto needle = [&](const CVec& z) {
        const double d = dist(z, p);
        return d < 1e-4 ? 1.0 - d : 0.0;
    };
    SamplerConfig cfg;
    cfg.refine_passes = 0;
    const auto blind = estimate_sup(needle, 2, cfg);
    CHECK(blind.value < 0.5);
    const auto seeded = estimate_sup(needle, 2, cfg, {p});
    CHECK(seeded.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(estimate_sup(needle, 2, cfg, {CVec{Cplx{0.1, 0.0}}}),
                    ConsistencyError);
}

TEST_CASE("seminorm oracles in one variable") {
    const auto mu = weights::NormalWeight::power(1.0);
    const auto f = identity_1d();

    CHECK(seminorm(f, mu, Variant::gradient).value ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(seminorm(f, mu, Variant::radial).value ==
          doctest::Approx(kRadialPeak).epsilon(1e-8));
    CHECK(seminorm(f, mu, Variant::affine).value ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(seminorm(f, mu, Variant::invariant).value ==
          doctest::Approx(1.0).epsilon(1e-8));

    const auto g = square_1d();
    CHECK(seminorm(g, mu, Variant::gradient).value ==
          doctest::Approx(2.0 * kRadialPeak).epsilon(1e-8));
    CHECK(seminorm(g, mu, Variant::radial).value ==
          doctest::Approx(0.5).epsilon(1e-8));
    CHECK(seminorm(g, mu, Variant::affine).value ==
          doctest::Approx(2.0 * kRadialPeak).epsilon(1e-8));

    holo::PolyFunction c(1);
    c.set_coefficient({0}, Cplx{2.5, -1.0});
    for (const auto v : {Variant::gradient, Variant::radial, Variant::affine,
                         Variant::invariant})
        CHECK(seminorm(c, mu, v).value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("seminorm oracles in two variables") {
    // f(z) = z1 z2: gradient norm on the shell r is r itself, the radial
    // derivative peaks on the diagonal.
    const auto mu = weights::NormalWeight::power(1.0);
    holo::PolyFunction f(2);
    f.set_coefficient({1, 1}, Cplx{1.0, 0.0});

    CHECK(seminorm(f, mu, Variant::gradient).value ==
          doctest::Approx(kRadialPeak).epsilon(1e-8));
    // Direction-sensitive objectives converge to ~1e-7 with the default
    // refinement budget; the estimate approaches from below.
    const double rad = seminorm(f, mu, Variant::radial).value;
    CHECK(rad == doctest::Approx(0.25).epsilon(1e-5));
    CHECK(rad <= 0.25);
    const double aff = seminorm(f, mu, Variant::affine).value;
    CHECK(aff == doctest::Approx(kRadialPeak).epsilon(1e-5));
    CHECK(aff <= kRadialPeak);
}

TEST_CASE("bloch_norm adds the value at the origin") {
    const auto mu = weights::NormalWeight::power(1.0);
    holo::PolyFunction one(2);
    one.set_coefficient({0, 0}, Cplx{1.0, 0.0});
    for (const auto v : {Variant::gradient, Variant::radial, Variant::affine,
                         Variant::invariant})
        CHECK(bloch_norm(one, mu, v) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(bloch_norm(identity_1d(), mu, Variant::gradient) ==
          doctest::Approx(1.0).epsilon(1e-12));

    holo::PolyFunction c(1);
    c.set_coefficient({0}, Cplx{3.0, -4.0});
    CHECK(bloch_norm(c, mu, Variant::radial) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("invariant variant is tied to the standard weight") {
    const auto mu_half = weights::NormalWeight::power(0.5);
    CHECK_THROWS_AS(seminorm(identity_1d(), mu_half, Variant::invariant),
                    DomainError);
    CHECK_THROWS_AS(
        seminorm_objective(identity_1d(), mu_half, Variant::invariant,
                           CVec{Cplx{0.1, 0.0}}),
        DomainError);
}

TEST_CASE("invariant objective dominates the gradient objective") {
    const auto mu = weights::NormalWeight::power(1.0);
    Rng rng(991);
    const holo::PolyFunction f = holo::random_polynomial(rng, 2, 4);
    for (int i = 0; i < 50; ++i) {
        const CVec z = rng.ball_point(2, 0.9);
        const double grad = seminorm_objective(f, mu, Variant::gradient, z);
        const double inv = seminorm_objective(f, mu, Variant::invariant, z);
        CHECK(inv + 1e-8 >= grad);
    }
}

TEST_CASE("norm chain radial <= gradient <= 2 sqrt(2) R_mu affine") {
    Rng rng(1717);
    for (const double alpha : {1.0, 0.5}) {
        const auto mu = weights::NormalWeight::power(alpha);
        const double rmu = weights::r_mu_constant(mu);
        const auto cfg = small_config();
        for (int trial = 0; trial < 4; ++trial) {
            const int dim = 1 + trial % 3;
            const holo::PolyFunction f = holo::random_polynomial(rng, dim, 4);
            const CVec origin(dim, Cplx{0.0, 0.0});
            const double f0 = std::abs(f.value(origin));

            const auto rad = seminorm(f, mu, Variant::radial, cfg);
            const auto grad =
                seminorm(f, mu, Variant::gradient, cfg, {rad.witness});
            const auto aff = seminorm(f, mu, Variant::affine, cfg,
                                      {rad.witness, grad.witness});
            CAPTURE(alpha);
            CAPTURE(trial);
            CHECK(f0 + rad.value <= (f0 + grad.value) * (1.0 + 1e-9));
            CHECK(f0 + grad.value <=
                  2.0 * std::sqrt(2.0) * rmu * (f0 + aff.value) * 1.02);
        }
    }
}

TEST_CASE("gradient norm stays below invariant norm for the standard weight") {
    const auto mu = weights::NormalWeight::power(1.0);
    const auto cfg = small_config();
    Rng rng(2727);
    for (int trial = 0; trial < 3; ++trial) {
        const holo::PolyFunction f = holo::random_polynomial(rng, 2, 3);
        const auto grad = seminorm(f, mu, Variant::gradient, cfg);
        const auto inv = seminorm(f, mu, Variant::invariant, cfg, {grad.witness});
        CHECK(grad.value <= inv.value * (1.0 + 1e-7) + 1e-12);
    }
}

TEST_CASE("radial objective is dominated by gradient times radius") {
    const auto mu = weights::NormalWeight::power(0.5);
    Rng rng(3434);
    const holo::PolyFunction f = holo::random_polynomial(rng, 3, 5);
    for (int i = 0; i < 200; ++i) {
        const CVec z = rng.ball_point(3, 0.98);
        const double lhs = seminorm_objective(f, mu, Variant::radial, z);
        const double rhs = seminorm_objective(f, mu, Variant::gradient, z) * norm(z);
        CHECK(lhs <= rhs + 1e-12);
    }
}

TEST_CASE("weighted point bound from the radial norm") {
    Rng rng(4545);
    for (const double alpha : {1.0, 2.0}) {
        const auto mu = weights::NormalWeight::power(alpha);
        const double big_m = weights::r_mu_details(mu).big_m_mu;
        const auto cfg = small_config();
        for (int trial = 0; trial < 3; ++trial) {
            const holo::PolyFunction f = holo::random_polynomial(rng, 2, 4);
            const auto lhs = estimate_sup(
                [&](const CVec& z) { return mu(norm(z)) * std::abs(f.value(z)); },
                2, cfg);
            const CVec origin(2, Cplx{0.0, 0.0});
            const double f0 = std::abs(f.value(origin));
            const auto rad =
                seminorm(f, mu, Variant::radial, cfg, {lhs.witness});
            CAPTURE(alpha);
            CAPTURE(trial);
            CHECK(lhs.value <=
                  std::max(1.0, big_m) * (f0 + rad.value) * 1.02);
        }
    }
}

TEST_CASE("decay profiles and the little-Bloch rule") {
    const auto mu = weights::NormalWeight::power(1.0);
    Rng rng(5656);
    const holo::PolyFunction f = holo::random_polynomial(rng, 2, 4);
    const auto prof = decay_profile(f, mu, geometric_radii(14));
    REQUIRE(prof.radii.size() == 14);
    REQUIRE(prof.values.size() == 14);
    CHECK(prof.little_bloch);
    CHECK(prof.values.back() < kLittleBlochRatio * prof.peak);

    holo::PolyFunction c(2);
    c.set_coefficient({0, 0}, Cplx{7.0, 0.0});
    const auto flat = decay_profile(c, mu, geometric_radii(6));
    CHECK(flat.peak == 0.0);
    CHECK(flat.little_bloch);

    // A weight with no boundary decay keeps mu(r)|Rf| near 1 for f(z) = z.
    const auto table = weights::NormalWeight::table(
        {{0.0, 1.0}, {0.5, 1.0}, {0.999999, 1.0}}, 0.0, 0.5, 2.0, true, 0.0);
    const auto stuck = decay_profile(identity_1d(), table, geometric_radii(14));
    CHECK(stuck.values.back() > 0.999);
    CHECK_FALSE(stuck.little_bloch);
}

TEST_CASE("decay profile input validation") {
    const auto mu = weights::NormalWeight::power(1.0);
    const auto f = identity_1d();
    CHECK_THROWS_AS(decay_profile(f, mu, {}), DomainError);
    CHECK_THROWS_AS(decay_profile(f, mu, {0.5, 0.5}), DomainError);
    CHECK_THROWS_AS(decay_profile(f, mu, {0.5, 0.9999995}), DomainError);
}

TEST_CASE("decay profile CSV export") {
    const auto mu = weights::NormalWeight::power(1.0);
    const auto prof = decay_profile(identity_1d(), mu, {0.5, 0.75});
    std::ostringstream os;
    write_decay_csv(prof, os);
    CHECK(os.str() == "radius,value\n0.5,0.375\n0.75,0.328125\n");
}

TEST_CASE("growth bound holds with the gradient seminorm") {
    const auto mu = weights::NormalWeight::power(1.0);
    const auto rep = growth_check(identity_1d(), mu, 400);
    CHECK(rep.ok);
    CHECK(rep.samples == 400);
    CHECK(rep.seminorm_used == doctest::Approx(1.0).epsilon(1e-10));

    Rng rng(6767);
    for (int trial = 0; trial < 3; ++trial) {
        const holo::PolyFunction f = holo::random_polynomial(rng, 2, 4);
        const auto r = growth_check(f, mu, 500);
        CAPTURE(trial);
        CHECK(r.ok);
    }

    holo::PolyFunction c(1);
    c.set_coefficient({0}, Cplx{0.0, 2.0});
    const auto flat = growth_check(c, mu, 100);
    CHECK(flat.ok);
    CHECK(flat.worst_excess == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("growth floor recovers a seminorm lower bound") {
    const auto mu = weights::NormalWeight::power(1.0);
    const auto f = identity_1d();
    // (0.5 - 0) / atanh(0.5)
    CHECK(growth_seminorm_floor(f, mu, CVec{Cplx{0.5, 0.0}}) ==
          doctest::Approx(0.910239226626837).epsilon(1e-10));
    CHECK(growth_seminorm_floor(f, mu, CVec{Cplx{0.0, 0.0}}) == 0.0);

    Rng rng(7878);
    const holo::PolyFunction g = holo::random_polynomial(rng, 2, 4);
    const double est = seminorm(g, mu, Variant::gradient).value;
    for (int i = 0; i < 20; ++i) {
        const CVec w = rng.ball_point(2, 0.95);
        CHECK(growth_seminorm_floor(g, mu, w) <= est * 1.05 + 1e-12);
    }
}

TEST_CASE("restriction suprema approach the ambient seminorm from below") {
    const auto mu = weights::NormalWeight::power(1.0);
    Rng rng(8989);
    const holo::PolyFunction f = holo::random_polynomial(rng, 3, 4);
    const auto rep = restriction_sup_check(f, mu, 2, 24, small_config());
    REQUIRE(rep.per_system.size() == 24);
    CHECK(rep.best_system >= 0);
    CHECK(rep.ratio <= 1.0 + 1e-9);
    CHECK(rep.ratio >= 0.95);
    CHECK(rep.ok);

    CHECK_THROWS_AS(restriction_sup_check(f, mu, 1, 4), DomainError);
    CHECK_THROWS_AS(restriction_sup_check(f, mu, 4, 4), DomainError);
}

TEST_CASE("the witness-aligned slice carries the capture on its own") {
    // A product of three coordinates peaks along the main diagonal; a single
    // extra random slice in C^3 essentially never contains it, so a high
    // capture with systems = 2 is evidence that the aligned slice works.
    const auto mu = weights::NormalWeight::power(1.0);
    holo::PolyFunction f(3);
    f.set_coefficient({1u, 1u, 1u}, Cplx{1.0, 0.0});
    f.set_coefficient({2u, 0u, 0u}, Cplx{0.0, 0.4});
    const auto rep = restriction_sup_check(f, mu, 2, 2, small_config());
    CHECK(rep.ratio >= 0.98);
    CHECK(rep.best_system == 0);
    CHECK(rep.ok);
}

TEST_SUITE_END();
