#include <cmath>

#include <doctest.h>
#include <json.hpp>

#include "blochlab/holo.hpp"

using namespace blochlab;
using namespace blochlab::holo;

TEST_SUITE_BEGIN("holo");

TEST_CASE("coefficient storage never keeps zeros") {
    PolyFunction p(2);
    p.set_coefficient({1, 0}, Cplx{2.0, 0.0});
    p.set_coefficient({0, 3}, Cplx{0.0, -1.0});
    CHECK(p.term_count() == 2);
    p.set_coefficient({1, 0}, Cplx{0.0, 0.0});
    CHECK(p.term_count() == 1);
    CHECK(p.coefficient({1, 0}) == Cplx{0.0, 0.0});
    CHECK(p.degree() == 3);
}

TEST_CASE("evaluation, gradient and radial derivative on a hand example") {
    // f(z) = 3 + 2 z1^2 z2 - i z2^3
    PolyFunction f(2);
    f.set_coefficient({0, 0}, Cplx{3.0, 0.0});
    f.set_coefficient({2, 1}, Cplx{2.0, 0.0});
    f.set_coefficient({0, 3}, Cplx{0.0, -1.0});

    const CVec z{Cplx{0.5, 0.1}, Cplx{-0.2, 0.3}};
    const Cplx z1 = z[0], z2 = z[1];
    const Cplx expect = 3.0 + 2.0 * z1 * z1 * z2 - Cplx{0.0, 1.0} * z2 * z2 * z2;
    CHECK(std::abs(f.evaluate(z) - expect) < 1e-15);

    const CVec g = f.gradient(z);
    CHECK(std::abs(g[0] - 4.0 * z1 * z2) < 1e-15);
    CHECK(std::abs(g[1] - (2.0 * z1 * z1 - Cplx{0.0, 3.0} * z2 * z2)) < 1e-15);

    // Radial derivative scales each monomial by its total degree.
    const Cplx r = f.radial(z);
    const Cplx expect_r = 3.0 * (2.0 * z1 * z1 * z2) + 3.0 * (-Cplx{0.0, 1.0} * z2 * z2 * z2);
    CHECK(std::abs(r - expect_r) < 1e-15);
}

TEST_CASE("the two radial derivative paths agree") {
    Rng rng(101);
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = 1 + static_cast<int>(rng.uniform01() * 3);
        const PolyFunction f = random_polynomial(rng, dim, 5);
        const CVec z = rng.ball_point(dim, 0.9);
        const CVec g = f.gradient(z);
        Cplx via_gradient{0.0, 0.0};
        for (int k = 0; k < dim; ++k) via_gradient += z[k] * g[k];
        CHECK(std::abs(f.radial(z) - via_gradient) < 1e-12);
    }
}

TEST_CASE("analytic gradient matches central differences") {
    Rng rng(202);
    const PolyFunction f = random_polynomial(rng, 2, 4);
    const CVec z{Cplx{0.31, -0.12}, Cplx{-0.25, 0.4}};
    const double h = 1e-6;
    const CVec g = f.gradient(z);
    for (int k = 0; k < 2; ++k) {
        CVec zp = z, zm = z;
        zp[k] += h;
        zm[k] -= h;
        const Cplx fd = (f.evaluate(zp) - f.evaluate(zm)) / (2.0 * h);
        CHECK(std::abs(fd - g[k]) < 1e-8 * std::max(1.0, std::abs(g[k])));
    }
}

TEST_CASE("partial derivatives and radial derivative as polynomials") {
    PolyFunction f(2);
    f.set_coefficient({2, 1}, Cplx{1.0, 0.0});
    f.set_coefficient({0, 2}, Cplx{0.0, 2.0});
    const PolyFunction d0 = f.partial(0);
    CHECK(d0.coefficient({1, 1}) == Cplx{2.0, 0.0});
    CHECK(d0.term_count() == 1);
    const PolyFunction rd = f.radial_derivative();
    CHECK(rd.coefficient({2, 1}) == Cplx{3.0, 0.0});
    CHECK(rd.coefficient({0, 2}) == Cplx{0.0, 4.0});
}

TEST_CASE("homogeneous parts reassemble and are homogeneous") {
    Rng rng(303);
    const PolyFunction f = random_polynomial(rng, 2, 5);
    const auto parts = f.homogeneous_parts();
    PolyFunction sum(2);
    for (const auto& [deg, part] : parts) sum = sum + part;
    const CVec z{Cplx{0.3, 0.2}, Cplx{-0.4, 0.1}};
    CHECK(std::abs(sum.evaluate(z) - f.evaluate(z)) < 1e-14);

    const Cplx t{0.7, 0.2};
    for (const auto& [deg, part] : parts) {
        const Cplx lhs = part.evaluate(scaled(z, t));
        const Cplx rhs = std::pow(t, static_cast<int>(deg)) * part.evaluate(z);
        CHECK(std::abs(lhs - rhs) < 1e-13);
    }
}

TEST_CASE("composition substitutes components") {
    // f(u) = u1 u2, phi = (z2, z1^2)  ->  f o phi = z2 z1^2.
    PolyFunction f(2);
    f.set_coefficient({1, 1}, Cplx{1.0, 0.0});
    const std::vector<PolyFunction> phi{PolyFunction::coordinate(2, 1),
                                        PolyFunction::coordinate(2, 0) *
                                            PolyFunction::coordinate(2, 0)};
    const PolyFunction fc = compose(f, phi);
    CHECK(fc.term_count() == 1);
    CHECK(fc.coefficient({2, 1}) == Cplx{1.0, 0.0});
}

TEST_CASE("composition agrees with pointwise evaluation") {
    Rng rng(404);
    for (int trial = 0; trial < 10; ++trial) {
        const PolyFunction f = random_polynomial(rng, 2, 4);
        const std::vector<PolyFunction> comps{random_polynomial(rng, 3, 3),
                                              random_polynomial(rng, 3, 3)};
        const PolyFunction fc = compose(f, comps);
        for (int i = 0; i < 5; ++i) {
            const CVec z = rng.ball_point(3, 0.7);
            const CVec w{comps[0].evaluate(z), comps[1].evaluate(z)};
            const Cplx direct = f.evaluate(w);
            CHECK(std::abs(fc.evaluate(z) - direct) <
                  1e-10 * std::max(1.0, std::abs(direct)));
        }
    }
}

TEST_CASE("composition degree cap") {
    const PolyFunction f = PolyFunction::monomial(1, {9}, Cplx{1.0, 0.0});
    const PolyFunction inner = PolyFunction::monomial(1, {8}, Cplx{0.5, 0.0});
    CHECK_THROWS_AS(compose(f, {inner}), TruncationError);
    CHECK_NOTHROW(compose(f, {inner}, 128));
    CHECK_THROWS_AS(compose(f, {inner, inner}), DomainError);
}

TEST_CASE("orthonormal systems validate their Gram matrix") {
    CHECK_THROWS_AS(OrthonormalSystem(2, {CVec{Cplx{1.0, 0.0}, Cplx{0.1, 0.0}}}),
                    ConsistencyError);
    Rng rng(505);
    const auto sys = OrthonormalSystem::random(4, 2, rng);
    CHECK(sys.count() == 2);
    CHECK(std::abs(inner(sys.vec(0), sys.vec(1))) < 1e-12);
    const CVec u{Cplx{0.3, 0.1}, Cplx{-0.2, 0.5}};
    CHECK(norm(sys.embed(u)) == doctest::Approx(norm(u)).epsilon(1e-12));
}

TEST_CASE("restriction to coordinate axes substitutes coordinates") {
    // f(z) = z1 z3 + z2 on axes {e1, e3}: u maps to u1 u2.
    PolyFunction f(3);
    f.set_coefficient({1, 0, 1}, Cplx{1.0, 0.0});
    f.set_coefficient({0, 1, 0}, Cplx{1.0, 0.0});
    const auto axes = OrthonormalSystem::coordinate_axes(3, {0, 2});
    const PolyFunction fr = restrict(f, axes);
    CHECK(fr.dim() == 2);
    CHECK(fr.coefficient({1, 1}) == Cplx{1.0, 0.0});
    CHECK(fr.term_count() == 1);
}

TEST_CASE("restriction agrees with evaluation through the embedding") {
    Rng rng(606);
    const PolyFunction f = random_polynomial(rng, 3, 4);
    const auto sys = OrthonormalSystem::random(3, 2, rng);
    const PolyFunction fr = restrict(f, sys);
    for (int i = 0; i < 8; ++i) {
        const CVec u = rng.ball_point(2, 0.8);
        const Cplx direct = f.evaluate(sys.embed(u));
        CHECK(std::abs(fr.evaluate(u) - direct) <
              1e-11 * std::max(1.0, std::abs(direct)));
    }
}

TEST_CASE("self-map certification") {
    // 0.8 z is certified; 1.2 z escapes.
    std::vector<PolyFunction> ok{PolyFunction::coordinate(2, 0) * Cplx{0.8, 0.0},
                                 PolyFunction::coordinate(2, 1) * Cplx{0.8, 0.0}};
    const SelfMap phi(std::move(ok));
    CHECK(phi.fixes_origin());
    CHECK(phi.range_sup() > 0.75);
    CHECK(phi.range_sup() < 0.8);

    std::vector<PolyFunction> bad{PolyFunction::coordinate(1, 0) * Cplx{1.2, 0.0}};
    CHECK_THROWS_AS(SelfMap(std::move(bad)), RangeError);

    std::vector<PolyFunction> mixed{PolyFunction::coordinate(2, 0),
                                    PolyFunction::coordinate(1, 0)};
    CHECK_THROWS_AS(SelfMap(std::move(mixed)), ConsistencyError);
}

TEST_CASE("schwarz bound holds for generated origin-fixing maps") {
    Rng rng(707);
    for (int trial = 0; trial < 5; ++trial) {
        const SelfMap phi = random_selfmap(rng, 2, 3);
        CHECK(phi.fixes_origin());
        const auto rep = schwarz_check(phi, 4000);
        CAPTURE(trial);
        CHECK(rep.ok);
        CHECK(rep.worst_excess <= 1e-10);
    }

    std::vector<PolyFunction> shifted{PolyFunction::constant(1, Cplx{0.3, 0.0})};
    const SelfMap psi(std::move(shifted));
    CHECK_FALSE(psi.fixes_origin());
    CHECK_THROWS_AS(schwarz_check(psi), DomainError);
}

TEST_CASE("serialization round trip preserves coefficients exactly") {
    Rng rng(808);
    const PolyFunction f = random_polynomial(rng, 3, 4);
    const auto j = f.to_json();
    const PolyFunction back = PolyFunction::from_json(j);
    CHECK(back.dim() == f.dim());
    CHECK(back.term_count() == f.term_count());
    for (const auto& [a, c] : f.terms()) CHECK(back.coefficient(a) == c);
}

TEST_CASE("deserialization merges duplicate exponent entries") {
    const auto j = nlohmann::json::parse(
        R"([{"exponents":[1,0],"re":1.0,"im":0.5},
            {"exponents":[1,0],"re":2.0,"im":-0.5},
            {"exponents":[0,2],"re":0.0,"im":1.0}])");
    const PolyFunction p = PolyFunction::from_json(j);
    CHECK(p.term_count() == 2);
    CHECK(p.coefficient({1, 0}) == Cplx{3.0, 0.0});
}

TEST_CASE("malformed polynomial configs are rejected") {
    using nlohmann::json;
    CHECK_THROWS_AS(PolyFunction::from_json(json::array()), ConfigError);
    CHECK_THROWS_AS(PolyFunction::from_json(json::parse(R"([{"re":1.0}])")), ConfigError);
    CHECK_THROWS_AS(
        PolyFunction::from_json(json::parse(R"([{"exponents":[-1],"re":1.0}])")),
        ConfigError);
    CHECK_THROWS_AS(
        PolyFunction::from_json(json::parse(
            R"([{"exponents":[1,0],"re":1.0},{"exponents":[1],"re":1.0}])")),
        ConfigError);
}

TEST_CASE("generators are deterministic in the seed") {
    Rng a(31337), b(31337);
    const PolyFunction fa = random_polynomial(a, 3, 5);
    const PolyFunction fb = random_polynomial(b, 3, 5);
    CHECK(fa.terms() == fb.terms());
    const SelfMap pa = random_selfmap(a, 2, 3);
    const SelfMap pb = random_selfmap(b, 2, 3);
    CHECK(pa.components()[0].terms() == pb.components()[0].terms());
    CHECK(pa.range_sup() == pb.range_sup());
}

TEST_SUITE_END();
