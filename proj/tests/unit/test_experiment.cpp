#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "blochlab/experiment.hpp"

using namespace blochlab;

namespace {

nlohmann::json base_config() {
    nlohmann::json j;
    j["seed"] = 42;
    j["dimension"] = 2;
    j["psi"] = nlohmann::json::array(
        {{{"exponents", {1, 0}}, {"re", 1.0}, {"im", 0.0}}});
    j["phi"] = "identity";
    j["function"] = nlohmann::json::array(
        {{{"exponents", {1, 0}}, {"re", 1.0}, {"im", 0.0}}});
    j["sampler"] = {{"shells", 8}, {"directions", 64}, {"refine_passes", 2},
                    {"refine_top", 4}};
    j["classify"] = {{"decay_shells", 8}, {"decay_directions", 8},
                     {"gamma_family_points", 0}};
    j["tasks"] = {"norms"};
    return j;
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("config validation names the offending field") {
    auto j = base_config();
    j.erase("seed");
    CHECK_THROWS_WITH_AS(experiment::parse_config(j),
                         doctest::Contains("seed"), ConfigError);

    j = base_config();
    j.erase("dimension");
    CHECK_THROWS_WITH_AS(experiment::parse_config(j),
                         doctest::Contains("dimension"), ConfigError);

    j = base_config();
    j["tasks"] = nlohmann::json::array();
    CHECK_THROWS_WITH_AS(experiment::parse_config(j),
                         doctest::Contains("tasks"), ConfigError);

    j = base_config();
    j["tasks"] = {"norms", "launch"};
    CHECK_THROWS_WITH_AS(experiment::parse_config(j),
                         doctest::Contains("launch"), ConfigError);

    j = base_config();
    j["domain_weight"] = {{"family", "exotic"}};
    CHECK_THROWS_WITH_AS(experiment::parse_config(j),
                         doctest::Contains("domain_weight"), ConfigError);

    j = base_config();
    j["surprise"] = 1;
    CHECK_THROWS_WITH_AS(experiment::parse_config(j),
                         doctest::Contains("surprise"), ConfigError);

    j = base_config();
    j["sampler"]["shells"] = 0;
    CHECK_THROWS_WITH_AS(experiment::parse_config(j),
                         doctest::Contains("sampler.shells"), ConfigError);

    j = base_config();
    j["psi"] = nlohmann::json::array(
        {{{"exponents", {1, 0, 0}}, {"re", 1.0}, {"im", 0.0}}});
    CHECK_THROWS_WITH_AS(experiment::parse_config(j), doctest::Contains("psi"),
                         ConfigError);

    j = base_config();
    j["probe"] = {{"radius", 1.5}};
    CHECK_THROWS_WITH_AS(experiment::parse_config(j),
                         doctest::Contains("probe.radius"), ConfigError);

    CHECK_THROWS_AS(experiment::parse_config(nlohmann::json::array()),
                    ConfigError);
}

TEST_CASE("parsed fields land where they should") {
    const auto cfg = experiment::parse_config(base_config());
    CHECK(cfg.seed == 42);
    CHECK(cfg.dimension == 2);
    CHECK(cfg.sampler.shells == 8);
    CHECK(cfg.sampler.directions == 64);
    // Sampler seed is derived from the master seed when not given explicitly.
    CHECK(cfg.sampler.seed != 42);
    CHECK(cfg.classify.sampler.seed == cfg.sampler.seed);
    CHECK(cfg.tasks == std::vector<std::string>{"norms"});
    REQUIRE(cfg.phi.has_value());
    const CVec z{Cplx{0.3, 0.1}, Cplx{-0.2, 0.0}};
    const CVec img = cfg.phi->apply(z);
    CHECK(img[0] == z[0]);
    CHECK(img[1] == z[1]);
    // Default weights are the standard one.
    CHECK(cfg.domain_weight(0.5) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("norms task reports the unit gradient seminorm of a coordinate") {
    auto j = base_config();
    // Deep enough that r*(1 - r^2) drops below 1e-3 of its shell peak.
    j["classify"]["decay_shells"] = 14;
    const auto cfg = experiment::parse_config(j);
    const auto bundle = experiment::run(cfg);
    CHECK(bundle.exit_code == 0);
    const auto& r = bundle.report.at("results").at("norms");
    CHECK(r.at("gradient").at("seminorm").get<double>() ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.at("radial").at("seminorm").get<double>() ==
          doctest::Approx(2.0 / (3.0 * std::sqrt(3.0))).epsilon(1e-5));
    CHECK(r.at("little_bloch").get<bool>());
    CHECK(r.at("growth_ok").get<bool>());
    REQUIRE(bundle.files.size() == 1);
    CHECK(bundle.files[0].first == "norms_decay.csv");
    CHECK(bundle.files[0].second.rfind("radius,value\n", 0) == 0);
}

TEST_CASE("operator and factorization tasks pass on a simple spec") {
    auto j = base_config();
    j["tasks"] = {"operator", "factorization"};
    j["factorization"] = {{"k", 2}, {"samples", 30}};
    const auto bundle = experiment::run(experiment::parse_config(j));
    CHECK(bundle.exit_code == 0);
    const auto& res = bundle.report.at("results");
    CHECK(res.at("operator").at("identity_ok").get<bool>());
    CHECK(res.at("operator").at("two_path_max_abs_error").get<double>() <= 1e-6);
    CHECK(res.at("factorization").at("ok").get<bool>());
}

TEST_CASE("bounded and compact tasks emit one csv per criterion") {
    auto j = base_config();
    j["tasks"] = {"bounded", "compact"};
    const auto bundle = experiment::run(experiment::parse_config(j));
    CHECK(bundle.exit_code == 0);
    std::vector<std::string> names;
    for (const auto& [name, content] : bundle.files) {
        names.push_back(name);
        CHECK(content.rfind("radius,value\n", 0) == 0);
    }
    CHECK(names == std::vector<std::string>{"bounded_B1.csv", "bounded_B2.csv",
                                            "bounded_B3.csv", "bounded_B4.csv",
                                            "compact_B4.csv",
                                            "compact_B3.csv"});
    CHECK(bundle.report.at("results").at("bounded").at("sandwich_ratio")
              .get<double>() <= 1.0 + 1e-9);
}

TEST_CASE("missing prerequisites are config errors, not crashes") {
    auto j = base_config();
    j.erase("psi");
    j["tasks"] = {"operator"};
    CHECK_THROWS_WITH_AS(experiment::run(experiment::parse_config(j)),
                         doctest::Contains("psi"), ConfigError);
    j = base_config();
    j.erase("function");
    j["tasks"] = {"norms"};
    CHECK_THROWS_WITH_AS(experiment::run(experiment::parse_config(j)),
                         doctest::Contains("function"), ConfigError);
}

TEST_CASE("identical configs give byte-identical reports") {
    auto j = base_config();
    j["tasks"] = {"norms", "operator", "testfn"};
    const auto a = experiment::run(experiment::parse_config(j));
    const auto b = experiment::run(experiment::parse_config(j));
    CHECK(a.report.dump() == b.report.dump());
    REQUIRE(a.files.size() == b.files.size());
    for (std::size_t i = 0; i < a.files.size(); ++i) {
        CHECK(a.files[i].first == b.files[i].first);
        CHECK(a.files[i].second == b.files[i].second);
    }
    j["seed"] = 43;
    const auto c = experiment::run(experiment::parse_config(j));
    CHECK(a.report.dump() != c.report.dump());
}

TEST_CASE("load_config reads files and rejects garbage") {
    CHECK_THROWS_AS(experiment::load_config("/nonexistent/x.json"),
                    ConfigError);
    const char* path = "/tmp/blochlab_experiment_test_cfg.json";
    {
        std::ofstream out(path);
        out << base_config().dump();
    }
    const auto cfg = experiment::load_config(path);
    CHECK(cfg.dimension == 2);
    {
        std::ofstream out(path);
        out << "{not json";
    }
    CHECK_THROWS_AS(experiment::load_config(path), ConfigError);
    std::remove(path);
}

}  // TEST_SUITE
