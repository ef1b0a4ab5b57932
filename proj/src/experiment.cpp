#include "blochlab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "blochlab/rng.hpp"
#include "blochlab/testfuncs.hpp"

namespace blochlab::experiment {

namespace {

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
    return seed ^ (salt * 0x9E3779B97F4A7C15ULL);
}

void check_known_keys(const nlohmann::json& j, const char* where,
                      const std::vector<std::string>& known) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError(std::string("config: unknown field '") + key +
                              "' in " + where);
    }
}

int require_positive_int(const nlohmann::json& j, const char* field) {
    if (!j.is_number_integer() || j.get<long long>() < 1)
        throw ConfigError(std::string("config: '") + field +
                          "' must be a positive integer");
    return j.get<int>();
}

double require_unit_interval(const nlohmann::json& j, const char* field) {
    if (!j.is_number() || !(j.get<double>() > 0.0) || j.get<double>() >= 1.0)
        throw ConfigError(std::string("config: '") + field +
                          "' must lie strictly between 0 and 1");
    return j.get<double>();
}

holo::PolyFunction parse_poly(const nlohmann::json& j, int dimension,
                              const char* field) {
    holo::PolyFunction p = holo::PolyFunction::from_json(j);
    if (p.dim() != dimension)
        throw ConfigError(std::string("config: '") + field +
                          "' has dimension " + std::to_string(p.dim()) +
                          ", expected " + std::to_string(dimension));
    return p;
}

cesaro::OperatorSpec make_spec(const Config& cfg, const char* task) {
    if (!cfg.psi)
        throw ConfigError(std::string("config: task '") + task +
                          "' needs the field 'psi'");
    if (!cfg.phi)
        throw ConfigError(std::string("config: task '") + task +
                          "' needs the field 'phi'");
    return cesaro::OperatorSpec(*cfg.psi, *cfg.phi, cfg.domain_weight,
                                cfg.codomain_weight);
}

std::string decay_csv(const bloch::DecayProfile& p) {
    std::ostringstream os;
    bloch::write_decay_csv(p, os);
    return os.str();
}

nlohmann::ordered_json run_norms(const Config& cfg, ReportBundle& out) {
    if (!cfg.function)
        throw ConfigError("config: task 'norms' needs the field 'function'");
    const auto& f = *cfg.function;
    const auto& mu = cfg.codomain_weight;
    nlohmann::ordered_json r;
    const Cplx f0 = f.evaluate(CVec(f.dim(), Cplx{0.0, 0.0}));
    r["value_at_origin"] = {f0.real(), f0.imag()};
    const auto desc = mu.describe();
    const bool unit_power = desc.at("family") == "power" &&
                            desc.at("alpha").get<double>() == 1.0;
    std::vector<bloch::Variant> variants = {bloch::Variant::gradient,
                                            bloch::Variant::radial,
                                            bloch::Variant::affine};
    if (unit_power) variants.push_back(bloch::Variant::invariant);
    for (const auto v : variants) {
        const auto est = bloch::seminorm(f, mu, v, cfg.sampler);
        nlohmann::ordered_json e;
        e["seminorm"] = est.value;
        e["norm"] = std::abs(f0) + est.value;
        e["witness"] = holo::cvec_to_json(est.witness);
        r[bloch::to_string(v)] = std::move(e);
    }
    const auto profile = bloch::decay_profile(
        f, mu, bloch::geometric_radii(cfg.classify.decay_shells));
    r["little_bloch"] = profile.little_bloch;
    r["profile_peak"] = profile.peak;
    out.files.emplace_back("norms_decay.csv", decay_csv(profile));
    const auto growth = bloch::growth_check(f, mu, 2000, mix(cfg.seed, 0x01));
    r["growth_ok"] = growth.ok;
    r["growth_worst_excess"] = growth.worst_excess;
    if (!growth.ok) out.exit_code = std::max(out.exit_code, 2);
    return r;
}

nlohmann::ordered_json run_operator(const Config& cfg, ReportBundle& out) {
    const auto spec = make_spec(cfg, "operator");
    const holo::PolyFunction f =
        cfg.function
            ? *cfg.function
            : holo::PolyFunction::coordinate(cfg.dimension, 0) +
                  holo::PolyFunction::constant(cfg.dimension, Cplx{1.0, 0.0});
    nlohmann::ordered_json r;
    const auto identity =
        cesaro::radial_identity_check(spec, f, 100, mix(cfg.seed, 0x02));
    r["identity_ok"] = identity.ok;
    r["identity_max_rel_error"] = identity.max_rel_error;

    const auto cf = cesaro::apply_exact(spec, f);
    Rng rng(mix(cfg.seed, 0x03));
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const CVec z = rng.ball_point(cfg.dimension, 0.9);
        worst = std::max(worst,
                         std::abs(cesaro::apply_quadrature(spec, f, z,
                                                           cfg.quadrature_tol) -
                                  cf.evaluate(z)));
    }
    r["two_path_max_abs_error"] = worst;
    const bool two_ok = worst <= 1e-6;
    r["two_path_ok"] = two_ok;
    r["image_degree"] = cf.degree();
    if (!identity.ok || !two_ok) out.exit_code = std::max(out.exit_code, 2);
    return r;
}

nlohmann::ordered_json run_bounded(const Config& cfg, ReportBundle& out) {
    const auto spec = make_spec(cfg, "bounded");
    auto opts = cfg.classify;
    opts.sampler = cfg.sampler;
    const auto rep = cesaro::classify_boundedness(spec, opts);
    for (const auto& c : rep.criteria)
        out.files.emplace_back(
            "bounded_" + cesaro::to_string(c.kind) + ".csv",
            decay_csv(c.decay));
    if (rep.sandwich_ratio > 1.0 + 1e-9 ||
        rep.verdict.find("norm bounds fail") != std::string::npos)
        out.exit_code = std::max(out.exit_code, 2);
    return rep.to_json();
}

nlohmann::ordered_json run_compact(const Config& cfg, ReportBundle& out) {
    const auto spec = make_spec(cfg, "compact");
    auto opts = cfg.classify;
    opts.sampler = cfg.sampler;
    const auto rep = cesaro::classify_compactness(spec, opts);
    for (const auto& c : rep.profiles)
        out.files.emplace_back(
            "compact_" + cesaro::to_string(c.kind) + ".csv",
            decay_csv(c.decay));
    return rep.to_json();
}

nlohmann::ordered_json run_testfn(const Config& cfg, ReportBundle& out) {
    const auto g = testfuncs::build_g(cfg.domain_weight, cfg.testfn_k_max);
    const auto cst = testfuncs::constants(g);
    nlohmann::ordered_json r;
    r["series"] = g.summary();
    nlohmann::ordered_json c;
    c["C1"] = cst.C1;
    c["C2"] = cst.C2;
    c["C3"] = cst.C3;
    c["r1_unit_integral"] = cst.r1_unit_integral;
    c["r1_half_weight"] = cst.r1_half_weight;
    r["constants"] = std::move(c);
    // Weighted profile nu(t) g(t), the quantity pinched between C1 and C2.
    std::ostringstream os;
    os << "radius,value\n";
    char buf[64];
    for (int i = 0; i <= 128; ++i) {
        const double t =
            g.eval_radius_max() * static_cast<double>(i) / 128.0;
        std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", t,
                      cfg.domain_weight(t) * testfuncs::g_eval_real(g, t));
        os << buf;
    }
    out.files.emplace_back("testfn_profile.csv", os.str());
    const bool ordered = cst.C1 < 1.0 && 1.0 < cst.C2 && cst.C3 >= 1.0;
    r["pinch_ordered"] = ordered;
    if (!ordered) out.exit_code = std::max(out.exit_code, 2);
    return r;
}

nlohmann::ordered_json run_probe(const Config& cfg, ReportBundle& out) {
    if (!cfg.phi)
        throw ConfigError("config: task 'probe' needs the field 'phi'");
    const auto rep = cesaro::epsnet_probe(*cfg.phi, cfg.probe_radius,
                                          cfg.probe_eps, cfg.probe_samples,
                                          mix(cfg.seed, 0x04),
                                          cfg.probe_inputs);
    std::ostringstream os;
    cesaro::write_pairwise_csv(rep.net, os);
    out.files.emplace_back("probe_pairwise.csv", os.str());
    return rep.to_json();
}

nlohmann::ordered_json run_factorization(const Config& cfg, ReportBundle& out) {
    const auto spec = make_spec(cfg, "factorization");
    const auto rep = cesaro::weak_factorization_check(
        spec, cfg.factorization_k, cfg.factorization_samples,
        mix(cfg.seed, 0x05));
    nlohmann::ordered_json r;
    r["ok"] = rep.ok;
    r["max_abs_error"] = rep.max_abs_error;
    r["k"] = cfg.factorization_k;
    r["samples"] = rep.samples;
    if (!rep.ok) out.exit_code = std::max(out.exit_code, 2);
    return r;
}

}  // namespace

const std::vector<std::string>& known_tasks() {
    static const std::vector<std::string> tasks = {
        "norms", "operator", "bounded", "compact",
        "testfn", "probe", "factorization"};
    return tasks;
}

Config parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    check_known_keys(j, "the top level",
                     {"seed", "dimension", "domain_weight", "codomain_weight",
                      "psi", "phi", "function", "sampler", "classify",
                      "tolerances", "probe", "factorization", "testfn",
                      "tasks"});
    if (!j.contains("seed"))
        throw ConfigError("config: missing mandatory field 'seed'");
    if (!j.at("seed").is_number_integer() || j.at("seed").get<long long>() < 0)
        throw ConfigError("config: 'seed' must be a non-negative integer");
    if (!j.contains("dimension"))
        throw ConfigError("config: missing mandatory field 'dimension'");

    const auto parse_weight = [&](const char* field) {
        if (!j.contains(field)) return weights::NormalWeight::power(1.0);
        try {
            return weights::NormalWeight::from_json(j.at(field));
        } catch (const ConfigError& e) {
            throw ConfigError(std::string("config: '") + field + "': " +
                              e.what());
        }
    };
    Config cfg(parse_weight("domain_weight"), parse_weight("codomain_weight"));
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.dimension = require_positive_int(j.at("dimension"), "dimension");
    if (cfg.dimension > 64)
        throw ConfigError("config: 'dimension' must be at most 64");

    if (j.contains("psi"))
        cfg.psi = parse_poly(j.at("psi"), cfg.dimension, "psi");
    if (j.contains("phi")) {
        const auto& p = j.at("phi");
        if (p.is_string() && p.get<std::string>() == "identity") {
            std::vector<holo::PolyFunction> comps;
            for (int k = 0; k < cfg.dimension; ++k)
                comps.push_back(holo::PolyFunction::coordinate(cfg.dimension, k));
            cfg.phi.emplace(std::move(comps));
        } else {
            cfg.phi = holo::SelfMap::from_json(p);
            if (cfg.phi->dim() != cfg.dimension)
                throw ConfigError("config: 'phi' has dimension " +
                                  std::to_string(cfg.phi->dim()) +
                                  ", expected " +
                                  std::to_string(cfg.dimension));
        }
    }
    if (j.contains("function"))
        cfg.function = parse_poly(j.at("function"), cfg.dimension, "function");

    cfg.sampler.seed = mix(cfg.seed, 0xB1);
    if (j.contains("sampler")) {
        const auto& s = j.at("sampler");
        check_known_keys(s, "'sampler'",
                         {"shells", "directions", "refine_passes",
                          "refine_top", "seed"});
        if (s.contains("shells"))
            cfg.sampler.shells = require_positive_int(s.at("shells"), "sampler.shells");
        if (s.contains("directions"))
            cfg.sampler.directions =
                require_positive_int(s.at("directions"), "sampler.directions");
        if (s.contains("refine_passes"))
            cfg.sampler.refine_passes = require_positive_int(
                s.at("refine_passes"), "sampler.refine_passes");
        if (s.contains("refine_top"))
            cfg.sampler.refine_top =
                require_positive_int(s.at("refine_top"), "sampler.refine_top");
        if (s.contains("seed"))
            cfg.sampler.seed = s.at("seed").get<std::uint64_t>();
    }
    cfg.classify.sampler = cfg.sampler;
    if (j.contains("classify")) {
        const auto& c = j.at("classify");
        check_known_keys(c, "'classify'",
                         {"decay_shells", "decay_directions",
                          "gamma_family_points", "b3_truncation",
                          "b2_coordinates"});
        if (c.contains("decay_shells"))
            cfg.classify.decay_shells =
                require_positive_int(c.at("decay_shells"), "classify.decay_shells");
        if (c.contains("decay_directions"))
            cfg.classify.decay_directions = require_positive_int(
                c.at("decay_directions"), "classify.decay_directions");
        if (c.contains("gamma_family_points")) {
            if (!c.at("gamma_family_points").is_number_integer() ||
                c.at("gamma_family_points").get<long long>() < 0)
                throw ConfigError(
                    "config: 'classify.gamma_family_points' must be a "
                    "non-negative integer");
            cfg.classify.gamma_family_points =
                c.at("gamma_family_points").get<int>();
        }
        if (c.contains("b3_truncation"))
            cfg.classify.b3_truncation = require_positive_int(
                c.at("b3_truncation"), "classify.b3_truncation");
        if (c.contains("b2_coordinates")) {
            if (!c.at("b2_coordinates").is_array())
                throw ConfigError(
                    "config: 'classify.b2_coordinates' must be an array");
            std::vector<int> which;
            for (const auto& e : c.at("b2_coordinates"))
                which.push_back(e.get<int>());
            cfg.classify.b2_coordinates = std::move(which);
        }
    }
    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        check_known_keys(t, "'tolerances'", {"quadrature", "identity"});
        if (t.contains("quadrature")) {
            cfg.quadrature_tol = t.at("quadrature").get<double>();
            if (!(cfg.quadrature_tol > 0.0))
                throw ConfigError(
                    "config: 'tolerances.quadrature' must be positive");
        }
        if (t.contains("identity")) {
            cfg.identity_tol = t.at("identity").get<double>();
            if (!(cfg.identity_tol > 0.0))
                throw ConfigError(
                    "config: 'tolerances.identity' must be positive");
        }
    }
    if (j.contains("probe")) {
        const auto& p = j.at("probe");
        check_known_keys(p, "'probe'",
                         {"radius", "eps", "random_samples", "inputs"});
        if (p.contains("radius"))
            cfg.probe_radius = require_unit_interval(p.at("radius"), "probe.radius");
        if (p.contains("eps"))
            cfg.probe_eps = require_unit_interval(p.at("eps"), "probe.eps");
        if (p.contains("random_samples")) {
            if (!p.at("random_samples").is_number_integer() ||
                p.at("random_samples").get<long long>() < 0)
                throw ConfigError(
                    "config: 'probe.random_samples' must be a non-negative "
                    "integer");
            cfg.probe_samples = p.at("random_samples").get<int>();
        }
        if (p.contains("inputs"))
            for (const auto& v : p.at("inputs"))
                cfg.probe_inputs.push_back(holo::cvec_from_json(v));
    }
    if (j.contains("factorization")) {
        const auto& f = j.at("factorization");
        check_known_keys(f, "'factorization'", {"k", "samples"});
        if (f.contains("k"))
            cfg.factorization_k = require_positive_int(f.at("k"), "factorization.k");
        if (f.contains("samples"))
            cfg.factorization_samples =
                require_positive_int(f.at("samples"), "factorization.samples");
    }
    if (j.contains("testfn")) {
        const auto& t = j.at("testfn");
        check_known_keys(t, "'testfn'", {"k_max"});
        if (t.contains("k_max"))
            cfg.testfn_k_max = require_positive_int(t.at("k_max"), "testfn.k_max");
    }

    if (!j.contains("tasks") || !j.at("tasks").is_array() ||
        j.at("tasks").empty())
        throw ConfigError("config: 'tasks' must be a non-empty array");
    for (const auto& t : j.at("tasks")) {
        if (!t.is_string())
            throw ConfigError("config: entries of 'tasks' must be strings");
        const std::string name = t.get<std::string>();
        const auto& known = known_tasks();
        if (std::find(known.begin(), known.end(), name) == known.end())
            throw ConfigError("config: unknown task '" + name + "'");
        cfg.tasks.push_back(name);
    }
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config: '" + path + "' is not valid JSON: " +
                          e.what());
    }
    return parse_config(j);
}

ReportBundle run(const Config& cfg) {
    ReportBundle out;
    out.report["seed"] = cfg.seed;
    out.report["dimension"] = cfg.dimension;
    out.report["domain_weight"] = cfg.domain_weight.describe();
    out.report["codomain_weight"] = cfg.codomain_weight.describe();
    out.report["tasks"] = cfg.tasks;
    auto results = nlohmann::ordered_json::object();
    for (const auto& task : cfg.tasks) {
        if (task == "norms") results[task] = run_norms(cfg, out);
        else if (task == "operator") results[task] = run_operator(cfg, out);
        else if (task == "bounded") results[task] = run_bounded(cfg, out);
        else if (task == "compact") results[task] = run_compact(cfg, out);
        else if (task == "testfn") results[task] = run_testfn(cfg, out);
        else if (task == "probe") results[task] = run_probe(cfg, out);
        else if (task == "factorization")
            results[task] = run_factorization(cfg, out);
    }
    out.report["results"] = std::move(results);
    out.report["exit_code"] = out.exit_code;
    return out;
}

}  // namespace blochlab::experiment
