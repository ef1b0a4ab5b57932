// Config-driven experiment runner: one JSON object describes the weights, the
// operator data, and a task list; running it produces a deterministic JSON
// report plus CSV side files, keyed entirely by the config seed. The command
// line tool is a thin shell around this, and the same entry point backs the
// reproducibility checks.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "blochlab/bloch.hpp"
#include "blochlab/cesaro.hpp"
#include "blochlab/common.hpp"
#include "blochlab/holo.hpp"
#include "blochlab/weights.hpp"

namespace blochlab::experiment {

// Task names accepted in the "tasks" array.
const std::vector<std::string>& known_tasks();

struct Config {
    std::uint64_t seed = 0;
    int dimension = 0;
    weights::NormalWeight domain_weight;    // nu, the source-space weight
    weights::NormalWeight codomain_weight;  // mu, the target-space weight
    std::optional<holo::PolyFunction> psi;
    std::optional<holo::SelfMap> phi;
    std::optional<holo::PolyFunction> function;
    bloch::SamplerConfig sampler;
    cesaro::ClassifyOptions classify;
    double quadrature_tol = 1e-9;
    double identity_tol = 1e-8;
    double probe_radius = 0.3;
    double probe_eps = 0.3;
    int probe_samples = 512;
    std::vector<CVec> probe_inputs;
    int factorization_k = 2;
    int factorization_samples = 100;
    int testfn_k_max = 34;
    std::vector<std::string> tasks;

    Config(weights::NormalWeight nu, weights::NormalWeight mu)
        : domain_weight(std::move(nu)), codomain_weight(std::move(mu)) {}
};

// Field-by-field validation; any malformed or unknown entry raises a
// ConfigError naming the offending field. "seed", "dimension", and a
// non-empty "tasks" array are mandatory.
Config parse_config(const nlohmann::json& j);

// Reads and parses the file; I/O or JSON syntax problems become ConfigError.
Config load_config(const std::string& path);

struct ReportBundle {
    nlohmann::ordered_json report;
    // CSV side files as (file name, content) pairs, in a fixed order.
    std::vector<std::pair<std::string, std::string>> files;
    // 0 = all checks passed, 2 = a verdict-level property violation.
    int exit_code = 0;
};

// Runs every configured task in order. Identical configs produce
// byte-identical bundles; a missing prerequisite field (e.g. no "psi" for an
// operator task) raises ConfigError.
ReportBundle run(const Config& cfg);

}  // namespace blochlab::experiment
