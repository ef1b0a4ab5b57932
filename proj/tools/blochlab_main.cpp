// Command line front end: every subcommand loads one JSON config, optionally
// overrides its seed and task list, runs the experiment driver, prints the
// report JSON to stdout, and mirrors it (plus CSV side files) into --out.
// Exit codes: 0 success, 1 input error, 2 verdict-level property violation.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "blochlab/common.hpp"
#include "blochlab/experiment.hpp"

namespace fs = std::filesystem;
using namespace blochlab;

namespace {

struct SubDef {
    const char* name;
    const char* help;
    std::vector<std::string> tasks;  // empty = take the list from the config
};

const std::vector<SubDef>& subcommands() {
    static const std::vector<SubDef> defs = {
        {"norms",
         "Seminorms, norms, and boundary decay of the configured function",
         {"norms"}},
        {"operator",
         "Closed-form application, quadrature cross-check, and the radial "
         "identity",
         {"operator"}},
        {"classify",
         "Boundedness and compactness classification of the operator",
         {"bounded", "compact"}},
        {"testfn",
         "Extremal series for the domain weight and its pinch constants",
         {"testfn"}},
        {"probe", "Greedy epsilon-net probe of the map image", {"probe"}},
        {"report", "Run the task list from the config", {}},
    };
    return defs;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Numerical laboratory for weighted Bloch-type spaces on the unit "
        "ball and the composition-type integral operator between them"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed_override = 0;
    std::vector<std::string> task_filter;

    for (const auto& def : subcommands()) {
        CLI::App* sub = app.add_subcommand(def.name, def.help);
        sub->add_option("--config", config_path, "JSON config file")
            ->required();
        sub->add_option("--seed", seed_override,
                        "Override the seed from the config");
        sub->add_option("--out", out_dir,
                        "Directory for report.json and CSV side files");
        if (def.tasks.empty())
            sub->add_option("--task", task_filter,
                            "Run only the named task (repeatable)");
    }

    CLI11_PARSE(app, argc, argv);
    CLI::App* sub = app.get_subcommands().front();

    try {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("config: cannot open '" + config_path + "'");
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("config: '" + config_path +
                              "' is not valid JSON: " + e.what());
        }
        if (!j.is_object())
            throw ConfigError("config: expected a JSON object");
        if (sub->count("--seed") > 0) j["seed"] = seed_override;
        for (const auto& def : subcommands())
            if (sub->get_name() == def.name && !def.tasks.empty())
                j["tasks"] = def.tasks;
        if (!task_filter.empty()) j["tasks"] = task_filter;

        const auto cfg = experiment::parse_config(j);
        const auto bundle = experiment::run(cfg);
        const std::string text = bundle.report.dump(2) + "\n";
        if (!out_dir.empty()) {
            fs::create_directories(out_dir);
            std::ofstream rep(fs::path(out_dir) / "report.json",
                              std::ios::binary);
            rep << text;
            for (const auto& [name, content] : bundle.files) {
                std::ofstream f(fs::path(out_dir) / name, std::ios::binary);
                f << content;
            }
        }
        std::cout << text;
        return bundle.exit_code;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
