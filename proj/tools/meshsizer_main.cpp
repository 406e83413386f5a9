// meshsizer command-line front end. All functionality lives behind the
// meshsizer shared library; this binary only parses arguments, merges flag
// overrides into the configuration document, and forwards to the C API.

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "meshsizer.h"

namespace {

using nlohmann::json;

// Primary output path key per subcommand, used by --out.
const std::map<std::string, std::string> kOutputKey = {
    {"synth", "mesh"},           {"compute-spacing", "spacing"},
    {"transfer", "output"},      {"morph", "output"},
    {"sample", "output"},        {"build-dataset", "output"},
    {"train", "model"},          {"predict", "output"},
    {"evaluate", "output"},
};

struct Options {
    std::string config_path;
    std::string out;
    std::string strategy;
    std::string grid;
    double scaling = -1.0;
    long long seed = -1;
    std::vector<std::string> paths;  // key=value overrides
};

json parse_grid(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError("--grid expects layers:neurons, e.g. 1,2,3:10,20,40");
    auto parse_list = [](const std::string& s) {
        std::vector<int> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
        return out;
    };
    return json{{"layers", parse_list(spec.substr(0, colon))},
                {"neurons", parse_list(spec.substr(colon + 1))}};
}

int run(const std::string& command, const Options& opt) {
    json config = json::object();
    if (!opt.config_path.empty()) {
        std::ifstream in(opt.config_path);
        if (!in) {
            std::fprintf(stderr, "error: cannot open config file: %s\n", opt.config_path.c_str());
            return MSZ_ERR_IO;
        }
        try {
            in >> config;
        } catch (const std::exception& ex) {
            std::fprintf(stderr, "error: cannot parse %s: %s\n", opt.config_path.c_str(),
                         ex.what());
            return MSZ_ERR_IO;
        }
    }

    if (opt.seed >= 0) config["seed"] = opt.seed;
    if (opt.scaling >= 0.0) config["spacing"]["scaling"] = opt.scaling;
    if (!opt.strategy.empty()) config["spacing"]["strategy"] = opt.strategy;
    if (!opt.grid.empty()) config["train"]["grid"] = parse_grid(opt.grid);
    if (!opt.out.empty()) config["paths"][kOutputKey.at(command)] = opt.out;
    for (const auto& kv : opt.paths) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "error: --path expects key=value, got '%s'\n", kv.c_str());
            return MSZ_ERR_USAGE;
        }
        config["paths"][kv.substr(0, eq)] = kv.substr(eq + 1);
    }

    const msz_status status = msz_run_command(command.c_str(), config.dump().c_str());
    if (status != MSZ_OK) std::fprintf(stderr, "error: %s\n", msz_last_error());
    return status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"meshsizer: near-optimal mesh spacing fields from flow solutions"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(msz_version()));

    Options opt;
    std::string command;
    for (const auto& [name, key] : kOutputKey) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", opt.config_path, "configuration JSON file");
        sub->add_option("--seed", opt.seed, "seed override");
        sub->add_option("--out", opt.out, "primary output path override");
        sub->add_option("--strategy", opt.strategy, "recovery strategy override")
            ->check(CLI::IsMember({"fv_dual", "fe_hybrid", "fe_split"}));
        sub->add_option("--scaling", opt.scaling, "scaling factor S override");
        sub->add_option("--grid", opt.grid, "hyperparameter grid, layers:neurons");
        sub->add_option("--path", opt.paths, "path override, key=value")->take_all();
        sub->callback([&command, name = name] { command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : MSZ_ERR_USAGE;
    }
    return run(command, opt);
}
