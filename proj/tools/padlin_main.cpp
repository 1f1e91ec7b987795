#include "padlin/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Invocation {
    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
};

const std::vector<std::pair<const char*, const char*>> kCommands = {
    {"trace-hpa", "Tabulate the amplifier's AM/AM and AM/PM curves"},
    {"trace-pd", "Tabulate the inverse and phase-correction curves and the gain table"},
    {"bounds", "Evaluate the analytic error-rate bounds"},
    {"compare", "Put the bounds next to standard linear-modulation baselines"},
    {"simulate", "Monte Carlo error-rate runs over the configured sweep"},
    {"psd", "Spectral regrowth with and without predistortion"},
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constant-envelope links through a nonlinear amplifier, "
                 "with analytic predistortion"};
    app.set_version_flag("--version", std::string{PADLIN_VERSION});
    app.require_subcommand(1);

    std::map<std::string, Invocation> calls;
    for (const auto& [name, help] : kCommands) {
        CLI::App* sub = app.add_subcommand(name, help);
        Invocation& inv = calls[name];
        sub->add_option("--config", inv.config_path,
                        "JSON configuration file (omit for defaults)");
        sub->add_option("--out", inv.out_dir, "output directory")
            ->capture_default_str();
        sub->add_option("--set", inv.overrides,
                        "dotted.path=value override, repeatable");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e); // prints help/version or the usage error
        return code == 0 ? 0 : 1;
    }

    const CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    const Invocation& inv = calls.at(name);

    try {
        std::string text;
        if (!inv.config_path.empty()) {
            std::ifstream in(inv.config_path);
            if (!in) {
                std::cerr << "error: cannot read " << inv.config_path << "\n";
                return 1;
            }
            std::ostringstream ss;
            ss << in.rdbuf();
            text = ss.str();
        }
        if (!inv.overrides.empty())
            text = padlin::apply_overrides(text, inv.overrides);
        const padlin::ExperimentConfig cfg = padlin::parse_config(text);
        for (const std::string& file : padlin::run_command(name, cfg, inv.out_dir))
            std::cout << file << "\n";
        return 0;
    } catch (const padlin::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
