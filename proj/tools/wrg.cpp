#include "wrg/io.hpp"
#include "wrg/orchestrator.hpp"
#include "wrg/runspec.hpp"
#include "wrg/version.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int parallel = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "experiment config file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", args.out_dir, "output directory")->required();
    cmd->add_option("--seed", args.seed, "override the config seed")
        ->each([&args](const std::string&) { args.seed_given = true; });
    cmd->add_option("--parallel", args.parallel, "worker threads for replicas")
        ->check(CLI::PositiveNumber);
}

int execute(const std::string& subcommand, const CommonArgs& args) {
    std::string text;
    try {
        text = wrg::read_file(args.config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    const wrg::ParseResult parsed = wrg::parse_config(text);
    if (!parsed.ok()) {
        for (const wrg::ConfigError& e : parsed.errors) {
            if (e.line > 0)
                std::cerr << args.config_path << ":" << e.line << ": " << e.message << "\n";
            else
                std::cerr << args.config_path << ": " << e.message << "\n";
        }
        return 1;
    }

    wrg::RunSpec spec = *parsed.spec;
    if (wrg::experiment_kind_name(spec.kind) != subcommand) {
        std::cerr << "error: config kind '" << wrg::experiment_kind_name(spec.kind)
                  << "' does not match subcommand '" << subcommand << "'\n";
        return 1;
    }
    if (args.seed_given) spec.seed = args.seed;

    try {
        const wrg::ExperimentResult result = wrg::run_experiment(spec, args.out_dir, args.parallel);
        std::cout << "wrote " << result.manifest.files.size() << " data files + manifest to "
                  << result.directory.string() << "\n";
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wrg: two-species birth-death-mutation dynamics toolkit"};
    app.require_subcommand(0, 1);

    bool show_version = false;
    app.add_flag("--version", show_version, "print code and format versions");

    const char* subcommands[] = {"check", "simulate", "kinetics", "stationary", "mesoscopic"};
    const char* descriptions[] = {
        "evaluate the parameter-regime conditions and report margins",
        "run the event-driven dynamics and write snapshots/estimates",
        "integrate the mean-field kinetic equations",
        "solve for a stationary density and its linear stability",
        "scaling sweep comparing rescaled dynamics against the kinetic system",
    };
    CommonArgs args[5];
    for (int i = 0; i < 5; ++i) add_common(app.add_subcommand(subcommands[i], descriptions[i]), args[i]);

    CLI11_PARSE(app, argc, argv);

    if (show_version) {
        std::cout << "wrg " << wrg::kCodeVersion << " (format " << wrg::kFormatVersion << ")\n";
        return 0;
    }
    for (int i = 0; i < 5; ++i)
        if (app.get_subcommand(subcommands[i])->parsed()) return execute(subcommands[i], args[i]);

    std::cout << app.help();
    return 0;
}
