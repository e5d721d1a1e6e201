// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include "experiments.hpp"

#include "irsmimo/numeric.hpp"
#include "irsmimo/scenario.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>

namespace irsmimo::tools {

namespace {

struct Flags
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out = "out";
    std::string label;
    unsigned threads = 1;
    std::optional<double> delta;
    std::optional<int> max_iter;
    std::optional<int> blocks;
    std::optional<int> samples;
};

nlohmann::json load_config(const std::string &path)
{
    if (path.empty())
        return nlohmann::json::object();
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
}

int run(const std::string &experiment, const Flags &flags)
{
    nlohmann::json config = load_config(flags.config);
    if (!config.is_object())
        throw ConfigError("config must be a JSON object");
    // Flags win over the file.
    if (flags.seed)
        config["seed"] = *flags.seed;
    if (flags.delta)
        config["delta"] = *flags.delta;
    if (flags.max_iter)
        config["max_iter"] = *flags.max_iter;
    if (flags.blocks)
        config["blocks"] = *flags.blocks;
    if (flags.samples)
        config["samples"] = *flags.samples;

    const ExperimentReport report = run_experiment(experiment, config, flags.threads);
    const std::string label = flags.label.empty() ? "seed" + std::to_string(report.seed) : flags.label;
    const std::filesystem::path dir = std::filesystem::path(flags.out) / experiment / label;
    write_report(report, dir);
    std::cout << dir.string() << '\n';
    return exit_ok;
}

} // namespace

int run_cli(int argc, const char *const *argv)
{
    CLI::App app{"IRS-assisted massive MIMO experiments"};
    app.require_subcommand(1);
    Flags flags;
    std::string chosen;

    for (const std::string &name : experiment_names()) {
        CLI::App *sub = app.add_subcommand(name);
        sub->add_option("--config", flags.config, "JSON config file")->check(CLI::ExistingFile);
        sub->add_option("--seed", flags.seed, "master seed (overrides the config)");
        sub->add_option("--out", flags.out, "output root")->capture_default_str();
        sub->add_option("--label", flags.label, "run directory name (default seed<seed>)");
        sub->add_option("--threads", flags.threads, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
        sub->add_option("--blocks", flags.blocks, "Monte Carlo blocks");
        sub->add_option("--samples", flags.samples, "samples for the Gaussianity check");
        sub->add_option("--delta", flags.delta, "SCA stopping threshold on the squared step");
        sub->add_option("--max-iter", flags.max_iter, "SCA outer iteration limit");
        sub->callback([&chosen, name] { chosen = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return exit_config;
    }

    try {
        return run(chosen, flags);
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const NumericalError &e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

} // namespace irsmimo::tools
