// SPDX-License-Identifier: Apache-2.0
// musicnd: estimate, verify, experiment.

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "musicnd/cli/commands.hpp"
#include "musicnd/version.hpp"

namespace {

struct Subcommand {
    CLI::App* app = nullptr;
    std::map<std::string, std::string> values;
    std::string config_file;
    std::string target;
    bool timing = false;
};

void add_common(Subcommand& sc)
{
    sc.app->add_option("--config", sc.config_file, "key = value configuration file; flags override it");
    for (const auto& key : musicnd::cli::config_keys()) {
        if (key == "timing") continue;
        sc.app->add_option("--" + key, sc.values[key]);
    }
    sc.app->add_flag("--timing", sc.timing, "record wall time per trial (output is no longer byte-reproducible)");
}

musicnd::cli::RunConfig build_config(const Subcommand& sc, const std::string& command)
{
    musicnd::cli::RunConfig cfg;
    cfg.command = command;
    cfg.target = sc.target;
    if (!sc.config_file.empty()) musicnd::cli::apply_config_file(cfg, sc.config_file);
    for (const auto& [key, value] : sc.values)
        if (sc.app->count("--" + key) > 0) musicnd::cli::apply_setting(cfg, key, value);
    if (sc.timing) cfg.timing = true;
    return cfg;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"MUSIC for multidimensional single-snapshot spectral estimation"};
    app.set_version_flag("--version", std::string(musicnd::kVersion));
    app.require_subcommand(1);

    Subcommand est, ver, exp;
    est.app = app.add_subcommand("estimate", "recover frequencies and amplitudes from a measurement file or a synthetic model");
    ver.app = app.add_subcommand("verify", "run a bound verification suite");
    ver.app->add_option("bound", ver.target, "thm2 | thm3 | lemma4 | thm4 | thm5 | hankel | selberg")
        ->required()
        ->check(CLI::IsMember(musicnd::cli::verify_targets()));
    exp.app = app.add_subcommand("experiment", "run a numerical study, writing <name>.csv and <name>.summary.json");
    exp.app->add_option("name", exp.target, "noiseless | nsr-sweep | n-scaling | sigma-power | phase-transition")
        ->required()
        ->check(CLI::IsMember(musicnd::cli::experiment_targets()));
    for (Subcommand* sc : {&est, &ver, &exp}) add_common(*sc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return musicnd::cli::kExitUsage;
    }

    try {
        if (*est.app) return musicnd::cli::cmd_estimate(build_config(est, "estimate"), std::cout);
        if (*ver.app) return musicnd::cli::cmd_verify(build_config(ver, "verify"), std::cout);
        return musicnd::cli::cmd_experiment(build_config(exp, "experiment"), std::cout);
    } catch (const musicnd::cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return musicnd::cli::kExitUsage;
    } catch (const musicnd::cli::FormatError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return musicnd::cli::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return musicnd::cli::kExitUsage;
    }
}
