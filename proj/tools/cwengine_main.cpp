// Batch experiment runner: run | sweep | regress | list.
// Exit codes: 0 pass, 1 tolerance failure, 2 validation error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cw/experiment.hpp"
#include "cw/idquery.hpp"

namespace {

int resolve_workers(int flag_value) {
    if (const char* env = std::getenv("CW_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<int>(v);
        std::cerr << "warning: ignoring invalid CW_WORKERS='" << env << "'\n";
    }
    return flag_value;
}

void write_reports(const cw::ExperimentReport& rep, const std::string& out_dir,
                   const std::string& stem) {
    std::filesystem::create_directories(out_dir);
    std::ofstream(out_dir + "/" + stem + ".report") << rep.machine_text();
    std::ofstream(out_dir + "/" + stem + ".txt") << rep.human_text();
}

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == '/' || c == '?' || c == '&' || c == '=' || c == '.' || c == ' ') c = '-';
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cwengine - characteristic-form and loop-space curvature experiments"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", golden_path, sweep_param, sweep_values;
    int workers = 1;
    long seed = -1;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config)
            cmd->add_option("--config", config_path, "experiment config file")->required();
        cmd->add_option("--out", out_dir, "report output directory");
        cmd->add_option("--workers", workers, "worker threads (env CW_WORKERS overrides)");
        cmd->add_option("--seed", seed, "seed override");
    };

    CLI::App* run_cmd = app.add_subcommand("run", "run one experiment");
    add_common(run_cmd, true);
    run_cmd->add_option("--golden", golden_path, "golden file to compare against");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep");
    add_common(sweep_cmd, true);
    sweep_cmd->add_option("--param", sweep_param, "axis parameter name")->required();
    sweep_cmd->add_option("--values", sweep_values, "comma-separated axis values")->required();

    CLI::App* regress_cmd = app.add_subcommand("regress", "run all golden-file checks");
    add_common(regress_cmd, false);
    regress_cmd->add_option("--golden", golden_path, "golden file")->required();

    app.add_subcommand("list", "list the experiment catalog");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("list")) {
            for (const auto& line : cw::experiment_catalog()) std::cout << line << "\n";
            return 0;
        }
        if (app.got_subcommand("run")) {
            cw::ExperimentConfig cfg = cw::parse_config_file(config_path);
            cfg.workers = resolve_workers(workers);
            if (seed >= 0) cfg.seed = static_cast<uint64_t>(seed);
            const cw::ExperimentReport rep = cw::run_experiment(cfg);
            write_reports(rep, out_dir, sanitize(cfg.experiment));
            std::cout << rep.human_text();
            if (!golden_path.empty()) {
                auto blocks = cw::parse_golden_file(golden_path);
                const auto outcome = cw::run_regression(blocks, cfg.workers, out_dir);
                std::cout << outcome.log;
                return outcome.failures == 0 ? 0 : 1;
            }
            return 0;
        }
        if (app.got_subcommand("sweep")) {
            cw::ExperimentConfig base = cw::parse_config_file(config_path);
            base.workers = resolve_workers(workers);
            if (seed >= 0) base.seed = static_cast<uint64_t>(seed);
            std::vector<cw::ExperimentReport> reports;
            std::filesystem::create_directories(out_dir);
            std::stringstream vs(sweep_values);
            std::string val;
            while (std::getline(vs, val, ',')) {
                cw::ExperimentConfig cfg = base;
                cfg.params[sweep_param] = val;
                cw::ExperimentReport rep = cw::run_experiment(cfg);
                write_reports(rep, out_dir,
                              sanitize(cfg.experiment + "_" + sweep_param + "-" + val));
                std::cout << rep.human_text();
                reports.push_back(std::move(rep));
            }
            const std::string table = cw::emit_plot_data(reports, sweep_param);
            std::ofstream(out_dir + "/sweep_" + sanitize(base.experiment) + "_" + sweep_param +
                          ".tsv")
                << table;
            std::cout << table;
            return 0;
        }
        if (app.got_subcommand("regress")) {
            auto blocks = cw::parse_golden_file(golden_path);
            std::filesystem::create_directories(out_dir);
            const auto outcome = cw::run_regression(blocks, resolve_workers(workers), out_dir);
            std::cout << outcome.log;
            std::cout << outcome.checks - outcome.failures << "/" << outcome.checks
                      << " checks passed\n";
            return outcome.failures == 0 ? 0 : 1;
        }
    } catch (const cw::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
