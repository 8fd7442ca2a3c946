#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "tnet/experiment.hpp"
#include "tnet/snapshot.hpp"
#include "tnet/sweep.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigFailure = 1;
constexpr int kRuntimeFailure = 2;

void print(const tnet::ExperimentResult& r) {
    for (const auto& line : r.summary) std::cout << line << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transducer network experiments"};
    app.require_subcommand(1);

    std::string config_path, out_path, log_path;
    std::optional<std::uint64_t> seed;
    bool deterministic = false;
    auto* run = app.add_subcommand("run", "Run an experiment config");
    run->add_option("--config", config_path, "Config file")->required();
    run->add_option("--seed", seed, "Override the config seed");
    run->add_flag("--deterministic", deterministic, "Force threshold firing");
    run->add_option("--out", out_path, "Snapshot output path");
    run->add_option("--log", log_path, "Event log output path");

    std::string corpus;
    std::optional<double> dw, decay, theta;
    auto* segment = app.add_subcommand("segment", "Segment a corpus and list fixated chunks");
    segment->add_option("--corpus", corpus, "fig1a, fig1b or a corpus file")->required();
    segment->add_option("--dw", dw, "Weight increment");
    segment->add_option("--decay", decay, "Weight decay per tick");
    segment->add_option("--theta", theta, "Fixation threshold");
    segment->add_option("--out", out_path, "Snapshot output path");
    segment->add_option("--log", log_path, "Event log output path");

    std::string in_path, format = "json";
    auto* exp = app.add_subcommand("export", "Convert a snapshot");
    exp->add_option("--in", in_path, "Snapshot file")->required();
    exp->add_option("--format", format, "json or dot")->check(CLI::IsMember({"json", "dot"}));
    exp->add_option("--out", out_path, "Output path")->required();

    std::string grid_path;
    unsigned threads = 0;
    auto* sw = app.add_subcommand("sweep", "Run a parameter grid");
    sw->add_option("--config", config_path, "Base config file")->required();
    sw->add_option("--grid", grid_path, "Grid file")->required();
    sw->add_option("--out", out_path, "Table output path")->required();
    sw->add_option("--threads", threads, "Worker count (0: hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigFailure;
    }

    try {
        if (*run) {
            tnet::ExperimentConfig cfg = tnet::load_config(config_path);
            if (seed) cfg.seed = *seed;
            if (deterministic) tnet::set_param(cfg, "deterministic", true);
            if (!out_path.empty()) cfg.outputs.snapshot = out_path;
            if (!log_path.empty()) cfg.outputs.log = log_path;
            const auto r = tnet::run_experiment(cfg);
            tnet::write_outputs(cfg, r);
            print(r);
        } else if (*segment) {
            tnet::ExperimentConfig cfg;
            cfg.kind = tnet::ExperimentKind::segment;
            cfg.corpus = corpus;
            if (dw) tnet::set_param(cfg, "dw", *dw);
            if (decay) tnet::set_param(cfg, "decay_w", *decay);
            if (theta) tnet::set_param(cfg, "theta", *theta);
            if (!out_path.empty()) cfg.outputs.snapshot = out_path;
            if (!log_path.empty()) cfg.outputs.log = log_path;
            const auto r = tnet::run_experiment(cfg);
            tnet::write_outputs(cfg, r);
            print(r);
        } else if (*exp) {
            const tnet::Snapshot s = tnet::import_snapshot(in_path);
            tnet::export_snapshot(s, format == "dot" ? tnet::ExportFormat::dot : tnet::ExportFormat::json, out_path);
        } else if (*sw) {
            const tnet::ExperimentConfig cfg = tnet::load_config(config_path);
            const tnet::Grid grid = tnet::load_grid(grid_path);
            const auto rows = tnet::sweep(grid, cfg, threads);
            tnet::write_text(out_path, tnet::sweep_table(grid, rows));
            std::cout << rows.size() << " rows\n";
        }
    } catch (const tnet::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeFailure;
    }
    return kOk;
}
