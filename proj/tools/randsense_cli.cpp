// SPDX-License-Identifier: Apache-2.0
//
// Experiment CLI.
//   randsense run <config> [--seed U64] [--threads N] [--full-scale] [--out PATH]
//   randsense trace <config> [--algorithm sca|sgp] [--seed U64] [--threads N]
//                            [--full-scale] [--out PATH]
// Exit codes: 0 success, 2 config/usage/I-O error, 3 numerical failure.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "randsense/randsense.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    bool full_scale = false;
    std::optional<std::string> out;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("config", opts.config_path, "experiment config file")
        ->required();
    cmd->add_option("--seed", opts.seed, "override master_seed");
    cmd->add_option("--threads", opts.threads,
                    "worker threads (0 = hardware concurrency)");
    cmd->add_flag("--full-scale", opts.full_scale,
                  "use the 64x32 full-scale array instead of the config's");
    cmd->add_option("--out", opts.out, "override output path");
}

randsense::ExperimentConfig load_config(const CommonOptions& opts) {
    randsense::ExperimentConfig cfg = randsense::parse_config(opts.config_path);
    if (opts.seed) cfg.master_seed = *opts.seed;
    if (opts.full_scale) {
        cfg.n_tx = 64;
        cfg.n_rx = 32;
    }
    if (opts.out) cfg.output_path = *opts.out;
    cfg.rebuild_system();
    cfg.validate();
    randsense::set_max_threads(opts.threads);
    return cfg;
}

int run_command(const CommonOptions& opts) {
    const randsense::ExperimentConfig cfg = load_config(opts);
    const auto start = std::chrono::steady_clock::now();
    const randsense::ResultTable table = randsense::run_experiment(cfg);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::cout << "wrote " << table.rows.size() << " rows to " << cfg.output_path
              << " (" << elapsed << " s)\n";
    return 0;
}

int trace_command(const CommonOptions& opts, const std::string& algorithm) {
    using namespace randsense;
    const ExperimentConfig cfg = load_config(opts);
    if (cfg.scenario != Scenario::convergence)
        throw ParseError("config error at key 'scenario': the trace subcommand "
                         "needs a convergence config");
    const CorrelationMatrix corr =
        gen_correlation(cfg.n_tx, cfg.eig_low, cfg.eig_high,
                        substream(cfg.master_seed, 1));
    const double snr_db = cfg.sweep.front();
    SystemConfig sys = cfg.system;
    sys.power = std::pow(10.0, snr_db / 10.0) * sys.noise_var / sys.frame_len;
    sys.validate();
    const Precoder init = cfg.init == InitKind::uniform
                              ? uniform_precoder(sys)
                              : water_filling(sys, corr).precoder;
    ConvergenceTrace trace;
    if (algorithm == "sca") {
        const SignalBatch one =
            sample_signals(sys, 1, SignalKind::gaussian,
                           substream(substream(cfg.master_seed, 4), 0));
        trace = sca_optimize(one.samples[0], init, cfg.sca, sys, corr).second;
    } else {
        trace = sgp_optimize(sys, corr, init, cfg.sgp,
                             substream(substream(cfg.master_seed, 3), 0))
                    .second;
    }
    export_trace(trace, cfg.output_path);
    std::cout << "wrote " << trace.iterations.size() << " iterations to "
              << cfg.output_path << " (final objective "
              << trace.iterations.back().objective << ")\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Precoder design and Monte Carlo evaluation for MIMO sensing "
                 "with random communication signals"};
    app.require_subcommand(1);

    CommonOptions run_opts;
    CLI::App* run = app.add_subcommand("run", "run a configured experiment");
    add_common(run, run_opts);

    CommonOptions trace_opts;
    std::string algorithm = "sca";
    CLI::App* trace =
        app.add_subcommand("trace", "export a convergence trace CSV");
    add_common(trace, trace_opts);
    trace->add_option("--algorithm", algorithm, "sca or sgp")
        ->check(CLI::IsMember({"sca", "sgp"}));

    try {
        app.parse(argc, argv);
        if (run->parsed()) return run_command(run_opts);
        return trace_command(trace_opts, algorithm);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const randsense::NumericalFailureError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const randsense::Error& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
