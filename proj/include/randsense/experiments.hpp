// SPDX-License-Identifier: Apache-2.0
//
// Experiment harness: strict flat key=value configs (power/noise in dBm,
// converted to linear at the parse boundary), scenario runners, and CSV
// output. Identical config + seed yields byte-identical CSVs regardless of
// thread count: every random quantity is derived from the master seed by
// fixed substream indices and all reductions use fixed trees.

#pragma once

#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "randsense/config.hpp"
#include "randsense/correlation.hpp"
#include "randsense/elmmse.hpp"
#include "randsense/errors.hpp"
#include "randsense/estimation.hpp"
#include "randsense/model.hpp"
#include "randsense/precoding.hpp"

namespace randsense {

enum class Scenario { asymptotic_l, convergence, snr_sweep, det_vs_random };
enum class PrecoderScheme { water_filling, sgp, data_dependent };
enum class InitKind { water_filling, uniform };

inline std::string to_string(Scenario s) {
    switch (s) {
    case Scenario::asymptotic_l: return "asymptotic_L";
    case Scenario::convergence: return "convergence";
    case Scenario::snr_sweep: return "snr_sweep";
    case Scenario::det_vs_random: return "det_vs_random";
    }
    return "?";
}

inline std::string to_string(PrecoderScheme p) {
    switch (p) {
    case PrecoderScheme::water_filling: return "water_filling";
    case PrecoderScheme::sgp: return "sgp";
    case PrecoderScheme::data_dependent: return "data_dependent";
    }
    return "?";
}

inline std::string to_string(SignalKind k) {
    return k == SignalKind::gaussian ? "gaussian" : "deterministic_orthogonal";
}

inline std::string to_string(InitKind k) {
    return k == InitKind::water_filling ? "water_filling" : "uniform";
}

// Experiment description. Power and noise are stored as the dBm values the
// config file carries; `system` holds the derived linear-scale SystemConfig.
struct ExperimentConfig {
    Scenario scenario = Scenario::snr_sweep;
    int n_tx = 8; // desk-scale defaults; full scale is 64 x 32
    int n_rx = 4;
    int frame_len = 8;
    double power_dbm = 30.0;
    double noise_dbm = 0.0;
    std::uint64_t master_seed = 1;
    std::vector<double> sweep; // L values (asymptotic_L) or SNR dB values
    std::vector<PrecoderScheme> precoders = {PrecoderScheme::water_filling,
                                             PrecoderScheme::sgp,
                                             PrecoderScheme::data_dependent};
    int batch_count = 100; // N
    std::string output_path = "results.csv";
    double eig_low = 1.0;
    double eig_high = 10.0;
    SignalKind signal_kind = SignalKind::gaussian;
    InitKind init = InitKind::water_filling;
    SgpConfig sgp;
    ScaConfig sca;
    SystemConfig system; // derived from the fields above at parse/build time

    bool has_precoder(PrecoderScheme p) const {
        for (auto q : precoders)
            if (q == p) return true;
        return false;
    }

    void rebuild_system() {
        system.n_tx = n_tx;
        system.n_rx = n_rx;
        system.frame_len = frame_len;
        system.power = dbm_to_mw(power_dbm);
        system.noise_var = dbm_to_mw(noise_dbm);
        system.master_seed = master_seed;
    }

    void validate() const {
        try {
            system.validate();
            sgp.validate();
            sca.validate();
        } catch (const InvalidParameterError& e) {
            throw ParseError(std::string("config error: ") + e.what());
        }
        if (sweep.empty())
            throw ParseError("config error at key 'sweep': must be nonempty");
        if (precoders.empty())
            throw ParseError("config error at key 'precoders': must be nonempty");
        if (batch_count < 1)
            throw ParseError("config error at key 'batch_count': must be >= 1");
        if (!(eig_low > 0.0))
            throw ParseError("config error at key 'eig_low': must be > 0");
        if (eig_high < eig_low)
            throw ParseError("config error at key 'eig_high': must be >= eig_low");
        if (scenario == Scenario::asymptotic_l) {
            for (double v : sweep) {
                if (v < 1.0 || v != static_cast<double>(static_cast<int>(v)))
                    throw ParseError("config error at key 'sweep': asymptotic_L "
                                     "sweep values must be positive integers");
            }
        }
        if (scenario == Scenario::det_vs_random &&
            has_precoder(PrecoderScheme::data_dependent))
            throw ParseError(
                "config error at key 'precoders': det_vs_random compares a "
                "single precoder per scheme; data_dependent is not supported");
        if (scenario == Scenario::convergence &&
            !has_precoder(PrecoderScheme::sgp) &&
            !has_precoder(PrecoderScheme::data_dependent))
            throw ParseError("config error at key 'precoders': convergence "
                             "needs sgp and/or data_dependent");
    }

    bool operator==(const ExperimentConfig&) const = default;
};

// ---------------------------------------------------------------------------
// Config file parsing

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> items;
    std::string cur;
    for (char c : s) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) items.push_back(std::exchange(cur, {}));
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) items.push_back(cur);
    return items;
}

inline double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ParseError("config error at key '" + key +
                         "': expected a number, got '" + value + "'");
    }
}

inline long long parse_int(const std::string& key, const std::string& value) {
    long long v = 0;
    const auto [ptr, ec] =
        std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ParseError("config error at key '" + key +
                         "': expected an integer, got '" + value + "'");
    return v;
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t v = 0;
    const auto [ptr, ec] =
        std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ParseError("config error at key '" + key +
                         "': expected an unsigned integer, got '" + value + "'");
    return v;
}

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

inline ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::map<std::string, std::string> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_scenario = false, have_sweep = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("config error at line " + std::to_string(lineno) +
                             ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ParseError("config error at line " + std::to_string(lineno) +
                             ": empty key or value");
        if (!seen.emplace(key, value).second)
            throw ParseError("config error at key '" + key + "': duplicate key");

        if (key == "scenario") {
            if (value == "asymptotic_L") cfg.scenario = Scenario::asymptotic_l;
            else if (value == "convergence") cfg.scenario = Scenario::convergence;
            else if (value == "snr_sweep") cfg.scenario = Scenario::snr_sweep;
            else if (value == "det_vs_random")
                cfg.scenario = Scenario::det_vs_random;
            else
                throw ParseError("config error at key 'scenario': unknown "
                                 "scenario '" + value + "'");
            have_scenario = true;
        } else if (key == "n_tx") {
            cfg.n_tx = static_cast<int>(detail::parse_int(key, value));
        } else if (key == "n_rx") {
            cfg.n_rx = static_cast<int>(detail::parse_int(key, value));
        } else if (key == "frame_len") {
            cfg.frame_len = static_cast<int>(detail::parse_int(key, value));
        } else if (key == "power_dbm") {
            cfg.power_dbm = detail::parse_double(key, value);
        } else if (key == "noise_dbm") {
            cfg.noise_dbm = detail::parse_double(key, value);
        } else if (key == "master_seed") {
            cfg.master_seed = detail::parse_u64(key, value);
        } else if (key == "sweep") {
            cfg.sweep.clear();
            for (const auto& item : detail::split_list(value))
                cfg.sweep.push_back(detail::parse_double(key, item));
            have_sweep = true;
        } else if (key == "precoders") {
            cfg.precoders.clear();
            for (const auto& item : detail::split_list(value)) {
                if (item == "water_filling")
                    cfg.precoders.push_back(PrecoderScheme::water_filling);
                else if (item == "sgp")
                    cfg.precoders.push_back(PrecoderScheme::sgp);
                else if (item == "data_dependent")
                    cfg.precoders.push_back(PrecoderScheme::data_dependent);
                else
                    throw ParseError("config error at key 'precoders': unknown "
                                     "scheme '" + item + "'");
            }
        } else if (key == "batch_count") {
            cfg.batch_count = static_cast<int>(detail::parse_int(key, value));
        } else if (key == "output_path") {
            cfg.output_path = value;
        } else if (key == "eig_low") {
            cfg.eig_low = detail::parse_double(key, value);
        } else if (key == "eig_high") {
            cfg.eig_high = detail::parse_double(key, value);
        } else if (key == "signal_kind") {
            if (value == "gaussian") cfg.signal_kind = SignalKind::gaussian;
            else if (value == "deterministic_orthogonal")
                cfg.signal_kind = SignalKind::deterministic_orthogonal;
            else
                throw ParseError("config error at key 'signal_kind': unknown "
                                 "kind '" + value + "'");
        } else if (key == "init") {
            if (value == "water_filling") cfg.init = InitKind::water_filling;
            else if (value == "uniform") cfg.init = InitKind::uniform;
            else
                throw ParseError("config error at key 'init': unknown init '" +
                                 value + "'");
        } else if (key == "sgp_batch_size") {
            cfg.sgp.batch_size = static_cast<int>(detail::parse_int(key, value));
        } else if (key == "sgp_max_iters") {
            cfg.sgp.max_iters = static_cast<int>(detail::parse_int(key, value));
        } else if (key == "sgp_tol") {
            cfg.sgp.tol = detail::parse_double(key, value);
        } else if (key == "sgp_step_a") {
            cfg.sgp.step_a = detail::parse_double(key, value);
        } else if (key == "sca_max_iters") {
            cfg.sca.max_iters = static_cast<int>(detail::parse_int(key, value));
        } else if (key == "sca_stop_gap") {
            cfg.sca.stop_gap = detail::parse_double(key, value);
        } else if (key == "line_search_grid") {
            cfg.sca.line_search_grid =
                static_cast<int>(detail::parse_int(key, value));
        } else if (key == "line_search_refine") {
            cfg.sca.line_search_refine =
                static_cast<int>(detail::parse_int(key, value));
        } else {
            throw ParseError("config error at key '" + key + "': unknown key");
        }
    }
    if (!have_scenario)
        throw ParseError("config error: missing required key 'scenario'");
    if (!have_sweep)
        throw ParseError("config error: missing required key 'sweep'");
    cfg.rebuild_system();
    cfg.validate();
    return cfg;
}

inline ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

// Canonical text form; parse_config_text(canonical_config_text(c)) == c.
inline std::string canonical_config_text(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "scenario = " << to_string(cfg.scenario) << '\n';
    out << "n_tx = " << cfg.n_tx << '\n';
    out << "n_rx = " << cfg.n_rx << '\n';
    out << "frame_len = " << cfg.frame_len << '\n';
    out << "power_dbm = " << detail::format_double(cfg.power_dbm) << '\n';
    out << "noise_dbm = " << detail::format_double(cfg.noise_dbm) << '\n';
    out << "master_seed = " << cfg.master_seed << '\n';
    out << "sweep =";
    for (std::size_t i = 0; i < cfg.sweep.size(); ++i)
        out << (i ? ", " : " ") << detail::format_double(cfg.sweep[i]);
    out << '\n';
    out << "precoders =";
    for (std::size_t i = 0; i < cfg.precoders.size(); ++i)
        out << (i ? ", " : " ") << to_string(cfg.precoders[i]);
    out << '\n';
    out << "batch_count = " << cfg.batch_count << '\n';
    out << "output_path = " << cfg.output_path << '\n';
    out << "eig_low = " << detail::format_double(cfg.eig_low) << '\n';
    out << "eig_high = " << detail::format_double(cfg.eig_high) << '\n';
    out << "signal_kind = " << to_string(cfg.signal_kind) << '\n';
    out << "init = " << to_string(cfg.init) << '\n';
    out << "sgp_batch_size = " << cfg.sgp.batch_size << '\n';
    out << "sgp_max_iters = " << cfg.sgp.max_iters << '\n';
    out << "sgp_tol = " << detail::format_double(cfg.sgp.tol) << '\n';
    out << "sgp_step_a = " << detail::format_double(cfg.sgp.step_a) << '\n';
    out << "sca_max_iters = " << cfg.sca.max_iters << '\n';
    out << "sca_stop_gap = " << detail::format_double(cfg.sca.stop_gap) << '\n';
    out << "line_search_grid = " << cfg.sca.line_search_grid << '\n';
    out << "line_search_refine = " << cfg.sca.line_search_refine << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// Results

struct ResultRow {
    double sweep_point = 0.0;
    std::string scheme;
    double metric_mean = 0.0;
    double metric_stderr = 0.0;
    double wall_clock = 0.0; // seconds; not part of the CSV bytes
};

struct ResultTable {
    std::vector<ResultRow> rows;
};

// CSV bytes for a result table. wall_clock is intentionally left out so that
// repeated runs with the same seed are byte-identical.
inline std::string to_run_csv(const ResultTable& table) {
    std::ostringstream out;
    out << "sweep_point,scheme,metric_mean,metric_stderr\n";
    for (const auto& row : table.rows)
        out << detail::format_double(row.sweep_point) << ',' << row.scheme << ','
            << detail::format_double(row.metric_mean) << ','
            << detail::format_double(row.metric_stderr) << '\n';
    return out.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file '" + path + "'");
    out << text;
    if (!out) throw IoError("failed writing output file '" + path + "'");
}

// CSV export of a convergence trace: one row per iteration, in order.
inline std::string to_trace_csv(const ConvergenceTrace& trace) {
    std::ostringstream out;
    out << "iteration,objective,step_size,descent_gap\n";
    for (const auto& rec : trace.iterations)
        out << rec.index << ',' << detail::format_double(rec.objective) << ','
            << detail::format_double(rec.step_size) << ','
            << detail::format_double(rec.descent_gap) << '\n';
    return out.str();
}

inline void export_trace(const ConvergenceTrace& trace, const std::string& path) {
    write_text_file(path, to_trace_csv(trace));
}

// Reads back a trace CSV written by export_trace (wall_clock is not stored).
inline ConvergenceTrace read_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open trace file '" + path + "'");
    ConvergenceTrace trace;
    std::string line;
    if (!std::getline(in, line) ||
        line != "iteration,objective,step_size,descent_gap")
        throw ParseError("trace file '" + path + "': bad header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string cur;
        for (char c : line) {
            if (c == ',') fields.push_back(std::exchange(cur, {}));
            else cur.push_back(c);
        }
        fields.push_back(cur);
        if (fields.size() != 4)
            throw ParseError("trace file '" + path + "': bad row");
        IterationRecord rec;
        rec.index = static_cast<int>(detail::parse_int("iteration", fields[0]));
        rec.objective = detail::parse_double("objective", fields[1]);
        rec.step_size = detail::parse_double("step_size", fields[2]);
        rec.descent_gap = detail::parse_double("descent_gap", fields[3]);
        trace.iterations.push_back(rec);
    }
    return trace;
}

// ---------------------------------------------------------------------------
// Scenario runners

namespace detail {

// Fixed substream indices off the master seed; scenario results must not
// depend on evaluation order or thread count.
inline constexpr std::uint64_t kSeedCorrelation = 1;
inline constexpr std::uint64_t kSeedEvalBatch = 2;
inline constexpr std::uint64_t kSeedSgpTraining = 3;
inline constexpr std::uint64_t kSeedConvergenceSample = 4;

inline SystemConfig system_for_snr(const ExperimentConfig& cfg, double snr_db) {
    // Realize the target transmit SNR = L P / sigma^2 by adjusting P at
    // fixed noise and frame length.
    SystemConfig sys = cfg.system;
    const double snr_linear = std::pow(10.0, snr_db / 10.0);
    sys.power = snr_linear * sys.noise_var / static_cast<double>(sys.frame_len);
    sys.validate();
    return sys;
}

inline Precoder initial_precoder(const ExperimentConfig& cfg,
                                 const SystemConfig& sys,
                                 const CorrelationMatrix& corr) {
    if (cfg.init == InitKind::uniform) return uniform_precoder(sys);
    return water_filling(sys, corr).precoder;
}

inline double elapsed_seconds(
    const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
}

} // namespace detail

// Executes the configured scenario and writes the result CSV to
// cfg.output_path. Row layout per scenario (one row per sweep point and
// scheme):
//   asymptotic_L:  schemes "random", "deterministic", "gap" for the
//                  water-filling precoder at each frame length L.
//   convergence:   schemes "sca" and/or "sgp"; metric is the final objective
//                  at each SNR point (per-iteration data via export_trace).
//   snr_sweep:     one scheme per requested precoder, ELMMSE on a held-out
//                  batch of batch_count Gaussian samples.
//   det_vs_random: schemes "<precoder>_random", "<precoder>_deterministic",
//                  "<precoder>_gap" at each SNR point.
inline ResultTable run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const CorrelationMatrix corr =
        gen_correlation(cfg.n_tx, cfg.eig_low, cfg.eig_high,
                        substream(cfg.master_seed, detail::kSeedCorrelation));
    ResultTable table;

    for (std::size_t idx = 0; idx < cfg.sweep.size(); ++idx) {
        const double point = cfg.sweep[idx];
        const auto start = std::chrono::steady_clock::now();
        const std::uint64_t eval_seed =
            substream(substream(cfg.master_seed, detail::kSeedEvalBatch), idx);
        const std::uint64_t train_seed = substream(
            substream(cfg.master_seed, detail::kSeedSgpTraining), idx);

        switch (cfg.scenario) {
        case Scenario::asymptotic_l: {
            SystemConfig sys = cfg.system;
            sys.frame_len = static_cast<int>(point);
            sys.validate();
            const WaterFillingResult wf = water_filling(sys, corr);
            const SignalBatch batch =
                sample_signals(sys, cfg.batch_count, cfg.signal_kind, eval_seed);
            const ElmmseEstimate est =
                monte_carlo_elmmse(wf.precoder, batch, sys, corr);
            const double bound = jensen_bound(wf.precoder, sys, corr);
            const double wc = detail::elapsed_seconds(start);
            table.rows.push_back({point, "random", est.mean, est.std_error, wc});
            table.rows.push_back({point, "deterministic", bound, 0.0, wc});
            table.rows.push_back(
                {point, "gap", est.mean - bound, est.std_error, wc});
            break;
        }
        case Scenario::convergence: {
            const SystemConfig sys = detail::system_for_snr(cfg, point);
            const Precoder init = detail::initial_precoder(cfg, sys, corr);
            if (cfg.has_precoder(PrecoderScheme::data_dependent)) {
                const SignalBatch one = sample_signals(
                    sys, 1, SignalKind::gaussian,
                    substream(substream(cfg.master_seed,
                                        detail::kSeedConvergenceSample),
                              idx));
                const auto [w, trace] =
                    sca_optimize(one.samples[0], init, cfg.sca, sys, corr);
                table.rows.push_back({point, "sca",
                                      trace.iterations.back().objective, 0.0,
                                      detail::elapsed_seconds(start)});
            }
            if (cfg.has_precoder(PrecoderScheme::sgp)) {
                const auto [w, trace] =
                    sgp_optimize(sys, corr, init, cfg.sgp, train_seed);
                const SignalBatch eval = sample_signals(
                    sys, cfg.batch_count, SignalKind::gaussian, eval_seed);
                const ElmmseEstimate est = monte_carlo_elmmse(w, eval, sys, corr);
                table.rows.push_back({point, "sgp", est.mean, est.std_error,
                                      detail::elapsed_seconds(start)});
            }
            break;
        }
        case Scenario::snr_sweep: {
            const SystemConfig sys = detail::system_for_snr(cfg, point);
            const SignalBatch held_out = sample_signals(
                sys, cfg.batch_count, SignalKind::gaussian, eval_seed);
            const Precoder init = detail::initial_precoder(cfg, sys, corr);
            for (PrecoderScheme scheme : cfg.precoders) {
                const auto scheme_start = std::chrono::steady_clock::now();
                switch (scheme) {
                case PrecoderScheme::water_filling: {
                    const WaterFillingResult wf = water_filling(sys, corr);
                    const ElmmseEstimate est =
                        monte_carlo_elmmse(wf.precoder, held_out, sys, corr);
                    table.rows.push_back({point, "water_filling", est.mean,
                                          est.std_error,
                                          detail::elapsed_seconds(scheme_start)});
                    break;
                }
                case PrecoderScheme::sgp: {
                    const auto [w, trace] =
                        sgp_optimize(sys, corr, init, cfg.sgp, train_seed);
                    const ElmmseEstimate est =
                        monte_carlo_elmmse(w, held_out, sys, corr);
                    table.rows.push_back({point, "sgp", est.mean, est.std_error,
                                          detail::elapsed_seconds(scheme_start)});
                    break;
                }
                case PrecoderScheme::data_dependent: {
                    const auto [ws, mean] =
                        data_dependent_suite(held_out, init, cfg.sca, sys, corr);
                    // Recompute per-sample objectives for the spread.
                    std::vector<double> values(ws.size());
                    parallel_for(ws.size(), [&](std::size_t i) {
                        values[i] =
                            conditional_mse(ws[i], held_out.samples[i], corr,
                                            sys.noise_var, sys.n_rx);
                    });
                    double se = 0.0;
                    if (values.size() > 1) {
                        std::vector<double> sq(values.size());
                        for (std::size_t i = 0; i < values.size(); ++i) {
                            const double d = values[i] - mean;
                            sq[i] = d * d;
                        }
                        se = std::sqrt(pairwise_sum(sq) /
                                       static_cast<double>(values.size() - 1) /
                                       static_cast<double>(values.size()));
                    }
                    table.rows.push_back({point, "data_dependent", mean, se,
                                          detail::elapsed_seconds(scheme_start)});
                    break;
                }
                }
            }
            break;
        }
        case Scenario::det_vs_random: {
            const SystemConfig sys = detail::system_for_snr(cfg, point);
            const SignalBatch batch = sample_signals(sys, cfg.batch_count,
                                                     cfg.signal_kind, eval_seed);
            const Precoder init = detail::initial_precoder(cfg, sys, corr);
            for (PrecoderScheme scheme : cfg.precoders) {
                const auto scheme_start = std::chrono::steady_clock::now();
                Precoder w;
                if (scheme == PrecoderScheme::water_filling)
                    w = water_filling(sys, corr).precoder;
                else
                    w = sgp_optimize(sys, corr, init, cfg.sgp, train_seed).first;
                const ElmmseEstimate est = monte_carlo_elmmse(w, batch, sys, corr);
                const double bound = jensen_bound(w, sys, corr);
                const std::string name = to_string(scheme);
                const double wc = detail::elapsed_seconds(scheme_start);
                table.rows.push_back(
                    {point, name + "_random", est.mean, est.std_error, wc});
                table.rows.push_back({point, name + "_deterministic", bound,
                                      0.0, wc});
                table.rows.push_back({point, name + "_gap", est.mean - bound,
                                      est.std_error, wc});
            }
            break;
        }
        }
    }

    write_text_file(cfg.output_path, to_run_csv(table));
    return table;
}

} // namespace randsense
