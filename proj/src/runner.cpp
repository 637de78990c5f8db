#include "adpaad/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include "adpaad/timeseries.hpp"

namespace adpaad {

namespace {

const char* mode_name(RunMode m) {
    switch (m) {
        case RunMode::classical: return "classical";
        case RunMode::quantum: return "quantum";
        case RunMode::compare: return "compare";
    }
    return "?";
}

const char* aa_name(AaMode m) {
    return m == AaMode::postselect ? "postselect" : "amplified";
}

const char* ae_name(AeMode m) {
    return m == AeMode::deterministic ? "deterministic" : "sampled";
}

const char* membership_name(MembershipRule r) {
    return r == MembershipRule::half_open ? "half-open" : "sign-test";
}

const char* strategy_name(GroverStrategy s) {
    return s == GroverStrategy::known_count ? "known-count" : "unknown-count";
}

std::string hex64(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ErrorBudget make_budget(const RunConfig& cfg, const SimilarityScale& scale) {
    if (cfg.precision_qubits) {
        const int p = *cfg.precision_qubits;
        if (p < 1 || p > 24)
            throw std::invalid_argument("precision qubits must be in 1..24");
        ErrorBudget b;
        b.eps = cfg.epsilon;
        b.m1 = b.m2 = b.m3 = b.m4 = p;
        // a fixed width promises exactly its phase-grid accuracy per stage
        b.eps1 = b.eps2 = b.eps3 = 3.14159265358979323846 / std::pow(2.0, p);
        return b;
    }
    if (scale.degenerate) return ErrorBudget::uniform(cfg.epsilon);
    return ErrorBudget::derive(cfg.epsilon, scale.value);
}

nlohmann::ordered_json counters_json(const OracleCounters& c) {
    nlohmann::ordered_json j;
    j["stage1_x"] = c.stage1_x;
    j["stage1_bounds"] = c.stage1_bounds;
    j["stage2_x"] = c.stage2_x;
    j["stage3_x"] = c.stage3_x;
    j["stage4_x"] = c.stage4_x;
    j["score_evaluations"] = c.score_evaluations;
    j["total_x"] = c.total_x();
    return j;
}

}  // namespace

uint64_t fnv1a64(const void* data, size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    uint64_t h = 0xcbf29ce484222325ull;
    for (size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

double nonnegative_shift(const std::vector<double>& samples) {
    double lo = 0.0;
    for (double v : samples) lo = std::min(lo, v);
    return lo < 0.0 ? -lo : 0.0;
}

FixedPointFormat widened_format(int m_max, double C, size_t K) {
    if (!(C > 0.0)) throw std::invalid_argument("amplitude bound must be positive");
    int f = m_max + 10;
    if (C < 1.0) f += int(std::ceil(std::log2(1.0 / C)));
    f = std::max(f, 16);
    // integer bits must hold every intermediate: squared scale, window count
    const double reach = std::max({4.0 * C * C, double(K), 4.0});
    const int int_bits = std::max(1, int(std::ceil(std::log2(reach + 1.0))));
    f = std::min(f, 63 - 1 - int_bits);
    f = std::max(f, 4);
    FixedPointFormat fmt{1 + int_bits + f, f};
    if (!fmt.valid()) throw std::invalid_argument("series range defeats the fixed-point widener");
    return fmt;
}

RunOutcome execute(const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();

    TimeSeries ts =
        cfg.input_path.empty() ? TimeSeries{cfg.samples} : load_series(cfg.input_path, cfg.column);
    if (ts.samples.empty()) throw std::invalid_argument("the series is empty");

    const uint64_t digest =
        fnv1a64(ts.samples.data(), ts.samples.size() * sizeof(double));
    const double shift = nonnegative_shift(ts.samples);
    if (shift > 0.0)
        for (double& v : ts.samples) v += shift;

    auto views = subsequences(ts, WindowPlan{int(cfg.window), int(cfg.stride)});

    ClassicalOpCount ops;
    auto p = paad(views, cfg.q, &ops);
    auto S = similarity(p, &ops);
    auto h = anomaly_scores(S, &ops);
    auto classical_detected = detect(h, cfg.delta);

    const double C = max_abs_sample(views);
    auto scale = estimate_scale(p.mu, C);
    const bool pair_ok = pair_assumption_holds(p.mu, C, scale.value);
    auto budget = make_budget(cfg, scale);

    FixedPointFormat fmt;
    std::string fmt_source = "auto-widened";
    if (cfg.total_bits || cfg.frac_bits) {
        fmt.total_bits = cfg.total_bits.value_or(fmt.total_bits);
        fmt.frac_bits = cfg.frac_bits.value_or(fmt.frac_bits);
        fmt_source = "explicit";
        if (!fmt.valid()) throw std::invalid_argument("invalid fixed-point format");
    } else {
        const int m_max = std::max({budget.m1, budget.m2, budget.m3, budget.m4});
        fmt = widened_format(m_max, C, views.size());
    }

    RunOutcome out;
    auto& j = out.report;
    j["schema"] = "adpaad-report/1";
    j["input"] = {{"path", cfg.input_path},
                  {"column", cfg.column},
                  {"samples", ts.samples.size()},
                  {"digest", hex64(digest)},
                  {"shift", shift},
                  {"amplitude_bound", C}};
    j["config"] = {{"mode", mode_name(cfg.mode)},
                   {"window", cfg.window},
                   {"stride", cfg.stride},
                   {"subsections", cfg.q},
                   {"delta", cfg.delta},
                   {"epsilon", cfg.epsilon},
                   {"aa_mode", aa_name(cfg.aa_mode)},
                   {"aa_iterations", cfg.aa_iterations},
                   {"membership", membership_name(cfg.membership)},
                   {"ae_mode", ae_name(cfg.ae_mode)},
                   {"search_strategy", strategy_name(cfg.grover)},
                   {"seed", cfg.seed},
                   {"fixed_point",
                    {{"total_bits", fmt.total_bits},
                     {"frac_bits", fmt.frac_bits},
                     {"source", fmt_source}}}};
    if (cfg.precision_qubits)
        j["config"]["precision_qubits"] = *cfg.precision_qubits;

    j["scale"] = {{"value", scale.value},
                  {"fraction_ge", scale.fraction_ge},
                  {"degenerate", scale.degenerate},
                  {"pair_assumption", pair_ok}};
    j["budget"] = {{"epsilon", budget.eps}, {"eps1", budget.eps1},
                   {"eps2", budget.eps2},   {"eps3", budget.eps3},
                   {"scale", budget.scale}, {"m1", budget.m1},
                   {"m2", budget.m2},       {"m3", budget.m3},
                   {"m4", budget.m4}};
    j["classical"] = {{"scores", h},
                      {"detected", classical_detected},
                      {"ops",
                       {{"paad", ops.paad_ops},
                        {"similarity", ops.similarity_ops},
                        {"score", ops.score_ops},
                        {"total", ops.total()}}}};

    PipelineResult result;
    const bool run_quantum = cfg.mode != RunMode::classical;
    if (run_quantum) {
        PipelineConfig pc;
        pc.q = cfg.q;
        budget.apply(pc);
        pc.ae_mode = cfg.ae_mode;
        pc.aa_mode = cfg.aa_mode;
        pc.aa_iterations = cfg.aa_iterations;
        pc.membership = cfg.membership;
        pc.fx = fmt;
        pc.grover = cfg.grover;
        pc.seed = cfg.seed;
        pc.delta = cfg.delta;
        result = run_pipeline(views, pc);

        nlohmann::ordered_json mu = nlohmann::ordered_json::array();
        for (const auto& row : result.stage1.branches) {
            // decoded view of the estimated mean table, in branch order
            mu.push_back(row.mu_hat);
        }
        j["quantum"] = {{"scores", result.scores.h_hat},
                        {"detected", result.detected},
                        {"mean_estimates", mu},
                        {"global_mean", result.scores.global_hat},
                        {"keep_probability", result.stage1.keep_probability},
                        {"calibration", result.stage1.calibration},
                        {"oracle_calls", counters_json(result.counters)},
                        {"search",
                         {{"rounds", result.grover.rounds},
                          {"iterations", result.grover.iterations},
                          {"measurements", result.grover.measurements},
                          {"verifications", result.grover.verifications},
                          {"sweep_checks", result.grover.sweep_checks}}}};
    }

    if (cfg.mode == RunMode::compare) {
        auto rep = check_budget(views, cfg.q, result, budget);
        const bool detection_match = result.detected == classical_detected;
        j["compare"] = {{"detection_match", detection_match},
                        {"mu_err", rep.mu_err},       {"mu_bound", rep.mu_bound},
                        {"mu_ok", rep.mu_ok},         {"sim_err", rep.sim_err},
                        {"sim_bound", rep.sim_bound}, {"sim_ok", rep.sim_ok},
                        {"score_err", rep.score_err}, {"score_bound", rep.score_bound},
                        {"score_ok", rep.score_ok},   {"ok", rep.ok() && detection_match}};
        if (!(rep.ok() && detection_match)) out.exit_code = 3;
    }

    if (!cfg.plot_data_dir.empty()) {
        write_plot_csv(complexity_report(), cfg.plot_data_dir);
        std::ofstream sc(cfg.plot_data_dir + "/scores.csv");
        if (!sc) throw std::runtime_error("cannot write " + cfg.plot_data_dir + "/scores.csv");
        sc << (run_quantum ? "window,h_classical,h_quantum\n" : "window,h_classical\n");
        for (size_t i = 0; i < h.size(); ++i) {
            sc << (i + 1) << "," << h[i];
            if (run_quantum) sc << "," << result.scores.h_hat[i];
            sc << "\n";
        }
    }

    const auto t1 = std::chrono::steady_clock::now();
    j["timing"] = {
        {"timestamp", utc_timestamp()},
        {"wall_ms", std::chrono::duration<double, std::milli>(t1 - t0).count()}};

    if (!cfg.report_path.empty()) {
        std::ofstream outfile(cfg.report_path);
        if (!outfile) throw std::runtime_error("cannot write " + cfg.report_path);
        outfile << j.dump(2) << "\n";
    }
    return out;
}

}  // namespace adpaad
