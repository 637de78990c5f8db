// Command-line front end: sliding-window anomaly detection on a CSV series,
// classically, simulated, or both with accuracy promises checked.

#include <cstdio>
#include <exception>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "adpaad/runner.hpp"

namespace {

void print_scores(const char* label, const nlohmann::ordered_json& node) {
    std::printf("%s scores:", label);
    for (const auto& v : node["scores"]) std::printf(" %.6f", v.get<double>());
    std::printf("  detected:");
    for (const auto& v : node["detected"]) std::printf(" %d", v.get<int>());
    std::printf("\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Sliding-window anomaly scores over per-subsection means, computed "
        "exactly and by a simulated amplitude-estimation pipeline"};

    adpaad::RunConfig cfg;
    app.add_option("--input", cfg.input_path, "CSV file with the series")->required();
    app.add_option("--column", cfg.column,
                   "CSV column name (default: the sole/first column)");
    app.add_option("--window", cfg.window, "window length n")->required();
    app.add_option("--stride", cfg.stride, "window stride (default 1)");
    app.add_option("--subsections", cfg.q, "subsections per window q (default 4)");
    app.add_option("--delta", cfg.delta, "detection threshold (default 1.0)");
    app.add_option("--epsilon", cfg.epsilon, "score tolerance (default 0.1)");

    const std::map<std::string, adpaad::RunMode> modes{
        {"classical", adpaad::RunMode::classical},
        {"quantum", adpaad::RunMode::quantum},
        {"compare", adpaad::RunMode::compare}};
    app.add_option("--mode", cfg.mode, "classical | quantum | compare")
        ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));

    const std::map<std::string, adpaad::AaMode> aa_modes{
        {"postselect", adpaad::AaMode::postselect},
        {"amplified", adpaad::AaMode::amplified}};
    app.add_option("--aa-mode", cfg.aa_mode,
                   "membership handling: postselect | amplified")
        ->transform(CLI::CheckedTransformer(aa_modes, CLI::ignore_case));
    app.add_option("--aa-iterations", cfg.aa_iterations,
                   "amplification steps in amplified mode (default 1)");

    const std::map<std::string, adpaad::MembershipRule> rules{
        {"half-open", adpaad::MembershipRule::half_open},
        {"sign-test", adpaad::MembershipRule::sign_test}};
    app.add_option("--membership", cfg.membership,
                   "subsection test: half-open | sign-test")
        ->transform(CLI::CheckedTransformer(rules, CLI::ignore_case));

    const std::map<std::string, adpaad::AeMode> ae_modes{
        {"deterministic", adpaad::AeMode::deterministic},
        {"sampled", adpaad::AeMode::sampled}};
    app.add_option("--ae-mode", cfg.ae_mode,
                   "phase readout: deterministic | sampled")
        ->transform(CLI::CheckedTransformer(ae_modes, CLI::ignore_case));

    const std::map<std::string, adpaad::GroverStrategy> strategies{
        {"known-count", adpaad::GroverStrategy::known_count},
        {"unknown-count", adpaad::GroverStrategy::unknown_count}};
    app.add_option("--search-strategy", cfg.grover,
                   "threshold search: known-count | unknown-count")
        ->transform(CLI::CheckedTransformer(strategies, CLI::ignore_case));

    app.add_option("--precision-qubits", cfg.precision_qubits,
                   "fix every stage's phase register width (1..24)");
    app.add_option("--fixed-point-bits", cfg.total_bits,
                   "total fixed-point bits incl. sign (default: widened to fit)");
    app.add_option("--frac-bits", cfg.frac_bits, "fixed-point fraction bits");
    app.add_option("--seed", cfg.seed, "RNG seed (default 42)");
    app.add_option("--report", cfg.report_path, "write the JSON report here");
    app.add_option("--emit-plot-data", cfg.plot_data_dir,
                   "write scaling-sweep and score CSVs into this directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // --help is a clean exit
    }

    try {
        auto out = adpaad::execute(cfg);
        const auto& j = out.report;
        std::printf("series: %zu samples, digest %s, shift %+g, C = %g\n",
                    size_t(j["input"]["samples"].get<uint64_t>()),
                    j["input"]["digest"].get<std::string>().c_str(),
                    j["input"]["shift"].get<double>(),
                    j["input"]["amplitude_bound"].get<double>());
        std::printf("budget: eps = %g, widths m = [%d %d %d %d]\n",
                    j["budget"]["epsilon"].get<double>(), j["budget"]["m1"].get<int>(),
                    j["budget"]["m2"].get<int>(), j["budget"]["m3"].get<int>(),
                    j["budget"]["m4"].get<int>());
        print_scores("classical", j["classical"]);
        if (j.contains("quantum")) {
            print_scores("simulated", j["quantum"]);
            std::printf("oracle calls: %llu\n",
                        static_cast<unsigned long long>(
                            j["quantum"]["oracle_calls"]["total_x"].get<uint64_t>()));
        }
        if (j.contains("compare")) {
            const auto& c = j["compare"];
            std::printf(
                "promises: mean %.3g <= %.3g %s | distance %.3g <= %.3g %s | "
                "score %.3g <= %.3g %s | detection %s => %s\n",
                c["mu_err"].get<double>(), c["mu_bound"].get<double>(),
                c["mu_ok"].get<bool>() ? "ok" : "FAIL", c["sim_err"].get<double>(),
                c["sim_bound"].get<double>(), c["sim_ok"].get<bool>() ? "ok" : "FAIL",
                c["score_err"].get<double>(), c["score_bound"].get<double>(),
                c["score_ok"].get<bool>() ? "ok" : "FAIL",
                c["detection_match"].get<bool>() ? "match" : "MISMATCH",
                c["ok"].get<bool>() ? "OK" : "FAIL");
        }
        if (!cfg.report_path.empty()) std::printf("report: %s\n", cfg.report_path.c_str());
        if (!cfg.plot_data_dir.empty())
            std::printf("plot data: %s\n", cfg.plot_data_dir.c_str());
        return out.exit_code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
