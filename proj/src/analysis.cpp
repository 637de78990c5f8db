#include "adpaad/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "adpaad/timeseries.hpp"

namespace adpaad {

namespace {

constexpr double kPi = std::numbers::pi;

TimeSeries ramp_series(size_t count) {
    TimeSeries ts;
    ts.samples.resize(count);
    for (size_t i = 0; i < count; ++i) ts.samples[i] = double(i + 1);
    return ts;
}

}  // namespace

int width_for(double eps_i) {
    if (!(eps_i > 0.0)) throw std::invalid_argument("accuracy target must be positive");
    int m = int(std::ceil(std::log2(kPi / eps_i)));
    return std::clamp(m, 1, 24);
}

ErrorBudget ErrorBudget::derive(double eps, double E) {
    if (!(eps > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (!(E > 0.0)) throw std::invalid_argument("similarity scale must be positive");
    ErrorBudget b;
    b.eps = eps;
    // The means enter each distance through a difference of two of them and
    // the distances enter each score through a ratio whose denominator is
    // at least a fixed multiple of E, so the mean share is scaled by E^2
    // and the two upper layers by E.  The remaining slack is the overall
    // tolerance itself, which is a property of the output, not a register.
    b.scale = E;
    b.eps1 = E * E * eps / 6.0;
    b.eps2 = E * eps / 3.0;
    b.eps3 = E * eps / 3.0;
    b.m1 = width_for(b.eps1);
    b.m2 = width_for(b.eps2);
    b.m3 = width_for(b.eps3);
    b.m4 = b.m3;  // numerator and denominator estimates share one width
    return b;
}

ErrorBudget ErrorBudget::uniform(double eps) {
    ErrorBudget b;
    b.eps = eps;
    b.eps1 = b.eps2 = b.eps3 = eps;
    b.m1 = b.m2 = b.m3 = b.m4 = width_for(eps);
    return b;
}

void ErrorBudget::apply(PipelineConfig& cfg) const {
    cfg.m1 = m1;
    cfg.m2 = m2;
    cfg.m3 = m3;
    cfg.m4 = m4;
}

double median_of_positive(std::vector<double> values) {
    values.erase(std::remove_if(values.begin(), values.end(),
                                [](double v) { return !(v > 0.0); }),
                 values.end());
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

SimilarityScale estimate_scale(const std::vector<std::vector<double>>& mu,
                               double C) {
    if (!(C > 0.0)) throw std::invalid_argument("amplitude bound must be positive");
    SimilarityScale out;
    std::vector<double> diffs;
    for (size_t i = 0; i < mu.size(); ++i)
        for (size_t k = i + 1; k < mu.size(); ++k)
            for (size_t t = 0; t < mu[i].size(); ++t)
                diffs.push_back(std::fabs(mu[i][t] - mu[k][t]) / (2.0 * C));
    out.value = median_of_positive(diffs);
    out.degenerate = !(out.value > 0.0);
    if (out.degenerate) return out;
    size_t ge = 0, positive = 0;
    for (double v : diffs) {
        if (!(v > 0.0)) continue;
        ++positive;
        if (v >= out.value - 1e-12) ++ge;
    }
    out.fraction_ge = double(ge) / double(positive);
    return out;
}

std::vector<std::vector<double>> normalized_similarity(
    const std::vector<std::vector<double>>& S, double C, int q) {
    if (!(C > 0.0)) throw std::invalid_argument("amplitude bound must be positive");
    const double scale = 2.0 * C * std::sqrt(double(q));
    auto out = S;
    for (auto& row : out)
        for (double& v : row) v /= scale;
    return out;
}

bool scale_assumption_holds(const SimilarityScale& scale) {
    return !scale.degenerate && scale.fraction_ge >= 0.5 - 1e-12;
}

bool pair_assumption_holds(const std::vector<std::vector<double>>& mu,
                           double C, double E) {
    if (!(C > 0.0) || !(E > 0.0)) return false;
    for (size_t i = 0; i < mu.size(); ++i) {
        for (size_t k = i + 1; k < mu.size(); ++k) {
            const size_t q = mu[i].size();
            size_t hit = 0;
            for (size_t t = 0; t < q; ++t)
                if (std::fabs(mu[i][t] - mu[k][t]) / (2.0 * C) >= E - 1e-12) ++hit;
            if (hit < (q + 1) / 2) return false;
        }
    }
    return true;
}

BoundReport check_budget(const WindowViews& views, int q,
                         const PipelineResult& result, const ErrorBudget& budget) {
    BoundReport rep;
    auto p = paad(views, q);
    auto S = similarity(p);
    auto h = anomaly_scores(S);
    const double C = max_abs_sample(views);
    auto sbar = normalized_similarity(S, C, q);

    for (const auto& b : result.stage1.branches) {
        const double exact = p.mu[size_t(b.window)][size_t(b.subsection - 1)];
        rep.mu_err = std::max(rep.mu_err, std::fabs(b.mu_hat - exact));
    }
    rep.mu_bound = C * budget.eps1;
    rep.mu_ok = rep.mu_err <= rep.mu_bound;

    const size_t K = sbar.size();
    for (size_t i = 0; i < K; ++i)
        for (size_t k = i + 1; k < K; ++k)
            rep.sim_err = std::max(
                rep.sim_err, std::fabs(result.stage2.sbar_hat[i][k] - sbar[i][k]));
    rep.sim_bound = budget.scale > 0.0
                        ? budget.eps2 + 2.0 * budget.eps1 / budget.scale
                        : budget.eps2 + budget.eps1;
    rep.sim_ok = rep.sim_err <= rep.sim_bound;

    for (size_t i = 0; i < K; ++i)
        rep.score_err = std::max(rep.score_err,
                                 std::fabs(result.scores.h_hat[i] - h[i]));
    rep.score_bound = budget.eps;
    rep.score_ok = rep.score_err <= rep.score_bound;
    return rep;
}

double loglog_slope(const std::vector<SweepPoint>& pts) {
    if (pts.size() < 2) throw std::invalid_argument("need at least two sweep points");
    double sx = 0, sy = 0;
    for (const auto& p : pts) {
        sx += std::log2(p.x);
        sy += std::log2(p.count);
    }
    const double mx = sx / double(pts.size());
    const double my = sy / double(pts.size());
    double num = 0, den = 0;
    for (const auto& p : pts) {
        const double dx = std::log2(p.x) - mx;
        num += dx * (std::log2(p.count) - my);
        den += dx * dx;
    }
    return num / den;
}

ComplexityReport complexity_report() {
    ComplexityReport rep;

    // Window-length sweep: two balanced ramp windows per instance, so the
    // membership amplitude is exactly 1/sqrt(2) and the amplification
    // schedule below keeps the estimate calibrated at every length.
    for (int n : {4, 8, 16, 32}) {
        auto ts = ramp_series(size_t(2 * n));
        auto views = subsequences(ts, WindowPlan{n, n});
        PipelineConfig cfg;
        cfg.q = 2;
        cfg.m1 = 8;
        cfg.m2 = cfg.m3 = cfg.m4 = 4;
        cfg.aa_mode = AaMode::amplified;
        cfg.aa_iterations =
            std::max(1, int(std::lround(kPi * std::sqrt(double(n)) / 4.0 - 0.5)));
        // Only the mean-estimation layer scales with n, so run just that
        // layer; the later layers would need far wider registers here.
        OracleCounters counters;
        std::mt19937_64 rng(cfg.seed);
        estimate_subsection_means(views, cfg, max_abs_sample(views), counters, rng);
        rep.quantum_n.push_back({double(n), double(counters.stage1_x)});
    }
    rep.quantum_slope = loglog_slope(rep.quantum_n);

    // Window-count sweep of the classical chain's pairwise-distance work.
    for (int K : {4, 8, 16}) {
        auto ts = ramp_series(size_t(K + 3));
        auto views = subsequences(ts, WindowPlan{4, 1});
        ClassicalOpCount ops;
        auto p = paad(views, 4, &ops);
        similarity(p, &ops);
        rep.classical_k.push_back({double(K), double(ops.similarity_ops)});
    }
    rep.classical_slope = loglog_slope(rep.classical_k);

    // Cost ratio between the distance layer and the mean layer.
    for (int m2 : {6, 8, 10}) {
        PipelineConfig cfg;
        cfg.q = 2;
        cfg.m1 = 8;
        cfg.m2 = m2;
        cfg.m3 = cfg.m4 = 6;
        auto ts = ramp_series(6);
        auto views = subsequences(ts, WindowPlan{4, 1});
        auto res = run_pipeline(views, cfg);
        LayerRatio row;
        row.m2 = m2;
        row.observed = res.counters.stage2_x / res.counters.stage1_x;
        row.predicted = 2 * ((uint64_t{1} << (m2 + 1)) - 1);
        rep.ratios.push_back(row);
    }
    return rep;
}

void write_plot_csv(const ComplexityReport& report, const std::string& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir + "/quantum_n.csv");
        if (!out) throw std::runtime_error("cannot write " + dir + "/quantum_n.csv");
        out << "n,oracle_calls\n";
        for (const auto& p : report.quantum_n)
            out << int(p.x) << "," << uint64_t(p.count) << "\n";
    }
    {
        std::ofstream out(dir + "/classical_k.csv");
        if (!out) throw std::runtime_error("cannot write " + dir + "/classical_k.csv");
        out << "K,distance_ops\n";
        for (const auto& p : report.classical_k)
            out << int(p.x) << "," << uint64_t(p.count) << "\n";
    }
    {
        std::ofstream out(dir + "/layer_ratio.csv");
        if (!out) throw std::runtime_error("cannot write " + dir + "/layer_ratio.csv");
        out << "m2,observed_ratio,predicted_ratio\n";
        for (const auto& r : report.ratios)
            out << r.m2 << "," << r.observed << "," << r.predicted << "\n";
    }
}

}  // namespace adpaad
