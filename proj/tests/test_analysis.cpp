#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "adpaad/analysis.hpp"
#include "adpaad/classical.hpp"
#include "adpaad/qadpaad.hpp"
#include "adpaad/timeseries.hpp"

using namespace adpaad;

namespace {

WindowViews w6_views() {
    static const TimeSeries ts{{1, 2, 3, 4, 5, 6}};
    return subsequences(ts, WindowPlan{4, 1});
}

}  // namespace

TEST_CASE("register widths follow the tolerance split") {
    auto b = ErrorBudget::derive(0.1, 1.0 / 12.0);
    CHECK(b.eps1 == doctest::Approx(1.0 / 144.0 * 0.1 / 6.0).epsilon(1e-12));
    CHECK(b.eps2 == doctest::Approx(0.1 / 36.0).epsilon(1e-12));
    CHECK(b.eps3 == b.eps2);
    CHECK(b.scale == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
    CHECK(b.m1 == 15);
    CHECK(b.m2 == 11);
    CHECK(b.m3 == 11);
    CHECK(b.m4 == 11);

    auto u = ErrorBudget::uniform(0.1);
    CHECK(u.m1 == 5);
    CHECK(u.m4 == 5);
    CHECK(ErrorBudget::uniform(1e-9).m1 == 24);  // clamped to the simulator cap

    CHECK_THROWS_AS(width_for(0.0), std::invalid_argument);
    CHECK_THROWS_AS(ErrorBudget::derive(0.1, 0.0), std::invalid_argument);
}

TEST_CASE("median of positive entries drops zeros and averages even counts") {
    CHECK(median_of_positive({3, 1, 2}) == 2.0);
    CHECK(median_of_positive({4, 1, 3, 2}) == 2.5);
    CHECK(median_of_positive({0, 5, 0, 7}) == 6.0);
    CHECK(median_of_positive({}) == 0.0);
    CHECK(median_of_positive({0, 0}) == 0.0);
}

TEST_CASE("similarity scale of the golden instance") {
    auto p = paad(w6_views(), 2);
    auto scale = estimate_scale(p.mu, 6.0);
    // differences {1,1,1,1,2,2}/12: median of the even count is 1/12
    CHECK(scale.value == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
    CHECK(scale.fraction_ge == 1.0);
    CHECK_FALSE(scale.degenerate);
    CHECK(scale_assumption_holds(scale));
    CHECK(pair_assumption_holds(p.mu, 6.0, scale.value));

    auto S = similarity(p);
    auto sbar = normalized_similarity(S, 6.0, 2);
    CHECK(sbar[0][1] == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
    CHECK(sbar[0][2] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("identical windows make the scale degenerate") {
    std::vector<std::vector<double>> mu{{1.0, 2.0}, {1.0, 2.0}};
    auto scale = estimate_scale(mu, 2.0);
    CHECK(scale.degenerate);
    CHECK_FALSE(scale_assumption_holds(scale));
    CHECK_FALSE(pair_assumption_holds(mu, 2.0, 0.1));
}

TEST_CASE("a nearly duplicated pair of windows defeats the per-pair check") {
    // one pair differs by far less than the median scale in every subsection
    std::vector<std::vector<double>> mu{
        {0.0, 10.0}, {0.001, 10.002}, {5.0, 2.0}};
    auto scale = estimate_scale(mu, 10.0);
    CHECK(scale_assumption_holds(scale));  // global median is still healthy
    CHECK_FALSE(pair_assumption_holds(mu, 10.0, scale.value));
}

TEST_CASE("budget check passes on the golden instance") {
    auto views = w6_views();
    auto budget = ErrorBudget::derive(0.1, 1.0 / 12.0);
    PipelineConfig cfg;
    cfg.q = 2;
    budget.apply(cfg);
    auto res = run_pipeline(views, cfg);

    auto rep = check_budget(views, 2, res, budget);
    CHECK(rep.ok());
    CHECK(rep.mu_err <= rep.mu_bound);
    CHECK(rep.sim_err <= rep.sim_bound);
    CHECK(rep.score_err <= 0.01);  // far inside the 0.1 target

    // the same run cannot honour a budget ten times tighter than the
    // registers were sized for
    auto tight = ErrorBudget::derive(1e-4, 1.0 / 12.0);
    auto bad = check_budget(views, 2, res, tight);
    CHECK_FALSE(bad.ok());
}

TEST_CASE("scaling sweeps match the structural counts") {
    auto rep = complexity_report();

    REQUIRE(rep.quantum_n.size() == 4);
    const double expected_calls[] = {3 * 511.0, 5 * 511.0, 7 * 511.0, 9 * 511.0};
    for (size_t i = 0; i < 4; ++i)
        CHECK(rep.quantum_n[i].count == expected_calls[i]);
    CHECK(rep.quantum_slope == doctest::Approx(0.524).epsilon(2e-3));
    CHECK(rep.quantum_slope > 0.35);
    CHECK(rep.quantum_slope < 0.65);

    REQUIRE(rep.classical_k.size() == 3);
    const double pair_ops[] = {6, 28, 120};
    for (size_t i = 0; i < 3; ++i)
        CHECK(rep.classical_k[i].count == 13.0 * pair_ops[i]);
    CHECK(rep.classical_slope == doctest::Approx(2.161).epsilon(2e-3));
    CHECK(rep.classical_slope > 1.8);
    CHECK(rep.classical_slope < 2.2);

    REQUIRE(rep.ratios.size() == 3);
    for (const auto& r : rep.ratios) CHECK(r.observed == r.predicted);
    CHECK(rep.ratios[0].predicted == 254);
    CHECK(rep.ratios[2].predicted == 4094);
}

TEST_CASE("plot files are written with one row per sweep point") {
    auto dir = std::filesystem::temp_directory_path() / "adpaad_plot_test";
    std::filesystem::remove_all(dir);
    auto rep = complexity_report();
    write_plot_csv(rep, dir.string());

    std::ifstream in(dir / "quantum_n.csv");
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    CHECK(line == "n,oracle_calls");
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 4);

    std::ifstream ratio(dir / "layer_ratio.csv");
    REQUIRE(ratio.good());
    std::stringstream buf;
    buf << ratio.rdbuf();
    CHECK(buf.str().find("6,254,254") != std::string::npos);
    std::filesystem::remove_all(dir);
}
