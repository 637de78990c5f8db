#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "adpaad/classical.hpp"
#include "adpaad/timeseries.hpp"
#include "support/bruteforce.hpp"
#include "support/instances.hpp"

using namespace adpaad;

namespace {

const std::vector<double> kW6{1, 2, 3, 4, 5, 6};

struct FullRun {
    PaadResult paad;
    std::vector<std::vector<double>> S;
    std::vector<double> h;
    std::vector<int> detected;
};

FullRun run_classical(const std::vector<double>& samples, int n, int stride, int q,
                      double delta, ClassicalOpCount* ops = nullptr) {
    TimeSeries ts{samples};
    auto views = subsequences(ts, WindowPlan{n, stride});
    FullRun out;
    out.paad = paad(views, q, ops);
    out.S = similarity(out.paad, ops);
    out.h = anomaly_scores(out.S, ops);
    out.detected = detect(out.h, delta);
    return out;
}

}  // namespace

TEST_CASE("golden instance: subsection means, distances, scores, detection") {
    auto run = run_classical(kW6, 4, 1, 2, 1.0);

    REQUIRE(run.paad.mu.size() == 3);
    const std::vector<std::vector<double>> want_mu{{1.5, 3.5}, {2.5, 4.5}, {3.5, 5.5}};
    for (size_t i = 0; i < 3; ++i) {
        for (size_t t = 0; t < 2; ++t) {
            CHECK(run.paad.mu[i][t] == doctest::Approx(want_mu[i][t]).epsilon(1e-12));
        }
        CHECK(run.paad.counts[i] == std::vector<int>{2, 2});
    }
    CHECK(run.paad.bounds[0] == std::vector<double>{1.0, 2.5, 4.0});
    CHECK(run.paad.bounds[1] == std::vector<double>{2.0, 3.5, 5.0});
    CHECK(run.paad.bounds[2] == std::vector<double>{3.0, 4.5, 6.0});

    const double r2 = std::sqrt(2.0);
    CHECK(std::fabs(run.S[0][1] - r2) <= 1e-9);
    CHECK(std::fabs(run.S[1][2] - r2) <= 1e-9);
    CHECK(std::fabs(run.S[0][2] - 2 * r2) <= 1e-9);
    CHECK(run.S[0][0] == 0.0);
    CHECK(run.S[1][0] == run.S[0][1]);

    REQUIRE(run.h.size() == 3);
    CHECK(std::fabs(run.h[0] - 1.125) <= 1e-9);
    CHECK(std::fabs(run.h[1] - 0.75) <= 1e-9);
    CHECK(std::fabs(run.h[2] - 1.125) <= 1e-9);

    CHECK(run.detected == std::vector<int>{1, 3});
}

TEST_CASE("scores average to one") {
    std::mt19937_64 rng(23);
    for (int it = 0; it < 100; ++it) {
        auto ins = testgen::random_basic(rng);
        auto run = run_classical(ins.samples, ins.n, ins.stride, ins.q, 1.0);
        double sum = 0.0;
        for (double v : run.h) sum += v;
        const double K = static_cast<double>(run.h.size());
        CHECK(std::fabs(sum - K) <= 1e-9 * K);
    }
}

TEST_CASE("module matches the brute-force oracle bit-for-bit") {
    std::mt19937_64 rng(29);
    for (int it = 0; it < 60; ++it) {
        auto ins = testgen::random_basic(rng);
        auto run = run_classical(ins.samples, ins.n, ins.stride, ins.q, 1.0);
        auto ref = oracle::score_series(ins.samples, ins.n, ins.stride, ins.q, 1.0);

        REQUIRE(run.h.size() == ref.h.size());
        for (size_t i = 0; i < run.h.size(); ++i) {
            CHECK(run.h[i] == ref.h[i]);  // identical doubles, not approximate
        }
        CHECK(run.detected == ref.detected);

        auto refS = oracle::distance_matrix(ins.samples, ins.n, ins.stride, ins.q);
        for (size_t i = 0; i < run.S.size(); ++i) {
            for (size_t k = 0; k < run.S.size(); ++k) {
                CHECK(run.S[i][k] == refS[i][k]);
            }
        }
        for (size_t i = 0; i < run.paad.mu.size(); ++i) {
            for (int t = 1; t <= ins.q; ++t) {
                CHECK(run.paad.mu[i][static_cast<size_t>(t) - 1] ==
                      oracle::mean_at(ins.samples, static_cast<int>(i), ins.n, ins.stride,
                                      ins.q, t));
                CHECK(run.paad.counts[i][static_cast<size_t>(t) - 1] ==
                      oracle::count_at(ins.samples, static_cast<int>(i), ins.n, ins.stride,
                                       ins.q, t));
            }
        }
    }
}

TEST_CASE("empty subsections contribute zero mean and zero count") {
    // window {0, 0.1, 0.2, 10} with q=4: everything except the max falls in the
    // first quarter, the middle two quarters are empty
    auto run = run_classical({0.0, 0.1, 0.2, 10.0, 0.0, 0.1, 0.3, 10.0}, 4, 4, 4, 1.0);
    CHECK(run.paad.counts[0] == std::vector<int>{3, 0, 0, 1});
    CHECK(run.paad.mu[0][0] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(run.paad.mu[0][1] == 0.0);
    CHECK(run.paad.mu[0][2] == 0.0);
    CHECK(run.paad.mu[0][3] == 10.0);
}

TEST_CASE("constant window maps everything to the last subsection") {
    TimeSeries ts{{5, 5, 5, 5, 5, 7, 5, 5}};
    auto views = subsequences(ts, WindowPlan{4, 4});
    auto p = paad(views, 3);
    CHECK(p.counts[0] == std::vector<int>{0, 0, 4});
    CHECK(p.mu[0] == std::vector<double>{0.0, 0.0, 5.0});
}

TEST_CASE("identical subsequences leave scores undefined") {
    // every window identical -> all-zero distance matrix
    auto views_src = TimeSeries{{1, 2, 1, 2, 1, 2}};
    auto views = subsequences(views_src, WindowPlan{2, 2});
    auto p = paad(views, 2);
    auto S = similarity(p);
    CHECK_THROWS_WITH_AS(anomaly_scores(S), doctest::Contains("all zeros"),
                         std::runtime_error);
}

TEST_CASE("score computation needs at least two subsequences") {
    std::vector<std::vector<double>> S{{0.0}};
    CHECK_THROWS_AS(anomaly_scores(S), std::invalid_argument);
}

TEST_CASE("additive shift leaves scores bitwise unchanged on exact data") {
    // Integer samples and power-of-two subsection counts keep every mean,
    // difference, and distance exactly representable, so invariance is exact.
    auto base = run_classical(kW6, 4, 1, 2, 1.0);
    std::vector<double> shifted;
    for (double v : kW6) shifted.push_back(v + 100.0);
    auto moved = run_classical(shifted, 4, 1, 2, 1.0);
    for (size_t i = 0; i < base.h.size(); ++i) CHECK(base.h[i] == moved.h[i]);
    CHECK(base.detected == moved.detected);
}

TEST_CASE("positive scaling leaves scores bitwise unchanged on exact data") {
    auto base = run_classical(kW6, 4, 1, 2, 1.0);
    std::vector<double> scaled;
    for (double v : kW6) scaled.push_back(v * 4.0);
    auto big = run_classical(scaled, 4, 1, 2, 1.0);
    for (size_t i = 0; i < base.h.size(); ++i) CHECK(base.h[i] == big.h[i]);
    CHECK(base.detected == big.detected);
}

TEST_CASE("similarity op count grows quadratically in the subsequence count") {
    // series long enough for K = 4, 8, 16 windows at n = 8
    std::mt19937_64 rng(31);
    std::normal_distribution<double> step(0.0, 1.0);
    std::vector<double> walk;
    double v = 0.0;
    for (int j = 0; j < 64; ++j) {
        v += step(rng);
        walk.push_back(v);
    }
    uint64_t ops_at[3] = {0, 0, 0};
    const int Ks[3] = {4, 8, 16};
    for (int c = 0; c < 3; ++c) {
        std::vector<double> head(walk.begin(), walk.begin() + 8 + (Ks[c] - 1));
        ClassicalOpCount ops;
        run_classical(head, 8, 1, 4, 1.0, &ops);
        ops_at[c] = ops.similarity_ops;
    }
    // pairwise loops: ops scale as K(K-1)/2
    CHECK(ops_at[0] == 6u * 13u);
    CHECK(ops_at[1] == 28u * 13u);
    CHECK(ops_at[2] == 120u * 13u);
}

TEST_CASE("detection threshold is inclusive") {
    CHECK(detect({1.125, 0.75, 1.125}, 1.125) == std::vector<int>{1, 3});
    CHECK(detect({1.0, 1.0}, 1.0) == std::vector<int>{1, 2});
    CHECK(detect({0.5, 0.6}, 1.0).empty());
}

TEST_CASE("max_abs_sample spans all windows") {
    TimeSeries ts{{-7, 2, 3, 4, 5, 6}};
    auto views = subsequences(ts, WindowPlan{4, 1});
    CHECK(max_abs_sample(views) == 7.0);
}
