#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "adpaad/classical.hpp"
#include "adpaad/fixed_point.hpp"
#include "adpaad/qprimitives.hpp"
#include "adpaad/statevector.hpp"

namespace adpaad {

enum class AaMode {
    postselect,  // keep the membership flag by postselection
    amplified,   // amplify membership, route non-members off the rotation flag
};

struct PipelineConfig {
    int q = 4;              // subsections per window
    int m1 = 8;             // phase bits: subsection means
    int m2 = 8;             // phase bits: pair similarities
    int m3 = 8;             // phase bits: row means
    int m4 = 8;             // phase bits: global mean
    AeMode ae_mode = AeMode::deterministic;
    AaMode aa_mode = AaMode::postselect;
    int aa_iterations = 1;  // amplification steps in amplified mode
    MembershipRule membership = MembershipRule::half_open;
    FixedPointFormat fx{};
    GroverStrategy grover = GroverStrategy::known_count;
    uint64_t seed = 42;
    double delta = 1.0;     // detection threshold
};

// Oracle-call accounting. Stage costs follow the coherent circuit structure:
// one estimation pass at m phase bits applies the state-preparation operator
// 2^(m+1)-1 times; each preparation touches the sample oracle and the bounds
// oracle (1 + 2*aa_iterations) times; later stages invoke the full earlier
// pipeline as their preparation subroutine. Saturating at uint64 max.
struct OracleCounters {
    uint64_t stage1_x = 0, stage1_bounds = 0;
    uint64_t stage2_x = 0, stage2_bounds = 0;
    uint64_t stage3_x = 0, stage3_bounds = 0;
    uint64_t stage4_x = 0, stage4_bounds = 0;
    uint64_t score_evaluations = 0;  // full score-oracle invocations in stage 4

    uint64_t total_x() const noexcept {
        return stage1_x + stage2_x + stage3_x + stage4_x;
    }
    uint64_t total_bounds() const noexcept {
        return stage1_bounds + stage2_bounds + stage3_bounds + stage4_bounds;
    }
};

// One (window, subsection) estimation branch.
struct BranchRecord {
    int window = 0;                  // 0-based
    int subsection = 0;              // 1-based
    int member_count = 0;            // samples of the window in this subsection
    double branch_weight = 0.0;      // probability of the branch label
    double good_probability = 0.0;   // conditional flag probability fed to estimation
    AmplitudeEstimate ae;
    double mu_hat = 0.0;             // estimated subsection mean
    int64_t mu_raw = 0;              // its fixed-point encoding
};

struct Stage1Result {
    std::vector<BranchRecord> branches;        // K*q, (window, subsection) order
    std::vector<std::vector<int64_t>> mu_raw;  // K x q table of encodings
    double keep_probability = 0.0;   // postselect: kept mass; amplified: min branch
                                     // member probability after amplification
    double calibration = 1.0;        // amplified-mode normalization sin^2((2l+1)asin(1/sqrt(q)))
    HybridState output;              // uniform (i, t) labels carrying mu annotations
};

struct PairRecord {
    int a = 0, b = 0;               // 0-based window indices, a < b
    double good_probability = 0.0;  // conditional flag probability = sbar^2
    AmplitudeEstimate ae;
    double sbar_hat = 0.0;          // estimated normalized distance, in [0, 1]
    int64_t sbar_raw = 0;
};

struct Stage2Result {
    std::vector<PairRecord> pairs;             // K(K-1)/2, lexicographic
    std::vector<std::vector<double>> sbar_hat; // K x K, symmetric, zero diagonal
    std::vector<std::vector<int64_t>> sbar_raw;
};

struct ScoreEstimate {
    std::vector<AmplitudeEstimate> row_ae;  // one overlap estimate per window
    std::vector<double> row_hat;            // estimated row means of sbar
    std::vector<int64_t> row_raw;
    AmplitudeEstimate global_ae;
    double global_hat = 0.0;                // estimated global mean of sbar
    int64_t global_raw = 0;
    std::vector<double> h_hat;              // anomaly scores (decoded view)
    std::vector<int64_t> h_raw;             // fixed-point scores fed to the comparator
};

struct PipelineResult {
    double C = 0.0;  // rotation normalizer: max sample magnitude
    Stage1Result stage1;
    Stage2Result stage2;
    ScoreEstimate scores;
    std::vector<int> detected;  // 1-based, ascending
    OracleCounters counters;
    GroverStats grover;
};

// Stage 1: membership-filtered rotation loading, one estimation branch per
// (window, subsection); produces the subsection-mean table.
Stage1Result estimate_subsection_means(const WindowViews& views,
                                       const PipelineConfig& cfg, double C,
                                       OracleCounters& counters, std::mt19937_64& rng);

// Stage 2: signed difference rotations over (i, k, t); per-pair estimation of
// the normalized pairwise distances sbar = S / (2C sqrt(q)).
Stage2Result estimate_pair_similarities(const std::vector<std::vector<int64_t>>& mu_raw,
                                        const PipelineConfig& cfg, double C,
                                        OracleCounters& counters, std::mt19937_64& rng);

// Stage 3: overlap estimation of the row means and the global mean of sbar,
// then the fixed-point ratio giving each window's anomaly score.
ScoreEstimate estimate_anomaly_scores(const Stage2Result& sim, const PipelineConfig& cfg,
                                      OracleCounters& counters, std::mt19937_64& rng);

// Stage 4: threshold search over windows with score >= delta.
std::vector<int> threshold_detect(const std::vector<int64_t>& h_raw,
                                  const PipelineConfig& cfg, OracleCounters& counters,
                                  GroverStats& gstats, std::mt19937_64& rng);

// All four stages. Requires nonnegative samples (shift the series first) and
// at least two windows.
PipelineResult run_pipeline(const WindowViews& views, const PipelineConfig& cfg);

}  // namespace adpaad
