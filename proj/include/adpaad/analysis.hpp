#pragma once

// Error-budget derivation, similarity-scale estimation, accuracy bound
// checks, and query-count scaling sweeps for the anomaly-detection lab.

#include <cstdint>
#include <string>
#include <vector>

#include "adpaad/classical.hpp"
#include "adpaad/qadpaad.hpp"

namespace adpaad {

// Per-stage accuracy targets and the phase-register widths that achieve
// them.  The end-to-end tolerance eps on each anomaly score is split so
// that the mean-estimation error (entering quadratically through the
// distances) and the two estimation layers above it each consume a fixed
// share; the final entry is the end-to-end tolerance itself and is never
// used to size a register.
struct ErrorBudget {
    double eps = 0.1;   // end-to-end |h_hat - h| target
    double eps1 = 0.0;  // subsection-mean share
    double eps2 = 0.0;  // pairwise-distance share
    double eps3 = 0.0;  // score-numerator / denominator share
    double scale = 0.0; // similarity scale E behind the split (0: none used)
    int m1 = 8;
    int m2 = 8;
    int m3 = 8;
    int m4 = 8;

    // Split eps using the similarity scale E and size the registers.
    static ErrorBudget derive(double eps, double E);

    // Same register width everywhere; used when no scale is available.
    static ErrorBudget uniform(double eps);

    void apply(PipelineConfig& cfg) const;
};

// Smallest register width whose phase grid is finer than eps_i.
int width_for(double eps_i);

// Characteristic scale E of the window differences: the median of the
// positive values |mu_i^t - mu_k^t| / (2C) over window pairs i < k and
// subsections t.
struct SimilarityScale {
    double value = 0.0;
    bool degenerate = false;   // every difference is exactly zero
    double fraction_ge = 0.0;  // share of positive differences >= value
};

// Median of the positive entries; zeros are discarded first.  Even counts
// average the two middle values.  Returns 0 when nothing is positive.
double median_of_positive(std::vector<double> values);

// Scale statistics of a subsection-mean table (K rows of q means).
SimilarityScale estimate_scale(const std::vector<std::vector<double>>& mu,
                               double C);

// Distances divided by their amplitude-encoding normalization 2*C*sqrt(q).
std::vector<std::vector<double>> normalized_similarity(
    const std::vector<std::vector<double>>& S, double C, int q);

// fraction_ge >= 1/2 holds by construction of the median; a degenerate
// scale leaves the budget split undefined.
bool scale_assumption_holds(const SimilarityScale& scale);

// The error analysis additionally wants the scale met coordinate-wise:
// for every window pair, at least half of the q normalized differences
// must reach E.  Instances failing this are outside the guarantee (they
// are reported, never rejected).
bool pair_assumption_holds(const std::vector<std::vector<double>>& mu,
                           double C, double E);

// Worst-case deviations of a pipeline run from the exact classical chain,
// each compared against the bound the budget promises for it: means within
// C*eps1, normalized distances within eps2 + 2*eps1/E (mean errors propagate
// into each difference twice, relative to the scale E), scores within eps.
struct BoundReport {
    double mu_err = 0.0, mu_bound = 0.0;
    double sim_err = 0.0, sim_bound = 0.0;
    double score_err = 0.0, score_bound = 0.0;
    bool mu_ok = false, sim_ok = false, score_ok = false;
    bool ok() const { return mu_ok && sim_ok && score_ok; }
};

BoundReport check_budget(const WindowViews& views, int q,
                         const PipelineResult& result, const ErrorBudget& budget);

// One measured point of a scaling sweep.
struct SweepPoint {
    double x = 0.0;         // swept parameter (window length or count)
    double count = 0.0;     // observed operation count
};

// Cost ratio between consecutive estimation layers at a given width.
struct LayerRatio {
    int m2 = 0;
    uint64_t observed = 0;
    uint64_t predicted = 0;
};

struct ComplexityReport {
    std::vector<SweepPoint> quantum_n;    // stage-1 oracle calls vs n
    double quantum_slope = 0.0;           // log-log least-squares slope
    std::vector<SweepPoint> classical_k;  // classical distance ops vs K
    double classical_slope = 0.0;
    std::vector<LayerRatio> ratios;
};

// Least-squares slope of log2(count) against log2(x).
double loglog_slope(const std::vector<SweepPoint>& pts);

// Run both sweeps and the layer-ratio table on synthetic ramp series.
ComplexityReport complexity_report();

// Write quantum_n.csv, classical_k.csv and layer_ratio.csv under dir.
void write_plot_csv(const ComplexityReport& report, const std::string& dir);

}  // namespace adpaad
