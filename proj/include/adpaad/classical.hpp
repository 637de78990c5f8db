#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace adpaad {

using WindowViews = std::vector<std::span<const double>>;

struct ClassicalOpCount {
    uint64_t paad_ops = 0;
    uint64_t similarity_ops = 0;
    uint64_t score_ops = 0;

    uint64_t total() const noexcept { return paad_ops + similarity_ops + score_ops; }
};

struct PaadResult {
    // K x q subsection means; an empty subsection contributes mean 0, count 0.
    std::vector<std::vector<double>> mu;
    std::vector<std::vector<int>> counts;
    // K x (q+1) subsection bounds per subsequence.
    std::vector<std::vector<double>> bounds;
    int q = 0;
};

PaadResult paad(const WindowViews& views, int q, ClassicalOpCount* ops = nullptr);

// K x K Euclidean distance matrix between PAAD rows; symmetric, zero diagonal.
std::vector<std::vector<double>> similarity(const PaadResult& p,
                                            ClassicalOpCount* ops = nullptr);

// h_i = (row mean of S) / (global mean of S). Scores average to 1. Faults if
// the similarity matrix is all zeros (scores undefined) or K < 2.
std::vector<double> anomaly_scores(const std::vector<std::vector<double>>& S,
                                   ClassicalOpCount* ops = nullptr);

// 1-based indices of subsequences with h_i >= delta, ascending.
std::vector<int> detect(const std::vector<double>& h, double delta);

// max |x| over all window elements; the rotation normalizer C.
double max_abs_sample(const WindowViews& views);

}  // namespace adpaad
