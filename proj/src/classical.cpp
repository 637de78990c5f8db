#include "adpaad/classical.hpp"

#include <cmath>
#include <stdexcept>

#include "adpaad/timeseries.hpp"

namespace adpaad {

PaadResult paad(const WindowViews& views, int q, ClassicalOpCount* ops) {
    if (views.empty()) throw std::invalid_argument("paad: no subsequences");
    if (q < 1) throw std::invalid_argument("paad: subsection count must be >= 1");
    const size_t n = views[0].size();
    if (static_cast<size_t>(q) > n) {
        throw std::invalid_argument("paad: more subsections than window elements");
    }

    PaadResult out;
    out.q = q;
    out.mu.reserve(views.size());
    out.counts.reserve(views.size());
    out.bounds.reserve(views.size());

    for (const auto& w : views) {
        AmplitudeDomain dom = amplitude_domain(w);
        std::vector<double> bounds = subsection_bounds(dom, q);
        std::vector<double> sums(static_cast<size_t>(q), 0.0);
        std::vector<int> counts(static_cast<size_t>(q), 0);
        for (double x : w) {
            int t = assign_subsection(x, bounds);
            sums[static_cast<size_t>(t) - 1] += x;
            counts[static_cast<size_t>(t) - 1] += 1;
        }
        std::vector<double> mu(static_cast<size_t>(q), 0.0);
        for (int t = 0; t < q; ++t) {
            if (counts[static_cast<size_t>(t)] > 0) {
                mu[static_cast<size_t>(t)] =
                    sums[static_cast<size_t>(t)] / counts[static_cast<size_t>(t)];
            }
        }
        if (ops) {
            ops->paad_ops += static_cast<uint64_t>(w.size()) * (1 + static_cast<uint64_t>(q)) +
                             static_cast<uint64_t>(q);
        }
        out.mu.push_back(std::move(mu));
        out.counts.push_back(std::move(counts));
        out.bounds.push_back(std::move(bounds));
    }
    return out;
}

std::vector<std::vector<double>> similarity(const PaadResult& p, ClassicalOpCount* ops) {
    const size_t K = p.mu.size();
    const size_t q = static_cast<size_t>(p.q);
    std::vector<std::vector<double>> S(K, std::vector<double>(K, 0.0));
    for (size_t i = 0; i < K; ++i) {
        for (size_t k = i + 1; k < K; ++k) {
            double acc = 0.0;
            for (size_t t = 0; t < q; ++t) {
                const double d = p.mu[i][t] - p.mu[k][t];
                acc += d * d;
            }
            const double s = std::sqrt(acc);
            S[i][k] = s;
            S[k][i] = s;
            if (ops) ops->similarity_ops += 3 * q + 1;
        }
    }
    return S;
}

std::vector<double> anomaly_scores(const std::vector<std::vector<double>>& S,
                                   ClassicalOpCount* ops) {
    const size_t K = S.size();
    if (K < 2) throw std::invalid_argument("anomaly_scores: need at least 2 subsequences");

    double total = 0.0;
    for (size_t i = 0; i < K; ++i) {
        for (size_t k = 0; k < K; ++k) total += S[i][k];
    }
    if (total == 0.0) {
        throw std::runtime_error(
            "anomaly_scores: similarity matrix is all zeros; scores undefined");
    }
    const double global_mean = total / (static_cast<double>(K) * static_cast<double>(K));

    std::vector<double> h(K, 0.0);
    for (size_t i = 0; i < K; ++i) {
        double row = 0.0;
        for (size_t k = 0; k < K; ++k) row += S[i][k];
        h[i] = (row / static_cast<double>(K)) / global_mean;
    }
    if (ops) ops->score_ops += K * K + 2 * K + 1;
    return h;
}

std::vector<int> detect(const std::vector<double>& h, double delta) {
    std::vector<int> out;
    for (size_t i = 0; i < h.size(); ++i) {
        if (h[i] >= delta) out.push_back(static_cast<int>(i) + 1);
    }
    return out;
}

double max_abs_sample(const WindowViews& views) {
    double c = 0.0;
    for (const auto& w : views) {
        for (double x : w) {
            const double a = std::fabs(x);
            if (a > c) c = a;
        }
    }
    return c;
}

}  // namespace adpaad
