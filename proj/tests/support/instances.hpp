#pragma once

// Seeded random-instance generators for property and acceptance tests.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "bruteforce.hpp"

namespace testgen {

struct Instance {
    std::vector<double> samples;
    int n = 4;
    int stride = 1;
    int q = 2;
};

// Unconstrained instance for bit-for-bit oracle comparison. Mixes flat-random,
// random-walk, and integer-valued series. Avoids the fully-degenerate case
// (all-zero distance matrix) so scores stay defined.
inline Instance random_basic(std::mt19937_64& rng, int max_m = 32, int max_n = 8,
                             int max_q = 4) {
    for (;;) {
        Instance ins;
        std::uniform_int_distribution<int> n_dist(2, max_n);
        ins.n = n_dist(rng);
        std::uniform_int_distribution<int> q_dist(1, std::min(max_q, ins.n));
        ins.q = q_dist(rng);
        std::uniform_int_distribution<int> stride_dist(1, 3);
        ins.stride = stride_dist(rng);
        std::uniform_int_distribution<int> m_dist(ins.n, max_m);
        int m = m_dist(rng);
        // keep K >= 2 so scores are defined
        if (oracle::window_count(m, ins.n, ins.stride) < 2) {
            m = ins.n + ins.stride;
            if (m > max_m) continue;
        }

        std::uniform_int_distribution<int> kind_dist(0, 2);
        const int kind = kind_dist(rng);
        std::uniform_real_distribution<double> flat(-5.0, 15.0);
        std::normal_distribution<double> step(0.0, 1.0);
        std::uniform_int_distribution<int> digit(-9, 20);
        double walk = flat(rng);
        ins.samples.reserve(static_cast<size_t>(m));
        for (int j = 0; j < m; ++j) {
            switch (kind) {
                case 0: ins.samples.push_back(flat(rng)); break;
                case 1:
                    walk += step(rng);
                    ins.samples.push_back(walk);
                    break;
                default: ins.samples.push_back(static_cast<double>(digit(rng))); break;
            }
        }

        bool degenerate = true;
        try {
            oracle::score_series(ins.samples, ins.n, ins.stride, ins.q, 1.0);
            degenerate = false;
        } catch (const std::exception&) {
        }
        if (!degenerate) return ins;
    }
}

// True when every sample keeps a relative margin from every interior subsection
// bound of its window. Quantum membership runs on fixed-point encodings, so
// samples hugging an interior bound could legitimately flip subsection between
// the double and fixed-point paths; comparison instances keep clear of that.
inline bool has_boundary_margin(const Instance& ins, double margin = 1e-3) {
    const int m = static_cast<int>(ins.samples.size());
    const int K = oracle::window_count(m, ins.n, ins.stride);
    for (int k = 0; k < K; ++k) {
        for (int t = 1; t < ins.q; ++t) {
            const double b = oracle::bound_at(ins.samples, k, ins.n, ins.stride, ins.q, t);
            for (int j = 0; j < ins.n; ++j) {
                const double x = ins.samples[static_cast<size_t>(k) * ins.stride + j];
                if (std::fabs(x - b) < margin * std::max(1.0, std::fabs(b))) return false;
            }
        }
    }
    return true;
}

// Instance for quantum/classical comparison runs: K in [3, max_k], spread-out
// values (random walk plus level jumps), interior-bound margins enforced.
inline Instance random_compare(std::mt19937_64& rng, int max_k = 8, int max_n = 16,
                               int max_q = 4) {
    for (;;) {
        Instance ins;
        std::uniform_int_distribution<int> q_dist(2, max_q);
        ins.q = q_dist(rng);
        std::uniform_int_distribution<int> n_dist(std::max(4, ins.q), max_n);
        ins.n = n_dist(rng);
        std::uniform_int_distribution<int> k_dist(3, max_k);
        const int K = k_dist(rng);
        std::uniform_int_distribution<int> stride_dist(1, 2);
        ins.stride = stride_dist(rng);
        const int m = ins.n + (K - 1) * ins.stride;

        std::normal_distribution<double> step(0.0, 1.0);
        std::uniform_real_distribution<double> jump(2.0, 6.0);
        std::bernoulli_distribution do_jump(0.2);
        std::bernoulli_distribution jump_sign(0.5);
        double walk = 10.0;
        ins.samples.reserve(static_cast<size_t>(m));
        for (int j = 0; j < m; ++j) {
            walk += step(rng);
            if (do_jump(rng)) walk += (jump_sign(rng) ? 1.0 : -1.0) * jump(rng);
            ins.samples.push_back(walk);
        }

        if (!has_boundary_margin(ins)) continue;
        try {
            oracle::score_series(ins.samples, ins.n, ins.stride, ins.q, 1.0);
        } catch (const std::exception&) {
            continue;
        }
        return ins;
    }
}

}  // namespace testgen
