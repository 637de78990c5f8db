#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "adpaad/statevector.hpp"

namespace adpaad {

// Rotation by 2*theta on the 2-D invariant subspace spanned by the good and
// bad components of one branch; the walk operator whose eigenphases a phase
// register reads out.
struct GroverOperator {
    double theta = 0.0;  // sin^2(theta) = good probability

    std::array<std::array<double, 2>, 2> matrix() const noexcept;
    // Eigenphases extracted numerically from trace and determinant,
    // ascending: {-2 theta, +2 theta} up to roundoff.
    std::array<double, 2> eigenphases() const;
};

enum class AeMode {
    deterministic,  // modal outcome: the nearest phase grid point
    sampled,        // drawn from the exact phase-register distribution
};

struct AmplitudeEstimate {
    int m = 0;                // phase register width
    uint64_t y = 0;           // grid index, folded into [0, 2^(m-1)]
    double theta = 0.0;       // pi * y / 2^m, in [0, pi/2]
    double probability = 0.0; // sin^2(theta)
};

// Exact measurement distribution of an m-qubit phase register driven by a
// branch at angle theta = pi * omega: P(y) for y in [0, 2^m). Each of the
// two walk eigenphases contributes half a Fejer kernel.
std::vector<double> ae_outcome_pmf(double omega, int m);

// Estimates p = sin^2(theta) with an m-qubit phase register.
// Deterministic mode: |theta_hat - theta| <= pi / 2^(m+1) always.
// Sampled mode: the two grid points nearest theta carry >= 8/pi^2 of the
// outcome mass.
AmplitudeEstimate amplitude_estimate(double good_probability, int m, AeMode mode,
                                     std::mt19937_64* rng = nullptr);

// Good-branch probability after `iterations` amplification steps on a branch
// that starts at probability p: sin^2((2*iterations + 1) * asin(sqrt(p))).
double amplified_probability(double p, int iterations);

// In-place amplitude amplification, applied independently to every distinct
// value of the branch registers: each branch's good/bad split is rotated by
// `iterations` Grover steps in closed form on its invariant plane. Preserves
// the state norm and each branch's weight.
void amplitude_amplify(HybridState& st, const std::vector<std::string>& branch_regs,
                       const HybridState::Pred& good, int iterations);

struct InnerProductEstimate {
    AmplitudeEstimate ae;
    double overlap_exact = 0.0;  // Re<a|b> read from the two states
    double value = 0.0;          // 2 sin^2(theta_hat) - 1, clamped to [-1, 1]
};

// Overlap-test estimator: the event "ancilla reads 0" after interfering the
// two states has probability (1 + Re<a|b>)/2, which is fed through amplitude
// estimation. The states must share a register layout.
InnerProductEstimate inner_product_estimate(const HybridState& a, const HybridState& b,
                                            int m, AeMode mode,
                                            std::mt19937_64* rng = nullptr);

enum class GroverStrategy {
    known_count,    // optimal iteration count from the residual target count
    unknown_count,  // geometric iteration window, closed by a verified sweep
};

struct GroverStats {
    uint64_t rounds = 0;
    uint64_t iterations = 0;     // diffusion steps applied across all rounds
    uint64_t measurements = 0;
    uint64_t verifications = 0;  // classical checks of measured candidates
    uint64_t sweep_checks = 0;   // exhaustive checks (count setup or closing sweep)
};

// Finds every x in [0, domain) with marked(x). Both strategies return exactly
// the marked set: known_count stops once the known number of targets is in
// hand; unknown_count ends with a verified exhaustive sweep, so a quiet run
// cannot silently drop targets.
std::vector<uint64_t> grover_search(uint64_t domain,
                                    const std::function<bool(uint64_t)>& marked,
                                    GroverStrategy strategy, std::mt19937_64& rng,
                                    GroverStats* stats = nullptr);

}  // namespace adpaad
