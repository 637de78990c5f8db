#pragma once

// End-to-end run orchestration: load a series, run the classical chain,
// derive the error budget, optionally run the simulated pipeline, check
// the budget promises, and assemble a reproducible JSON report.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adpaad/analysis.hpp"
#include "adpaad/classical.hpp"
#include "adpaad/qadpaad.hpp"

namespace adpaad {

enum class RunMode { classical, quantum, compare };

struct RunConfig {
    std::string input_path;       // CSV file; empty means samples preloaded
    std::string column;           // CSV column name; empty = sole/first column
    std::vector<double> samples;  // used when input_path is empty
    size_t window = 8;
    size_t stride = 1;
    int q = 4;
    double delta = 1.0;
    RunMode mode = RunMode::compare;
    AaMode aa_mode = AaMode::postselect;
    int aa_iterations = 1;
    MembershipRule membership{};
    double epsilon = 0.1;
    std::optional<int> precision_qubits;  // overrides the derived widths
    std::optional<int> total_bits;        // explicit fixed-point format
    std::optional<int> frac_bits;
    AeMode ae_mode = AeMode::deterministic;
    GroverStrategy grover = GroverStrategy::known_count;
    uint64_t seed = 42;
    std::string report_path;     // written when non-empty
    std::string plot_data_dir;   // sweep CSVs written when non-empty
};

struct RunOutcome {
    nlohmann::ordered_json report;
    int exit_code = 0;  // 0 ok, 3 = compare-mode promise violated
};

// 64-bit FNV-1a over a byte sequence; used to fingerprint the input series.
uint64_t fnv1a64(const void* data, size_t size);

// Nonnegative shift applied before encoding (amplitudes load |x|/C with
// x >= 0); the classical chain is invariant under it.
double nonnegative_shift(const std::vector<double>& samples);

// Fixed-point format wide enough that arithmetic rounding stays far below
// the finest phase-grid step in use, within a 64-bit raw integer.
FixedPointFormat widened_format(int m_max, double C, size_t K);

RunOutcome execute(const RunConfig& cfg);

}  // namespace adpaad
