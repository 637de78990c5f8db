#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace adpaad {

// Portable uniform double in [0, 1) from a mt19937_64 stream. Standard
// distributions are implementation-defined; this keeps seeded runs
// reproducible across toolchains.
inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Named bit fields packed little-endian into a basis index. Total width is
// capped at 26 qubits: state vectors stay addressable and the cap is part of
// the simulator's contract with callers.
class RegisterLayout {
public:
    static constexpr int kMaxQubits = 26;

    struct Field {
        int offset = 0;
        int width = 0;
        uint64_t mask = 0;  // pre-shift mask, width bits

        uint64_t get(uint64_t basis) const noexcept { return (basis >> offset) & mask; }
        uint64_t set(uint64_t basis, uint64_t value) const noexcept {
            return (basis & ~(mask << offset)) | ((value & mask) << offset);
        }
    };

    // Appends a register above the existing ones; faults when the total
    // would exceed the qubit cap or the name is taken.
    void add(const std::string& name, int width);

    bool has(const std::string& name) const noexcept;
    Field field(const std::string& name) const;  // faults on unknown name
    int total_width() const noexcept { return total_; }

    struct Placed {
        std::string name;
        int width = 0;
        int offset = 0;
    };
    const std::vector<Placed>& registers() const noexcept { return regs_; }

private:
    std::vector<Placed> regs_;
    int total_ = 0;
};

// One sparse basis term: a complex amplitude plus data-register annotations.
// Annotations model wide arithmetic registers whose contents are a function
// of the basis label, so they ride along with the term instead of occupying
// simulated qubits. Values are fixed-point raws (or small integers), keyed by
// interned annotation ids, sorted by id.
struct Entry {
    std::complex<double> amp;
    std::vector<std::pair<int, int64_t>> ann;
};

// Sparse state over a RegisterLayout: map from basis index to Entry. All
// mutating operations are either unitary on the simulated register space or
// explicitly norm-checked by the caller via check_norm().
class HybridState {
public:
    using Pred = std::function<bool(uint64_t, const Entry&)>;
    using Value = std::function<int64_t(uint64_t, const Entry&)>;
    using BasisMap = std::function<uint64_t(uint64_t, const Entry&)>;
    using AmpMap = std::function<std::complex<double>(uint64_t, const Entry&)>;

    // Empty placeholder (no registers, no entries); assign a real state over it.
    HybridState() = default;
    explicit HybridState(RegisterLayout layout);

    const RegisterLayout& layout() const noexcept { return layout_; }
    const std::map<uint64_t, Entry>& entries() const noexcept { return entries_; }
    size_t entry_count() const noexcept { return entries_.size(); }

    int intern(const std::string& ann_name);
    const std::string& ann_name(int id) const;
    // Annotation lookup on one entry; faults when absent.
    static int64_t annotation(const Entry& e, int id);
    static bool has_annotation(const Entry& e, int id) noexcept;

    // |0...0>
    void set_zero_state();

    // Uniform superposition over the full span of one register. The register
    // must be 0 in every current term (the op is a state-prep, not a general
    // Hadamard). Faults if the expansion would exceed the entry cap.
    void hadamard_uniform(const std::string& reg);

    // Uniform superposition over values 0..count-1 of one register; same
    // zero-state requirement. Used for index registers whose logical domain
    // is not a power of two.
    void prepare_uniform_subset(const std::string& reg, uint64_t count);

    // Writes (or overwrites) annotation `name` on every term. Models a
    // data-register oracle: the value may depend on the basis label and on
    // previously written annotations.
    void annotate(const std::string& name, const Value& value);
    void drop_annotation(const std::string& name);

    // Relabels basis states; must be injective on the current support.
    // Models reversible classical circuits (flag writes, permutations).
    void apply_basis_map(const BasisMap& map);

    enum class RotationKind {
        sqrt_ratio,    // ratio r in [0,1]: amp(1) *= sqrt(r),  amp(0) *= sqrt(1-r)
        linear_ratio,  // ratio s in [-1,1]: amp(1) *= s,       amp(0) *= sqrt(1-s^2)
    };

    // Single-qubit rotation on a width-1 target register, angle derived from
    // a fixed-point ratio raw (value = raw * 2^-frac_bits, clamped to the
    // kind's domain). Guarded terms must have the target clear; unguarded
    // terms pass through unchanged. Pass an empty guard to rotate everything.
    void controlled_rotation(const std::string& target_reg, RotationKind kind,
                             int frac_bits, const Value& ratio_raw,
                             const Pred& guard = {});

    double probability_of(const Pred& pred) const;

    // Keeps matching terms and renormalizes globally; returns the kept
    // probability. Faults when nothing matches.
    double postselect(const Pred& pred);

    // Samples one value of `reg` from its marginal and collapses onto it.
    uint64_t measure(const std::string& reg, std::mt19937_64& rng);

    void phase_flip(const Pred& pred);

    // Reflection about the uniform superposition over values 0..count-1 of
    // `reg` (all other registers must read 0 on every term): the diffusion
    // step of a search iteration.
    void reflect_about_uniform(const std::string& reg, uint64_t count);

    // Per-term amplitude remap. The caller asserts the combined effect is
    // norm-preserving (e.g. branch-local rotations applied in closed form)
    // and should follow with check_norm().
    void transform_amplitudes(const AmpMap& map);

    double norm_squared() const;
    // Faults when |<psi|psi> - 1| > tol.
    void check_norm(double tol = 1e-9) const;

    // Deterministic dump: one line per term, register fields split out,
    // annotations as name=raw pairs.
    void dump_csv(std::ostream& out) const;

private:
    static constexpr size_t kMaxEntries = size_t{1} << 22;

    void prune_zeros();

    RegisterLayout layout_;
    std::map<uint64_t, Entry> entries_;
    std::vector<std::string> ann_names_;
    std::map<std::string, int> ann_ids_;
};

}  // namespace adpaad
