#pragma once

#include <cstdint>

namespace adpaad {

// Signed two's-complement fixed point: value = raw * 2^-frac_bits.
// Models the reversible arithmetic datapath: every operation rounds at most
// once (nearest, ties to even) and faults on overflow instead of wrapping.
struct FixedPointFormat {
    int total_bits = 32;  // including sign bit, 2..63
    int frac_bits = 16;   // 0..total_bits-1

    bool valid() const noexcept;
    int64_t max_raw() const noexcept;
    int64_t min_raw() const noexcept;
    double resolution() const noexcept;  // 2^-frac_bits
};

enum class MembershipRule {
    half_open,      // a_lo <= x < a_hi, last subsection closed above
    sign_test,      // (x - a_lo)(x - a_hi) <= 0
};

class FixedPointUnit {
public:
    explicit FixedPointUnit(FixedPointFormat fmt);

    const FixedPointFormat& format() const noexcept { return fmt_; }

    int64_t from_real(double v) const;  // one rounding, faults on overflow/non-finite
    double to_real(int64_t raw) const noexcept;

    int64_t add(int64_t a, int64_t b) const;       // exact
    int64_t subtract(int64_t a, int64_t b) const;  // exact
    int64_t multiply(int64_t a, int64_t b) const;  // one rounding
    int64_t divide(int64_t num, int64_t den) const;  // one rounding, faults on den == 0

    static bool compare_ge(int64_t a, int64_t b) noexcept { return a >= b; }

    // rho = (x - a_lo)(x - a_hi): differences exact, product rounds once.
    int64_t qma_rho(int64_t x, int64_t a_lo, int64_t a_hi) const;

    // Subsection membership test on encoded values. last_subsection closes the
    // upper end so the domain maximum stays covered; a degenerate row of equal
    // bounds therefore funnels everything into the last subsection.
    bool membership(int64_t x, int64_t a_lo, int64_t a_hi, bool last_subsection,
                    MembershipRule rule) const;

    // scale * sin^2(pi * theta_frac) for theta_frac in [0, 1], one rounding.
    // Folded about 1/2 so theta_frac and 1 - theta_frac give the same encoding.
    int64_t sine_square_scale(double theta_frac, double scale) const;

private:
    int64_t check_range(__int128 raw, const char* op) const;

    FixedPointFormat fmt_;
};

}  // namespace adpaad
