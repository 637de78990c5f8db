#include "adpaad/fixed_point.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace adpaad {

namespace {

// Round n/d to the nearest integer, ties to even. d > 0.
__int128 div_round_even(__int128 n, __int128 d) {
    bool neg = n < 0;
    unsigned __int128 un = neg ? static_cast<unsigned __int128>(-n)
                               : static_cast<unsigned __int128>(n);
    unsigned __int128 ud = static_cast<unsigned __int128>(d);
    unsigned __int128 q = un / ud;
    unsigned __int128 r = un % ud;
    unsigned __int128 twice = r << 1;
    if (twice > ud || (twice == ud && (q & 1))) ++q;
    __int128 sq = static_cast<__int128>(q);
    return neg ? -sq : sq;
}

}  // namespace

bool FixedPointFormat::valid() const noexcept {
    return total_bits >= 2 && total_bits <= 63 && frac_bits >= 0 &&
           frac_bits < total_bits;
}

int64_t FixedPointFormat::max_raw() const noexcept {
    return (int64_t{1} << (total_bits - 1)) - 1;
}

int64_t FixedPointFormat::min_raw() const noexcept {
    return -(int64_t{1} << (total_bits - 1));
}

double FixedPointFormat::resolution() const noexcept {
    return std::ldexp(1.0, -frac_bits);
}

FixedPointUnit::FixedPointUnit(FixedPointFormat fmt) : fmt_(fmt) {
    if (!fmt.valid()) {
        throw std::invalid_argument(
            "fixed-point format invalid: total_bits=" + std::to_string(fmt.total_bits) +
            " frac_bits=" + std::to_string(fmt.frac_bits));
    }
}

int64_t FixedPointUnit::check_range(__int128 raw, const char* op) const {
    if (raw < static_cast<__int128>(fmt_.min_raw()) ||
        raw > static_cast<__int128>(fmt_.max_raw())) {
        throw std::overflow_error(std::string("fixed-point overflow in ") + op);
    }
    return static_cast<int64_t>(raw);
}

int64_t FixedPointUnit::from_real(double v) const {
    if (!std::isfinite(v)) {
        throw std::invalid_argument("fixed-point encode of non-finite value");
    }
    double scaled = std::ldexp(v, fmt_.frac_bits);
    // nearbyint honours the default FE_TONEAREST mode: nearest, ties to even.
    double r = std::nearbyint(scaled);
    if (r < static_cast<double>(fmt_.min_raw()) || r > static_cast<double>(fmt_.max_raw())) {
        throw std::overflow_error("fixed-point overflow in from_real");
    }
    return static_cast<int64_t>(r);
}

double FixedPointUnit::to_real(int64_t raw) const noexcept {
    return std::ldexp(static_cast<double>(raw), -fmt_.frac_bits);
}

int64_t FixedPointUnit::add(int64_t a, int64_t b) const {
    return check_range(static_cast<__int128>(a) + b, "add");
}

int64_t FixedPointUnit::subtract(int64_t a, int64_t b) const {
    return check_range(static_cast<__int128>(a) - b, "subtract");
}

int64_t FixedPointUnit::multiply(int64_t a, int64_t b) const {
    __int128 prod = static_cast<__int128>(a) * b;
    return check_range(div_round_even(prod, static_cast<__int128>(1) << fmt_.frac_bits),
                       "multiply");
}

int64_t FixedPointUnit::divide(int64_t num, int64_t den) const {
    if (den == 0) {
        throw std::domain_error("fixed-point division by zero");
    }
    __int128 n = static_cast<__int128>(num) << fmt_.frac_bits;
    __int128 d = den;
    if (d < 0) {
        n = -n;
        d = -d;
    }
    return check_range(div_round_even(n, d), "divide");
}

int64_t FixedPointUnit::qma_rho(int64_t x, int64_t a_lo, int64_t a_hi) const {
    return multiply(subtract(x, a_lo), subtract(x, a_hi));
}

bool FixedPointUnit::membership(int64_t x, int64_t a_lo, int64_t a_hi,
                                bool last_subsection, MembershipRule rule) const {
    if (rule == MembershipRule::sign_test) {
        return qma_rho(x, a_lo, a_hi) <= 0;
    }
    if (last_subsection) {
        return a_lo <= x && x <= a_hi;
    }
    return a_lo <= x && x < a_hi;
}

int64_t FixedPointUnit::sine_square_scale(double theta_frac, double scale) const {
    if (!(theta_frac >= 0.0 && theta_frac <= 1.0)) {
        throw std::invalid_argument("sine_square_scale: theta_frac outside [0, 1]");
    }
    if (!(scale >= 0.0) || !std::isfinite(scale)) {
        throw std::invalid_argument("sine_square_scale: bad scale");
    }
    // Fold before evaluating so both phase-estimation branches (y and 2^m - y)
    // encode identically.
    double tf = theta_frac > 0.5 ? 1.0 - theta_frac : theta_frac;
    double s = std::sin(M_PI * tf);
    return from_real(scale * s * s);
}

}  // namespace adpaad
