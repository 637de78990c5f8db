#include "adpaad/qprimitives.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>

namespace adpaad {

namespace {

constexpr double kPi = std::numbers::pi;

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

double angle_of(double p) { return std::asin(std::sqrt(clamp01(p))); }

// Fejer kernel sin^2(M pi d) / (M^2 sin^2(pi d)), periodic in d with period 1.
double fejer(double d, uint64_t M) {
    d -= std::floor(d);
    const double s = std::sin(kPi * d);
    if (std::fabs(s) < 1e-15) return 1.0;
    const double num = std::sin(static_cast<double>(M) * kPi * d);
    const double Md = static_cast<double>(M);
    return (num * num) / (Md * Md * s * s);
}

void check_m(int m) {
    if (m < 1 || m > 24) throw std::invalid_argument("phase register width out of range");
}

}  // namespace

std::array<std::array<double, 2>, 2> GroverOperator::matrix() const noexcept {
    const double c = std::cos(2.0 * theta);
    const double s = std::sin(2.0 * theta);
    return {{{c, -s}, {s, c}}};
}

std::array<double, 2> GroverOperator::eigenphases() const {
    const auto R = matrix();
    const double tr = R[0][0] + R[1][1];
    const double det = R[0][0] * R[1][1] - R[0][1] * R[1][0];
    const double half_tr = tr / 2.0;
    const double disc = half_tr * half_tr - det;
    // rotation matrices: disc <= 0, eigenvalues half_tr +/- i sqrt(-disc)
    const double im = std::sqrt(std::max(0.0, -disc));
    const double phase = std::atan2(im, half_tr);
    return {-phase, phase};
}

std::vector<double> ae_outcome_pmf(double omega, int m) {
    check_m(m);
    const uint64_t M = uint64_t{1} << m;
    std::vector<double> pmf(M);
    for (uint64_t y = 0; y < M; ++y) {
        const double g = static_cast<double>(y) / static_cast<double>(M);
        pmf[y] = 0.5 * (fejer(g - omega, M) + fejer(g + omega, M));
    }
    return pmf;
}

AmplitudeEstimate amplitude_estimate(double good_probability, int m, AeMode mode,
                                     std::mt19937_64* rng) {
    check_m(m);
    const uint64_t M = uint64_t{1} << m;
    const double theta = angle_of(good_probability);
    const double omega = theta / kPi;  // in [0, 1/2]

    uint64_t y = 0;
    if (mode == AeMode::deterministic) {
        y = static_cast<uint64_t>(std::llround(omega * static_cast<double>(M)));
    } else {
        if (rng == nullptr)
            throw std::invalid_argument("sampled estimation needs a generator");
        const auto pmf = ae_outcome_pmf(omega, m);
        double draw = uniform_unit(*rng);
        y = M - 1;
        for (uint64_t k = 0; k < M; ++k) {
            if (draw < pmf[k]) {
                y = k;
                break;
            }
            draw -= pmf[k];
        }
        if (y > M / 2) y = M - y;  // the two eigenphase images alias
    }

    AmplitudeEstimate est;
    est.m = m;
    est.y = y;
    est.theta = kPi * static_cast<double>(y) / static_cast<double>(M);
    const double s = std::sin(est.theta);
    est.probability = s * s;
    return est;
}

double amplified_probability(double p, int iterations) {
    if (iterations < 0) throw std::invalid_argument("iteration count must be >= 0");
    const double theta = angle_of(p);
    const double s = std::sin(static_cast<double>(2 * iterations + 1) * theta);
    return s * s;
}

void amplitude_amplify(HybridState& st, const std::vector<std::string>& branch_regs,
                       const HybridState::Pred& good, int iterations) {
    if (iterations < 0) throw std::invalid_argument("iteration count must be >= 0");
    if (iterations == 0) return;

    uint64_t branch_mask = 0;
    for (const auto& name : branch_regs) {
        const auto f = st.layout().field(name);
        branch_mask |= f.mask << f.offset;
    }

    struct Split {
        double good = 0.0;
        double total = 0.0;
    };
    std::map<uint64_t, Split> branches;
    for (const auto& [basis, e] : st.entries()) {
        auto& b = branches[basis & branch_mask];
        const double p = std::norm(e.amp);
        b.total += p;
        if (good(basis, e)) b.good += p;
    }

    struct Scales {
        double good = 1.0;
        double bad = 1.0;
    };
    std::map<uint64_t, Scales> scales;
    const double k = static_cast<double>(2 * iterations + 1);
    for (const auto& [key, b] : branches) {
        const double theta = angle_of(b.good / b.total);
        Scales sc;
        const double s = std::sin(theta);
        const double c = std::cos(theta);
        if (s > 0.0) sc.good = std::sin(k * theta) / s;
        if (c > 0.0) sc.bad = std::cos(k * theta) / c;
        scales[key] = sc;
    }

    st.transform_amplitudes([&](uint64_t basis, const Entry& e) {
        const auto& sc = scales.at(basis & branch_mask);
        return e.amp * (good(basis, e) ? sc.good : sc.bad);
    });
    st.check_norm(1e-9);
}

InnerProductEstimate inner_product_estimate(const HybridState& a, const HybridState& b,
                                            int m, AeMode mode, std::mt19937_64* rng) {
    const auto& ra = a.layout().registers();
    const auto& rb = b.layout().registers();
    if (ra.size() != rb.size())
        throw std::invalid_argument("overlap states must share a layout");
    for (size_t i = 0; i < ra.size(); ++i) {
        if (ra[i].name != rb[i].name || ra[i].width != rb[i].width)
            throw std::invalid_argument("overlap states must share a layout");
    }

    std::complex<double> dot{};
    const auto& eb = b.entries();
    for (const auto& [basis, e] : a.entries()) {
        auto it = eb.find(basis);
        if (it != eb.end()) dot += std::conj(e.amp) * it->second.amp;
    }

    InnerProductEstimate out;
    out.overlap_exact = dot.real();
    const double p = clamp01(0.5 * (1.0 + out.overlap_exact));
    out.ae = amplitude_estimate(p, m, mode, rng);
    out.value = std::min(1.0, std::max(-1.0, 2.0 * out.ae.probability - 1.0));
    return out;
}

namespace {

struct SearchCounters {
    GroverStats local;
    GroverStats* sink;
    explicit SearchCounters(GroverStats* s) : sink(s) {}
    ~SearchCounters() {
        if (sink) *sink = local;
    }
};

int register_width(uint64_t domain) {
    int w = 1;
    while ((uint64_t{1} << w) < domain) ++w;
    return w;
}

uint64_t run_rounds(uint64_t domain, int w, int iterations,
                    const std::function<bool(uint64_t)>& residual, GroverStats& stats,
                    std::mt19937_64& rng) {
    RegisterLayout lay;
    lay.add("x", w);
    HybridState st(lay);
    st.prepare_uniform_subset("x", domain);
    const auto fx = lay.field("x");
    for (int j = 0; j < iterations; ++j) {
        st.phase_flip([&](uint64_t basis, const Entry&) {
            return residual(fx.get(basis));
        });
        st.reflect_about_uniform("x", domain);
        ++stats.iterations;
    }
    ++stats.measurements;
    return st.measure("x", rng);
}

}  // namespace

std::vector<uint64_t> grover_search(uint64_t domain,
                                    const std::function<bool(uint64_t)>& marked,
                                    GroverStrategy strategy, std::mt19937_64& rng,
                                    GroverStats* stats) {
    if (domain < 1) throw std::invalid_argument("search domain must be nonempty");
    if (domain > (uint64_t{1} << RegisterLayout::kMaxQubits))
        throw std::invalid_argument("search domain exceeds the simulator's qubit cap");
    SearchCounters sc(stats);
    GroverStats& st = sc.local;
    const int w = register_width(domain);

    std::set<uint64_t> found;
    auto residual = [&](uint64_t x) { return marked(x) && found.count(x) == 0; };

    if (strategy == GroverStrategy::known_count) {
        // the target count is this strategy's input; obtaining it is charged
        // as one exhaustive pass
        uint64_t targets = 0;
        for (uint64_t x = 0; x < domain; ++x) {
            ++st.sweep_checks;
            if (marked(x)) ++targets;
        }
        uint64_t safety = 0;
        while (found.size() < targets) {
            if (++safety > 10000)
                throw std::runtime_error("search failed to converge");
            ++st.rounds;
            const uint64_t residual_targets = targets - found.size();
            const double theta = angle_of(static_cast<double>(residual_targets) /
                                          static_cast<double>(domain));
            const int l = std::max(
                0, static_cast<int>(std::llround(kPi / (4.0 * theta) - 0.5)));
            const uint64_t y = run_rounds(domain, w, l, residual, st, rng);
            ++st.verifications;
            if (residual(y)) found.insert(y);
        }
    } else {
        const uint64_t idle_limit =
            static_cast<uint64_t>(std::ceil(3.0 * std::log2(static_cast<double>(domain) + 1.0))) + 8;
        double window = 1.0;
        const double window_cap = std::sqrt(static_cast<double>(domain));
        uint64_t idle = 0;
        while (idle < idle_limit) {
            ++st.rounds;
            const auto span = static_cast<uint64_t>(window);
            const int l = static_cast<int>(uniform_unit(rng) * static_cast<double>(span + 1));
            const uint64_t y = run_rounds(domain, w, l, residual, st, rng);
            ++st.verifications;
            if (residual(y)) {
                found.insert(y);
                window = 1.0;
                idle = 0;
            } else {
                window = std::min(window * 1.2, window_cap);
                ++idle;
            }
        }
        // verified closing sweep: the returned set provably equals the
        // marked set even though the target count was never known
        for (uint64_t x = 0; x < domain; ++x) {
            ++st.sweep_checks;
            if (residual(x)) found.insert(x);
        }
    }

    return {found.begin(), found.end()};
}

}  // namespace adpaad
