#include "adpaad/qadpaad.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "adpaad/timeseries.hpp"

namespace adpaad {

namespace {

using u128 = unsigned __int128;

uint64_t sat_u64(u128 v) {
    constexpr uint64_t mx = ~uint64_t{0};
    return v > mx ? mx : static_cast<uint64_t>(v);
}

uint64_t sat_add(uint64_t a, u128 b) { return sat_u64(static_cast<u128>(a) + b); }

// state preparations consumed by one estimation pass at m phase bits
u128 prep_calls(int m) { return (u128{1} << (m + 1)) - 1; }

// Per-oracle call counts of one full preparation of each stage's input state.
struct CostModel {
    u128 c1 = 0, c2 = 0, c3 = 0;

    explicit CostModel(const PipelineConfig& cfg) {
        const int l = cfg.aa_mode == AaMode::amplified ? cfg.aa_iterations : 0;
        const u128 preps_per_load = 1 + 2 * static_cast<u128>(l);
        c1 = preps_per_load * prep_calls(cfg.m1);
        c2 = 2 * c1 * prep_calls(cfg.m2);
        c3 = c2 * (prep_calls(cfg.m3) + prep_calls(cfg.m4));
    }
};

int width_for(uint64_t count) {
    int w = 1;
    while ((uint64_t{1} << w) < count) ++w;
    return w;
}

double dyadic_frac(const AmplitudeEstimate& ae) {
    return std::ldexp(static_cast<double>(ae.y), -ae.m);
}

void validate(const PipelineConfig& cfg) {
    if (cfg.q < 1) throw std::invalid_argument("subsection count must be >= 1");
    for (int m : {cfg.m1, cfg.m2, cfg.m3, cfg.m4}) {
        if (m < 1 || m > 24)
            throw std::invalid_argument("phase register width out of range");
    }
    if (cfg.aa_iterations < 0)
        throw std::invalid_argument("amplification iteration count must be >= 0");
    if (!cfg.fx.valid()) throw std::invalid_argument("invalid fixed-point format");
}

}  // namespace

Stage1Result estimate_subsection_means(const WindowViews& views,
                                       const PipelineConfig& cfg, double C,
                                       OracleCounters& counters, std::mt19937_64& rng) {
    validate(cfg);
    const size_t K = views.size();
    if (K < 1) throw std::invalid_argument("need at least one window");
    const size_t n = views[0].size();
    for (const auto& w : views) {
        if (w.size() != n) throw std::invalid_argument("windows must share one length");
        for (double x : w) {
            if (x < 0.0) throw std::invalid_argument("samples must be nonnegative");
            if (x > C) throw std::invalid_argument("normalizer below sample range");
        }
    }
    if (C <= 0.0) throw std::invalid_argument("rotation normalizer must be positive");
    const int q = cfg.q;
    const int l = cfg.aa_mode == AaMode::amplified ? cfg.aa_iterations : 0;

    FixedPointUnit fxu(cfg.fx);
    const int64_t one = fxu.from_real(1.0);
    const int64_t c_raw = fxu.from_real(C);

    // bounds oracle table
    std::vector<std::vector<int64_t>> bounds_raw(K);
    for (size_t i = 0; i < K; ++i) {
        const auto b = subsection_bounds(amplitude_domain(views[i]), q);
        bounds_raw[i].reserve(b.size());
        for (double v : b) bounds_raw[i].push_back(fxu.from_real(v));
    }

    RegisterLayout lay;
    lay.add("i", width_for(K));
    lay.add("t", width_for(static_cast<uint64_t>(q)));
    lay.add("j", width_for(n));
    lay.add("member", 1);
    lay.add("rot", 1);
    const auto fi = lay.field("i");
    const auto ft = lay.field("t");
    const auto fj = lay.field("j");
    const auto fm = lay.field("member");
    const auto fr = lay.field("rot");

    HybridState st(lay);
    st.prepare_uniform_subset("i", K);
    st.prepare_uniform_subset("t", static_cast<uint64_t>(q));
    st.prepare_uniform_subset("j", n);

    // sample oracle: x annotation
    st.annotate("x", [&](uint64_t basis, const Entry&) {
        return fxu.from_real(views[fi.get(basis)][fj.get(basis)]);
    });
    // bounds oracle: subsection edges for the branch label
    st.annotate("alo", [&](uint64_t basis, const Entry&) {
        return bounds_raw[fi.get(basis)][ft.get(basis)];
    });
    st.annotate("ahi", [&](uint64_t basis, const Entry&) {
        return bounds_raw[fi.get(basis)][ft.get(basis) + 1];
    });

    const int id_x = st.intern("x");
    const int id_alo = st.intern("alo");
    const int id_ahi = st.intern("ahi");

    // arithmetic unit: the product (x - alo)(x - ahi) kept as a register
    st.annotate("rho", [&](uint64_t, const Entry& e) {
        return fxu.qma_rho(HybridState::annotation(e, id_x),
                           HybridState::annotation(e, id_alo),
                           HybridState::annotation(e, id_ahi));
    });

    // membership comparator -> flag
    st.apply_basis_map([&](uint64_t basis, const Entry& e) {
        const bool last = ft.get(basis) + 1 == static_cast<uint64_t>(q);
        const bool in = fxu.membership(HybridState::annotation(e, id_x),
                                       HybridState::annotation(e, id_alo),
                                       HybridState::annotation(e, id_ahi), last,
                                       cfg.membership);
        return fm.set(basis, fm.get(basis) ^ (in ? 1 : 0));
    });

    // per-branch member counts, read off the state before any filtering
    std::vector<std::vector<int>> member_count(K, std::vector<int>(q, 0));
    for (size_t i = 0; i < K; ++i) {
        for (int t = 0; t < q; ++t) {
            const double p = st.probability_of([&](uint64_t basis, const Entry&) {
                return fi.get(basis) == i &&
                       ft.get(basis) == static_cast<uint64_t>(t) && fm.get(basis) == 1;
            });
            member_count[i][static_cast<size_t>(t)] = static_cast<int>(std::llround(
                p * static_cast<double>(K) * q * static_cast<double>(n)));
        }
    }

    double keep = 0.0;
    if (cfg.aa_mode == AaMode::postselect) {
        keep = st.postselect(
            [&](uint64_t basis, const Entry&) { return fm.get(basis) == 1; });
    } else {
        amplitude_amplify(
            st, {"i", "t"},
            [&](uint64_t basis, const Entry&) { return fm.get(basis) == 1; }, l);
        // route non-members off the flag the estimator watches
        st.apply_basis_map([&](uint64_t basis, const Entry&) {
            return fr.set(basis, fr.get(basis) ^ (fm.get(basis) == 0 ? 1 : 0));
        });
        keep = 1.0;
        for (size_t i = 0; i < K; ++i) {
            for (int t = 0; t < q; ++t) {
                const double branch = st.probability_of([&](uint64_t b, const Entry&) {
                    return fi.get(b) == i && ft.get(b) == static_cast<uint64_t>(t);
                });
                if (branch <= 0.0) continue;
                const double member = st.probability_of([&](uint64_t b, const Entry&) {
                    return fi.get(b) == i && ft.get(b) == static_cast<uint64_t>(t) &&
                           fm.get(b) == 1;
                });
                keep = std::min(keep, member / branch);
            }
        }
    }

    // amplitude loader: P(rot = 0 | member at x) = x / C
    st.controlled_rotation(
        "rot", HybridState::RotationKind::sqrt_ratio, cfg.fx.frac_bits,
        [&](uint64_t, const Entry& e) {
            return fxu.subtract(one,
                                fxu.divide(HybridState::annotation(e, id_x), c_raw));
        },
        [&](uint64_t basis, const Entry&) { return fm.get(basis) == 1; });
    st.check_norm(1e-9);

    const double calibration =
        cfg.aa_mode == AaMode::amplified
            ? amplified_probability(1.0 / static_cast<double>(q), l)
            : 1.0;
    if (calibration <= 0.0)
        throw std::runtime_error("amplification calibration vanished");
    const int64_t cal_raw = fxu.from_real(calibration);
    if (cal_raw == 0) throw std::runtime_error("amplification calibration underflowed");

    std::vector<BranchRecord> branches;
    branches.reserve(K * static_cast<size_t>(q));
    std::vector<std::vector<int64_t>> mu_raw(K, std::vector<int64_t>(q, 0));
    for (size_t i = 0; i < K; ++i) {
        for (int t = 0; t < q; ++t) {
            BranchRecord rec;
            rec.window = static_cast<int>(i);
            rec.subsection = t + 1;
            rec.member_count = member_count[i][static_cast<size_t>(t)];
            rec.branch_weight = st.probability_of([&](uint64_t b, const Entry&) {
                return fi.get(b) == i && ft.get(b) == static_cast<uint64_t>(t);
            });
            const double good = st.probability_of([&](uint64_t b, const Entry&) {
                return fi.get(b) == i && ft.get(b) == static_cast<uint64_t>(t) &&
                       fm.get(b) == 1 && fr.get(b) == 0;
            });
            rec.good_probability =
                rec.branch_weight > 0.0 ? good / rec.branch_weight : 0.0;
            rec.ae = amplitude_estimate(rec.good_probability, cfg.m1, cfg.ae_mode, &rng);
            int64_t mu = fxu.sine_square_scale(dyadic_frac(rec.ae), C);
            if (cfg.aa_mode == AaMode::amplified) mu = fxu.divide(mu, cal_raw);
            rec.mu_raw = mu;
            rec.mu_hat = fxu.to_real(mu);
            mu_raw[i][static_cast<size_t>(t)] = mu;
            branches.push_back(rec);
        }
    }

    const CostModel cm(cfg);
    counters.stage1_x = sat_add(counters.stage1_x, cm.c1);
    counters.stage1_bounds = sat_add(counters.stage1_bounds, cm.c1);

    // declared stage output: uniform branch labels carrying the mean table
    RegisterLayout out_lay;
    out_lay.add("i", width_for(K));
    out_lay.add("t", width_for(static_cast<uint64_t>(q)));
    const auto ofi = out_lay.field("i");
    const auto oft = out_lay.field("t");
    HybridState out(out_lay);
    out.prepare_uniform_subset("i", K);
    out.prepare_uniform_subset("t", static_cast<uint64_t>(q));
    out.annotate("mu", [&](uint64_t basis, const Entry&) {
        return mu_raw[ofi.get(basis)][oft.get(basis)];
    });

    return Stage1Result{std::move(branches), std::move(mu_raw), keep, calibration,
                        std::move(out)};
}

Stage2Result estimate_pair_similarities(const std::vector<std::vector<int64_t>>& mu_raw,
                                        const PipelineConfig& cfg, double C,
                                        OracleCounters& counters, std::mt19937_64& rng) {
    validate(cfg);
    const size_t K = mu_raw.size();
    if (K < 2) throw std::invalid_argument("need at least two windows");
    for (const auto& row : mu_raw) {
        if (row.size() != static_cast<size_t>(cfg.q))
            throw std::invalid_argument("mean table shape mismatch");
    }
    if (C <= 0.0) throw std::invalid_argument("rotation normalizer must be positive");
    const int q = cfg.q;

    FixedPointUnit fxu(cfg.fx);
    const int64_t two_c = fxu.from_real(2.0 * C);

    RegisterLayout lay;
    lay.add("i", width_for(K));
    lay.add("k", width_for(K));
    lay.add("t", width_for(static_cast<uint64_t>(q)));
    lay.add("rot", 1);
    const auto fi = lay.field("i");
    const auto fk = lay.field("k");
    const auto ft = lay.field("t");
    const auto fr = lay.field("rot");

    HybridState st(lay);
    st.prepare_uniform_subset("i", K);
    st.prepare_uniform_subset("k", K);
    st.prepare_uniform_subset("t", static_cast<uint64_t>(q));

    // two mean-table reads per branch label
    st.annotate("mui", [&](uint64_t basis, const Entry&) {
        return mu_raw[fi.get(basis)][ft.get(basis)];
    });
    st.annotate("muk", [&](uint64_t basis, const Entry&) {
        return mu_raw[fk.get(basis)][ft.get(basis)];
    });
    const int id_mui = st.intern("mui");
    const int id_muk = st.intern("muk");
    st.annotate("diff", [&](uint64_t, const Entry& e) {
        return fxu.subtract(HybridState::annotation(e, id_mui),
                            HybridState::annotation(e, id_muk));
    });
    const int id_diff = st.intern("diff");

    // signed loader: amplitude diff/(2C) on the flag
    st.controlled_rotation("rot", HybridState::RotationKind::linear_ratio,
                           cfg.fx.frac_bits, [&](uint64_t, const Entry& e) {
                               return fxu.divide(HybridState::annotation(e, id_diff),
                                                 two_c);
                           });
    st.check_norm(1e-9);

    Stage2Result out;
    out.sbar_hat.assign(K, std::vector<double>(K, 0.0));
    out.sbar_raw.assign(K, std::vector<int64_t>(K, 0));
    out.pairs.reserve(K * (K - 1) / 2);
    const double pair_weight = 1.0 / (static_cast<double>(K) * static_cast<double>(K));
    for (size_t a = 0; a + 1 < K; ++a) {
        for (size_t b = a + 1; b < K; ++b) {
            PairRecord rec;
            rec.a = static_cast<int>(a);
            rec.b = static_cast<int>(b);
            const double good = st.probability_of([&](uint64_t bs, const Entry&) {
                return fi.get(bs) == a && fk.get(bs) == b && fr.get(bs) == 1;
            });
            rec.good_probability = good / pair_weight;
            rec.ae = amplitude_estimate(rec.good_probability, cfg.m2, cfg.ae_mode, &rng);
            rec.sbar_hat = std::sin(rec.ae.theta);
            rec.sbar_raw = fxu.from_real(rec.sbar_hat);
            out.sbar_hat[a][b] = out.sbar_hat[b][a] = rec.sbar_hat;
            out.sbar_raw[a][b] = out.sbar_raw[b][a] = rec.sbar_raw;
            out.pairs.push_back(rec);
        }
    }

    const CostModel cm(cfg);
    counters.stage2_x = sat_add(counters.stage2_x, cm.c2);
    counters.stage2_bounds = sat_add(counters.stage2_bounds, cm.c2);
    return out;
}

ScoreEstimate estimate_anomaly_scores(const Stage2Result& sim, const PipelineConfig& cfg,
                                      OracleCounters& counters, std::mt19937_64& rng) {
    validate(cfg);
    const size_t K = sim.sbar_raw.size();
    if (K < 2) throw std::invalid_argument("need at least two windows");

    FixedPointUnit fxu(cfg.fx);
    const int64_t one = fxu.from_real(1.0);

    ScoreEstimate out;
    out.row_ae.reserve(K);
    out.row_hat.reserve(K);
    out.row_raw.reserve(K);

    // component states: |k>(xi|0> + sqrt(1-xi^2)|1>) against the plain
    // uniform reference; the ancilla-0 probability reads the mean of xi
    RegisterLayout row_lay;
    row_lay.add("k", width_for(K));
    row_lay.add("s", 1);
    const auto rk = row_lay.field("k");

    for (size_t i = 0; i < K; ++i) {
        HybridState phi(row_lay);
        phi.prepare_uniform_subset("k", K);
        phi.controlled_rotation(
            "s", HybridState::RotationKind::sqrt_ratio, cfg.fx.frac_bits,
            [&](uint64_t basis, const Entry&) {
                const int64_t sb = sim.sbar_raw[i][rk.get(basis)];
                return fxu.subtract(one, fxu.multiply(sb, sb));
            });
        phi.check_norm(1e-9);
        HybridState ref(row_lay);
        ref.prepare_uniform_subset("k", K);

        const auto est = inner_product_estimate(phi, ref, cfg.m3, cfg.ae_mode, &rng);
        out.row_ae.push_back(est.ae);
        const int64_t raw =
            fxu.subtract(fxu.sine_square_scale(dyadic_frac(est.ae), 2.0), one);
        out.row_raw.push_back(raw);
        out.row_hat.push_back(fxu.to_real(raw));
    }

    RegisterLayout all_lay;
    all_lay.add("i", width_for(K));
    all_lay.add("k", width_for(K));
    all_lay.add("s", 1);
    const auto ai = all_lay.field("i");
    const auto ak = all_lay.field("k");
    HybridState phi_all(all_lay);
    phi_all.prepare_uniform_subset("i", K);
    phi_all.prepare_uniform_subset("k", K);
    phi_all.controlled_rotation(
        "s", HybridState::RotationKind::sqrt_ratio, cfg.fx.frac_bits,
        [&](uint64_t basis, const Entry&) {
            const int64_t sb = sim.sbar_raw[ai.get(basis)][ak.get(basis)];
            return fxu.subtract(one, fxu.multiply(sb, sb));
        });
    phi_all.check_norm(1e-9);
    HybridState ref_all(all_lay);
    ref_all.prepare_uniform_subset("i", K);
    ref_all.prepare_uniform_subset("k", K);

    const auto gest = inner_product_estimate(phi_all, ref_all, cfg.m4, cfg.ae_mode, &rng);
    out.global_ae = gest.ae;
    out.global_raw = fxu.subtract(fxu.sine_square_scale(dyadic_frac(gest.ae), 2.0), one);
    out.global_hat = fxu.to_real(out.global_raw);

    if (out.global_raw <= 0)
        throw std::runtime_error(
            "estimated global similarity is not positive; scores undefined");
    out.h_hat.reserve(K);
    out.h_raw.reserve(K);
    for (size_t i = 0; i < K; ++i) {
        const int64_t h = fxu.divide(out.row_raw[i], out.global_raw);
        out.h_raw.push_back(h);
        out.h_hat.push_back(fxu.to_real(h));
    }

    const CostModel cm(cfg);
    counters.stage3_x = sat_add(counters.stage3_x, cm.c3);
    counters.stage3_bounds = sat_add(counters.stage3_bounds, cm.c3);
    return out;
}

std::vector<int> threshold_detect(const std::vector<int64_t>& h_raw,
                                  const PipelineConfig& cfg, OracleCounters& counters,
                                  GroverStats& gstats, std::mt19937_64& rng) {
    validate(cfg);
    const uint64_t K = h_raw.size();
    if (K < 1) throw std::invalid_argument("nothing to search");
    FixedPointUnit fxu(cfg.fx);
    const int64_t delta_raw = fxu.from_real(cfg.delta);

    auto marked = [&](uint64_t x) {
        return x < K && FixedPointUnit::compare_ge(h_raw[x], delta_raw);
    };
    const auto hits = grover_search(K, marked, cfg.grover, rng, &gstats);

    const CostModel cm(cfg);
    const u128 per_eval = cm.c1 + cm.c2 + cm.c3;
    const u128 evals = 2 * static_cast<u128>(gstats.iterations) + gstats.verifications +
                       gstats.sweep_checks;
    counters.score_evaluations = sat_add(counters.score_evaluations, evals);
    counters.stage4_x = sat_add(counters.stage4_x, evals * per_eval);
    counters.stage4_bounds = sat_add(counters.stage4_bounds, evals * per_eval);

    std::vector<int> detected;
    detected.reserve(hits.size());
    for (uint64_t x : hits) detected.push_back(static_cast<int>(x) + 1);
    return detected;
}

PipelineResult run_pipeline(const WindowViews& views, const PipelineConfig& cfg) {
    validate(cfg);
    if (views.size() < 2) throw std::invalid_argument("need at least two windows");
    const double C = max_abs_sample(views);
    if (C <= 0.0)
        throw std::invalid_argument("all samples are zero; scores undefined");

    std::mt19937_64 rng(cfg.seed);
    OracleCounters counters;
    GroverStats gstats;

    auto s1 = estimate_subsection_means(views, cfg, C, counters, rng);
    auto s2 = estimate_pair_similarities(s1.mu_raw, cfg, C, counters, rng);
    auto sc = estimate_anomaly_scores(s2, cfg, counters, rng);
    auto detected = threshold_detect(sc.h_raw, cfg, counters, gstats, rng);

    return PipelineResult{C,
                          std::move(s1),
                          std::move(s2),
                          std::move(sc),
                          std::move(detected),
                          counters,
                          gstats};
}

}  // namespace adpaad
