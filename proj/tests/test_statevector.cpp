#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "adpaad/statevector.hpp"

using namespace adpaad;

namespace {

RegisterLayout small_layout() {
    RegisterLayout lay;
    lay.add("i", 3);
    lay.add("t", 2);
    lay.add("flag", 1);
    return lay;
}

}  // namespace

TEST_CASE("layout packs registers little-endian and round-trips fields") {
    auto lay = small_layout();
    CHECK(lay.total_width() == 6);
    auto fi = lay.field("i");
    auto ft = lay.field("t");
    auto ff = lay.field("flag");
    CHECK(fi.offset == 0);
    CHECK(ft.offset == 3);
    CHECK(ff.offset == 5);

    uint64_t basis = 0;
    basis = fi.set(basis, 5);
    basis = ft.set(basis, 2);
    basis = ff.set(basis, 1);
    CHECK(basis == (5u | (2u << 3) | (1u << 5)));
    CHECK(fi.get(basis) == 5);
    CHECK(ft.get(basis) == 2);
    CHECK(ff.get(basis) == 1);

    CHECK_THROWS_AS(lay.field("nope"), std::invalid_argument);
    CHECK_THROWS_AS(lay.add("i", 1), std::invalid_argument);
}

TEST_CASE("layout enforces the qubit cap") {
    RegisterLayout lay;
    lay.add("data", 24);
    lay.add("aux", 2);  // exactly 26: allowed
    CHECK(lay.total_width() == 26);
    CHECK_THROWS_AS(lay.add("extra", 1), std::length_error);
}

TEST_CASE("uniform preparation spans a register with equal amplitudes") {
    HybridState st(small_layout());
    st.hadamard_uniform("t");
    CHECK(st.entry_count() == 4);
    for (const auto& [basis, e] : st.entries()) {
        (void)basis;
        CHECK(e.amp.real() == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(e.amp.imag() == 0.0);
    }
    st.check_norm(1e-12);

    // preparing again is invalid: the register is no longer |0>
    CHECK_THROWS_AS(st.hadamard_uniform("t"), std::logic_error);
}

TEST_CASE("subset preparation covers non-power-of-two domains") {
    HybridState st(small_layout());
    st.prepare_uniform_subset("i", 5);
    CHECK(st.entry_count() == 5);
    CHECK(st.probability_of([](uint64_t, const Entry&) { return true; }) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(st.prepare_uniform_subset("t", 5), std::invalid_argument);
}

TEST_CASE("annotations are written per term and read back by id") {
    HybridState st(small_layout());
    st.prepare_uniform_subset("i", 4);
    auto fi = st.layout().field("i");
    st.annotate("x", [fi](uint64_t basis, const Entry&) {
        return static_cast<int64_t>(fi.get(basis)) * 10;
    });
    const int id = st.intern("x");
    for (const auto& [basis, e] : st.entries()) {
        CHECK(HybridState::annotation(e, id) ==
              static_cast<int64_t>(fi.get(basis)) * 10);
    }
    // overwrite in place
    st.annotate("x", [](uint64_t, const Entry&) { return int64_t{7}; });
    for (const auto& [basis, e] : st.entries()) {
        (void)basis;
        CHECK(HybridState::annotation(e, id) == 7);
    }
    st.drop_annotation("x");
    for (const auto& [basis, e] : st.entries()) {
        (void)basis;
        CHECK(!HybridState::has_annotation(e, id));
    }
}

TEST_CASE("basis maps relabel terms and reject collisions") {
    HybridState st(small_layout());
    st.prepare_uniform_subset("i", 4);
    auto fi = st.layout().field("i");
    auto ff = st.layout().field("flag");

    // flag := parity of i (injective: XOR into a fresh flag)
    st.apply_basis_map([fi, ff](uint64_t basis, const Entry&) {
        const uint64_t parity = fi.get(basis) & 1;
        return ff.set(basis, ff.get(basis) ^ parity);
    });
    CHECK(st.probability_of([ff](uint64_t basis, const Entry&) {
        return ff.get(basis) == 1;
    }) == doctest::Approx(0.5).epsilon(1e-12));

    // everything -> basis 0 is not injective
    CHECK_THROWS_AS(st.apply_basis_map([](uint64_t, const Entry&) { return uint64_t{0}; }),
                    std::logic_error);
}

TEST_CASE("sqrt-ratio rotation puts the ratio into the flag probability") {
    HybridState st(small_layout());
    st.prepare_uniform_subset("i", 2);
    const int frac = 16;
    const int64_t quarter = int64_t{1} << (frac - 2);  // 0.25
    st.controlled_rotation("flag", HybridState::RotationKind::sqrt_ratio, frac,
                           [quarter](uint64_t, const Entry&) { return quarter; });
    auto ff = st.layout().field("flag");
    CHECK(st.probability_of([ff](uint64_t basis, const Entry&) {
        return ff.get(basis) == 1;
    }) == doctest::Approx(0.25).epsilon(1e-14));
    st.check_norm(1e-12);

    // rotating an already-set target faults
    CHECK_THROWS_AS(
        st.controlled_rotation("flag", HybridState::RotationKind::sqrt_ratio, frac,
                               [quarter](uint64_t, const Entry&) { return quarter; }),
        std::logic_error);
}

TEST_CASE("guarded rotation leaves unguarded terms alone") {
    HybridState st(small_layout());
    st.prepare_uniform_subset("i", 2);
    auto fi = st.layout().field("i");
    auto ff = st.layout().field("flag");
    const int frac = 16;
    st.controlled_rotation(
        "flag", HybridState::RotationKind::sqrt_ratio, frac,
        [frac](uint64_t, const Entry&) { return int64_t{1} << frac; },  // ratio 1
        [fi](uint64_t basis, const Entry&) { return fi.get(basis) == 1; });
    // i=1 rotated fully to flag=1, i=0 untouched at flag=0
    CHECK(st.probability_of([fi, ff](uint64_t basis, const Entry&) {
        return fi.get(basis) == 1 && ff.get(basis) == 1;
    }) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(st.probability_of([fi, ff](uint64_t basis, const Entry&) {
        return fi.get(basis) == 0 && ff.get(basis) == 0;
    }) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("linear-ratio rotation keeps the sign on the flagged branch") {
    HybridState st(small_layout());
    const int frac = 16;
    const int64_t minus_half = -(int64_t{1} << (frac - 1));
    st.controlled_rotation("flag", HybridState::RotationKind::linear_ratio, frac,
                           [minus_half](uint64_t, const Entry&) { return minus_half; });
    auto ff = st.layout().field("flag");
    for (const auto& [basis, e] : st.entries()) {
        if (ff.get(basis) == 1)
            CHECK(e.amp.real() == doctest::Approx(-0.5).epsilon(1e-15));
        else
            CHECK(e.amp.real() == doctest::Approx(std::sqrt(0.75)).epsilon(1e-15));
    }
    st.check_norm(1e-12);
}

TEST_CASE("postselection renormalizes and reports the kept probability") {
    HybridState st(small_layout());
    st.prepare_uniform_subset("i", 2);
    const int frac = 16;
    st.controlled_rotation("flag", HybridState::RotationKind::sqrt_ratio, frac,
                           [frac](uint64_t, const Entry&) {
                               return int64_t{1} << (frac - 2);  // 0.25
                           });
    auto ff = st.layout().field("flag");
    const double kept = st.postselect(
        [ff](uint64_t basis, const Entry&) { return ff.get(basis) == 1; });
    CHECK(kept == doctest::Approx(0.25).epsilon(1e-12));
    st.check_norm(1e-12);
    CHECK(st.probability_of([ff](uint64_t basis, const Entry&) {
        return ff.get(basis) == 1;
    }) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(
        st.postselect([ff](uint64_t basis, const Entry&) { return ff.get(basis) == 0; }),
        std::runtime_error);
}

TEST_CASE("measurement collapses onto the observed value") {
    std::mt19937_64 rng(7);
    int ones = 0;
    const int trials = 400;
    for (int it = 0; it < trials; ++it) {
        HybridState st(small_layout());
        const int frac = 16;
        st.controlled_rotation("flag", HybridState::RotationKind::sqrt_ratio, frac,
                               [frac](uint64_t, const Entry&) {
                                   return int64_t{1} << (frac - 2);  // P(1) = 0.25
                               });
        const uint64_t outcome = st.measure("flag", rng);
        auto ff = st.layout().field("flag");
        CHECK(st.probability_of([ff, outcome](uint64_t basis, const Entry&) {
            return ff.get(basis) == outcome;
        }) == doctest::Approx(1.0).epsilon(1e-12));
        ones += static_cast<int>(outcome);
    }
    // mean 100, sigma ~8.7: a +/-50 window is a >5 sigma allowance
    CHECK(ones > 50);
    CHECK(ones < 150);
}

TEST_CASE("phase flip is an involution") {
    HybridState st(small_layout());
    st.prepare_uniform_subset("i", 4);
    auto fi = st.layout().field("i");
    auto marked = [fi](uint64_t basis, const Entry&) { return fi.get(basis) == 2; };
    const auto before = st.entries();
    st.phase_flip(marked);
    CHECK(st.entries().at(2).amp.real() == -before.at(2).amp.real());
    st.phase_flip(marked);
    CHECK(st.entries().at(2).amp == before.at(2).amp);
}

TEST_CASE("reflection about uniform fixes the uniform state") {
    HybridState st(small_layout());
    st.prepare_uniform_subset("i", 5);
    const auto before = st.entries();
    st.reflect_about_uniform("i", 5);
    for (const auto& [basis, e] : before) {
        CHECK(st.entries().at(basis).amp.real() ==
              doctest::Approx(e.amp.real()).epsilon(1e-14));
    }
}

TEST_CASE("one search iteration on a 4-element domain is exact") {
    // flip + reflect amplifies a single marked element of 4 to probability 1
    HybridState st(small_layout());
    st.prepare_uniform_subset("i", 4);
    auto fi = st.layout().field("i");
    auto marked = [fi](uint64_t basis, const Entry&) { return fi.get(basis) == 2; };
    st.phase_flip(marked);
    st.reflect_about_uniform("i", 4);
    CHECK(st.probability_of(marked) == doctest::Approx(1.0).epsilon(1e-12));
    st.check_norm(1e-12);
}

TEST_CASE("norm checks catch non-unitary amplitude maps") {
    HybridState st(small_layout());
    st.prepare_uniform_subset("i", 2);
    st.check_norm();
    st.transform_amplitudes(
        [](uint64_t, const Entry& e) { return e.amp * 2.0; });
    CHECK_THROWS_AS(st.check_norm(1e-9), std::logic_error);
}

TEST_CASE("wide layouts stay sparse") {
    RegisterLayout lay;
    lay.add("data", 26);
    HybridState st(lay);
    st.prepare_uniform_subset("data", 8);
    CHECK(st.entry_count() == 8);
    st.check_norm(1e-12);
}

TEST_CASE("csv dump lists fields and annotations deterministically") {
    HybridState st(small_layout());
    st.prepare_uniform_subset("i", 2);
    st.annotate("x", [](uint64_t basis, const Entry&) {
        return static_cast<int64_t>(basis) + 41;
    });
    std::ostringstream out;
    st.dump_csv(out);
    const std::string text = out.str();
    CHECK(text.find("basis,i,t,flag,re,im,prob,annotations") != std::string::npos);
    CHECK(text.find("x=41") != std::string::npos);
    CHECK(text.find("x=42") != std::string::npos);
}
