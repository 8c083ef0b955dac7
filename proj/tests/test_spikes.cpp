// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#include <catch_amalgamated.hpp>

#include <vector>

#include "otsim/error.hpp"
#include "otsim/spikes.hpp"

using namespace otsim;
using Catch::Approx;

TEST_CASE("flat trace has no spikes", "[spikes]") {
    const std::vector<double> zero(1000, 0.0);
    const auto st = extract_spikes(zero, 1e-9, 0.5, 2e-9);
    CHECK(st.spike_times.empty());
    CHECK(firing_rate(st) == 0.0);
}

TEST_CASE("pulses produce one spike each at interpolated crossings", "[spikes]") {
    std::vector<double> sig(300, 0.0);
    for (std::size_t start : {20u, 120u, 220u})
        for (std::size_t k = start; k < start + 10; ++k) sig[k] = 1.0;
    sig[19] = 0.25;  // crossing of 0.5 halfway between samples 19 and 20 -> t = 19.333
    const auto st = extract_spikes(sig, 1.0, 0.5, 2.0);
    REQUIRE(st.spike_times.size() == 3);
    CHECK(st.spike_times[0] == Approx(19.0 + 1.0 / 3.0));
    CHECK(st.spike_times[1] == Approx(119.5));
    CHECK(st.spike_times[2] == Approx(219.5));
}

TEST_CASE("refractory interval suppresses close crossings", "[spikes]") {
    std::vector<double> sig(40, 0.0);
    sig[10] = 1.0;
    sig[13] = 1.0;
    sig[30] = 1.0;
    CHECK(extract_spikes(sig, 1.0, 0.5, 2.0).spike_times.size() == 3);
    CHECK(extract_spikes(sig, 1.0, 0.5, 5.0).spike_times.size() == 2);
}

TEST_CASE("refractory shorter than two steps is rejected", "[spikes]") {
    const std::vector<double> sig(10, 0.0);
    CHECK_THROWS_AS(extract_spikes(sig, 1.0, 0.5, 1.0), Error);
}

TEST_CASE("firing rate is count over window", "[spikes]") {
    SpikeTrain st;
    st.t_start = 0.0;
    st.t_end = 100e-6;
    for (int k = 0; k < 10; ++k) st.spike_times.push_back(5e-6 + 10e-6 * k);
    CHECK(firing_rate(st) == Approx(100e3));
    CHECK(interval_rate(st) == Approx(100e3));
    CHECK(count_in(st, 0.0, 30e-6) == 3);
    CHECK(count_in(st, 10e-6, 30e-6) == 2);
    CHECK(count_in(st, 25e-6, 25e-6) == 0);

    SpikeTrain empty;
    empty.t_end = 1e-3;
    CHECK(firing_rate(empty) == 0.0);
}
