// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#pragma once

#include <span>
#include <vector>

#include "otsim/simulator.hpp"

namespace otsim {

struct SpikeTrain {
    std::vector<Seconds> spike_times;
    Volts detect_threshold = 0.0;
    Seconds t_start = 0.0;
    Seconds t_end = 0.0;
};

// One spike per upward crossing of `threshold`; crossings closer than
// `refractory` (at least 2 dt) to the previous spike are suppressed. Spike times are the
// linearly interpolated crossing instants.
SpikeTrain extract_spikes(std::span<const double> signal, Seconds dt, double threshold,
                          Seconds refractory);
SpikeTrain extract_spikes(const Trace& tr, NodeIndex node, Volts threshold, Seconds refractory);

Hertz firing_rate(const SpikeTrain& st);

// Steady-state rate from the inter-spike intervals after the first spike
// (the first interval includes the charge-up from rest). Zero below three
// spikes.
Hertz interval_rate(const SpikeTrain& st);

// Number of spikes with t_lo <= t < t_hi.
std::size_t count_in(const SpikeTrain& st, Seconds t_lo, Seconds t_hi);

}  // namespace otsim
