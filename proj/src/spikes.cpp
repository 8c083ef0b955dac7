// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#include "otsim/spikes.hpp"

#include <algorithm>
#include <cmath>

#include "otsim/error.hpp"

namespace otsim {

SpikeTrain extract_spikes(std::span<const double> signal, Seconds dt, double threshold, Seconds refractory) {
    require(dt > 0.0, "dt must be > 0");
    require(refractory >= 2.0 * dt * (1.0 - 1e-9), "refractory interval must be at least 2 dt");
    SpikeTrain st;
    st.detect_threshold = threshold;
    st.t_start = 0.0;
    st.t_end = signal.empty() ? 0.0 : dt * static_cast<double>(signal.size() - 1);
    for (std::size_t k = 1; k < signal.size(); ++k) {
        const double a = signal[k - 1];
        const double b = signal[k];
        if (!(a < threshold && b >= threshold)) continue;
        const double frac = (threshold - a) / (b - a);
        const Seconds t = dt * (static_cast<double>(k - 1) + frac);
        if (!st.spike_times.empty() && t - st.spike_times.back() < refractory) continue;
        st.spike_times.push_back(t);
    }
    return st;
}

SpikeTrain extract_spikes(const Trace& tr, NodeIndex node, Volts threshold, Seconds refractory) {
    const auto& v = tr.voltage(node);
    return extract_spikes(std::span<const double>(v), tr.dt, threshold, refractory);
}

Hertz firing_rate(const SpikeTrain& st) {
    const Seconds span = st.t_end - st.t_start;
    if (span <= 0.0) return 0.0;
    return static_cast<double>(st.spike_times.size()) / span;
}

Hertz interval_rate(const SpikeTrain& st) {
    const auto& t = st.spike_times;
    if (t.size() < 3) return 0.0;
    return static_cast<double>(t.size() - 2) / (t.back() - t[1]);
}

std::size_t count_in(const SpikeTrain& st, Seconds t_lo, Seconds t_hi) {
    const auto lo = std::lower_bound(st.spike_times.begin(), st.spike_times.end(), t_lo);
    const auto hi = std::lower_bound(st.spike_times.begin(), st.spike_times.end(), t_hi);
    return hi > lo ? static_cast<std::size_t>(hi - lo) : 0;
}

}  // namespace otsim
