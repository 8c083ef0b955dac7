// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#include "otsim/device.hpp"

#include <algorithm>
#include <cmath>

#include "otsim/error.hpp"

namespace otsim {

namespace {

// Accumulated dt sums drift below the nominal delay by a few ulps.
bool delay_reached(Seconds elapsed, Seconds tau) { return elapsed >= tau * (1.0 - 1e-9); }

bool finite_all(std::initializer_list<double> xs) {
    return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

void OtsParams::validate() const {
    if (!finite_all({v_th, v_hold, r_on, g_off, i_hold, tau_on, tau_off}))
        fail(ErrorCode::InvalidArgument, "OTS parameters must be finite");
    require(v_hold > 0.0, "OTS v_hold must be > 0");
    require(v_th > v_hold, "OTS v_th must exceed v_hold");
    require(r_on > 0.0 && g_off > 0.0, "OTS r_on and g_off must be > 0");
    require(r_on * g_off < 1e-3, "OTS on/off contrast below three decades (r_on*g_off >= 1e-3)");
    require(i_hold > 0.0, "OTS i_hold must be > 0");
    require(tau_on >= 0.0 && tau_off >= 0.0, "OTS switching delays must be >= 0");
}

OtsParams default_params() { return OtsParams{}; }

Amperes ots_current(const OtsParams& p, const OtsState& s, Volts v) {
    if (!std::isfinite(v)) fail(ErrorCode::NonFinite, "non-finite OTS voltage");
    if (s.phase == OtsPhase::Off) return p.g_off * v;
    const double mag = std::max(0.0, std::abs(v) - p.v_hold) / p.r_on;
    return v < 0.0 ? -mag : mag;
}

OtsState ots_step(const OtsParams& p, const OtsState& s, Volts v, Seconds dt) {
    if (!std::isfinite(v) || !std::isfinite(dt)) fail(ErrorCode::NonFinite, "non-finite OTS step input");
    require(dt > 0.0, "OTS step needs dt > 0");

    OtsState next = s;
    const bool want_on = s.phase == OtsPhase::Off && std::abs(v) >= p.v_th;
    const bool want_off = s.phase == OtsPhase::On && std::abs(ots_current(p, s, v)) < p.i_hold;
    if (!want_on && !want_off) {
        next.pending.reset();
        next.elapsed = 0.0;
        return next;
    }

    const OtsPending target = want_on ? OtsPending::SwitchingOn : OtsPending::SwitchingOff;
    if (next.pending != target) {
        next.pending = target;
        next.elapsed = 0.0;
    }
    next.elapsed += dt;
    const Seconds tau = want_on ? p.tau_on : p.tau_off;
    if (delay_reached(next.elapsed, tau)) {
        next.phase = want_on ? OtsPhase::On : OtsPhase::Off;
        next.pending.reset();
        next.elapsed = 0.0;
    }
    return next;
}

}  // namespace otsim
