// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#pragma once

#include <optional>

#include "otsim/units.hpp"

namespace otsim {

/// Behavioral Ovonic threshold switch parameters.
///
/// Off-state conduction is ohmic (g_off). On-state conduction is referenced to
/// the holding voltage, i = sign(v) * max(0, |v| - v_hold) / r_on, so a
/// capacitive load snaps back from v_th towards v_hold at turn-on.
struct OtsParams {
    Volts v_th = 3.0;
    Volts v_hold = 1.0;
    Ohms r_on = 100.0;
    Siemens g_off = 1e-8;
    Amperes i_hold = 3e-3;
    Seconds tau_on = 100e-9;
    Seconds tau_off = 100e-9;

    // Throws InvalidArgument naming the first violated invariant.
    void validate() const;
    bool operator==(const OtsParams&) const = default;
};

enum class OtsPhase { Off, On };
enum class OtsPending { SwitchingOn, SwitchingOff };

struct OtsState {
    OtsPhase phase = OtsPhase::Off;
    std::optional<OtsPending> pending;
    Seconds elapsed = 0.0;  // time accumulated toward the pending transition

    bool operator==(const OtsState&) const = default;
};

OtsParams default_params();

// Throws NonFinite on a non-finite voltage.
Amperes ots_current(const OtsParams& p, const OtsState& s, Volts v);

// Advances the switching state machine by dt using the converged device
// voltage of the step.
OtsState ots_step(const OtsParams& p, const OtsState& s, Volts v, Seconds dt);

}  // namespace otsim
