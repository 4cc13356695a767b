#pragma once

namespace commoneq {

// Absolute tolerance for spectral identities on quantities of magnitude <= 1.
inline constexpr double kTol = 1e-9;

// Threshold below which imaginary parts / departures from exact values are
// treated as floating-point residue.
inline constexpr double kRealTol = 1e-12;

}  // namespace commoneq
