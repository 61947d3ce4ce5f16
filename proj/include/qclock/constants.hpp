#pragma once

namespace qclock {

// All physical-unit conversions route through this table. Internal
// calculations use hbar = 1 with angular frequencies in rad/s and
// times in s; eV appears only at the boundary (bounds reporting).
namespace constants {

// CODATA: hbar in eV*s (exact to the digits given).
inline constexpr double hbar_ev_s = 6.582119569e-16;

// Exact SI electron-volt, J.
inline constexpr double ev_joule = 1.602176634e-19;

// hbar in J*s, derived so every conversion shares the same hbar.
inline constexpr double hbar_j_s = hbar_ev_s * ev_joule;

inline constexpr double pi = 3.14159265358979323846;

}  // namespace constants

}  // namespace qclock
