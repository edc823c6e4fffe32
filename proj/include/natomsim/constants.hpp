// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace natomsim::constants {

// CODATA 2018 values.
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double k_boltzmann = 1.380649e-23;   // J/K
inline constexpr double mu_bohr = 9.2740100783e-24;   // J/T
inline constexpr double epsilon0 = 8.8541878128e-12;  // F/m
inline constexpr double c_light = 2.99792458e8;       // m/s

// Cs-133 properties.
inline constexpr double cs_mass = 2.20694650e-25;        // kg
inline constexpr double cs_clock_hz = 9192631770.0;      // hyperfine clock frequency

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

} // namespace natomsim::constants
