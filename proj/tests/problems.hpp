#pragma once

#include <numbers>

#include "coldplasma/characteristics.hpp"

namespace coldplasma::testing {

inline constexpr double kPi = std::numbers::pi;

/// Equal densities.
inline RiemannProblem example1() { return RiemannProblem::make({1.0, 1.0, 0.0, 0.0}, {1.0, 0.0, -1.0, 0.0}); }

/// Incommensurate periods.
inline RiemannProblem example2() { return RiemannProblem::make({1.0, 1.0, 1.0, 0.0}, {3.0, -1.0, -1.0, 0.0}); }

/// Commensurate periods, r = 1/2.
inline RiemannProblem example3() { return RiemannProblem::make({1.0, 1.0, 1.0, 0.0}, {4.0, 0.0, -1.0, 0.0}); }

// Reference intersection and switching instants for example 3, 9-10 digits.
inline constexpr double kEx3Tstar = 1.035895953;
// Root of x- = x+ to double precision.
inline constexpr double kEx3TstarExact = 1.0358959519612749;
inline constexpr double kEx3Switch[3] = {2.176190164, 3.920405792, 5.916224372};

}  // namespace coldplasma::testing
