#pragma once

#include "rmt/equilibrium.hpp"
#include "rmt/orthopoly.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace rmt {

enum class ScalingMode
{
  Bulk,   // sine kernel at an interior point
  Edge,   // Airy kernel at the right soft edge
  Hard,   // Bessel kernel at a hard edge at 0
  Origin, // Bessel origin kernel at a spectral singularity at 0
};

std::string_view           to_string(ScalingMode m);
std::optional<ScalingMode> parse_scaling_mode(std::string_view name);

// The potential each mode uses when none is given: x^2/2 except Hard (x on
// [0, inf)). Origin sets the singularity exponent to alpha.
Potential default_potential(ScalingMode mode, double alpha);

// Centre and constant of the window for the mode. Bulk uses x_star (defaulting
// to the middle of the support) with c = rho_V(x*).
ScalingWindow universality_window(EquilibriumMeasure const &mu, ScalingMode mode, std::vector<double> const &grid,
                                  std::optional<double> x_star = std::nullopt);

// Limit kernel of the mode at (u, v).
double universal_kernel(ScalingMode mode, double alpha, double u, double v);

struct UniversalityError
{
  double sup = 0.0;
  double l1  = 0.0; // integrated over the square grid x grid
};

// sup and L1 distance between the rescaled K_n (N = n) and the limit kernel on
// grid x grid. alpha is read from the potential for Hard and Origin.
UniversalityError universality_error(Potential const &V, ScalingMode mode, int n, std::vector<double> const &grid,
                                     std::optional<double> x_star = std::nullopt, int workers = 1);

// The same comparison with a prepared table, for callers sweeping several grids.
UniversalityError universality_error(RecurrenceTable const &t, WeightSpec const &w, EquilibriumMeasure const &mu,
                                     ScalingMode mode, int n, std::vector<double> const &grid,
                                     std::optional<double> x_star = std::nullopt, int workers = 1);

// count points from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, int count);

} // namespace rmt
