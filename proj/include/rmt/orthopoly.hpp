#pragma once

#include "rmt/equilibrium.hpp"

#include <stdexcept>
#include <vector>

namespace rmt {

class Underflow : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Weight exp(-N V(x)), times |x|^{2 alpha} (or x^alpha on [0, inf) at a hard edge).
struct WeightSpec
{
  Potential potential;
  int       N          = 1;
  double    truncation = 0.0; // window [-L, L] or [0, L]; 0 selects it automatically

  double log_weight(double x) const;
  double lower() const { return potential.hard_edge ? 0.0 : -truncation; }
  double upper() const { return truncation; }
};

// Smallest L with w(+-L) (1 + L)^{2|alpha|} below 1e-30 of the weight's peak.
// recurrence_table widens it further when the polynomials need more room.
double auto_truncation(WeightSpec const &w);

// Monic recurrence x P_k = P_{k+1} + b_k P_k + a_k P_{k-1}, with
// gamma_sq[k] = \int P_k^2 w. a[0] is unused and kept at zero.
struct RecurrenceTable
{
  std::vector<double> a;            // size n_max + 1
  std::vector<double> b;            // size n_max + 1
  std::vector<double> gamma_sq;     // size n_max + 1
  std::vector<double> log_gamma_sq; // same, in log form
  int                 n_max = 0;
  int                 N     = 0;
  double              truncation = 0.0; // window actually used
};

// Discretized Stieltjes procedure. Resolves the truncation when w.truncation is 0.
RecurrenceTable recurrence_table(WeightSpec const &w, int n_max);

// phi_k(x) = P_k(x) sqrt(w(x)) / gamma_k for k = 0 .. n-1.
std::vector<double> weighted_polys(RecurrenceTable const &t, WeightSpec const &w, double x, int n);

// Christoffel-Darboux form of K_n(x, y).
double cd_kernel(RecurrenceTable const &t, WeightSpec const &w, int n, double x, double y);
// sum_{k<n} phi_k(x) phi_k(y), for cross-checks.
double cd_kernel_sum(RecurrenceTable const &t, WeightSpec const &w, int n, double x, double y);

// Centre x*, constant c and exponent e give c_n = (c n)^e. Left edges flip the
// sign of the offsets.
struct ScalingWindow
{
  double              center   = 0.0;
  double              c        = 1.0;
  double              exponent = 1.0; // 1 bulk/origin, 2/3 soft edge, 2 hard edge
  bool                left_edge = false;
  std::vector<double> u, v;

  double scale(int n) const;
};

// Constants tying the windows to the equilibrium measure.
double soft_edge_constant(EquilibriumMeasure const &mu, bool right_edge = true);
double hard_edge_constant(EquilibriumMeasure const &mu);

// Row-major grid (u.size() x v.size()) of c_n^{-1} K_n(x* + u/c_n, x* + v/c_n).
// std::out_of_range when a point leaves the truncation window.
std::vector<double> rescaled_kernel(RecurrenceTable const &t, WeightSpec const &w, int n, ScalingWindow const &window);

} // namespace rmt
