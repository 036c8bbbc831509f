#pragma once

#include "rmt/polynomial.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace rmt {

struct Potential
{
  std::vector<double> coefficients; // ascending degree
  bool                hard_edge         = false; // support restricted to [0, inf)
  double              singularity_alpha = 0.0;   // exponent alpha of |x|^{2 alpha} (or x^alpha at a hard edge)

  int    degree() const { return poly::degree(coefficients); }
  double operator()(double x) const { return poly::evaluate(coefficients, x); }
  double derivative(double x) const;

  // Throws std::invalid_argument when the growth condition fails.
  void validate() const;
};

struct EquilibriumMeasure
{
  Potential           potential;
  double              a = 0.0, b = 0.0; // support [a, b]
  std::vector<double> h;                // density factor, ascending degree
  std::vector<double> moments;          // m_0 .. m_K
  double              ell = 0.0;        // Lagrange constant
  int                 iterations = 0;
};

class MultiCutError : public std::runtime_error
{
public:
  MultiCutError(int intervals, std::string const &what) : std::runtime_error(what), intervals_(intervals) {}
  int intervals() const { return intervals_; }

private:
  int intervals_;
};

class NonConvergence : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// q_V as a polynomial for the given moments. At a hard edge this returns
// x q_V(x), which is the polynomial the pole term allows.
poly::Poly qv_polynomial(Potential const &V, std::vector<double> const &moments);

EquilibriumMeasure solve_equilibrium(Potential const &V);

// q_V(x). std::domain_error at x = 0 for a hard edge.
double qv(Potential const &V, EquilibriumMeasure const &mu, double x);

// (1/pi) sqrt(max(-q_V(x), 0)), zero off the support.
double density(EquilibriumMeasure const &mu, double x);
// (1/pi) h(x) sqrt((b-x)(x-a)), or (1/pi) h(x) sqrt((b-x)/x) at a hard edge.
double density_h(EquilibriumMeasure const &mu, double x);

// 2 \int log(1/|x-y|) dmu(y) + V(x) - ell
double effective_potential(EquilibriumMeasure const &mu, Potential const &V, double x);

enum class SingularType
{
  InteriorSingular,
  SingularEdge,
  ExteriorSingular,
};

struct SingularPoint
{
  double       location;
  SingularType type;
  int          k;
};

char const *to_string(SingularType t);

// Empty for regular potentials.
std::vector<SingularPoint> classify(EquilibriumMeasure const &mu, Potential const &V);

struct DiscreteMeasure
{
  std::vector<double> nodes;
  std::vector<double> weights; // sum to 1
  double              spacing = 0.0;
  double              energy  = 0.0;
  std::vector<double> energy_history; // accepted iterates
  int                 iterations = 0;

  double density_at(std::size_t i) const { return weights[i] / spacing; }
};

// Minimize the discretized weighted energy over probability vectors on a
// uniform grid of [lo, hi].
DiscreteMeasure grid_energy_minimize(Potential const &V, int grid_size, double lo, double hi);

} // namespace rmt
