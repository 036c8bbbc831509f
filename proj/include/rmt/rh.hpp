#pragma once

#include "rmt/equilibrium.hpp"

#include <Eigen/Core>

#include <complex>
#include <utility>

namespace rmt {

using Matrix2x2C = Eigen::Matrix2cd;

// Steepest-descent data for a one-cut regular measure, with N = n.
struct DescentContext
{
  EquilibriumMeasure measure;
  int                n           = 0;
  double             delta       = 0.0; // radius of the endpoint disks
  double             lens_height = 0.0; // lips pass through (a+b)/2 +- i lens_height (b-a)/2
};

// delta = 0 picks min(0.1, (b-a)/8). The lens height starts at 0.5 and is
// halved until Re phi < 0 at 64 points of the upper lip.
DescentContext make_descent_context(EquilibriumMeasure const &mu, int n, double delta = 0.0);

// Upper lip of the lens at parameter t in [0, 1].
std::complex<double> lens_lip(DescentContext const &ctx, double t);

enum class PhiVariant
{
  Right, // from b
  Left,  // from a
};

// Side used for boundary values when z lies on the real axis.
enum class Side
{
  Plus,
  Minus,
};

// \int log(z - x) dmu(x); std::domain_error within 1e-10 of (-inf, b].
std::complex<double> g_function(DescentContext const &ctx, std::complex<double> z);

// \int_{b or a}^z h(s) ((s-b)(s-a))^{1/2} ds along a straight path.
std::complex<double> phi(DescentContext const &ctx, std::complex<double> z, PhiVariant variant = PhiVariant::Right,
                         Side side = Side::Plus);

// Built from beta = ((z-b)/(z-a))^{1/4}; std::domain_error on [a, b].
Matrix2x2C outer_parametrix(DescentContext const &ctx, std::complex<double> z);

// Sectors of the Airy model problem: 0 (0, 2pi/3), 1 (2pi/3, pi),
// 2 (-pi, -2pi/3), 3 (-2pi/3, 0).
Matrix2x2C airy_model_sector(std::complex<double> z, int sector);
// Picks the sector from arg z; std::domain_error within 1e-10 of a ray.
Matrix2x2C airy_model(std::complex<double> z);
// A_+ on the real axis: sector 0 for x >= 0, sector 1 for x < 0.
Matrix2x2C airy_model_plus(double x);
// ||A_+ - A_- J|| at radius r on ray k: 0 (arg 0), 1 (2pi/3), 2 (-2pi/3), 3 (pi).
double airy_model_jump_residual(int ray, double r);
// || U^{-1} diag(z^{1/4}, z^{-1/4}) A(z) e^{(2/3) z^{3/2} sigma_3} - I || with
// U = [[1, i], [i, 1]]/sqrt 2; the positive axis uses A_+.
double airy_model_asymptotic_residual(std::complex<double> z);

// [(3/2) phi(z)]^{2/3}, real and positive for z > b.
std::complex<double> conformal_f(DescentContext const &ctx, std::complex<double> z);

Matrix2x2C prefactor_e(DescentContext const &ctx, std::complex<double> z);

enum class Endpoint
{
  Right,
  Left,
};

// E_n A(n^{2/3} f) e^{n phi sigma_3} in the disk around b; the disk around a is
// obtained by reflecting x -> a + b - x.
Matrix2x2C local_parametrix(DescentContext const &ctx, std::complex<double> z, Endpoint at = Endpoint::Right);

// sup over `points` points of the disk boundary of ||P M^{-1} - I||.
double matching_error(DescentContext const &ctx, Endpoint at = Endpoint::Right, int points = 32);

// max over entries of |(1/2 pi i) \oint E_n(z) dz| on |z - b| = radius.
double prefactor_residue(DescentContext const &ctx, double radius);

// || lower(phi_-) J_0 lower(phi_+) - J_T || at x in (a, b).
double t_jump_factorization_residual(DescentContext const &ctx, double x);

// sin(i n (phi_+(y) - phi_+(x))) / (pi (x - y)); x, y in (a + delta, b - delta).
double bulk_kernel_approx(DescentContext const &ctx, double x, double y);

// The Airy kernel assembled from A_+; x = y is evaluated at y + 1e-6 (1 + |x|).
double edge_kernel_from_A(double x, double y);

// Leading-order (a_inf, b_inf) from the expansion of M at infinity.
std::pair<double, double> asymptotic_recurrence(DescentContext const &ctx);

} // namespace rmt
