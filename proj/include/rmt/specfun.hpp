#pragma once

#include <complex>
#include <stdexcept>

namespace rmt {

using cdouble = std::complex<double>;

/// A function value together with its first derivative.
template <typename Scalar> struct FunctionValuePair
{
  Scalar value{};
  Scalar derivative{};
};

using RealPair    = FunctionValuePair<double>;
using ComplexPair = FunctionValuePair<cdouble>;

// Airy function Ai and Ai' for complex argument, |z| <= 1e3.
// Throws std::range_error when the result is not representable.
ComplexPair airy(cdouble z);
RealPair    airy(double x);

// Derivatives Ai^(k)(x), k = 0..order, from the ODE y'' = x y.
// out must have room for order + 1 values.
void airy_derivatives(double x, int order, double *out);

// \int_x^\infty Ai(t) dt, for x >= -40.
double airy_tail(double x);

// Bessel function of the first kind J_alpha(x) and J_alpha'(x); alpha > -1, x >= 0.
// Throws std::domain_error for alpha <= -1 or x < 0.
RealPair bessel_j(double alpha, double x);

// \int_0^t sin(pi u) / (pi u) du
double sinc_integral(double t);

// sin(pi t)/(pi t) with the removable singularity filled in.
double sinc(double t);

} // namespace rmt
