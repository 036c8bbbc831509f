#pragma once

#include <array>

namespace rmt {

// Two deformations of the Pearcey xi-contour. Both pass to the right of the
// eta-axis on the right branch and to the left of it on the left branch.
enum class PearceyContour
{
  ShiftedRays, // rays d + r e^{+-i pi/4} and their mirror images, d = 1
  Hyperbolic,  // xi = d (cosh u -+ i sinh u), d = 3/4
};

// Pearcey kernel as a double contour integral. Truncation is checked by
// repeating the sum on longer contours; std::runtime_error if the two
// disagree by more than 1e-6 max(1, |K|). Where the fixed contours would lose
// more than a few digits to cancellation (large |x|, |y| or negative s) the
// value comes from pearcey_kernel_saddle instead.
double pearcey_kernel(double x, double y, double s, PearceyContour contour = PearceyContour::ShiftedRays);

// The same kernel from single integrals p, q on contours through the saddle
// points, combined as in pearcey_kernel_pq (Taylor series in x - y near the
// diagonal).
double pearcey_kernel_saddle(double x, double y, double s);

// p, p', p'', p''' where p(x) = (1/2 pi i) \int_C e^{xi^4/4 - s xi^2/2 + xi x} dxi.
std::array<double, 4> pearcey_p(double x, double s);
// q, q', q'', q''' where q(y) = (1/2 pi i) \int_{-i inf}^{i inf} e^{-eta^4/4 + s eta^2/2 - eta y} deta.
std::array<double, 4> pearcey_q(double y, double s);

// Off-diagonal kernel from the single integrals:
//   (p q'' - p' q' + p'' q - s p q) / (x - y)
double pearcey_kernel_pq(double x, double y, double s);

} // namespace rmt
