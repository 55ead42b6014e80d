#pragma once

#include <array>
#include <complex>
#include <vector>

namespace pulsedyn {

// Roots of c3 x^3 + c2 x^2 + c1 x + c0 = 0 with real coefficients, c3 != 0.
// Closed form (trigonometric for the casus irreducibilis, Cardano otherwise),
// real roots polished by one Newton step. Real roots come first, ascending;
// a conjugate pair (if any) fills the remaining slots.
std::array<std::complex<double>, 3> solve_cubic(double c3, double c2, double c1, double c0);

// Real roots only, ascending. Roots with |Im| > imag_tol * scale are dropped.
std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0,
                                     double imag_tol = 1e-9);

} // namespace pulsedyn
