#pragma once

#include <vector>

namespace pulsedyn {

// Solves the constant-coefficient tridiagonal system
//   lo * x[i-1] + di * x[i] + up * x[i+1] = r[i]
// with the first/last rows overridden by (d0, u0) and (dn, ln) to express
// boundary conditions. Thomas algorithm; work vectors supplied by the caller.
void tridiag_solve(double lo, double di, double up, double d0, double u0, double dn, double ln,
                   const std::vector<double>& r, std::vector<double>& x, std::vector<double>& cp);

// Cyclic constant-coefficient variant (periodic boundary): corner entries
// equal lo (bottom-left) and up (top-right). Sherman-Morrison on top of two
// Thomas solves.
void cyclic_tridiag_solve(double lo, double di, double up, const std::vector<double>& r,
                          std::vector<double>& x, std::vector<double>& z,
                          std::vector<double>& cp, std::vector<double>& u);

} // namespace pulsedyn
