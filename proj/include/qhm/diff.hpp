#pragma once

#include "qhm/fields.hpp"

namespace qhm {

// Order-8 centered finite difference in x.  Throws NumericalError when the
// input is not negligible near the window edges.
ModuleField diff_x(const ModuleField& f);
// Spectral derivative in y.  If `nyquist` is non-null it receives the
// relative magnitude of the (discarded) Nyquist mode.
ModuleField diff_y(const ModuleField& f, double* nyquist = nullptr);

// Slice-wise derivatives of covariant elements; x-neighbours outside the
// fundamental domain come from the covariance extension.
DField diff_x(const DField& f);
EField diff_x(const EField& f);
DField diff_y(const DField& f);
EField diff_y(const EField& f);

enum class Cell { Unit, E };

// Rectangle rule over [0,1)x[0,1) or [0,2mu)x[0,1) for samples given on that
// cell (row-major x then y).  Spectrally accurate for periodic integrands.
cplx integrate(const GridSpec& g, const std::vector<cplx>& samples, Cell cell);
// Convenience: integrate a function of (x, y) over the cell.
cplx integrate(const GridSpec& g, const std::function<cplx(double, double)>& f, Cell cell);

// Closed composite Boole rule on n+1 equispaced samples (n divisible by 4),
// for non-periodic integrands sampled including both endpoints.
double boole_weight(int k, int n);

}  // namespace qhm
