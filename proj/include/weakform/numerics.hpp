#pragma once

#include <functional>

#include "weakform/types.hpp"

namespace weakform {

// Left-rule Riemann sum of a sampled field: sum(values) * cell measure.
double riemann_sum(const SampledField& field);

// Per-point derivative of the local least-squares polynomial fit of the given
// degree over an odd-sized moving window. Boundary points are handled with
// one-sided windows of the same width anchored at the edge.
VectorXd savitzky_golay_derivative(const Eigen::Ref<const VectorXd>& values, int window,
                                   int degree, double dx);

// Savitzky-Golay derivative along each axis of a field. 1-D fields populate
// deriv_x only.
void sg_differentiate(SampledField& field, int window = 11, int degree = 3);

// Adaptive Gauss-Kronrod (15,7) quadrature on [a,b] with absolute tolerance.
// Throws QuadratureError (carrying the best estimate) if the subdivision
// depth exceeds 50 anywhere.
double adaptive_quadrature(const std::function<double(double)>& f, double a, double b,
                           double tol);

// delta-u field: u(x - r) - u(x + r) on the grid of u, with u treated as zero
// outside the grid. The shift r is snapped to the nearest grid multiple.
SampledField radial_convolution(const SampledField& u, double r);

}  // namespace weakform
