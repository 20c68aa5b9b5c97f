#pragma once

#include <functional>
#include <vector>

#include "weakform/basis.hpp"
#include "weakform/quadform.hpp"
#include "weakform/types.hpp"

namespace weakform {

// Function-valued parameters of the aggregation-diffusion operator
//   R[u] = -div( u grad( nu h'(u) + Phi*u + V ) ).
// h is carried through h''; Phi through the radial kernel phi = Phi' with
// grad Phi(x) = phi(|x|) x/|x|. phi_at_zero pins the integration constant
// Phi(0), which enters only the interaction energy.
struct ParameterTriple {
    std::function<double(double)> h_second;
    std::function<double(double)> phi_radial;
    double phi_at_zero = 0.0;
    std::function<double(double, double)> V;  // 1-D fields evaluate V(x, 0)
    double nu = 0.0;
};

struct EnergyReport {
    double energy_start = 0.0;
    double energy_end = 0.0;
    double dissipation_integral = 0.0;
    double conservation_residual = 0.0;  // energy_end - energy_start + dissipation_integral
};

// Strong form -div( nu h''(u) u grad u ) on a 1-D grid. The flux uses the
// field's stored derivative (error when absent); the outer divergence is a
// Savitzky-Golay pass over the flux.
SampledField apply_R_h(const SampledField& u, const std::function<double(double)>& h_second,
                       double nu = 1.0);

// Aggregation operator output f = -int_0^rmax phi(r) d/dx[u(x-r)u(x) - u(x+r)u(x)] dr
// on the grid of u. Radial integral over the snapped grid r_l = l*dx; the
// x-derivative uses the stored derivative of u, else Savitzky-Golay.
SampledField apply_R_aggregation(const SampledField& u,
                                 const std::function<double(double)>& phi_radial, double r_max);

// Same operator with analytic u and u', evaluated by adaptive Gauss-Kronrod
// quadrature in r at each grid point.
VectorXd apply_R_aggregation(const std::function<double(double)>& u,
                             const std::function<double(double)>& du,
                             const std::function<double(double)>& phi_radial, double r_max,
                             const Grid1D& grid, double tol = 1e-9);

// grad(Phi * u) on the grid of a 1-D field: int phi(r) [u(x-r) - u(x+r)] dr
// over the snapped radial grid.
VectorXd interaction_gradient(const SampledField& u,
                              const std::function<double(double)>& phi_radial);

// <R_phi[u], v_phi[u]> evaluated in the integrated-by-parts form
//   int u | grad( nu h'(u) + Phi*u + V ) |^2 dx,
// with negative sampled u clamped to zero inside the weight only.
double self_test_pairing(const SampledField& u, const ParameterTriple& params);

// Free energy nu int h(u) + 1/2 int int Phi(x-y) u(x) u(y) + int V u, with h
// reconstructed from h'' under h(0) = h'(0) = 0.
double energy(const SampledField& u, const ParameterTriple& params);

// Energy change along a path of slices at uniform dt versus the trapezoid
// integral of the dissipation pairing.
EnergyReport check_energy_conservation(const std::vector<SampledField>& path,
                                       const ParameterTriple& params, double dt);

// Weak-form elliptic assembly for -Laplace(a u) = f with a in the span of a
// spatial basis: A_km = sum_l int grad(e_k u_l).grad(e_m u_l),
// b_k = sum_l int f_l e_k u_l. Gradients by Savitzky-Golay.
QuadraticForm elliptic_loss_assembly(const std::vector<FieldPair>& pairs, const BasisSet& basis);

}  // namespace weakform
