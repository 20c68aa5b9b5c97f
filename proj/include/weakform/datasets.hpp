#pragma once

#include "weakform/estimators.hpp"

namespace weakform {

// Synthetic data for the diffusion-rate experiment: u_l(x) = sin(pi l x) on
// x_i = i/N, i = 1..N, truth h'' = sum c_k e_k''; f computed in closed form.
// Independent N(0, sigma^2/N) noise on every u and f sample.
std::vector<FieldPair> gen_h_dataset(const HFitConfig& config);

// Closed-form operator output for the diffusion-rate truth at one point.
double h_experiment_f(const VectorXd& truth, int l, double x);

// Radial interaction kernel truth phi(r) = r^2 on [0,1].
double phi_truth_r2(double r);

// Synthetic data for the radial-kernel experiment: sine bumps
// u_k(x) = sin(pi (x - c_k)) 1{|x - c_k| < 1.5}, c_k = 2k + 1, and f_k from
// the aggregation operator with the r^2 truth by adaptive quadrature.
// Independent N(0, sigma^2) noise on every sample.
std::vector<FieldPair> gen_phi_dataset(const PhiFitConfig& config);

// Builders for the joint experiment's polynomial bases on the config box.
BasisSet2 ensemble_phi_basis(const EnsembleFitConfig& config);  // even, symmetrized
BasisSet2 ensemble_v_basis(const EnsembleFitConfig& config);

// Potential (value + gradient) from coefficients over a planar basis.
PotentialFn potential_from_basis(const BasisSet2& basis, const VectorXd& coeffs);

// Simulated unlabeled ensembles under the config's truth coefficients.
ParticleEnsemble gen_ensemble_dataset(const EnsembleFitConfig& config);

}  // namespace weakform
