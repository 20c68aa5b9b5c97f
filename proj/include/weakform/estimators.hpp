#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "weakform/basis.hpp"
#include "weakform/identifiability.hpp"
#include "weakform/particles.hpp"
#include "weakform/quadform.hpp"

namespace weakform {

// How sampled u enters the u-weight of assembled quadratic terms. Densities
// are nonnegative in the continuum; sampled data may dip below zero.
enum class WeightRule { clamped, signed_u, absolute };

// Diffusion-rate experiment: u_l = sin(pi l x) on (0,1], noise N(0, sigma^2/N)
// on both u and f samples.
struct HFitConfig {
    int N = 400;
    double sigma = 0.0;
    int L = 3;
    uint64_t seed = 0;
    int basis_kmin = 2;
    int basis_kmax = 4;
    VectorXd truth = (Eigen::Vector3d() << 1.0, 1.2, 0.5).finished();
};

// Radial-kernel experiment: compactly supported sine bumps on (0,10) with
// dx = 0.01, noise N(0, sigma^2), piecewise-constant kernel on r_l = l dx.
struct PhiFitConfig {
    double dx = 0.01;
    double domain_length = 10.0;
    double r_max = 2.0;
    int n_k = 3;
    double sigma = 0.0;
    VectorXd lambda_grid;  // empty: scaled default grid built at fit time
    uint64_t seed = 0;
};

// Joint ensemble experiment defaults mirroring the reference scales
// (M = 10, N = 30, d = 2, dt = 0.01, L = 20).
struct EnsembleFitConfig {
    int M = 10;
    int N = 30;
    int L = 20;
    int d = 2;
    double dt = 0.01;
    uint64_t seed = 0;
    MixtureSpec mixture;
    int phi_degree = 4;
    int v_degree = 4;
    double basis_half_width = 3.0;  // scale box for the polynomial bases
    double lambda = 0.0;            // <= 0: default 1e-8 trace(A)/n
    VectorXd truth_phi;  // coefficients over the symmetrized even Phi basis
    VectorXd truth_v;    // coefficients over the V basis
};

struct HFitResult {
    EstimateReport report;
    QuadraticForm assembled;
    std::optional<double> rel_error_rho1;  // relative L^2_rho1 error of h-hat''
};

struct PhiFitResult {
    EstimateReport report;
    QuadraticForm assembled;
    ExplorationMeasure rho;                // radial exploration measure
    std::optional<double> rel_error_rho;   // relative L^2_rho error of phi-hat
};

struct JointFitResult {
    EstimateReport report;
    QuadraticForm assembled;
    int n_phi = 0;
    int n_v = 0;
    double loss_at_estimate = 0.0;
    std::optional<double> phi_grad_error_rho3;
    std::optional<double> phi_grad_error_rho2;
    std::optional<double> v_grad_error_rho2;
};

// Weak-form normal equations for the diffusion rate:
//   A_km = (1/NL) sum u |grad u|^2 e_k''(u) e_m''(u),
//   b_k  = (1/NL) sum f e_k'(u),
// derivatives by Savitzky-Golay (window 11, degree 3). Reports the relative
// L^2_rho1 error of the reconstructed h'' when a truth is supplied.
HFitResult fit_h_weak(const std::vector<FieldPair>& data, const BasisSet& basis,
                      const std::function<double(double)>& truth_h2 = {},
                      WeightRule weight = WeightRule::clamped);

// Strong-form comparator: regresses f on -div[u e_k''(u) grad u] with the
// divergence taken by a second Savitzky-Golay pass.
HFitResult fit_h_strong(const std::vector<FieldPair>& data, const BasisSet& basis,
                        const std::function<double(double)>& truth_h2 = {});

// Weak-form radial-kernel estimator: A = g^T g dx dr^2 with
// g[(k,j),l] = sqrt|u_k(x_j)| delta u_k(x_j, r_l); the linear side pairs the
// cumulative integral of f against the same |u|-weighted drift, i.e.
// b_l = -dr dx sum_kj sign(u_k(x_j)) F_k(x_j) delta u_k(x_j, r_l). Solved by
// Tikhonov regularization with lambda from the L-curve.
PhiFitResult fit_phi_radial(const std::vector<FieldPair>& data, const PhiFitConfig& config,
                            const std::function<double(double)>& truth_phi = {});

// Strong-form comparator: least squares of f on the aggregation outputs of
// the piecewise-constant basis elements, derivatives by Savitzky-Golay.
PhiFitResult fit_phi_strong(const std::vector<FieldPair>& data, const PhiFitConfig& config,
                            const std::function<double(double)>& truth_phi = {});

// Kinetic-potential solve: -d/dx( rho2 dV/dx ) = sum_l f_l on the subinterval
// where rho2 exceeds 1e-8 of its maximum, zero-Neumann closure at the support
// boundary, and the gauge int V rho2 dx = 0.
SampledField fit_V(const std::vector<FieldPair>& data);

// Joint (Phi, V) estimation from unlabeled ensembles with a linear
// parametrization: quadratic term from the trapezoid-in-time averaged squared
// empirical drift, linear term from the empirical energy increment between
// the first and last slices. Small Tikhonov shift by default. Gradient errors
// against supplied truths are Monte-Carlo L^2 norms over the data's
// exploration measures.
JointFitResult fit_joint_ensemble(const ParticleEnsemble& data, const BasisSet2& phi_basis,
                                  const BasisSet2& v_basis, double lambda = 0.0,
                                  const GradField& truth_grad_phi = {},
                                  const GradField& truth_grad_v = {});

struct DifferentiableLoss {
    std::function<double(const VectorXd&)> value;
    std::function<VectorXd(const VectorXd&)> gradient;  // optional: central FD when absent
};

struct GradDescentResult {
    VectorXd theta;
    std::vector<double> trace;  // monotone nonincreasing loss values
    bool converged = false;
};

// Fixed-step gradient descent with backtracking halving. Stops when the
// relative loss decrease falls below 1e-10 or after 1e4 steps. A supplied
// gradient is checked against central finite differences at theta0.
GradDescentResult grad_descent_refine(const DifferentiableLoss& loss, const VectorXd& theta0,
                                      double step0 = 1.0);

}  // namespace weakform
