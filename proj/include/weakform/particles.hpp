#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "weakform/types.hpp"

namespace weakform {

// Deterministic counter-based random stream keyed by (seed, a, b). Streams
// with distinct keys are independent regardless of draw order elsewhere.
class CounterRng {
  public:
    explicit CounterRng(uint64_t seed, uint64_t a = 0, uint64_t b = 0);
    double uniform01();  // in (0, 1]
    double uniform(double lo, double hi);
    double normal();

  private:
    uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Unlabeled sequential ensembles: positions indexed (simulation m, time l,
// particle i, dimension k). Consumers must treat each (m, l) slice as a set;
// particle indices carry no identity across time.
struct ParticleEnsemble {
    int M = 0, L = 0, N = 0, d = 0;
    double dt = 0.0;
    double t0 = 0.0;
    std::vector<MatrixXd> slices;  // m * L + l -> N x d

    const MatrixXd& at(int m, int l) const { return slices[static_cast<size_t>(m) * L + l]; }
    MatrixXd& at(int m, int l) { return slices[static_cast<size_t>(m) * L + l]; }
};

// Initial-condition sampler: a fraction of the simulations uniform over a
// box, the rest a two-component Gaussian mixture with per-simulation means.
struct MixtureSpec {
    double weight_uniform = 0.5;
    double box_half_width = 2.0;
    double w1 = 0.6;  // first component weight (second is 1 - w1)
    Eigen::Matrix2d sigma1 = (Eigen::Matrix2d() << 0.2, 0.0, 0.0, 0.4).finished();
    Eigen::Matrix2d sigma2 = (Eigen::Matrix2d() << 1.0, 0.5, 0.5, 1.0).finished();
    double mu1_lo = 0.0, mu1_hi = 2.5;
    double mu2_lo = -2.5, mu2_hi = 0.0;
};

using GradField = std::function<VectorXd(const VectorXd&)>;

// Scalar potential with its gradient, for ensemble-loss evaluation.
struct PotentialFn {
    std::function<double(const VectorXd&)> value;
    GradField grad;
};

// Deterministic pairwise dynamics dX_i/dt = -[grad V(X_i) +
// (1/N) sum_j grad Phi(X_i - X_j)] integrated by classical RK4. The j = i
// term enters through the convention grad Phi(0) = 0. Slice l = 0 is the
// initial condition; L slices total.
ParticleEnsemble simulate_ips(const GradField& grad_phi, const GradField& grad_v,
                              const std::vector<MatrixXd>& init, double dt, int L,
                              double t0 = 0.0);

// M initial N x d position blocks; exactly floor(weight_uniform * M) of them
// uniform. The Gaussian mixture requires d = 2.
std::vector<MatrixXd> sample_initial(const MixtureSpec& spec, int M, int N, int d, uint64_t seed);

// Empirical self-test loss on unlabeled ensembles: trapezoid-in-time average
// of the squared empirical drift plus twice the empirical energy increment
// between the first and last slices, scaled by the spanned time. Phi is used
// through its even part. Uses only per-slice particle sets.
double ensemble_loss(const ParticleEnsemble& data, const PotentialFn& phi, const PotentialFn& v);

// Gaussian kernel density estimate of one slice on a bounding-box grid
// (padded by 6 bandwidths); integrates to 1 within 1e-6.
SampledField slice_density(const ParticleEnsemble& data, int m, int l, double bandwidth);

// Same estimate on a caller-supplied grid, for shared-grid density paths.
SampledField slice_density(const ParticleEnsemble& data, int m, int l, double bandwidth,
                           const Grid1D& gx, const std::optional<Grid1D>& gy);

}  // namespace weakform
