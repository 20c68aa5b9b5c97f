#include "weakform/datasets.hpp"

#include <cmath>

#include "weakform/operators.hpp"

namespace weakform {

double h_experiment_f(const VectorXd& truth, int l, double x) {
    // f = -sum_k c_k d/dx[ k u^{k-1} u' ] for u = sin(a x), a = pi l, k = 2,3,4.
    const double a = M_PI * l;
    const double s = std::sin(a * x);
    const double c = std::cos(a * x);
    double acc = 0.0;
    for (int idx = 0; idx < truth.size(); ++idx) {
        const int k = idx + 2;
        acc += truth[idx] * k * a * a *
               ((k - 1) * std::pow(s, k - 2) * c * c - std::pow(s, k));
    }
    return -acc;
}

std::vector<FieldPair> gen_h_dataset(const HFitConfig& config) {
    if (config.N < 11) throw std::invalid_argument("gen_h_dataset: N below the filter window");
    if (config.sigma < 0.0) throw std::invalid_argument("gen_h_dataset: sigma must be >= 0");
    if (config.L < 1) throw std::invalid_argument("gen_h_dataset: L must be >= 1");
    if (config.truth.size() != config.basis_kmax - config.basis_kmin + 1)
        throw std::invalid_argument("gen_h_dataset: truth size does not match basis");

    const int N = config.N;
    const double noise_std = config.sigma / std::sqrt(double(N));
    const Grid1D grid(1.0 / N, 1.0 / N, N);

    std::vector<FieldPair> out;
    out.reserve(config.L);
    for (int l = 1; l <= config.L; ++l) {
        CounterRng rng_u(config.seed, 0x75, static_cast<uint64_t>(l));
        CounterRng rng_f(config.seed, 0x66, static_cast<uint64_t>(l));
        VectorXd uv(N), fv(N);
        for (int i = 0; i < N; ++i) {
            const double x = grid.point(i);
            uv[i] = std::sin(M_PI * l * x) + noise_std * rng_u.normal();
            fv[i] = h_experiment_f(config.truth, l, x) + noise_std * rng_f.normal();
        }
        out.push_back({SampledField(grid, uv), SampledField(grid, fv)});
    }
    return out;
}

double phi_truth_r2(double r) { return (r >= 0.0 && r <= 1.0) ? r * r : 0.0; }

std::vector<FieldPair> gen_phi_dataset(const PhiFitConfig& config) {
    if (!(config.dx > 0.0)) throw std::invalid_argument("gen_phi_dataset: dx must be positive");
    if (config.sigma < 0.0) throw std::invalid_argument("gen_phi_dataset: sigma must be >= 0");
    if (config.n_k < 1 || config.n_k > 3)
        throw std::invalid_argument("gen_phi_dataset: the (0,10) domain holds 1..3 bumps");

    const int n_x = static_cast<int>(std::llround(config.domain_length / config.dx)) - 1;
    const Grid1D grid(config.dx, config.dx, n_x);

    std::vector<FieldPair> out;
    out.reserve(config.n_k);
    for (int k = 1; k <= config.n_k; ++k) {
        const double c = 2.0 * k + 1.0;
        auto u_fn = [c](double x) {
            return std::abs(x - c) < 1.5 ? std::sin(M_PI * (x - c)) : 0.0;
        };
        auto du_fn = [c](double x) {
            return std::abs(x - c) < 1.5 ? M_PI * std::cos(M_PI * (x - c)) : 0.0;
        };
        // phi_truth vanishes beyond r = 1, so the radial integral stops there.
        VectorXd fv = apply_R_aggregation(u_fn, du_fn, phi_truth_r2,
                                          std::min(1.0, config.r_max), grid, 1e-10);
        CounterRng rng_u(config.seed, 0x75, static_cast<uint64_t>(k));
        CounterRng rng_f(config.seed, 0x66, static_cast<uint64_t>(k));
        VectorXd uv(n_x);
        for (int j = 0; j < n_x; ++j) {
            uv[j] = u_fn(grid.point(j)) + config.sigma * rng_u.normal();
            fv[j] += config.sigma * rng_f.normal();
        }
        out.push_back({SampledField(grid, uv), SampledField(grid, fv)});
    }
    return out;
}

BasisSet2 ensemble_phi_basis(const EnsembleFitConfig& config) {
    return symmetrize(tensor_poly_basis(config.phi_degree, 2.0 * config.basis_half_width,
                                        2.0 * config.basis_half_width, /*even_only=*/true));
}

BasisSet2 ensemble_v_basis(const EnsembleFitConfig& config) {
    return tensor_poly_basis(config.v_degree, config.basis_half_width, config.basis_half_width,
                             /*even_only=*/false);
}

PotentialFn potential_from_basis(const BasisSet2& basis, const VectorXd& coeffs) {
    if (coeffs.size() != basis.size())
        throw std::invalid_argument("potential_from_basis: coefficient count mismatch");
    PotentialFn out;
    out.value = [basis, coeffs](const VectorXd& x) {
        double acc = 0.0;
        for (int a = 0; a < coeffs.size(); ++a) acc += coeffs[a] * basis.fns[a].f(x[0], x[1]);
        return acc;
    };
    out.grad = [basis, coeffs](const VectorXd& x) {
        Eigen::Vector2d acc = Eigen::Vector2d::Zero();
        for (int a = 0; a < coeffs.size(); ++a) acc += coeffs[a] * basis.fns[a].grad(x[0], x[1]);
        return VectorXd(acc);
    };
    return out;
}

ParticleEnsemble gen_ensemble_dataset(const EnsembleFitConfig& config) {
    if (config.d != 2)
        throw std::invalid_argument("gen_ensemble_dataset: the joint experiment runs in d = 2");
    const BasisSet2 phi_basis = ensemble_phi_basis(config);
    const BasisSet2 v_basis = ensemble_v_basis(config);
    if (config.truth_phi.size() != phi_basis.size() || config.truth_v.size() != v_basis.size())
        throw std::invalid_argument("gen_ensemble_dataset: truth coefficients do not match bases");
    const PotentialFn phi = potential_from_basis(phi_basis, config.truth_phi);
    const PotentialFn v = potential_from_basis(v_basis, config.truth_v);
    const auto init = sample_initial(config.mixture, config.M, config.N, config.d, config.seed);
    return simulate_ips(phi.grad, v.grad, init, config.dt, config.L);
}

}  // namespace weakform
