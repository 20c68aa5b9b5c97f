#include "weakform/particles.hpp"

#include <cmath>

namespace weakform {

namespace {

uint64_t mix64(uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(uint64_t seed, uint64_t a, uint64_t b) {
    uint64_t h = mix64(seed);
    h = mix64(h ^ (a * 0xD6E8FEB86659FD93ULL + 1));
    h = mix64(h ^ (b * 0xCA5A826395121157ULL + 1));
    state_ = h;
}

double CounterRng::uniform01() {
    state_ += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return (static_cast<double>(z >> 11) + 1.0) * 0x1.0p-53;
}

double CounterRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

double CounterRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

namespace {

MatrixXd pairwise_drift(const GradField& grad_phi, const GradField& grad_v, const MatrixXd& P) {
    const int N = static_cast<int>(P.rows());
    const int d = static_cast<int>(P.cols());
    MatrixXd out(N, d);
    for (int i = 0; i < N; ++i) {
        VectorXd acc = VectorXd::Zero(d);
        for (int j = 0; j < N; ++j) {
            if (j == i) continue;  // grad Phi(0) = 0 convention
            acc += grad_phi((P.row(i) - P.row(j)).transpose());
        }
        acc /= N;
        acc += grad_v(P.row(i).transpose());
        out.row(i) = -acc.transpose();
    }
    return out;
}

}  // namespace

ParticleEnsemble simulate_ips(const GradField& grad_phi, const GradField& grad_v,
                              const std::vector<MatrixXd>& init, double dt, int L, double t0) {
    if (init.empty()) throw std::invalid_argument("simulate_ips: no initial conditions");
    if (!(dt > 0.0)) throw std::invalid_argument("simulate_ips: dt must be positive");
    if (L < 1) throw std::invalid_argument("simulate_ips: L must be >= 1");

    ParticleEnsemble ens;
    ens.M = static_cast<int>(init.size());
    ens.L = L;
    ens.N = static_cast<int>(init.front().rows());
    ens.d = static_cast<int>(init.front().cols());
    ens.dt = dt;
    ens.t0 = t0;
    ens.slices.resize(static_cast<size_t>(ens.M) * L);

    for (int m = 0; m < ens.M; ++m) {
        if (init[m].rows() != ens.N || init[m].cols() != ens.d)
            throw std::invalid_argument("simulate_ips: ragged initial conditions");
        MatrixXd P = init[m];
        for (int l = 0; l < L; ++l) {
            if (!P.allFinite())
                throw std::runtime_error("simulate_ips: non-finite position at simulation m=" +
                                         std::to_string(m) + ", slice l=" + std::to_string(l));
            ens.at(m, l) = P;
            if (l + 1 == L) break;
            const MatrixXd k1 = pairwise_drift(grad_phi, grad_v, P);
            const MatrixXd k2 = pairwise_drift(grad_phi, grad_v, P + 0.5 * dt * k1);
            const MatrixXd k3 = pairwise_drift(grad_phi, grad_v, P + 0.5 * dt * k2);
            const MatrixXd k4 = pairwise_drift(grad_phi, grad_v, P + dt * k3);
            P += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    }
    return ens;
}

std::vector<MatrixXd> sample_initial(const MixtureSpec& spec, int M, int N, int d,
                                     uint64_t seed) {
    if (M < 1 || N < 1 || d < 1) throw std::invalid_argument("sample_initial: empty shape");
    if (spec.weight_uniform < 0.0 || spec.weight_uniform > 1.0)
        throw std::invalid_argument("sample_initial: weight_uniform outside [0,1]");
    const int n_uniform = static_cast<int>(std::floor(spec.weight_uniform * M + 1e-12));
    if (n_uniform < M && d != 2)
        throw std::invalid_argument("sample_initial: Gaussian mixture requires d = 2");

    const Eigen::LLT<Eigen::Matrix2d> llt1(spec.sigma1), llt2(spec.sigma2);
    if (n_uniform < M && (llt1.info() != Eigen::Success || llt2.info() != Eigen::Success))
        throw std::invalid_argument("sample_initial: covariances must be positive definite");

    std::vector<MatrixXd> out(M, MatrixXd(N, d));
    for (int m = 0; m < M; ++m) {
        if (m < n_uniform) {
            for (int i = 0; i < N; ++i) {
                CounterRng rng(seed, static_cast<uint64_t>(m), static_cast<uint64_t>(i));
                for (int k = 0; k < d; ++k)
                    out[m](i, k) = rng.uniform(-spec.box_half_width, spec.box_half_width);
            }
        } else {
            CounterRng mrng(seed, static_cast<uint64_t>(m), 0xA11CEULL);
            Eigen::Vector2d mu1(mrng.uniform(spec.mu1_lo, spec.mu1_hi),
                                mrng.uniform(spec.mu1_lo, spec.mu1_hi));
            Eigen::Vector2d mu2(mrng.uniform(spec.mu2_lo, spec.mu2_hi),
                                mrng.uniform(spec.mu2_lo, spec.mu2_hi));
            const Eigen::Matrix2d c1 = llt1.matrixL();
            const Eigen::Matrix2d c2 = llt2.matrixL();
            for (int i = 0; i < N; ++i) {
                CounterRng rng(seed, static_cast<uint64_t>(m), static_cast<uint64_t>(i));
                const bool first = rng.uniform01() < spec.w1;
                Eigen::Vector2d z(rng.normal(), rng.normal());
                out[m].row(i) = (first ? (mu1 + c1 * z) : (mu2 + c2 * z)).transpose();
            }
        }
    }
    return out;
}

double ensemble_loss(const ParticleEnsemble& data, const PotentialFn& phi, const PotentialFn& v) {
    if (data.L < 2) throw std::invalid_argument("ensemble_loss: need at least 2 time slices");
    const int M = data.M, N = data.N, L = data.L;
    const double span = (L - 1) * data.dt;

    // Squared empirical drift, trapezoid in time.
    double quad = 0.0;
    for (int l = 0; l < L; ++l) {
        double slice = 0.0;
        for (int m = 0; m < M; ++m) {
            const MatrixXd& P = data.at(m, l);
            for (int i = 0; i < N; ++i) {
                VectorXd drift = VectorXd::Zero(data.d);
                for (int j = 0; j < N; ++j) {
                    if (j == i) continue;
                    drift += phi.grad((P.row(i) - P.row(j)).transpose());
                }
                drift /= N;
                drift += v.grad(P.row(i).transpose());
                slice += drift.squaredNorm();
            }
        }
        const double tau = (l == 0 || l == L - 1) ? 0.5 : 1.0;
        quad += tau * data.dt / span * slice / (double(M) * N);
    }

    // Empirical energy at a slice; pairwise sum reads Phi through its even part.
    auto energy_at = [&](int l) {
        double e = 0.0;
        for (int m = 0; m < M; ++m) {
            const MatrixXd& P = data.at(m, l);
            double inter = 0.0, kin = 0.0;
            for (int i = 0; i < N; ++i) {
                for (int j = 0; j < N; ++j)
                    inter += phi.value((P.row(i) - P.row(j)).transpose());
                kin += v.value(P.row(i).transpose());
            }
            e += 0.5 * inter / (double(N) * N) + kin / N;
        }
        return e / M;
    };

    const double boundary = 2.0 / span * (energy_at(L - 1) - energy_at(0));
    return quad + boundary;
}

namespace {

Grid1D axis_grid(double lo, double hi, double bandwidth, int cap) {
    const double pad = 6.0 * bandwidth;
    lo -= pad;
    hi += pad;
    const double target = bandwidth / 3.0;
    int n = static_cast<int>(std::ceil((hi - lo) / target)) + 1;
    n = std::clamp(n, 17, cap);
    return Grid1D(lo, (hi - lo) / (n - 1), n);
}

}  // namespace

SampledField slice_density(const ParticleEnsemble& data, int m, int l, double bandwidth) {
    if (!(bandwidth > 0.0)) throw std::invalid_argument("slice_density: bandwidth must be positive");
    const MatrixXd& P = data.at(m, l);
    if (data.d == 1) {
        const Grid1D gx = axis_grid(P.col(0).minCoeff(), P.col(0).maxCoeff(), bandwidth, 2001);
        return slice_density(data, m, l, bandwidth, gx, std::nullopt);
    }
    if (data.d == 2) {
        const Grid1D gx = axis_grid(P.col(0).minCoeff(), P.col(0).maxCoeff(), bandwidth, 401);
        const Grid1D gy = axis_grid(P.col(1).minCoeff(), P.col(1).maxCoeff(), bandwidth, 401);
        return slice_density(data, m, l, bandwidth, gx, gy);
    }
    throw std::invalid_argument("slice_density: supports d = 1 or 2");
}

SampledField slice_density(const ParticleEnsemble& data, int m, int l, double bandwidth,
                           const Grid1D& gx, const std::optional<Grid1D>& gy) {
    if (!(bandwidth > 0.0)) throw std::invalid_argument("slice_density: bandwidth must be positive");
    const MatrixXd& P = data.at(m, l);
    const int N = data.N;
    const double h2 = bandwidth * bandwidth;
    const double radius = 6.0 * bandwidth;

    if (!gy) {
        if (data.d != 1) throw std::invalid_argument("slice_density: grid dimension mismatch");
        VectorXd vals = VectorXd::Zero(gx.n);
        const double norm = 1.0 / (N * std::sqrt(2.0 * M_PI) * bandwidth);
        for (int i = 0; i < N; ++i) {
            const double x = P(i, 0);
            const int j0 = std::max(0, static_cast<int>((x - radius - gx.x0) / gx.dx));
            const int j1 = std::min(gx.n - 1, static_cast<int>((x + radius - gx.x0) / gx.dx) + 1);
            for (int j = j0; j <= j1; ++j) {
                const double dxp = gx.point(j) - x;
                vals[j] += norm * std::exp(-0.5 * dxp * dxp / h2);
            }
        }
        return SampledField(gx, vals);
    }

    if (data.d != 2) throw std::invalid_argument("slice_density: grid dimension mismatch");
    ArrayXXd vals = ArrayXXd::Zero(gx.n, gy->n);
    const double norm = 1.0 / (N * 2.0 * M_PI * h2);
    for (int i = 0; i < N; ++i) {
        const double x = P(i, 0), y = P(i, 1);
        const int j0 = std::max(0, static_cast<int>((x - radius - gx.x0) / gx.dx));
        const int j1 = std::min(gx.n - 1, static_cast<int>((x + radius - gx.x0) / gx.dx) + 1);
        const int k0 = std::max(0, static_cast<int>((y - radius - gy->x0) / gy->dx));
        const int k1 = std::min(gy->n - 1, static_cast<int>((y + radius - gy->x0) / gy->dx) + 1);
        for (int j = j0; j <= j1; ++j) {
            const double ddx = gx.point(j) - x;
            for (int k = k0; k <= k1; ++k) {
                const double ddy = gy->point(k) - y;
                vals(j, k) += norm * std::exp(-0.5 * (ddx * ddx + ddy * ddy) / h2);
            }
        }
    }
    return SampledField(gx, *gy, vals);
}

}  // namespace weakform
