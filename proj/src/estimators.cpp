#include "weakform/estimators.hpp"

#include <cmath>

#include "weakform/numerics.hpp"
#include "weakform/operators.hpp"

namespace weakform {

namespace {

constexpr int kSgWindow = 11;
constexpr int kSgDegree = 3;

void require_h_data(const std::vector<FieldPair>& data) {
    if (data.empty()) throw std::invalid_argument("fit_h: no data");
    data.front().u.require_1d("fit_h");
    for (const auto& p : data)
        if (!p.u.same_grid(data.front().u) || !p.f.same_grid(p.u))
            throw std::invalid_argument("fit_h: fields on different grids");
}

double apply_weight(double u, WeightRule rule) {
    switch (rule) {
        case WeightRule::clamped: return std::max(u, 0.0);
        case WeightRule::signed_u: return u;
        case WeightRule::absolute: return std::abs(u);
    }
    return u;
}

double rel_error_vs_rho1(const std::vector<FieldPair>& data, const BasisSet& basis,
                         const VectorXd& coeffs, const std::function<double(double)>& truth_h2) {
    std::vector<SampledField> us;
    us.reserve(data.size());
    for (const auto& p : data) us.push_back(p.u);
    const ExplorationMeasure r1 = rho1(us);
    double num = 0.0, den = 0.0;
    for (int bin = 0; bin < r1.grid.n; ++bin) {
        const double s = r1.grid.point(bin);
        const double mass = r1.density[bin] * r1.grid.dx;
        double hhat = 0.0;
        for (int k = 0; k < basis.size(); ++k) hhat += coeffs[k] * basis.fns[k].d2(s);
        const double ht = truth_h2(s);
        num += (hhat - ht) * (hhat - ht) * mass;
        den += ht * ht * mass;
    }
    return std::sqrt(num / std::max(den, 1e-300));
}

}  // namespace

HFitResult fit_h_weak(const std::vector<FieldPair>& data, const BasisSet& basis,
                      const std::function<double(double)>& truth_h2, WeightRule weight) {
    require_h_data(data);
    const int nb = basis.size();
    const Grid1D& g = data.front().u.gx;
    const int N = g.n;
    const double scale = 1.0 / (double(N) * data.size());

    MatrixXd A = MatrixXd::Zero(nb, nb);
    VectorXd b = VectorXd::Zero(nb);
    for (const auto& pair : data) {
        const VectorXd uv = pair.u.flat();
        const VectorXd fv = pair.f.flat();
        const VectorXd du = savitzky_golay_derivative(uv, kSgWindow, kSgDegree, g.dx);
        MatrixXd E2(N, nb), E1(N, nb);
        for (int k = 0; k < nb; ++k)
            for (int i = 0; i < N; ++i) {
                E2(i, k) = basis.fns[k].d2(uv[i]);
                E1(i, k) = basis.fns[k].d1(uv[i]);
            }
        VectorXd w(N);
        for (int i = 0; i < N; ++i) w[i] = apply_weight(uv[i], weight) * du[i] * du[i];
        A += E2.transpose() * w.asDiagonal() * E2 * scale;
        b += E1.transpose() * fv * scale;
    }

    HFitResult out;
    out.assembled = QuadraticForm(std::move(A), std::move(b), 0.0);
    const VectorXd coeffs = minimize(out.assembled);
    out.report = make_report(out.assembled, coeffs);
    if (truth_h2) out.rel_error_rho1 = rel_error_vs_rho1(data, basis, coeffs, truth_h2);
    return out;
}

HFitResult fit_h_strong(const std::vector<FieldPair>& data, const BasisSet& basis,
                        const std::function<double(double)>& truth_h2) {
    require_h_data(data);
    const int nb = basis.size();
    const Grid1D& g = data.front().u.gx;
    const int N = g.n;
    const double scale = 1.0 / (double(N) * data.size());

    MatrixXd A = MatrixXd::Zero(nb, nb);
    VectorXd b = VectorXd::Zero(nb);
    for (const auto& pair : data) {
        const VectorXd uv = pair.u.flat();
        const VectorXd fv = pair.f.flat();
        const VectorXd du = savitzky_golay_derivative(uv, kSgWindow, kSgDegree, g.dx);
        MatrixXd R(N, nb);
        for (int k = 0; k < nb; ++k) {
            VectorXd flux(N);
            for (int i = 0; i < N; ++i) flux[i] = uv[i] * basis.fns[k].d2(uv[i]) * du[i];
            R.col(k) = -savitzky_golay_derivative(flux, kSgWindow, kSgDegree, g.dx);
        }
        A += R.transpose() * R * scale;
        b += R.transpose() * fv * scale;
    }

    HFitResult out;
    out.assembled = QuadraticForm(std::move(A), std::move(b), 0.0);
    const VectorXd coeffs = minimize(out.assembled);
    out.report = make_report(out.assembled, coeffs);
    if (truth_h2) out.rel_error_rho1 = rel_error_vs_rho1(data, basis, coeffs, truth_h2);
    return out;
}

namespace {

void require_phi_data(const std::vector<FieldPair>& data, const PhiFitConfig& config) {
    if (data.empty()) throw std::invalid_argument("fit_phi: no data");
    data.front().u.require_1d("fit_phi");
    for (const auto& p : data)
        if (!p.u.same_grid(data.front().u) || !p.f.same_grid(p.u))
            throw std::invalid_argument("fit_phi: fields on different grids");
    if (std::abs(data.front().u.gx.dx - config.dx) > 1e-12)
        throw std::invalid_argument("fit_phi: grid spacing does not match config");
}

// delta u(x_j, r_l) columns for r_l = l dx, l = 1..n_r.
MatrixXd delta_columns(const VectorXd& v, int n_r) {
    const int n = static_cast<int>(v.size());
    MatrixXd D = MatrixXd::Zero(n, n_r);
    for (int l = 1; l <= n_r; ++l)
        for (int j = 0; j < n; ++j) {
            const double um = (j - l >= 0) ? v[j - l] : 0.0;
            const double up = (j + l < n) ? v[j + l] : 0.0;
            D(j, l - 1) = um - up;
        }
    return D;
}

VectorXd default_lambda_grid(const QuadraticForm& q) {
    const double lead = std::max(spectrum(q)[0], 1e-300);
    const int m = 27;
    VectorXd grid(m);
    for (int i = 0; i < m; ++i)
        grid[i] = lead * std::pow(10.0, -14.0 + 13.0 * i / (m - 1.0));
    return grid;
}

VectorXd solve_with_lcurve(const QuadraticForm& q, const VectorXd& config_grid, double& lambda) {
    const VectorXd grid = config_grid.size() ? config_grid : default_lambda_grid(q);
    RegularizationSpec spec;
    spec.kind = RegularizationKind::tikhonov_identity;
    spec.selection = LambdaSelection::l_curve;
    spec.lambda_grid = grid;
    const LcurveSelection sel = select_lambda_lcurve(q, spec);
    lambda = sel.lambda;
    return minimize_tikhonov(q, sel.lambda);
}

double rel_error_vs_rho(const ExplorationMeasure& rho, const VectorXd& coeffs,
                        const std::function<double(double)>& truth_phi) {
    double num = 0.0, den = 0.0;
    for (int l = 0; l < rho.grid.n; ++l) {
        const double r = rho.grid.point(l);
        const double t = truth_phi(r);
        num += (coeffs[l] - t) * (coeffs[l] - t) * rho.density[l];
        den += t * t * rho.density[l];
    }
    return std::sqrt(num / std::max(den, 1e-300));
}

}  // namespace

PhiFitResult fit_phi_radial(const std::vector<FieldPair>& data, const PhiFitConfig& config,
                            const std::function<double(double)>& truth_phi) {
    require_phi_data(data, config);
    const Grid1D& g = data.front().u.gx;
    const double dx = g.dx;
    const double dr = dx;
    const int n_r = static_cast<int>(std::llround(config.r_max / dx));
    if (n_r < 1 || n_r >= g.n) throw std::invalid_argument("fit_phi_radial: r_max out of range");

    MatrixXd A = MatrixXd::Zero(n_r, n_r);
    VectorXd b = VectorXd::Zero(n_r);
    for (const auto& pair : data) {
        const VectorXd uv = pair.u.flat();
        const VectorXd fv = pair.f.flat();
        MatrixXd D = delta_columns(uv, n_r);
        // A = g^T g dx dr^2 with g rows sqrt|u| delta u.
        VectorXd au = uv.array().abs().matrix();
        A += D.transpose() * au.asDiagonal() * D * (dx * dr * dr);
        // F(x_j) = dx sum_{i<=j} f(x_i); pair against the |u|-weighted drift.
        VectorXd F(g.n);
        double run = 0.0;
        for (int j = 0; j < g.n; ++j) {
            run += fv[j] * dx;
            F[j] = run;
        }
        VectorXd sF(g.n);
        for (int j = 0; j < g.n; ++j) {
            const double s = uv[j] > 0.0 ? 1.0 : (uv[j] < 0.0 ? -1.0 : 0.0);
            sF[j] = s * F[j];
        }
        b -= D.transpose() * sF * (dr * dx);
    }

    PhiFitResult out;
    out.assembled = QuadraticForm(std::move(A), std::move(b), 0.0);
    std::vector<SampledField> us;
    for (const auto& p : data) us.push_back(p.u);
    out.rho = radial_exploration(us, n_r);

    double lambda = 0.0;
    const VectorXd coeffs = solve_with_lcurve(out.assembled, config.lambda_grid, lambda);
    out.report = make_report(out.assembled, coeffs, lambda);
    if (truth_phi) out.rel_error_rho = rel_error_vs_rho(out.rho, coeffs, truth_phi);
    return out;
}

PhiFitResult fit_phi_strong(const std::vector<FieldPair>& data, const PhiFitConfig& config,
                            const std::function<double(double)>& truth_phi) {
    require_phi_data(data, config);
    const Grid1D& g = data.front().u.gx;
    const double dx = g.dx;
    const double dr = dx;
    const int n_r = static_cast<int>(std::llround(config.r_max / dx));
    if (n_r < 1 || n_r >= g.n) throw std::invalid_argument("fit_phi_strong: r_max out of range");

    MatrixXd A = MatrixXd::Zero(n_r, n_r);
    VectorXd b = VectorXd::Zero(n_r);
    for (const auto& pair : data) {
        const VectorXd uv = pair.u.flat();
        const VectorXd fv = pair.f.flat();
        const VectorXd du = savitzky_golay_derivative(uv, kSgWindow, kSgDegree, dx);
        const MatrixXd D = delta_columns(uv, n_r);
        const MatrixXd Dd = delta_columns(du, n_r);
        // Aggregation output of the indicator on [r_l, r_l + dr):
        // -dr * d/dx[ u(x - r_l) u(x) - u(x + r_l) u(x) ].
        MatrixXd feat(g.n, n_r);
        for (int l = 0; l < n_r; ++l)
            for (int j = 0; j < g.n; ++j)
                feat(j, l) = -dr * (Dd(j, l) * uv[j] + D(j, l) * du[j]);
        A += feat.transpose() * feat * dx;
        b += feat.transpose() * fv * dx;
    }

    PhiFitResult out;
    out.assembled = QuadraticForm(std::move(A), std::move(b), 0.0);
    std::vector<SampledField> us;
    for (const auto& p : data) us.push_back(p.u);
    out.rho = radial_exploration(us, n_r);

    double lambda = 0.0;
    const VectorXd coeffs = solve_with_lcurve(out.assembled, config.lambda_grid, lambda);
    out.report = make_report(out.assembled, coeffs, lambda);
    if (truth_phi) out.rel_error_rho = rel_error_vs_rho(out.rho, coeffs, truth_phi);
    return out;
}

SampledField fit_V(const std::vector<FieldPair>& data) {
    if (data.empty()) throw std::invalid_argument("fit_V: no data");
    data.front().u.require_1d("fit_V");
    for (const auto& p : data)
        if (!p.u.same_grid(data.front().u) || !p.f.same_grid(p.u))
            throw std::invalid_argument("fit_V: fields on different grids");

    const Grid1D& g = data.front().u.gx;
    const double dx = g.dx;
    VectorXd rho = VectorXd::Zero(g.n), rhs = VectorXd::Zero(g.n);
    for (const auto& p : data) {
        rho += p.u.flat();
        rhs += p.f.flat();
    }
    rho = rho.cwiseMax(0.0);

    const double floor = 1e-8 * rho.maxCoeff();
    int i0 = 0, i1 = g.n - 1;
    while (i0 < g.n && rho[i0] <= floor) ++i0;
    while (i1 >= 0 && rho[i1] <= floor) --i1;
    const int m = i1 - i0 + 1;
    if (m < 5) throw std::invalid_argument("fit_V: rho2 support shorter than 5 grid points");

    // -d/dx( rho dV/dx ) = rhs with zero-Neumann closure; the bordered row
    // enforces the gauge int V rho dx = 0 and absorbs any incompatibility.
    MatrixXd K = MatrixXd::Zero(m + 1, m + 1);
    VectorXd r = VectorXd::Zero(m + 1);
    for (int i = 0; i < m; ++i) {
        const int gi = i0 + i;
        const double rl = i > 0 ? 0.5 * (rho[gi] + rho[gi - 1]) : 0.0;
        const double rr = i + 1 < m ? 0.5 * (rho[gi] + rho[gi + 1]) : 0.0;
        K(i, i) = (rl + rr) / (dx * dx);
        if (i > 0) K(i, i - 1) = -rl / (dx * dx);
        if (i + 1 < m) K(i, i + 1) = -rr / (dx * dx);
        K(i, m) = K(m, i) = rho[gi] * dx;
        r[i] = rhs[gi];
    }
    const VectorXd sol = K.partialPivLu().solve(r);
    return SampledField(Grid1D(g.point(i0), dx, m), sol.head(m));
}

JointFitResult fit_joint_ensemble(const ParticleEnsemble& data, const BasisSet2& phi_basis,
                                  const BasisSet2& v_basis, double lambda,
                                  const GradField& truth_grad_phi, const GradField& truth_grad_v) {
    if (data.L < 2) throw std::invalid_argument("fit_joint_ensemble: need at least 2 time slices");
    if (data.d != 2) throw std::invalid_argument("fit_joint_ensemble: requires d = 2 data");
    const int np = phi_basis.size(), nv = v_basis.size();
    const int nb = np + nv;
    const int M = data.M, N = data.N, L = data.L;
    const double span = (L - 1) * data.dt;

    MatrixXd A = MatrixXd::Zero(nb, nb);
    VectorXd b = VectorXd::Zero(nb);

    MatrixXd Dx(N, nb), Dy(N, nb);
    for (int l = 0; l < L; ++l) {
        const double tau = ((l == 0 || l == L - 1) ? 0.5 : 1.0) * data.dt / span;
        for (int m = 0; m < M; ++m) {
            const MatrixXd& P = data.at(m, l);
            Dx.setZero();
            Dy.setZero();
            for (int i = 0; i < N; ++i) {
                for (int j = 0; j < N; ++j) {
                    if (j == i) continue;
                    const double zx = P(i, 0) - P(j, 0);
                    const double zy = P(i, 1) - P(j, 1);
                    for (int a = 0; a < np; ++a) {
                        const Eigen::Vector2d grad = phi_basis.fns[a].grad(zx, zy);
                        Dx(i, a) += grad.x();
                        Dy(i, a) += grad.y();
                    }
                }
                for (int a = 0; a < np; ++a) {
                    Dx(i, a) /= N;
                    Dy(i, a) /= N;
                }
                for (int a = 0; a < nv; ++a) {
                    const Eigen::Vector2d grad = v_basis.fns[a].grad(P(i, 0), P(i, 1));
                    Dx(i, np + a) = grad.x();
                    Dy(i, np + a) = grad.y();
                }
            }
            A += (Dx.transpose() * Dx + Dy.transpose() * Dy) * (tau / (double(M) * N));
        }
    }

    // Boundary term: empirical energy increment per basis element. The
    // pairwise double sum reads each Phi element through its even part.
    auto energy_elements = [&](int l) {
        VectorXd e = VectorXd::Zero(nb);
        for (int m = 0; m < M; ++m) {
            const MatrixXd& P = data.at(m, l);
            for (int i = 0; i < N; ++i) {
                for (int j = 0; j < N; ++j) {
                    const double zx = P(i, 0) - P(j, 0);
                    const double zy = P(i, 1) - P(j, 1);
                    for (int a = 0; a < np; ++a)
                        e[a] += 0.5 * phi_basis.fns[a].f(zx, zy) / (double(N) * N);
                }
                for (int a = 0; a < nv; ++a)
                    e[np + a] += v_basis.fns[a].f(P(i, 0), P(i, 1)) / N;
            }
        }
        return VectorXd(e / M);
    };
    b = -(energy_elements(L - 1) - energy_elements(0)) / span;

    JointFitResult out;
    out.n_phi = np;
    out.n_v = nv;
    out.assembled = QuadraticForm(std::move(A), std::move(b), 0.0);
    const double lam =
        lambda > 0.0 ? lambda : 1e-8 * out.assembled.A.trace() / std::max(nb, 1);
    const VectorXd coeffs = minimize_tikhonov(out.assembled, lam);
    out.report = make_report(out.assembled, coeffs, lam);
    out.loss_at_estimate = evaluate(out.assembled, coeffs);

    if (truth_grad_phi && truth_grad_v) {
        auto grad_phi_hat = [&](double zx, double zy) {
            Eigen::Vector2d acc = Eigen::Vector2d::Zero();
            for (int a = 0; a < np; ++a) acc += coeffs[a] * phi_basis.fns[a].grad(zx, zy);
            return acc;
        };
        auto grad_v_hat = [&](double x, double y) {
            Eigen::Vector2d acc = Eigen::Vector2d::Zero();
            for (int a = 0; a < nv; ++a) acc += coeffs[np + a] * v_basis.fns[a].grad(x, y);
            return acc;
        };
        double e3 = 0.0, e2p = 0.0, e2v = 0.0;
        long pairs = 0, points = 0;
        for (int l = 0; l < L; ++l)
            for (int m = 0; m < M; ++m) {
                const MatrixXd& P = data.at(m, l);
                for (int i = 0; i < N; ++i) {
                    VectorXd x = P.row(i).transpose();
                    e2p += (grad_phi_hat(x[0], x[1]).eval() -
                            Eigen::Vector2d(truth_grad_phi(x)))
                               .squaredNorm();
                    e2v += (grad_v_hat(x[0], x[1]).eval() - Eigen::Vector2d(truth_grad_v(x)))
                               .squaredNorm();
                    ++points;
                    for (int j = 0; j < N; ++j) {
                        VectorXd z = (P.row(i) - P.row(j)).transpose();
                        e3 += (grad_phi_hat(z[0], z[1]).eval() -
                               Eigen::Vector2d(truth_grad_phi(z)))
                                  .squaredNorm();
                        ++pairs;
                    }
                }
            }
        out.phi_grad_error_rho3 = std::sqrt(e3 / pairs);
        out.phi_grad_error_rho2 = std::sqrt(e2p / points);
        out.v_grad_error_rho2 = std::sqrt(e2v / points);
    }
    return out;
}

GradDescentResult grad_descent_refine(const DifferentiableLoss& loss, const VectorXd& theta0,
                                      double step0) {
    if (!loss.value) throw std::invalid_argument("grad_descent_refine: loss.value missing");
    const int n = static_cast<int>(theta0.size());

    auto fd_gradient = [&](const VectorXd& theta) {
        VectorXd grad(n);
        for (int k = 0; k < n; ++k) {
            const double h = 1e-6 * std::max(1.0, std::abs(theta[k]));
            VectorXd tp = theta, tm = theta;
            tp[k] += h;
            tm[k] -= h;
            grad[k] = (loss.value(tp) - loss.value(tm)) / (2.0 * h);
        }
        return grad;
    };

    double f0 = loss.value(theta0);
    if (!std::isfinite(f0))
        throw NonFiniteError("grad_descent_refine: loss not finite at theta0", theta0);

    if (loss.gradient) {
        const VectorXd ga = loss.gradient(theta0);
        const VectorXd gf = fd_gradient(theta0);
        for (int k = 0; k < n; ++k) {
            const double ref = std::max({std::abs(ga[k]), std::abs(gf[k]), 1e-8});
            if (std::abs(ga[k] - gf[k]) / ref > 1e-4)
                throw std::invalid_argument(
                    "grad_descent_refine: supplied gradient disagrees with central "
                    "finite differences at theta0 (component " +
                    std::to_string(k) + ")");
        }
    }

    GradDescentResult out;
    out.theta = theta0;
    out.trace.push_back(f0);
    double fcur = f0;
    for (int it = 0; it < 10000; ++it) {
        const VectorXd grad = loss.gradient ? loss.gradient(out.theta) : fd_gradient(out.theta);
        double step = step0;
        bool moved = false;
        for (int half = 0; half < 60; ++half) {
            const VectorXd trial = out.theta - step * grad;
            const double ftrial = loss.value(trial);
            if (!std::isfinite(ftrial))
                throw NonFiniteError("grad_descent_refine: non-finite loss encountered",
                                     out.theta);
            if (ftrial < fcur) {
                out.theta = trial;
                const double drop = (fcur - ftrial) / std::max(std::abs(fcur), 1e-300);
                fcur = ftrial;
                out.trace.push_back(fcur);
                moved = true;
                if (drop < 1e-10) out.converged = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved || out.converged) {
            out.converged = true;
            break;
        }
    }
    return out;
}

}  // namespace weakform
