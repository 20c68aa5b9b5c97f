#include "weakform/operators.hpp"

#include <cmath>

#include "weakform/numerics.hpp"

namespace weakform {

namespace {

constexpr int kSgWindow = 11;
constexpr int kSgDegree = 3;

VectorXd derivative_or_sg(const SampledField& u) {
    if (u.deriv_x) return Eigen::Map<const VectorXd>(u.deriv_x->data(), u.deriv_x->size());
    return savitzky_golay_derivative(u.flat(), kSgWindow, kSgDegree, u.gx.dx);
}

// h'(s) = int_0^s h''(t) dt = s * int_0^1 h''(s tau) dtau, valid for either sign of s.
double h_prime_from_second(const std::function<double(double)>& h2, double s) {
    if (s == 0.0) return 0.0;
    return s * adaptive_quadrature([&](double tau) { return h2(s * tau); }, 0.0, 1.0, 1e-12);
}

// h(s) = int_0^s (s - t) h''(t) dt = s^2 * int_0^1 (1 - tau) h''(s tau) dtau.
double h_from_second(const std::function<double(double)>& h2, double s) {
    if (s == 0.0) return 0.0;
    return s * s *
           adaptive_quadrature([&](double tau) { return (1.0 - tau) * h2(s * tau); }, 0.0, 1.0,
                               1e-12);
}

// Phi(r) = Phi(0) + int_0^r phi, tabulated by composite Simpson for fast lookup.
struct RadialAntiderivative {
    double dr = 1.0;
    VectorXd table;

    double operator()(double r) const {
        const double t = std::abs(r) / dr;
        const int k = std::min(static_cast<int>(t), static_cast<int>(table.size()) - 2);
        const double w = t - k;
        return table[k] * (1.0 - w) + table[k + 1] * w;
    }
};

RadialAntiderivative build_antiderivative(const std::function<double(double)>& phi, double phi0,
                                          double r_max, int n = 4096) {
    RadialAntiderivative out;
    out.dr = r_max / n;
    out.table.resize(n + 1);
    out.table[0] = phi0;
    for (int k = 0; k < n; ++k) {
        const double a = k * out.dr, b = (k + 1) * out.dr;
        const double inc = out.dr / 6.0 * (phi(a) + 4.0 * phi(0.5 * (a + b)) + phi(b));
        out.table[k + 1] = out.table[k] + inc;
    }
    return out;
}

}  // namespace

SampledField apply_R_h(const SampledField& u, const std::function<double(double)>& h_second,
                       double nu) {
    u.require_1d("apply_R_h");
    if (!u.deriv_x) throw std::invalid_argument("apply_R_h: field derivative missing");
    const int n = u.gx.n;
    VectorXd flux(n);
    for (int i = 0; i < n; ++i) {
        const double s = u.values(i, 0);
        flux[i] = nu * h_second(s) * s * (*u.deriv_x)(i, 0);
    }
    VectorXd div = savitzky_golay_derivative(flux, kSgWindow, kSgDegree, u.gx.dx);
    return SampledField(u.gx, (-div).eval());
}

SampledField apply_R_aggregation(const SampledField& u,
                                 const std::function<double(double)>& phi_radial, double r_max) {
    u.require_1d("apply_R_aggregation");
    const int n = u.gx.n;
    const double dx = u.gx.dx;
    const VectorXd uv = u.flat();
    const VectorXd du = derivative_or_sg(u);
    const int n_r = std::min(n - 1, static_cast<int>(std::llround(r_max / dx)));

    VectorXd out = VectorXd::Zero(n);
    for (int l = 1; l <= n_r; ++l) {
        const double w = phi_radial(l * dx) * dx;
        if (w == 0.0) continue;
        for (int i = 0; i < n; ++i) {
            const double um = (i - l >= 0) ? uv[i - l] : 0.0;
            const double dm = (i - l >= 0) ? du[i - l] : 0.0;
            const double up = (i + l < n) ? uv[i + l] : 0.0;
            const double dp = (i + l < n) ? du[i + l] : 0.0;
            // d/dx [ u(x-r)u(x) - u(x+r)u(x) ]
            out[i] -= w * ((dm - dp) * uv[i] + (um - up) * du[i]);
        }
    }
    return SampledField(u.gx, out);
}

VectorXd apply_R_aggregation(const std::function<double(double)>& u,
                             const std::function<double(double)>& du,
                             const std::function<double(double)>& phi_radial, double r_max,
                             const Grid1D& grid, double tol) {
    VectorXd out(grid.n);
    for (int i = 0; i < grid.n; ++i) {
        const double x = grid.point(i);
        const double ux = u(x), dux = du(x);
        auto integrand = [&](double r) {
            return phi_radial(r) *
                   ((du(x - r) - du(x + r)) * ux + (u(x - r) - u(x + r)) * dux);
        };
        out[i] = -adaptive_quadrature(integrand, 0.0, r_max, tol);
    }
    return out;
}

VectorXd interaction_gradient(const SampledField& u,
                              const std::function<double(double)>& phi_radial) {
    u.require_1d("interaction_gradient");
    const int n = u.gx.n;
    const double dx = u.gx.dx;
    const VectorXd uv = u.flat();
    VectorXd out = VectorXd::Zero(n);
    for (int l = 1; l < n; ++l) {
        const double w = phi_radial(l * dx) * dx;
        if (w == 0.0) continue;
        for (int i = 0; i < n; ++i) {
            const double um = (i - l >= 0) ? uv[i - l] : 0.0;
            const double up = (i + l < n) ? uv[i + l] : 0.0;
            out[i] += w * (um - up);
        }
    }
    return out;
}

namespace {

// grad(Phi * u) over a 2-D grid by direct summation against the tabulated
// kernel grad Phi on the difference lattice.
void interaction_gradient_2d(const SampledField& u, const std::function<double(double)>& phi,
                             ArrayXXd& gx_out, ArrayXXd& gy_out) {
    const int nx = u.gx.n, ny = u.gy->n;
    const double dx = u.gx.dx, dy = u.gy->dx;
    const double cell = dx * dy;
    ArrayXXd Tx(2 * nx - 1, 2 * ny - 1), Ty(2 * nx - 1, 2 * ny - 1);
    for (int a = 0; a < 2 * nx - 1; ++a) {
        for (int b = 0; b < 2 * ny - 1; ++b) {
            const double zx = (nx - 1 - a) * dx;
            const double zy = (ny - 1 - b) * dy;
            const double r = std::hypot(zx, zy);
            if (r == 0.0) {
                Tx(a, b) = Ty(a, b) = 0.0;
            } else {
                const double s = phi(r) / r;
                Tx(a, b) = s * zx;
                Ty(a, b) = s * zy;
            }
        }
    }
    gx_out.resize(nx, ny);
    gy_out.resize(nx, ny);
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            gx_out(i, j) = (Tx.block(nx - 1 - i, ny - 1 - j, nx, ny) * u.values).sum() * cell;
            gy_out(i, j) = (Ty.block(nx - 1 - i, ny - 1 - j, nx, ny) * u.values).sum() * cell;
        }
    }
}

}  // namespace

double self_test_pairing(const SampledField& u, const ParameterTriple& params) {
    const auto& V = params.V;
    if (!u.is_2d()) {
        const int n = u.gx.n;
        const VectorXd uv = u.flat();
        const VectorXd du = derivative_or_sg(u);
        VectorXd conv = VectorXd::Zero(n);
        if (params.phi_radial) conv = interaction_gradient(u, params.phi_radial);
        VectorXd dV = VectorXd::Zero(n);
        if (V) {
            VectorXd Vv(n);
            for (int i = 0; i < n; ++i) Vv[i] = V(u.gx.point(i), 0.0);
            dV = savitzky_golay_derivative(Vv, kSgWindow, kSgDegree, u.gx.dx);
        }
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double hterm =
                (params.nu != 0.0 && params.h_second) ? params.nu * params.h_second(uv[i]) * du[i]
                                                      : 0.0;
            const double g = hterm + conv[i] + dV[i];
            acc += std::max(uv[i], 0.0) * g * g;
        }
        return acc * u.gx.dx;
    }

    const int nx = u.gx.n, ny = u.gy->n;
    ArrayXXd gx = ArrayXXd::Zero(nx, ny), gy = ArrayXXd::Zero(nx, ny);
    if (params.phi_radial) interaction_gradient_2d(u, params.phi_radial, gx, gy);
    if (params.nu != 0.0 && params.h_second) {
        SampledField tmp = u;
        if (!tmp.deriv_x || !tmp.deriv_y) sg_differentiate(tmp, kSgWindow, kSgDegree);
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) {
                const double h2 = params.nu * params.h_second(u.values(i, j));
                gx(i, j) += h2 * (*tmp.deriv_x)(i, j);
                gy(i, j) += h2 * (*tmp.deriv_y)(i, j);
            }
    }
    if (V) {
        ArrayXXd Vv(nx, ny);
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) Vv(i, j) = V(u.gx.point(i), u.gy->point(j));
        SampledField vf(u.gx, *u.gy, Vv);
        sg_differentiate(vf, kSgWindow, kSgDegree);
        gx += *vf.deriv_x;
        gy += *vf.deriv_y;
    }
    const ArrayXXd weight = u.values.max(0.0);
    return (weight * (gx.square() + gy.square())).sum() * u.cell();
}

double energy(const SampledField& u, const ParameterTriple& params) {
    double total = 0.0;
    const double cell = u.cell();

    if (params.nu != 0.0 && params.h_second) {
        double hsum = 0.0;
        for (int i = 0; i < u.values.size(); ++i)
            hsum += h_from_second(params.h_second, u.values(i));
        total += params.nu * hsum * cell;
    }

    if (params.phi_radial || params.phi_at_zero != 0.0) {
        const std::function<double(double)> phi =
            params.phi_radial ? params.phi_radial : [](double) { return 0.0; };
        if (!u.is_2d()) {
            const int n = u.gx.n;
            const double dx = u.gx.dx;
            auto Phi = build_antiderivative(phi, params.phi_at_zero, std::max(1, n - 1) * dx,
                                            std::max(1024, 4 * n));
            const VectorXd uv = u.flat();
            double acc = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) acc += Phi(std::abs(i - j) * dx) * uv[i] * uv[j];
            total += 0.5 * acc * cell * cell;
        } else {
            const int nx = u.gx.n, ny = u.gy->n;
            const double diag = std::hypot((nx - 1) * u.gx.dx, (ny - 1) * u.gy->dx);
            auto Phi = build_antiderivative(phi, params.phi_at_zero, std::max(diag, 1e-12), 8192);
            double acc = 0.0;
            for (int i = 0; i < nx; ++i)
                for (int j = 0; j < ny; ++j) {
                    const double w1 = u.values(i, j);
                    if (w1 == 0.0) continue;
                    for (int p = 0; p < nx; ++p) {
                        const double zx = (i - p) * u.gx.dx;
                        for (int q = 0; q < ny; ++q) {
                            const double zy = (j - q) * u.gy->dx;
                            acc += Phi(std::hypot(zx, zy)) * w1 * u.values(p, q);
                        }
                    }
                }
            total += 0.5 * acc * cell * cell;
        }
    }

    if (params.V) {
        double acc = 0.0;
        if (!u.is_2d()) {
            for (int i = 0; i < u.gx.n; ++i) acc += params.V(u.gx.point(i), 0.0) * u.values(i, 0);
        } else {
            for (int i = 0; i < u.gx.n; ++i)
                for (int j = 0; j < u.gy->n; ++j)
                    acc += params.V(u.gx.point(i), u.gy->point(j)) * u.values(i, j);
        }
        total += acc * cell;
    }
    return total;
}

EnergyReport check_energy_conservation(const std::vector<SampledField>& path,
                                       const ParameterTriple& params, double dt) {
    if (path.size() < 2)
        throw std::invalid_argument("check_energy_conservation: need at least 2 time slices");
    if (!(dt > 0.0)) throw std::invalid_argument("check_energy_conservation: dt must be positive");

    EnergyReport rep;
    rep.energy_start = energy(path.front(), params);
    rep.energy_end = energy(path.back(), params);
    double acc = 0.0;
    double prev = self_test_pairing(path[0], params);
    for (size_t l = 1; l < path.size(); ++l) {
        const double cur = self_test_pairing(path[l], params);
        acc += 0.5 * (prev + cur) * dt;
        prev = cur;
    }
    rep.dissipation_integral = acc;
    rep.conservation_residual = rep.energy_end - rep.energy_start + rep.dissipation_integral;
    return rep;
}

QuadraticForm elliptic_loss_assembly(const std::vector<FieldPair>& pairs, const BasisSet& basis) {
    if (pairs.empty()) throw std::invalid_argument("elliptic_loss_assembly: no data");
    const int nb = basis.size();
    MatrixXd A = MatrixXd::Zero(nb, nb);
    VectorXd b = VectorXd::Zero(nb);
    const Grid1D& g = pairs.front().u.gx;
    for (const auto& pair : pairs) {
        pair.u.require_1d("elliptic_loss_assembly");
        if (!pair.u.same_grid(pairs.front().u) || !pair.f.same_grid(pair.u))
            throw std::invalid_argument("elliptic_loss_assembly: mismatched grids");
        const VectorXd uv = pair.u.flat();
        const VectorXd fv = pair.f.flat();
        MatrixXd prod(g.n, nb), dprod(g.n, nb);
        for (int k = 0; k < nb; ++k) {
            for (int i = 0; i < g.n; ++i) prod(i, k) = basis.fns[k].f(g.point(i)) * uv[i];
            dprod.col(k) = savitzky_golay_derivative(prod.col(k), kSgWindow, kSgDegree, g.dx);
        }
        A += dprod.transpose() * dprod * g.dx;
        b += prod.transpose() * fv * g.dx;
    }
    return QuadraticForm(std::move(A), std::move(b), 0.0);
}

}  // namespace weakform
