#include "weakform/identifiability.hpp"

#include <cmath>

#include "weakform/numerics.hpp"

namespace weakform {

namespace {

constexpr int kSgWindow = 11;
constexpr int kSgDegree = 3;

void require_shared_1d_grid(const std::vector<SampledField>& data, const char* who) {
    if (data.empty()) throw std::invalid_argument(std::string(who) + ": no data");
    data.front().require_1d(who);
    for (const auto& u : data)
        if (!u.same_grid(data.front()))
            throw std::invalid_argument(std::string(who) + ": fields on different grids");
}

VectorXd derivative_or_sg(const SampledField& u) {
    if (u.deriv_x) return Eigen::Map<const VectorXd>(u.deriv_x->data(), u.deriv_x->size());
    return savitzky_golay_derivative(u.flat(), kSgWindow, kSgDegree, u.gx.dx);
}

}  // namespace

ExplorationMeasure ExplorationMeasure::normalized() const {
    ExplorationMeasure out = *this;
    const double m = mass();
    if (m > 0.0) {
        out.density /= m;
        out.normalization = normalization * m;
    }
    return out;
}

ExplorationMeasure rho1(const std::vector<SampledField>& data) {
    require_shared_1d_grid(data, "rho1");
    const int n = data.front().gx.n;
    const int nl = static_cast<int>(data.size());
    const int bins =
        std::clamp(static_cast<int>(std::ceil(std::sqrt(double(n) * nl))), 20, 200);

    double lo = data.front().values.minCoeff(), hi = data.front().values.maxCoeff();
    for (const auto& u : data) {
        lo = std::min(lo, u.values.minCoeff());
        hi = std::max(hi, u.values.maxCoeff());
    }
    double width = (hi - lo) / bins;
    if (!(width > 0.0)) width = 1.0;

    ExplorationMeasure out;
    out.grid = Grid1D(lo + 0.5 * width, width, bins);
    out.density = VectorXd::Zero(bins);
    for (const auto& u : data) {
        const VectorXd du = derivative_or_sg(u);
        for (int i = 0; i < n; ++i) {
            const double s = u.values(i, 0);
            const double w = std::max(s, 0.0) * du[i] * du[i] * u.gx.dx;
            int bin = static_cast<int>((s - lo) / width);
            bin = std::clamp(bin, 0, bins - 1);
            out.density[bin] += w / width;
        }
    }
    return out;
}

ExplorationMeasure rho2(const std::vector<SampledField>& data) {
    require_shared_1d_grid(data, "rho2");
    ExplorationMeasure out;
    out.grid = data.front().gx;
    VectorXd sum = VectorXd::Zero(out.grid.n);
    for (const auto& u : data) sum += u.flat();
    out.density = sum.cwiseMax(0.0);
    return out;
}

namespace {

// sum_l sum_i |u(x_i)| u(x_i - k dx) u(x_i - k' dx) dx with optional absolute
// values on the shifted factors.
double correlation_entry(const std::vector<SampledField>& data, int k, int k2, bool abs_shifted) {
    double acc = 0.0;
    for (const auto& u : data) {
        const int n = u.gx.n;
        const auto& v = u.values;
        for (int i = 0; i < n; ++i) {
            const int a = i - k, b = i - k2;
            if (a < 0 || a >= n || b < 0 || b >= n) continue;
            double va = v(a, 0), vb = v(b, 0);
            if (abs_shifted) {
                va = std::abs(va);
                vb = std::abs(vb);
            }
            acc += std::abs(v(i, 0)) * va * vb;
        }
    }
    return acc * data.front().gx.dx;
}

}  // namespace

ExplorationMeasure rho3(const std::vector<SampledField>& data) {
    require_shared_1d_grid(data, "rho3");
    const int n = data.front().gx.n;
    const double dx = data.front().gx.dx;
    ExplorationMeasure out;
    out.grid = Grid1D(-(n - 1) * dx, dx, 2 * n - 1);
    out.density.resize(2 * n - 1);
    for (int k = -(n - 1); k <= n - 1; ++k) {
        double acc = 0.0;
        for (const auto& u : data) {
            const auto& v = u.values;
            for (int i = 0; i < n; ++i) {
                const int a = i - k;
                if (a < 0 || a >= n) continue;
                acc += std::abs(v(i, 0)) * std::abs(v(a, 0));
            }
        }
        out.density[k + n - 1] = acc * dx;
    }
    return out.normalized();
}

ExplorationMeasure radial_exploration(const std::vector<SampledField>& data, int n_r) {
    require_shared_1d_grid(data, "radial_exploration");
    const int n = data.front().gx.n;
    const double dx = data.front().gx.dx;
    if (n_r < 1 || n_r >= n)
        throw std::invalid_argument("radial_exploration: n_r out of range");
    ExplorationMeasure out;
    out.grid = Grid1D(dx, dx, n_r);
    out.density.resize(n_r);
    for (int l = 1; l <= n_r; ++l) {
        double acc = 0.0;
        for (const auto& u : data) {
            const auto& v = u.values;
            for (int i = 0; i < n; ++i) {
                const double um = (i - l >= 0) ? v(i - l, 0) : 0.0;
                const double up = (i + l < n) ? v(i + l, 0) : 0.0;
                acc += std::sqrt(std::abs(v(i, 0))) * std::abs(um - up);
            }
        }
        out.density[l - 1] = acc * dx;
    }
    return out.normalized();
}

DiscreteOperator build_LGbar(const std::vector<SampledField>& data,
                             const Grid1D& difference_grid) {
    require_shared_1d_grid(data, "build_LGbar");
    const double dx = data.front().gx.dx;
    const int m = difference_grid.n;

    std::vector<int> shift(m);
    for (int a = 0; a < m; ++a)
        shift[a] = static_cast<int>(std::llround(difference_grid.point(a) / dx));

    DiscreteOperator op;
    op.grid = difference_grid;
    op.rho.grid = difference_grid;
    op.rho.density.resize(m);
    for (int a = 0; a < m; ++a) {
        double acc = 0.0;
        for (const auto& u : data) {
            const int n = u.gx.n;
            for (int i = 0; i < n; ++i) {
                const int p = i - shift[a];
                if (p < 0 || p >= n) continue;
                acc += std::abs(u.values(i, 0)) * std::abs(u.values(p, 0));
            }
        }
        op.rho.density[a] = acc * dx;
    }

    const double floor = 1e-12 * op.rho.density.maxCoeff();
    op.kernel_matrix = MatrixXd::Zero(m, m);
    for (int a = 0; a < m; ++a) {
        if (op.rho.density[a] <= floor) continue;
        for (int b = a; b < m; ++b) {
            if (op.rho.density[b] <= floor) continue;
            const double g = correlation_entry(data, shift[a], shift[b], false);
            const double val = g / (op.rho.density[a] * op.rho.density[b]);
            op.kernel_matrix(a, b) = val;
            op.kernel_matrix(b, a) = val;
        }
    }
    return op;
}

SpectrumReport spectrum_decay(const DiscreteOperator& op) {
    const int m = op.grid.n;
    VectorXd w(m);
    for (int a = 0; a < m; ++a) w[a] = std::sqrt(std::max(op.rho.density[a], 0.0) * op.grid.dx);
    MatrixXd S = w.asDiagonal() * op.kernel_matrix * w.asDiagonal();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (S + S.transpose()), Eigen::EigenvaluesOnly);
    SpectrumReport rep;
    rep.eigenvalues = es.eigenvalues().reverse();
    const double lead = rep.eigenvalues.size() ? rep.eigenvalues[0] : 0.0;
    const int limit = std::min<int>(m, 50);
    for (int k = 0; k < limit; ++k) {
        if (rep.eigenvalues[k] < 1e-3 * lead) {
            rep.decay_index = k;
            break;
        }
    }
    return rep;
}

JointNullReport joint_null_check(const std::vector<SampledField>& data, const BasisSet& v_basis,
                                 const BasisSet& phi_basis, const BasisSet* h_basis, double nu) {
    require_shared_1d_grid(data, "joint_null_check");
    const Grid1D& g = data.front().gx;
    const int n = g.n;
    const double dx = g.dx;
    const int nh = h_basis ? h_basis->size() : 0;
    const int nv = v_basis.size();
    const int np = phi_basis.size();
    const int ncol = nh + nv + np;

    // Difference grid for grad Phi candidates: all lattice shifts.
    const int m = 2 * n - 1;
    VectorXd ygrid(m);
    for (int a = 0; a < m; ++a) ygrid[a] = (a - (n - 1)) * dx;

    MatrixXd A = MatrixXd::Zero(ncol, ncol);
    MatrixXd W(n, nv), Z(m, np);
    for (int q = 0; q < nv; ++q)
        for (int i = 0; i < n; ++i) W(i, q) = v_basis.fns[q].f(g.point(i));
    for (int r = 0; r < np; ++r)
        for (int a = 0; a < m; ++a) Z(a, r) = phi_basis.fns[r].f(ygrid[a]);

    for (const auto& u : data) {
        const VectorXd uv = u.flat();
        const VectorXd du = derivative_or_sg(u);
        MatrixXd cols(n, ncol);
        for (int p = 0; p < nh; ++p)
            for (int i = 0; i < n; ++i)
                cols(i, p) = nu * h_basis->fns[p].f(uv[i]) * du[i];
        cols.middleCols(nh, nv) = W;
        // grad Phi candidate z convolved with u over the full difference grid.
        for (int r = 0; r < np; ++r) {
            for (int i = 0; i < n; ++i) {
                double acc = 0.0;
                for (int a = 0; a < m; ++a) {
                    const int p = i - (a - (n - 1));
                    if (p < 0 || p >= n) continue;
                    acc += Z(a, r) * uv[p];
                }
                cols(i, nh + nv + r) = acc * dx;
            }
        }
        const VectorXd weight = uv.cwiseMax(0.0);
        A += cols.transpose() * weight.asDiagonal() * cols * dx;
    }
    A = 0.5 * (A + A.transpose()).eval();

    JointNullReport rep;
    rep.a_joint = A;

    // Represent grad V = +1 and grad Phi = -1 in the bases.
    const VectorXd ones_x = VectorXd::Ones(n);
    const VectorXd ones_y = VectorXd::Ones(m);
    VectorXd av = W.colPivHouseholderQr().solve(ones_x);
    VectorXd ap = Z.colPivHouseholderQr().solve(-ones_y);
    const double res_v = (W * av - ones_x).norm() / std::sqrt(double(n));
    const double res_p = (Z * ap + ones_y).norm() / std::sqrt(double(m));
    rep.representable = res_v < 1e-9 && res_p < 1e-9;

    VectorXd dir = VectorXd::Zero(ncol);
    dir.segment(nh, nv) = av;
    dir.segment(nh + nv, np) = ap;
    rep.direction = dir;
    if (!rep.representable) {
        rep.ratio = std::numeric_limits<double>::quiet_NaN();
        return rep;
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(A, Eigen::EigenvaluesOnly);
    const double anorm = std::max(std::abs(es.eigenvalues()[0]),
                                  std::abs(es.eigenvalues()[ncol - 1]));
    rep.ratio = (A * dir).norm() / std::max(anorm * dir.norm(), 1e-300);
    return rep;
}

}  // namespace weakform
