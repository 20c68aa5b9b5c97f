#include "weakform/numerics.hpp"

#include <cmath>
#include <limits>

namespace weakform {

double riemann_sum(const SampledField& field) { return field.values.sum() * field.cell(); }

namespace {

// Weights w such that w . y approximates the derivative of the degree-p fit
// through samples at offsets t (in index units).
VectorXd fit_derivative_weights(const VectorXd& t, int degree, double at) {
    const int w = static_cast<int>(t.size());
    MatrixXd V(w, degree + 1);
    for (int i = 0; i < w; ++i) {
        double p = 1.0;
        for (int j = 0; j <= degree; ++j) {
            V(i, j) = p;
            p *= t[i];
        }
    }
    // Derivative of the fitted polynomial at `at`, as a linear functional of y.
    VectorXd d(degree + 1);
    d[0] = 0.0;
    double p = 1.0;
    for (int j = 1; j <= degree; ++j) {
        d[j] = j * p;
        p *= at;
    }
    // weights^T = d^T (V^T V)^{-1} V^T
    MatrixXd VtV = V.transpose() * V;
    VectorXd coeff = VtV.ldlt().solve(d);
    return V * coeff;
}

}  // namespace

VectorXd savitzky_golay_derivative(const Eigen::Ref<const VectorXd>& values, int window,
                                   int degree, double dx) {
    const int n = static_cast<int>(values.size());
    if (window % 2 == 0 || window < 3)
        throw std::invalid_argument("savitzky_golay_derivative: window must be odd and >= 3");
    if (degree >= window)
        throw std::invalid_argument("savitzky_golay_derivative: degree must be < window");
    if (n < window)
        throw std::invalid_argument("savitzky_golay_derivative: series shorter than window");
    if (dx <= 0.0) throw std::invalid_argument("savitzky_golay_derivative: dx must be positive");

    const int half = window / 2;
    VectorXd t_centered(window);
    for (int i = 0; i < window; ++i) t_centered[i] = i - half;
    const VectorXd w_interior = fit_derivative_weights(t_centered, degree, 0.0);

    VectorXd out(n);
    for (int i = half; i < n - half; ++i)
        out[i] = w_interior.dot(values.segment(i - half, window)) / dx;

    // One-sided windows: fit on the first/last `window` samples and take the
    // fitted derivative at the boundary point itself.
    VectorXd t_left(window);
    for (int i = 0; i < window; ++i) t_left[i] = i;
    for (int i = 0; i < half; ++i) {
        VectorXd w = fit_derivative_weights(t_left, degree, static_cast<double>(i));
        out[i] = w.dot(values.head(window)) / dx;
    }
    for (int i = n - half; i < n; ++i) {
        const int base = n - window;
        VectorXd w = fit_derivative_weights(t_left, degree, static_cast<double>(i - base));
        out[i] = w.dot(values.tail(window)) / dx;
    }
    return out;
}

void sg_differentiate(SampledField& field, int window, int degree) {
    const int nx = field.gx.n;
    if (!field.is_2d()) {
        field.deriv_x = savitzky_golay_derivative(field.flat(), window, degree, field.gx.dx)
                            .reshaped(nx, 1)
                            .array();
        return;
    }
    const int ny = field.gy->n;
    ArrayXXd dx_arr(nx, ny), dy_arr(nx, ny);
    for (int j = 0; j < ny; ++j)
        dx_arr.col(j) =
            savitzky_golay_derivative(field.values.col(j).matrix(), window, degree, field.gx.dx);
    for (int i = 0; i < nx; ++i)
        dy_arr.row(i) = savitzky_golay_derivative(field.values.row(i).transpose().matrix(), window,
                                                  degree, field.gy->dx)
                            .transpose();
    field.deriv_x = dx_arr;
    field.deriv_y = dy_arr;
}

namespace {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule.
constexpr double kGK15Nodes[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
constexpr double kGK15Weights[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679, 0.1903505780647854, 0.2044329400752989, 0.2094821410847278};
constexpr double kG7Weights[4] = {0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
                                  0.4179591836734694};

struct PanelResult {
    double kronrod;
    double err;
};

// The 7-point Gauss nodes are the odd-indexed Kronrod nodes plus the centre.
PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double kron = 0.0, gauss = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double x = kGK15Nodes[i] * h;
        const double fv = (i == 7) ? f(c) : f(c - x) + f(c + x);
        kron += kGK15Weights[i] * fv;
        if (i % 2 == 1) gauss += kG7Weights[i / 2] * fv;
    }
    kron *= h;
    gauss *= h;
    return {kron, std::abs(kron - gauss)};
}

double adapt(const std::function<double(double)>& f, double a, double b, double tol, int depth,
             double& accumulated) {
    PanelResult r = gk15(f, a, b);
    if (r.err <= tol || r.err <= std::numeric_limits<double>::epsilon() * std::abs(r.kronrod)) {
        accumulated += r.kronrod;
        return r.kronrod;
    }
    if (depth >= 50) {
        accumulated += r.kronrod;
        throw QuadratureError("adaptive_quadrature: max subdivision depth reached", accumulated);
    }
    const double m = 0.5 * (a + b);
    double left = adapt(f, a, m, 0.5 * tol, depth + 1, accumulated);
    double right = adapt(f, m, b, 0.5 * tol, depth + 1, accumulated);
    return left + right;
}

}  // namespace

double adaptive_quadrature(const std::function<double(double)>& f, double a, double b,
                           double tol) {
    if (!(a < b)) throw std::invalid_argument("adaptive_quadrature: requires a < b");
    if (!(tol > 0.0)) throw std::invalid_argument("adaptive_quadrature: tol must be positive");
    double accumulated = 0.0;
    return adapt(f, a, b, tol, 0, accumulated);
}

SampledField radial_convolution(const SampledField& u, double r) {
    u.require_1d("radial_convolution");
    if (r < 0.0) throw std::invalid_argument("radial_convolution: r must be nonnegative");
    const int n = u.gx.n;
    const int k = static_cast<int>(std::llround(r / u.gx.dx));
    VectorXd out = VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
        const double left = (i - k >= 0 && i - k < n) ? u.values(i - k, 0) : 0.0;
        const double right = (i + k >= 0 && i + k < n) ? u.values(i + k, 0) : 0.0;
        out[i] = left - right;
    }
    return SampledField(u.gx, out);
}

}  // namespace weakform
