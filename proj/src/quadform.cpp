#include "weakform/quadform.hpp"

#include <cmath>

namespace weakform {

namespace {
constexpr double kConditionCap = 1e12;
constexpr double kEigenFloor = 1e-300;
}  // namespace

QuadraticForm::QuadraticForm(MatrixXd A_, VectorXd b_, double c0_)
    : A(std::move(A_)), b(std::move(b_)), c0(c0_), n(static_cast<int>(b.size())) {
    if (A.rows() != n || A.cols() != n)
        throw std::invalid_argument("QuadraticForm: A must be n x n with n = b.size()");
    A = 0.5 * (A + A.transpose()).eval();
}

double evaluate(const QuadraticForm& q, const Eigen::Ref<const VectorXd>& theta) {
    if (theta.size() != q.n) throw std::invalid_argument("evaluate: dimension mismatch");
    return theta.dot(q.A * theta) - 2.0 * theta.dot(q.b) + q.c0;
}

VectorXd spectrum(const QuadraticForm& q) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(q.A, Eigen::EigenvaluesOnly);
    return es.eigenvalues().reverse();
}

double condition_number(const QuadraticForm& q) {
    const VectorXd ev = spectrum(q);
    if (ev.size() == 0) return 1.0;
    const double hi = ev[0];
    const double lo = std::max(ev[ev.size() - 1], kEigenFloor);
    return hi / lo;
}

namespace {

VectorXd solve_refined(const MatrixXd& A, const VectorXd& b) {
    Eigen::LDLT<MatrixXd> ldlt(A);
    VectorXd x = ldlt.solve(b);
    const double bnorm = std::max(b.norm(), 1e-300);
    for (int it = 0; it < 4; ++it) {
        VectorXd r = b - A * x;
        if (r.norm() <= 1e-12 * bnorm) break;
        x += ldlt.solve(r);
    }
    return x;
}

}  // namespace

VectorXd minimize(const QuadraticForm& q) {
    const double cond = condition_number(q);
    if (cond > kConditionCap)
        throw IllConditionedError(
            "minimize: condition number " + std::to_string(cond) +
                " exceeds 1e12; use minimize_tikhonov with a regularization parameter",
            cond);
    return solve_refined(q.A, q.b);
}

VectorXd minimize_tikhonov(const QuadraticForm& q, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("minimize_tikhonov: lambda must be positive");
    MatrixXd M = q.A;
    M.diagonal().array() += lambda;
    return solve_refined(M, q.b);
}

LcurveSelection select_lambda_lcurve(const QuadraticForm& q, const RegularizationSpec& spec) {
    if (spec.selection != LambdaSelection::l_curve)
        throw std::invalid_argument("select_lambda_lcurve: spec.selection must be l-curve");
    const int m = static_cast<int>(spec.lambda_grid.size());
    if (m < 3) throw std::invalid_argument("select_lambda_lcurve: need at least 3 grid points");
    for (int i = 0; i < m; ++i) {
        if (!(spec.lambda_grid[i] > 0.0))
            throw std::invalid_argument("select_lambda_lcurve: lambdas must be positive");
        if (i > 0 && !(spec.lambda_grid[i] > spec.lambda_grid[i - 1]))
            throw std::invalid_argument("select_lambda_lcurve: grid must be strictly increasing");
    }

    MatrixXd pts(m, 2);
    for (int i = 0; i < m; ++i) {
        const VectorXd theta = minimize_tikhonov(q, spec.lambda_grid[i]);
        const double res = std::max((q.A * theta - q.b).norm(), kEigenFloor);
        const double nrm = std::max(theta.norm(), kEigenFloor);
        pts(i, 0) = std::log(res);
        pts(i, 1) = std::log(nrm);
    }

    // Menger curvature of consecutive point triples; endpoints are never
    // candidates, ties resolve to the smaller lambda.
    int best = 1;
    double best_kappa = -1.0;
    for (int i = 1; i + 1 < m; ++i) {
        const Eigen::Vector2d p0 = pts.row(i - 1), p1 = pts.row(i), p2 = pts.row(i + 1);
        const Eigen::Vector2d a = p1 - p0, b2 = p2 - p1, c = p2 - p0;
        const double cross = a.x() * b2.y() - a.y() * b2.x();
        const double denom = a.norm() * b2.norm() * c.norm();
        const double kappa = denom > 0.0 ? 2.0 * std::abs(cross) / denom : 0.0;
        if (kappa > best_kappa) {
            best_kappa = kappa;
            best = i;
        }
    }
    return {spec.lambda_grid[best], best};
}

EstimateReport make_report(const QuadraticForm& q, const VectorXd& coefficients,
                           std::optional<double> lambda_used) {
    EstimateReport rep;
    rep.coefficients = coefficients;
    rep.lambda_used = lambda_used;
    rep.condition_number = condition_number(q);
    rep.residual = evaluate(q, coefficients);
    rep.spectrum = spectrum(q);
    return rep;
}

}  // namespace weakform
