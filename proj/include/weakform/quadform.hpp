#pragma once

#include <optional>
#include <vector>

#include "weakform/types.hpp"

namespace weakform {

// E(theta) = theta^T A theta - 2 theta^T b + c0 with A symmetric. The shared
// representation of every assembled self-test loss over a linear
// parametrization.
struct QuadraticForm {
    MatrixXd A;
    VectorXd b;
    double c0 = 0.0;
    int n = 0;

    QuadraticForm() = default;
    // Symmetrizes A explicitly; discretization sums are only symmetric up to
    // floating-point associativity.
    QuadraticForm(MatrixXd A_, VectorXd b_, double c0_ = 0.0);
};

enum class RegularizationKind { none, tikhonov_identity };
enum class LambdaSelection { fixed, l_curve };

struct RegularizationSpec {
    RegularizationKind kind = RegularizationKind::none;
    VectorXd lambda_grid;  // ascending, positive; required for l_curve
    LambdaSelection selection = LambdaSelection::fixed;
    double fixed_lambda = 0.0;
};

struct EstimateReport {
    VectorXd coefficients;
    std::optional<double> lambda_used;
    double condition_number = 0.0;
    double residual = 0.0;   // value of the quadratic form at the minimizer
    VectorXd spectrum;       // eigenvalues of A, descending
};

struct LcurveSelection {
    double lambda = 0.0;
    int corner_index = -1;
};

double evaluate(const QuadraticForm& q, const Eigen::Ref<const VectorXd>& theta);

// Unregularized minimizer A^{-1} b via a symmetric factorization plus
// iterative refinement. Refuses when the condition number exceeds 1e12.
VectorXd minimize(const QuadraticForm& q);

// Tikhonov minimizer (A + lambda I)^{-1} b, lambda > 0.
VectorXd minimize_tikhonov(const QuadraticForm& q, double lambda);

// L-curve corner: max three-point Menger curvature of the
// (log residual, log solution norm) polyline over the lambda grid. Endpoints
// are excluded; ties break toward the smaller lambda.
LcurveSelection select_lambda_lcurve(const QuadraticForm& q, const RegularizationSpec& spec);

// Ratio of largest to smallest eigenvalue of A, smallest clamped at 1e-300.
double condition_number(const QuadraticForm& q);

// Eigenvalues of A, descending.
VectorXd spectrum(const QuadraticForm& q);

// Report for a solved system: coefficients plus conditioning diagnostics.
EstimateReport make_report(const QuadraticForm& q, const VectorXd& coefficients,
                           std::optional<double> lambda_used = std::nullopt);

}  // namespace weakform
