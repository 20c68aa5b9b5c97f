#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "weakform/quadform.hpp"

using namespace weakform;

TEST_CASE("evaluate matches the written quadratic") {
    QuadraticForm q1(MatrixXd::Identity(2, 2), VectorXd::Zero(2), 0.0);
    CHECK(evaluate(q1, Eigen::Vector2d(1, 1)) == doctest::Approx(2.0));

    MatrixXd A(2, 2);
    A << 2, 0, 0, 1;
    QuadraticForm q2(A, Eigen::Vector2d(1, 0), 3.0);
    CHECK(evaluate(q2, Eigen::Vector2d(1, 1)) == doctest::Approx(4.0));

    CHECK_THROWS_AS(evaluate(q2, VectorXd::Zero(3)), std::invalid_argument);
}

TEST_CASE("minimize solves the normal equations") {
    QuadraticForm q(MatrixXd::Identity(2, 2), Eigen::Vector2d(3, -1), 0.0);
    CHECK((minimize(q) - Eigen::Vector2d(3, -1)).norm() < 1e-12);

    MatrixXd A(2, 2);
    A << 2, 1, 1, 2;
    QuadraticForm q2(A, Eigen::Vector2d(1, 1), 0.0);
    CHECK((minimize(q2) - Eigen::Vector2d(1.0 / 3, 1.0 / 3)).norm() < 1e-12);
}

TEST_CASE("minimize refuses severely ill-conditioned systems") {
    MatrixXd A = MatrixXd::Identity(3, 3);
    A(2, 2) = 1e-14;
    QuadraticForm q(A, VectorXd::Ones(3), 0.0);
    CHECK_THROWS_AS(minimize(q), IllConditionedError);
}

TEST_CASE("minimize residual contract on a stiff but solvable system") {
    const int n = 6;
    MatrixXd B = MatrixXd::Random(n, n);
    MatrixXd A = B * B.transpose() + 1e-8 * MatrixXd::Identity(n, n);
    VectorXd b = VectorXd::Random(n);
    QuadraticForm q(A, b, 0.0);
    const VectorXd x = minimize(q);
    CHECK((q.A * x - q.b).norm() <= 1e-10 * q.b.norm());
}

TEST_CASE("minimize_tikhonov") {
    QuadraticForm ridge(MatrixXd::Zero(3, 3), Eigen::Vector3d(1, -2, 0.5), 0.0);
    CHECK((minimize_tikhonov(ridge, 1.0) - Eigen::Vector3d(1, -2, 0.5)).norm() < 1e-14);

    QuadraticForm q(MatrixXd::Identity(2, 2), Eigen::Vector2d(2, 2), 0.0);
    CHECK((minimize_tikhonov(q, 1.0) - Eigen::Vector2d(1, 1)).norm() < 1e-14);

    CHECK_THROWS_AS(minimize_tikhonov(q, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(minimize_tikhonov(q, -1.0), std::invalid_argument);

    // lambda -> 0 continuity against the unregularized solve.
    MatrixXd A(3, 3);
    A << 4, 1, 0, 1, 3, 1, 0, 1, 2;
    QuadraticForm q3(A, Eigen::Vector3d(1, 2, 3), 0.0);
    CHECK((minimize_tikhonov(q3, 1e-12) - minimize(q3)).norm() <= 1e-6);
}

TEST_CASE("condition_number") {
    QuadraticForm qi(MatrixXd::Identity(4, 4), VectorXd::Zero(4), 0.0);
    CHECK(condition_number(qi) == doctest::Approx(1.0));

    MatrixXd A = MatrixXd::Zero(2, 2);
    A(0, 0) = 4.0;
    A(1, 1) = 1.0;
    QuadraticForm qd(A, VectorXd::Zero(2), 0.0);
    CHECK(condition_number(qd) == doctest::Approx(4.0));
}

TEST_CASE("select_lambda_lcurve membership and small grids") {
    QuadraticForm q(MatrixXd::Identity(2, 2), Eigen::Vector2d(1, 0), 0.0);
    RegularizationSpec spec;
    spec.selection = LambdaSelection::l_curve;
    spec.lambda_grid.resize(9);
    for (int i = 0; i < 9; ++i) spec.lambda_grid[i] = std::pow(10.0, -6.0 + i);
    const auto sel = select_lambda_lcurve(q, spec);
    bool member = false;
    for (int i = 0; i < 9; ++i) member = member || sel.lambda == spec.lambda_grid[i];
    CHECK(member);
    CHECK(sel.corner_index >= 1);
    CHECK(sel.corner_index <= 7);

    spec.lambda_grid = Eigen::Vector3d(1e-4, 1e-2, 1.0);
    CHECK(select_lambda_lcurve(q, spec).corner_index == 1);

    spec.lambda_grid = Eigen::Vector2d(1e-4, 1e-2);
    CHECK_THROWS_AS(select_lambda_lcurve(q, spec), std::invalid_argument);
}

TEST_CASE("minimizer optimality against random probes") {
    std::mt19937 gen(7);
    std::normal_distribution<double> dist;
    const int n = 5;
    MatrixXd B(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) B(i, j) = dist(gen);
    QuadraticForm q(B * B.transpose() + 0.1 * MatrixXd::Identity(n, n), VectorXd::Ones(n), 0.5);
    const VectorXd star = minimize(q);
    const double fstar = evaluate(q, star);
    for (int trial = 0; trial < 100; ++trial) {
        VectorXd theta(n);
        for (int i = 0; i < n; ++i) theta[i] = dist(gen);
        CHECK(fstar <= evaluate(q, theta) + 1e-12);
    }
}

TEST_CASE("Tikhonov path norm is nonincreasing in lambda") {
    std::mt19937 gen(13);
    std::normal_distribution<double> dist;
    const int n = 8;
    MatrixXd B(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) B(i, j) = dist(gen);
    QuadraticForm q(B * B.transpose(), VectorXd::Random(n), 0.0);
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 20; ++i) {
        const double lambda = std::pow(10.0, -8.0 + 0.5 * i);
        const double norm = minimize_tikhonov(q, lambda).norm();
        CHECK(norm <= prev + 1e-10);
        prev = norm;
    }
}

TEST_CASE("report residual equals the evaluated quadratic") {
    MatrixXd A(2, 2);
    A << 3, 1, 1, 2;
    QuadraticForm q(A, Eigen::Vector2d(1, -1), 0.7);
    const VectorXd c = minimize(q);
    const EstimateReport rep = make_report(q, c);
    const double direct = c.dot(q.A * c) - 2.0 * c.dot(q.b) + q.c0;
    CHECK(std::abs(rep.residual - direct) <= 1e-10 * std::max(1.0, std::abs(direct)));
    CHECK(rep.spectrum.size() == 2);
    CHECK(rep.spectrum[0] >= rep.spectrum[1]);
    CHECK(!rep.lambda_used.has_value());
}
