#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>

namespace weakform {

using Eigen::ArrayXXd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Thrown when an assembled problem cannot be solved reliably without
// regularization.
struct IllConditionedError : std::runtime_error {
    IllConditionedError(const std::string& what, double cond)
        : std::runtime_error(what), condition_number(cond) {}
    double condition_number;
};

// Thrown when adaptive quadrature exhausts its subdivision budget. Carries the
// best estimate accumulated so far.
struct QuadratureError : std::runtime_error {
    QuadratureError(const std::string& what, double estimate)
        : std::runtime_error(what), best_estimate(estimate) {}
    double best_estimate;
};

// Thrown when an iteration encounters a non-finite value. Carries the last
// iterate that evaluated to a finite loss.
struct NonFiniteError : std::runtime_error {
    NonFiniteError(const std::string& what, VectorXd iterate)
        : std::runtime_error(what), last_good(std::move(iterate)) {}
    VectorXd last_good;
};

// Uniform 1-D grid with points x0 + j*dx, j = 0..n-1.
struct Grid1D {
    double x0 = 0.0;
    double dx = 1.0;
    int n = 0;

    Grid1D() = default;
    Grid1D(double x0_, double dx_, int n_) : x0(x0_), dx(dx_), n(n_) {
        if (dx <= 0.0) throw std::invalid_argument("Grid1D: dx must be positive");
        if (n < 0) throw std::invalid_argument("Grid1D: negative point count");
    }

    double point(int j) const { return x0 + j * dx; }
    double back() const { return x0 + (n - 1) * dx; }

    VectorXd points() const {
        VectorXd p(n);
        for (int j = 0; j < n; ++j) p[j] = point(j);
        return p;
    }
};

// Scalar function sampled on a uniform 1-D grid or on the tensor product of
// two uniform grids. `values` is gx.n x 1 in 1-D and gx.n x gy.n in 2-D.
// Derivatives, when present, match the value shape; 2-D fields carry one
// array per axis.
struct SampledField {
    Grid1D gx;
    std::optional<Grid1D> gy;
    ArrayXXd values;
    std::optional<ArrayXXd> deriv_x;
    std::optional<ArrayXXd> deriv_y;

    SampledField() = default;

    SampledField(Grid1D grid, VectorXd v) : gx(grid) {
        if (v.size() != grid.n)
            throw std::invalid_argument("SampledField: values do not match grid");
        values = v.array().matrix().reshaped(grid.n, 1).array();
    }

    SampledField(Grid1D grid_x, Grid1D grid_y, ArrayXXd v)
        : gx(grid_x), gy(grid_y), values(std::move(v)) {
        if (values.rows() != gx.n || values.cols() != grid_y.n)
            throw std::invalid_argument("SampledField: values do not match grids");
    }

    bool is_2d() const { return gy.has_value(); }
    int size() const { return static_cast<int>(values.size()); }

    // Cell measure: dx in 1-D, dx*dy in 2-D.
    double cell() const { return is_2d() ? gx.dx * gy->dx : gx.dx; }

    Eigen::Map<const VectorXd> flat() const {
        return Eigen::Map<const VectorXd>(values.data(), values.size());
    }

    void require_1d(const char* who) const {
        if (is_2d()) throw std::invalid_argument(std::string(who) + ": expects a 1-D field");
    }

    bool same_grid(const SampledField& other) const {
        auto eq = [](const Grid1D& a, const Grid1D& b) {
            return a.n == b.n && std::abs(a.x0 - b.x0) < 1e-12 && std::abs(a.dx - b.dx) < 1e-12;
        };
        if (is_2d() != other.is_2d()) return false;
        if (!eq(gx, other.gx)) return false;
        if (is_2d() && !eq(*gy, *other.gy)) return false;
        return true;
    }
};

// Input-output observation pair on a shared grid.
struct FieldPair {
    SampledField u;
    SampledField f;
};

}  // namespace weakform
