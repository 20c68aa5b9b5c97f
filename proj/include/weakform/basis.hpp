#pragma once

#include <functional>
#include <vector>

#include "weakform/types.hpp"

namespace weakform {

enum class BasisKind { power, piecewise_constant, tensor_poly_even, tensor_poly };

// Scalar basis element with analytic first and second derivatives.
struct ScalarBasisFn {
    std::function<double(double)> f;
    std::function<double(double)> d1;
    std::function<double(double)> d2;
};

// Ordered family of scalar-argument basis functions (argument: density value
// s, radius r, or position x depending on the estimator).
struct BasisSet {
    BasisKind kind = BasisKind::power;
    std::vector<ScalarBasisFn> fns;
    VectorXd bin_edges;  // piecewise-constant only: edges[l], edges[l+1] bound element l

    int size() const { return static_cast<int>(fns.size()); }
};

// e_k(s) = s^k / (k-1) for k = k_min..k_max (k > 1).
BasisSet power_basis(int k_min = 2, int k_max = 4);

// Indicators of [l*dx, (l+1)*dx) for l = l0..l0+count-1.
BasisSet piecewise_constant_basis(double dx, int l0, int count);

// Planar basis element with analytic gradient.
struct PlanarBasisFn {
    std::function<double(double, double)> f;
    std::function<Eigen::Vector2d(double, double)> grad;
};

struct BasisSet2 {
    BasisKind kind = BasisKind::tensor_poly;
    std::vector<PlanarBasisFn> fns;

    int size() const { return static_cast<int>(fns.size()); }
};

// Monomials (x/sx)^a (y/sy)^b with 1 <= a+b <= max_degree, scaled to the given
// box half-widths. even_only keeps a+b even (degree >= 2).
BasisSet2 tensor_poly_basis(int max_degree, double half_width_x, double half_width_y,
                            bool even_only = false);

// e(x) + e(-x) applied elementwise; annihilates odd parts.
BasisSet2 symmetrize(const BasisSet2& basis);

}  // namespace weakform
