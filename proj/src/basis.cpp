#include "weakform/basis.hpp"

#include <cmath>

namespace weakform {

BasisSet power_basis(int k_min, int k_max) {
    if (k_min <= 1) throw std::invalid_argument("power_basis: requires k_min > 1");
    if (k_max < k_min) throw std::invalid_argument("power_basis: empty range");
    BasisSet out;
    out.kind = BasisKind::power;
    for (int k = k_min; k <= k_max; ++k) {
        const double km1 = k - 1.0;
        ScalarBasisFn e;
        e.f = [k, km1](double s) { return std::pow(s, k) / km1; };
        e.d1 = [k, km1](double s) { return k * std::pow(s, k - 1) / km1; };
        e.d2 = [k](double s) { return k * std::pow(s, k - 2); };
        out.fns.push_back(std::move(e));
    }
    return out;
}

BasisSet piecewise_constant_basis(double dx, int l0, int count) {
    if (!(dx > 0.0)) throw std::invalid_argument("piecewise_constant_basis: dx must be positive");
    if (count <= 0) throw std::invalid_argument("piecewise_constant_basis: empty basis");
    BasisSet out;
    out.kind = BasisKind::piecewise_constant;
    out.bin_edges.resize(count + 1);
    for (int l = 0; l <= count; ++l) out.bin_edges[l] = (l0 + l) * dx;
    for (int l = 0; l < count; ++l) {
        const double lo = out.bin_edges[l];
        const double hi = out.bin_edges[l + 1];
        ScalarBasisFn e;
        e.f = [lo, hi](double r) { return (r >= lo && r < hi) ? 1.0 : 0.0; };
        e.d1 = [](double) { return 0.0; };
        e.d2 = [](double) { return 0.0; };
        out.fns.push_back(std::move(e));
    }
    return out;
}

BasisSet2 tensor_poly_basis(int max_degree, double half_width_x, double half_width_y,
                            bool even_only) {
    if (max_degree < 1) throw std::invalid_argument("tensor_poly_basis: degree must be >= 1");
    if (!(half_width_x > 0.0) || !(half_width_y > 0.0))
        throw std::invalid_argument("tensor_poly_basis: box half-widths must be positive");
    BasisSet2 out;
    out.kind = even_only ? BasisKind::tensor_poly_even : BasisKind::tensor_poly;
    const double sx = half_width_x, sy = half_width_y;
    for (int deg = 1; deg <= max_degree; ++deg) {
        if (even_only && deg % 2 != 0) continue;
        for (int a = deg; a >= 0; --a) {
            const int b = deg - a;
            PlanarBasisFn e;
            e.f = [a, b, sx, sy](double x, double y) {
                return std::pow(x / sx, a) * std::pow(y / sy, b);
            };
            e.grad = [a, b, sx, sy](double x, double y) {
                const double xa = std::pow(x / sx, a), yb = std::pow(y / sy, b);
                const double gx = a == 0 ? 0.0 : a * std::pow(x / sx, a - 1) * yb / sx;
                const double gy = b == 0 ? 0.0 : b * std::pow(y / sy, b - 1) * xa / sy;
                return Eigen::Vector2d(gx, gy);
            };
            out.fns.push_back(std::move(e));
        }
    }
    return out;
}

BasisSet2 symmetrize(const BasisSet2& basis) {
    BasisSet2 out;
    out.kind = basis.kind;
    for (const auto& e : basis.fns) {
        PlanarBasisFn s;
        s.f = [e](double x, double y) { return e.f(x, y) + e.f(-x, -y); };
        s.grad = [e](double x, double y) {
            return Eigen::Vector2d(e.grad(x, y) - e.grad(-x, -y));
        };
        out.fns.push_back(std::move(s));
    }
    return out;
}

}  // namespace weakform
