#pragma once

#include <optional>
#include <vector>

#include "weakform/basis.hpp"
#include "weakform/types.hpp"

namespace weakform {

// Data-induced density on a 1-D grid (s-values, space, pairwise differences,
// or radius). rho1/rho2 are kept unnormalized as assembled; rho3 and the
// radial measure are normalized to unit mass, with the constant recorded.
struct ExplorationMeasure {
    Grid1D grid;
    VectorXd density;
    double normalization = 1.0;  // Z divided out; 1 when unnormalized

    double mass() const { return density.sum() * grid.dx; }
    ExplorationMeasure normalized() const;
};

// Discretization of the integral operator with kernel Gbar = G / (rho3 rho3)
// against the rho3(dy') quadrature weight. rho holds the unnormalized rho3
// restricted to the operator grid; kernel rows/columns vanish where it does.
struct DiscreteOperator {
    Grid1D grid;
    MatrixXd kernel_matrix;
    ExplorationMeasure rho;
};

struct SpectrumReport {
    VectorXd eigenvalues;            // descending
    std::optional<int> decay_index;  // first k < min(n,50) with lambda_k < 1e-3 lambda_1
};

struct JointNullReport {
    bool representable = false;  // can the bases express grad V = c, grad Phi = -c?
    double ratio = 0.0;          // ||A dir|| / (||A|| ||dir||); NaN when excluded
    MatrixXd a_joint;
    VectorXd direction;
};

// Histogram density of s -> sum_l int delta(u_l - s) |grad u_l|^2 u_l dx.
// Each grid point contributes weight max(u,0) |grad u|^2 dx to its s-bin;
// bin count is ceil(sqrt(N L)) clamped to [20, 200].
ExplorationMeasure rho1(const std::vector<SampledField>& data);

// Pointwise sum of the fields on their shared grid, clamped at zero.
ExplorationMeasure rho2(const std::vector<SampledField>& data);

// Normalized correlation density rho3(y) ~ sum_l int |u_l(x)| |u_l(x-y)| dx
// on the full difference grid.
ExplorationMeasure rho3(const std::vector<SampledField>& data);

// Radial exploration density rho(r_l) = (1/Z) sum_k sum_i sqrt|u_k(x_i)|
// |delta u_k(x_i, r_l)| dx on r_l = l dx, l = 1..n_r, normalized to unit mass.
ExplorationMeasure radial_exploration(const std::vector<SampledField>& data, int n_r);

// Kernel G(y,y') = sum_l int |u_l(x)| u_l(x-y) u_l(x-y') dx on the given
// difference grid (spacing snapped to the data grid), normalized by the
// unnormalized rho3 with the vanishing-density indicator.
DiscreteOperator build_LGbar(const std::vector<SampledField>& data, const Grid1D& difference_grid);

// Symmetric eigendecomposition of the rho-weighted kernel.
SpectrumReport spectrum_decay(const DiscreteOperator& op);

// Assemble the joint (h'', grad V, grad Phi) block operator on the given
// bases over the data and measure how close (0, c, -c) is to its null space.
// v_basis elements are candidate grad V components on the data grid;
// phi_basis elements are candidate grad Phi components on the difference grid.
JointNullReport joint_null_check(const std::vector<SampledField>& data, const BasisSet& v_basis,
                                 const BasisSet& phi_basis, const BasisSet* h_basis = nullptr,
                                 double nu = 1.0);

}  // namespace weakform
