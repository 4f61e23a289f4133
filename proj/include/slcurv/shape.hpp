#pragma once

#include "slcurv/graph.hpp"
#include "slcurv/slcalc.hpp"
#include "slcurv/symmat.hpp"

#include <array>
#include <vector>

namespace slcurv {

/// Sign applied to the Minkowski cofactor normal of (X, T_σ, T_α) so that the
/// constant slice f ≡ τ > 0 has shape operator +tanh(τ)·Id: the normal points
/// into the convex side (downwards, towards the base plane).
inline constexpr double kNormalOrientation = 1.0;

/// Admissibility threshold on the smallest principal curvature.
inline constexpr double kAdmissibleEps = 1e-10;

/// Shape operator at interior node (j, k) in the orthonormal frame
/// g^{-1/2}: A = g^{-1/2}·II·g^{-1/2}, where the embedded lattice is
/// differenced with second-order central stencils in (σ, α).
///
/// For n ≥ 3 the graph must be rotationally symmetric; the angular principal
/// curvature of the 2D slice is repeated n − 1 times.
///
/// Throws NumericError when det g ≤ 1e-12 (non-graph or blown-up data).
SymMat shape_at(const GraphFn& f, int j, int k, int n = 2);

/// Per-interior-node curvature record, indexed like the interior of the grid
/// (j·Nα + k).
struct ShapeField {
    int n = 2;
    std::vector<SymMat> A;
    std::vector<EigenDecomposition> eig;
    std::vector<double> lambda_min;
    std::vector<double> lambda_max;
    std::vector<double> mean;        ///< H = Tr A
    std::vector<double> rhat_theta;  ///< tan(θ/n)·R_θ(A), NaN where inadmissible
    std::vector<double> residual;    ///< SL_r(A) − θ
    std::vector<char> admissible;

    std::size_t size() const { return A.size(); }
    bool all_admissible() const;
    double min_lambda1() const;
};

ShapeField shape_field(const GraphFn& f, const CurvatureQuery& q, int workers = 1);

/// Residuals SL_r(A) − θ and smallest eigenvalues only; the solver's hot path.
struct ResidualField {
    std::vector<double> residual;
    std::vector<double> lambda_min;
};

ResidualField residual_field(const GraphFn& f, const CurvatureQuery& q, int workers = 1);

/// Δ^B φ = Tr(B·Hess_Σ φ) with B = (Id + r⁻²A²)⁻¹ at every interior node.
/// phi covers the whole lattice, boundary ring included. Hess_Σ is the
/// intrinsic Hessian of the graph metric, φ_ij − Γᵏ_ij φ_k, expressed in the
/// same orthonormal frame as A. Throws DomainError at inadmissible nodes.
std::vector<double> delta_b(const GraphFn& f, const CurvatureQuery& q, const std::vector<double>& phi,
                            int workers = 1);

/// Laplace–Beltrami operator of the graph metric (B = Id); no admissibility needed.
std::vector<double> laplace_beltrami(const GraphFn& f, const std::vector<double>& phi, int n = 2,
                                     int workers = 1);

/// Lattice nodes read by the curvature stencil of interior node (j, k): the
/// 3×3 block around it, with ring −1 resolved antipodally.
std::vector<std::size_t> stencil(const Grid& grid, int j, int k);

}  // namespace slcurv
