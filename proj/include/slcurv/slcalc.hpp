#pragma once

#include "slcurv/symmat.hpp"

#include <limits>
#include <span>

namespace slcurv {

/// The curvature equation being evaluated: dimension n, angle θ and the
/// curvature level, carried both as r and as the rescaled r̂ = tan(θ/n)·r
/// (the rescaling under which horospheres have curvature 1).
struct CurvatureQuery {
    int n = 2;
    double theta = 0.0;
    double r = 1.0;
    double rhat = 1.0;

    static CurvatureQuery from_rhat(int n, double theta, double rhat);
    static CurvatureQuery from_r(int n, double theta, double r);

    /// Checks (n−1)π/2 ≤ θ < nπ/2 (or θ > (n−1)π/2 when the boundary angle is
    /// not allowed) and r, r̂ > 0. Throws DomainError.
    void validate(bool allow_boundary_angle = true) const;

    /// Same equation at a different angle, keeping r̂ fixed.
    CurvatureQuery with_theta(double new_theta) const { return from_rhat(n, new_theta, rhat); }
};

/// tan(θ/n), the factor between r and r̂.
double rescale_factor(int n, double theta);

/// Σ arctan(λᵢ) over the spectrum of A.
double arctan_sym(const SymMat& a);

/// SL_r(A) = ArcTan(A/r). Throws DomainError if r ≤ 0.
double sl(const SymMat& a, double r);
double sl_from_eigenvalues(std::span<const double> eig, double r);

struct RTheta {
    double r = 0.0;
    double rhat = 0.0;
};

/// The unique r with SL_r(A) = θ, for positive definite A and 0 < θ < nπ/2.
/// Throws DomainError if λ₁ ≤ 1e-14·‖A‖.
RTheta r_theta(const SymMat& a, double theta);
RTheta r_theta_from_eigenvalues(std::span<const double> eig, double theta);

struct SLDerivatives {
    SymMat grad;   ///< DSL_r(A)[M] = ⟨grad, M⟩
    SymMat mu_r;   ///< Id + r⁻²A²
    double phi_r;  ///< Tr(μ_r⁻¹ A)
};

SLDerivatives d_sl(const SymMat& a, double r);

/// −2 Tr(μ⁻¹ A M μ⁻¹ M) with μ = Id + A²: the second derivative of the
/// arctan sum at A in direction M.
double d2_sigma(const SymMat& a, const SymMat& m);

/// Gradient of A ↦ R_θ(A): r·μ_r⁻¹ / Tr(μ_r⁻¹A) evaluated at r = R_θ(A).
SymMat d_r(const SymMat& a, double theta);

struct KBounds {
    double k1 = 0.0;
    double k2 = std::numeric_limits<double>::infinity();
};

/// Constants with K₁λ₁(A) ≤ R_θ(A) ≤ K₂λ₁(A); K₂ is finite only for
/// θ > (n−1)π/2.
KBounds k_bounds(int n, double theta);

}  // namespace slcurv
