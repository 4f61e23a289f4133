#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace slcurv {

/// Point of H³ in the hyperboloid model {⟨X,X⟩_L = −1, X₀ > 0} of Minkowski
/// space with signature (−,+,+,+). The last coordinate is the direction
/// normal to the totally geodesic base plane {X₃ = 0}.
struct MinkPoint {
    std::array<double, 4> x{1.0, 0.0, 0.0, 0.0};
};

using Vec4 = std::array<double, 4>;

double minkowski(const Vec4& a, const Vec4& b);

/// Exp_p(t·N) over the base point p at polar coordinates (s, α) of the base
/// plane: X = cosh t·P(s,α) + sinh t·e₃.
MinkPoint fermi_embed(double s, double alpha, double t);

/// Base-plane point P(s, α) = (cosh s, sinh s cos α, sinh s sin α, 0).
Vec4 base_point(double s, double alpha);

/// Poincaré-ball coordinates xᵢ = Xᵢ/(1 + X₀).
std::array<double, 3> poincare_project(const MinkPoint& p);
MinkPoint poincare_unproject(const std::array<double, 3>& x);

enum class DomainKind { disk, star };

/// Domain Ω in the base plane, star-shaped about the origin with boundary
/// s = ρ(α) = rho·(1 + Σ a_k cos(kα)).
struct DomainSpec {
    DomainKind kind = DomainKind::disk;
    double rho = 1.0;
    std::vector<std::pair<int, double>> fourier;

    static DomainSpec disk(double rho);
    static DomainSpec star(double rho, std::vector<std::pair<int, double>> fourier);

    double radius(double alpha) const;
    double radius_d1(double alpha) const;
    double radius_d2(double alpha) const;
    /// Sampled extremes of ρ(α) (4096 angles, plus the analytic value for disks).
    double min_radius() const;
    double max_radius() const;

    /// Throws DomainError unless rho > 0, every k ≥ 1, Σ|a_k| ≤ 0.3 and
    /// Σ|a_k|(k² − 1) ≤ 0.3 (keeps the boundary curve convex).
    void validate() const;

    /// "disk:1.0" or "star:1.0:2=0.1,3=-0.05".
    static DomainSpec parse(const std::string& text);
    std::string describe() const;
};

enum class CapKind { geodesic, equidistant, horospheric };

/// Umbilic cap spanning the circle of radius rho in the base plane: the
/// totally geodesic plane (λ = 0), an equidistant surface at distance
/// artanh λ from a tilted plane (0 < λ < 1) or a horosphere (λ = 1).
/// Every principal curvature equals λ with respect to the upward normal.
struct UmbilicCap {
    double lambda = 0.0;
    double rho = 1.0;

    UmbilicCap(double lambda, double rho);

    CapKind kind() const;
    /// Height over the base point at distance s from the centre; zero at
    /// s = rho, negative outside.
    double height(double s) const;
};

}  // namespace slcurv
