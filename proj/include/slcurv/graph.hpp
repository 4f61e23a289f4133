#pragma once

#include "slcurv/hgeom.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace slcurv {

/// Radially staggered polar lattice over a star-shaped domain.
///
/// Nodes sit at scaled radius σ_j = (j + ½)·Δσ, j = 0..Ns−1, and angle
/// α_k = 2πk/Nα; the geodesic distance from the centre is s = σ·ρ(α). The
/// boundary ring j = Ns lands exactly on σ = 1, i.e. Δσ = 1/(Ns + ½). No node
/// sits at the centre: stencils that cross it continue antipodally,
/// f(−σ, α) = f(σ, α + π), which needs Nα even.
class Grid {
public:
    Grid(DomainSpec dom, int ns, int nalpha);

    const DomainSpec& domain() const { return dom_; }
    int ns() const { return ns_; }
    int nalpha() const { return nalpha_; }

    double dsigma() const { return dsigma_; }
    double dalpha() const { return dalpha_; }
    /// Largest radial spacing Δσ·max ρ.
    double h() const { return dsigma_ * rho_max_; }
    double rho_min() const { return rho_min_; }
    double rho_max() const { return rho_max_; }

    /// Interior rings j < Ns plus the boundary ring j = Ns.
    std::size_t node_count() const { return static_cast<std::size_t>((ns_ + 1) * nalpha_); }
    std::size_t interior_count() const { return static_cast<std::size_t>(ns_ * nalpha_); }
    std::size_t index(int j, int k) const { return static_cast<std::size_t>(j * nalpha_ + wrap(k)); }
    bool is_boundary(int j) const { return j == ns_; }

    int wrap(int k) const { return ((k % nalpha_) + nalpha_) % nalpha_; }

    double sigma(int j) const { return (j + 0.5) * dsigma_; }
    double alpha(int k) const { return wrap(k) * dalpha_; }
    double s(int j, int k) const { return sigma(j) * radius_[static_cast<std::size_t>(wrap(k))]; }
    double boundary_radius(int k) const { return radius_[static_cast<std::size_t>(wrap(k))]; }

    /// Lattice node that represents (j, k) for j ≥ −1; ring −1 is the
    /// antipodal ghost of ring 0.
    std::size_t resolve(int j, int k) const;

    bool same_lattice(const Grid& other) const;

private:
    DomainSpec dom_;
    int ns_;
    int nalpha_;
    double dsigma_;
    double dalpha_;
    double rho_min_;
    double rho_max_;
    std::vector<double> radius_;
};

/// Samples of a graph function t = f(p) over the lattice, boundary ring
/// included. Dirichlet data have f = 0 on the boundary ring; barrier caps
/// sampled over other domains may not.
class GraphFn {
public:
    explicit GraphFn(Grid grid);
    GraphFn(Grid grid, std::vector<double> values);

    /// f(j, k) = g(s, α) on every node (boundary ring included).
    static GraphFn sample(const Grid& grid, const std::function<double(double s, double alpha)>& g);

    const Grid& grid() const { return grid_; }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    double& at(int j, int k) { return values_[grid_.resolve(j, k)]; }
    double at(int j, int k) const { return values_[grid_.resolve(j, k)]; }

    bool is_dirichlet() const;
    double max_abs() const;

    /// Finite, f ≥ −tol, f ≤ f_max, and zero on the boundary ring. Throws DomainError.
    void validate(double f_max = 10.0, double tol = 1e-12) const;

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Umbilic cap of curvature λ spanning the disk domain of the grid.
GraphFn umbilic_cap(double lambda, const Grid& grid);

}  // namespace slcurv
