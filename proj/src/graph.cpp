#include "slcurv/graph.hpp"

#include "slcurv/symmat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace slcurv {

Grid::Grid(DomainSpec dom, int ns, int nalpha) : dom_(std::move(dom)), ns_(ns), nalpha_(nalpha)
{
    dom_.validate();
    if (ns < 8) {
        throw DomainError("grid: Ns must be at least 8");
    }
    if (nalpha < 16 || nalpha % 2 != 0) {
        throw DomainError("grid: Nalpha must be even and at least 16");
    }
    dsigma_ = 1.0 / (ns + 0.5);
    dalpha_ = 2.0 * std::numbers::pi / nalpha;
    radius_.resize(static_cast<std::size_t>(nalpha));
    for (int k = 0; k < nalpha; ++k) {
        radius_[static_cast<std::size_t>(k)] = dom_.radius(k * dalpha_);
    }
    rho_min_ = std::min(dom_.min_radius(), *std::min_element(radius_.begin(), radius_.end()));
    rho_max_ = std::max(dom_.max_radius(), *std::max_element(radius_.begin(), radius_.end()));
    if (dsigma_ * rho_max_ > rho_min_ / 8.0) {
        throw DomainError("grid: radial spacing exceeds rho_min/8; increase Ns");
    }
}

std::size_t Grid::resolve(int j, int k) const
{
    if (j == -1) {
        return index(0, k + nalpha_ / 2);
    }
    if (j < -1 || j > ns_) {
        throw DomainError("grid: ring index " + std::to_string(j) + " out of range");
    }
    return index(j, k);
}

bool Grid::same_lattice(const Grid& other) const
{
    return ns_ == other.ns_ && nalpha_ == other.nalpha_ && radius_ == other.radius_;
}

GraphFn::GraphFn(Grid grid) : grid_(std::move(grid)), values_(grid_.node_count(), 0.0) {}

GraphFn::GraphFn(Grid grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values))
{
    if (values_.size() != grid_.node_count()) {
        throw DomainError("GraphFn: value count does not match the grid");
    }
}

GraphFn GraphFn::sample(const Grid& grid, const std::function<double(double, double)>& g)
{
    GraphFn f(grid);
    for (int j = 0; j <= grid.ns(); ++j) {
        for (int k = 0; k < grid.nalpha(); ++k) {
            f.at(j, k) = g(grid.s(j, k), grid.alpha(k));
        }
    }
    return f;
}

bool GraphFn::is_dirichlet() const
{
    for (int k = 0; k < grid_.nalpha(); ++k) {
        if (at(grid_.ns(), k) != 0.0) {
            return false;
        }
    }
    return true;
}

double GraphFn::max_abs() const
{
    double m = 0.0;
    for (double v : values_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

void GraphFn::validate(double f_max, double tol) const
{
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double v = values_[i];
        if (!std::isfinite(v) || v < -tol || v > f_max) {
            throw DomainError("graph function value out of range at node " + std::to_string(i));
        }
    }
    if (!is_dirichlet()) {
        throw DomainError("graph function does not vanish on the boundary");
    }
}

GraphFn umbilic_cap(double lambda, const Grid& grid)
{
    if (grid.domain().kind != DomainKind::disk) {
        throw DomainError("umbilic_cap: closed-form caps exist only over disk domains");
    }
    const UmbilicCap cap(lambda, grid.domain().rho);
    GraphFn f = GraphFn::sample(grid, [&](double s, double) { return cap.height(s); });
    for (int k = 0; k < grid.nalpha(); ++k) {
        f.at(grid.ns(), k) = 0.0;
    }
    return f;
}

}  // namespace slcurv
