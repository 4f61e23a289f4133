#include "slcurv/convexops.hpp"

#include "slcurv/parallel.hpp"
#include "slcurv/shape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace slcurv {

namespace {

void require_same_lattice(const GraphFn& a, const GraphFn& b)
{
    if (!a.grid().same_lattice(b.grid())) {
        throw DomainError("graph functions live on different lattices");
    }
}

double ramp(double x)
{
    return x > 0.0 ? std::exp(-1.0 / x) : 0.0;
}

// 0 at x ≤ 0, 1 at x ≥ 1.
double smooth_step(double x)
{
    const double a = ramp(x);
    const double b = ramp(1.0 - x);
    return a / (a + b);
}

double band_width(const Grid& grid, const MollifyConfig& cfg)
{
    return cfg.band > 0.0 ? cfg.band : 0.5 * grid.rho_min();
}

// Bilinear interpolation of f in lattice coordinates (σ, α). Rings below
// σ_0 continue antipodally; beyond the boundary ring the value is held.
double interpolate(const GraphFn& f, double s, double alpha)
{
    const Grid& grid = f.grid();
    const double x = s / grid.domain().radius(alpha) / grid.dsigma() - 0.5;
    const double y = alpha / grid.dalpha();
    const double jf = std::floor(x);
    const double kf = std::floor(y);
    const double tx = x - jf;
    const double ty = y - kf;
    const int j0 = std::min(static_cast<int>(jf), grid.ns());
    const int j1 = std::min(j0 + 1, grid.ns());
    const int k0 = static_cast<int>(kf);
    auto v = [&](int j, int k) { return f.at(j, k); };
    return (1.0 - tx) * ((1.0 - ty) * v(j0, k0) + ty * v(j0, k0 + 1)) + tx * ((1.0 - ty) * v(j1, k0) + ty * v(j1, k0 + 1));
}

// Quadrature rule for ∫ ψ(d/ε) g dA over the geodesic disk of radius ε,
// in geodesic polar coordinates (d, β) about the centre: Gauss–Legendre in d
// on [0, ε/2] and [ε/2, ε], uniform in β.
struct Rule {
    std::vector<double> t;  // d/ε
    std::vector<double> w;  // radial weights for unit ε, bump included
    int angles = 48;
};

const Rule& rule()
{
    static const Rule r = [] {
        // 8-point Gauss–Legendre on [−1, 1].
        const double x[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                             0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
        const double w[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                             0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
        Rule out;
        for (double lo : {0.0, 0.5}) {
            for (int m = 0; m < 8; ++m) {
                const double t = lo + 0.25 * (x[m] + 1.0);
                out.t.push_back(t);
                out.w.push_back(0.25 * w[m] * bump(t));
            }
        }
        return out;
    }();
    return r;
}

// Kernel average of f about interior node (j, k) with radius eps.
double kernel_average(const GraphFn& f, int j, int k, double eps)
{
    const Grid& grid = f.grid();
    const double sp = grid.s(j, k);
    const double ap = grid.alpha(k);
    const Vec4 p = base_point(sp, ap);
    // Orthonormal tangent frame of the base plane at p.
    const Vec4 e1{std::sinh(sp), std::cosh(sp) * std::cos(ap), std::cosh(sp) * std::sin(ap), 0.0};
    const Vec4 e2{0.0, -std::sin(ap), std::cos(ap), 0.0};
    const Rule& r = rule();
    const double db = 2.0 * std::acos(-1.0) / r.angles;
    double sum = 0.0;
    double mass = 0.0;
    for (std::size_t m = 0; m < r.t.size(); ++m) {
        const double d = r.t[m] * eps;
        const double ch = std::cosh(d);
        const double sh = std::sinh(d);
        const double wr = r.w[m] * sh;
        for (int b = 0; b < r.angles; ++b) {
            const double beta = (b + 0.5) * db;
            const double cb = std::cos(beta);
            const double sb = std::sin(beta);
            Vec4 q;
            for (std::size_t c = 0; c < 4; ++c) {
                q[c] = ch * p[c] + sh * (cb * e1[c] + sb * e2[c]);
            }
            const double s = std::acosh(std::max(q[0], 1.0));
            double alpha = std::atan2(q[2], q[1]);
            if (alpha < 0.0) {
                alpha += 2.0 * std::acos(-1.0);
            }
            sum += wr * interpolate(f, s, alpha);
            mass += wr;
        }
    }
    return sum / mass;
}

}  // namespace

GraphFn min_combine(const GraphFn& f1, const GraphFn& f2)
{
    require_same_lattice(f1, f2);
    GraphFn out(f1.grid());
    for (std::size_t i = 0; i < out.values().size(); ++i) {
        out.values()[i] = std::min(f1.values()[i], f2.values()[i]);
    }
    return out;
}

double bump(double t)
{
    return 1.0 - smooth_step(2.0 * t - 1.0);
}

double mollify_radius(const Grid& grid, const MollifyConfig& cfg, int j, int k)
{
    const double dist = grid.boundary_radius(k) - grid.s(j, k);
    return std::min(cfg.eps * smooth_step(dist / band_width(grid, cfg)), dist);
}

double mollify_mass(const Grid& grid, const MollifyConfig& cfg, int j, int k)
{
    const double eps = mollify_radius(grid, cfg, j, k);
    if (eps <= 0.0) {
        return 1.0;
    }
    GraphFn one(grid, std::vector<double>(grid.node_count(), 1.0));
    return kernel_average(one, j, k, eps);
}

GraphFn mollify(const GraphFn& f, const MollifyConfig& cfg)
{
    const Grid& grid = f.grid();
    if (!(cfg.eps >= 2.0 * grid.h())) {
        throw DomainError("mollify: eps must be at least 2h = " + std::to_string(2.0 * grid.h()));
    }
    GraphFn out = f;
    parallel_for(grid.interior_count(), cfg.workers, [&](std::size_t i) {
        const int j = static_cast<int>(i) / grid.nalpha();
        const int k = static_cast<int>(i) % grid.nalpha();
        const double eps = mollify_radius(grid, cfg, j, k);
        if (eps <= 0.0) {
            return;
        }
        out.values()[i] = kernel_average(f, j, k, eps);
    });
    return out;
}

double weak_curvature_lb(const GraphFn& f, const CurvatureQuery& q, const std::vector<char>* mask, int workers)
{
    const ShapeField sf = shape_field(f, q, workers);
    if (mask != nullptr && mask->size() != sf.size()) {
        throw DomainError("weak_curvature_lb: mask must cover the interior nodes");
    }
    double lb = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sf.size(); ++i) {
        if (!sf.admissible[i] || (mask != nullptr && (*mask)[i] == 0)) {
            continue;
        }
        lb = std::min(lb, sf.rhat_theta[i]);
    }
    return std::isfinite(lb) ? lb : 0.0;
}

std::vector<char> crease_mask(const GraphFn& f1, const GraphFn& f2, int cells)
{
    require_same_lattice(f1, f2);
    const Grid& grid = f1.grid();
    auto sign = [&](int j, int k) { return f1.at(j, k) - f2.at(j, k) >= 0.0; };
    std::vector<char> crease(grid.interior_count(), 0);
    for (int j = 0; j < grid.ns(); ++j) {
        for (int k = 0; k < grid.nalpha(); ++k) {
            const bool here = sign(j, k);
            if (sign(j + 1, k) != here || sign(j - 1, k) != here || sign(j, k + 1) != here ||
                sign(j, k - 1) != here) {
                crease[grid.index(j, k)] = 1;
            }
        }
    }
    std::vector<char> keep(grid.interior_count(), 1);
    for (int j = 0; j < grid.ns(); ++j) {
        for (int k = 0; k < grid.nalpha(); ++k) {
            if (!crease[grid.index(j, k)]) {
                continue;
            }
            for (int dj = -cells; dj <= cells; ++dj) {
                for (int dk = -cells; dk <= cells; ++dk) {
                    const int jj = j + dj;
                    if (jj < 0 || jj >= grid.ns()) {
                        continue;
                    }
                    keep[grid.index(jj, k + dk)] = 0;
                }
            }
        }
    }
    return keep;
}

}  // namespace slcurv
