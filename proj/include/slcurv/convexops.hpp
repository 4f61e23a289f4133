#pragma once

#include "slcurv/graph.hpp"
#include "slcurv/slcalc.hpp"

#include <optional>
#include <vector>

namespace slcurv {

/// Nodewise minimum of two graph functions on the same lattice.
/// Throws DomainError on a lattice mismatch.
GraphFn min_combine(const GraphFn& f1, const GraphFn& f2);

/// Smooth bump ψ: 1 on [0, ½], 0 on [1, ∞), C^∞ in between.
double bump(double t);

struct MollifyConfig {
    double eps = 0.1;   ///< kernel radius, base geodesic length
    double band = 0.0;  ///< width over which the radius shrinks to 0 at ∂Ω; 0 picks 0.5·ρ_min
    int workers = 1;
};

/// Kernel average ∫ψ(d(p,q)/ε) f(q) dA(q) / ∫ψ dA over the base plane with
/// its hyperbolic area element. The integral is taken with a fixed rule in
/// geodesic polar coordinates about each node (16 radial × 48 angular
/// points) and f is read by bilinear interpolation on the lattice, so the
/// weights stay positive. Near ∂Ω the radius is scaled by a smooth step in
/// the radial distance to the boundary and never exceeds that distance; the
/// boundary ring is left untouched.
/// Throws DomainError when eps < 2h.
GraphFn mollify(const GraphFn& f, const MollifyConfig& cfg);

/// Effective kernel radius at interior node (j, k).
double mollify_radius(const Grid& grid, const MollifyConfig& cfg, int j, int k);

/// Normalized kernel mass at an interior node (1 up to rounding).
double mollify_mass(const Grid& grid, const MollifyConfig& cfg, int j, int k);

/// min of r̂_θ(A) over admissible interior nodes (optionally restricted to
/// mask[i] != 0); 0 when no node qualifies.
double weak_curvature_lb(const GraphFn& f, const CurvatureQuery& q, const std::vector<char>* mask = nullptr,
                         int workers = 1);

/// Interior mask that drops every node within `cells` lattice steps of a
/// sign change of f1 − f2 (the crease of min_combine).
std::vector<char> crease_mask(const GraphFn& f1, const GraphFn& f2, int cells = 2);

}  // namespace slcurv
