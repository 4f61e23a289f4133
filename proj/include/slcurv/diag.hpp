#pragma once

#include "slcurv/graph.hpp"
#include "slcurv/slcalc.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace slcurv {

/// sup{m : SL_r(λ₁,…,λ_{n−1}, m) < θ} = r·tan(θ − Σ arctan(λᵢ/r)), or +∞
/// when θ − Σ arctan(λᵢ/r) ≥ π/2. Throws DomainError unless every λᵢ > 0,
/// r > 0 and (n−1)π/2 ≤ θ < nπ/2 with n = lams.size() + 1.
double mu_boundary(std::span<const double> lams, double r, double theta);

/// F(x, y; r) = r²xy(x³ + y³ − x²y − y²x) / (2(1 + x²)(1 + y²)).
double f_threshold(double x, double y, double r);

struct Witness {
    int j = 0;
    int k = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  ///< rhs − lhs
};

struct Verdict {
    bool pass = true;
    std::size_t checked = 0;
    std::vector<Witness> witnesses;  ///< worst 10, smallest slack first

    /// Sorts candidates, keeps the worst 10 and sets pass ⟺ every slack ≥ −tol.
    static Verdict from(std::vector<Witness> all, double tol);
};

/// Discrete geometric maximum principle. Requires f_in ≤ f_out + tol at every
/// node (throws DomainError otherwise). Wherever f_out − f_in ≤ 2h² at an
/// interior node the inner graph must be at least as curved as the outer one:
/// r̂_θ(A_out) ≤ r̂_θ(A_in) + tol. Inadmissible nodes count as r̂ = 0.
/// Passes vacuously without near-tangency nodes.
Verdict max_principle_check(const GraphFn& f_in, const GraphFn& f_out, const CurvatureQuery& q, double tol,
                            int workers = 1);

struct ProbeResult {
    Verdict verdict;
    int j = 0;  ///< node of maximal H (last interior ring excluded)
    int k = 0;
    double h_max = 0.0;
    double delta_b_h = 0.0;
    double f_sum = 0.0;            ///< Σ_{i<j} F(λᵢ, λⱼ; r) at that node
    std::vector<double> h;         ///< H = Tr A per interior node
    std::vector<double> delta_bh;  ///< Δ^B H per interior node
};

/// Δ^B H at the interior maximum of the mean curvature H; passes when
/// Δ^B H ≤ tol there. H on the boundary ring is extrapolated linearly from
/// the two rings inside. Throws DomainError at inadmissible nodes.
ProbeResult subharmonic_probe(const GraphFn& f, const CurvatureQuery& q, double tol, int workers = 1);

}  // namespace slcurv
