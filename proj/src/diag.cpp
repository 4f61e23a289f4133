#include "slcurv/diag.hpp"

#include "slcurv/shape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace slcurv {

double mu_boundary(std::span<const double> lams, double r, double theta)
{
    const int n = static_cast<int>(lams.size()) + 1;
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw DomainError("mu_boundary: r must be positive");
    }
    if (!(theta >= (n - 1) * std::numbers::pi / 2.0 && theta < n * std::numbers::pi / 2.0)) {
        throw DomainError("mu_boundary: theta out of range");
    }
    double sum = 0.0;
    for (double l : lams) {
        if (!(l > 0.0) || !std::isfinite(l)) {
            throw DomainError("mu_boundary: eigenvalues must be positive");
        }
        sum += std::atan(l / r);
    }
    const double arg = theta - sum;
    if (arg >= std::numbers::pi / 2.0) {
        return std::numeric_limits<double>::infinity();
    }
    return r * std::tan(arg);
}

double f_threshold(double x, double y, double r)
{
    const double poly = (x + y) * (x - y) * (x - y);
    return r * r * x * y * poly / (2.0 * (1.0 + x * x) * (1.0 + y * y));
}

Verdict Verdict::from(std::vector<Witness> all, double tol)
{
    Verdict v;
    v.checked = all.size();
    std::stable_sort(all.begin(), all.end(), [](const Witness& a, const Witness& b) { return a.slack < b.slack; });
    v.pass = std::all_of(all.begin(), all.end(), [&](const Witness& w) { return w.slack >= -tol; });
    if (all.size() > 10) {
        all.resize(10);
    }
    v.witnesses = std::move(all);
    return v;
}

Verdict max_principle_check(const GraphFn& f_in, const GraphFn& f_out, const CurvatureQuery& q, double tol,
                            int workers)
{
    const Grid& grid = f_in.grid();
    if (!grid.same_lattice(f_out.grid())) {
        throw DomainError("max_principle_check: graph functions live on different lattices");
    }
    for (int j = 0; j <= grid.ns(); ++j) {
        for (int k = 0; k < grid.nalpha(); ++k) {
            if (f_in.at(j, k) > f_out.at(j, k) + tol) {
                throw DomainError("max_principle_check: ordering violated at node (" + std::to_string(j) + "," +
                                  std::to_string(k) + ")");
            }
        }
    }
    const double band = 2.0 * grid.h() * grid.h();
    std::vector<std::size_t> near;
    for (std::size_t i = 0; i < grid.interior_count(); ++i) {
        if (f_out.values()[i] - f_in.values()[i] <= band) {
            near.push_back(i);
        }
    }
    if (near.empty()) {
        return Verdict::from({}, tol);
    }
    const ShapeField in = shape_field(f_in, q, workers);
    const ShapeField out = shape_field(f_out, q, workers);
    auto rhat = [](const ShapeField& sf, std::size_t i) { return sf.admissible[i] ? sf.rhat_theta[i] : 0.0; };
    std::vector<Witness> all;
    all.reserve(near.size());
    for (std::size_t i : near) {
        Witness w;
        w.j = static_cast<int>(i) / grid.nalpha();
        w.k = static_cast<int>(i) % grid.nalpha();
        w.lhs = rhat(out, i);
        w.rhs = rhat(in, i);
        w.slack = w.rhs - w.lhs;
        all.push_back(w);
    }
    return Verdict::from(std::move(all), tol);
}

ProbeResult subharmonic_probe(const GraphFn& f, const CurvatureQuery& q, double tol, int workers)
{
    const Grid& grid = f.grid();
    if (grid.ns() < 3) {
        throw DomainError("subharmonic_probe: need at least three interior rings");
    }
    const ShapeField sf = shape_field(f, q, workers);
    for (std::size_t i = 0; i < sf.size(); ++i) {
        if (!sf.admissible[i]) {
            throw DomainError("subharmonic_probe: inadmissible node (" + std::to_string(i / grid.nalpha()) + "," +
                              std::to_string(i % grid.nalpha()) + ")");
        }
    }
    std::vector<double> phi(grid.node_count());
    std::copy(sf.mean.begin(), sf.mean.end(), phi.begin());
    for (int k = 0; k < grid.nalpha(); ++k) {
        phi[grid.index(grid.ns(), k)] = 2.0 * sf.mean[grid.index(grid.ns() - 1, k)] - sf.mean[grid.index(grid.ns() - 2, k)];
    }

    ProbeResult out;
    out.h = sf.mean;
    out.delta_bh = delta_b(f, q, phi, workers);
    const std::size_t limit = grid.index(grid.ns() - 1, 0);
    std::size_t best = 0;
    for (std::size_t i = 1; i < limit; ++i) {
        if (sf.mean[i] > sf.mean[best]) {
            best = i;
        }
    }
    out.j = static_cast<int>(best) / grid.nalpha();
    out.k = static_cast<int>(best) % grid.nalpha();
    out.h_max = sf.mean[best];
    out.delta_b_h = out.delta_bh[best];
    const auto& lam = sf.eig[best].eigenvalues();
    for (std::size_t a = 0; a < lam.size(); ++a) {
        for (std::size_t b = a + 1; b < lam.size(); ++b) {
            out.f_sum += f_threshold(lam[a], lam[b], q.r);
        }
    }
    out.verdict = Verdict::from({Witness{out.j, out.k, out.delta_b_h, tol, tol - out.delta_b_h}}, 0.0);
    return out;
}

}  // namespace slcurv
