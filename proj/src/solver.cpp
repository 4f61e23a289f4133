#include "slcurv/solver.hpp"

#include "shape_kernel.hpp"
#include "slcurv/parallel.hpp"
#include "slcurv/shape.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

namespace slcurv {

namespace {

constexpr double kBoundaryAngleShift = 1e-3;

double norm_l2(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    return std::sqrt(s);
}

double norm_inf(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

double min_of(const std::vector<double>& v)
{
    double m = std::numeric_limits<double>::infinity();
    for (double x : v) {
        m = std::min(m, x);
    }
    return m;
}

bool admissible(const ResidualField& r)
{
    for (std::size_t i = 0; i < r.residual.size(); ++i) {
        if (!std::isfinite(r.residual[i]) || !(r.lambda_min[i] > kAdmissibleEps)) {
            return false;
        }
    }
    return true;
}

// Residual evaluation that reports failure instead of throwing: a trial step
// may produce a non-graph configuration.
std::optional<ResidualField> try_residual(const GraphFn& f, const CurvatureQuery& q, int workers)
{
    try {
        return residual_field(f, q, workers);
    } catch (const NumericError&) {
        return std::nullopt;
    }
}

bool is_boundary_angle(const CurvatureQuery& q)
{
    return std::abs(q.theta - (q.n - 1) * std::numbers::pi / 2.0) <= 1e-12;
}

}  // namespace

void SolveConfig::validate(double rhat_target) const
{
    if (!(tol > 0.0) || max_newton < 1 || !(fd_rel > 0.0) || workers < 1 || domain_steps < 1) {
        throw DomainError("solve config: tolerances, iteration caps and worker count must be positive");
    }
    if (!(armijo.c > 0.0 && armijo.c < 0.5) || !(armijo.backtrack > 0.0 && armijo.backtrack < 1.0) ||
        !(armijo.min_step > 0.0 && armijo.min_step <= 1.0)) {
        throw DomainError("solve config: invalid Armijo parameters");
    }
    if (homotopy.steps < 0) {
        throw DomainError("solve config: homotopy steps must be non-negative");
    }
    if (!(homotopy.rhat_start > 0.0) || !(homotopy.rhat_start <= rhat_target) || !(rhat_target <= 1.0)) {
        throw DomainError("solve config: need 0 < rhat_start <= rhat_target <= 1");
    }
}

std::vector<double> homotopy_levels(const HomotopyParams& h, double rhat_target)
{
    std::vector<double> out{h.rhat_start};
    if (rhat_target == h.rhat_start || h.steps == 0) {
        if (rhat_target != h.rhat_start) {
            out.push_back(rhat_target);
        }
        return out;
    }
    for (int i = 1; i <= h.steps; ++i) {
        const double t = static_cast<double>(i) / h.steps;
        double v = h.schedule == Schedule::linear ? h.rhat_start + (rhat_target - h.rhat_start) * t
                                                  : h.rhat_start * std::pow(rhat_target / h.rhat_start, t);
        out.push_back(i == h.steps ? rhat_target : v);
    }
    return out;
}

Coloring Coloring::build(const Grid& grid)
{
    const std::size_t n = grid.interior_count();
    Coloring c;
    c.rows_of.assign(n, {});
    std::vector<std::vector<std::size_t>> reads(n);
    for (int j = 0; j < grid.ns(); ++j) {
        for (int k = 0; k < grid.nalpha(); ++k) {
            const std::size_t row = grid.index(j, k);
            for (std::size_t col : stencil(grid, j, k)) {
                if (col < n) {
                    reads[row].push_back(col);
                    c.rows_of[col].push_back(row);
                }
            }
        }
    }

    std::vector<int> color(n, -1);
    std::vector<int> mark;
    for (std::size_t col = 0; col < n; ++col) {
        // colours already used by columns sharing a row with `col`
        std::vector<char> used(mark.size() + 1, 0);
        for (std::size_t row : c.rows_of[col]) {
            for (std::size_t other : reads[row]) {
                if (color[other] >= 0) {
                    used[static_cast<std::size_t>(color[other])] = 1;
                }
            }
        }
        int pick = 0;
        while (used[static_cast<std::size_t>(pick)]) {
            ++pick;
        }
        color[col] = pick;
        if (static_cast<std::size_t>(pick) >= mark.size()) {
            mark.resize(static_cast<std::size_t>(pick) + 1);
            c.groups.resize(static_cast<std::size_t>(pick) + 1);
        }
        c.groups[static_cast<std::size_t>(pick)].push_back(col);
    }
    return c;
}

namespace {

Eigen::SparseMatrix<double> analytic_jacobian(const GraphFn& f, const CurvatureQuery& q, int workers)
{
    using D = detail::Dual<9>;
    const Grid& grid = f.grid();
    const std::size_t n = grid.interior_count();
    std::vector<std::array<double, 9>> rows(n);
    std::vector<std::array<std::size_t, 9>> cols(n);
    parallel_for(n, workers, [&](std::size_t i) {
        const int j = static_cast<int>(i) / grid.nalpha();
        const int k = static_cast<int>(i) % grid.nalpha();
        const auto st = detail::gather_stencil(grid, j, k);
        std::array<D, 9> h;
        for (std::size_t m = 0; m < 9; ++m) {
            h[m] = D::variable(f.values()[st.node[m]], static_cast<int>(m));
        }
        const auto a = detail::slice_shape(detail::geometry(st, h));
        const D res = detail::sl_residual(a, q.n, q.r, q.theta);
        rows[i] = res.d;
        cols[i] = st.node;
    });

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(n * 9);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t m = 0; m < 9; ++m) {
            if (cols[i][m] < n) {
                triplets.emplace_back(static_cast<int>(i), static_cast<int>(cols[i][m]), rows[i][m]);
            }
        }
    }
    Eigen::SparseMatrix<double> jac(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    jac.setFromTriplets(triplets.begin(), triplets.end());
    return jac;
}

}  // namespace

Eigen::SparseMatrix<double> jacobian(const GraphFn& f, const CurvatureQuery& q, const SolveConfig& cfg,
                                     JacobianMethod method)
{
    const Grid& grid = f.grid();
    const std::size_t n = grid.interior_count();
    const ResidualField base = residual_field(f, q, cfg.workers);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(base.lambda_min[i] > kAdmissibleEps)) {
            throw DomainError("jacobian: inadmissible node " + std::to_string(i));
        }
    }
    if (method == JacobianMethod::analytic) {
        return analytic_jacobian(f, q, cfg.workers);
    }

    const double h = cfg.fd_step(f);
    const Coloring coloring = Coloring::build(grid);
    std::vector<std::vector<std::size_t>> groups;
    if (method == JacobianMethod::colored_fd) {
        groups = coloring.groups;
    } else {
        groups.reserve(n);
        for (std::size_t col = 0; col < n; ++col) {
            groups.push_back({col});
        }
    }

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(n * 9);
    GraphFn work = f;
    for (const auto& group : groups) {
        for (std::size_t col : group) {
            work.values()[col] += h;
        }
        const ResidualField pert = residual_field(work, q, cfg.workers);
        for (std::size_t col : group) {
            for (std::size_t row : coloring.rows_of[col]) {
                triplets.emplace_back(static_cast<int>(row), static_cast<int>(col),
                                      (pert.residual[row] - base.residual[row]) / h);
            }
            work.values()[col] = f.values()[col];
        }
    }
    Eigen::SparseMatrix<double> jac(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    jac.setFromTriplets(triplets.begin(), triplets.end());
    return jac;
}

std::string to_string(NewtonStatus s)
{
    switch (s) {
    case NewtonStatus::converged:
        return "converged";
    case NewtonStatus::max_iterations:
        return "max_iterations";
    case NewtonStatus::line_search_stall:
        return "line_search_stall";
    case NewtonStatus::singular_jacobian:
        return "singular_jacobian";
    case NewtonStatus::inadmissible:
        return "inadmissible";
    }
    return "unknown";
}

NewtonResult newton_solve(GraphFn f0, const CurvatureQuery& q, const SolveConfig& cfg)
{
    NewtonResult out{std::move(f0), {}};
    GraphFn& f = out.f;
    NewtonStats& st = out.stats;
    const std::size_t n = f.grid().interior_count();

    auto current = try_residual(f, q, cfg.workers);
    if (!current || !admissible(*current)) {
        st.status = NewtonStatus::inadmissible;
        st.message = "initial guess is not strictly convex at every interior node";
        st.min_lambda1 = current ? min_of(current->lambda_min) : std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    double l2 = norm_l2(current->residual);
    st.residual_l2.push_back(l2);
    st.residual_inf.push_back(norm_inf(current->residual));
    st.min_lambda1 = min_of(current->lambda_min);

    for (int it = 0;; ++it) {
        if (st.residual_inf.back() <= cfg.tol) {
            st.status = NewtonStatus::converged;
            return out;
        }
        if (it >= cfg.max_newton) {
            st.status = NewtonStatus::max_iterations;
            st.message = "Newton iteration cap reached";
            return out;
        }

        const Eigen::SparseMatrix<double> jac = jacobian(f, q, cfg, JacobianMethod::analytic);
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(jac);
        if (lu.info() != Eigen::Success) {
            st.status = NewtonStatus::singular_jacobian;
            st.message = "sparse LU failed: " + lu.lastErrorMessage();
            return out;
        }
        Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            rhs[static_cast<Eigen::Index>(i)] = -current->residual[i];
        }
        const Eigen::VectorXd step = lu.solve(rhs);
        if (lu.info() != Eigen::Success || !step.allFinite()) {
            st.status = NewtonStatus::singular_jacobian;
            st.message = "Newton step is not finite";
            return out;
        }
        const double backward = (jac * step - rhs).norm() / std::max(rhs.norm(), 1e-300);
        if (backward > 1e-8) {
            st.status = NewtonStatus::singular_jacobian;
            st.message = "sparse LU solve is inaccurate (relative residual " + std::to_string(backward) + ")";
            return out;
        }

        double t = 1.0;
        bool accepted = false;
        while (t >= cfg.armijo.min_step) {
            GraphFn trial = f;
            for (std::size_t i = 0; i < n; ++i) {
                trial.values()[i] += t * step[static_cast<Eigen::Index>(i)];
            }
            auto res = try_residual(trial, q, cfg.workers);
            if (res && admissible(*res)) {
                const double trial_l2 = norm_l2(res->residual);
                if (trial_l2 * trial_l2 <= (1.0 - 2.0 * cfg.armijo.c * t) * l2 * l2) {
                    f = std::move(trial);
                    current = std::move(res);
                    l2 = trial_l2;
                    accepted = true;
                    break;
                }
            }
            t *= cfg.armijo.backtrack;
        }
        if (!accepted) {
            st.status = NewtonStatus::line_search_stall;
            st.message = "line search fell below the minimum step";
            return out;
        }
        ++st.iterations;
        st.residual_l2.push_back(l2);
        st.residual_inf.push_back(norm_inf(current->residual));
        st.min_lambda1 = min_of(current->lambda_min);
    }
}

double ordering_slack(const GraphFn& lo, const GraphFn& hi)
{
    if (!lo.grid().same_lattice(hi.grid())) {
        throw DomainError("ordering_slack: grids differ");
    }
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lo.grid().interior_count(); ++i) {
        m = std::min(m, hi.values()[i] - lo.values()[i]);
    }
    return m;
}

namespace {

LevelRecord record_level(double rhat, const NewtonResult& r)
{
    LevelRecord rec;
    rec.rhat = rhat;
    rec.iters = r.stats.iterations;
    rec.res = r.stats.residual_l2;
    rec.res_inf = r.stats.residual_inf;
    rec.min_lambda1 = r.stats.min_lambda1;
    rec.max_f = r.f.max_abs();
    rec.status = to_string(r.stats.status);
    return rec;
}

GraphFn initial_cap(const Grid& grid, double rhat)
{
    return umbilic_cap(rhat, grid);
}

}  // namespace

ContinuityResult continuity_solve(const DomainSpec& dom, int ns, int nalpha, const CurvatureQuery& target,
                                  const SolveConfig& cfg)
{
    const auto t0 = std::chrono::steady_clock::now();
    target.validate(true);
    if (!(target.theta < target.n * std::numbers::pi / 2.0)) {
        throw DomainError("continuity_solve: angle out of range");
    }
    cfg.validate(target.rhat);

    const Grid grid(dom, ns, nalpha);
    const bool boundary = is_boundary_angle(target);
    const double theta_path = boundary ? target.theta + kBoundaryAngleShift : target.theta;
    const double rhat0 = cfg.homotopy.rhat_start;

    ContinuityResult out{GraphFn(grid), {}, {}};
    SolveReport& rep = out.report;
    rep.domain = dom.describe();
    rep.ns = ns;
    rep.nalpha = nalpha;
    rep.n = target.n;
    rep.theta = target.theta;
    rep.theta_solve = theta_path;

    auto finish = [&](bool ok, std::string failure) {
        rep.converged = ok;
        rep.failure = std::move(failure);
        rep.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return out;
    };

    const auto q_start = CurvatureQuery::from_rhat(target.n, theta_path, rhat0);
    GraphFn current(grid);
    if (dom.kind == DomainKind::disk) {
        current = initial_cap(grid, rhat0);
    } else {
        // The exact cap over the mean disk, pushed onto the star by scaling the
        // Fourier amplitudes from 0 to 1 with a Newton solve per step.
        GraphFn warm = initial_cap(Grid(DomainSpec::disk(dom.rho), ns, nalpha), rhat0);
        for (int m = 1; m <= cfg.domain_steps; ++m) {
            auto modes = dom.fourier;
            for (auto& [k, a] : modes) {
                a *= static_cast<double>(m) / cfg.domain_steps;
            }
            const Grid g(DomainSpec::star(dom.rho, modes), ns, nalpha);
            auto r = newton_solve(GraphFn(g, warm.values()), q_start, cfg);
            rep.prelude.push_back(record_level(rhat0, r));
            if (!r.stats.converged()) {
                out.f = std::move(r.f);
                return finish(false, "domain deformation step " + std::to_string(m) + ": " + r.stats.message);
            }
            warm = std::move(r.f);
        }
        current = GraphFn(grid, warm.values());
    }

    std::optional<GraphFn> previous;
    for (double rhat : homotopy_levels(cfg.homotopy, target.rhat)) {
        const auto q = CurvatureQuery::from_rhat(target.n, theta_path, rhat);
        auto r = newton_solve(std::move(current), q, cfg);
        LevelRecord rec = record_level(rhat, r);
        if (previous) {
            rec.ordering_slack = ordering_slack(*previous, r.f);
            rec.ordering_ok = rec.ordering_slack >= -1e-10;
        }
        rep.levels.push_back(rec);
        if (!r.stats.converged()) {
            out.f = std::move(r.f);
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.6g", rhat);
            return finish(false, "level rhat=" + std::string(buf) + ": " + r.stats.message);
        }
        if (cfg.keep_levels) {
            out.level_solutions.push_back(r.f);
        }
        previous = r.f;
        current = std::move(r.f);
    }

    if (boundary) {
        auto r = newton_solve(std::move(current), target, cfg);
        rep.polish = record_level(target.rhat, r);
        out.f = std::move(r.f);
        if (!r.stats.converged()) {
            return finish(false, "boundary-angle polish: " + r.stats.message);
        }
    } else {
        out.f = std::move(current);
    }
    return finish(true, "");
}

}  // namespace slcurv
