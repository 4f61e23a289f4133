#include "slcurv/graph.hpp"
#include "slcurv/shape.hpp"
#include "slcurv/solver.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace slcurv;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

double sup_diff(const GraphFn& a, const GraphFn& b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) {
        d = std::max(d, std::abs(a.values()[i] - b.values()[i]));
    }
    return d;
}

double max_abs_diff(const Eigen::SparseMatrix<double>& a, const Eigen::SparseMatrix<double>& b)
{
    const Eigen::MatrixXd d = Eigen::MatrixXd(a) - Eigen::MatrixXd(b);
    return d.cwiseAbs().maxCoeff();
}

/// A non-umbilic admissible test graph on a disk.
GraphFn wobbly(const Grid& g)
{
    auto f = umbilic_cap(0.5, g);
    for (int j = 0; j < g.ns(); ++j) {
        for (int k = 0; k < g.nalpha(); ++k) {
            const double s = g.s(j, k);
            f.at(j, k) *= 1.0 + 0.05 * s * s * std::cos(2.0 * g.alpha(k));
        }
    }
    return f;
}

}  // namespace

TEST_SUITE("solver")
{
    TEST_CASE("config validation")
    {
        SolveConfig c;
        CHECK_NOTHROW(c.validate(0.6));
        CHECK_THROWS_AS(c.validate(0.0), DomainError);
        CHECK_THROWS_AS(c.validate(1.2), DomainError);
        CHECK_THROWS_AS(c.validate(0.01), DomainError);
        auto bad = c;
        bad.tol = 0.0;
        CHECK_THROWS_AS(bad.validate(0.6), DomainError);
        bad = c;
        bad.armijo.backtrack = 1.0;
        CHECK_THROWS_AS(bad.validate(0.6), DomainError);
        bad = c;
        bad.workers = 0;
        CHECK_THROWS_AS(bad.validate(0.6), DomainError);
    }

    TEST_CASE("homotopy levels")
    {
        HomotopyParams h;
        const auto lin = homotopy_levels(h, 0.65);
        REQUIRE(lin.size() == 13);
        CHECK(lin.front() == 0.05);
        CHECK(lin.back() == 0.65);
        CHECK(lin[1] == Approx(0.1));
        h.schedule = Schedule::geometric;
        const auto geo = homotopy_levels(h, 0.8);
        CHECK(geo.back() == 0.8);
        CHECK(geo[1] / geo[0] == Approx(geo[2] / geo[1]));
        CHECK(homotopy_levels(HomotopyParams{0.3, 12, Schedule::linear}, 0.3).size() == 1);
    }

    TEST_CASE("colouring is distance-2 and deterministic")
    {
        const Grid g(DomainSpec::disk(1.0), 8, 16);
        const auto c = Coloring::build(g);
        std::vector<int> colour(g.interior_count(), -1);
        for (std::size_t ci = 0; ci < c.groups.size(); ++ci) {
            for (auto col : c.groups[ci]) {
                CHECK(colour[col] == -1);
                colour[col] = static_cast<int>(ci);
            }
        }
        CHECK(std::count(colour.begin(), colour.end(), -1) == 0);
        for (std::size_t ci = 0; ci < c.groups.size(); ++ci) {
            std::vector<int> hit(g.interior_count(), 0);
            for (auto col : c.groups[ci]) {
                for (auto row : c.rows_of[col]) {
                    CHECK(hit[row]++ == 0);
                }
            }
        }
        CHECK(Coloring::build(g).groups == c.groups);
    }

    TEST_CASE("coloured and plain FD Jacobians agree")
    {
        const Grid g(DomainSpec::disk(1.0), 8, 16);
        const auto q = CurvatureQuery::from_rhat(2, kPi / 2.0, 0.5);
        const auto f = wobbly(g);
        const SolveConfig cfg;
        const auto jc = jacobian(f, q, cfg, JacobianMethod::colored_fd);
        const auto jp = jacobian(f, q, cfg, JacobianMethod::plain_fd);
        CHECK(max_abs_diff(jc, jp) <= 1e-12);
    }

    TEST_CASE("analytic Jacobian matches central differences")
    {
        // forward differences carry an O(step·J²) truncation error near the
        // pole, so the reference here is a central-difference assembly
        const Grid g(DomainSpec::disk(1.0), 8, 16);
        const auto q = CurvatureQuery::from_rhat(2, 2.0, 0.5);
        const auto f = wobbly(g);
        const Eigen::MatrixXd da(jacobian(f, q, SolveConfig{}, JacobianMethod::analytic));
        const double step = 1e-7;
        const auto n = static_cast<Eigen::Index>(g.interior_count());
        Eigen::MatrixXd dc(n, n);
        for (Eigen::Index c = 0; c < n; ++c) {
            auto up = f;
            auto dn = f;
            up.values()[static_cast<std::size_t>(c)] += step;
            dn.values()[static_cast<std::size_t>(c)] -= step;
            const auto rp = residual_field(up, q).residual;
            const auto rm = residual_field(dn, q).residual;
            for (Eigen::Index r = 0; r < n; ++r) {
                dc(r, c) = (rp[static_cast<std::size_t>(r)] - rm[static_cast<std::size_t>(r)]) / (2.0 * step);
            }
        }
        CHECK((da - dc).cwiseAbs().maxCoeff() <= 1e-6 * da.cwiseAbs().maxCoeff());
        // forward differences agree away from the pole rings
        const Eigen::MatrixXd df(jacobian(f, q, SolveConfig{}, JacobianMethod::plain_fd));
        const auto outer = 3 * g.nalpha();
        CHECK((da - df).bottomRows(n - outer).cwiseAbs().maxCoeff() <= 1e-3 * da.cwiseAbs().maxCoeff());
    }

    TEST_CASE("Jacobian footprint lies in the stencil")
    {
        const Grid g(DomainSpec::disk(1.0), 8, 16);
        const auto q = CurvatureQuery::from_rhat(2, kPi / 2.0, 0.5);
        const auto j = jacobian(wobbly(g), q, SolveConfig{});
        for (int col = 0; col < j.outerSize(); ++col) {
            for (Eigen::SparseMatrix<double>::InnerIterator it(j, col); it; ++it) {
                const int row = static_cast<int>(it.row());
                const auto st = stencil(g, row / g.nalpha(), row % g.nalpha());
                CHECK(std::find(st.begin(), st.end(), static_cast<std::size_t>(col)) != st.end());
            }
        }
    }

    TEST_CASE("directional derivative along a uniform lift")
    {
        const Grid g(DomainSpec::disk(1.0), 16, 32);
        const auto q = CurvatureQuery::from_rhat(2, kPi / 2.0, 0.6);
        const auto f = umbilic_cap(0.6, g);
        const auto j = jacobian(f, q, SolveConfig{});
        const Eigen::VectorXd jv = j * Eigen::VectorXd::Ones(static_cast<Eigen::Index>(g.interior_count()));
        const double eps = 1e-6;
        auto up = f;
        auto dn = f;
        for (std::size_t i = 0; i < g.interior_count(); ++i) {
            up.values()[i] += eps;
            dn.values()[i] -= eps;
        }
        const auto rp = residual_field(up, q).residual;
        const auto rm = residual_field(dn, q).residual;
        for (std::size_t i = 0; i < rp.size(); ++i) {
            const double fd = (rp[i] - rm[i]) / (2.0 * eps);
            CHECK(jv[static_cast<Eigen::Index>(i)] == Approx(fd).epsilon(1e-4).scale(1.0));
        }
    }

    TEST_CASE("Jacobian rejects inadmissible data")
    {
        const Grid g(DomainSpec::disk(1.0), 8, 16);
        const auto q = CurvatureQuery::from_rhat(2, kPi / 2.0, 0.5);
        CHECK_THROWS_AS(jacobian(GraphFn(g), q, SolveConfig{}), DomainError);
    }

    TEST_CASE("Newton from the exact cap stops at once")
    {
        const Grid g(DomainSpec::disk(1.0), 32, 64);
        const auto q = CurvatureQuery::from_rhat(2, kPi / 2.0, 0.6);
        const auto r = newton_solve(umbilic_cap(0.6, g), q, SolveConfig{});
        CHECK(r.stats.converged());
        CHECK(r.stats.iterations <= 2);
        CHECK(r.stats.residual_inf.back() <= 1e-8);
    }

    TEST_CASE("Newton from cap(0.65) to 0.6 on 64x128")
    {
        const Grid g(DomainSpec::disk(1.0), 64, 128);
        const auto q = CurvatureQuery::from_rhat(2, kPi / 2.0, 0.6);
        const auto r = newton_solve(umbilic_cap(0.65, g), q, SolveConfig{});
        CHECK(r.stats.converged());
        CHECK(r.stats.iterations <= 10);
        CHECK(r.stats.residual_inf.back() <= 1e-8);
        for (std::size_t i = 1; i < r.stats.residual_l2.size(); ++i) {
            CHECK(r.stats.residual_l2[i] < r.stats.residual_l2[i - 1]);
        }
        CHECK(sup_diff(r.f, umbilic_cap(0.6, g)) < 1e-3);
    }

    TEST_CASE("a convexity-breaking start never produces NaN")
    {
        const Grid g(DomainSpec::disk(1.0), 16, 32);
        const auto q = CurvatureQuery::from_rhat(2, kPi / 2.0, 0.6);
        auto f0 = umbilic_cap(0.6, g);
        for (int j = 0; j < g.ns(); ++j) {
            for (int k = 0; k < g.nalpha(); ++k) {
                const double d = g.s(j, k) - 0.4;
                f0.at(j, k) -= 0.2 * std::exp(-d * d / 0.01);
            }
        }
        NewtonResult r{GraphFn(g), {}};
        CHECK_NOTHROW(r = newton_solve(f0, q, SolveConfig{}));
        if (r.stats.converged()) {
            CHECK(sup_diff(r.f, umbilic_cap(0.6, g)) < 1e-2);
        } else {
            CHECK(r.stats.status == NewtonStatus::inadmissible);
        }
        for (double v : r.f.values()) {
            CHECK(std::isfinite(v));
        }
    }

    TEST_CASE("rhat_start equal to the target is a fixed point")
    {
        SolveConfig cfg;
        cfg.homotopy.rhat_start = 0.05;
        const auto q = CurvatureQuery::from_rhat(2, 2.0, 0.05);
        const auto r = continuity_solve(DomainSpec::disk(1.0), 16, 32, q, cfg);
        CHECK(r.report.converged);
        CHECK(r.report.levels.size() == 1);
        // the only level is the Newton polish of the exact cap
        const auto direct = newton_solve(umbilic_cap(0.05, r.f.grid()), q, cfg);
        CHECK(r.f.values() == direct.f.values());
        CHECK(r.report.levels[0].iters <= 2);
        CHECK(r.report.levels[0].res_inf.back() <= cfg.tol);
        const double h = r.f.grid().h();
        CHECK(sup_diff(r.f, umbilic_cap(0.05, r.f.grid())) <= h * h);
    }

    TEST_CASE("continuity on a disk tracks the cap and stays ordered")
    {
        SolveConfig cfg;
        cfg.keep_levels = true;
        const auto q = CurvatureQuery::from_rhat(2, 2.0, 0.5);
        const auto r = continuity_solve(DomainSpec::disk(1.0), 16, 32, q, cfg);
        REQUIRE(r.report.converged);
        CHECK(r.report.levels.size() == 13);
        CHECK(r.level_solutions.size() == 13);
        for (const auto& lv : r.report.levels) {
            CHECK(lv.ordering_ok);
            CHECK(lv.ordering_slack >= -1e-10);
            CHECK(lv.min_lambda1 > 0.0);
        }
        CHECK(sup_diff(r.f, umbilic_cap(0.5, r.f.grid())) < 1e-2);
    }

    TEST_CASE("boundary angle is solved nearby and polished")
    {
        SolveConfig cfg;
        cfg.homotopy.steps = 4;
        const auto q = CurvatureQuery::from_rhat(2, kPi / 2.0, 0.4);
        const auto r = continuity_solve(DomainSpec::disk(1.0), 16, 32, q, cfg);
        CHECK(r.report.converged);
        CHECK(r.report.theta_solve == Approx(kPi / 2.0 + 1e-3));
        REQUIRE(r.report.polish.has_value());
        CHECK(r.report.polish->status == "converged");
    }

    TEST_CASE("star solution is sandwiched by inscribed and circumscribed caps")
    {
        const auto dom = DomainSpec::parse("star:1:2=0.1");
        const auto q = CurvatureQuery::from_rhat(2, kPi / 2.0, 0.5);
        const auto r = continuity_solve(dom, 32, 64, q, SolveConfig{});
        REQUIRE(r.report.converged);
        CHECK(!r.report.prelude.empty());
        const auto& g = r.f.grid();
        const UmbilicCap insc(0.5, dom.min_radius());
        const UmbilicCap circ(0.5, dom.max_radius());
        const double band = 2.0 * g.h() * g.h();
        for (int j = 0; j <= g.ns(); ++j) {
            for (int k = 0; k < g.nalpha(); ++k) {
                const double s = g.s(j, k);
                const double f = r.f.at(j, k);
                if (s <= insc.rho) {
                    CHECK(insc.height(s) <= f + band);
                }
                CHECK(f <= circ.height(s) + band);
            }
        }
    }

    TEST_CASE("continuity rejects bad targets")
    {
        const SolveConfig cfg;
        CHECK_THROWS_AS(continuity_solve(DomainSpec::disk(1.0), 16, 32, CurvatureQuery::from_rhat(2, kPi / 2.0, 1.5), cfg),
                        DomainError);
        CHECK_THROWS_AS(continuity_solve(DomainSpec::disk(1.0), 16, 32, CurvatureQuery::from_rhat(2, kPi, 0.5), cfg),
                        DomainError);
    }

    TEST_CASE("worker count does not change the result")
    {
        SolveConfig a;
        a.homotopy.steps = 3;
        auto b = a;
        b.workers = 3;
        const auto q = CurvatureQuery::from_rhat(2, 2.0, 0.4);
        const auto ra = continuity_solve(DomainSpec::disk(1.0), 16, 32, q, a);
        const auto rb = continuity_solve(DomainSpec::disk(1.0), 16, 32, q, b);
        CHECK(ra.f.values() == rb.f.values());
    }
}
