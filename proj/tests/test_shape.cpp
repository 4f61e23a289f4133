#include "slcurv/graph.hpp"
#include "slcurv/shape.hpp"
#include "slcurv/slcalc.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace slcurv;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

GraphFn constant(const Grid& g, double c)
{
    return GraphFn::sample(g, [c](double, double) { return c; });
}

/// max over interior nodes and eigenvalues of |λ − target|
double eig_error(const GraphFn& f, double target, int n = 2)
{
    const auto& g = f.grid();
    double err = 0.0;
    for (int j = 0; j < g.ns(); ++j) {
        for (int k = 0; k < g.nalpha(); ++k) {
            const auto e = eigendecompose(shape_at(f, j, k, n));
            err = std::max({err, std::abs(e.min() - target), std::abs(e.max() - target)});
        }
    }
    return err;
}

double order(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace

TEST_SUITE("shape")
{
    TEST_CASE("totally geodesic slice has A = 0")
    {
        const Grid g(DomainSpec::disk(1.0), 16, 32);
        const GraphFn f(g);
        for (int j = 0; j < g.ns(); ++j) {
            for (int k = 0; k < g.nalpha(); ++k) {
                CHECK(shape_at(f, j, k).norm_inf() <= 1e-12);
            }
        }
    }

    TEST_CASE("constant slice curvature is tanh(1) at order two")
    {
        const double c = eig_error(constant(Grid(DomainSpec::disk(1.0), 32, 64), 1.0), std::tanh(1.0));
        const double f = eig_error(constant(Grid(DomainSpec::disk(1.0), 64, 128), 1.0), std::tanh(1.0));
        CHECK(c < 1e-2);
        CHECK(c / f >= 3.2);
        CHECK(c / f <= 5.0);
    }

    TEST_CASE("orientation: constant slice is positively curved")
    {
        const Grid g(DomainSpec::disk(1.0), 16, 32);
        CHECK(eigendecompose(shape_at(constant(g, 0.5), 3, 5)).min() > 0.0);
        CHECK(eigendecompose(shape_at(umbilic_cap(0.5, g), 3, 5)).min() > 0.0);
    }

    TEST_CASE("cap 0.6 eigenvalues converge at order two")
    {
        double err[2];
        int i = 0;
        for (int ns : {32, 64}) {
            const Grid g(DomainSpec::disk(1.0), ns, 2 * ns);
            err[i++] = eig_error(umbilic_cap(0.6, g), 0.6);
        }
        CHECK(err[1] < 1e-3);
        CHECK(order(err[0], err[1]) >= 1.7);
        CHECK(order(err[0], err[1]) <= 2.3);
    }

    TEST_CASE("shape field on caps and on zero")
    {
        const Grid g(DomainSpec::disk(1.0), 32, 64);
        const auto q = CurvatureQuery::from_rhat(2, kPi / 2.0, 0.6);
        const auto sf = shape_field(umbilic_cap(0.6, g), q);
        CHECK(sf.all_admissible());
        double res = 0.0;
        for (std::size_t i = 0; i < sf.size(); ++i) {
            res = std::max(res, std::abs(sf.residual[i]));
            CHECK(sf.rhat_theta[i] == Approx(0.6).epsilon(1e-2));
            CHECK(sf.mean[i] == Approx(sf.A[i].trace()));
        }
        CHECK(res < 5.0 * g.h() * g.h());

        const auto z = shape_field(GraphFn(g), q);
        for (std::size_t i = 0; i < z.size(); ++i) {
            CHECK(z.residual[i] == Approx(-q.theta));
            CHECK_FALSE(z.admissible[i]);
            CHECK(std::isnan(z.rhat_theta[i]));
        }
        CHECK_FALSE(z.all_admissible());
    }

    TEST_CASE("residual vanishes where r_theta equals r")
    {
        const Grid g(DomainSpec::disk(1.0), 16, 32);
        const auto q = CurvatureQuery::from_rhat(2, 2.0, 0.5);
        const auto sf = shape_field(umbilic_cap(0.5, g), q);
        for (std::size_t i = 0; i < sf.size(); ++i) {
            const double r = r_theta(sf.A[i], q.theta).r;
            CHECK(sl(sf.A[i], r) - q.theta == Approx(0.0).epsilon(1e-12));
            CHECK(sl(sf.A[i], q.r) - q.theta == Approx(sf.residual[i]).epsilon(1e-14));
        }
    }

    TEST_CASE("residual field agrees with shape field and is worker independent")
    {
        const Grid g(DomainSpec::disk(1.0), 16, 32);
        const auto q = CurvatureQuery::from_rhat(2, kPi / 2.0, 0.4);
        const auto f = GraphFn::sample(g, [](double s, double a) { return 0.3 * (1.0 - s * s) * (1.0 + 0.1 * std::cos(a)); });
        const auto sf = shape_field(f, q, 1);
        const auto r1 = residual_field(f, q, 1);
        const auto r4 = residual_field(f, q, 4);
        CHECK(r1.residual == r4.residual);
        CHECK(r1.lambda_min == r4.lambda_min);
        for (std::size_t i = 0; i < sf.size(); ++i) {
            CHECK(r1.residual[i] == Approx(sf.residual[i]).epsilon(1e-14));
        }
    }

    TEST_CASE("frame independence under rotation of the data")
    {
        const Grid g(DomainSpec::disk(1.0), 16, 32);
        const int shift = 5;
        const auto f = GraphFn::sample(g, [](double s, double a) { return 0.3 * (1.0 - s * s) * (1.0 + 0.2 * s * std::cos(2.0 * a)); });
        GraphFn rot(g);
        for (int j = 0; j <= g.ns(); ++j) {
            for (int k = 0; k < g.nalpha(); ++k) {
                rot.at(j, k) = f.at(j, k + shift);
            }
        }
        for (int j = 0; j < g.ns(); ++j) {
            for (int k = 0; k < g.nalpha(); ++k) {
                const auto a = eigendecompose(shape_at(f, j, k + shift));
                const auto b = eigendecompose(shape_at(rot, j, k));
                CHECK(std::abs(a.min() - b.min()) <= 1e-8);
                CHECK(std::abs(a.max() - b.max()) <= 1e-8);
            }
        }
    }

    TEST_CASE("n = 3 radial data satisfies R_pi^2 = det/tr")
    {
        const Grid g(DomainSpec::disk(1.0), 16, 32);
        const auto f = umbilic_cap(0.5, g);
        for (int j = 0; j < g.ns(); j += 3) {
            const SymMat a = shape_at(f, j, 0, 3);
            REQUIRE(a.dim() == 3);
            const auto e = eigendecompose(a);
            CHECK(e.values[1] == Approx(e.values[2]).epsilon(1e-12));
            const double det = e.values[0] * e.values[1] * e.values[2];
            const double r = r_theta(a, kPi).r;
            CHECK(r * r == Approx(det / a.trace()).epsilon(1e-8));
        }
        const auto bumpy = GraphFn::sample(g, [](double s, double a) { return 0.2 * (1.0 - s * s) * (1.0 + 0.1 * std::cos(a)); });
        CHECK_THROWS_AS(shape_at(bumpy, 2, 0, 3), DomainError);
    }

    TEST_CASE("normal derivative of constant slices: dA/dt = Id - A^2 at order two")
    {
        auto worst = [](int ns) {
            const Grid g(DomainSpec::disk(1.0), ns, 2 * ns);
            const double h = 1e-4;
            double err = 0.0;
            for (double t : {0.3, 1.0}) {
                const auto fp = constant(g, t + h);
                const auto fm = constant(g, t - h);
                const auto f0 = constant(g, t);
                for (int j = 0; j < ns; ++j) {
                    const auto ep = eigendecompose(shape_at(fp, j, 3));
                    const auto em = eigendecompose(shape_at(fm, j, 3));
                    const auto e0 = eigendecompose(shape_at(f0, j, 3));
                    for (int i = 0; i < 2; ++i) {
                        const double l0 = e0.values[static_cast<std::size_t>(i)];
                        const double d = (ep.values[static_cast<std::size_t>(i)] - em.values[static_cast<std::size_t>(i)]) / (2.0 * h);
                        err = std::max(err, std::abs(d - (1.0 - l0 * l0)));
                    }
                }
            }
            return err;
        };
        const double c = worst(32);
        const double f = worst(64);
        CHECK(f < 1e-3);
        CHECK(c / f >= 3.2);
        CHECK(c / f <= 5.0);
        // continuum statement
        const double t = 0.7;
        CHECK(std::abs((std::tanh(t + 1e-4) - std::tanh(t - 1e-4)) / 2e-4 - (1.0 - std::tanh(t) * std::tanh(t))) <= 1e-6);
    }

    TEST_CASE("delta_b of a constant vanishes")
    {
        const Grid g(DomainSpec::disk(1.0), 16, 32);
        const auto q = CurvatureQuery::from_rhat(2, kPi / 2.0, 0.5);
        const std::vector<double> phi(g.node_count(), 3.7);
        for (double v : delta_b(umbilic_cap(0.5, g), q, phi)) {
            CHECK(std::abs(v) <= 1e-9);
        }
    }

    TEST_CASE("umbilic data: delta_b is a scalar multiple of the Laplacian")
    {
        const Grid g(DomainSpec::disk(1.0), 32, 64);
        const double lam = 0.5;
        const auto q = CurvatureQuery::from_rhat(2, 2.0, lam);
        const auto f = umbilic_cap(lam, g);
        std::vector<double> phi(g.node_count());
        for (int j = 0; j <= g.ns(); ++j) {
            for (int k = 0; k < g.nalpha(); ++k) {
                const double s = g.s(j, k);
                phi[g.index(j, k)] = s * s * (1.0 + 0.3 * std::cos(g.alpha(k)));
            }
        }
        const auto db = delta_b(f, q, phi);
        const auto lb = laplace_beltrami(f, phi);
        const auto sf = shape_field(f, q);
        const double h2 = g.h() * g.h();
        for (std::size_t i = 0; i < db.size(); ++i) {
            // discrete A is λ·Id up to O(h²); use the node's own umbilic value
            const double l = 0.5 * sf.mean[i];
            CHECK(l == Approx(lam).epsilon(h2));
            CHECK(std::abs(db[i] - lb[i] / (1.0 + l * l / (q.r * q.r))) <= h2);
        }
    }

    TEST_CASE("Laplacian of s^2/2 on the base plane")
    {
        // Hess(d^2/2) = ds^2 + s coth s (sinh^2 s dα^2)/sinh^2 s, trace 1 + s coth s
        const Grid g(DomainSpec::disk(1.0), 32, 64);
        std::vector<double> phi(g.node_count());
        for (int j = 0; j <= g.ns(); ++j) {
            for (int k = 0; k < g.nalpha(); ++k) {
                phi[g.index(j, k)] = 0.5 * g.s(j, k) * g.s(j, k);
            }
        }
        const auto lb = laplace_beltrami(GraphFn(g), phi);
        for (int j = 0; j < g.ns(); ++j) {
            const double s = g.s(j, 0);
            CHECK(lb[g.index(j, 0)] == Approx(1.0 + s / std::tanh(s)).epsilon(1e-3));
        }
        CHECK(lb[g.index(0, 0)] == Approx(2.0).epsilon(1e-3));
    }

    TEST_CASE("delta_b rejects inadmissible data")
    {
        const Grid g(DomainSpec::disk(1.0), 16, 32);
        const auto q = CurvatureQuery::from_rhat(2, kPi / 2.0, 0.5);
        CHECK_THROWS_AS(delta_b(GraphFn(g), q, std::vector<double>(g.node_count(), 0.0)), DomainError);
    }

    TEST_CASE("stencil is the 3x3 block")
    {
        const Grid g(DomainSpec::disk(1.0), 8, 16);
        CHECK(stencil(g, 3, 4).size() == 9);
        const auto c = stencil(g, 0, 0);
        CHECK(std::find(c.begin(), c.end(), g.index(0, 8)) != c.end());
    }
}
