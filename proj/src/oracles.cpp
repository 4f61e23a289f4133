#include "slcurv/oracles.hpp"

#include <cmath>
#include <limits>

namespace slcurv::oracles {

double Sampler::log_uniform(double lo, double hi)
{
    return std::exp(uniform(std::log(lo), std::log(hi)));
}

DenseMat random_orthogonal(int n, Sampler& s)
{
    DenseMat q(n);
    for (int c = 0; c < n; ++c) {
        for (;;) {
            for (int i = 0; i < n; ++i) {
                q(i, c) = s.normal();
            }
            for (int p = 0; p < c; ++p) {
                double d = 0.0;
                for (int i = 0; i < n; ++i) {
                    d += q(i, c) * q(i, p);
                }
                for (int i = 0; i < n; ++i) {
                    q(i, c) -= d * q(i, p);
                }
            }
            double norm = 0.0;
            for (int i = 0; i < n; ++i) {
                norm += q(i, c) * q(i, c);
            }
            norm = std::sqrt(norm);
            if (norm > 1e-6) {
                for (int i = 0; i < n; ++i) {
                    q(i, c) /= norm;
                }
                break;
            }
        }
    }
    return q;
}

SymMat random_spd(int n, Sampler& s, double lo, double hi)
{
    std::array<double, kMaxDim> d{};
    for (int i = 0; i < n; ++i) {
        d[static_cast<std::size_t>(i)] = s.log_uniform(lo, hi);
    }
    return conjugate(SymMat::diagonal({d.data(), static_cast<std::size_t>(n)}), random_orthogonal(n, s));
}

SymMat random_sym(int n, Sampler& s)
{
    SymMat a(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            a.set(i, j, s.normal());
        }
    }
    return a;
}

SymMat random_psd(int n, Sampler& s)
{
    DenseMat g(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            g(i, j) = s.normal();
        }
    }
    SymMat p(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double v = 0.0;
            for (int k = 0; k < n; ++k) {
                v += g(i, k) * g(j, k);
            }
            p.set(i, j, v / n);
        }
    }
    return p;
}

double mu_bisection(std::span<const double> lams, double r, double theta)
{
    double sum = 0.0;
    for (double l : lams) {
        sum += std::atan(l / r);
    }
    auto below = [&](double m) { return sum + std::atan(m / r) < theta; };
    if (below(std::numeric_limits<double>::max())) {
        return std::numeric_limits<double>::infinity();
    }
    double lo = -r;
    while (!below(lo)) {
        lo *= 2.0;
    }
    double hi = r;
    while (below(hi)) {
        hi *= 2.0;
    }
    for (int it = 0; it < 2000 && lo < hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        (below(mid) ? lo : hi) = mid;
    }
    return lo;
}

double central_first(const std::function<double(double)>& g, double h)
{
    return (g(h) - g(-h)) / (2.0 * h);
}

double central_second(const std::function<double(double)>& g, double h)
{
    const double g0 = g(0.0);
    auto d2 = [&](double t) { return (g(t) - 2.0 * g0 + g(-t)) / (t * t); };
    return (4.0 * d2(0.5 * h) - d2(h)) / 3.0;
}

}  // namespace slcurv::oracles
