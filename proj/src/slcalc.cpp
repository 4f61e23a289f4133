#include "slcurv/slcalc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace slcurv {

namespace {

constexpr double kPi = std::numbers::pi;

void check_angle(int n, double theta)
{
    if (!(theta > 0.0) || !(theta < n * kPi / 2.0)) {
        throw DomainError("angle " + std::to_string(theta) + " outside ]0, nπ/2[");
    }
}

// Tr(μ_r⁻¹ A) = Σ λ/(1 + λ²/r²)
double phi_from_eigenvalues(std::span<const double> eig, double r)
{
    double s = 0.0;
    for (double l : eig) {
        const double x = l / r;
        s += l / (1.0 + x * x);
    }
    return s;
}

}  // namespace

CurvatureQuery CurvatureQuery::from_rhat(int n, double theta, double rhat)
{
    const double t = rescale_factor(n, theta);
    return CurvatureQuery{n, theta, rhat / t, rhat};
}

CurvatureQuery CurvatureQuery::from_r(int n, double theta, double r)
{
    const double t = rescale_factor(n, theta);
    return CurvatureQuery{n, theta, r, r * t};
}

void CurvatureQuery::validate(bool allow_boundary_angle) const
{
    if (n < 2 || n > kMaxDim) {
        throw DomainError("dimension n=" + std::to_string(n) + " outside [2, 8]");
    }
    const double lo = (n - 1) * kPi / 2.0;
    const double hi = n * kPi / 2.0;
    const bool lower_ok = allow_boundary_angle ? theta >= lo - 1e-12 : theta > lo;
    if (!lower_ok || !(theta < hi)) {
        throw DomainError("theta=" + std::to_string(theta) + " outside the admissible range [(n-1)π/2, nπ/2[");
    }
    if (!(r > 0.0) || !(rhat > 0.0) || !std::isfinite(r)) {
        throw DomainError("curvature level must be positive");
    }
    const double expect = r * rescale_factor(n, theta);
    if (std::abs(expect - rhat) > 1e-14 * std::max(1.0, std::abs(rhat)) * 4.0) {
        throw DomainError("r and rhat are inconsistent");
    }
}

double rescale_factor(int n, double theta)
{
    check_angle(n, theta);
    return std::tan(theta / n);
}

double arctan_sym(const SymMat& a)
{
    const auto e = eigendecompose(a);
    double s = 0.0;
    for (double l : e.eigenvalues()) {
        s += std::atan(l);
    }
    return s;
}

double sl_from_eigenvalues(std::span<const double> eig, double r)
{
    if (!(r > 0.0)) {
        throw DomainError("sl: curvature level r must be positive");
    }
    double s = 0.0;
    for (double l : eig) {
        s += std::atan(l / r);
    }
    return s;
}

double sl(const SymMat& a, double r)
{
    if (!(r > 0.0)) {
        throw DomainError("sl: curvature level r must be positive");
    }
    return sl_from_eigenvalues(eigendecompose(a).eigenvalues(), r);
}

RTheta r_theta_from_eigenvalues(std::span<const double> eig, double theta)
{
    const int n = static_cast<int>(eig.size());
    check_angle(n, theta);
    const double lmin = *std::min_element(eig.begin(), eig.end());
    const double lmax = *std::max_element(eig.begin(), eig.end());
    const double scale = std::max(std::abs(lmin), std::abs(lmax));
    if (!(lmin > 1e-14 * scale) || !std::isfinite(lmax)) {
        throw DomainError("r_theta: matrix is not positive definite");
    }
    const double t = std::tan(theta / n);

    // R_θ is Loewner-monotone and R_θ(c·Id) = c/tan(θ/n).
    double lo = lmin / t;
    double hi = lmax / t;
    auto g = [&](double r) { return sl_from_eigenvalues(eig, r) - theta; };

    while (hi - lo > 1e-6 * hi) {
        const double mid = 0.5 * (lo + hi);
        // sl is decreasing in r
        if (g(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    double r = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
        const double val = g(r);
        if (std::abs(val) <= 1e-15 * theta) {
            break;
        }
        // d sl / dr = −(1/r) Tr(μ_r⁻¹ A/r)
        const double slope = -phi_from_eigenvalues(eig, r) / (r * r);
        double next = r - val / slope;
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (val > 0.0) {
            lo = std::max(lo, r);
        } else {
            hi = std::min(hi, r);
        }
        if (std::abs(next - r) <= 1e-16 * r) {
            r = next;
            break;
        }
        r = next;
    }
    return RTheta{r, r * t};
}

RTheta r_theta(const SymMat& a, double theta)
{
    const auto e = eigendecompose(a);
    return r_theta_from_eigenvalues(e.eigenvalues(), theta);
}

SLDerivatives d_sl(const SymMat& a, double r)
{
    if (!(r > 0.0)) {
        throw DomainError("d_sl: curvature level r must be positive");
    }
    const auto e = eigendecompose(a);
    const double r2 = r * r;
    SLDerivatives out{
        spectral_map(e, [&](double l) { return 1.0 / (r * (1.0 + l * l / r2)); }),
        spectral_map(e, [&](double l) { return 1.0 + l * l / r2; }),
        phi_from_eigenvalues(e.eigenvalues(), r),
    };
    return out;
}

double d2_sigma(const SymMat& a, const SymMat& m)
{
    const auto e = eigendecompose(a);
    const DenseMat mu_inv(spectral_map(e, [](double l) { return 1.0 / (1.0 + l * l); }));
    const DenseMat am(a);
    const DenseMat mm(m);
    const DenseMat left = mu_inv * am * mm;
    const DenseMat right = mu_inv * mm;
    return -2.0 * (left * right).trace();
}

SymMat d_r(const SymMat& a, double theta)
{
    const auto e = eigendecompose(a);
    const double r = r_theta_from_eigenvalues(e.eigenvalues(), theta).r;
    const double r2 = r * r;
    const double phi = phi_from_eigenvalues(e.eigenvalues(), r);
    return spectral_map(e, [&](double l) { return r / ((1.0 + l * l / r2) * phi); });
}

KBounds k_bounds(int n, double theta)
{
    check_angle(n, theta);
    KBounds b;
    b.k1 = 1.0 / std::tan(theta / n);
    const double excess = theta - (n - 1) * kPi / 2.0;
    if (excess > 0.0) {
        b.k2 = 1.0 / excess;
    }
    return b;
}

}  // namespace slcurv
