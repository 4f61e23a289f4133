#include "slcurv/hgeom.hpp"

#include "slcurv/symmat.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace slcurv {

double minkowski(const Vec4& a, const Vec4& b) { return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]; }

Vec4 base_point(double s, double alpha)
{
    const double sh = std::sinh(s);
    return {std::cosh(s), sh * std::cos(alpha), sh * std::sin(alpha), 0.0};
}

MinkPoint fermi_embed(double s, double alpha, double t)
{
    const Vec4 p = base_point(s, alpha);
    const double ct = std::cosh(t);
    return MinkPoint{{ct * p[0], ct * p[1], ct * p[2], std::sinh(t)}};
}

std::array<double, 3> poincare_project(const MinkPoint& p)
{
    const double d = 1.0 + p.x[0];
    return {p.x[1] / d, p.x[2] / d, p.x[3] / d};
}

MinkPoint poincare_unproject(const std::array<double, 3>& x)
{
    const double n2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    if (!(n2 < 1.0)) {
        throw DomainError("poincare_unproject: point outside the unit ball");
    }
    const double d = 1.0 - n2;
    return MinkPoint{{(1.0 + n2) / d, 2.0 * x[0] / d, 2.0 * x[1] / d, 2.0 * x[2] / d}};
}

DomainSpec DomainSpec::disk(double rho)
{
    DomainSpec d;
    d.kind = DomainKind::disk;
    d.rho = rho;
    d.validate();
    return d;
}

DomainSpec DomainSpec::star(double rho, std::vector<std::pair<int, double>> fourier)
{
    DomainSpec d;
    d.kind = DomainKind::star;
    d.rho = rho;
    d.fourier = std::move(fourier);
    d.validate();
    return d;
}

double DomainSpec::radius(double alpha) const
{
    double s = 1.0;
    for (const auto& [k, a] : fourier) {
        s += a * std::cos(k * alpha);
    }
    return rho * s;
}

double DomainSpec::radius_d1(double alpha) const
{
    double s = 0.0;
    for (const auto& [k, a] : fourier) {
        s -= a * k * std::sin(k * alpha);
    }
    return rho * s;
}

double DomainSpec::radius_d2(double alpha) const
{
    double s = 0.0;
    for (const auto& [k, a] : fourier) {
        s -= a * k * k * std::cos(k * alpha);
    }
    return rho * s;
}

namespace {

template <class Pick>
double sampled_radius(const DomainSpec& d, Pick pick)
{
    if (d.fourier.empty()) {
        return d.rho;
    }
    constexpr int kSamples = 4096;
    double best = d.radius(0.0);
    for (int i = 1; i < kSamples; ++i) {
        best = pick(best, d.radius(2.0 * std::numbers::pi * i / kSamples));
    }
    return best;
}

}  // namespace

double DomainSpec::min_radius() const
{
    return sampled_radius(*this, [](double a, double b) { return std::min(a, b); });
}

double DomainSpec::max_radius() const
{
    return sampled_radius(*this, [](double a, double b) { return std::max(a, b); });
}

void DomainSpec::validate() const
{
    if (!(rho > 0.0) || !std::isfinite(rho)) {
        throw DomainError("domain radius must be positive");
    }
    if (kind == DomainKind::disk && !fourier.empty()) {
        throw DomainError("disk domains take no Fourier perturbation");
    }
    double bending = 0.0;
    double amplitude = 0.0;
    for (const auto& [k, a] : fourier) {
        if (k < 1) {
            throw DomainError("Fourier modes must have k >= 1");
        }
        bending += std::abs(a) * (static_cast<double>(k) * k - 1.0);
        amplitude += std::abs(a);
    }
    if (bending > 0.3 + 1e-12 || amplitude > 0.3 + 1e-12) {
        throw DomainError("star perturbation too large: need sum |a_k|(k^2-1) <= 0.3 and sum |a_k| <= 0.3");
    }
    if (!(min_radius() > 0.0)) {
        throw DomainError("boundary radius must stay positive");
    }
}

DomainSpec DomainSpec::parse(const std::string& text)
{
    auto fail = [&] { return DomainError("cannot parse domain '" + text + "' (expected disk:<rho> or star:<rho>:k=a,...)"); };
    auto to_double = [&](std::string_view v) {
        double out = 0.0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc{} || ptr != v.data() + v.size()) {
            throw fail();
        }
        return out;
    };
    auto to_int = [&](std::string_view v) {
        int out = 0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc{} || ptr != v.data() + v.size()) {
            throw fail();
        }
        return out;
    };

    const std::string_view view(text);
    const auto c1 = view.find(':');
    if (c1 == std::string_view::npos) {
        throw fail();
    }
    const auto kind = view.substr(0, c1);
    auto rest = view.substr(c1 + 1);
    if (kind == "disk") {
        return disk(to_double(rest));
    }
    if (kind != "star") {
        throw fail();
    }
    const auto c2 = rest.find(':');
    const double rho = to_double(rest.substr(0, c2));
    std::vector<std::pair<int, double>> modes;
    if (c2 != std::string_view::npos) {
        auto list = rest.substr(c2 + 1);
        while (!list.empty()) {
            const auto comma = list.find(',');
            const auto item = list.substr(0, comma);
            const auto eq = item.find_first_of("=:");
            if (eq == std::string_view::npos) {
                throw fail();
            }
            modes.emplace_back(to_int(item.substr(0, eq)), to_double(item.substr(eq + 1)));
            list = comma == std::string_view::npos ? std::string_view{} : list.substr(comma + 1);
        }
    }
    return star(rho, std::move(modes));
}

std::string DomainSpec::describe() const
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", rho);
    std::string out = (kind == DomainKind::disk ? "disk:" : "star:") + std::string(buf);
    if (kind == DomainKind::star && !fourier.empty()) {
        out += ":";
        for (std::size_t i = 0; i < fourier.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%s%d=%.17g", i ? "," : "", fourier[i].first, fourier[i].second);
            out += buf;
        }
    }
    return out;
}

UmbilicCap::UmbilicCap(double lambda_, double rho_) : lambda(lambda_), rho(rho_)
{
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw DomainError("umbilic cap: lambda must lie in [0, 1]");
    }
    if (!(rho > 0.0)) {
        throw DomainError("umbilic cap: radius must be positive");
    }
}

CapKind UmbilicCap::kind() const
{
    if (lambda == 0.0) {
        return CapKind::geodesic;
    }
    return lambda == 1.0 ? CapKind::horospheric : CapKind::equidistant;
}

double UmbilicCap::height(double s) const
{
    if (lambda == 0.0) {
        return 0.0;
    }
    // The cap is {⟨X,V⟩_L = sinh τ}, τ = artanh λ, with V spacelike (λ < 1) or
    // null (λ = 1). After dividing by sinh τ the height f solves
    //   p·cosh f + q·sinh f = 1,  p = cosh s / cosh ρ,
    //   q = sqrt((1 − λ²)/λ² + 1/cosh²ρ),
    // which stays well conditioned up to the horosphere λ = 1.
    // With u = e^f the positive root gives u − 1 = ((1−p) + (1−p²)/(D+q))/(p+q),
    // D = sqrt(1 − p² + q²).
    const double ch = std::cosh(rho);
    const double p = std::cosh(s) / ch;
    const double one_minus_p = 2.0 * std::sinh(0.5 * (rho + s)) * std::sinh(0.5 * (rho - s)) / ch;
    const double q = std::sqrt((1.0 - lambda * lambda) / (lambda * lambda) + 1.0 / (ch * ch));
    const double one_minus_p2 = one_minus_p * (1.0 + p);
    const double d = std::sqrt(one_minus_p2 + q * q);
    const double um1 = (one_minus_p + one_minus_p2 / (d + q)) / (p + q);
    return std::log1p(um1);
}

}  // namespace slcurv
