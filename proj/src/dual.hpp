#pragma once

#include <array>
#include <cmath>

namespace slcurv::detail {

/// Forward-mode dual number with N tangent directions.
template <int N>
struct Dual {
    double v = 0.0;
    std::array<double, N> d{};

    Dual() = default;
    Dual(double value) : v(value) {}  // NOLINT: constants promote implicitly

    static Dual variable(double value, int slot)
    {
        Dual x(value);
        x.d[static_cast<std::size_t>(slot)] = 1.0;
        return x;
    }

    Dual& operator+=(const Dual& o)
    {
        v += o.v;
        for (int i = 0; i < N; ++i) {
            d[i] += o.d[i];
        }
        return *this;
    }
    Dual& operator-=(const Dual& o)
    {
        v -= o.v;
        for (int i = 0; i < N; ++i) {
            d[i] -= o.d[i];
        }
        return *this;
    }
    Dual& operator*=(const Dual& o)
    {
        for (int i = 0; i < N; ++i) {
            d[i] = d[i] * o.v + v * o.d[i];
        }
        v *= o.v;
        return *this;
    }
    Dual& operator/=(const Dual& o)
    {
        const double inv = 1.0 / o.v;
        for (int i = 0; i < N; ++i) {
            d[i] = (d[i] - v * inv * o.d[i]) * inv;
        }
        v *= inv;
        return *this;
    }

    friend Dual operator+(Dual a, const Dual& b) { return a += b; }
    friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
    friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
    friend Dual operator/(Dual a, const Dual& b) { return a /= b; }
    friend Dual operator-(Dual a)
    {
        a.v = -a.v;
        for (auto& x : a.d) {
            x = -x;
        }
        return a;
    }
};

template <int N>
Dual<N> chain(const Dual<N>& x, double value, double slope)
{
    Dual<N> out(value);
    for (int i = 0; i < N; ++i) {
        out.d[i] = slope * x.d[i];
    }
    return out;
}

template <int N>
Dual<N> sqrt(const Dual<N>& x)
{
    const double s = std::sqrt(x.v);
    return chain(x, s, 0.5 / s);
}

template <int N>
Dual<N> cosh(const Dual<N>& x)
{
    return chain(x, std::cosh(x.v), std::sinh(x.v));
}

template <int N>
Dual<N> sinh(const Dual<N>& x)
{
    return chain(x, std::sinh(x.v), std::cosh(x.v));
}

template <int N>
Dual<N> atan(const Dual<N>& x)
{
    return chain(x, std::atan(x.v), 1.0 / (1.0 + x.v * x.v));
}

template <int N>
Dual<N> atan2(const Dual<N>& y, const Dual<N>& x)
{
    const double r2 = x.v * x.v + y.v * y.v;
    Dual<N> out(std::atan2(y.v, x.v));
    for (int i = 0; i < N; ++i) {
        out.d[i] = (x.v * y.d[i] - y.v * x.d[i]) / r2;
    }
    return out;
}

inline double value_of(double x) { return x; }

template <int N>
double value_of(const Dual<N>& x)
{
    return x.v;
}

}  // namespace slcurv::detail
