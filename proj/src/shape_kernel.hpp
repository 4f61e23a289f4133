#pragma once

// Per-node curvature kernel shared by the shape module and the solver. It is
// templated on the scalar so the solver can push dual numbers through the
// same code path to obtain exact local Jacobians.

#include "dual.hpp"
#include "slcurv/graph.hpp"
#include "slcurv/shape.hpp"

#include <array>
#include <cmath>
#include <string>

namespace slcurv::detail {

template <class T>
using V4 = std::array<T, 4>;
template <class T>
using M2 = std::array<std::array<T, 2>, 2>;

/// Nine lattice nodes read around interior node (j, k), row-major in
/// (dj, dk) ∈ {−1,0,1}², with their base-plane points.
struct NodeStencil {
    int j = 0;
    int k = 0;
    double ds = 0.0;
    double da = 0.0;
    std::array<std::size_t, 9> node{};
    std::array<Vec4, 9> base{};
};

inline NodeStencil gather_stencil(const Grid& grid, int j, int k)
{
    NodeStencil st;
    st.j = j;
    st.k = k;
    st.ds = grid.dsigma();
    st.da = grid.dalpha();
    for (int dj = -1; dj <= 1; ++dj) {
        for (int dk = -1; dk <= 1; ++dk) {
            const auto p = static_cast<std::size_t>((dj + 1) * 3 + (dk + 1));
            const std::size_t idx = grid.resolve(j + dj, k + dk);
            const int jj = static_cast<int>(idx) / grid.nalpha();
            const int kk = static_cast<int>(idx) % grid.nalpha();
            st.node[p] = idx;
            st.base[p] = base_point(grid.s(jj, kk), grid.alpha(kk));
        }
    }
    return st;
}

template <class T>
T mink(const V4<T>& a, const V4<T>& b)
{
    return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

template <class T>
T det3(const V4<T>& a, const V4<T>& b, const V4<T>& c, int skip)
{
    int cols[3];
    for (int i = 0, m = 0; i < 4; ++i) {
        if (i != skip) {
            cols[m++] = i;
        }
    }
    auto e = [&](const V4<T>& v, int m) -> const T& { return v[static_cast<std::size_t>(cols[m])]; };
    return e(a, 0) * (e(b, 1) * e(c, 2) - e(b, 2) * e(c, 1)) - e(a, 1) * (e(b, 0) * e(c, 2) - e(b, 2) * e(c, 0)) +
           e(a, 2) * (e(b, 0) * e(c, 1) - e(b, 1) * e(c, 0));
}

/// (M + √det·I)/√(tr + 2√det) is the square root of a 2×2 SPD matrix.
template <class T>
M2<T> inv_sqrt2(const M2<T>& m)
{
    using std::sqrt;
    const T det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    const T sd = sqrt(det);
    const T t = sqrt(m[0][0] + m[1][1] + T(2.0) * sd);
    const M2<T> root{{{(m[0][0] + sd) / t, m[0][1] / t}, {m[1][0] / t, (m[1][1] + sd) / t}}};
    const T rdet = root[0][0] * root[1][1] - root[0][1] * root[1][0];
    return {{{root[1][1] / rdet, -root[0][1] / rdet}, {-root[1][0] / rdet, root[0][0] / rdet}}};
}

template <class T>
M2<T> sandwich(const M2<T>& p, const M2<T>& m)
{
    M2<T> out{};
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            T s(0.0);
            for (int c = 0; c < 2; ++c) {
                for (int d = 0; d < 2; ++d) {
                    s += p[a][c] * m[c][d] * p[d][b];
                }
            }
            out[a][b] = s;
        }
    }
    return out;
}

template <class T>
struct Geometry {
    V4<T> x;
    std::array<V4<T>, 2> t;       // tangents (σ, α), projected onto T_X H³
    std::array<V4<T>, 3> second;  // X_σσ, X_σα, X_αα
    V4<T> normal;
    M2<T> g{};
    M2<T> ii{};
    M2<T> g_inv_sqrt{};
};

/// Embeds the nine stencil heights and differences the embedded lattice.
template <class T>
Geometry<T> geometry(const NodeStencil& st, const std::array<T, 9>& height)
{
    using std::cosh;
    using std::sinh;
    using std::sqrt;

    std::array<V4<T>, 9> p;
    for (std::size_t m = 0; m < 9; ++m) {
        const T ct = cosh(height[m]);
        p[m] = {ct * st.base[m][0], ct * st.base[m][1], ct * st.base[m][2], sinh(height[m])};
    }
    auto at = [&](int dj, int dk) -> const V4<T>& { return p[static_cast<std::size_t>((dj + 1) * 3 + (dk + 1))]; };

    const double ds = st.ds;
    const double da = st.da;
    Geometry<T> geo;
    geo.x = at(0, 0);
    for (std::size_t c = 0; c < 4; ++c) {
        geo.t[0][c] = (at(1, 0)[c] - at(-1, 0)[c]) * T(1.0 / (2.0 * ds));
        geo.t[1][c] = (at(0, 1)[c] - at(0, -1)[c]) * T(1.0 / (2.0 * da));
        geo.second[0][c] = (at(1, 0)[c] - T(2.0) * at(0, 0)[c] + at(-1, 0)[c]) * T(1.0 / (ds * ds));
        geo.second[1][c] = (at(1, 1)[c] - at(1, -1)[c] - at(-1, 1)[c] + at(-1, -1)[c]) * T(1.0 / (4.0 * ds * da));
        geo.second[2][c] = (at(0, 1)[c] - T(2.0) * at(0, 0)[c] + at(0, -1)[c]) * T(1.0 / (da * da));
    }
    // ⟨X,X⟩ = −1, so T + ⟨T,X⟩X is the tangential part.
    for (auto& tv : geo.t) {
        const T c = mink(tv, geo.x);
        for (std::size_t i = 0; i < 4; ++i) {
            tv[i] += c * geo.x[i];
        }
    }

    // The cofactor vector of (X, T_σ, T_α) is Euclidean-orthogonal to all
    // three; flipping its time component makes it Minkowski-orthogonal.
    V4<T> nrm;
    for (int i = 0; i < 4; ++i) {
        const T c = det3(geo.x, geo.t[0], geo.t[1], i);
        nrm[static_cast<std::size_t>(i)] = (i % 2 == 0) ? c : -c;
    }
    nrm[0] = -nrm[0];
    const T nn = mink(nrm, nrm);
    if (!(value_of(nn) > 0.0)) {
        throw NumericError("shape: degenerate normal at node (" + std::to_string(st.j) + "," + std::to_string(st.k) +
                           ")");
    }
    const T scale = T(kNormalOrientation) / sqrt(nn);
    for (std::size_t i = 0; i < 4; ++i) {
        geo.normal[i] = nrm[i] * scale;
    }

    geo.g = {{{mink(geo.t[0], geo.t[0]), mink(geo.t[0], geo.t[1])}, {mink(geo.t[1], geo.t[0]), mink(geo.t[1], geo.t[1])}}};
    const T detg = geo.g[0][0] * geo.g[1][1] - geo.g[0][1] * geo.g[1][0];
    if (!(value_of(detg) > 1e-12)) {
        throw NumericError("shape: degenerate induced metric at node (" + std::to_string(st.j) + "," +
                           std::to_string(st.k) + ")");
    }
    const T ii01 = mink(geo.second[1], geo.normal);
    geo.ii = {{{mink(geo.second[0], geo.normal), ii01}, {ii01, mink(geo.second[2], geo.normal)}}};
    geo.g_inv_sqrt = inv_sqrt2(geo.g);
    return geo;
}

/// Shape operator of the 2D slice in the orthonormal frame g^{-1/2}.
template <class T>
M2<T> slice_shape(const Geometry<T>& geo)
{
    M2<T> a = sandwich(geo.g_inv_sqrt, geo.ii);
    const T off = (a[0][1] + a[1][0]) * T(0.5);
    a[0][1] = off;
    a[1][0] = off;
    return a;
}

/// SL_r − θ from the slice shape operator. The 2×2 block uses
/// arctan(x) + arctan(y) = arg((1 + ix)(1 + iy)), exact on (−π, π); for n ≥ 3
/// the angular curvature is repeated n − 2 more times.
template <class T>
T sl_residual(const M2<T>& a, int n, double r, double theta)
{
    using std::atan;
    using std::atan2;
    const T tr = (a[0][0] + a[1][1]) * T(1.0 / r);
    const T det = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) * T(1.0 / (r * r));
    T s = atan2(tr, T(1.0) - det);
    if (n > 2) {
        s += T(static_cast<double>(n - 2)) * atan(a[1][1] * T(1.0 / r));
    }
    return s - T(theta);
}

/// Smallest eigenvalue of a symmetric 2×2 matrix.
inline double min_eigenvalue(const M2<double>& a)
{
    const double m = 0.5 * (a[0][0] + a[1][1]);
    const double d = 0.5 * (a[0][0] - a[1][1]);
    return m - std::hypot(d, a[0][1]);
}

}  // namespace slcurv::detail
