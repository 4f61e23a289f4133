#include "slcurv/shape.hpp"

#include "shape_kernel.hpp"
#include "slcurv/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace slcurv {

namespace {

using detail::Geometry;
using Mat2 = detail::M2<double>;

Geometry<double> node_geometry(const GraphFn& f, int j, int k)
{
    const auto st = detail::gather_stencil(f.grid(), j, k);
    std::array<double, 9> h{};
    for (std::size_t m = 0; m < 9; ++m) {
        h[m] = f.values()[st.node[m]];
    }
    return detail::geometry(st, h);
}

// Embeds a 2×2 slice tensor into n dimensions: the angular entry is repeated
// along the extra (rotationally equivalent) directions.
SymMat lift(const Mat2& m, int n)
{
    SymMat out(n);
    out.set(0, 0, m[0][0]);
    out.set(1, 0, 0.5 * (m[0][1] + m[1][0]));
    out.set(1, 1, m[1][1]);
    for (int i = 2; i < n; ++i) {
        out.set(i, i, m[1][1]);
    }
    return out;
}

void require_rotational(const GraphFn& f, int n)
{
    if (n == 2) {
        return;
    }
    if (n < 2 || n > kMaxDim) {
        throw DomainError("shape: dimension must lie in [2, 8]");
    }
    const Grid& grid = f.grid();
    if (grid.domain().kind != DomainKind::disk) {
        throw DomainError("shape: n >= 3 requires a disk domain");
    }
    for (int j = 0; j <= grid.ns(); ++j) {
        const double ref = f.at(j, 0);
        for (int k = 1; k < grid.nalpha(); ++k) {
            if (std::abs(f.at(j, k) - ref) > 1e-12 * (1.0 + std::abs(ref))) {
                throw DomainError("shape: n >= 3 requires rotationally symmetric data");
            }
        }
    }
}

SymMat shape_from_geometry(const Geometry<double>& geo, int n)
{
    return lift(detail::slice_shape(geo), n);
}

// Intrinsic Hessian of φ in the orthonormal frame of node_geometry.
Mat2 intrinsic_hessian(const Geometry<double>& geo, const GraphFn& f, const std::vector<double>& phi, int j, int k)
{
    const Grid& grid = f.grid();
    const double ds = grid.dsigma();
    const double da = grid.dalpha();
    auto v = [&](int jj, int kk) { return phi[grid.resolve(jj, kk)]; };

    const double c = v(j, k);
    const std::array<double, 2> d1{(v(j + 1, k) - v(j - 1, k)) / (2.0 * ds), (v(j, k + 1) - v(j, k - 1)) / (2.0 * da)};
    const double pss = (v(j + 1, k) - 2.0 * c + v(j - 1, k)) / (ds * ds);
    const double paa = (v(j, k + 1) - 2.0 * c + v(j, k - 1)) / (da * da);
    const double psa = (v(j + 1, k + 1) - v(j + 1, k - 1) - v(j - 1, k + 1) + v(j - 1, k - 1)) / (4.0 * ds * da);

    const double detg = geo.g[0][0] * geo.g[1][1] - geo.g[0][1] * geo.g[1][0];
    const Mat2 ginv{{{geo.g[1][1] / detg, -geo.g[0][1] / detg}, {-geo.g[1][0] / detg, geo.g[0][0] / detg}}};

    // Γᵏ_ab = g^{kl}⟨X_ab, T_l⟩
    auto christoffel_contract = [&](const Vec4& xab) {
        const std::array<double, 2> lower{minkowski(xab, geo.t[0]), minkowski(xab, geo.t[1])};
        double s = 0.0;
        for (int kk = 0; kk < 2; ++kk) {
            const auto row = static_cast<std::size_t>(kk);
            const double gamma = ginv[row][0] * lower[0] + ginv[row][1] * lower[1];
            s += gamma * d1[static_cast<std::size_t>(kk)];
        }
        return s;
    };
    const double hss = pss - christoffel_contract(geo.second[0]);
    const double hsa = psa - christoffel_contract(geo.second[1]);
    const double haa = paa - christoffel_contract(geo.second[2]);
    return detail::sandwich(geo.g_inv_sqrt, Mat2{{{hss, hsa}, {hsa, haa}}});
}

std::size_t interior_index(const Grid& grid, std::size_t i, int& j, int& k)
{
    j = static_cast<int>(i) / grid.nalpha();
    k = static_cast<int>(i) % grid.nalpha();
    return i;
}

}  // namespace

SymMat shape_at(const GraphFn& f, int j, int k, int n)
{
    const Grid& grid = f.grid();
    if (j < 0 || j >= grid.ns()) {
        throw DomainError("shape_at: node is not interior");
    }
    require_rotational(f, n);
    return shape_from_geometry(node_geometry(f, j, k), n);
}

bool ShapeField::all_admissible() const
{
    return std::all_of(admissible.begin(), admissible.end(), [](char a) { return a != 0; });
}

double ShapeField::min_lambda1() const
{
    double m = std::numeric_limits<double>::infinity();
    for (double l : lambda_min) {
        m = std::min(m, l);
    }
    return m;
}

ShapeField shape_field(const GraphFn& f, const CurvatureQuery& q, int workers)
{
    require_rotational(f, q.n);
    const Grid& grid = f.grid();
    const std::size_t count = grid.interior_count();
    const double scale = rescale_factor(q.n, q.theta);

    ShapeField out;
    out.n = q.n;
    out.A.assign(count, SymMat(q.n));
    out.eig.assign(count, EigenDecomposition{});
    out.lambda_min.assign(count, 0.0);
    out.lambda_max.assign(count, 0.0);
    out.mean.assign(count, 0.0);
    out.rhat_theta.assign(count, std::numeric_limits<double>::quiet_NaN());
    out.residual.assign(count, 0.0);
    out.admissible.assign(count, 0);

    parallel_for(count, workers, [&](std::size_t i) {
        int j = 0;
        int k = 0;
        interior_index(grid, i, j, k);
        const SymMat a = shape_from_geometry(node_geometry(f, j, k), q.n);
        const auto e = eigendecompose(a);
        out.A[i] = a;
        out.eig[i] = e;
        out.lambda_min[i] = e.min();
        out.lambda_max[i] = e.max();
        out.mean[i] = a.trace();
        out.residual[i] = sl_from_eigenvalues(e.eigenvalues(), q.r) - q.theta;
        out.admissible[i] = e.min() > kAdmissibleEps ? 1 : 0;
        if (out.admissible[i]) {
            out.rhat_theta[i] = r_theta_from_eigenvalues(e.eigenvalues(), q.theta).r * scale;
        }
    });
    return out;
}

ResidualField residual_field(const GraphFn& f, const CurvatureQuery& q, int workers)
{
    require_rotational(f, q.n);
    const Grid& grid = f.grid();
    const std::size_t count = grid.interior_count();
    ResidualField out{std::vector<double>(count), std::vector<double>(count)};
    parallel_for(count, workers, [&](std::size_t i) {
        int j = 0;
        int k = 0;
        interior_index(grid, i, j, k);
        const Mat2 a = detail::slice_shape(node_geometry(f, j, k));
        out.residual[i] = detail::sl_residual(a, q.n, q.r, q.theta);
        out.lambda_min[i] = detail::min_eigenvalue(a);
    });
    return out;
}

namespace {

std::vector<double> weighted_laplacian(const GraphFn& f, const std::vector<double>& phi, int n, int workers,
                                       const CurvatureQuery* q)
{
    const Grid& grid = f.grid();
    if (phi.size() != grid.node_count()) {
        throw DomainError("delta_b: phi must cover every lattice node");
    }
    require_rotational(f, n);
    const std::size_t count = grid.interior_count();
    std::vector<double> out(count, 0.0);
    parallel_for(count, workers, [&](std::size_t i) {
        int j = 0;
        int k = 0;
        interior_index(grid, i, j, k);
        const Geometry<double> geo = node_geometry(f, j, k);
        const SymMat hess = lift(intrinsic_hessian(geo, f, phi, j, k), n);
        if (q == nullptr) {
            out[i] = hess.trace();
            return;
        }
        const SymMat a = shape_from_geometry(geo, n);
        const auto e = eigendecompose(a);
        if (!(e.min() > kAdmissibleEps)) {
            throw DomainError("delta_b: inadmissible node (" + std::to_string(j) + "," + std::to_string(k) + ")");
        }
        const double r2 = q->r * q->r;
        const SymMat b = spectral_map(e, [&](double l) { return 1.0 / (1.0 + l * l / r2); });
        out[i] = frobenius(b, hess);
    });
    return out;
}

}  // namespace

std::vector<double> delta_b(const GraphFn& f, const CurvatureQuery& q, const std::vector<double>& phi, int workers)
{
    return weighted_laplacian(f, phi, q.n, workers, &q);
}

std::vector<double> laplace_beltrami(const GraphFn& f, const std::vector<double>& phi, int n, int workers)
{
    return weighted_laplacian(f, phi, n, workers, nullptr);
}

std::vector<std::size_t> stencil(const Grid& grid, int j, int k)
{
    std::vector<std::size_t> out;
    out.reserve(9);
    for (int dj = -1; dj <= 1; ++dj) {
        for (int dk = -1; dk <= 1; ++dk) {
            out.push_back(grid.resolve(j + dj, k + dk));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace slcurv
