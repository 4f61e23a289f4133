#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

namespace slcurv {

inline constexpr int kMaxDim = 8;

/// Raised when an input falls outside the domain of an operation
/// (non-positive curvature level, matrix outside the positive cone, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical routine cannot produce a trustworthy result.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense symmetric n×n matrix, 2 ≤ n ≤ 8, stored as its lower triangle in
/// row-major order: (0,0), (1,0), (1,1), (2,0), ...
class SymMat {
public:
    static constexpr std::size_t kCapacity = kMaxDim * (kMaxDim + 1) / 2;

    explicit SymMat(int n = 2);

    static SymMat identity(int n);
    static SymMat scalar(int n, double c);
    static SymMat diagonal(std::span<const double> d);
    static SymMat from_packed(int n, std::span<const double> packed);

    int dim() const { return n_; }
    std::size_t packed_size() const { return static_cast<std::size_t>(n_ * (n_ + 1) / 2); }
    std::span<const double> packed() const { return {data_.data(), packed_size()}; }

    double operator()(int i, int j) const { return data_[index(i, j)]; }
    void set(int i, int j, double v) { data_[index(i, j)] = v; }

    double trace() const;
    /// Max absolute row sum.
    double norm_inf() const;
    bool all_finite() const;

    SymMat& operator+=(const SymMat& o);
    SymMat& operator-=(const SymMat& o);
    SymMat& operator*=(double c);

    friend SymMat operator+(SymMat a, const SymMat& b) { return a += b; }
    friend SymMat operator-(SymMat a, const SymMat& b) { return a -= b; }
    friend SymMat operator*(SymMat a, double c) { return a *= c; }
    friend SymMat operator*(double c, SymMat a) { return a *= c; }

private:
    static std::size_t index(int i, int j)
    {
        if (i < j) {
            std::swap(i, j);
        }
        return static_cast<std::size_t>(i * (i + 1) / 2 + j);
    }

    int n_;
    std::array<double, kCapacity> data_{};
};

/// Frobenius inner product Tr(AB).
double frobenius(const SymMat& a, const SymMat& b);

/// Square matrix with row-major storage, used for products that leave the
/// symmetric subspace (e.g. μ⁻¹AM).
struct DenseMat {
    int n = 0;
    std::array<double, kMaxDim * kMaxDim> a{};

    explicit DenseMat(int dim = 2) : n(dim) {}
    explicit DenseMat(const SymMat& s);

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i * kMaxDim + j)]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i * kMaxDim + j)]; }

    double trace() const;
    DenseMat transposed() const;
};

DenseMat operator*(const DenseMat& x, const DenseMat& y);

/// Eigenvalues in ascending order with an orthogonal frame whose columns are
/// the matching eigenvectors.
struct EigenDecomposition {
    int n = 0;
    std::array<double, kMaxDim> values{};
    DenseMat vectors = DenseMat(2);

    double min() const { return values[0]; }
    double max() const { return values[static_cast<std::size_t>(n - 1)]; }
    std::span<const double> eigenvalues() const { return {values.data(), static_cast<std::size_t>(n)}; }
};

/// Cyclic Jacobi with a fixed sweep order; converges when the off-diagonal
/// Frobenius mass drops to 1e-14·‖A‖. Throws NumericError on non-finite input
/// or if 100 sweeps are not enough.
EigenDecomposition eigendecompose(const SymMat& a);

/// Q diag(g(λᵢ)) Qᵀ.
template <class F>
SymMat spectral_map(const EigenDecomposition& e, F&& g)
{
    SymMat out(e.n);
    std::array<double, kMaxDim> gv{};
    for (int k = 0; k < e.n; ++k) {
        gv[static_cast<std::size_t>(k)] = g(e.values[static_cast<std::size_t>(k)]);
    }
    for (int i = 0; i < e.n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = 0.0;
            for (int k = 0; k < e.n; ++k) {
                s += e.vectors(i, k) * gv[static_cast<std::size_t>(k)] * e.vectors(j, k);
            }
            out.set(i, j, s);
        }
    }
    return out;
}

/// Q A Qᵀ for an orthogonal Q (tests and invariance checks).
SymMat conjugate(const SymMat& a, const DenseMat& q);

}  // namespace slcurv
