#include "slcurv/symmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace slcurv {

SymMat::SymMat(int n) : n_(n)
{
    if (n < 2 || n > kMaxDim) {
        throw DomainError("SymMat: dimension " + std::to_string(n) + " outside [2, 8]");
    }
}

SymMat SymMat::identity(int n) { return scalar(n, 1.0); }

SymMat SymMat::scalar(int n, double c)
{
    SymMat m(n);
    for (int i = 0; i < n; ++i) {
        m.set(i, i, c);
    }
    return m;
}

SymMat SymMat::diagonal(std::span<const double> d)
{
    SymMat m(static_cast<int>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) {
        m.set(static_cast<int>(i), static_cast<int>(i), d[i]);
    }
    return m;
}

SymMat SymMat::from_packed(int n, std::span<const double> packed)
{
    SymMat m(n);
    if (packed.size() != m.packed_size()) {
        throw DomainError("SymMat: expected " + std::to_string(m.packed_size()) + " packed entries, got " +
                          std::to_string(packed.size()));
    }
    std::copy(packed.begin(), packed.end(), m.data_.begin());
    return m;
}

double SymMat::trace() const
{
    double t = 0.0;
    for (int i = 0; i < n_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

double SymMat::norm_inf() const
{
    double best = 0.0;
    for (int i = 0; i < n_; ++i) {
        double row = 0.0;
        for (int j = 0; j < n_; ++j) {
            row += std::abs((*this)(i, j));
        }
        best = std::max(best, row);
    }
    return best;
}

bool SymMat::all_finite() const
{
    auto p = packed();
    return std::all_of(p.begin(), p.end(), [](double v) { return std::isfinite(v); });
}

SymMat& SymMat::operator+=(const SymMat& o)
{
    if (o.n_ != n_) {
        throw DomainError("SymMat: dimension mismatch");
    }
    for (std::size_t i = 0; i < packed_size(); ++i) {
        data_[i] += o.data_[i];
    }
    return *this;
}

SymMat& SymMat::operator-=(const SymMat& o)
{
    if (o.n_ != n_) {
        throw DomainError("SymMat: dimension mismatch");
    }
    for (std::size_t i = 0; i < packed_size(); ++i) {
        data_[i] -= o.data_[i];
    }
    return *this;
}

SymMat& SymMat::operator*=(double c)
{
    for (std::size_t i = 0; i < packed_size(); ++i) {
        data_[i] *= c;
    }
    return *this;
}

double frobenius(const SymMat& a, const SymMat& b)
{
    if (a.dim() != b.dim()) {
        throw DomainError("frobenius: dimension mismatch");
    }
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i) {
        s += a(i, i) * b(i, i);
        for (int j = 0; j < i; ++j) {
            s += 2.0 * a(i, j) * b(i, j);
        }
    }
    return s;
}

DenseMat::DenseMat(const SymMat& s) : n(s.dim())
{
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            (*this)(i, j) = s(i, j);
        }
    }
}

double DenseMat::trace() const
{
    double t = 0.0;
    for (int i = 0; i < n; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

DenseMat DenseMat::transposed() const
{
    DenseMat t(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            t(i, j) = (*this)(j, i);
        }
    }
    return t;
}

DenseMat operator*(const DenseMat& x, const DenseMat& y)
{
    DenseMat z(x.n);
    for (int i = 0; i < x.n; ++i) {
        for (int k = 0; k < x.n; ++k) {
            const double xik = x(i, k);
            for (int j = 0; j < x.n; ++j) {
                z(i, j) += xik * y(k, j);
            }
        }
    }
    return z;
}

EigenDecomposition eigendecompose(const SymMat& input)
{
    if (!input.all_finite()) {
        throw NumericError("eigendecompose: non-finite matrix entry");
    }
    const int n = input.dim();
    DenseMat a(input);
    DenseMat v(n);
    for (int i = 0; i < n; ++i) {
        v(i, i) = 1.0;
    }

    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            total += a(i, j) * a(i, j);
        }
    }
    const double threshold = 1e-14 * std::sqrt(total);

    auto off_mass = [&] {
        double off = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                off += 2.0 * a(i, j) * a(i, j);
            }
        }
        return std::sqrt(off);
    };

    constexpr int kMaxSweeps = 100;
    int sweep = 0;
    for (; sweep < kMaxSweeps && off_mass() > threshold; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) {
                    continue;
                }
                const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, tau) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    if (off_mass() > threshold) {
        throw NumericError("eigendecompose: Jacobi sweeps did not converge");
    }

    std::array<int, kMaxDim> order{};
    std::iota(order.begin(), order.begin() + n, 0);
    std::sort(order.begin(), order.begin() + n, [&](int x, int y) { return a(x, x) < a(y, y); });

    EigenDecomposition e;
    e.n = n;
    e.vectors = DenseMat(n);
    for (int k = 0; k < n; ++k) {
        const int src = order[static_cast<std::size_t>(k)];
        e.values[static_cast<std::size_t>(k)] = a(src, src);
        for (int i = 0; i < n; ++i) {
            e.vectors(i, k) = v(i, src);
        }
    }
    return e;
}

SymMat conjugate(const SymMat& a, const DenseMat& q)
{
    const DenseMat r = q * DenseMat(a) * q.transposed();
    SymMat out(a.dim());
    for (int i = 0; i < a.dim(); ++i) {
        for (int j = 0; j <= i; ++j) {
            out.set(i, j, 0.5 * (r(i, j) + r(j, i)));
        }
    }
    return out;
}

}  // namespace slcurv
