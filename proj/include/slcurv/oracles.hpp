#pragma once

#include "slcurv/symmat.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <span>

namespace slcurv::oracles {

/// Seeded generator for the sampling suites.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double log_uniform(double lo, double hi);
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

private:
    std::mt19937_64 rng_;
};

/// Haar-ish orthogonal matrix: Gram–Schmidt on a Gaussian matrix.
DenseMat random_orthogonal(int n, Sampler& s);

/// Q diag(λ) Qᵀ with λ log-uniform in [lo, hi].
SymMat random_spd(int n, Sampler& s, double lo = 1e-2, double hi = 1e2);

/// Symmetric matrix with standard normal entries.
SymMat random_sym(int n, Sampler& s);

/// Positive semidefinite matrix G Gᵀ / n with Gaussian G.
SymMat random_psd(int n, Sampler& s);

/// sup{m : Σ arctan(λᵢ/r) + arctan(m/r) < θ} by bisection on m; +∞ when the
/// set is unbounded.
double mu_bisection(std::span<const double> lams, double r, double theta);

/// (g(h) − g(−h)) / 2h
double central_first(const std::function<double(double)>& g, double h);

/// Second central difference with one Richardson step.
double central_second(const std::function<double(double)>& g, double h);

}  // namespace slcurv::oracles
