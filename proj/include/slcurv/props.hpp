#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace slcurv {

/// Outcome of one sampling suite. Every check carries a slack
/// (tolerance minus error, or the margin of an inequality plus tolerance);
/// the suite passes iff no slack is negative.
struct SuiteResult {
    std::string name;
    int samples = 0;
    std::size_t checks = 0;
    std::size_t failures = 0;
    double tol = 0.0;
    double worst_slack = 0.0;
    std::vector<std::string> witnesses;  ///< up to 5 worst checks

    bool pass() const { return failures == 0; }
};

struct PropsConfig {
    int samples = 1000;
    std::uint64_t seed = 42;
    std::optional<double> tol;  ///< overrides every suite tolerance
};

/// r_theta vs √det (n = 2, θ = π/2) and √(det/tr) (n = 3, θ = π).
SuiteResult suite_special_forms(const PropsConfig& cfg);
/// R_θ(tA + (1−t)B) ≥ tR_θ(A) + (1−t)R_θ(B).
SuiteResult suite_concavity(const PropsConfig& cfg);
SuiteResult suite_homogeneity(const PropsConfig& cfg);
SuiteResult suite_orthogonal_invariance(const PropsConfig& cfg);
SuiteResult suite_loewner(const PropsConfig& cfg);
SuiteResult suite_decreasing_in_r(const PropsConfig& cfg);
SuiteResult suite_defining_identity(const PropsConfig& cfg);
/// d_sl, d2_sigma and d_r against central differences, plus the Euler identity.
SuiteResult suite_d_sl(const PropsConfig& cfg);
SuiteResult suite_d2_sigma(const PropsConfig& cfg);
SuiteResult suite_d_r(const PropsConfig& cfg);
SuiteResult suite_euler(const PropsConfig& cfg);
/// K₁λ₁ ≤ R_θ ≤ K₂λ₁ on θ = (n−1)π/2 + kπ/(8n).
SuiteResult suite_k_bounds(const PropsConfig& cfg);
/// Closed-form μ against bisection, including the finite/infinite split.
SuiteResult suite_mu_oracle(const PropsConfig& cfg);
SuiteResult suite_mu_monotone(const PropsConfig& cfg);
/// Symmetry, nonnegativity and growth of F.
SuiteResult suite_f_threshold(const PropsConfig& cfg);

/// Every suite above, in a fixed order.
std::vector<SuiteResult> run_all_suites(const PropsConfig& cfg);

nlohmann::ordered_json to_json(const SuiteResult& r);
nlohmann::ordered_json props_summary(const PropsConfig& cfg, const std::vector<SuiteResult>& results);

}  // namespace slcurv
