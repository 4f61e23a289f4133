#include "slcurv/props.hpp"

#include "slcurv/diag.hpp"
#include "slcurv/oracles.hpp"
#include "slcurv/slcalc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace slcurv {

namespace {

using oracles::Sampler;
constexpr double kPi = std::numbers::pi;

class Tracker {
public:
    Tracker(std::string name, const PropsConfig& cfg, double tol) : cfg_(cfg)
    {
        r_.name = std::move(name);
        r_.samples = cfg.samples;
        r_.tol = cfg.tol.value_or(tol);
        r_.worst_slack = std::numeric_limits<double>::infinity();
    }

    /// Tolerance of a check that has its own default; the config override wins.
    double tol(double own) const { return cfg_.tol.value_or(own); }

    /// err ≤ tol
    void bound(double err, const std::string& what) { bound(err, r_.tol, what); }
    void bound(double err, double tol, const std::string& what) { record(std::isnan(err) ? -1.0 : tol - err, what); }

    /// lhs ≤ rhs + tol·scale
    void le(double lhs, double rhs, double scale, const std::string& what) { le(lhs, rhs, scale, r_.tol, what); }
    void le(double lhs, double rhs, double scale, double tol, const std::string& what)
    {
        record(rhs + tol * scale - lhs, what);
    }

    /// a condition with no tolerance
    void require(bool ok, const std::string& what) { record(ok ? 0.0 : -1.0, what); }

    SuiteResult done()
    {
        std::stable_sort(worst_.begin(), worst_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& w : worst_) {
            r_.witnesses.push_back(w.second);
        }
        if (r_.checks == 0) {
            r_.worst_slack = 0.0;
        }
        return r_;
    }

private:
    void record(double slack, const std::string& what)
    {
        if (std::isnan(slack)) {
            slack = -std::numeric_limits<double>::infinity();
        }
        ++r_.checks;
        if (slack < 0.0) {
            ++r_.failures;
        }
        r_.worst_slack = std::min(r_.worst_slack, slack);
        if (worst_.size() < 5 || slack < worst_.back().first) {
            std::ostringstream os;
            os.precision(6);
            os << what << " (slack " << slack << ")";
            worst_.emplace_back(slack, os.str());
            std::stable_sort(worst_.begin(), worst_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
            if (worst_.size() > 5) {
                worst_.pop_back();
            }
        }
    }

    const PropsConfig& cfg_;
    SuiteResult r_;
    std::vector<std::pair<double, std::string>> worst_;
};

std::string tag(const char* what, int i)
{
    return std::string(what) + " #" + std::to_string(i);
}

double admissible_theta(int n, Sampler& s)
{
    return s.uniform((n - 1) * kPi / 2.0, n * kPi / 2.0 - 1e-2);
}

double det(const SymMat& a)
{
    const auto e = eigendecompose(a);
    double d = 1.0;
    for (double l : e.eigenvalues()) {
        d *= l;
    }
    return d;
}

// |a − b| / max(|b|, 1e-3·scale): relative error, guarded against linear
// forms that happen to vanish along a random direction.
double rel(double a, double b, double scale)
{
    return std::abs(a - b) / std::max(std::abs(b), 1e-3 * scale);
}

double frob_norm(const SymMat& a)
{
    return std::sqrt(frobenius(a, a));
}

}  // namespace

SuiteResult suite_special_forms(const PropsConfig& cfg)
{
    Tracker t("special_forms", cfg, 1e-10);
    Sampler s(cfg.seed);
    for (int i = 0; i < cfg.samples; ++i) {
        const SymMat a = oracles::random_spd(2, s);
        const double ref = std::sqrt(det(a));
        t.bound(std::abs(r_theta(a, kPi / 2.0).r - ref) / ref, tag("n=2 R = K^1/2", i));
    }
    for (int i = 0; i < cfg.samples; ++i) {
        const SymMat a = oracles::random_spd(3, s);
        const double ref = std::sqrt(det(a) / a.trace());
        t.bound(std::abs(r_theta(a, kPi).r - ref) / ref, t.tol(1e-9), tag("n=3 R = (K/H)^1/2", i));
    }
    return t.done();
}

SuiteResult suite_concavity(const PropsConfig& cfg)
{
    Tracker t("concavity", cfg, 1e-9);
    Sampler s(cfg.seed + 1);
    for (int i = 0; i < cfg.samples; ++i) {
        const int n = s.integer(2, 5);
        const double theta = admissible_theta(n, s);
        const SymMat a = oracles::random_spd(n, s);
        const SymMat b = oracles::random_spd(n, s);
        const double w = s.uniform(0.0, 1.0);
        const double mix = r_theta(w * a + (1.0 - w) * b, theta).r;
        const double chord = w * r_theta(a, theta).r + (1.0 - w) * r_theta(b, theta).r;
        t.le(chord, mix, 1.0, tag("segment", i));
    }
    return t.done();
}

SuiteResult suite_homogeneity(const PropsConfig& cfg)
{
    Tracker t("homogeneity", cfg, 1e-10);
    Sampler s(cfg.seed + 2);
    for (int i = 0; i < cfg.samples; ++i) {
        const int n = s.integer(2, 6);
        const double theta = admissible_theta(n, s);
        const SymMat a = oracles::random_spd(n, s);
        const double c = s.log_uniform(1e-3, 1e3);
        const double r = r_theta(a, theta).r;
        t.bound(std::abs(r_theta(c * a, theta).r - c * r) / (c * r), tag("R(cA) = cR(A)", i));
    }
    return t.done();
}

SuiteResult suite_orthogonal_invariance(const PropsConfig& cfg)
{
    Tracker t("orthogonal_invariance", cfg, 1e-10);
    Sampler s(cfg.seed + 3);
    for (int i = 0; i < cfg.samples; ++i) {
        const int n = s.integer(2, 8);
        const SymMat a = oracles::random_sym(n, s);
        const DenseMat q = oracles::random_orthogonal(n, s);
        t.bound(std::abs(arctan_sym(conjugate(a, q)) - arctan_sym(a)), tag("arctan(QAQ^T)", i));
    }
    return t.done();
}

SuiteResult suite_loewner(const PropsConfig& cfg)
{
    Tracker t("loewner_monotone", cfg, 1e-12);
    Sampler s(cfg.seed + 4);
    for (int i = 0; i < cfg.samples; ++i) {
        const int n = s.integer(2, 6);
        const SymMat a = oracles::random_sym(n, s);
        const SymMat b = a + oracles::random_psd(n, s);
        const double r = s.log_uniform(0.1, 10.0);
        t.le(sl(a, r), sl(b, r), 1.0, tag("A <= B", i));
    }
    return t.done();
}

SuiteResult suite_decreasing_in_r(const PropsConfig& cfg)
{
    Tracker t("decreasing_in_r", cfg, 0.0);
    Sampler s(cfg.seed + 5);
    for (int i = 0; i < cfg.samples; ++i) {
        const int n = s.integer(2, 6);
        const SymMat a = oracles::random_spd(n, s);
        const double r1 = s.log_uniform(0.1, 10.0);
        const double r2 = r1 * (1.0 + s.uniform(1e-2, 1.0));
        t.require(sl(a, r2) < sl(a, r1), tag("SL_r2 < SL_r1", i));
    }
    return t.done();
}

SuiteResult suite_defining_identity(const PropsConfig& cfg)
{
    Tracker t("defining_identity", cfg, 1e-12);
    Sampler s(cfg.seed + 6);
    for (int i = 0; i < cfg.samples; ++i) {
        const int n = s.integer(2, 8);
        const double theta = s.uniform(1e-2, n * kPi / 2.0 - 1e-2);
        const SymMat a = oracles::random_spd(n, s);
        t.bound(std::abs(sl(a, r_theta(a, theta).r) - theta), tag("SL_R(A) = theta", i));
    }
    return t.done();
}

SuiteResult suite_d_sl(const PropsConfig& cfg)
{
    Tracker t("d_sl_fd", cfg, 1e-6);
    Sampler s(cfg.seed + 7);
    for (int i = 0; i < cfg.samples; ++i) {
        const int n = s.integer(2, 5);
        const SymMat a = oracles::random_spd(n, s, 0.1, 10.0);
        const SymMat m = oracles::random_sym(n, s);
        const double r = s.log_uniform(0.3, 3.0);
        const SymMat g = d_sl(a, r).grad;
        const double fd = oracles::central_first([&](double e) { return sl(a + e * m, r); }, 1e-5);
        t.bound(rel(frobenius(g, m), fd, frob_norm(g) * frob_norm(m)), tag("<G,M> vs FD", i));
    }
    return t.done();
}

SuiteResult suite_d2_sigma(const PropsConfig& cfg)
{
    Tracker t("d2_sigma_fd", cfg, 1e-5);
    Sampler s(cfg.seed + 8);
    for (int i = 0; i < cfg.samples; ++i) {
        const int n = s.integer(2, 5);
        const SymMat a = oracles::random_spd(n, s, 0.1, 10.0);
        const SymMat m = oracles::random_sym(n, s);
        const double d2 = d2_sigma(a, m);
        const double fd = oracles::central_second([&](double e) { return arctan_sym(a + e * m); }, 2e-3);
        t.bound(rel(d2, fd, frobenius(m, m)), tag("D2 sigma vs FD", i));
        t.le(d2, 0.0, 1.0, t.tol(1e-12), tag("D2 sigma <= 0", i));
    }
    return t.done();
}

SuiteResult suite_d_r(const PropsConfig& cfg)
{
    Tracker t("d_r_fd", cfg, 1e-6);
    Sampler s(cfg.seed + 9);
    for (int i = 0; i < cfg.samples; ++i) {
        const int n = s.integer(2, 5);
        const double theta = admissible_theta(n, s);
        const SymMat a = oracles::random_spd(n, s, 0.1, 10.0);
        const SymMat m = oracles::random_sym(n, s);
        const SymMat g = d_r(a, theta);
        const double h = 1e-5 * eigendecompose(a).min() / std::max(m.norm_inf(), 1e-300);
        const double fd = oracles::central_first([&](double e) { return r_theta(a + e * m, theta).r; }, h);
        t.bound(rel(frobenius(g, m), fd, frob_norm(g) * frob_norm(m)), tag("<G_r,M> vs FD", i));
    }
    return t.done();
}

SuiteResult suite_euler(const PropsConfig& cfg)
{
    Tracker t("euler_identity", cfg, 1e-10);
    Sampler s(cfg.seed + 10);
    for (int i = 0; i < cfg.samples; ++i) {
        const int n = s.integer(2, 8);
        const double theta = admissible_theta(n, s);
        const SymMat a = oracles::random_spd(n, s);
        const double r = r_theta(a, theta).r;
        t.bound(std::abs(frobenius(d_r(a, theta), a) - r) / r, tag("<G_r,A> = r", i));
    }
    return t.done();
}

SuiteResult suite_k_bounds(const PropsConfig& cfg)
{
    Tracker t("k_bounds", cfg, 1e-10);
    Sampler s(cfg.seed + 11);
    for (int i = 0; i < cfg.samples; ++i) {
        const int n = s.integer(2, 6);
        const int k = s.integer(0, 4 * n - 1);
        const double theta = (n - 1) * kPi / 2.0 + k * kPi / (8.0 * n);
        const SymMat a = oracles::random_spd(n, s);
        const double l1 = eigendecompose(a).min();
        const double r = r_theta(a, theta).r;
        const KBounds kb = k_bounds(n, theta);
        t.le(kb.k1 * l1, r, r, tag("K1 l1 <= R", i));
        if (std::isfinite(kb.k2)) {
            t.le(r, kb.k2 * l1, r, tag("R <= K2 l1", i));
        }
    }
    return t.done();
}

SuiteResult suite_mu_oracle(const PropsConfig& cfg)
{
    Tracker t("mu_oracle", cfg, 1e-9);
    Sampler s(cfg.seed + 12);
    const std::array<double, 2> three{3.0, 3.0};
    t.bound(std::abs(mu_boundary(three, 1.0, 5.0 * kPi / 4.0) - 7.0) / 7.0, "mu([3,3],1,5pi/4) = 7");
    for (int i = 0; i < cfg.samples; ++i) {
        const int n = s.integer(2, 5);
        std::vector<double> lams(static_cast<std::size_t>(n - 1));
        for (auto& l : lams) {
            l = s.log_uniform(1e-2, 1e2);
        }
        const double r = s.log_uniform(0.1, 10.0);
        const double theta = s.uniform((n - 1) * kPi / 2.0, n * kPi / 2.0);
        const double mu = mu_boundary(lams, r, theta);
        const double ref = oracles::mu_bisection(lams, r, theta);
        if (std::isinf(mu) || std::isinf(ref)) {
            t.require(std::isinf(mu) && std::isinf(ref), tag("finite/infinite class", i));
        } else {
            t.bound(std::abs(mu - ref) / std::abs(ref), tag("closed form vs bisection", i));
        }
    }
    return t.done();
}

SuiteResult suite_mu_monotone(const PropsConfig& cfg)
{
    Tracker t("mu_monotone", cfg, 0.0);
    Sampler s(cfg.seed + 13);
    for (int i = 0; i < cfg.samples; ++i) {
        const int n = s.integer(2, 5);
        std::vector<double> lams(static_cast<std::size_t>(n - 1));
        for (auto& l : lams) {
            l = s.log_uniform(1e-2, 1e2);
        }
        const double r = s.log_uniform(0.1, 10.0);
        const double theta = s.uniform((n - 1) * kPi / 2.0, n * kPi / 2.0);
        const double mu = mu_boundary(lams, r, theta);
        if (!std::isfinite(mu)) {
            continue;
        }
        auto bumped = lams;
        const auto which = static_cast<std::size_t>(s.integer(0, n - 2));
        bumped[which] *= 1.0 + s.uniform(1e-2, 1.0);
        t.require(mu_boundary(bumped, r, theta) < mu, tag("mu strictly decreasing", i));
    }
    return t.done();
}

SuiteResult suite_f_threshold(const PropsConfig& cfg)
{
    Tracker t("f_threshold", cfg, 1e-15);
    Sampler s(cfg.seed + 14);
    t.bound(std::abs(f_threshold(2.0, 1.0, 1.0) - 0.3), "F(2,1,1) = 0.3");
    for (int i = 0; i < cfg.samples; ++i) {
        const double x = s.log_uniform(1e-3, 1e3);
        const double y = s.log_uniform(1e-3, 1e3);
        const double r = s.log_uniform(0.1, 10.0);
        const double f = f_threshold(x, y, r);
        const double scale = std::max(1.0, std::abs(f));
        t.bound(std::abs(f - f_threshold(y, x, r)) / scale, tag("F symmetric", i));
        t.le(0.0, f, 1.0, tag("F >= 0", i));
        const double big = s.uniform(10.0, 1e4);
        t.le(big / 8.0, f_threshold(big, 1.0, 1.0), 1.0, tag("F(x,1,1) >= x/8", i));
    }
    return t.done();
}

std::vector<SuiteResult> run_all_suites(const PropsConfig& cfg)
{
    return {suite_special_forms(cfg), suite_concavity(cfg),       suite_homogeneity(cfg),
            suite_orthogonal_invariance(cfg), suite_loewner(cfg), suite_decreasing_in_r(cfg),
            suite_defining_identity(cfg), suite_d_sl(cfg),        suite_d2_sigma(cfg),
            suite_d_r(cfg),               suite_euler(cfg),       suite_k_bounds(cfg),
            suite_mu_oracle(cfg),         suite_mu_monotone(cfg), suite_f_threshold(cfg)};
}

nlohmann::ordered_json to_json(const SuiteResult& r)
{
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["pass"] = r.pass();
    j["samples"] = r.samples;
    j["checks"] = r.checks;
    j["failures"] = r.failures;
    j["tol"] = r.tol;
    j["worst_slack"] = r.worst_slack;
    j["witnesses"] = r.witnesses;
    return j;
}

nlohmann::ordered_json props_summary(const PropsConfig& cfg, const std::vector<SuiteResult>& results)
{
    nlohmann::ordered_json j;
    j["seed"] = cfg.seed;
    j["samples"] = cfg.samples;
    j["pass"] = std::all_of(results.begin(), results.end(), [](const SuiteResult& r) { return r.pass(); });
    j["suites"] = nlohmann::ordered_json::array();
    for (const auto& r : results) {
        j["suites"].push_back(to_json(r));
    }
    return j;
}

}  // namespace slcurv
