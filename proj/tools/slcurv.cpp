#include "slcurv/convexops.hpp"
#include "slcurv/diag.hpp"
#include "slcurv/io.hpp"
#include "slcurv/props.hpp"
#include "slcurv/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

namespace {

using namespace slcurv;
using json = nlohmann::json;

enum Exit { kOk = 0, kPropertyFailure = 1, kInvalid = 2, kNoConvergence = 3, kIo = 4 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flag values; unset optionals fall back to the config file, then defaults.
struct Flags {
    std::string config;
    std::optional<int> n;
    std::optional<double> theta;
    std::optional<double> rhat;
    std::optional<double> r;
    std::optional<std::string> domain;
    std::optional<std::string> grid;
    std::optional<std::string> out;
    std::optional<std::string> report;
    std::optional<std::string> obj;
    std::optional<std::string> graph;
    std::optional<int> workers;
    std::optional<double> tol;
    std::optional<int> max_newton;
    std::optional<double> rhat_start;
    std::optional<int> steps;
    std::optional<std::string> schedule;
    std::optional<std::uint64_t> seed;
    std::optional<int> samples;
    std::optional<double> lambda;
    bool timing = false;
};

struct RunConfig {
    int n = 2;
    std::optional<double> theta;
    std::optional<double> rhat;
    std::optional<double> r;
    DomainSpec domain = DomainSpec::disk(1.0);
    int ns = 32;
    int nalpha = 64;
    std::string out;
    std::string report;
    std::string obj;
    std::string graph;
    SolveConfig solve;
    int samples = 1000;
    std::uint64_t seed = 42;
    std::optional<double> tol;
    std::optional<double> lambda;
    bool timing = false;
};

void note(const std::string& msg)
{
    std::cerr << "slcurv: " << msg << '\n';
}

std::pair<int, int> parse_grid(const std::string& text)
{
    const auto x = text.find('x');
    if (x == std::string::npos) {
        throw UsageError("grid must look like NsxNalpha, got '" + text + "'");
    }
    try {
        std::size_t a = 0;
        std::size_t b = 0;
        const int ns = std::stoi(text.substr(0, x), &a);
        const int na = std::stoi(text.substr(x + 1), &b);
        if (a != x || b != text.size() - x - 1) {
            throw UsageError("");
        }
        return {ns, na};
    } catch (const std::exception&) {
        throw UsageError("grid must look like NsxNalpha, got '" + text + "'");
    }
}

template <class T>
std::optional<T> from_file(const json& cfg, const char* key)
{
    if (!cfg.contains(key)) {
        return std::nullopt;
    }
    try {
        return cfg.at(key).get<T>();
    } catch (const json::exception&) {
        throw UsageError(std::string("config key '") + key + "' has the wrong type");
    }
}

template <class T>
std::optional<T> pick(const std::optional<T>& flag, const json& cfg, const char* key)
{
    return flag ? flag : from_file<T>(cfg, key);
}

RunConfig resolve(const Flags& f)
{
    json cfg = json::object();
    if (!f.config.empty()) {
        std::ifstream is(f.config);
        if (!is) {
            throw IoError("cannot open config '" + f.config + "'");
        }
        try {
            cfg = json::parse(is);
        } catch (const json::exception& e) {
            throw UsageError("config '" + f.config + "' is not valid JSON");
        }
        if (!cfg.is_object()) {
            throw UsageError("config '" + f.config + "' must hold a JSON object");
        }
        static const char* known[] = {"n",         "theta", "rhat",       "r",     "domain",   "grid",
                                      "out",       "report", "obj",       "graph", "workers",  "tol",
                                      "max_newton", "rhat_start", "steps", "schedule", "seed", "samples",
                                      "lambda",    "timing"};
        for (const auto& [key, _] : cfg.items()) {
            if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
                throw UsageError("unknown config key '" + key + "'");
            }
        }
    }

    RunConfig rc;
    rc.n = pick(f.n, cfg, "n").value_or(2);
    rc.theta = pick(f.theta, cfg, "theta");
    rc.rhat = pick(f.rhat, cfg, "rhat");
    rc.r = pick(f.r, cfg, "r");
    if (auto d = pick(f.domain, cfg, "domain")) {
        rc.domain = DomainSpec::parse(*d);
    }
    if (auto g = pick(f.grid, cfg, "grid")) {
        std::tie(rc.ns, rc.nalpha) = parse_grid(*g);
    }
    rc.out = pick(f.out, cfg, "out").value_or("");
    rc.report = pick(f.report, cfg, "report").value_or("");
    rc.obj = pick(f.obj, cfg, "obj").value_or("");
    rc.graph = pick(f.graph, cfg, "graph").value_or("");
    rc.tol = pick(f.tol, cfg, "tol");
    if (rc.tol) {
        rc.solve.tol = *rc.tol;
    }
    if (auto m = pick(f.max_newton, cfg, "max_newton")) {
        rc.solve.max_newton = *m;
    }
    if (auto s = pick(f.rhat_start, cfg, "rhat_start")) {
        rc.solve.homotopy.rhat_start = *s;
    }
    if (auto s = pick(f.steps, cfg, "steps")) {
        rc.solve.homotopy.steps = *s;
    }
    if (auto s = pick(f.schedule, cfg, "schedule")) {
        if (*s == "linear") {
            rc.solve.homotopy.schedule = Schedule::linear;
        } else if (*s == "geometric") {
            rc.solve.homotopy.schedule = Schedule::geometric;
        } else {
            throw UsageError("schedule must be linear or geometric");
        }
    }
    rc.seed = pick(f.seed, cfg, "seed").value_or(42);
    rc.solve.seed = rc.seed;
    rc.samples = pick(f.samples, cfg, "samples").value_or(1000);
    rc.lambda = pick(f.lambda, cfg, "lambda");
    rc.timing = f.timing || from_file<bool>(cfg, "timing").value_or(false);

    std::optional<int> workers = f.workers;
    if (!workers) {
        if (const char* env = std::getenv("SLCURV_WORKERS")) {
            char* end = nullptr;
            const long w = std::strtol(env, &end, 10);
            if (end == env || *end != '\0' || w < 1 || w > 1024) {
                throw UsageError("SLCURV_WORKERS must be a positive integer");
            }
            workers = static_cast<int>(w);
        }
    }
    if (!workers) {
        workers = from_file<int>(cfg, "workers");
    }
    rc.solve.workers = workers.value_or(1);
    if (rc.solve.workers < 1) {
        throw UsageError("workers must be positive");
    }
    if (rc.samples < 1) {
        throw UsageError("samples must be positive");
    }
    return rc;
}

/// θ from the config, snapped onto (n−1)π/2 when it is within 1e-6.
double resolve_theta(const RunConfig& rc, double fallback)
{
    double theta = rc.theta.value_or(fallback);
    const double edge = (rc.n - 1) * std::numbers::pi / 2.0;
    if (theta != edge && std::abs(theta - edge) <= 1e-6) {
        note("theta=" + format_double(theta) + " snapped to (n-1)pi/2=" + format_double(edge));
        theta = edge;
    }
    return theta;
}

CurvatureQuery resolve_query(const RunConfig& rc)
{
    if (rc.n < 2 || rc.n > kMaxDim) {
        throw UsageError("n must lie in [2, 8]");
    }
    if (!rc.theta) {
        throw UsageError("--theta is required");
    }
    const double theta = resolve_theta(rc, 0.0);
    if (rc.rhat && rc.r) {
        throw UsageError("give either --rhat or --r, not both");
    }
    CurvatureQuery q;
    if (rc.r) {
        if (!(*rc.r > 0.0)) {
            throw UsageError("r must be positive");
        }
        q = CurvatureQuery::from_r(rc.n, theta, *rc.r);
        note("converted r=" + format_double(*rc.r) + " to rhat=" + format_double(q.rhat));
    } else if (rc.rhat) {
        if (!(*rc.rhat > 0.0)) {
            throw UsageError("rhat must be positive");
        }
        q = CurvatureQuery::from_rhat(rc.n, theta, *rc.rhat);
    } else {
        throw UsageError("--rhat (or --r) is required");
    }
    q.validate(true);
    return q;
}

void check_grid(const RunConfig& rc)
{
    rc.domain.validate();
    Grid(rc.domain, rc.ns, rc.nalpha);
}

int cmd_solve(const RunConfig& rc)
{
    const CurvatureQuery q = resolve_query(rc);
    check_grid(rc);
    if (rc.out.empty() || rc.report.empty()) {
        throw UsageError("solve needs --out and --report");
    }
    if (q.n != 2 && rc.domain.kind != DomainKind::disk) {
        throw UsageError("n >= 3 needs a disk domain");
    }
    if (std::abs(q.theta - (q.n - 1) * std::numbers::pi / 2.0) <= 1e-12) {
        note("warning: theta is the boundary angle (n-1)pi/2; solving at theta+1e-3 and polishing");
    }
    rc.solve.validate(q.rhat);

    const ContinuityResult res = continuity_solve(rc.domain, rc.ns, rc.nalpha, q, rc.solve);
    write_graph(rc.out, res.f, GraphHeader{q.n, q.theta, q.rhat});

    nlohmann::ordered_json rep = to_json(res.report, rc.timing);
    if (res.report.converged) {
        // Ceiling: horospheric cap over the circumscribed disk.
        const double rho_out = res.f.grid().rho_max();
        const UmbilicCap horo(1.0, rho_out);
        const GraphFn ceiling = GraphFn::sample(res.f.grid(), [&](double s, double) { return horo.height(s); });
        nlohmann::ordered_json diag;
        try {
            diag["horosphere"] = to_json(max_principle_check(res.f, ceiling, q, 1e-8, rc.solve.workers));
        } catch (const DomainError& e) {
            diag["horosphere"] = {{"pass", false}, {"error", e.what()}};
        }
        if (q.n == 2 || rc.domain.kind == DomainKind::disk) {
            try {
                const double h = res.f.grid().h();
                const ProbeResult p = subharmonic_probe(res.f, q, 5.0 * h * h, rc.solve.workers);
                diag["subharmonic"] = {{"j", p.j},          {"k", p.k},         {"H", p.h_max},
                                       {"delta_b_H", p.delta_b_h}, {"F_sum", p.f_sum}, {"pass", p.verdict.pass}};
            } catch (const DomainError& e) {
                diag["subharmonic"] = {{"pass", false}, {"error", e.what()}};
            }
        }
        rep["diagnostics"] = diag;
    }
    write_text(rc.report, rep.dump(2) + "\n");
    if (!rc.obj.empty()) {
        write_obj(rc.obj, res.f);
    }
    if (!res.report.converged) {
        note("solver did not converge: " + res.report.failure);
        return kNoConvergence;
    }
    return kOk;
}

int cmd_curvature(const RunConfig& rc)
{
    if (rc.graph.empty() || rc.out.empty()) {
        throw UsageError("curvature needs --graph and --out");
    }
    const GraphFile file = read_graph(std::filesystem::path(rc.graph));
    RunConfig eff = rc;
    eff.n = rc.theta || rc.rhat || rc.r ? rc.n : file.header.n;
    if (!eff.theta) {
        eff.theta = file.header.theta;
    }
    if (!eff.rhat && !eff.r) {
        if (file.header.rhat == 0.0) {
            throw UsageError("graph header records no curvature level; pass --rhat or --r");
        }
        eff.rhat = file.header.rhat;
    }
    const CurvatureQuery q = resolve_query(eff);
    const ShapeField sf = shape_field(file.f, q, rc.solve.workers);
    write_curvature(rc.out, sf, file.f.grid());
    return kOk;
}

int cmd_props(const RunConfig& rc)
{
    PropsConfig pc;
    pc.samples = rc.samples;
    pc.seed = rc.seed;
    pc.tol = rc.tol;
    const auto results = run_all_suites(pc);
    const auto summary = props_summary(pc, results);
    const std::string text = summary.dump(2) + "\n";
    if (rc.out.empty()) {
        std::cout << text;
    } else {
        write_text(rc.out, text);
    }
    if (!summary["pass"].get<bool>()) {
        for (const auto& r : results) {
            if (!r.pass()) {
                note("suite " + r.name + " failed (" + std::to_string(r.failures) + "/" + std::to_string(r.checks) +
                     "), worst: " + (r.witnesses.empty() ? "" : r.witnesses.front()));
            }
        }
        return kPropertyFailure;
    }
    return kOk;
}

int cmd_cap(const RunConfig& rc)
{
    if (!rc.lambda || !(*rc.lambda >= 0.0 && *rc.lambda <= 1.0)) {
        throw UsageError("cap needs --lambda in [0, 1]");
    }
    if (rc.domain.kind != DomainKind::disk) {
        throw UsageError("caps span disk domains only");
    }
    if (rc.out.empty()) {
        throw UsageError("cap needs --out");
    }
    check_grid(rc);
    const double theta = resolve_theta(rc, (rc.n - 1) * std::numbers::pi / 2.0);
    const Grid grid(rc.domain, rc.ns, rc.nalpha);
    write_graph(rc.out, umbilic_cap(*rc.lambda, grid), GraphHeader{rc.n, theta, *rc.lambda});
    if (!rc.obj.empty()) {
        write_obj(rc.obj, umbilic_cap(*rc.lambda, grid));
    }
    return kOk;
}

void add_query(CLI::App* app, Flags& f)
{
    app->add_option("--n", f.n, "dimension of the hypersurface (2..8)");
    app->add_option("--theta", f.theta, "angle in radians");
    app->add_option("--rhat", f.rhat, "rescaled curvature level tan(theta/n)*r");
    app->add_option("--r", f.r, "unscaled curvature level (converted to rhat)");
}

void add_common(CLI::App* app, Flags& f)
{
    app->add_option("--config", f.config, "JSON file with default values (flags win)");
    app->add_option("--workers", f.workers, "worker threads (also SLCURV_WORKERS)");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Special Lagrangian curvature graphs in hyperbolic space"};
    app.require_subcommand(1);
    Flags f;

    auto* solve = app.add_subcommand("solve", "continuity solve of the Dirichlet problem");
    add_common(solve, f);
    add_query(solve, f);
    solve->add_option("--domain", f.domain, "disk:<rho> or star:<rho>:k=a,...");
    solve->add_option("--grid", f.grid, "lattice NsxNalpha");
    solve->add_option("--out", f.out, "graph CSV");
    solve->add_option("--report", f.report, "report JSON");
    solve->add_option("--obj", f.obj, "optional OBJ mesh");
    solve->add_option("--tol", f.tol, "Newton residual target (sup norm)");
    solve->add_option("--max-newton", f.max_newton, "Newton iterations per level");
    solve->add_option("--rhat-start", f.rhat_start, "first continuation level");
    solve->add_option("--steps", f.steps, "continuation steps");
    solve->add_option("--schedule", f.schedule, "linear or geometric");
    solve->add_option("--seed", f.seed, "seed");
    solve->add_flag("--timing", f.timing, "include runtime_s in the report");

    auto* curv = app.add_subcommand("curvature", "per-node curvature of a graph CSV");
    add_common(curv, f);
    add_query(curv, f);
    curv->add_option("--graph", f.graph, "input graph CSV");
    curv->add_option("--out", f.out, "output CSV");

    auto* props = app.add_subcommand("props", "run the property suites");
    add_common(props, f);
    props->add_option("--samples", f.samples, "samples per suite");
    props->add_option("--seed", f.seed, "seed");
    props->add_option("--tol", f.tol, "override every suite tolerance");
    props->add_option("--out", f.out, "summary JSON (default stdout)");

    auto* cap = app.add_subcommand("cap", "emit an umbilic cap as a graph CSV");
    add_common(cap, f);
    cap->add_option("--lambda", f.lambda, "cap curvature in [0, 1]");
    cap->add_option("--n", f.n, "dimension recorded in the header");
    cap->add_option("--theta", f.theta, "angle recorded in the header");
    cap->add_option("--domain", f.domain, "disk:<rho>");
    cap->add_option("--grid", f.grid, "lattice NsxNalpha");
    cap->add_option("--out", f.out, "graph CSV");
    cap->add_option("--obj", f.obj, "optional OBJ mesh");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        note(msg);
        return kInvalid;
    }

    try {
        const RunConfig rc = resolve(f);
        if (solve->parsed()) {
            return cmd_solve(rc);
        }
        if (curv->parsed()) {
            return cmd_curvature(rc);
        }
        if (props->parsed()) {
            return cmd_props(rc);
        }
        return cmd_cap(rc);
    } catch (const IoError& e) {
        note(e.what());
        return kIo;
    } catch (const std::filesystem::filesystem_error& e) {
        note(e.what());
        return kIo;
    } catch (const UsageError& e) {
        note(e.what());
        return kInvalid;
    } catch (const DomainError& e) {
        note(e.what());
        return kInvalid;
    } catch (const NumericError& e) {
        note(e.what());
        return kNoConvergence;
    }
}
