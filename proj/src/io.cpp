#include "slcurv/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

namespace slcurv {

namespace {

constexpr const char* kMagic = "# slcurv-graph v1";

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    return os;
}

void finish(std::ofstream& os, const std::filesystem::path& path)
{
    os.flush();
    if (!os) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        out.push_back(cur);
    }
    if (!s.empty() && s.back() == sep) {
        out.emplace_back();
    }
    return out;
}

double parse_double(const std::string& v, int line, const std::string& what)
{
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        throw FormatError(line, "bad number for " + what + ": '" + v + "'");
    }
    if (used != v.size() || !std::isfinite(x)) {
        throw FormatError(line, "bad number for " + what + ": '" + v + "'");
    }
    return x;
}

int parse_int(const std::string& v, int line, const std::string& what)
{
    std::size_t used = 0;
    long x = 0;
    try {
        x = std::stol(v, &used);
    } catch (const std::exception&) {
        throw FormatError(line, "bad integer for " + what + ": '" + v + "'");
    }
    if (used != v.size()) {
        throw FormatError(line, "bad integer for " + what + ": '" + v + "'");
    }
    return static_cast<int>(x);
}

bool close(double a, double b)
{
    return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(b));
}

}  // namespace

FormatError::FormatError(int line, const std::string& what)
    : DomainError(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line)
{
}

std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_graph(std::ostream& os, const GraphFn& f, const GraphHeader& h)
{
    const Grid& grid = f.grid();
    const DomainSpec& dom = grid.domain();
    os << kMagic << '\n';
    os << "n=" << h.n << " theta=" << format_double(h.theta) << " rhat=" << format_double(h.rhat)
       << " domain=" << (dom.kind == DomainKind::disk ? "disk" : "star") << " rho=" << format_double(dom.rho)
       << " Ns=" << grid.ns() << " Nalpha=" << grid.nalpha();
    if (!dom.fourier.empty()) {
        os << " fourier=";
        for (std::size_t i = 0; i < dom.fourier.size(); ++i) {
            os << (i ? "," : "") << dom.fourier[i].first << ':' << format_double(dom.fourier[i].second);
        }
    }
    os << '\n' << "j,k,s,alpha,f\n";
    for (int j = 0; j <= grid.ns(); ++j) {
        for (int k = 0; k < grid.nalpha(); ++k) {
            os << j << ',' << k << ',' << format_double(grid.s(j, k)) << ',' << format_double(grid.alpha(k)) << ','
               << format_double(f.at(j, k)) << '\n';
        }
    }
}

void write_graph(const std::filesystem::path& path, const GraphFn& f, const GraphHeader& h)
{
    auto os = open_out(path);
    write_graph(os, f, h);
    finish(os, path);
}

GraphFile read_graph(std::istream& is)
{
    std::string line;
    int no = 1;
    if (!std::getline(is, line)) {
        throw FormatError(1, "empty file");
    }
    if (line != kMagic) {
        throw FormatError(1, "expected header '" + std::string(kMagic) + "', got '" + line + "'");
    }
    ++no;
    if (!std::getline(is, line)) {
        throw FormatError(no, "missing parameter line");
    }
    std::map<std::string, std::string> kv;
    for (const auto& tok : split(line, ' ')) {
        if (tok.empty()) {
            continue;
        }
        const auto eq = tok.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw FormatError(no, "expected key=value, got '" + tok + "'");
        }
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    auto need = [&](const std::string& key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) {
            throw FormatError(no, "missing key '" + key + "'");
        }
        return it->second;
    };
    GraphHeader h;
    h.n = parse_int(need("n"), no, "n");
    h.theta = parse_double(need("theta"), no, "theta");
    h.rhat = parse_double(need("rhat"), no, "rhat");
    const std::string kind = need("domain");
    const double rho = parse_double(need("rho"), no, "rho");
    const int ns = parse_int(need("Ns"), no, "Ns");
    const int nalpha = parse_int(need("Nalpha"), no, "Nalpha");
    std::vector<std::pair<int, double>> modes;
    if (auto it = kv.find("fourier"); it != kv.end()) {
        for (const auto& m : split(it->second, ',')) {
            const auto colon = m.find(':');
            if (colon == std::string::npos) {
                throw FormatError(no, "bad fourier entry '" + m + "'");
            }
            modes.emplace_back(parse_int(m.substr(0, colon), no, "fourier mode"),
                               parse_double(m.substr(colon + 1), no, "fourier amplitude"));
        }
    }
    const std::size_t known = kv.count("fourier") + 7;
    if (kv.size() != known) {
        throw FormatError(no, "unexpected key in parameter line");
    }
    if (kind == "disk" && !modes.empty()) {
        throw FormatError(no, "disk domain with fourier modes");
    }
    if (kind != "disk" && kind != "star") {
        throw FormatError(no, "unknown domain '" + kind + "'");
    }
    Grid grid = [&] {
        try {
            // rhat = 0 records a graph without a curvature level (the geodesic cap)
            if (!(h.rhat >= 0.0 && h.rhat <= 1.0)) {
                throw DomainError("rhat must lie in [0, 1]");
            }
            CurvatureQuery::from_rhat(h.n, h.theta, h.rhat > 0.0 ? h.rhat : 1.0).validate();
            const DomainSpec dom = kind == "disk" ? DomainSpec::disk(rho) : DomainSpec::star(rho, modes);
            return Grid(dom, ns, nalpha);
        } catch (const DomainError& e) {
            throw FormatError(no, e.what());
        }
    }();

    ++no;
    if (!std::getline(is, line) || line != "j,k,s,alpha,f") {
        throw FormatError(no, "expected column header 'j,k,s,alpha,f'");
    }
    GraphFn f(grid);
    for (int j = 0; j <= ns; ++j) {
        for (int k = 0; k < nalpha; ++k) {
            ++no;
            if (!std::getline(is, line)) {
                throw FormatError(no, "unexpected end of file");
            }
            const auto cols = split(line, ',');
            if (cols.size() != 5) {
                throw FormatError(no, "expected 5 columns");
            }
            if (parse_int(cols[0], no, "j") != j || parse_int(cols[1], no, "k") != k) {
                throw FormatError(no, "node out of order (expected " + std::to_string(j) + "," + std::to_string(k) + ")");
            }
            if (!close(parse_double(cols[2], no, "s"), grid.s(j, k)) ||
                !close(parse_double(cols[3], no, "alpha"), grid.alpha(k))) {
                throw FormatError(no, "coordinates do not match the lattice");
            }
            const double v = parse_double(cols[4], no, "f");
            if (grid.is_boundary(j) && v != 0.0) {
                throw FormatError(no, "boundary value must be 0");
            }
            f.at(j, k) = v;
        }
    }
    while (std::getline(is, line)) {
        ++no;
        if (!line.empty()) {
            throw FormatError(no, "trailing data");
        }
    }
    return {h, std::move(f)};
}

GraphFile read_graph(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    return read_graph(is);
}

void write_curvature(std::ostream& os, const ShapeField& sf, const Grid& grid)
{
    os << "j,k,lambda_min,lambda_max,H,rhat_theta,residual,admissible\n";
    for (std::size_t i = 0; i < sf.size(); ++i) {
        os << i / static_cast<std::size_t>(grid.nalpha()) << ',' << i % static_cast<std::size_t>(grid.nalpha()) << ','
           << format_double(sf.lambda_min[i]) << ',' << format_double(sf.lambda_max[i]) << ','
           << format_double(sf.mean[i]) << ',' << (sf.admissible[i] ? format_double(sf.rhat_theta[i]) : "nan") << ','
           << format_double(sf.residual[i]) << ',' << (sf.admissible[i] ? "true" : "false") << '\n';
    }
}

void write_curvature(const std::filesystem::path& path, const ShapeField& sf, const Grid& grid)
{
    auto os = open_out(path);
    write_curvature(os, sf, grid);
    finish(os, path);
}

void write_obj(std::ostream& os, const GraphFn& f)
{
    const Grid& grid = f.grid();
    auto vertex = [&](double s, double a, double t) {
        const auto p = poincare_project(fermi_embed(s, a, t));
        os << "v " << format_double(p[0]) << ' ' << format_double(p[1]) << ' ' << format_double(p[2]) << '\n';
    };
    double centre = 0.0;
    for (int k = 0; k < grid.nalpha(); ++k) {
        centre += f.at(0, k);
    }
    vertex(0.0, 0.0, centre / grid.nalpha());
    for (int j = 0; j <= grid.ns(); ++j) {
        for (int k = 0; k < grid.nalpha(); ++k) {
            vertex(grid.s(j, k), grid.alpha(k), f.at(j, k));
        }
    }
    // OBJ indices are 1-based; vertex 1 is the centre.
    auto id = [&](int j, int k) { return grid.index(j, k) + 2; };
    for (int k = 0; k < grid.nalpha(); ++k) {
        os << "f 1 " << id(0, k) << ' ' << id(0, k + 1) << '\n';
    }
    for (int j = 0; j < grid.ns(); ++j) {
        for (int k = 0; k < grid.nalpha(); ++k) {
            os << "f " << id(j, k) << ' ' << id(j + 1, k) << ' ' << id(j + 1, k + 1) << '\n';
            os << "f " << id(j, k) << ' ' << id(j + 1, k + 1) << ' ' << id(j, k + 1) << '\n';
        }
    }
}

void write_obj(const std::filesystem::path& path, const GraphFn& f)
{
    auto os = open_out(path);
    write_obj(os, f);
    finish(os, path);
}

namespace {

nlohmann::ordered_json level_json(const LevelRecord& l)
{
    nlohmann::ordered_json j;
    j["rhat"] = l.rhat;
    j["iters"] = l.iters;
    j["res"] = l.res;
    j["min_lambda1"] = l.min_lambda1;
    j["max_f"] = l.max_f;
    j["ordering_ok"] = l.ordering_ok;
    j["ordering_slack"] = l.ordering_slack;
    j["status"] = l.status;
    return j;
}

}  // namespace

nlohmann::ordered_json to_json(const SolveReport& r, bool timing)
{
    nlohmann::ordered_json j;
    j["levels"] = nlohmann::ordered_json::array();
    for (const auto& l : r.levels) {
        j["levels"].push_back(level_json(l));
    }
    j["converged"] = r.converged;
    j["grid"] = {{"domain", r.domain}, {"Ns", r.ns}, {"Nalpha", r.nalpha}};
    j["n"] = r.n;
    j["theta"] = r.theta;
    j["theta_solve"] = r.theta_solve;
    if (!r.prelude.empty()) {
        j["prelude"] = nlohmann::ordered_json::array();
        for (const auto& l : r.prelude) {
            j["prelude"].push_back(level_json(l));
        }
    }
    if (r.polish) {
        j["polish"] = level_json(*r.polish);
    }
    if (!r.failure.empty()) {
        j["failure"] = r.failure;
    }
    if (timing) {
        j["runtime_s"] = r.runtime_s;
    }
    return j;
}

nlohmann::ordered_json to_json(const Verdict& v)
{
    nlohmann::ordered_json j;
    j["pass"] = v.pass;
    j["checked"] = v.checked;
    j["witnesses"] = nlohmann::ordered_json::array();
    for (const auto& w : v.witnesses) {
        j["witnesses"].push_back({{"j", w.j}, {"k", w.k}, {"lhs", w.lhs}, {"rhs", w.rhs}, {"slack", w.slack}});
    }
    return j;
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    auto os = open_out(path);
    os << text;
    finish(os, path);
}

}  // namespace slcurv
