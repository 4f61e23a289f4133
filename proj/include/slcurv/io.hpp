#pragma once

#include "slcurv/diag.hpp"
#include "slcurv/graph.hpp"
#include "slcurv/shape.hpp"
#include "slcurv/solver.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace slcurv {

/// Malformed input file; carries the 1-based line number (0 if unknown).
class FormatError : public DomainError {
public:
    FormatError(int line, const std::string& what);
    int line() const { return line_; }

private:
    int line_;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GraphHeader {
    int n = 2;
    double theta = 0.0;
    double rhat = 0.0;
};

struct GraphFile {
    GraphHeader header;
    GraphFn f;
};

/// `# slcurv-graph v1`, a key=value line, then `j,k,s,alpha,f` rows for
/// every node (boundary ring last), floats with 17 significant digits.
void write_graph(std::ostream& os, const GraphFn& f, const GraphHeader& h);
void write_graph(const std::filesystem::path& path, const GraphFn& f, const GraphHeader& h);

/// Throws FormatError (with line number) on anything other than the v1
/// layout, on coordinates that disagree with the lattice, on non-finite
/// values, on non-zero boundary data and on a header angle or level outside
/// the admissible range (rhat = 0 is accepted and means "no level").
GraphFile read_graph(std::istream& is);
GraphFile read_graph(const std::filesystem::path& path);

/// `j,k,lambda_min,lambda_max,H,rhat_theta,residual,admissible` per interior node.
void write_curvature(std::ostream& os, const ShapeField& sf, const Grid& grid);
void write_curvature(const std::filesystem::path& path, const ShapeField& sf, const Grid& grid);

/// Triangle mesh of the graph in Poincaré-ball coordinates; the innermost
/// ring is closed by a fan around an averaged centre vertex.
void write_obj(std::ostream& os, const GraphFn& f);
void write_obj(const std::filesystem::path& path, const GraphFn& f);

/// Stable-order JSON. runtime_s is emitted only when `timing` is set, so
/// repeated runs serialize identically.
nlohmann::ordered_json to_json(const SolveReport& r, bool timing);
nlohmann::ordered_json to_json(const Verdict& v);

/// Writes `text` to `path`, throwing IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

/// %.17g
std::string format_double(double x);

}  // namespace slcurv
