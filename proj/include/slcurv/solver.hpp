#pragma once

#include "slcurv/graph.hpp"
#include "slcurv/slcalc.hpp"

#include <Eigen/Sparse>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace slcurv {

enum class Schedule { linear, geometric };

struct ArmijoParams {
    double c = 1e-4;
    double backtrack = 0.5;
    double min_step = 1e-6;
};

struct HomotopyParams {
    double rhat_start = 0.05;
    int steps = 12;
    Schedule schedule = Schedule::linear;
};

struct SolveConfig {
    double tol = 1e-8;  ///< target for ‖residual‖_∞
    int max_newton = 40;
    ArmijoParams armijo;
    HomotopyParams homotopy;
    std::uint64_t seed = 0;
    double fd_rel = 1e-6;  ///< Jacobian step = fd_rel·(1 + ‖f‖_∞)
    int workers = 1;
    int domain_steps = 4;  ///< disk → star deformation steps at the start level
    bool keep_levels = false;

    /// 0 < rhat_start ≤ rhat_target ≤ 1 plus positivity of every knob.
    void validate(double rhat_target) const;
    double fd_step(const GraphFn& f) const { return fd_rel * (1.0 + f.max_abs()); }
};

/// Rescaled levels visited by the continuity loop, from rhat_start up to the target.
std::vector<double> homotopy_levels(const HomotopyParams& h, double rhat_target);

/// Distance-2 colouring of the interior unknowns: two columns share a colour
/// only if no residual stencil reads both. Deterministic (greedy, index order).
struct Coloring {
    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::vector<std::size_t>> rows_of;  ///< residual rows reading each column

    static Coloring build(const Grid& grid);
};

enum class JacobianMethod {
    analytic,    ///< forward-mode dual numbers through the per-node kernel
    colored_fd,  ///< forward differences, one residual sweep per colour
    plain_fd,    ///< forward differences, one residual sweep per column
};

/// ∂residual_i/∂f_j over the interior unknowns. Newton uses the analytic
/// assembly: near the pole the angular cells are so thin that forward
/// differences lose the cancellation between neighbouring entries. The
/// finite-difference assemblies serve as the independent check.
/// Throws DomainError if a node is inadmissible.
Eigen::SparseMatrix<double> jacobian(const GraphFn& f, const CurvatureQuery& q, const SolveConfig& cfg,
                                     JacobianMethod method = JacobianMethod::analytic);

enum class NewtonStatus { converged, max_iterations, line_search_stall, singular_jacobian, inadmissible };

std::string to_string(NewtonStatus s);

struct NewtonStats {
    NewtonStatus status = NewtonStatus::max_iterations;
    int iterations = 0;
    std::vector<double> residual_l2;   ///< one entry per accepted iterate, starting with f0
    std::vector<double> residual_inf;
    double min_lambda1 = 0.0;
    std::string message;

    bool converged() const { return status == NewtonStatus::converged; }
};

struct NewtonResult {
    GraphFn f;
    NewtonStats stats;
};

/// Damped Newton on SL_r(A(f)) = θ with f fixed on the boundary ring.
/// Backtracks until Armijo holds on ‖F‖₂ and every node stays admissible.
NewtonResult newton_solve(GraphFn f0, const CurvatureQuery& q, const SolveConfig& cfg);

struct LevelRecord {
    double rhat = 0.0;
    int iters = 0;
    std::vector<double> res;  ///< ‖F‖₂ per Newton iterate
    std::vector<double> res_inf;
    double min_lambda1 = 0.0;
    double max_f = 0.0;
    bool ordering_ok = true;
    double ordering_slack = 0.0;  ///< min over nodes of f_level − f_previous
    std::string status;
};

struct SolveReport {
    std::string domain;
    int ns = 0;
    int nalpha = 0;
    int n = 2;
    double theta = 0.0;
    double theta_solve = 0.0;  ///< angle used along the path (θ + 1e-3 at the boundary angle)
    std::vector<LevelRecord> levels;
    std::vector<LevelRecord> prelude;  ///< disk → star deformation at the start level
    std::optional<LevelRecord> polish;  ///< final solve at the boundary angle
    bool converged = false;
    std::string failure;
    double runtime_s = 0.0;
};

struct ContinuityResult {
    GraphFn f;
    SolveReport report;
    std::vector<GraphFn> level_solutions;  ///< filled when cfg.keep_levels
};

/// Continuity method in r̂: start from the exact umbilic cap at rhat_start
/// (deforming the disk into the star domain first when needed), then ascend
/// the schedule with warm starts, checking that each level lies above the
/// previous one. A failing level stops the run and is reported.
ContinuityResult continuity_solve(const DomainSpec& dom, int ns, int nalpha, const CurvatureQuery& target,
                                  const SolveConfig& cfg);

/// Ordering margin min(f_hi − f_lo) over the interior.
double ordering_slack(const GraphFn& lo, const GraphFn& hi);

}  // namespace slcurv
