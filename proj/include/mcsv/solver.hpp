#pragma once

#include <string>
#include <vector>

#include "mcsv/energy.hpp"
#include "mcsv/supersolution.hpp"

namespace mcsv {

enum class SolveStatus {
  Converged,
  MaxIterations,
  Stalled,
  Diverged,
  ObstacleActive,
  PathCollapsed,
  SaddleUnrefined,
  Degenerate,
};

const char* to_string(SolveStatus status);

struct SolverOptions {
  /// L2 norm of the projected, preconditioned gradient.
  double descent_tol = 1e-8;
  /// Newton stops when ||grad I||_2 <= newton_tol * max(1, residual scale).
  double newton_tol = 1e-11;
  double armijo = 1e-4;
  double tau = 1.0;
  int max_descent_iter = 200000;
  int max_newton_iter = 60;
  double gmres_rtol = 1e-10;
  int gmres_restart = 80;
  int gmres_cycles = 8;
  int path_nodes = 17;
  /// Gradient norm at which the path maximum is handed to Newton.
  double mp_tol = 1e-3;
  int max_mp_iter = 3000;
  int redistribute_every = 10;
  /// Minimum sup-norm distance between the two critical points.
  double separation = 1e-3;
};

struct TracePoint {
  double energy = 0.0;
  double grad_norm = 0.0;
};

struct SolveReport {
  RealField u;
  EnergyBreakdown energy;
  /// L2 norm of the gradient of the functional at u.
  double grad_norm = 0.0;
  double residual_scale = 0.0;
  ResidualReport residuals;
  /// min(u_bar - u); +infinity for unconstrained solves.
  double constraint_margin = 0.0;
  int iterations = 0;
  bool converged = false;
  bool obstacle_active = false;
  SolveStatus status = SolveStatus::MaxIterations;
  std::string message;
  std::vector<TracePoint> trace;
};

/// Projected preconditioned descent on {u <= u_bar}: Barzilai-Borwein steps
/// in the metric P = eps^2 Lap^2 - Lap + tau, clamped to the obstacle and
/// safeguarded by monotone Armijo backtracking.
SolveReport minimize_constrained(const Functional& I, const RealField& u_bar,
                                 const RealField& init, const SolverOptions& opt);

/// Damped Newton with right-preconditioned GMRES on the exact second
/// variation. `u_bar` (optional) is only used for the reported margin.
SolveReport newton_refine(const Functional& I, const RealField& u0, const SolverOptions& opt,
                          const RealField* u_bar = nullptr);

struct MountainPassReport {
  SolveReport saddle;
  double c_star = 0.0;
  int path_nodes = 0;
  int outer_iterations = 0;
  /// Path maximum after every outer iteration (non-increasing).
  std::vector<double> max_trace;
  double separation = 0.0;
};

/// Single-node path deformation from the local minimum to the constant
/// c_star (I(c_star) < I(u_min) - 1), followed by Newton polish of the path
/// maximum. Retries once with a finer path if it collapses onto u_min.
MountainPassReport mountain_pass(const Functional& I, const SolveReport& minimum,
                                 const SolverOptions& opt);

/// Constrained descent followed by Newton, from init (default u_bar - 1).
SolveReport solve_minimum(const Functional& I, const Barrier& barrier, const SolverOptions& opt,
                          const RealField* init = nullptr);

/// Limit problem (eps = 0) solved the same way.
SolveReport solve_limit(const BackgroundData& bg, const ModelParams& params,
                        const Barrier& barrier, const SolverOptions& opt);

struct PairResult {
  SolveReport first;
  MountainPassReport second;
  RealField v1, v2;
  SystemResiduals system1, system2;
};

/// Full two-solution pipeline at the given parameters.
PairResult solve_pair(const BackgroundData& bg, const ModelParams& params,
                      const Barrier& barrier, const SolverOptions& opt);

struct LadderRow {
  double eps = 0.0;
  double I_eps = 0.0;
  double eps_lap_norm = 0.0;
  double mixed = 0.0;
  double dist_u0 = 0.0;
  double I0_of_u = 0.0;
  double constraint_margin = 0.0;
  double masked_residual = 0.0;
  bool converged = false;
  bool obstacle_active = false;
  SolveStatus status = SolveStatus::MaxIterations;
};

struct LadderReport {
  std::vector<LadderRow> rows;
  SolveReport limit;
  double I0_u0 = 0.0;
  /// min(u_bar - u0) over the grid.
  double limit_margin = 0.0;
  /// Largest ladder eps with an inactive obstacle, NaN if there is none.
  double eps_lambda = 0.0;
  bool complete = false;
};

/// Warm-started sweep over a decreasing eps ladder at fixed lambda.
LadderReport continue_in_eps(const BackgroundData& bg, const ModelParams& params,
                             const Barrier& barrier, const std::vector<double>& ladder,
                             const SolverOptions& opt);

}  // namespace mcsv
