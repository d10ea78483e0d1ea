#include "mcsv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mcsv/error.hpp"
#include "mcsv/krylov.hpp"

namespace mcsv {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterations: return "max-iterations";
    case SolveStatus::Stalled: return "stalled";
    case SolveStatus::Diverged: return "diverged";
    case SolveStatus::ObstacleActive: return "obstacle-active";
    case SolveStatus::PathCollapsed: return "path-collapsed";
    case SolveStatus::SaddleUnrefined: return "saddle-unrefined";
    case SolveStatus::Degenerate: return "degenerate";
  }
  return "unknown";
}

namespace {

double min_margin(const RealField& u_bar, const RealField& u) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < u.size(); ++i) m = std::min(m, u_bar[i] - u[i]);
  return m;
}

void fill_report(SolveReport& rep, const Functional& I, const RealField& u,
                 const RealField* u_bar) {
  rep.u = u;
  rep.energy = I.energy(u);
  const RealField g = I.gradient(u);
  rep.grad_norm = l2_norm(g);
  rep.residual_scale = I.residual_scale(u);
  rep.residuals = make_residual_report(g, I.background().keep);
  rep.constraint_margin =
      u_bar ? min_margin(*u_bar, u) : std::numeric_limits<double>::infinity();
}

double newton_threshold(const SolverOptions& opt, double scale) {
  return opt.newton_tol * std::max(1.0, scale);
}

}  // namespace

SolveReport minimize_constrained(const Functional& I, const RealField& u_bar,
                                 const RealField& init, const SolverOptions& opt) {
  require_same_grid(u_bar, init);
  const double eps = I.eps();
  const double tau = opt.tau;
  const double active_tol = 1e-12 * std::max(1.0, linf_norm(u_bar));

  SolveReport rep;
  RealField u = pointwise_min(init, u_bar);
  double E = I.value(u);
  RealField G = I.gradient(u);
  double alpha = 1.0;

  int it = 0;
  for (;; ++it) {
    const RealField d = precond_inverse(G, eps, tau);
    RealField pg = d;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (u[i] >= u_bar[i] - active_tol && d[i] < 0.0) pg[i] = 0.0;
    }
    const double pn = l2_norm(pg);
    rep.trace.push_back({E, pn});
    if (pn <= opt.descent_tol) {
      rep.converged = true;
      rep.status = SolveStatus::Converged;
      break;
    }
    if (it >= opt.max_descent_iter) {
      rep.status = SolveStatus::MaxIterations;
      break;
    }

    double eta = alpha;
    RealField un, dx;
    double En = E;
    bool accepted = false;
    while (eta >= 1e-14) {
      un = pointwise_min(u - eta * d, u_bar);
      dx = un - u;
      const double slope = inner(G, dx);
      En = I.value(un);
      if (slope < 0.0 && En <= E + opt.armijo * slope && En < E) {
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) {
      // Below this the predicted decrease is lost in the rounding of E.
      const double floor = 1e3 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(E));
      if (inner(G, pg) <= floor) {
        rep.converged = true;
        rep.status = SolveStatus::Converged;
        rep.message = "stopped at the energy rounding floor";
      } else {
        rep.status = SolveStatus::Stalled;
        rep.message = "line search stalled";
      }
      break;
    }
    RealField Gn = I.gradient(un);
    const RealField y = Gn - G;
    const double sy = inner(dx, y);
    const double sPs = inner(dx, precond_apply(dx, eps, tau));
    alpha = sy > 0.0 ? std::clamp(sPs / sy, 1e-6, 1e6) : std::min(1e6, 2.0 * eta);
    u = std::move(un);
    E = En;
    G = std::move(Gn);
  }
  rep.iterations = it;
  fill_report(rep, I, u, &u_bar);
  if (rep.converged && rep.constraint_margin <= active_tol) {
    rep.obstacle_active = true;
    rep.status = SolveStatus::ObstacleActive;
    rep.message = "converged on the obstacle";
  }
  return rep;
}

SolveReport newton_refine(const Functional& I, const RealField& u0, const SolverOptions& opt,
                          const RealField* u_bar) {
  const double eps = I.eps();
  const double tau = opt.tau;
  auto minv = [&](const RealField& x) { return precond_inverse(x, eps, tau); };

  SolveReport rep;
  RealField u = u0;
  int it = 0;
  for (;; ++it) {
    const RealField G = I.gradient(u);
    const double r = l2_norm(G);
    if (!std::isfinite(r)) {
      rep.status = SolveStatus::Diverged;
      rep.message = "non-finite residual";
      break;
    }
    rep.trace.push_back({I.value(u), r});
    if (r <= newton_threshold(opt, I.residual_scale(u))) {
      rep.converged = true;
      rep.status = SolveStatus::Converged;
      break;
    }
    if (it >= opt.max_newton_iter) {
      rep.status = SolveStatus::MaxIterations;
      break;
    }
    const Linearization lin = I.linearize(u);
    const GmresResult step = gmres([&](const RealField& p) { return lin.apply(p); }, minv, -G,
                                   opt.gmres_rtol, opt.gmres_restart, opt.gmres_cycles);
    // The fourth-order term amplifies the rounding of u; once the correction
    // is at that level the residual cannot drop further.
    if (step.converged && linf_norm(step.x) <= 16.0 * std::numeric_limits<double>::epsilon() *
                                                  std::max(1.0, linf_norm(u))) {
      rep.converged = true;
      rep.status = SolveStatus::Converged;
      rep.message = "Newton correction at rounding level";
      break;
    }
    double t = 1.0;
    bool accepted = false;
    RealField un;
    while (t >= 1e-4) {
      un = u + t * step.x;
      if (un.all_finite()) {
        const double rn = l2_norm(I.gradient(un));
        if (rn < (1.0 - 1e-4 * t) * r) {
          accepted = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!accepted) {
      rep.status = SolveStatus::Stalled;
      rep.message = "damped Newton step did not reduce the residual";
      break;
    }
    u = std::move(un);
  }
  rep.iterations = it;
  fill_report(rep, I, u, u_bar);
  return rep;
}

namespace {

/// Piecewise-linear path with a sampled estimate of the energy on every
/// segment, so that maxima between nodes are seen.
class Path {
 public:
  Path(const Functional& I, double eps, double tau, std::vector<RealField> nodes)
      : I_(I), eps_(eps), tau_(tau), nodes_(std::move(nodes)) {
    for (const RealField& n : nodes_) energy_.push_back(I_.value(n));
    seg_max_.resize(nodes_.size() - 1);
    seg_at_.resize(nodes_.size() - 1);
    for (std::size_t j = 0; j + 1 < nodes_.size(); ++j) sample(j);
  }

  std::size_t size() const { return nodes_.size(); }
  const RealField& node(std::size_t i) const { return nodes_[i]; }
  double energy(std::size_t i) const { return energy_[i]; }

  double max() const {
    return std::max(*std::max_element(energy_.begin(), energy_.end()),
                    *std::max_element(seg_max_.begin(), seg_max_.end()));
  }

  std::size_t max_node() const {
    return static_cast<std::size_t>(std::max_element(energy_.begin(), energy_.end()) -
                                    energy_.begin());
  }

  /// Moves the sampled maximum onto a node by inserting interior points;
  /// the geometry of the path does not change. Returns false at the cap.
  bool refine(std::size_t cap) {
    for (;;) {
      const std::size_t j = static_cast<std::size_t>(
          std::max_element(seg_max_.begin(), seg_max_.end()) - seg_max_.begin());
      if (seg_max_[j] <= energy_[max_node()]) return true;
      if (nodes_.size() >= cap) return false;
      const double a = seg_at_[j];
      RealField x = lerp(nodes_[j], nodes_[j + 1], a);
      const double ex = seg_max_[j];
      nodes_.insert(nodes_.begin() + static_cast<std::ptrdiff_t>(j + 1), std::move(x));
      energy_.insert(energy_.begin() + static_cast<std::ptrdiff_t>(j + 1), ex);
      seg_max_.insert(seg_max_.begin() + static_cast<std::ptrdiff_t>(j + 1), 0.0);
      seg_at_.insert(seg_at_.begin() + static_cast<std::ptrdiff_t>(j + 1), 0.0);
      sample(j);
      sample(j + 1);
    }
  }

  /// Replaces interior node i if its energy drops and neither adjacent
  /// segment rises above `ceiling`.
  bool try_move(std::size_t i, RealField cand, double ceiling) {
    const double ec = I_.value(cand);
    if (!(ec < energy_[i])) return false;
    double left_at = 0.0, right_at = 0.0;
    const double left = segment_max(nodes_[i - 1], cand, left_at);
    if (left > ceiling) return false;
    const double right = segment_max(cand, nodes_[i + 1], right_at);
    if (right > ceiling) return false;
    nodes_[i] = std::move(cand);
    energy_[i] = ec;
    seg_max_[i - 1] = left;
    seg_at_[i - 1] = left_at;
    seg_max_[i] = right;
    seg_at_[i] = right_at;
    return true;
  }

  /// Equal arclength in the preconditioner metric, same node count.
  Path redistributed() const {
    const std::size_t P = nodes_.size();
    std::vector<double> cum(P, 0.0);
    for (std::size_t j = 0; j + 1 < P; ++j) {
      const RealField d = nodes_[j + 1] - nodes_[j];
      cum[j + 1] = cum[j] + std::sqrt(std::max(0.0, inner(d, precond_apply(d, eps_, tau_))));
    }
    std::vector<RealField> out;
    out.reserve(P);
    out.push_back(nodes_.front());
    std::size_t k = 0;
    for (std::size_t j = 1; j + 1 < P; ++j) {
      const double target = cum.back() * static_cast<double>(j) / static_cast<double>(P - 1);
      while (k + 2 < P && cum[k + 1] < target) ++k;
      const double seg = cum[k + 1] - cum[k];
      const double a = seg > 0.0 ? std::clamp((target - cum[k]) / seg, 0.0, 1.0) : 0.0;
      out.push_back(lerp(nodes_[k], nodes_[k + 1], a));
    }
    out.push_back(nodes_.back());
    return Path(I_, eps_, tau_, std::move(out));
  }

  Path& operator=(Path&& o) noexcept {
    nodes_ = std::move(o.nodes_);
    energy_ = std::move(o.energy_);
    seg_max_ = std::move(o.seg_max_);
    seg_at_ = std::move(o.seg_at_);
    return *this;
  }
  Path(Path&&) = default;
  Path(const Path&) = default;

 private:
  static RealField lerp(const RealField& a, const RealField& b, double t) {
    return (1.0 - t) * a + t * b;
  }

  double segment_max(const RealField& a, const RealField& b, double& at) const {
    double best = -std::numeric_limits<double>::infinity();
    for (double t : {0.25, 0.5, 0.75}) {
      const double e = I_.value(lerp(a, b, t));
      if (e > best) {
        best = e;
        at = t;
      }
    }
    return best;
  }

  void sample(std::size_t j) { seg_max_[j] = segment_max(nodes_[j], nodes_[j + 1], seg_at_[j]); }

  const Functional& I_;
  double eps_, tau_;
  std::vector<RealField> nodes_;
  std::vector<double> energy_;
  std::vector<double> seg_max_;
  std::vector<double> seg_at_;
};

}  // namespace

MountainPassReport mountain_pass(const Functional& I, const SolveReport& minimum,
                                 const SolverOptions& opt) {
  const RealField& u_min = minimum.u;
  const double E1 = minimum.energy.total;
  const double eps = I.eps();
  const double tau = opt.tau;
  MountainPassReport out;

  double c = 1.0;
  while (I.value(RealField(u_min.grid(), c)) >= E1 - 1.0) {
    c *= 2.0;
    if (c > 1e12) {
      out.saddle.status = SolveStatus::Degenerate;
      out.saddle.message = "energy is not unbounded below along constants";
      fill_report(out.saddle, I, u_min, nullptr);
      return out;
    }
  }
  out.c_star = c;
  const RealField far(u_min.grid(), c);

  int P = std::max(3, opt.path_nodes);
  for (int attempt = 0; attempt < 2; ++attempt, P = 2 * P - 1) {
    out.max_trace.clear();
    std::vector<RealField> init;
    for (int j = 0; j < P; ++j) {
      const double a = static_cast<double>(j) / (P - 1);
      init.push_back((1.0 - a) * u_min + a * far);
    }
    Path path(I, eps, tau, std::move(init));
    const std::size_t cap = static_cast<std::size_t>(4 * P);

    double handoff = opt.mp_tol;
    double eta = 1.0;
    double window_start = path.max();
    bool collapsed = false;
    SolveReport polished;
    bool have_polish = false;
    int it = 0;
    for (; it < opt.max_mp_iter; ++it) {
      const bool resolved = path.refine(cap);
      const double M = path.max();
      out.max_trace.push_back(M);
      const std::size_t i = path.max_node();
      if (i == 0) {
        collapsed = true;
        break;
      }
      const RealField G = I.gradient(path.node(i));
      const double gn = l2_norm(G);

      bool stalled = !resolved;
      if (it > 0 && it % 50 == 0) {
        stalled = stalled || window_start - M <= 1e-7 * (1.0 + std::abs(M));
        window_start = M;
      }

      if (gn > handoff && !stalled) {
        RealField d = precond_inverse(G, eps, tau);
        const RealField tang = path.node(i + 1) - path.node(i - 1);
        const double tpt = inner(tang, precond_apply(tang, eps, tau));
        if (tpt > 0.0) d.axpy(-inner(G, tang) / tpt, tang);
        // Keep the move within half the shorter neighbouring segment so the
        // path stays resolved by its samples.
        auto plen = [&](const RealField& x) {
          return std::sqrt(std::max(0.0, inner(x, precond_apply(x, eps, tau))));
        };
        const double reach = 0.5 * std::min(plen(path.node(i) - path.node(i - 1)),
                                            plen(path.node(i + 1) - path.node(i)));
        const double dlen = plen(d);
        double step = std::min(2.0 * eta, dlen > 0.0 ? reach / dlen : 0.0);
        // A move counts only if the refined path still peaks at or below M;
        // refinement can expose values the old samples missed.
        bool moved = false;
        while (step > 1e-12) {
          Path trial = path;
          if (trial.try_move(i, path.node(i) - step * d, M) && trial.refine(cap) &&
              trial.max() <= M) {
            path = std::move(trial);
            moved = true;
            break;
          }
          step *= 0.5;
        }
        if (moved) eta = step;
        stalled = !moved;
      }

      if (gn <= handoff || stalled) {
        polished = newton_refine(I, path.node(i), opt);
        have_polish = true;
        const double sep = linf_norm(polished.u - u_min);
        if (polished.converged && sep > opt.separation && polished.energy.total > E1) break;
        if (polished.converged && sep <= opt.separation) {
          collapsed = true;
          break;
        }
        // Newton failed from here: tighten the hand-off and keep deforming.
        handoff *= 0.1;
        have_polish = false;
        window_start = M;
        if (!resolved) break;
        continue;
      }

      if ((it + 1) % opt.redistribute_every == 0) {
        Path cand = path.redistributed();
        if (cand.refine(cap) && cand.max() <= path.max()) path = std::move(cand);
      }
    }
    out.outer_iterations = it;
    out.path_nodes = static_cast<int>(path.size());
    if (!have_polish && !collapsed) {
      polished = newton_refine(I, path.node(path.max_node()), opt);
      have_polish = true;
    }
    if (have_polish) {
      out.separation = linf_norm(polished.u - u_min);
      if (out.separation <= opt.separation) collapsed = true;
    }
    if (collapsed && attempt == 0) continue;

    if (collapsed) {
      if (have_polish) {
        out.saddle = polished;
      } else {
        fill_report(out.saddle, I, path.node(path.max_node()), nullptr);
      }
      out.saddle.converged = false;
      out.saddle.status = SolveStatus::PathCollapsed;
      out.saddle.message = "mountain-pass path collapsed onto the local minimum";
      return out;
    }
    out.saddle = std::move(polished);
    if (!out.saddle.converged) {
      out.saddle.status = SolveStatus::SaddleUnrefined;
      out.saddle.message = "Newton polish of the path maximum did not converge";
    } else if (out.saddle.energy.total <= E1) {
      out.saddle.converged = false;
      out.saddle.status = SolveStatus::Degenerate;
      out.saddle.message = "second critical point is not above the minimum";
    }
    out.saddle.iterations += it;
    return out;
  }
  return out;
}

SolveReport solve_minimum(const Functional& I, const Barrier& barrier, const SolverOptions& opt,
                          const RealField* init) {
  const RealField start = init ? *init : barrier.u_bar - 1.0;
  SolveReport descent = minimize_constrained(I, barrier.u_bar, start, opt);
  if (descent.obstacle_active) return descent;
  SolveReport polished = newton_refine(I, descent.u, opt, &barrier.u_bar);
  polished.iterations += descent.iterations;
  std::vector<TracePoint> trace = std::move(descent.trace);
  trace.insert(trace.end(), polished.trace.begin(), polished.trace.end());
  polished.trace = std::move(trace);
  if (polished.converged && !(polished.constraint_margin > 0.0)) {
    polished.obstacle_active = true;
    polished.status = SolveStatus::ObstacleActive;
    polished.message = "Newton limit touches the obstacle";
  }
  return polished;
}

SolveReport solve_limit(const BackgroundData& bg, const ModelParams& params,
                        const Barrier& barrier, const SolverOptions& opt) {
  const Functional I0(bg, params, 0.0);
  return solve_minimum(I0, barrier, opt);
}

PairResult solve_pair(const BackgroundData& bg, const ModelParams& params,
                      const Barrier& barrier, const SolverOptions& opt) {
  params.validate();
  const Functional I(bg, params);
  PairResult out;
  out.first = solve_minimum(I, barrier, opt);
  if (out.first.converged && !out.first.obstacle_active) {
    out.second = mountain_pass(I, out.first, opt);
  } else {
    out.second.saddle.status = SolveStatus::Degenerate;
    out.second.saddle.message = "no strict interior minimum to start the mountain pass from";
  }
  out.v1 = recover_v(out.first.u, bg, params);
  out.system1 = residual_system(out.first.u, out.v1, bg, params);
  if (!out.second.saddle.u.empty()) {
    out.v2 = recover_v(out.second.saddle.u, bg, params);
    out.system2 = residual_system(out.second.saddle.u, out.v2, bg, params);
  }
  return out;
}

LadderReport continue_in_eps(const BackgroundData& bg, const ModelParams& params,
                             const Barrier& barrier, const std::vector<double>& ladder,
                             const SolverOptions& opt) {
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] > 0.0) || (i > 0 && !(ladder[i] < ladder[i - 1]))) {
      throw Error(ErrorKind::Parameter, "eps ladder must be positive and strictly decreasing");
    }
  }
  LadderReport out;
  out.limit = solve_limit(bg, params, barrier, opt);
  out.I0_u0 = out.limit.energy.total;
  out.limit_margin = out.limit.constraint_margin;
  out.eps_lambda = std::numeric_limits<double>::quiet_NaN();
  out.complete = out.limit.converged && !out.limit.obstacle_active;

  RealField warm;
  for (double eps : ladder) {
    ModelParams p = params;
    p.eps = eps;
    const Functional I(bg, p);
    const SolveReport rep = solve_minimum(I, barrier, opt, warm.empty() ? nullptr : &warm);
    LadderRow row;
    row.eps = eps;
    row.I_eps = rep.energy.total;
    row.eps_lap_norm = eps * l2_norm(laplacian(rep.u));
    row.mixed = rep.energy.mixed;
    row.dist_u0 = linf_norm(rep.u - out.limit.u);
    row.I0_of_u = eval_I0(rep.u, bg, p);
    row.constraint_margin = rep.constraint_margin;
    row.masked_residual = rep.residuals.masked_l2;
    row.converged = rep.converged;
    row.obstacle_active = rep.obstacle_active;
    row.status = rep.status;
    out.rows.push_back(row);
    if (!rep.converged) out.complete = false;
    if (rep.converged && !rep.obstacle_active && std::isnan(out.eps_lambda)) {
      out.eps_lambda = eps;
    }
    warm = pointwise_min(rep.u, barrier.u_bar);
  }
  return out;
}

}  // namespace mcsv
