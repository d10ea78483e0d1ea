#include "mcsv/run.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include "mcsv/checks.hpp"
#include "mcsv/error.hpp"
#include "mcsv/field_io.hpp"
#include "mcsv/solver.hpp"

namespace mcsv {

namespace {

struct Setup {
  GridPtr grid;
  BackgroundData bg;
  Barrier barrier;
  ModelParams params;
};

Setup prepare(const RunConfig& cfg, int n) {
  Setup s;
  s.grid = make_grid(n);
  s.bg = bind_background(cfg.vortices, s.grid, cfg.mask_radius);
  s.barrier = build_barrier(s.bg, profile_by_name(cfg.profile), cfg.model(1.0).s);
  s.barrier.lambda0 = find_lambda0(s.barrier, s.bg);
  s.params = cfg.model(s.barrier.lambda0);
  s.params.validate();
  return s;
}

/// Structured "key = value" report with certificates.
class Report {
 public:
  Report() { out_ << std::setprecision(17); }

  template <class T>
  void value(const std::string& key, const T& v) {
    out_ << key << " = " << v << '\n';
  }
  void section(const std::string& name) { out_ << "\n[" << name << "]\n"; }
  void check(const CheckLine& c) {
    checks_.push_back(c);
    all_pass_ = all_pass_ && c.pass;
  }
  void check(const std::string& name, double value, double tol, bool pass) {
    check(CheckLine{name, value, tol, pass});
  }
  bool all_pass() const { return all_pass_; }

  std::string text() const {
    std::ostringstream o;
    o << out_.str();
    o << "\n[certificates]\n" << table();
    o << "status = " << (all_pass_ ? "PASS" : "FAIL") << '\n';
    return o.str();
  }

  std::string table() const {
    std::ostringstream o;
    o << std::setprecision(17);
    for (const CheckLine& c : checks_) {
      o << std::left << std::setw(44) << c.name << ' ' << std::setw(25) << c.value << ' '
        << std::setw(25) << c.tol << ' ' << (c.pass ? "PASS" : "FAIL") << '\n';
    }
    return o.str();
  }

 private:
  std::ostringstream out_;
  std::vector<CheckLine> checks_;
  bool all_pass_ = true;
};

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot write " + path.string());
  f << text;
}

void describe_setup(Report& r, const RunConfig& cfg, const Setup& s) {
  r.section("parameters");
  r.value("grid_n", s.grid->n());
  r.value("m", s.bg.config.m());
  r.value("n", s.bg.config.n());
  r.value("profile", cfg.profile);
  r.value("s", s.params.s);
  r.value("lambda", s.params.lambda);
  r.value("eps", s.params.eps);
  r.value("mask_radius", s.bg.mask_radius);
  r.section("barrier");
  r.value("rho", s.barrier.rho);
  r.value("C_bar", s.barrier.C_bar);
  r.value("c0", s.barrier.c0);
  r.value("lambda0", s.barrier.lambda0);
}

void describe_solution(Report& r, const std::string& tag, const SolveReport& rep) {
  r.section(tag);
  r.value("status", to_string(rep.status));
  r.value("converged", rep.converged ? "true" : "false");
  r.value("iterations", rep.iterations);
  r.value("energy", rep.energy.total);
  r.value("energy_biharmonic", rep.energy.biharmonic);
  r.value("energy_dirichlet", rep.energy.dirichlet);
  r.value("energy_mixed", rep.energy.mixed);
  r.value("energy_potential", rep.energy.potential);
  r.value("energy_linear", rep.energy.linear);
  r.value("grad_norm", rep.grad_norm);
  r.value("residual_scale", rep.residual_scale);
  r.value("residual_masked_l2", rep.residuals.masked_l2);
  r.value("residual_linf_masked", rep.residuals.linf_masked);
  r.value("constraint_margin", rep.constraint_margin);
  if (!rep.message.empty()) r.value("message", rep.message);
}

int cmd_barrier(const RunConfig& cfg, const Setup& s, const std::filesystem::path& out,
                Report& r) {
  describe_setup(r, cfg, s);
  const SupersolutionCheck at = verify_supersolution(s.barrier, s.bg, s.params.lambda);
  const SupersolutionCheck half = verify_supersolution(s.barrier, s.bg, 0.5 * s.barrier.lambda0);
  const Profile& prof = *s.barrier.profile;
  const RealField gap = (s.bg.sigma + s.barrier.u_bar).map([&](double w) {
    return prof.F1(w) - s.barrier.s;
  });
  const double min_gap = masked_min(gap, s.bg.keep);
  r.check("barrier_gap_ge_c0", min_gap, s.barrier.c0, min_gap >= s.barrier.c0);
  r.check("supersolution_at_lambda", at.min_margin, 0.0, at.pass);
  r.check("supersolution_fails_at_half_lambda0", half.min_margin, 0.0, !half.pass);
  write_field(out / "ubar.field", s.barrier.u_bar, "ubar");
  write_field(out / "margin.field", at.margin, "margin");
  return 0;
}

int cmd_solve(const RunConfig& cfg, const Setup& s, const std::filesystem::path& out,
              Report& r) {
  describe_setup(r, cfg, s);
  const SupersolutionCheck sup = verify_supersolution(s.barrier, s.bg, s.params.lambda);
  r.check("supersolution_at_lambda", sup.min_margin, 0.0, sup.pass);
  if (!sup.pass) return 1;

  const PairResult pair = solve_pair(s.bg, s.params, s.barrier, cfg.solver);
  describe_solution(r, "solution1", pair.first);
  describe_solution(r, "solution2", pair.second.saddle);
  r.section("mountain_pass");
  r.value("c_star", pair.second.c_star);
  r.value("path_nodes", pair.second.path_nodes);
  r.value("outer_iterations", pair.second.outer_iterations);
  r.value("separation_linf", pair.second.separation);

  const double E1 = pair.first.energy.total;
  const double E2 = pair.second.saddle.energy.total;
  r.check("solution1_converged", pair.first.converged ? 1.0 : 0.0, 1.0, pair.first.converged);
  r.check("solution1_masked_residual", pair.first.residuals.masked_l2, 1e-6,
          pair.first.residuals.masked_l2 < 1e-6);
  r.check("solution1_constraint_margin", pair.first.constraint_margin, 0.0,
          pair.first.constraint_margin > 0.0);
  r.check("solution2_converged", pair.second.saddle.converged ? 1.0 : 0.0, 1.0,
          pair.second.saddle.converged);
  if (!pair.second.saddle.u.empty()) {
    r.check("solution2_masked_residual", pair.second.saddle.residuals.masked_l2, 1e-6,
            pair.second.saddle.residuals.masked_l2 < 1e-6);
    r.check("separation_linf", pair.second.separation, cfg.solver.separation,
            pair.second.separation > cfg.solver.separation);
    r.check("energy_gap", E2 - E1, 0.0, E2 > E1);
  }
  auto sys = [&](const std::string& tag, const SystemResiduals& sr) {
    const double a = sr.first.masked_l2 / std::max(sr.first_scale, 1e-300);
    const double b = sr.second.masked_l2 / std::max(sr.second_scale, 1e-300);
    r.check(tag + "_system_r1_relative", a, 1e-5, a < 1e-5);
    r.check(tag + "_system_r2_relative", b, 1e-5, b < 1e-5);
  };
  sys("solution1", pair.system1);
  if (!pair.v2.empty()) sys("solution2", pair.system2);

  write_field(out / "u1.field", pair.first.u, "u1");
  write_field(out / "v1.field", pair.v1, "v1");
  if (!pair.second.saddle.u.empty()) {
    write_field(out / "u2.field", pair.second.saddle.u, "u2");
    write_field(out / "v2.field", pair.v2, "v2");
  }
  return 0;
}

int cmd_sweep(const RunConfig& cfg, const Setup& s, const std::filesystem::path& out,
              Report& r) {
  describe_setup(r, cfg, s);
  const LadderReport lad = continue_in_eps(s.bg, s.params, s.barrier, cfg.eps_ladder, cfg.solver);
  std::ostringstream csv;
  csv << std::setprecision(17);
  csv << "eps,I_eps,eps_lap_norm,mixed,dist_u0_linf,I0_of_u_eps,constraint_margin,"
         "masked_residual,status\n";
  for (const LadderRow& row : lad.rows) {
    csv << row.eps << ',' << row.I_eps << ',' << row.eps_lap_norm << ',' << row.mixed << ','
        << row.dist_u0 << ',' << row.I0_of_u << ',' << row.constraint_margin << ','
        << row.masked_residual << ',' << to_string(row.status) << '\n';
  }
  write_text(out / "sweep.csv", csv.str());
  write_field(out / "u0.field", lad.limit.u, "u0");

  r.section("limit");
  r.value("I0_u0", lad.I0_u0);
  r.value("limit_margin", lad.limit_margin);
  r.value("eps_lambda", lad.eps_lambda);
  const IdentityReport id = identity_checks(lad.limit.u, s.bg, s.params);
  r.check("limit_converged", lad.limit.converged ? 1.0 : 0.0, 1.0, lad.limit.converged);
  r.check("limit_strictly_below_barrier", lad.limit_margin, 0.0, lad.limit_margin > 0.0);
  const double target = s.bg.flux() / (s.params.lambda * s.params.lambda);
  r.check("limit_flux_identity", id.flux, 1e-4 * std::max(1.0, target), id.flux < 1e-4);
  for (const LadderRow& row : lad.rows) {
    std::ostringstream tag;
    tag << "eps=" << row.eps;
    r.check("ladder_converged[" + tag.str() + "]", row.converged ? 1.0 : 0.0, 1.0,
            row.converged);
    r.check("ladder_I_eps_ge_I0[" + tag.str() + "]", row.I_eps - row.I0_of_u, 0.0,
            row.I_eps >= row.I0_of_u);
  }
  auto monotone = [&](const char* name, auto get) {
    double worst = 0.0;
    for (std::size_t i = 1; i < lad.rows.size(); ++i) {
      const double prev = get(lad.rows[i - 1]);
      worst = std::max(worst, get(lad.rows[i]) / std::max(prev, 1e-300));
    }
    r.check(name, worst, 1.1, worst <= 1.1);
  };
  monotone("ladder_eps_lap_decreasing", [](const LadderRow& x) { return x.eps_lap_norm; });
  monotone("ladder_mixed_decreasing", [](const LadderRow& x) { return x.mixed; });
  monotone("ladder_dist_u0_decreasing", [](const LadderRow& x) { return x.dist_u0; });
  return 0;
}

int cmd_verify(const RunConfig& cfg, const Setup& s, const std::filesystem::path& out,
               Report& r) {
  describe_setup(r, cfg, s);
  std::mt19937_64 rng(cfg.seed);

  const AssumptionAudit audit = check_assumptions(*s.params.profile, s.params.s);
  r.check("profile_assumptions", audit.sup_weighted, std::numeric_limits<double>::infinity(),
          audit.pass());
  const double sig_mean = std::abs(integrate(s.bg.sigma));
  r.check("sigma_mean_zero", sig_mean, 1e-2, sig_mean < 1e-2);
  const double ustar_mean = std::abs(integrate(s.barrier.u_star));
  r.check("ustar_mean_zero", ustar_mean, 1e-2, ustar_mean < 1e-2);

  for (const CheckLine& c : green_operator_checks(s.grid, rng, 100, {1.0, 0.1, 0.01}, 8)) {
    r.check(c);
  }

  const Functional I(s.bg, s.params);
  const Functional I0(s.bg, s.params, 0.0);
  double fd_eps = 0.0, fd_zero = 0.0, sym = 0.0;
  for (int k = 0; k < 5; ++k) {
    const RealField u = s.barrier.u_bar - 1.0 + 0.3 * random_bandlimited(s.grid, rng, 6);
    const RealField phi = random_bandlimited(s.grid, rng, 6);
    const RealField psi = random_bandlimited(s.grid, rng, 6);
    fd_eps = std::max(fd_eps, directional_derivative_error(I, u, phi));
    fd_zero = std::max(fd_zero, directional_derivative_error(I0, u, phi));
    sym = std::max(sym, hessian_symmetry_error(I, u, phi, psi));
  }
  r.check("gradient_fd_I_eps", fd_eps, 1e-6, fd_eps < 1e-6);
  r.check("gradient_fd_I0", fd_zero, 1e-6, fd_zero < 1e-6);
  r.check("hessian_symmetry", sym, 1e-8, sym < 1e-8);

  const BackgroundData flat = trivial_background(s.grid);
  double chain = 0.0, ibp = 0.0;
  for (int k = 0; k < 5; ++k) {
    const RealField u = random_bandlimited(s.grid, rng, 3);
    const IdentityReport id = identity_checks(u, flat, s.params);
    chain = std::max(chain, id.chain_rule);
    ibp = std::max(ibp, id.int_by_parts);
  }
  r.check("identity_chain_rule_smooth", chain, 1e-6, chain < 1e-6);
  r.check("identity_int_by_parts_smooth", ibp, 1e-6, ibp < 1e-6);

  const SupersolutionCheck hi = verify_supersolution(s.barrier, s.bg, 1.01 * s.barrier.lambda0);
  const SupersolutionCheck lo = verify_supersolution(s.barrier, s.bg, 0.5 * s.barrier.lambda0);
  r.check("supersolution_at_1.01_lambda0", hi.min_margin, 0.0, hi.pass);
  r.check("supersolution_fails_at_0.5_lambda0", lo.min_margin, 0.0, !lo.pass);
  write_text(out / "verify.txt", r.table());
  return 0;
}

}  // namespace

int run_subcommand(const std::string& name, const RunConfig& cfg_in, const RunOptions& options,
                   std::ostream& log, std::ostream& err) {
  try {
    RunConfig cfg = cfg_in;
    if (options.grid_n) cfg.grid_n = *options.grid_n;
    const std::filesystem::path out = options.out.empty() ? std::filesystem::path(cfg.output) : options.out;
    std::filesystem::create_directories(out);

    const Setup s = prepare(cfg, cfg.grid_n);
    Report r;
    r.value("command", name);
    int rc = 0;
    if (name == "barrier") {
      rc = cmd_barrier(cfg, s, out, r);
    } else if (name == "solve") {
      rc = cmd_solve(cfg, s, out, r);
    } else if (name == "sweep") {
      rc = cmd_sweep(cfg, s, out, r);
    } else if (name == "verify") {
      rc = cmd_verify(cfg, s, out, r);
    } else {
      err << "unknown subcommand '" << name << "'\n";
      return 2;
    }
    const std::string text = r.text();
    write_text(out / "report.txt", text);
    if (!options.quiet) log << text;
    if (rc != 0 || !r.all_pass()) {
      if (options.quiet) err << r.table();
      return 1;
    }
    return 0;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace mcsv
