// Acceptance run: one PASS/FAIL line per criterion, details on indented lines.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mcsv/checks.hpp"
#include "mcsv/solver.hpp"

using namespace mcsv;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::ostringstream notes;
  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes << "    " << (ok ? "ok   " : "FAIL ") << what << '\n';
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

int failures = 0;

void run(int id, const std::string& title, double budget_s,
         const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  o.require(secs < budget_s, "runtime " + fmt(secs) + " s < " + fmt(budget_s) + " s");
  if (!o.pass) ++failures;
  std::printf("criterion %d: %s  %s\n%s", id, o.pass ? "PASS" : "FAIL", title.c_str(),
              o.notes.str().c_str());
  std::fflush(stdout);
}

VortexConfig single() { return {{{0.5, 0.5}}, {}}; }
VortexConfig multi() { return {{{0.3, 0.3}, {0.7, 0.7}}, {{0.5, 0.2}}}; }

struct Problem {
  GridPtr grid;
  BackgroundData bg;
  Barrier barrier;
  double lambda0 = 0.0;
  ModelParams params;
};

Problem make_problem(const VortexConfig& c, int n) {
  Problem p;
  p.grid = make_grid(n);
  p.bg = bind_background(c, p.grid);
  p.barrier = build_barrier(p.bg, cp1_profile(), 0.0);
  p.lambda0 = find_lambda0(p.barrier, p.bg);
  p.params.lambda = 1.2 * p.lambda0;
  p.params.eps = 0.01;
  p.params.s = 0.0;
  return p;
}

// The criterion-3 certificate set, shared with the multi-vortex run.
void pair_certificates(Outcome& o, const PairResult& r) {
  const SolveReport& s1 = r.first;
  const SolveReport& s2 = r.second.saddle;
  o.require(s1.converged, std::string("u1 converged (") + to_string(s1.status) + ")");
  o.require(s2.converged, std::string("u2 converged (") + to_string(s2.status) + ")");
  o.require(s1.residuals.masked_l2 < 1e-6, "u1 masked residual " + fmt(s1.residuals.masked_l2));
  o.require(s2.residuals.masked_l2 < 1e-6, "u2 masked residual " + fmt(s2.residuals.masked_l2));
  const double sep = s2.u.empty() ? 0.0 : linf_norm(s1.u - s2.u);
  o.require(sep > 1e-3, "||u1 - u2||_inf = " + fmt(sep));
  o.require(s2.energy.total > s1.energy.total,
            "I(u2) = " + fmt(s2.energy.total) + " > I(u1) = " + fmt(s1.energy.total));
  o.require(s1.constraint_margin > 0.0, "constraint margin " + fmt(s1.constraint_margin));
}

double rel(const ResidualReport& r, double scale) { return r.masked_l2 / scale; }

// Refinement cannot reduce a mismatch that is already rounding noise.
constexpr double kRoundingFloor = 1e-10;
bool improves(double coarse, double fine) {
  return fine <= coarse || std::max(coarse, fine) <= kRoundingFloor;
}

}  // namespace

int main() {
  const Problem p64 = make_problem(single(), 64);
  PairResult pair64;
  bool have_pair = false;

  run(1, "Green operator contraction and approximation", 10.0, [&](Outcome& o) {
    std::mt19937_64 rng(1);
    for (const CheckLine& l : green_operator_checks(p64.grid, rng, 100, {1.0, 0.1, 0.01}, 8)) {
      o.require(l.pass, l.name + " = " + fmt(l.value) + " (bound " + fmt(l.tol) + ")");
    }
  });

  run(2, "gradient certification for I_eps and I_0", 30.0, [&](Outcome& o) {
    std::mt19937_64 rng(2);
    const Functional Ie(p64.bg, p64.params);
    const Functional I0(p64.bg, p64.params, 0.0);
    double worst_e = 0.0, worst_0 = 0.0;
    for (int k = 0; k < 20; ++k) {
      const RealField u = 0.5 * random_bandlimited(p64.grid, rng, 8);
      const RealField phi = random_bandlimited(p64.grid, rng, 8);
      worst_e = std::max(worst_e, directional_derivative_error(Ie, u, phi));
      worst_0 = std::max(worst_0, directional_derivative_error(I0, u, phi));
    }
    o.require(worst_e < 1e-6, "I_eps worst relative error " + fmt(worst_e));
    o.require(worst_0 < 1e-6, "I_0 worst relative error " + fmt(worst_0));
  });

  run(3, "two solutions, m=1, N=64", 600.0, [&](Outcome& o) {
    pair64 = solve_pair(p64.bg, p64.params, p64.barrier, SolverOptions{});
    have_pair = true;
    pair_certificates(o, pair64);
  });

  run(4, "system equivalence for both solutions", 60.0, [&](Outcome& o) {
    o.require(have_pair && !pair64.second.saddle.u.empty(), "criterion 3 produced both fields");
    if (!have_pair || pair64.second.saddle.u.empty()) return;
    const SystemResiduals* sys[] = {&pair64.system1, &pair64.system2};
    for (int k = 0; k < 2; ++k) {
      const std::string tag = "u" + std::to_string(k + 1);
      const double r1 = rel(sys[k]->first, sys[k]->first_scale);
      const double r2 = rel(sys[k]->second, sys[k]->second_scale);
      o.require(r1 < 1e-5, tag + " first equation relative " + fmt(r1));
      o.require(r2 < 1e-5, tag + " second equation relative " + fmt(r2));
    }
  });

  run(5, "supersolution and lambda0", 120.0, [&](Outcome& o) {
    o.require(std::isfinite(p64.lambda0) && p64.lambda0 > 0.0, "lambda0 = " + fmt(p64.lambda0));
    const auto hi = verify_supersolution(p64.barrier, p64.bg, 1.01 * p64.lambda0);
    const auto lo = verify_supersolution(p64.barrier, p64.bg, 0.5 * p64.lambda0);
    o.require(hi.pass, "verifies at 1.01 lambda0 (min margin " + fmt(hi.min_margin) + ")");
    o.require(!lo.pass, "fails at 0.5 lambda0 (min margin " + fmt(lo.min_margin) + ")");
    const Problem p128 = make_problem(single(), 128);
    const double drift = std::abs(p128.lambda0 - p64.lambda0) / p64.lambda0;
    o.require(drift < 0.05, "lambda0 N=128 " + fmt(p128.lambda0) + ", relative change " +
                                fmt(drift));
  });

  LadderReport ladder;
  bool have_ladder = false;
  run(6, "eps continuation ladder", 1200.0, [&](Outcome& o) {
    ladder = continue_in_eps(p64.bg, p64.params, p64.barrier, {0.2, 0.1, 0.05, 0.02, 0.01},
                             SolverOptions{});
    have_ladder = true;
    o.require(ladder.complete, "limit and every rung converged");
    const auto& rows = ladder.rows;
    auto weakly_decreasing = [&](const std::function<double(const LadderRow&)>& f,
                                 const std::string& name) {
      double worst = 0.0;
      for (std::size_t k = 1; k < rows.size(); ++k) {
        worst = std::max(worst, f(rows[k]) / f(rows[k - 1]));
      }
      o.require(worst <= 1.1, name + " worst successive ratio " + fmt(worst));
    };
    weakly_decreasing([](const LadderRow& r) { return r.eps_lap_norm; }, "eps ||Lap u||_2");
    weakly_decreasing([](const LadderRow& r) { return r.mixed; }, "mixed term");
    weakly_decreasing([](const LadderRow& r) { return r.dist_u0; }, "||u_eps - u0||_inf");
    bool ordered = true;
    for (const LadderRow& r : rows) ordered = ordered && r.I_eps >= r.I0_of_u;
    o.require(ordered, "I_eps(u_eps) >= I_0(u_eps) on every rung");
    weakly_decreasing([](const LadderRow& r) { return r.I_eps - r.I0_of_u; }, "energy gap");
    const double g0 = rows.front().I_eps - rows.front().I0_of_u;
    const double g1 = rows.back().I_eps - rows.back().I0_of_u;
    const double bound = 2.0 * g0 * rows.back().eps / rows.front().eps;
    o.require(g1 <= bound, "gap at smallest eps " + fmt(g1) + " <= O(eps) bound " + fmt(bound));
  });

  run(7, "flux identity at the limit solution", 60.0, [&](Outcome& o) {
    if (!have_ladder) {
      ladder.limit = solve_limit(p64.bg, p64.params, p64.barrier, SolverOptions{});
    }
    o.require(ladder.limit.converged, "limit solution converged");
    const double flux = identity_checks(ladder.limit.u, p64.bg, p64.params).flux;
    o.require(flux < 1e-4, "|int F2 (F1 - s) - 4 pi / lambda^2| = " + fmt(flux));
  });

  run(8, "identity suite", 600.0, [&](Outcome& o) {
    const BackgroundData flat = trivial_background(p64.grid);
    std::mt19937_64 rng(8);
    double chain = 0.0, ibp = 0.0;
    for (int k = 0; k < 20; ++k) {
      const RealField u = 0.5 * random_bandlimited(p64.grid, rng, 3);
      const IdentityReport r = identity_checks(u, flat, p64.params);
      chain = std::max(chain, r.chain_rule);
      ibp = std::max(ibp, r.int_by_parts);
    }
    o.require(chain < 1e-6, "smooth fields: chain rule " + fmt(chain));
    o.require(ibp < 1e-6, "smooth fields: integration by parts " + fmt(ibp));

    o.require(have_pair, "criterion 3 solutions available");
    if (!have_pair) return;
    const Problem p128 = make_problem(single(), 128);
    const PairResult pair128 = solve_pair(p128.bg, p128.params, p128.barrier, SolverOptions{});
    o.require(pair128.first.converged && pair128.second.saddle.converged,
              "N=128 pair converged");
    const RealField* u64[] = {&pair64.first.u, &pair64.second.saddle.u};
    const RealField* u128[] = {&pair128.first.u, &pair128.second.saddle.u};
    for (int k = 0; k < 2; ++k) {
      const std::string tag = "u" + std::to_string(k + 1);
      const IdentityReport a = identity_checks(*u64[k], p64.bg, p64.params);
      const IdentityReport b = identity_checks(*u128[k], p128.bg, p128.params);
      o.require(a.chain_rule < 1e-3 && b.chain_rule < 1e-3,
                tag + " chain rule N=64 " + fmt(a.chain_rule) + ", N=128 " + fmt(b.chain_rule));
      o.require(improves(a.chain_rule, b.chain_rule),
                tag + " chain rule improves under refinement or sits at the rounding floor");
      o.require(a.int_by_parts < 1e-3 && b.int_by_parts < 1e-3,
                tag + " integration by parts N=64 " + fmt(a.int_by_parts) + ", N=128 " +
                    fmt(b.int_by_parts));
      o.require(improves(a.int_by_parts, b.int_by_parts),
                tag + " integration by parts improves under refinement or sits at the rounding "
                      "floor");
    }
  });

  run(9, "two solutions, m=2, n=1, N=64", 900.0, [&](Outcome& o) {
    const Problem pm = make_problem(multi(), 64);
    const PairResult r = solve_pair(pm.bg, pm.params, pm.barrier, SolverOptions{});
    pair_certificates(o, r);
    // At N=64 the system form of the second solution is under-resolved near
    // the negative vortex; it is reported here and checked at N=256.
    if (!r.second.saddle.u.empty()) {
      o.notes << "    info N=64 second-equation relative residual u1 "
              << fmt(rel(r.system1.second, r.system1.second_scale)) << ", u2 "
              << fmt(rel(r.system2.second, r.system2.second_scale)) << '\n';
    }
    const Problem pf = make_problem(multi(), 256);
    const PairResult f = solve_pair(pf.bg, pf.params, pf.barrier, SolverOptions{});
    pair_certificates(o, f);
    if (f.second.saddle.u.empty()) return;
    const SystemResiduals* sys[] = {&f.system1, &f.system2};
    for (int k = 0; k < 2; ++k) {
      const std::string tag = "N=256 u" + std::to_string(k + 1);
      const double r1 = rel(sys[k]->first, sys[k]->first_scale);
      const double r2 = rel(sys[k]->second, sys[k]->second_scale);
      o.require(r1 < 1e-5 && r2 < 1e-5,
                tag + " system residuals relative " + fmt(r1) + ", " + fmt(r2));
    }
  });

  std::printf("%s: %d criterion(s) failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
