#include "mcsv/supersolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mcsv/error.hpp"
#include "mcsv/spectral.hpp"

namespace mcsv {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRhoCap = 0.2;
constexpr double kCbarCap = 1e3;
constexpr double kLambdaCap = 1e6;

// 1 for r <= rho, 0 for r >= 2 rho, quintic smoothstep in between.
double bump(double r, double rho) {
  const double t = std::clamp((r - rho) / rho, 0.0, 1.0);
  return 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

double min_gap(const BackgroundData& bg, const Barrier& b, double C) {
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < bg.keep.size(); ++i) {
    if (!bg.keep[i]) continue;
    lo = std::min(lo, b.profile->F1(bg.sigma[i] + b.u_star[i] + C) - b.s);
  }
  return lo;
}

}  // namespace

Cutoff build_cutoff(const VortexConfig& config_in, GridPtr grid) {
  const VortexConfig config = config_in.wrapped();
  const int m = config.m();
  if (m < 1) throw Error(ErrorKind::Scope, "cutoff needs at least one positive vortex");

  double rho = std::min(kRhoCap, 0.95 / std::sqrt(8.0 * kPi * m));
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const double d = periodic_distance(config.positives[i], config.positives[j]);
      if (d < 1e-12) {
        throw Error(ErrorKind::DegenerateConfig,
                    "positive vortices " + std::to_string(i) + " and " + std::to_string(j) +
                        " coincide");
      }
      rho = std::min(rho, 0.25 * d);
    }
  }

  Cutoff out;
  out.rho = rho;
  out.g = RealField::sample(grid, [&](Point x) {
    double v = 0.0;
    for (const Point& p : config.positives) v = std::max(v, bump(periodic_distance(x, p), rho));
    return v;
  });
  return out;
}

RealField ustar_source(const VortexConfig& config, const RealField& g) {
  const double m = config.m();
  RealField src = (8.0 * kPi * m) * (g - integrate(g));
  src += config.flux() - 4.0 * kPi * m;
  return src;
}

RealField build_ustar(const VortexConfig& config_in, const RealField& g, GridPtr grid) {
  const VortexConfig config = config_in.wrapped();
  RealField u = poisson_inverse_meanzero(ustar_source(config, g));
  if (!config.negatives.empty()) {
    const PeriodicGreen green;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const Point x = grid->node(i);
      for (const Point& q : config.negatives) {
        u[i] += 4.0 * kPi * green.value({x.x1 - q.x1, x.x2 - q.x2});
      }
    }
  }
  return u;
}

Barrier build_barrier(const BackgroundData& bg, ProfilePtr profile, double s) {
  if (!profile) throw Error(ErrorKind::Parameter, "no profile selected");
  const AssumptionAudit audit = check_assumptions(*profile, s);
  if (!audit.pass()) {
    throw Error(ErrorKind::Parameter, "profile assumption audit failed: " + audit.message);
  }

  Barrier b;
  b.profile = profile;
  b.s = s;
  Cutoff cut = build_cutoff(bg.config, bg.grid);
  b.g = std::move(cut.g);
  b.rho = cut.rho;
  b.u_star = build_ustar(bg.config, b.g, bg.grid);
  b.neg_laplacian = ustar_source(bg.config, b.g);
  b.c0 = 0.5 * (profile->f_infinity() - s);

  // Bracket the threshold, then bisect; the gap is increasing in C.
  auto ok = [&](double C) { return min_gap(bg, b, C) >= b.c0; };
  double lo = 0.0, hi = 0.0;
  if (ok(0.0)) {
    double step = 1.0;
    lo = -step;
    while (ok(lo)) {
      hi = lo;
      step *= 2.0;
      lo = -step;
      if (step > kCbarCap) break;
    }
  } else {
    hi = 1.0;
    while (!ok(hi)) {
      lo = hi;
      hi *= 2.0;
      if (hi > kCbarCap) {
        std::ostringstream msg;
        msg << "barrier shift exceeds " << kCbarCap << " (s=" << s
            << " is too close to sup f for this configuration)";
        throw Error(ErrorKind::BarrierConstruction, msg.str());
      }
    }
  }
  for (int it = 0; it < 60 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  b.C_bar = hi;
  b.u_bar = b.u_star + b.C_bar;
  return b;
}

SupersolutionCheck verify_supersolution(const Barrier& barrier, const BackgroundData& bg,
                                        double lambda) {
  const Profile& p = *barrier.profile;
  const double l2 = lambda * lambda;
  const double A = bg.flux();
  SupersolutionCheck out;
  out.margin = RealField(bg.grid, 0.0);
  out.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.margin.size(); ++i) {
    const double w = bg.sigma[i] + barrier.u_bar[i];
    const double m = barrier.neg_laplacian[i] - l2 * p.F2(w) * (barrier.s - p.F1(w)) - A;
    out.margin[i] = m;
    if (bg.keep[i]) out.min_margin = std::min(out.min_margin, m);
  }
  out.pass = out.min_margin >= 0.0;
  return out;
}

double find_lambda0(const Barrier& barrier, const BackgroundData& bg) {
  auto ok = [&](double l) { return verify_supersolution(barrier, bg, l).pass; };
  double lo = 0.0, hi = 1.0;
  if (ok(hi)) {
    while (hi > 1e-6 && ok(0.5 * hi)) hi *= 0.5;
    lo = 0.5 * hi;
  } else {
    while (!ok(hi)) {
      lo = hi;
      hi *= 2.0;
      if (hi > kLambdaCap) {
        throw Error(ErrorKind::BarrierConstruction,
                    "no lambda below 1e6 makes the barrier a supersolution");
      }
    }
  }
  for (int it = 0; it < 20; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace mcsv
