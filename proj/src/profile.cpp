#include "mcsv/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mcsv/error.hpp"

namespace mcsv {

namespace {

class Cp1Profile final : public Profile {
 public:
  std::string name() const override { return "cp1"; }

  double F1(double w) const override { return std::tanh(0.5 * w); }
  double F2(double w) const override { return 0.5 * sech2(w); }
  double F3(double w) const override { return -0.5 * sech2(w) * std::tanh(0.5 * w); }
  double F4(double w) const override {
    const double s2 = sech2(w);
    const double t = std::tanh(0.5 * w);
    return 0.5 * s2 * t * t - 0.25 * s2 * s2;
  }

  double f(double t) const override { return (t - 1.0) / (t + 1.0); }
  double df(double t) const override { return 2.0 / ((t + 1.0) * (t + 1.0)); }
  double d2f(double t) const override { return -4.0 / std::pow(t + 1.0, 3); }
  double d3f(double t) const override { return 12.0 / std::pow(t + 1.0, 4); }

  double f_zero() const override { return -1.0; }
  double f_sup() const override { return 1.0; }
  double f_infinity() const override { return 1.0; }

 private:
  // sech^2(w/2) = 4 e^{-|w|} / (1 + e^{-|w|})^2, no overflow for any w.
  static double sech2(double w) {
    const double e = std::exp(-std::abs(w));
    const double d = 1.0 + e;
    return 4.0 * e / (d * d);
  }
};

class LinearProfile final : public Profile {
 public:
  std::string name() const override { return "linear"; }

  double F1(double w) const override { return std::exp(w); }
  double F2(double w) const override { return std::exp(w); }
  double F3(double w) const override { return std::exp(w); }
  double F4(double w) const override { return std::exp(w); }

  double f(double t) const override { return t; }
  double df(double) const override { return 1.0; }
  double d2f(double) const override { return 0.0; }
  double d3f(double) const override { return 0.0; }

  double f_zero() const override { return 0.0; }
  double f_sup() const override { return std::numeric_limits<double>::infinity(); }
  double f_infinity() const override { return std::numeric_limits<double>::infinity(); }
};

struct ScanResult {
  double min_df = std::numeric_limits<double>::infinity();
  double t_gap = 0.0, t2_df = 0.0, t3_d2f = 0.0, t4_d3f = 0.0, weighted = 0.0;
  bool finite = true;
};

ScanResult scan(const Profile& p, double log_lo, double log_hi, int points) {
  ScanResult r;
  const double finf = p.f_infinity();
  for (int i = 0; i < points; ++i) {
    const double t = std::pow(10.0, log_lo + (log_hi - log_lo) * i / (points - 1));
    const double df = p.df(t);
    const double a = t * std::abs(p.f(t) - finf);
    const double b = t * t * df;
    const double c = t * t * t * std::abs(p.d2f(t));
    const double d = t * t * t * t * std::abs(p.d3f(t));
    const double sum = a + b + c + d;
    if (!std::isfinite(sum)) r.finite = false;
    r.min_df = std::min(r.min_df, df);
    r.t_gap = std::max(r.t_gap, a);
    r.t2_df = std::max(r.t2_df, b);
    r.t3_d2f = std::max(r.t3_d2f, c);
    r.t4_d3f = std::max(r.t4_d3f, d);
    r.weighted = std::max(r.weighted, sum);
  }
  return r;
}

}  // namespace

ProfilePtr cp1_profile() {
  static const ProfilePtr p = std::make_shared<Cp1Profile>();
  return p;
}

ProfilePtr linear_profile() {
  static const ProfilePtr p = std::make_shared<LinearProfile>();
  return p;
}

ProfilePtr profile_by_name(const std::string& name) {
  if (name == "cp1") return cp1_profile();
  if (name == "linear") return linear_profile();
  throw Error(ErrorKind::Parameter, "unknown profile '" + name + "'");
}

Composites composites(const Profile& profile, const RealField& w) {
  require_finite(w, "composite argument");
  return {w.map([&](double x) { return profile.F1(x); }),
          w.map([&](double x) { return profile.F2(x); }),
          w.map([&](double x) { return profile.F3(x); })};
}

AssumptionAudit check_assumptions(const Profile& profile, double s) {
  AssumptionAudit a;
  a.profile = profile.name();
  a.s = s;
  a.f_zero = profile.f_zero();
  a.f_sup = profile.f_sup();

  const ScanResult coarse = scan(profile, -8.0, 8.0, 2001);
  const ScanResult fine = scan(profile, -8.0, 8.0, 8001);
  const ScanResult inner = scan(profile, -6.0, 6.0, 2001);

  a.min_df = fine.min_df;
  a.sup_t_f_gap = fine.t_gap;
  a.sup_t2_df = fine.t2_df;
  a.sup_t3_d2f = fine.t3_d2f;
  a.sup_t4_d3f = fine.t4_d3f;
  a.sup_weighted = fine.weighted;

  a.positivity = fine.min_df > 0.0;
  a.bracket = std::isfinite(a.f_sup) && a.f_zero < s && s < a.f_sup;
  // A bounded weighted sup neither moves under scan refinement nor grows when
  // the scan window widens by two decades on each side.
  const bool stable = fine.finite && coarse.finite &&
                      std::abs(fine.weighted - coarse.weighted) <= 1e-3 * fine.weighted;
  const bool saturated = inner.finite && fine.weighted <= 1.01 * inner.weighted + 1e-12;
  a.decay_bound = std::isfinite(profile.f_infinity()) && profile.f_infinity() > s && stable &&
                  saturated;

  std::ostringstream msg;
  if (!a.positivity) msg << "f' is not positive on the scan; ";
  if (!a.bracket) {
    msg << "level s=" << s << " outside (f(0), sup f) = (" << a.f_zero << ", " << a.f_sup
        << "); ";
  }
  if (!a.decay_bound) msg << "weighted decay bound is not finite; ";
  a.message = msg.str();
  if (a.message.empty()) a.message = "all assumptions hold";
  return a;
}

void ModelParams::validate() const {
  if (!(lambda > 0.0)) throw Error(ErrorKind::Parameter, "lambda must be positive");
  if (!(eps > 0.0)) throw Error(ErrorKind::Parameter, "eps must be positive");
  if (!profile) throw Error(ErrorKind::Parameter, "no profile selected");
  if (!profile->admits(s)) {
    std::ostringstream msg;
    msg << "s=" << s << " is not admissible for profile " << profile->name()
        << " (need f(0) < s < sup f)";
    throw Error(ErrorKind::Parameter, msg.str());
  }
}

PhysicalMapping map_physical_params(double q, double kappa, double S) {
  if (!(q > 0.0) || !(kappa > 0.0)) {
    throw Error(ErrorKind::Parameter, "physical constants q and kappa must be positive");
  }
  return {2.0 / kappa, 1.0 / (kappa * q), -S};
}

}  // namespace mcsv
