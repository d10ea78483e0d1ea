#pragma once

#include <memory>
#include <string>

#include "mcsv/field.hpp"

namespace mcsv {

/// Profile function f together with its composites in w = sigma + u:
///
///   F1(w) = f(e^w)
///   F2(w) = f'(e^w) e^w                     (= F1')
///   F3(w) = [f''(e^w) e^w + f'(e^w)] e^w    (= F2')
///   F4(w) = F3'(w)
///
/// Implementations must evaluate the composites in closed form without ever
/// forming e^w, so that they stay finite for |w| in the hundreds.
class Profile {
 public:
  virtual ~Profile() = default;

  virtual std::string name() const = 0;

  virtual double F1(double w) const = 0;
  virtual double F2(double w) const = 0;
  virtual double F3(double w) const = 0;
  virtual double F4(double w) const = 0;

  // f and derivatives in the original variable t > 0, used by the audit.
  virtual double f(double t) const = 0;
  virtual double df(double t) const = 0;
  virtual double d2f(double t) const = 0;
  virtual double d3f(double t) const = 0;

  /// f(0).
  virtual double f_zero() const = 0;
  /// sup_{t>0} f(t); +infinity when f is unbounded.
  virtual double f_sup() const = 0;
  /// Limit of f at infinity (the f_infinity of the decay bound).
  virtual double f_infinity() const = 0;

  /// f(0) < s < sup f.
  bool admits(double s) const { return f_zero() < s && s < f_sup(); }
};

using ProfilePtr = std::shared_ptr<const Profile>;

/// f(t) = (t - 1)/(t + 1): F1 = tanh(w/2), F2 = sech^2(w/2)/2.
ProfilePtr cp1_profile();

/// f(t) = t. Violates boundedness of f; only meaningful for the limit equation
/// with s = 1.
ProfilePtr linear_profile();

/// Lookup by configuration name ("cp1", "linear"). Throws Parameter.
ProfilePtr profile_by_name(const std::string& name);

struct Composites {
  RealField F1;
  RealField F2;
  RealField F3;
};

/// Pointwise F1, F2, F3 of w. Throws NonFinite for non-finite input.
Composites composites(const Profile& profile, const RealField& w);

struct AssumptionAudit {
  std::string profile;
  double s = 0.0;
  bool positivity = false;       // f' > 0 on the scan
  bool bracket = false;          // f(0) < s < sup f < infinity
  bool decay_bound = false;      // the weighted sup below is finite and stable
  double f_zero = 0.0;
  double f_sup = 0.0;
  double min_df = 0.0;
  double sup_t_f_gap = 0.0;      // sup t |f(t) - f_inf|
  double sup_t2_df = 0.0;        // sup t^2 f'(t)
  double sup_t3_d2f = 0.0;       // sup t^3 |f''(t)|
  double sup_t4_d3f = 0.0;       // sup t^4 |f'''(t)|
  double sup_weighted = 0.0;     // sup of the sum of the four terms
  std::string message;

  bool pass() const noexcept { return positivity && bracket && decay_bound; }
};

/// Scans t on [1e-8, 1e8] (log-spaced) and reports whether the profile with
/// level s satisfies positivity of f', the bracket on s, and the weighted
/// decay bound. Failures are reported, never thrown.
AssumptionAudit check_assumptions(const Profile& profile, double s);

struct ModelParams {
  double lambda = 1.0;
  double eps = 0.01;
  double s = 0.0;
  ProfilePtr profile = cp1_profile();

  /// Throws Parameter unless lambda > 0, eps > 0 and s is admissible.
  void validate() const;
};

struct PhysicalMapping {
  double lambda;
  double eps;
  double s;
};

/// (q, kappa, S) -> (lambda, eps, s) = (2/kappa, 1/(kappa q), -S).
PhysicalMapping map_physical_params(double q, double kappa, double S);

}  // namespace mcsv
