#pragma once

#include "mcsv/background.hpp"
#include "mcsv/profile.hpp"
#include "mcsv/spectral.hpp"

namespace mcsv {

/// The five terms of
///   I_eps(u) = eps^2/2 int (Lap u)^2 + 1/2 int |grad u|^2
///            + eps lambda int F2(w) |grad w|^2 + lambda^2/2 int (F1(w) - s)^2
///            - A int u,          w = sigma + u.
struct EnergyBreakdown {
  double biharmonic = 0.0;
  double dirichlet = 0.0;
  double mixed = 0.0;
  double potential = 0.0;
  double linear = 0.0;
  double total = 0.0;
};

struct ResidualReport {
  double global_l2 = 0.0;
  double masked_l2 = 0.0;
  double linf_masked = 0.0;
  double mean_residual = 0.0;
};

ResidualReport make_residual_report(const RealField& r, const std::vector<std::uint8_t>& keep);

/// Linearisation of the first variation at a fixed u, for Krylov solves.
class Linearization {
 public:
  RealField apply(const RealField& phi) const;

 private:
  friend class Functional;
  double eps_ = 0.0;
  double eps_lambda_ = 0.0;
  RealField a1_, a2_;      // grad w
  RealField f2_, f3_;      // composites at w
  RealField zeroth_;       // coefficient of phi without derivatives
};

/// I_eps on a bound background, or I_0 when constructed with eps = 0.
///
/// The gradient is the exact derivative of the discrete energy: the mixed
/// term contributes eps lambda [F3 |grad w|^2 - 2 div(F2 grad w)], which is
/// the spectral form of eps lambda [F3 |grad w|^2 - 2 Lap F1(w)].
class Functional {
 public:
  Functional(const BackgroundData& bg, const ModelParams& params);
  /// Explicit eps (eps = 0 gives I_0).
  Functional(const BackgroundData& bg, const ModelParams& params, double eps);

  double eps() const noexcept { return eps_; }
  double lambda() const noexcept { return lambda_; }
  const BackgroundData& background() const noexcept { return *bg_; }

  EnergyBreakdown energy(const RealField& u) const;
  double value(const RealField& u) const { return energy(u).total; }
  RealField gradient(const RealField& u) const;
  Linearization linearize(const RealField& u) const;
  RealField hessian_apply(const RealField& u, const RealField& phi) const;

  /// Sum of the L2 norms of the individual terms of the gradient. Used to
  /// make residual tolerances relative to the size of the equation.
  double residual_scale(const RealField& u) const;

 private:
  struct State;
  State state(const RealField& u) const;

  const BackgroundData* bg_;
  const Profile* profile_;
  double lambda_;
  double eps_;
  double s_;
};

EnergyBreakdown eval_I_eps(const RealField& u, const BackgroundData& bg,
                           const ModelParams& params);
RealField grad_I_eps(const RealField& u, const BackgroundData& bg, const ModelParams& params);
/// Strong residual of the fourth-order equation (the gradient field).
ResidualReport residual_fourth(const RealField& u, const BackgroundData& bg,
                               const ModelParams& params);

double eval_I0(const RealField& u, const BackgroundData& bg, const ModelParams& params);
RealField grad_I0(const RealField& u, const BackgroundData& bg, const ModelParams& params);
ResidualReport residual_limit(const RealField& u, const BackgroundData& bg,
                              const ModelParams& params);

/// v = -eps/lambda Lap u - eps/lambda A + F1(sigma + u).
RealField recover_v(const RealField& u, const BackgroundData& bg, const ModelParams& params);

struct SystemResiduals {
  /// r1 = -Lap u - lambda/eps (v - F1) - A
  ResidualReport first;
  /// r2 = -Lap v - (1/eps) [lambda F2 (s - v) - (v - F1)/eps]
  ResidualReport second;
  /// Same equation rearranged as
  /// -Lap v + eps^-2 (1 + eps lambda F2) v - eps^-2 (F1 + eps lambda s F2).
  ResidualReport second_rearranged;
  /// Largest masked L2 norm among the terms of each equation.
  double first_scale = 0.0;
  double second_scale = 0.0;
};

SystemResiduals residual_system(const RealField& u, const RealField& v,
                                const BackgroundData& bg, const ModelParams& params);

struct IdentityReport {
  /// Relative masked L2 mismatch of
  /// Lap F1(w) = F3(w) |grad w|^2 + F2(w) (Lap u + A).
  double chain_rule = 0.0;
  /// Relative mismatch of
  /// int F3 |grad w|^2 u + 2 int F2 grad w . grad u
  ///   = int F2 grad w . grad u - int F2 (Lap u + A) u.
  double int_by_parts = 0.0;
  double int_by_parts_lhs = 0.0;
  double int_by_parts_rhs = 0.0;
  /// | int F2 (F1 - s) - A / lambda^2 |; vanishes at limit-equation solutions.
  double flux = 0.0;
};

IdentityReport identity_checks(const RealField& u, const BackgroundData& bg,
                               const ModelParams& params);

}  // namespace mcsv
