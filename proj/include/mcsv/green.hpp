#pragma once

#include <vector>

#include "mcsv/grid.hpp"

namespace mcsv {

/// Mean-zero periodic Green function of the Laplacian on the unit torus,
/// -Lap G = delta_0 - 1, evaluated by an Ewald split of the heat kernel at
/// time `split`:
///
///   G(d) = (1/4pi) sum_n E1(|d-n|^2 / 4t) - t
///        + sum_{k != 0} cos(2 pi k.d) exp(-4 pi^2 |k|^2 t) / (4 pi^2 |k|^2).
///
/// Both lattice sums are truncated where their terms fall below 1e-17, so the
/// result is independent of `split` to roundoff. Near the origin
/// G(d) = -(1/2pi) log|d| + regular(d).
class PeriodicGreen {
 public:
  explicit PeriodicGreen(double split = default_split());

  static double default_split();

  double split() const noexcept { return split_; }

  /// Throws SingularEvaluation at d = 0 (mod 1).
  double value(Point d) const;
  /// Gradient with respect to d. Throws SingularEvaluation at d = 0.
  Point gradient(Point d) const;
  /// G(d) + (1/2pi) log|d_min| with d_min the minimum image; continuous at 0.
  double regular(Point d) const;

  /// value and gradient in one pass.
  void evaluate(Point d, double& value, Point& grad) const;

 private:
  struct Mode {
    double k1, k2, coeff;
  };
  double split_;
  int image_range_;
  std::vector<Mode> modes_;

  double real_sum(Point d, bool skip_central) const;
  double reciprocal_sum(Point d) const;
};

/// E1(z) for z > 0.
double exp_integral_e1(double z);
/// E1(z) + log z, accurate as z -> 0 (tends to -Euler gamma).
double exp_integral_e1_plus_log(double z);

}  // namespace mcsv
