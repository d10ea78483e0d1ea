#pragma once

#include "mcsv/background.hpp"
#include "mcsv/profile.hpp"

namespace mcsv {

struct Cutoff {
  RealField g;
  double rho = 0.0;
};

/// g = 1 on the rho-disks around the positive points, 0 outside the 2 rho
/// disks, with a C^2 quintic transition. rho is the smallest of 0.2, a
/// quarter of the smallest periodic distance between positive points, and
/// 0.95 / sqrt(8 pi m) (so the 2 rho disks cover less than half the torus).
/// Throws DegenerateConfig for coincident positive points.
Cutoff build_cutoff(const VortexConfig& config, GridPtr grid);

/// Smooth right-hand side A - 4 pi m + 8 pi m (g - int g).
RealField ustar_source(const VortexConfig& config, const RealField& g);

/// Mean-zero u* with -Lap u* = ustar_source + 4 pi sum_k delta_{q_k}.
/// Throws SingularEvaluation if a node coincides with a negative point.
RealField build_ustar(const VortexConfig& config, const RealField& g, GridPtr grid);

struct Barrier {
  RealField u_bar;
  RealField u_star;
  RealField g;
  /// Regular part of -Lap u_bar (the smooth source of u*).
  RealField neg_laplacian;
  double rho = 0.0;
  double C_bar = 0.0;
  double c0 = 0.0;
  double lambda0 = 0.0;
  double s = 0.0;
  ProfilePtr profile;
};

/// Builds u_bar = u* + C_bar with the smallest C_bar (to bisection accuracy)
/// such that F1(sigma + u_bar) - s >= c0 = (f_inf - s)/2 on the masked nodes.
/// Throws Parameter if the profile fails its assumption audit at s, and
/// BarrierConstruction if C_bar would exceed 1e3.
Barrier build_barrier(const BackgroundData& bg, ProfilePtr profile, double s);

struct SupersolutionCheck {
  bool pass = false;
  /// -Lap u_bar - lambda^2 F2(w)(s - F1(w)) - A, w = sigma + u_bar.
  RealField margin;
  double min_margin = 0.0;
};

SupersolutionCheck verify_supersolution(const Barrier& barrier, const BackgroundData& bg,
                                        double lambda);

/// Smallest lambda (doubling, then 20 bisection steps) at which the barrier
/// verifies. Throws BarrierConstruction if none is found below 1e6.
double find_lambda0(const Barrier& barrier, const BackgroundData& bg);

}  // namespace mcsv
