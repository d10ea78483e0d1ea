#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mcsv/field.hpp"
#include "mcsv/green.hpp"

namespace mcsv {

/// Positive vortex points p_1..p_m and negative vortex points q_1..q_n.
struct VortexConfig {
  std::vector<Point> positives;
  std::vector<Point> negatives;

  int m() const noexcept { return static_cast<int>(positives.size()); }
  int n() const noexcept { return static_cast<int>(negatives.size()); }
  /// A = 4 pi (m - n).
  double flux() const noexcept;

  /// Throws Scope unless m > n and m >= 1.
  void validate() const;
  /// Same points with coordinates reduced into [0,1).
  VortexConfig wrapped() const;
};

enum class VortexSign { Positive, Negative };

struct SigmaSample {
  double value = 0.0;
  Point grad;
};

/// sigma(x) = sum_j 4pi G(x - p_j) - sum_k 4pi G(x - q_k), the mean-zero
/// solution of -Lap sigma = 4pi sum delta_p - 4pi sum delta_q - A.
/// Throws SingularEvaluation when x is a vortex point.
SigmaSample eval_sigma(const VortexConfig& config, Point x,
                       const PeriodicGreen& green = PeriodicGreen());

/// Smooth part of sigma at one vortex: gamma_j = sigma + 2 log|x - p_j| for a
/// positive point, theta_k = sigma - 2 log|x - q_k| for a negative one.
/// The returned callable is continuous at the vortex itself.
std::function<double(Point)> sigma_regular_part(const VortexConfig& config, int index,
                                                VortexSign sign);

/// sigma and its analytic gradient sampled on a grid, with the near-vortex
/// mask used by every masked norm.
struct BackgroundData {
  VortexConfig config;
  GridPtr grid;
  RealField sigma;
  RealField sigma_d1;
  RealField sigma_d2;
  double mask_radius = 0.0;
  /// 1 on nodes farther than mask_radius from every vortex, 0 otherwise.
  std::vector<std::uint8_t> keep;

  double flux() const noexcept { return config.flux(); }
  /// Indicator (1 inside) of nodes within r0 of any vortex point.
  std::vector<std::uint8_t> near_vortex_mask(double r0) const;
};

/// Samples the background on `grid`. Every vortex must be at least h/4 from
/// every node; mask_radius <= 0 selects the default 4h.
BackgroundData bind_background(const VortexConfig& config, GridPtr grid,
                               double mask_radius = 0.0);

/// Background with no vortices (sigma = 0, A = 0). Used for smooth-case
/// checks of the operators and identities; it bypasses the m > n rule.
BackgroundData trivial_background(GridPtr grid);

/// Norms that skip masked-out nodes. The L2 variant still integrates with the
/// full-grid weight h^2.
double masked_l2(const RealField& u, const std::vector<std::uint8_t>& keep);
double masked_linf(const RealField& u, const std::vector<std::uint8_t>& keep);
double masked_min(const RealField& u, const std::vector<std::uint8_t>& keep);

}  // namespace mcsv
