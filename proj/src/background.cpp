#include "mcsv/background.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mcsv/error.hpp"

namespace mcsv {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

double wrap_unit(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

void check_placement(const std::vector<Point>& pts, const Grid& grid, const char* label) {
  const double h = grid.spacing();
  for (std::size_t idx = 0; idx < pts.size(); ++idx) {
    const Point p = pts[idx];
    // nearest node along each axis
    const double i1 = std::round(p.x1 / h - grid.offset());
    const double i2 = std::round(p.x2 / h - grid.offset());
    const Point node{(i1 + grid.offset()) * h, (i2 + grid.offset()) * h};
    const double dist = periodic_distance(p, node);
    if (dist < 0.25 * h) {
      throw Error(ErrorKind::Placement,
                  std::string(label) + " vortex " + std::to_string(idx) +
                      " lies within h/4 of a grid node (distance " + std::to_string(dist) +
                      ")");
    }
  }
}

}  // namespace

double VortexConfig::flux() const noexcept { return kFourPi * (m() - n()); }

void VortexConfig::validate() const {
  if (m() == n()) {
    throw Error(ErrorKind::Scope,
                "m = n is out of scope; the multiplicity result requires m > n");
  }
  if (m() < n()) {
    throw Error(ErrorKind::Scope,
                "m < n: swap the roles of positive and negative points so that m > n");
  }
}

VortexConfig VortexConfig::wrapped() const {
  VortexConfig out = *this;
  for (Point& p : out.positives) p = {wrap_unit(p.x1), wrap_unit(p.x2)};
  for (Point& q : out.negatives) q = {wrap_unit(q.x1), wrap_unit(q.x2)};
  return out;
}

SigmaSample eval_sigma(const VortexConfig& config, Point x, const PeriodicGreen& green) {
  SigmaSample s;
  auto accumulate = [&](const std::vector<Point>& pts, double sign) {
    for (const Point& p : pts) {
      double v;
      Point g;
      green.evaluate({x.x1 - p.x1, x.x2 - p.x2}, v, g);
      s.value += sign * kFourPi * v;
      s.grad.x1 += sign * kFourPi * g.x1;
      s.grad.x2 += sign * kFourPi * g.x2;
    }
  };
  accumulate(config.positives, 1.0);
  accumulate(config.negatives, -1.0);
  return s;
}

std::function<double(Point)> sigma_regular_part(const VortexConfig& config, int index,
                                                VortexSign sign) {
  const auto& own = sign == VortexSign::Positive ? config.positives : config.negatives;
  if (index < 0 || index >= static_cast<int>(own.size())) {
    throw Error(ErrorKind::Parameter, "vortex index out of range");
  }
  return [config, index, sign, green = PeriodicGreen()](Point x) {
    double total = 0.0;
    auto add = [&](const std::vector<Point>& pts, double s, bool is_own_list) {
      for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
        const Point d{x.x1 - pts[i].x1, x.x2 - pts[i].x2};
        if (is_own_list && i == index) {
          total += s * kFourPi * green.regular(d);
        } else {
          total += s * kFourPi * green.value(d);
        }
      }
    };
    add(config.positives, 1.0, sign == VortexSign::Positive);
    add(config.negatives, -1.0, sign == VortexSign::Negative);
    return total;
  };
}

std::vector<std::uint8_t> BackgroundData::near_vortex_mask(double r0) const {
  std::vector<std::uint8_t> inside(grid->size(), 0);
  for (std::size_t i = 0; i < inside.size(); ++i) {
    const Point x = grid->node(i);
    for (const auto* pts : {&config.positives, &config.negatives}) {
      for (const Point& p : *pts) {
        if (periodic_distance(x, p) < r0) inside[i] = 1;
      }
    }
  }
  return inside;
}

BackgroundData bind_background(const VortexConfig& config_in, GridPtr grid,
                               double mask_radius) {
  VortexConfig config = config_in.wrapped();
  config.validate();
  check_placement(config.positives, *grid, "positive");
  check_placement(config.negatives, *grid, "negative");

  BackgroundData bg;
  bg.config = config;
  bg.grid = grid;
  bg.mask_radius = mask_radius > 0.0 ? mask_radius : 4.0 * grid->spacing();

  std::vector<double> s(grid->size()), s1(grid->size()), s2(grid->size());
  const PeriodicGreen green;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const SigmaSample sample = eval_sigma(config, grid->node(i), green);
    s[i] = sample.value;
    s1[i] = sample.grad.x1;
    s2[i] = sample.grad.x2;
  }
  bg.sigma = RealField(grid, std::move(s));
  bg.sigma_d1 = RealField(grid, std::move(s1));
  bg.sigma_d2 = RealField(grid, std::move(s2));

  const auto inside = bg.near_vortex_mask(bg.mask_radius);
  bg.keep.resize(inside.size());
  for (std::size_t i = 0; i < inside.size(); ++i) bg.keep[i] = inside[i] ? 0 : 1;
  return bg;
}

BackgroundData trivial_background(GridPtr grid) {
  BackgroundData bg;
  bg.grid = grid;
  bg.sigma = RealField(grid, 0.0);
  bg.sigma_d1 = RealField(grid, 0.0);
  bg.sigma_d2 = RealField(grid, 0.0);
  bg.mask_radius = 0.0;
  bg.keep.assign(grid->size(), 1);
  return bg;
}

double masked_l2(const RealField& u, const std::vector<std::uint8_t>& keep) {
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (keep[i]) sum += u[i] * u[i];
  }
  return std::sqrt(sum * u.grid_ref().weight());
}

double masked_linf(const RealField& u, const std::vector<std::uint8_t>& keep) {
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (keep[i]) m = std::max(m, std::abs(u[i]));
  }
  return m;
}

double masked_min(const RealField& u, const std::vector<std::uint8_t>& keep) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (keep[i]) m = std::min(m, u[i]);
  }
  return m;
}

}  // namespace mcsv
