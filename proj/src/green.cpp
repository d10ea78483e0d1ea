#include "mcsv/green.hpp"

#include <cmath>
#include <numbers>

#include "mcsv/error.hpp"

namespace mcsv {

namespace {

constexpr double kCutoff = 40.0;  // exp(-40) ~ 4e-18
constexpr double kFourPi = 4.0 * std::numbers::pi;

}  // namespace

double exp_integral_e1(double z) { return -std::expint(-z); }

double exp_integral_e1_plus_log(double z) {
  if (z < 0.5) {
    // E1(z) = -gamma - log z - sum_{k>=1} (-z)^k / (k k!)
    double term = 1.0;
    double sum = 0.0;
    for (int k = 1; k < 40; ++k) {
      term *= -z / k;
      const double add = term / k;
      sum += add;
      if (std::abs(add) < 1e-18) break;
    }
    return -std::numbers::egamma - sum;
  }
  return exp_integral_e1(z) + std::log(z);
}

double PeriodicGreen::default_split() { return 1.0 / kFourPi; }

PeriodicGreen::PeriodicGreen(double split) : split_(split) {
  if (!(split > 0.0)) throw Error(ErrorKind::Parameter, "Ewald split must be positive");
  // Minimum-image displacements have |d| <= sqrt(2)/2, so an image n is at
  // distance >= |n| - 0.71 from d.
  image_range_ = static_cast<int>(std::ceil(std::sqrt(4.0 * split_ * kCutoff) + 0.71));
  const double two_pi = 2.0 * std::numbers::pi;
  const int kmax = static_cast<int>(std::ceil(std::sqrt(kCutoff / (two_pi * two_pi * split_))));
  for (int k1 = -kmax; k1 <= kmax; ++k1) {
    for (int k2 = -kmax; k2 <= kmax; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      const double ksq = static_cast<double>(k1 * k1 + k2 * k2);
      const double decay = two_pi * two_pi * ksq * split_;
      if (decay > kCutoff) continue;
      modes_.push_back({two_pi * k1, two_pi * k2, std::exp(-decay) / (two_pi * two_pi * ksq)});
    }
  }
}

double PeriodicGreen::real_sum(Point d, bool skip_central) const {
  const double four_t = 4.0 * split_;
  double sum = 0.0;
  for (int n1 = -image_range_; n1 <= image_range_; ++n1) {
    for (int n2 = -image_range_; n2 <= image_range_; ++n2) {
      if (skip_central && n1 == 0 && n2 == 0) continue;
      const double a = d.x1 - n1;
      const double b = d.x2 - n2;
      const double z = (a * a + b * b) / four_t;
      if (z > kCutoff) continue;
      sum += exp_integral_e1(z);
    }
  }
  return sum / kFourPi;
}

double PeriodicGreen::reciprocal_sum(Point d) const {
  double sum = 0.0;
  for (const Mode& m : modes_) sum += m.coeff * std::cos(m.k1 * d.x1 + m.k2 * d.x2);
  return sum;
}

double PeriodicGreen::value(Point d) const {
  double v;
  Point g;
  evaluate(d, v, g);
  return v;
}

Point PeriodicGreen::gradient(Point d) const {
  double v;
  Point g;
  evaluate(d, v, g);
  return g;
}

void PeriodicGreen::evaluate(Point d, double& value, Point& grad) const {
  d = periodic_delta(d, {0.0, 0.0});
  if (d.x1 == 0.0 && d.x2 == 0.0) {
    throw Error(ErrorKind::SingularEvaluation, "Green function evaluated at its pole");
  }
  const double four_t = 4.0 * split_;
  double v = 0.0, g1 = 0.0, g2 = 0.0;
  for (int n1 = -image_range_; n1 <= image_range_; ++n1) {
    for (int n2 = -image_range_; n2 <= image_range_; ++n2) {
      const double a = d.x1 - n1;
      const double b = d.x2 - n2;
      const double r2 = a * a + b * b;
      const double z = r2 / four_t;
      if (z > kCutoff) continue;
      v += exp_integral_e1(z);
      // d/dx E1(|x|^2/4t) = -2 x exp(-z) / |x|^2
      const double e = -2.0 * std::exp(-z) / r2;
      g1 += e * a;
      g2 += e * b;
    }
  }
  v /= kFourPi;
  g1 /= kFourPi;
  g2 /= kFourPi;
  v -= split_;
  for (const Mode& m : modes_) {
    const double phase = m.k1 * d.x1 + m.k2 * d.x2;
    v += m.coeff * std::cos(phase);
    const double s = -m.coeff * std::sin(phase);
    g1 += s * m.k1;
    g2 += s * m.k2;
  }
  value = v;
  grad = {g1, g2};
}

double PeriodicGreen::regular(Point d) const {
  d = periodic_delta(d, {0.0, 0.0});
  const double four_t = 4.0 * split_;
  const double z = (d.x1 * d.x1 + d.x2 * d.x2) / four_t;
  // (1/4pi) E1(z) + (1/2pi) log r = (1/4pi) (E1(z) + log z + log 4t)
  const double central = (exp_integral_e1_plus_log(z) + std::log(four_t)) / kFourPi;
  return central + real_sum(d, true) - split_ + reciprocal_sum(d);
}

}  // namespace mcsv
