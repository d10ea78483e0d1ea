#include "mcsv/spectral.hpp"

#include <cmath>
#include <limits>

#include "mcsv/error.hpp"

namespace mcsv {

namespace {

template <class Symbol>
RealField apply_multiplier(const RealField& u, Symbol&& symbol) {
  require_finite(u, "spectral operator input");
  const Grid& g = u.grid_ref();
  Spectrum spec = g.forward(u.values());
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= symbol(i);
  return RealField(u.grid(), g.inverse(std::move(spec)));
}

}  // namespace

RealField laplacian(const RealField& u) {
  const auto sym = u.grid_ref().laplacian_symbol();
  return apply_multiplier(u, [&](std::size_t i) { return sym[i]; });
}

RealField bilaplacian(const RealField& u) {
  const auto sym = u.grid_ref().bilaplacian_symbol();
  return apply_multiplier(u, [&](std::size_t i) { return sym[i]; });
}

Gradient gradient(const RealField& u) {
  require_finite(u, "gradient input");
  const Grid& g = u.grid_ref();
  const Spectrum spec = g.forward(u.values());
  const auto s1 = g.derivative_symbol_x1();
  const auto s2 = g.derivative_symbol_x2();
  Spectrum a(spec.size()), b(spec.size());
  const std::complex<double> I(0.0, 1.0);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    a[i] = I * s1[i] * spec[i];
    b[i] = I * s2[i] * spec[i];
  }
  return {RealField(u.grid(), g.inverse(std::move(a))),
          RealField(u.grid(), g.inverse(std::move(b)))};
}

RealField divergence(const RealField& a, const RealField& b) {
  require_same_grid(a, b);
  require_finite(a, "divergence input");
  require_finite(b, "divergence input");
  const Grid& g = a.grid_ref();
  const Spectrum sa = g.forward(a.values());
  const Spectrum sb = g.forward(b.values());
  const auto s1 = g.derivative_symbol_x1();
  const auto s2 = g.derivative_symbol_x2();
  Spectrum out(sa.size());
  const std::complex<double> I(0.0, 1.0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = I * (s1[i] * sa[i] + s2[i] * sb[i]);
  return RealField(a.grid(), g.inverse(std::move(out)));
}

RealField helmholtz_inverse(const RealField& h, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::Parameter, "helmholtz_inverse requires eps > 0");
  const auto sym = h.grid_ref().laplacian_symbol();
  const double e2 = eps * eps;
  return apply_multiplier(h, [&](std::size_t i) { return 1.0 / (1.0 - e2 * sym[i]); });
}

RealField poisson_inverse_meanzero(const RealField& h) {
  const auto sym = h.grid_ref().laplacian_symbol();
  return apply_multiplier(h, [&](std::size_t i) { return i == 0 ? 0.0 : -1.0 / sym[i]; });
}

RealField precond_inverse(const RealField& h, double eps, double tau) {
  if (!(eps >= 0.0) || !(tau > 0.0)) {
    throw Error(ErrorKind::Parameter, "precond_inverse requires eps >= 0 and tau > 0");
  }
  const auto lap = h.grid_ref().laplacian_symbol();
  const auto bilap = h.grid_ref().bilaplacian_symbol();
  const double e2 = eps * eps;
  return apply_multiplier(h, [&](std::size_t i) { return 1.0 / (e2 * bilap[i] - lap[i] + tau); });
}

RealField precond_apply(const RealField& h, double eps, double tau) {
  const auto lap = h.grid_ref().laplacian_symbol();
  const auto bilap = h.grid_ref().bilaplacian_symbol();
  const double e2 = eps * eps;
  return apply_multiplier(h, [&](std::size_t i) { return e2 * bilap[i] - lap[i] + tau; });
}

double integrate(const RealField& u) {
  double sum = 0.0;
  for (double v : u.values()) sum += v;
  return sum * u.grid_ref().weight();
}

double mean(const RealField& u) { return integrate(u); }

double inner(const RealField& a, const RealField& b) {
  require_same_grid(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum * a.grid_ref().weight();
}

double lq_norm(const RealField& u, double q) {
  if (std::isinf(q)) return linf_norm(u);
  if (!(q >= 1.0)) throw Error(ErrorKind::Parameter, "lq_norm requires q >= 1");
  if (q == 2.0) return l2_norm(u);
  double sum = 0.0;
  for (double v : u.values()) sum += std::pow(std::abs(v), q);
  return std::pow(sum * u.grid_ref().weight(), 1.0 / q);
}

double l2_norm(const RealField& u) { return std::sqrt(inner(u, u)); }

double linf_norm(const RealField& u) {
  double m = 0.0;
  for (double v : u.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace mcsv
