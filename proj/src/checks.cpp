#include "mcsv/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mcsv {

RealField random_bandlimited(GridPtr grid, std::mt19937_64& rng, int kmax) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = grid->n();
  const std::size_t cols = static_cast<std::size_t>(n / 2 + 1);
  Spectrum spec(grid->spectrum_size(), {0.0, 0.0});
  for (std::size_t row = 0; row < static_cast<std::size_t>(n); ++row) {
    const int k2 = grid->freq_x2(row);
    if (std::abs(k2) > kmax || std::abs(k2) == n / 2) continue;
    for (std::size_t col = 0; col < cols; ++col) {
      const int k1 = grid->freq_x1(col);
      if (k1 > kmax || k1 == n / 2) continue;
      const double re = normal(rng);
      const double im = normal(rng);
      spec[row * cols + col] = {re, im};
    }
  }
  RealField u(grid, grid->inverse(std::move(spec)));
  const double top = linf_norm(u);
  if (top > 0.0) u *= 1.0 / top;
  return u;
}

std::vector<CheckLine> green_operator_checks(GridPtr grid, std::mt19937_64& rng, int count,
                                             const std::vector<double>& eps_values, int kmax) {
  const double qs[3] = {1.0, 2.0, std::numeric_limits<double>::infinity()};
  const char* qnames[3] = {"1", "2", "inf"};
  std::vector<RealField> fields;
  for (int i = 0; i < count; ++i) fields.push_back(random_bandlimited(grid, rng, kmax));

  std::vector<CheckLine> out;
  for (double eps : eps_values) {
    for (int qi = 0; qi < 3; ++qi) {
      double worst_c = 0.0, worst_a = 0.0;
      for (const RealField& h : fields) {
        const RealField gh = helmholtz_inverse(h, eps);
        worst_c = std::max(worst_c, lq_norm(gh, qs[qi]) / lq_norm(h, qs[qi]));
        const double denom = eps * eps * lq_norm(laplacian(h), qs[qi]);
        worst_a = std::max(worst_a, lq_norm(gh - h, qs[qi]) / denom);
      }
      std::ostringstream tag;
      tag << "eps=" << eps << ",q=" << qnames[qi];
      out.push_back({"green_contraction[" + tag.str() + "]", worst_c, 1.0 + 1e-12,
                     worst_c <= 1.0 + 1e-12});
      out.push_back({"green_approximation[" + tag.str() + "]", worst_a, 1.0 + 1e-10,
                     worst_a <= 1.0 + 1e-10});
    }
  }
  return out;
}

double directional_derivative_error(const Functional& I, const RealField& u,
                                    const RealField& phi, double step) {
  auto central = [&](double t) {
    return (I.value(u + t * phi) - I.value(u - t * phi)) / (2.0 * t);
  };
  const double fd = (4.0 * central(0.5 * step) - central(step)) / 3.0;
  const double exact = inner(I.gradient(u), phi);
  return std::abs(fd - exact) / std::max(std::abs(exact), 1e-300);
}

double hessian_symmetry_error(const Functional& I, const RealField& u, const RealField& phi,
                              const RealField& psi) {
  const Linearization lin = I.linearize(u);
  const double a = inner(lin.apply(phi), psi);
  const double b = inner(phi, lin.apply(psi));
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace mcsv
