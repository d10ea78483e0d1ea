#pragma once

#include <cmath>
#include <vector>

#include "mcsv/spectral.hpp"

namespace mcsv {

struct GmresResult {
  RealField x;
  double relative_residual = 1.0;
  int iterations = 0;
  bool converged = false;
};

/// Restarted GMRES for A x = b with right preconditioning (A M^{-1} y = b,
/// x = M^{-1} y), in the quadrature inner product. Starts from x = 0.
template <class Op, class Prec>
GmresResult gmres(const Op& apply_a, const Prec& apply_minv, const RealField& b, double rtol,
                  int restart, int max_cycles) {
  GmresResult res;
  res.x = RealField(b.grid(), 0.0);
  const double bnorm = std::sqrt(inner(b, b));
  if (bnorm == 0.0) {
    res.relative_residual = 0.0;
    res.converged = true;
    return res;
  }
  RealField r = b;
  for (int cycle = 0; cycle < max_cycles; ++cycle) {
    const double beta = std::sqrt(inner(r, r));
    res.relative_residual = beta / bnorm;
    if (res.relative_residual <= rtol) {
      res.converged = true;
      return res;
    }
    std::vector<RealField> V;
    V.push_back((1.0 / beta) * r);
    std::vector<std::vector<double>> H(restart + 1, std::vector<double>(restart, 0.0));
    std::vector<double> cs(restart), sn(restart), g(restart + 1, 0.0);
    g[0] = beta;
    int k = 0;
    for (; k < restart; ++k) {
      RealField w = apply_a(apply_minv(V[k]));
      for (int j = 0; j <= k; ++j) {
        H[j][k] = inner(w, V[j]);
        w.axpy(-H[j][k], V[j]);
      }
      // one reorthogonalisation pass
      for (int j = 0; j <= k; ++j) {
        const double c = inner(w, V[j]);
        H[j][k] += c;
        w.axpy(-c, V[j]);
      }
      H[k + 1][k] = std::sqrt(inner(w, w));
      for (int j = 0; j < k; ++j) {
        const double t = cs[j] * H[j][k] + sn[j] * H[j + 1][k];
        H[j + 1][k] = -sn[j] * H[j][k] + cs[j] * H[j + 1][k];
        H[j][k] = t;
      }
      const double denom = std::hypot(H[k][k], H[k + 1][k]);
      cs[k] = denom == 0.0 ? 1.0 : H[k][k] / denom;
      sn[k] = denom == 0.0 ? 0.0 : H[k + 1][k] / denom;
      const double hk1 = H[k + 1][k];
      H[k][k] = cs[k] * H[k][k] + sn[k] * hk1;
      H[k + 1][k] = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];
      ++res.iterations;
      const bool done = std::abs(g[k + 1]) / bnorm <= rtol;
      if (done || hk1 == 0.0 || k + 1 == restart) {
        ++k;
        break;
      }
      V.push_back((1.0 / hk1) * w);
    }
    std::vector<double> y(k, 0.0);
    for (int i = k - 1; i >= 0; --i) {
      double acc = g[i];
      for (int j = i + 1; j < k; ++j) acc -= H[i][j] * y[j];
      y[i] = acc / H[i][i];
    }
    RealField z(b.grid(), 0.0);
    for (int j = 0; j < k; ++j) z.axpy(y[j], V[j]);
    res.x += apply_minv(z);
    r = b - apply_a(res.x);
  }
  res.relative_residual = std::sqrt(inner(r, r)) / bnorm;
  res.converged = res.relative_residual <= rtol;
  return res;
}

}  // namespace mcsv
