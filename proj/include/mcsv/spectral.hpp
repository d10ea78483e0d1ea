#pragma once

#include <utility>

#include "mcsv/field.hpp"

namespace mcsv {

/// Spectral operators on the periodic grid. All of them are diagonal in
/// Fourier space and exact for band-limited fields. First derivatives drop
/// the Nyquist mode; the Laplacian keeps it.

RealField laplacian(const RealField& u);
RealField bilaplacian(const RealField& u);

struct Gradient {
  RealField d1;
  RealField d2;
};

Gradient gradient(const RealField& u);

/// d1 a + d2 b, the negative adjoint of `gradient` in the quadrature inner
/// product.
RealField divergence(const RealField& a, const RealField& b);

/// (-eps^2 Laplacian + 1)^{-1} h. Throws Parameter for eps <= 0.
RealField helmholtz_inverse(const RealField& h, double eps);

/// Mean-zero w with -Laplacian w = h - mean(h).
RealField poisson_inverse_meanzero(const RealField& h);

/// (eps^2 Bilaplacian - Laplacian + tau)^{-1} h. eps may be zero here (the
/// second-order metric); tau must be positive.
RealField precond_inverse(const RealField& h, double eps, double tau);

/// (eps^2 Bilaplacian - Laplacian + tau) h.
RealField precond_apply(const RealField& h, double eps, double tau);

/// h^2 * sum of values; |M| = 1 so integrate(1) = 1.
double integrate(const RealField& u);
double mean(const RealField& u);
double inner(const RealField& a, const RealField& b);

/// L^q norm under the node quadrature; q = infinity gives the max norm.
double lq_norm(const RealField& u, double q);
double l2_norm(const RealField& u);
double linf_norm(const RealField& u);

}  // namespace mcsv
