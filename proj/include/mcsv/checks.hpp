#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mcsv/energy.hpp"

namespace mcsv {

/// Random real field whose Fourier modes satisfy |k1|, |k2| <= kmax, scaled
/// to unit sup norm. Deterministic for a given engine state.
RealField random_bandlimited(GridPtr grid, std::mt19937_64& rng, int kmax);

struct CheckLine {
  std::string name;
  double value = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// Worst ratios over `count` random fields (band limit kmax) for every eps
/// and q in {1, 2, inf}:
///   contraction   ||G_eps h||_q / ||h||_q                 <= 1 + 1e-12
///   approximation ||G_eps h - h||_q / (eps^2 ||Lap h||_q) <= 1 + 1e-10
std::vector<CheckLine> green_operator_checks(GridPtr grid, std::mt19937_64& rng, int count,
                                             const std::vector<double>& eps_values, int kmax);

/// Relative error between <grad I(u), phi> and a Richardson-extrapolated
/// central difference of t -> I(u + t phi).
double directional_derivative_error(const Functional& I, const RealField& u,
                                    const RealField& phi, double step = 1e-3);

/// |<J phi, psi> - <phi, J psi>| / max(|<J phi, psi>|, |<phi, J psi>|).
double hessian_symmetry_error(const Functional& I, const RealField& u, const RealField& phi,
                              const RealField& psi);

}  // namespace mcsv
