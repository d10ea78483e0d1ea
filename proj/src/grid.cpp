#include "mcsv/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "mcsv/error.hpp"

namespace mcsv {

namespace {

// The FFTW planner is not thread-safe; execution with new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidResolution: return "invalid-resolution";
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::NonFinite: return "non-finite";
    case ErrorKind::GridMismatch: return "grid-mismatch";
    case ErrorKind::Placement: return "placement";
    case ErrorKind::SingularEvaluation: return "singular-evaluation";
    case ErrorKind::Scope: return "scope";
    case ErrorKind::DegenerateConfig: return "degenerate-config";
    case ErrorKind::BarrierConstruction: return "barrier-construction";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

Grid::Grid(int n, double offset) : n_(n), h_(1.0 / n), offset_(offset) {
  const std::size_t rows = static_cast<std::size_t>(n);
  const std::size_t cols = static_cast<std::size_t>(n / 2 + 1);
  lap_.resize(rows * cols);
  bilap_.resize(rows * cols);
  d1_.resize(rows * cols);
  d2_.resize(rows * cols);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t r = 0; r < rows; ++r) {
    const int k2 = freq_x2(r);
    for (std::size_t c = 0; c < cols; ++c) {
      const int k1 = freq_x1(c);
      const std::size_t idx = r * cols + c;
      const double k_sq = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
      lap_[idx] = -two_pi * two_pi * k_sq;
      bilap_[idx] = lap_[idx] * lap_[idx];
      d1_[idx] = (2 * k1 == n) ? 0.0 : two_pi * k1;
      d2_[idx] = (2 * r == rows) ? 0.0 : two_pi * k2;
    }
  }

  std::vector<double> real(size());
  Spectrum spec(spectrum_size());
  auto* cplx = reinterpret_cast<fftw_complex*>(spec.data());
  std::lock_guard lock(planner_mutex());
  plan_forward_ = fftw_plan_dft_r2c_2d(n, n, real.data(), cplx,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_inverse_ = fftw_plan_dft_c2r_2d(n, n, cplx, real.data(),
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
}

Grid::~Grid() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_inverse_));
}

Spectrum Grid::forward(std::span<const double> values) const {
  std::vector<double> in(values.begin(), values.end());
  Spectrum out(spectrum_size());
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_forward_), in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<double> Grid::inverse(Spectrum spectrum) const {
  std::vector<double> out(size());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_inverse_),
                       reinterpret_cast<fftw_complex*>(spectrum.data()), out.data());
  const double scale = 1.0 / static_cast<double>(size());
  for (double& v : out) v *= scale;
  return out;
}

GridPtr make_grid(int n, double offset) {
  if (n < 8 || n % 2 != 0) {
    throw Error(ErrorKind::InvalidResolution,
                "grid resolution must be even and >= 8, got " + std::to_string(n));
  }
  if (!(offset >= 0.0 && offset < 1.0)) {
    throw Error(ErrorKind::Parameter, "grid offset must lie in [0,1)");
  }
  return GridPtr(new Grid(n, offset));
}

Point periodic_delta(Point a, Point b) noexcept {
  auto wrap = [](double d) { return d - std::floor(d + 0.5); };
  return {wrap(a.x1 - b.x1), wrap(a.x2 - b.x2)};
}

double periodic_distance(Point a, Point b) noexcept {
  const Point d = periodic_delta(a, b);
  return std::hypot(d.x1, d.x2);
}

}  // namespace mcsv
