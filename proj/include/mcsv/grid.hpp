#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace mcsv {

struct Point {
  double x1 = 0.0;
  double x2 = 0.0;
};

using Spectrum = std::vector<std::complex<double>>;

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

/// Uniform N x N periodic discretization of the unit torus [0,1)^2.
///
/// Nodes sit at ((i + offset) h, (j + offset) h) with h = 1/N; the default
/// offset of one half places nodes at cell centres. Storage is row-major with
/// x2 as the outer index and x1 as the inner index. Spectra use the FFTW
/// real-to-complex layout: N rows (x2 frequency) by N/2+1 columns (x1
/// frequency).
///
/// A Grid is immutable after construction; its FFT plans are only executed
/// through the new-array interface, so one instance can be shared between
/// threads.
class Grid {
 public:
  ~Grid();
  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

  int n() const noexcept { return n_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_) * n_; }
  std::size_t spectrum_size() const noexcept {
    return static_cast<std::size_t>(n_) * (n_ / 2 + 1);
  }
  double spacing() const noexcept { return h_; }
  double offset() const noexcept { return offset_; }
  double weight() const noexcept { return h_ * h_; }

  std::size_t index(int i1, int i2) const noexcept {
    return static_cast<std::size_t>(i2) * n_ + i1;
  }
  Point node(int i1, int i2) const noexcept {
    return {(i1 + offset_) * h_, (i2 + offset_) * h_};
  }
  Point node(std::size_t flat) const noexcept {
    return node(static_cast<int>(flat % n_), static_cast<int>(flat / n_));
  }

  /// Signed integer frequencies of spectrum entry (row, col).
  int freq_x1(std::size_t col) const noexcept { return static_cast<int>(col); }
  int freq_x2(std::size_t row) const noexcept {
    const int r = static_cast<int>(row);
    return r < n_ / 2 ? r : r - n_;
  }

  /// -4 pi^2 |k|^2, Nyquist modes included.
  std::span<const double> laplacian_symbol() const noexcept { return lap_; }
  /// Square of the Laplacian symbol.
  std::span<const double> bilaplacian_symbol() const noexcept { return bilap_; }
  /// 2 pi k_1 and 2 pi k_2 (to be multiplied by i); zero on Nyquist rows/cols.
  std::span<const double> derivative_symbol_x1() const noexcept { return d1_; }
  std::span<const double> derivative_symbol_x2() const noexcept { return d2_; }

  Spectrum forward(std::span<const double> values) const;
  /// Inverse transform including the 1/N^2 normalisation.
  std::vector<double> inverse(Spectrum spectrum) const;

 private:
  friend GridPtr make_grid(int n, double offset);
  Grid(int n, double offset);

  int n_;
  double h_;
  double offset_;
  std::vector<double> lap_;
  std::vector<double> bilap_;
  std::vector<double> d1_;
  std::vector<double> d2_;
  void* plan_forward_ = nullptr;
  void* plan_inverse_ = nullptr;
};

/// Builds a grid with N nodes per side. N must be even and at least 8.
GridPtr make_grid(int n, double offset = 0.5);

/// Periodic (minimum-image) displacement a - b, each component in [-1/2, 1/2).
Point periodic_delta(Point a, Point b) noexcept;
double periodic_distance(Point a, Point b) noexcept;

}  // namespace mcsv
