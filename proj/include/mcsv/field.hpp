#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "mcsv/grid.hpp"

namespace mcsv {

/// Real scalar field sampled on a Grid. Copies are deep; the grid is shared.
class RealField {
 public:
  RealField() = default;
  explicit RealField(GridPtr grid, double value = 0.0);
  RealField(GridPtr grid, std::vector<double> values);

  /// Samples fn at every node.
  static RealField sample(GridPtr grid, const std::function<double(Point)>& fn);

  const GridPtr& grid() const noexcept { return grid_; }
  const Grid& grid_ref() const noexcept { return *grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  bool all_finite() const noexcept;
  double min() const;
  double max() const;

  RealField& operator+=(const RealField& o);
  RealField& operator-=(const RealField& o);
  RealField& operator*=(const RealField& o);
  RealField& operator+=(double c);
  RealField& operator-=(double c);
  RealField& operator*=(double c);

  /// this += a * x
  RealField& axpy(double a, const RealField& x);

  template <class Fn>
  RealField map(Fn&& fn) const {
    RealField out(grid_, std::vector<double>(values_.size()));
    for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] = fn(values_[i]);
    return out;
  }

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

RealField operator+(RealField a, const RealField& b);
RealField operator-(RealField a, const RealField& b);
RealField operator*(RealField a, const RealField& b);
RealField operator+(RealField a, double c);
RealField operator-(RealField a, double c);
RealField operator*(RealField a, double c);
RealField operator*(double c, RealField a);
RealField operator+(double c, RealField a);
RealField operator-(double c, RealField a);
RealField operator-(RealField a);

/// Pointwise min(a, b).
RealField pointwise_min(const RealField& a, const RealField& b);

/// Throws GridMismatch unless both fields live on the same grid object (or
/// grids of equal resolution and offset).
void require_same_grid(const RealField& a, const RealField& b);
void require_finite(const RealField& u, const char* what);

}  // namespace mcsv
