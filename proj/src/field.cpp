#include "mcsv/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mcsv/error.hpp"

namespace mcsv {

RealField::RealField(GridPtr grid, double value)
    : grid_(std::move(grid)), values_(grid_->size(), value) {}

RealField::RealField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->size()) {
    throw Error(ErrorKind::GridMismatch, "value count does not match grid size");
  }
}

RealField RealField::sample(GridPtr grid, const std::function<double(Point)>& fn) {
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid->node(i));
  return RealField(std::move(grid), std::move(v));
}

bool RealField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

double RealField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double RealField::max() const { return *std::max_element(values_.begin(), values_.end()); }

RealField& RealField::operator+=(const RealField& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}
RealField& RealField::operator-=(const RealField& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}
RealField& RealField::operator*=(const RealField& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= o.values_[i];
  return *this;
}
RealField& RealField::operator+=(double c) {
  for (double& v : values_) v += c;
  return *this;
}
RealField& RealField::operator-=(double c) {
  for (double& v : values_) v -= c;
  return *this;
}
RealField& RealField::operator*=(double c) {
  for (double& v : values_) v *= c;
  return *this;
}
RealField& RealField::axpy(double a, const RealField& x) {
  require_same_grid(*this, x);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += a * x.values_[i];
  return *this;
}

RealField operator+(RealField a, const RealField& b) { return a += b; }
RealField operator-(RealField a, const RealField& b) { return a -= b; }
RealField operator*(RealField a, const RealField& b) { return a *= b; }
RealField operator+(RealField a, double c) { return a += c; }
RealField operator-(RealField a, double c) { return a -= c; }
RealField operator*(RealField a, double c) { return a *= c; }
RealField operator*(double c, RealField a) { return a *= c; }
RealField operator+(double c, RealField a) { return a += c; }
RealField operator-(double c, RealField a) {
  a *= -1.0;
  return a += c;
}
RealField operator-(RealField a) { return a *= -1.0; }

RealField pointwise_min(const RealField& a, const RealField& b) {
  require_same_grid(a, b);
  RealField out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::min(a[i], b[i]);
  return out;
}

void require_same_grid(const RealField& a, const RealField& b) {
  if (a.grid() == b.grid()) return;
  if (!a.grid() || !b.grid() || a.grid()->n() != b.grid()->n() ||
      a.grid()->offset() != b.grid()->offset()) {
    throw Error(ErrorKind::GridMismatch, "fields live on different grids");
  }
}

void require_finite(const RealField& u, const char* what) {
  if (!u.all_finite()) {
    throw Error(ErrorKind::NonFinite, std::string("non-finite values in ") + what);
  }
}

}  // namespace mcsv
