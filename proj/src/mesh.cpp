#include "tfkg/mesh.hpp"

#include <cmath>
#include <stdexcept>

namespace tfkg {

SpaceGrid::SpaceGrid(double left, double right, int intervals)
    : left_(left), right_(right), m_(intervals) {
  if (!(right > left)) {
    throw std::invalid_argument("SpaceGrid: right endpoint must exceed left");
  }
  if (intervals < 2) {
    throw std::invalid_argument("SpaceGrid: need at least 2 intervals");
  }
  h_ = (right - left) / m_;
}

GridFunction::GridFunction(const SpaceGrid& grid)
    : grid_(grid), values_(grid.intervals() + 1, 0.0) {}

GridFunction GridFunction::sample(const SpaceGrid& grid,
                                  const std::function<double(double)>& fn) {
  GridFunction u(grid);
  for (int i = 0; i <= grid.intervals(); ++i) u[i] = fn(grid.node(i));
  return u;
}

namespace {
void require_same_grid(const GridFunction& u, const GridFunction& v) {
  if (!(u.grid() == v.grid())) {
    throw std::invalid_argument("grid mismatch between grid functions");
  }
}
}  // namespace

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  require_same_grid(*this, other);
  for (int i = 0; i < size(); ++i) values_[i] += other[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  require_same_grid(*this, other);
  for (int i = 0; i < size(); ++i) values_[i] -= other[i];
  return *this;
}

GridFunction& GridFunction::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

void GridFunction::axpy(double s, const GridFunction& other) {
  require_same_grid(*this, other);
  for (int i = 0; i < size(); ++i) values_[i] += s * other[i];
}

GridFunction operator+(GridFunction u, const GridFunction& v) { return u += v; }
GridFunction operator-(GridFunction u, const GridFunction& v) { return u -= v; }
GridFunction operator*(double s, GridFunction u) { return u *= s; }

double inner(const GridFunction& u, const GridFunction& v) {
  require_same_grid(u, v);
  const int m = u.grid().intervals();
  double s = 0.0;
  for (int i = 1; i < m; ++i) s += u[i] * v[i];
  return u.grid().spacing() * s;
}

double norm_l2(const GridFunction& u) { return std::sqrt(inner(u, u)); }

double seminorm_h1(const GridFunction& u) {
  const int m = u.grid().intervals();
  const double h = u.grid().spacing();
  double s = 0.0;
  for (int i = 1; i <= m; ++i) {
    const double d = (u[i] - u[i - 1]) / h;
    s += d * d;
  }
  return std::sqrt(h * s);
}

double norm_inf(const GridFunction& u) {
  const int m = u.grid().intervals();
  double s = 0.0;
  for (int i = 1; i < m; ++i) s = std::max(s, std::abs(u[i]));
  return s;
}

GridFunction delta_x2(const GridFunction& u) {
  const int m = u.grid().intervals();
  const double h2 = u.grid().spacing() * u.grid().spacing();
  GridFunction out(u.grid());
  for (int i = 1; i < m; ++i) {
    // Difference-of-differences grouping keeps the cancellation exact.
    out[i] = ((u[i + 1] - u[i]) - (u[i] - u[i - 1])) / h2;
  }
  return out;
}

GridFunction apply_compact(const GridFunction& u) {
  const int m = u.grid().intervals();
  GridFunction out(u.grid());
  out[0] = u[0];
  out[m] = u[m];
  for (int i = 1; i < m; ++i) {
    out[i] = (u[i - 1] + 10.0 * u[i] + u[i + 1]) / 12.0;
  }
  return out;
}

double norm_a(const GridFunction& u) { return std::sqrt(inner(apply_compact(u), u)); }

}  // namespace tfkg
