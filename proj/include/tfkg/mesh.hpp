#pragma once

#include <functional>
#include <vector>

namespace tfkg {

/// Uniform grid on [a,b] with M intervals; nodes x_i = a + i*h, 0 <= i <= M.
class SpaceGrid {
 public:
  SpaceGrid(double left, double right, int intervals);

  double left() const { return left_; }
  double right() const { return right_; }
  int intervals() const { return m_; }
  double spacing() const { return h_; }
  double node(int i) const { return left_ + i * h_; }
  double length() const { return right_ - left_; }

  friend bool operator==(const SpaceGrid& x, const SpaceGrid& y) {
    return x.left_ == y.left_ && x.right_ == y.right_ && x.m_ == y.m_;
  }

 private:
  double left_, right_;
  int m_;
  double h_;
};

/// Nodal values over a SpaceGrid, indexed 0..M. Plain value type; members of
/// the homogeneous Dirichlet space carry zero boundary entries, which the
/// solvers enforce when they construct solution levels.
class GridFunction {
 public:
  explicit GridFunction(const SpaceGrid& grid);

  /// Sample a scalar function at every node (boundary included).
  static GridFunction sample(const SpaceGrid& grid,
                             const std::function<double(double)>& fn);

  const SpaceGrid& grid() const { return grid_; }
  int size() const { return static_cast<int>(values_.size()); }

  double operator[](int i) const { return values_[i]; }
  double& operator[](int i) { return values_[i]; }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(double s);

  /// this += s * other
  void axpy(double s, const GridFunction& other);

 private:
  SpaceGrid grid_;
  std::vector<double> values_;
};

GridFunction operator+(GridFunction u, const GridFunction& v);
GridFunction operator-(GridFunction u, const GridFunction& v);
GridFunction operator*(double s, GridFunction u);

/// Discrete inner product h * sum_{i=1}^{M-1} u_i v_i. Throws on grid mismatch.
double inner(const GridFunction& u, const GridFunction& v);

/// Discrete L2 norm sqrt(<u,u>).
double norm_l2(const GridFunction& u);

/// H1 seminorm sqrt(h * sum_{i=1}^{M} |(u_i - u_{i-1})/h|^2); the sum runs over
/// every half-node, including the two adjacent to the boundary.
double seminorm_h1(const GridFunction& u);

/// Max norm over interior nodes.
double norm_inf(const GridFunction& u);

/// Second difference (u_{i+1} - 2u_i + u_{i-1})/h^2 on interior nodes;
/// boundary entries of the result are zero.
GridFunction delta_x2(const GridFunction& u);

/// Compact average (u_{i-1} + 10 u_i + u_{i+1})/12 on interior nodes;
/// boundary entries are copied unchanged.
GridFunction apply_compact(const GridFunction& u);

/// Compact-weighted norm sqrt(<Au, u>).
double norm_a(const GridFunction& u);

}  // namespace tfkg
