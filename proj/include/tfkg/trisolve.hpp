#pragma once

#include <vector>

namespace tfkg {

/// Tridiagonal linear system over the interior unknowns of a grid row.
/// All four arrays share the same length; lower[0] and upper[n-1] are unused.
struct TridiagonalSystem {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;
  std::vector<double> rhs;

  std::size_t size() const { return diag.size(); }
};

/// Thomas elimination without pivoting. The assembled systems are strictly
/// diagonally dominant, so a vanishing pivot signals an assembly bug and
/// throws std::runtime_error.
std::vector<double> solve(const TridiagonalSystem& sys);

}  // namespace tfkg
