#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tba/geodesic.hpp"

namespace tba {

/// Points in R^m, row-major n x m. The embedded space is obstacle free, so
/// Euclidean distance between rows stands in for geodesic distance between
/// the corresponding map vertices.
struct Embedding {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<double> coords;
  double stress = 0.0;  // normalized stress of `coords`
  std::size_t iterations = 0;
  std::vector<double> stress_history;  // normalized stress before the first and after every iteration

  const double* row(std::size_t i) const { return coords.data() + i * m; }
  double* row(std::size_t i) { return coords.data() + i * m; }
  double distance(std::size_t i, std::size_t j) const;
};

enum class MdsInit { classical, random };

struct MdsOptions {
  std::size_t m = 5;
  std::size_t max_iterations = 500;
  double rel_tol = 1e-6;
  MdsInit init = MdsInit::classical;
  std::uint64_t seed = 0;  // random init only

  void validate() const;
};

/// Sum_{i<j} (d_ij - |x_i - x_j|)^2 / Sum_{i<j} d_ij^2. Throws NumericalError
/// for an all-zero D and ValidationError on a size mismatch.
double normalized_stress(const DistanceMatrix& d, const Embedding& x);

/// Torgerson scaling: top-m eigenpairs of the double-centred -D^2/2, columns
/// scaled by sqrt(eigenvalue). Negative eigenvalues contribute zero columns.
/// Each column's sign is fixed so its largest-magnitude entry is positive.
Embedding classical_init(const DistanceMatrix& d, std::size_t m);

/// SMACOF stress majorization (unit weights) from the configured start.
/// Stops when the relative stress decrease drops below rel_tol or after
/// max_iterations. Output is centred.
Embedding embed(const DistanceMatrix& d, const MdsOptions& opts);

/// Max over pairs with d_ij > 0 of | |x_i - x_j| - d_ij | / d_ij.
double max_relative_distortion(const DistanceMatrix& d, const Embedding& x);

}  // namespace tba
