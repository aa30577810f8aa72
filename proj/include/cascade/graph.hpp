#pragma once

#include <vector>

#include "cascade/matrix.hpp"

namespace cascade {

/// Undirected, simple, connected communication graph with nonnegative weights.
///
/// Nodes are vehicles. Public node indices are 1-based (vehicle 1 is the
/// rearmost, vehicle n the leader); the weight matrix itself is 0-based.
class WeightedGraph {
 public:
  /// Validates symmetry, zero diagonal, nonnegativity and connectivity.
  explicit WeightedGraph(Matrix weights);

  [[nodiscard]] int size() const noexcept { return static_cast<int>(weights_.rows()); }
  [[nodiscard]] const Matrix& weights() const noexcept { return weights_; }
  /// Weight between 1-based nodes i and j.
  [[nodiscard]] double weight(int i, int j) const { return weights_(i - 1, j - 1); }
  [[nodiscard]] double degree(int i) const;

 private:
  Matrix weights_;
};

/// Eigen-decomposition L = Q diag(eigenvalues) Q^T with ascending eigenvalues.
///
/// Column k of Q is the eigenvector of eigenvalues[k]. Each column is sign
/// normalized so its largest-magnitude entry is positive; for a connected
/// Laplacian this makes column 0 the all-positive vector 1/sqrt(n).
/// Within a repeated eigenvalue any orthonormal basis may come back.
struct LaplacianSpectrum {
  std::vector<double> eigenvalues;
  Matrix eigenvectors;

  [[nodiscard]] int size() const noexcept { return static_cast<int>(eigenvalues.size()); }
};

[[nodiscard]] WeightedGraph build_complete(int n);
[[nodiscard]] WeightedGraph build_path(int n);
/// Circulant ring where each node links to the p nearest nodes on either side.
[[nodiscard]] WeightedGraph build_pcycle(int n, int p);

/// Edge list entry with 1-based node indices.
struct WeightedEdge {
  int i = 0;
  int j = 0;
  double weight = 1.0;
};
[[nodiscard]] WeightedGraph build_custom(int n, const std::vector<WeightedEdge>& edges);

[[nodiscard]] Matrix laplacian(const WeightedGraph& g);

/// Throws InvalidArgument if L is not symmetric within 1e-12 and
/// NumericalError if the eigensolver fails to converge.
[[nodiscard]] LaplacianSpectrum spectrum(const Matrix& laplacian);

/// Connects both vehicles of pair j (vehicles j and j+1) to `target` with unit
/// weight. Existing links to target are overwritten with weight 1.
[[nodiscard]] WeightedGraph add_pair_edges(const WeightedGraph& g, int j, int target);

[[nodiscard]] bool is_connected(const Matrix& weights);

}  // namespace cascade
