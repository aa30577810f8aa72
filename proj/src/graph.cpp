#include "cascade/graph.hpp"

#include <cmath>
#include <queue>
#include <string>

#include "cascade/error.hpp"
#include "cascade/linalg.hpp"

namespace cascade {

namespace {

void require_size(int n, int minimum, const char* what) {
  if (n < minimum)
    throw InvalidArgument(std::string(what) + ": need n >= " + std::to_string(minimum) +
                          ", got " + std::to_string(n));
}

void require_node(int node, int n, const char* what) {
  if (node < 1 || node > n)
    throw InvalidArgument(std::string(what) + ": node " + std::to_string(node) +
                          " outside 1.." + std::to_string(n));
}

}  // namespace

bool is_connected(const Matrix& weights) {
  const std::size_t n = weights.rows();
  if (n == 0) return false;
  std::vector<bool> seen(n, false);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop();
    for (std::size_t w = 0; w < n; ++w)
      if (!seen[w] && weights(u, w) > 0.0) {
        seen[w] = true;
        ++reached;
        frontier.push(w);
      }
  }
  return reached == n;
}

WeightedGraph::WeightedGraph(Matrix weights) : weights_(std::move(weights)) {
  const std::size_t n = weights_.rows();
  if (n != weights_.cols()) throw InvalidArgument("graph: weight matrix must be square");
  require_size(static_cast<int>(n), 2, "graph");
  for (std::size_t i = 0; i < n; ++i) {
    if (weights_(i, i) != 0.0)
      throw InvalidArgument("graph: self-loop at node " + std::to_string(i + 1));
    for (std::size_t j = 0; j < n; ++j) {
      const double w = weights_(i, j);
      if (!std::isfinite(w) || w < 0.0)
        throw InvalidArgument("graph: weight (" + std::to_string(i + 1) + "," +
                              std::to_string(j + 1) + ") must be finite and nonnegative");
      if (w != weights_(j, i))
        throw InvalidArgument("graph: weights must be symmetric at (" + std::to_string(i + 1) +
                              "," + std::to_string(j + 1) + ")");
    }
  }
  if (!is_connected(weights_)) throw InvalidArgument("graph: not connected");
}

double WeightedGraph::degree(int i) const {
  double sum = 0.0;
  for (double w : weights_.row(static_cast<std::size_t>(i - 1))) sum += w;
  return sum;
}

WeightedGraph build_complete(int n) {
  require_size(n, 2, "complete graph");
  Matrix w(n, n, 1.0);
  for (int i = 0; i < n; ++i) w(i, i) = 0.0;
  return WeightedGraph(std::move(w));
}

WeightedGraph build_path(int n) {
  require_size(n, 2, "path graph");
  Matrix w(n, n);
  for (int i = 0; i + 1 < n; ++i) w(i, i + 1) = w(i + 1, i) = 1.0;
  return WeightedGraph(std::move(w));
}

WeightedGraph build_pcycle(int n, int p) {
  require_size(n, 3, "p-cycle graph");
  if (p < 1 || p > (n - 1) / 2)
    throw InvalidArgument("p-cycle graph: p must lie in 1.." + std::to_string((n - 1) / 2) +
                          ", got " + std::to_string(p));
  Matrix w(n, n);
  for (int i = 0; i < n; ++i)
    for (int offset = 1; offset <= p; ++offset) {
      const int j = (i + offset) % n;
      w(i, j) = w(j, i) = 1.0;
    }
  return WeightedGraph(std::move(w));
}

WeightedGraph build_custom(int n, const std::vector<WeightedEdge>& edges) {
  require_size(n, 2, "custom graph");
  Matrix w(n, n);
  for (const auto& e : edges) {
    require_node(e.i, n, "custom graph");
    require_node(e.j, n, "custom graph");
    if (e.i == e.j) throw InvalidArgument("custom graph: self-loop at node " + std::to_string(e.i));
    w(e.i - 1, e.j - 1) = w(e.j - 1, e.i - 1) = e.weight;
  }
  return WeightedGraph(std::move(w));
}

Matrix laplacian(const WeightedGraph& g) {
  const auto n = static_cast<std::size_t>(g.size());
  Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      l(i, j) = -g.weights()(i, j);
      row_sum += g.weights()(i, j);
    }
    l(i, i) = row_sum;
  }
  return l;
}

LaplacianSpectrum spectrum(const Matrix& lap) {
  if (!is_symmetric(lap, 1e-12)) throw InvalidArgument("spectrum: matrix is not symmetric");
  SymmetricEigen eig = jacobi_eigen(lap, 1e-12);

  const std::size_t n = lap.rows();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t largest = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(eig.vectors(i, k)) > std::abs(eig.vectors(largest, k))) largest = i;
    if (eig.vectors(largest, k) < 0.0)
      for (std::size_t i = 0; i < n; ++i) eig.vectors(i, k) = -eig.vectors(i, k);
  }
  // The null vector is constant up to rounding; make every entry nonnegative.
  if (n > 0) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += eig.vectors(i, 0);
    if (sum < 0.0)
      for (std::size_t i = 0; i < n; ++i) eig.vectors(i, 0) = -eig.vectors(i, 0);
  }
  return {std::move(eig.values), std::move(eig.vectors)};
}

WeightedGraph add_pair_edges(const WeightedGraph& g, int j, int target) {
  const int n = g.size();
  if (j < 1 || j > n - 1)
    throw InvalidArgument("add_pair_edges: pair " + std::to_string(j) + " outside 1.." +
                          std::to_string(n - 1));
  require_node(target, n, "add_pair_edges");
  if (target == j || target == j + 1)
    throw InvalidArgument("add_pair_edges: target " + std::to_string(target) +
                          " is a member of pair " + std::to_string(j));
  Matrix w = g.weights();
  for (int member : {j, j + 1}) w(member - 1, target - 1) = w(target - 1, member - 1) = 1.0;
  return WeightedGraph(std::move(w));
}

}  // namespace cascade
