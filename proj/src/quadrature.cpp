#include "cascade/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "cascade/error.hpp"

namespace cascade {

namespace {

// Kronrod abscissae on [0, 1) (odd indices are the 7-point Gauss nodes) and weights.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod(const std::function<double(double)>& fn, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = fn(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kNodes[static_cast<std::size_t>(i)];
    const double pair = fn(center - dx) + fn(center + dx);
    kronrod += kKronrodWeights[static_cast<std::size_t>(i)] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[static_cast<std::size_t>(i / 2)] * pair;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& fn,
                                    std::span<const double> breakpoints, double abs_tol,
                                    double rel_tol, int max_panels) {
  if (breakpoints.size() < 2) throw InvalidArgument("integrate_adaptive: need two breakpoints");

  // Max-heap on the error estimate.
  std::vector<Panel> heap;
  heap.reserve(breakpoints.size() * 4);
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i] < breakpoints[i + 1]))
      throw InvalidArgument("integrate_adaptive: breakpoints must increase");
    heap.push_back(gauss_kronrod(fn, breakpoints[i], breakpoints[i + 1]));
  }
  std::make_heap(heap.begin(), heap.end());

  auto exact_sums = [&heap](double& value, double& error) {
    value = 0.0;
    error = 0.0;
    for (const auto& p : heap) {
      value += p.value;
      error += p.error;
    }
  };
  double value = 0.0;
  double error = 0.0;
  exact_sums(value, error);

  // Running sums drift when large panel errors are replaced by small ones, so
  // they are recomputed before accepting convergence and every 256 splits.
  for (long iter = 1;; ++iter) {
    if (error <= std::max(abs_tol, rel_tol * std::abs(value))) {
      exact_sums(value, error);
      if (error <= std::max(abs_tol, rel_tol * std::abs(value))) break;
    }
    if (static_cast<int>(heap.size()) >= max_panels)
      throw NumericalError("integrate_adaptive: panel budget exhausted (estimate " +
                           std::to_string(value) + ", error " + std::to_string(error) + ")");
    std::pop_heap(heap.begin(), heap.end());
    const Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b))
      throw NumericalError("integrate_adaptive: panel cannot be split further");
    for (const Panel& half : {gauss_kronrod(fn, worst.a, mid), gauss_kronrod(fn, mid, worst.b)}) {
      value += half.value;
      error += half.error;
      heap.push_back(half);
      std::push_heap(heap.begin(), heap.end());
    }
    value -= worst.value;
    error -= worst.error;
    if (iter % 256 == 0) exact_sums(value, error);
  }

  // Sum in position order so the result does not depend on heap layout.
  std::sort(heap.begin(), heap.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  QuadratureResult out;
  out.panels = static_cast<int>(heap.size());
  for (const auto& p : heap) {
    out.value += p.value;
    out.error += p.error;
  }
  if (!std::isfinite(out.value)) throw NumericalError("integrate_adaptive: non-finite result");
  return out;
}

}  // namespace cascade
