#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "fblpp/errors.hpp"

namespace fblpp {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;  // absolute, conservative
  long evaluations = 0;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1] (positive half).
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639207, 0.949107912342758524526, 0.864864423359769072789,
    0.741531185599394439864, 0.586087235467691130295, 0.405845151377397166907,
    0.207784955007898467601, 0.0};
inline constexpr double kGK15Weights[8] = {
    0.022935322010529224964, 0.063092092629978553291, 0.104790010322250183839,
    0.140653259715525918745, 0.169004726639267902827, 0.190350578064785409913,
    0.204432940075298892414, 0.209482141084727828013};
inline constexpr double kG7Weights[4] = {
    0.129484966168869693271, 0.279705391489276667901, 0.381830050505118944950,
    0.417959183673469387755};

struct Panel {
  double a, b;
  double value;  // K15 estimate
  double error;  // |K15 - G7|, conservative
};

template <class F>
Panel gk15(F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f0 = f(mid);
  double k15 = kGK15Weights[7] * f0;
  double g7 = kG7Weights[3] * f0;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kGK15Nodes[i];
    const double fs = f(mid + dx) + f(mid - dx);
    k15 += kGK15Weights[i] * fs;
    if (i % 2 == 1) g7 += kG7Weights[i / 2] * fs;
  }
  k15 *= half;
  g7 *= half;
  return Panel{a, b, k15, std::fabs(k15 - g7)};
}

struct PanelWorse {
  bool operator()(const Panel& x, const Panel& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.a < y.a;  // deterministic tie break
  }
};

}  // namespace detail

// Adaptive Gauss-Kronrod integration of f over [a, b].  Splits the panel with
// the largest error estimate until sum of panel errors fits the tolerance
// max(abs_tol, rel_tol * |value|).  Throws ConvergenceError (with the best
// estimate attached) if the panel budget runs out first.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b,
                                    double abs_tol = 1e-10,
                                    double rel_tol = 1e-8,
                                    int max_panels = 4096) {
  if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b))
    throw std::domain_error("integrate_adaptive: bad interval");
  long evals = 0;
  auto fe = [&](double x) {
    ++evals;
    return f(x);
  };
  if (a == b) {
    (void)fe(a);
    return QuadratureResult{0.0, 0.0, evals};
  }

  std::priority_queue<detail::Panel, std::vector<detail::Panel>, detail::PanelWorse> heap;
  heap.push(detail::gk15(fe, a, b));
  double total_value = heap.top().value;
  double total_error = heap.top().error;
  int n_panels = 1;

  auto finish = [&](bool converged) {
    // Re-sum panels left to right for a deterministic, well-ordered result.
    std::vector<detail::Panel> panels;
    panels.reserve(heap.size());
    while (!heap.empty()) {
      panels.push_back(heap.top());
      heap.pop();
    }
    std::sort(panels.begin(), panels.end(),
              [](const detail::Panel& x, const detail::Panel& y) { return x.a < y.a; });
    double value = 0.0, error = 0.0;
    for (const auto& p : panels) {
      value += p.value;
      error += p.error;
    }
    if (!converged)
      throw ConvergenceError("integrate_adaptive: panel budget exhausted", value, error, evals);
    return QuadratureResult{value, error, evals};
  };

  while (total_error > std::max(abs_tol, rel_tol * std::fabs(total_value))) {
    const detail::Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (n_panels + 1 > max_panels || mid <= worst.a || mid >= worst.b)
      return finish(false);
    heap.pop();
    const detail::Panel left = detail::gk15(fe, worst.a, mid);
    const detail::Panel right = detail::gk15(fe, mid, worst.b);
    heap.push(left);
    heap.push(right);
    ++n_panels;
    total_value += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
  }
  return finish(true);
}

// Integral of f over [a, inf) via the substitution z = a + t/(1-t), t in [0,1).
template <class F>
QuadratureResult integrate_semi_infinite(F&& f, double a,
                                         double abs_tol = 1e-10,
                                         double rel_tol = 1e-8,
                                         int max_panels = 4096) {
  auto g = [&f, a](double t) {
    const double w = 1.0 - t;
    return f(a + t / w) / (w * w);
  };
  return integrate_adaptive(g, 0.0, 1.0, abs_tol, rel_tol, max_panels);
}

}  // namespace fblpp
