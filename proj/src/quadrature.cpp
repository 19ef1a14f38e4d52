#include "canonpair/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace canonpair {

Interval make_interval(double a, double b) {
  if (!(a < b)) {
    throw std::invalid_argument("interval requires a < b");
  }
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("interval endpoints must be finite");
  }
  return Interval{a, b};
}

void gauss_legendre_reference(int order, std::vector<double>& nodes,
                              std::vector<double>& weights) {
  if (order < 1) {
    throw std::invalid_argument("quadrature order must be >= 1");
  }
  static std::mutex cache_mutex;
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(order);
    if (it != cache.end()) {
      nodes = it->second.first;
      weights = it->second.second;
      return;
    }
  }

  const int n = order;
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  // Newton iteration from the Chebyshev-like initial guess; only the lower
  // half is computed, the rest follows by symmetry.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (4.0 * i + 3.0) / (4.0 * n + 2.0));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre recurrence for P_n(x) and P_{n-1}(x).
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        break;
      }
    }
    // One recurrence pass at the converged node for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = x;
    weights[i] = w;
    nodes[n - 1 - i] = -x;
    weights[n - 1 - i] = w;
  }
  // The loop above fills descending positives first; flip to ascending order.
  if (nodes.front() > nodes.back()) {
    std::vector<double> xs(n), ws(n);
    for (int i = 0; i < n; ++i) {
      xs[i] = nodes[n - 1 - i];
      ws[i] = weights[n - 1 - i];
    }
    nodes.swap(xs);
    weights.swap(ws);
  }

  std::lock_guard<std::mutex> lock(cache_mutex);
  cache.emplace(order, std::make_pair(nodes, weights));
}

GridPtr build_quadrature(Interval domain, int panels, int order) {
  if (panels < 1) {
    throw std::invalid_argument("quadrature needs at least one panel");
  }
  if (order < 2 || order > 64) {
    throw std::invalid_argument("quadrature order must be in [2, 64]");
  }
  (void)make_interval(domain.a, domain.b);

  std::vector<double> ref_x, ref_w;
  gauss_legendre_reference(order, ref_x, ref_w);

  auto grid = std::make_shared<QuadratureGrid>();
  grid->domain = domain;
  grid->panels = panels;
  grid->order = order;
  grid->nodes.reserve(static_cast<std::size_t>(panels) * order);
  grid->weights.reserve(static_cast<std::size_t>(panels) * order);
  const double width = domain.length() / panels;
  for (int p = 0; p < panels; ++p) {
    const double left = domain.a + p * width;
    const double mid = left + 0.5 * width;
    for (int j = 0; j < order; ++j) {
      grid->nodes.push_back(mid + 0.5 * width * ref_x[j]);
      grid->weights.push_back(0.5 * width * ref_w[j]);
    }
  }
  return grid;
}

}  // namespace canonpair
