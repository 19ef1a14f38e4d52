#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

namespace canonpair {

// Closed real interval [a, b], a < b.
struct Interval {
  double a = 0.0;
  double b = 1.0;
  double length() const { return b - a; }
  bool contains(double t) const { return t >= a && t <= b; }
};

Interval make_interval(double a, double b);

// Composite Gauss-Legendre rule: `panels` equal subintervals of `order` points
// each. Nodes are strictly interior and ascending; weights sum to the interval
// length. Values at the interval endpoints are never represented by nodes, so
// anything that needs f(a) or f(b) has to evaluate the callback directly.
struct QuadratureGrid {
  Interval domain;
  int panels = 0;
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

using GridPtr = std::shared_ptr<const QuadratureGrid>;

// panels >= 1, 2 <= order <= 64, otherwise throws std::invalid_argument.
GridPtr build_quadrature(Interval domain, int panels, int order);

// Reference Gauss-Legendre nodes/weights on [-1, 1], Newton iteration on the
// Legendre recurrence. Cached per order.
void gauss_legendre_reference(int order, std::vector<double>& nodes,
                              std::vector<double>& weights);

}  // namespace canonpair
