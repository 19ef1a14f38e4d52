#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "canonpair/checks.hpp"

namespace canonpair {
namespace detail {

inline SmoothFunction scale_smooth(const SmoothFunction& f, Complex c) {
  SmoothFunction out;
  out.support = f.support;
  out.eval = [ev = f.eval, c](double t) { return c * ev(t); };
  if (f.has_d1()) {
    out.d1 = [d = f.d1, c](double t) { return c * d(t); };
  }
  if (f.has_d2()) {
    out.d2 = [d = f.d2, c](double t) { return c * d(t); };
  }
  return out;
}

inline SmoothFunction add_smooth(const SmoothFunction& f,
                                 const SmoothFunction& g) {
  SmoothFunction out;
  out.eval = [a = f.eval, b = g.eval](double t) { return a(t) + b(t); };
  if (f.has_d1() && g.has_d1()) {
    out.d1 = [a = f.d1, b = g.d1](double t) { return a(t) + b(t); };
  }
  if (f.has_d2() && g.has_d2()) {
    out.d2 = [a = f.d2, b = g.d2](double t) { return a(t) + b(t); };
  }
  return out;
}

// L2 norm of a pointwise-evaluable expression over the grid nodes.
inline double grid_l2(const std::function<Complex(double)>& ev,
                      const QuadratureGrid& grid) {
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    acc += grid.weights[i] * std::norm(ev(grid.nodes[i]));
  }
  return std::sqrt(acc);
}

// Verdict severity lattice: a suite of sub-audits reports the worst outcome.
inline int verdict_severity(const std::string& v) {
  if (v == "pass") {
    return 0;
  }
  if (v == "inconclusive") {
    return 1;
  }
  if (v == "fail") {
    return 2;
  }
  return 3;  // domain-violation
}

inline std::string worse_verdict(const std::string& a, const std::string& b) {
  return verdict_severity(a) >= verdict_severity(b) ? a : b;
}

}  // namespace detail
}  // namespace canonpair
