#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "canonpair/quadrature.hpp"

namespace canonpair {

using Complex = std::complex<double>;

// A function on an interval, carried as an evaluation callback plus optional
// analytic first/second derivative callbacks and an optional support hint
// (|f| vanishes outside it). Treated as an immutable value; copies are cheap
// because the callbacks are shared.
struct SmoothFunction {
  std::function<Complex(double)> eval;
  std::function<Complex(double)> d1;  // empty when no analytic derivative
  std::function<Complex(double)> d2;
  std::optional<Interval> support;

  Complex operator()(double t) const { return eval(t); }
  bool has_d1() const { return static_cast<bool>(d1); }
  bool has_d2() const { return static_cast<bool>(d2); }
};

SmoothFunction make_smooth(std::function<Complex(double)> eval);
SmoothFunction make_smooth(std::function<Complex(double)> eval,
                           std::function<Complex(double)> d1,
                           std::function<Complex(double)> d2);

// Function sampled on a quadrature grid. Endpoint values ride along because
// grid nodes are interior and the membership checks need boundary data.
struct GridFunction {
  GridPtr grid;
  std::vector<Complex> values;
  Complex value_a{0.0, 0.0};
  Complex value_b{0.0, 0.0};
};

GridFunction sample(const SmoothFunction& f, const GridPtr& grid);

// L2 inner product, conjugate-linear in the FIRST argument (so expansion
// coefficients are inner_product(basis_k, f, grid)).
Complex inner_product(const SmoothFunction& f, const SmoothFunction& g,
                      const QuadratureGrid& grid);
Complex inner_product(const GridFunction& f, const GridFunction& g);
Complex inner_product(const SmoothFunction& f, const GridFunction& g);
Complex inner_product(const GridFunction& f, const SmoothFunction& g);

double l2_norm(const SmoothFunction& f, const QuadratureGrid& grid);
double l2_norm(const GridFunction& f);

// Derivative of order 1 or 2. Uses the analytic callbacks when present, and
// otherwise 5-point central differences with step h plus one Richardson level
// (stencils at h and 2h). For order 2 with only d1 available, differentiates
// d1 once rather than eval twice.
SmoothFunction differentiate(const SmoothFunction& f, int order,
                             double h = 1e-4);

// Raw finite-difference kernels used by differentiate(); exposed for the
// dual-route derivative checks on integral-operator outputs.
Complex fd_first(const std::function<Complex(double)>& eval, double t, double h);
Complex fd_second(const std::function<Complex(double)>& eval, double t, double h);

}  // namespace canonpair
