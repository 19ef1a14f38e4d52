#include "canonpair/funcspace.hpp"

#include <cmath>
#include <utility>

namespace canonpair {

SmoothFunction make_smooth(std::function<Complex(double)> eval) {
  SmoothFunction f;
  f.eval = std::move(eval);
  return f;
}

SmoothFunction make_smooth(std::function<Complex(double)> eval,
                           std::function<Complex(double)> d1,
                           std::function<Complex(double)> d2) {
  SmoothFunction f;
  f.eval = std::move(eval);
  f.d1 = std::move(d1);
  f.d2 = std::move(d2);
  return f;
}

GridFunction sample(const SmoothFunction& f, const GridPtr& grid) {
  if (!grid) {
    throw std::invalid_argument("sample: null grid");
  }
  GridFunction g;
  g.grid = grid;
  g.values.reserve(grid->size());
  for (double t : grid->nodes) {
    g.values.push_back(f(t));
  }
  g.value_a = f(grid->domain.a);
  g.value_b = f(grid->domain.b);
  return g;
}

Complex inner_product(const SmoothFunction& f, const SmoothFunction& g,
                      const QuadratureGrid& grid) {
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    acc += grid.weights[i] * std::conj(f(grid.nodes[i])) * g(grid.nodes[i]);
  }
  return acc;
}

Complex inner_product(const GridFunction& f, const GridFunction& g) {
  if (!f.grid || !g.grid) {
    throw std::invalid_argument("inner_product: null grid");
  }
  if (f.grid != g.grid &&
      (f.grid->nodes != g.grid->nodes || f.grid->domain.a != g.grid->domain.a ||
       f.grid->domain.b != g.grid->domain.b)) {
    throw std::invalid_argument("inner_product: grid mismatch");
  }
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    acc += f.grid->weights[i] * std::conj(f.values[i]) * g.values[i];
  }
  return acc;
}

Complex inner_product(const SmoothFunction& f, const GridFunction& g) {
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    acc += g.grid->weights[i] * std::conj(f(g.grid->nodes[i])) * g.values[i];
  }
  return acc;
}

Complex inner_product(const GridFunction& f, const SmoothFunction& g) {
  return std::conj(inner_product(g, f));
}

double l2_norm(const SmoothFunction& f, const QuadratureGrid& grid) {
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    acc += grid.weights[i] * std::norm(f(grid.nodes[i]));
  }
  return std::sqrt(acc);
}

double l2_norm(const GridFunction& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    acc += f.grid->weights[i] * std::norm(f.values[i]);
  }
  return std::sqrt(acc);
}

Complex fd_first(const std::function<Complex(double)>& eval, double t, double h) {
  auto stencil = [&](double s) {
    return (eval(t - 2.0 * s) - 8.0 * eval(t - s) + 8.0 * eval(t + s) -
            eval(t + 2.0 * s)) /
           (12.0 * s);
  };
  // One Richardson level across steps h and 2h kills the h^4 error term.
  return (16.0 * stencil(h) - stencil(2.0 * h)) / 15.0;
}

Complex fd_second(const std::function<Complex(double)>& eval, double t, double h) {
  auto stencil = [&](double s) {
    return (-eval(t - 2.0 * s) + 16.0 * eval(t - s) - 30.0 * eval(t) +
            16.0 * eval(t + s) - eval(t + 2.0 * s)) /
           (12.0 * s * s);
  };
  return (16.0 * stencil(h) - stencil(2.0 * h)) / 15.0;
}

SmoothFunction differentiate(const SmoothFunction& f, int order, double h) {
  if (order != 1 && order != 2) {
    throw std::invalid_argument("differentiate: order must be 1 or 2");
  }
  if (!(h > 0.0)) {
    throw std::invalid_argument("differentiate: step must be positive");
  }
  SmoothFunction out;
  out.support = f.support;
  if (order == 1) {
    if (f.has_d1()) {
      out.eval = f.d1;
      if (f.has_d2()) {
        out.d1 = f.d2;
      }
      return out;
    }
    auto eval = f.eval;
    out.eval = [eval, h](double t) { return fd_first(eval, t, h); };
    return out;
  }
  if (f.has_d2()) {
    out.eval = f.d2;
    return out;
  }
  if (f.has_d1()) {
    auto d1 = f.d1;
    out.eval = [d1, h](double t) { return fd_first(d1, t, h); };
    return out;
  }
  auto eval = f.eval;
  out.eval = [eval, h](double t) { return fd_second(eval, t, h); };
  return out;
}

}  // namespace canonpair
