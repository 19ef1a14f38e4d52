#include "canonpair/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace canonpair {
namespace {

constexpr Complex kI{0.0, 1.0};

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Composite Gauss-Legendre integral of eval over [lo, hi]. Degenerate or
// inverted ranges integrate to zero (they appear when a kernel split point
// sits on the interval edge).
Complex integrate(const std::function<Complex(double)>& eval, double lo,
                  double hi, int panels, int order) {
  if (!(hi > lo)) {
    return Complex{0.0, 0.0};
  }
  std::vector<double> xs;
  std::vector<double> ws;
  gauss_legendre_reference(order, xs, ws);
  const double width = (hi - lo) / panels;
  Complex acc{0.0, 0.0};
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (static_cast<double>(p) + 0.5) * width;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      acc += 0.5 * width * ws[j] * eval(mid + 0.5 * width * xs[j]);
    }
  }
  return acc;
}

}  // namespace

MembershipDefect make_defect(std::map<std::string, double> components) {
  MembershipDefect d;
  d.components = std::move(components);
  d.aggregate = 0.0;
  for (const auto& [name, value] : d.components) {
    (void)name;
    d.aggregate = std::max(d.aggregate, value);
  }
  return d;
}

SmoothFunction apply_coordinate_multiplication(const SmoothFunction& f,
                                               Interval interval) {
  (void)interval;  // the action t*f(t) is interval-independent
  SmoothFunction out;
  out.support = f.support;
  auto ev = f.eval;
  out.eval = [ev](double t) { return t * ev(t); };
  if (f.has_d1()) {
    auto d1 = f.d1;
    out.d1 = [ev, d1](double t) { return ev(t) + t * d1(t); };
    if (f.has_d2()) {
      auto d2 = f.d2;
      out.d2 = [d1, d2](double t) { return 2.0 * d1(t) + t * d2(t); };
    }
  }
  return out;
}

SmoothFunction apply_phase_multiplication(double beta, const SmoothFunction& f) {
  SmoothFunction out;
  out.support = f.support;
  auto ev = f.eval;
  auto phase = [beta](double t) { return std::exp(-kI * beta * t); };
  out.eval = [ev, phase](double t) { return phase(t) * ev(t); };
  if (f.has_d1()) {
    auto d1 = f.d1;
    out.d1 = [ev, d1, phase, beta](double t) {
      return phase(t) * (d1(t) - kI * beta * ev(t));
    };
    if (f.has_d2()) {
      auto d2 = f.d2;
      out.d2 = [ev, d1, d2, phase, beta](double t) {
        return phase(t) *
               (d2(t) - 2.0 * kI * beta * d1(t) - beta * beta * ev(t));
      };
    }
  }
  return out;
}

namespace {

SmoothFunction minus_i_first_derivative(const SmoothFunction& f) {
  SmoothFunction df = differentiate(f, 1);
  SmoothFunction out;
  out.support = f.support;
  auto ev = df.eval;
  out.eval = [ev](double t) { return -kI * ev(t); };
  if (f.has_d2()) {
    auto d2 = f.d2;
    out.d1 = [d2](double t) { return -kI * d2(t); };
  }
  return out;
}

}  // namespace

SmoothFunction apply_circle_hamiltonian(const SmoothFunction& f) {
  return minus_i_first_derivative(f);
}

SmoothFunction apply_box_momentum(const SmoothFunction& f) {
  return minus_i_first_derivative(f);
}

SmoothFunction apply_box_hamiltonian(const SmoothFunction& f) {
  SmoothFunction d2f = differentiate(f, 2);
  SmoothFunction out;
  out.support = f.support;
  auto ev = d2f.eval;
  out.eval = [ev](double t) { return -0.5 * ev(t); };
  return out;
}

SmoothFunction apply_twisted_translation(double alpha, double gamma,
                                         const SmoothFunction& f) {
  if (!std::isfinite(alpha) || !(gamma >= 0.0 && gamma < 1.0)) {
    throw std::invalid_argument(
        "apply_twisted_translation: need finite alpha and gamma in [0,1)");
  }
  const Interval dom = make_interval(0.0, 2.0 * M_PI);
  const double L = dom.length();
  // One full wind equals multiplication by the wrap factor, so reduce the
  // shift to r in [0, L) and account the winds as a constant phase.
  const double winds = std::floor(alpha / L);
  const double r = alpha - winds * L;
  const Complex wrap = std::exp(-kI * 2.0 * M_PI * gamma);
  const Complex wind_phase = std::exp(-kI * 2.0 * M_PI * gamma * winds);

  auto lift = [dom, L, r, wrap,
               wind_phase](const std::function<Complex(double)>& g) {
    return [dom, L, r, wrap, wind_phase, g](double t) -> Complex {
      const double s = t - r;
      if (s >= dom.a) {
        return wind_phase * g(s);
      }
      return wind_phase * wrap * g(s + L);
    };
  };

  SmoothFunction out;
  out.eval = lift(f.eval);
  if (f.has_d1()) {
    out.d1 = lift(f.d1);
  }
  if (f.has_d2()) {
    out.d2 = lift(f.d2);
  }
  return out;
}

SmoothFunction kernel_image(const KernelSpec& ker, const SmoothFunction& f,
                            int panels_per_side, int order) {
  if (panels_per_side < 1) {
    throw std::invalid_argument("kernel_image: panels_per_side must be >= 1");
  }
  if (!ker.kernel) {
    throw std::invalid_argument("kernel_image: kernel has no integrand");
  }
  const Interval dom = ker.interval;
  auto kfun = ker.kernel;
  auto ev = f.eval;
  const bool split = ker.split_at_diagonal;
  SmoothFunction out;
  out.eval = [dom, kfun, ev, split, panels_per_side, order](double q) {
    double qc = q;
    const double slack = 1e-9 * dom.length();
    if (qc < dom.a - slack || qc > dom.b + slack) {
      throw std::invalid_argument("kernel_image: point outside interval");
    }
    qc = std::clamp(qc, dom.a, dom.b);
    auto integrand = [kfun, ev, qc](double qp) { return kfun(qc, qp) * ev(qp); };
    if (split) {
      return integrate(integrand, dom.a, qc, panels_per_side, order) +
             integrate(integrand, qc, dom.b, panels_per_side, order);
    }
    return integrate(integrand, dom.a, dom.b, 2 * panels_per_side, order);
  };
  return out;
}

GridFunction apply_integral_kernel(const KernelSpec& ker,
                                   const SmoothFunction& f,
                                   const GridPtr& grid) {
  if (!grid) {
    throw std::invalid_argument("apply_integral_kernel: null grid");
  }
  const int panels_per_side = std::max(1, grid->panels / 2 + grid->panels % 2);
  SmoothFunction img = kernel_image(ker, f, panels_per_side, grid->order);
  return sample(img, grid);
}

KernelSpec box_time_kernel() {
  KernelSpec ker;
  ker.name = "box_arrival_time";
  ker.interval = make_interval(-1.0, 1.0);
  ker.split_at_diagonal = true;
  const Complex factor{0.0, -0.25};  // 1/(4i)
  ker.kernel = [factor](double q, double qp) {
    return factor * ((q + qp) * sgn(q - qp) - (q * q - qp * qp));
  };
  return ker;
}

KernelSpec counterexample_momentum_kernel() {
  KernelSpec ker;
  ker.name = "counterexample_momentum";
  ker.interval = make_interval(0.0, 1.0);
  ker.split_at_diagonal = false;
  const double c = 1.5 * std::sqrt(5.0);
  ker.kernel = [c](double q, double qp) { return Complex{c * (q + qp), 0.0}; };
  return ker;
}

SmoothFunction box_time_image(const SmoothFunction& f, int panels_per_side,
                              int order) {
  const KernelSpec ker = box_time_kernel();
  const Interval dom = ker.interval;
  SmoothFunction base = kernel_image(ker, f, panels_per_side, order);

  auto ev = f.eval;
  const Complex m0 = integrate(ev, dom.a, dom.b, 2 * panels_per_side, order);
  std::function<Complex(double)> fprime;
  if (f.has_d1()) {
    fprime = f.d1;
  } else {
    fprime = [ev, dom](double q) { return fd_first_bounded(ev, q, dom, 1e-4); };
  }
  auto running = [ev, dom, panels_per_side, order](double q) {
    return integrate(ev, dom.a, q, panels_per_side, order) -
           integrate(ev, q, dom.b, panels_per_side, order);
  };

  const Complex factor{0.0, -0.25};  // 1/(4i)
  SmoothFunction out;
  out.eval = base.eval;
  out.d1 = [running, ev, m0, factor](double q) {
    return factor * (running(q) + 4.0 * q * ev(q) - 2.0 * q * m0);
  };
  out.d2 = [ev, fprime, m0, factor](double q) {
    return factor * (6.0 * ev(q) + 4.0 * q * fprime(q) - 2.0 * m0);
  };
  return out;
}

SmoothFunction inverse_momentum_fn(const SmoothFunction& f, int n_max,
                                   const QuadratureGrid& grid) {
  if (n_max < 1) {
    throw std::invalid_argument("inverse_momentum_fn: n_max must be >= 1");
  }
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<std::pair<int, Complex>> modes;
  modes.reserve(2 * static_cast<std::size_t>(n_max));
  for (int n = -n_max; n <= n_max; ++n) {
    if (n == 0) {
      continue;
    }
    Complex coeff{0.0, 0.0};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double x = grid.nodes[i];
      coeff += grid.weights[i] * inv_sqrt2 *
               std::exp(-kI * (static_cast<double>(n) * M_PI * x)) * f(x);
    }
    modes.emplace_back(n, coeff / (static_cast<double>(n) * M_PI));
  }

  auto series = [modes, inv_sqrt2](double q, int deriv) {
    Complex acc{0.0, 0.0};
    for (const auto& [n, alpha] : modes) {
      const double w = static_cast<double>(n) * M_PI;
      Complex term = alpha * inv_sqrt2 * std::exp(kI * (w * q));
      if (deriv == 1) {
        term *= kI * w;
      } else if (deriv == 2) {
        term *= -w * w;
      }
      acc += term;
    }
    return acc;
  };

  SmoothFunction out;
  out.eval = [series](double q) { return series(q, 0); };
  out.d1 = [series](double q) { return series(q, 1); };
  out.d2 = [series](double q) { return series(q, 2); };
  return out;
}

GridFunction apply_inverse_momentum(const SmoothFunction& f, int n_max,
                                    const GridPtr& grid) {
  if (!grid) {
    throw std::invalid_argument("apply_inverse_momentum: null grid");
  }
  return sample(inverse_momentum_fn(f, n_max, *grid), grid);
}

Complex fd_first_bounded(const std::function<Complex(double)>& eval, double t,
                         Interval dom, double step) {
  if (!(step > 0.0)) {
    throw std::invalid_argument("fd_first_bounded: step must be positive");
  }
  const double slack = 1e-12 * dom.length();
  if (t < dom.a - slack || t > dom.b + slack) {
    throw std::invalid_argument("fd_first_bounded: point outside interval");
  }
  const double tc = std::clamp(t, dom.a, dom.b);
  const double dist = std::min(tc - dom.a, dom.b - tc);
  if (dist < std::max(1e-9, slack)) {
    // Exact endpoint: one-sided 5-point stencil with one Richardson level
    // (the h^4 error term cancels between steps h and h/2).
    const double dir = (tc - dom.a < dom.b - tc) ? 1.0 : -1.0;
    auto one = [&](double h) {
      const double d = dir * h;
      return (-25.0 * eval(tc) + 48.0 * eval(tc + d) -
              36.0 * eval(tc + 2.0 * d) + 16.0 * eval(tc + 3.0 * d) -
              3.0 * eval(tc + 4.0 * d)) /
             (12.0 * d);
    };
    return (16.0 * one(0.5 * step) - one(step)) / 15.0;
  }
  const double h = (dist < 2.0 * step) ? 0.5 * dist : step;
  return (eval(tc - 2.0 * h) - 8.0 * eval(tc - h) + 8.0 * eval(tc + h) -
          eval(tc + 2.0 * h)) /
         (12.0 * h);
}

Complex fd_second_bounded(const std::function<Complex(double)>& eval, double t,
                          Interval dom, double step) {
  if (!(step > 0.0)) {
    throw std::invalid_argument("fd_second_bounded: step must be positive");
  }
  const double slack = 1e-12 * dom.length();
  if (t < dom.a - slack || t > dom.b + slack) {
    throw std::invalid_argument("fd_second_bounded: point outside interval");
  }
  const double tc = std::clamp(t, dom.a, dom.b);
  const double dist = std::min(tc - dom.a, dom.b - tc);
  if (dist < std::max(1e-9, slack)) {
    // One-sided 5-point second derivative; Richardson across h and h/2
    // removes the leading h^3 term.
    const double dir = (tc - dom.a < dom.b - tc) ? 1.0 : -1.0;
    auto one = [&](double h) {
      const double d = dir * h;
      return (35.0 * eval(tc) - 104.0 * eval(tc + d) +
              114.0 * eval(tc + 2.0 * d) - 56.0 * eval(tc + 3.0 * d) +
              11.0 * eval(tc + 4.0 * d)) /
             (12.0 * d * d);
    };
    return (8.0 * one(0.5 * step) - one(step)) / 7.0;
  }
  const double h = (dist < 2.0 * step) ? 0.5 * dist : step;
  return (-eval(tc - 2.0 * h) + 16.0 * eval(tc - h) - 30.0 * eval(tc) +
          16.0 * eval(tc + h) - eval(tc + 2.0 * h)) /
         (12.0 * h * h);
}

SmoothFunction differentiate_image(const SmoothFunction& g, Interval dom,
                                   int order, double step) {
  if (order != 1 && order != 2) {
    throw std::invalid_argument("differentiate_image: order must be 1 or 2");
  }
  if (!(step > 0.0)) {
    throw std::invalid_argument("differentiate_image: step must be positive");
  }
  SmoothFunction out;
  out.support = g.support;
  auto ev = g.eval;
  if (order == 1) {
    out.eval = [ev, dom, step](double t) {
      return fd_first_bounded(ev, t, dom, step);
    };
  } else {
    out.eval = [ev, dom, step](double t) {
      return fd_second_bounded(ev, t, dom, step);
    };
  }
  return out;
}

double dual_route_second_derivative_agreement(const SmoothFunction& g,
                                              Interval dom, double step) {
  if (!g.has_d2()) {
    throw std::invalid_argument(
        "dual_route_second_derivative_agreement: no closed-form d2");
  }
  const int points = 101;
  const double lo = dom.a + 2.0 * step;
  const double hi = dom.b - 2.0 * step;
  if (!(hi > lo)) {
    throw std::invalid_argument(
        "dual_route_second_derivative_agreement: step too large for interval");
  }
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < points; ++i) {
    const double t = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
    const Complex fd = fd_second_bounded(g.eval, t, dom, step);
    const Complex cf = g.d2(t);
    num += std::norm(fd - cf);
    den += std::norm(cf);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

CommutatorAuditResult commutator_audit(const LinearOperatorSpec& A,
                                       const LinearOperatorSpec& B,
                                       const SmoothFunction& f,
                                       const SmoothFunction& target,
                                       const QuadratureGrid& grid,
                                       double residual_tol,
                                       double violation_threshold,
                                       double clean_threshold) {
  if (!A.action || !B.action) {
    throw std::invalid_argument("commutator_audit: operator has no action");
  }
  const double nf = l2_norm(f, grid);
  if (!(nf > 0.0)) {
    throw std::invalid_argument("commutator_audit: zero test function");
  }

  SmoothFunction Bf = B.action(f);
  SmoothFunction Af = A.action(f);

  CommutatorAuditResult res;
  if (A.domain_defect) {
    res.defect_Bf_in_domA = A.domain_defect(Bf);
  }
  if (B.domain_defect) {
    res.defect_Af_in_domB = B.domain_defect(Af);
  }

  SmoothFunction ABf = A.action(Bf);
  SmoothFunction BAf = B.action(Af);
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.nodes[i];
    acc += grid.weights[i] * std::norm(ABf(x) - BAf(x) - target(x));
  }
  res.pointwise_residual = std::sqrt(acc) / nf;

  const double max_defect = std::max(res.defect_Bf_in_domA.aggregate,
                                     res.defect_Af_in_domB.aggregate);
  if (max_defect > violation_threshold) {
    res.verdict = "domain-violation";
  } else if (res.pointwise_residual <= residual_tol &&
             max_defect < clean_threshold) {
    res.verdict = "pass";
  } else if (max_defect >= clean_threshold) {
    res.verdict = "inconclusive";
  } else {
    res.verdict = "fail";
  }
  return res;
}

Complex matrix_element(const LinearOperatorSpec& op, int m, int n,
                       const std::function<SmoothFunction(int)>& basis,
                       const QuadratureGrid& grid) {
  if (!op.action || !basis) {
    throw std::invalid_argument("matrix_element: empty operator or basis");
  }
  const SmoothFunction img = op.action(basis(n));
  return inner_product(basis(m), img, grid);
}

}  // namespace canonpair
