#include "canonpair/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace canonpair {
namespace {

constexpr Complex kI{0.0, 1.0};
constexpr int kMaxMode = 12;

// Mode-damped complex Gaussian coefficients; the k^-2 falloff keeps high
// derivatives of the draws at a tame scale.
std::vector<Complex> damped_draw(SampleRng& rng, int modes) {
  std::vector<Complex> c(static_cast<std::size_t>(modes));
  for (int k = 1; k <= modes; ++k) {
    c[static_cast<std::size_t>(k - 1)] =
        rng.complex_normal() / (static_cast<double>(k) * k);
  }
  return c;
}

// Remove the component of c along the real constraint vector v.
void project_out(std::vector<Complex>& c, const std::vector<double>& v) {
  double vv = 0.0;
  Complex cv{0.0, 0.0};
  for (std::size_t k = 0; k < c.size(); ++k) {
    vv += v[k] * v[k];
    cv += v[k] * c[k];
  }
  if (vv <= 0.0) {
    throw std::logic_error("project_out: zero constraint vector");
  }
  for (std::size_t k = 0; k < c.size(); ++k) {
    c[k] -= v[k] * (cv / vv);
  }
}

// psi(t) = sum_k a_k sin(kt) + b_k (1 - cos(kt)); vanishes at 0 and 2pi.
SmoothFunction circle_core_function(std::vector<Complex> a,
                                    std::vector<Complex> b) {
  auto series = [a = std::move(a), b = std::move(b)](double t, int deriv) {
    Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double k = static_cast<double>(j + 1);
      switch (deriv) {
        case 0:
          acc += a[j] * std::sin(k * t) + b[j] * (1.0 - std::cos(k * t));
          break;
        case 1:
          acc += a[j] * k * std::cos(k * t) + b[j] * k * std::sin(k * t);
          break;
        default:
          acc +=
              -a[j] * k * k * std::sin(k * t) + b[j] * k * k * std::cos(k * t);
          break;
      }
    }
    return acc;
  };
  return make_smooth([series](double t) { return series(t, 0); },
                     [series](double t) { return series(t, 1); },
                     [series](double t) { return series(t, 2); });
}

// phi(q) = c0 + sum_k a_k cos(k pi q) + b_k sin(k pi q) on [-1, 1].
SmoothFunction box_trig_function(std::vector<Complex> a, std::vector<Complex> b,
                                 Complex c0) {
  auto series = [a = std::move(a), b = std::move(b), c0](double q, int deriv) {
    Complex acc = (deriv == 0) ? c0 : Complex{0.0, 0.0};
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double w = static_cast<double>(j + 1) * M_PI;
      switch (deriv) {
        case 0:
          acc += a[j] * std::cos(w * q) + b[j] * std::sin(w * q);
          break;
        case 1:
          acc += -a[j] * w * std::sin(w * q) + b[j] * w * std::cos(w * q);
          break;
        default:
          acc +=
              -a[j] * w * w * std::cos(w * q) - b[j] * w * w * std::sin(w * q);
          break;
      }
    }
    return acc;
  };
  return make_smooth([series](double q) { return series(q, 0); },
                     [series](double q) { return series(q, 1); },
                     [series](double q) { return series(q, 2); });
}

// Core constraints for the box trig draw: the endpoint values kill
// sum a_k (-1)^k, the endpoint derivatives kill sum b_k k (-1)^k, and the
// first moment kills sum b_k (-1)^k / k. The zeroth moment of every mode and
// the first moment of the cosine block vanish by parity, so nothing else is
// needed.
void project_box_core(std::vector<Complex>& a, std::vector<Complex>& b) {
  std::vector<double> u(a.size());
  std::vector<double> v1(b.size());
  std::vector<double> v2(b.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double k = static_cast<double>(j + 1);
    const double sign = (static_cast<int>(j + 1) % 2 == 0) ? 1.0 : -1.0;
    u[j] = sign;
    v1[j] = sign * k;
    v2[j] = sign / k;
  }
  project_out(a, u);
  project_out(b, v1);
  // Orthogonalize the second constraint against the first before projecting,
  // so removing it does not reintroduce a v1 component.
  double v11 = 0.0;
  double v12 = 0.0;
  for (std::size_t j = 0; j < v1.size(); ++j) {
    v11 += v1[j] * v1[j];
    v12 += v1[j] * v2[j];
  }
  std::vector<double> w(v2.size());
  for (std::size_t j = 0; j < v2.size(); ++j) {
    w[j] = v2[j] - v1[j] * (v12 / v11);
  }
  project_out(b, w);
}

SmoothFunction scale_function(const SmoothFunction& f, Complex c) {
  SmoothFunction out;
  out.support = f.support;
  auto ev = f.eval;
  out.eval = [ev, c](double t) { return c * ev(t); };
  if (f.has_d1()) {
    auto d1 = f.d1;
    out.d1 = [d1, c](double t) { return c * d1(t); };
  }
  if (f.has_d2()) {
    auto d2 = f.d2;
    out.d2 = [d2, c](double t) { return c * d2(t); };
  }
  return out;
}

Complex deriv_at(const SmoothFunction& f, double t, Interval dom) {
  if (f.has_d1()) {
    return f.d1(t);
  }
  return fd_first_bounded(f.eval, t, dom, 1e-3);
}

Complex grid_moment(const QuadratureGrid& grid, const SmoothFunction& f,
                    int power) {
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.nodes[i];
    acc += grid.weights[i] * std::pow(x, power) * f(x);
  }
  return acc;
}

}  // namespace

EigenPair circle_eigenfunction(int n, double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("circle_eigenfunction: gamma must be in [0,1)");
  }
  const double w = static_cast<double>(n) + gamma;
  const double c = 1.0 / std::sqrt(2.0 * M_PI);
  EigenPair p;
  p.fn = make_smooth(
      [c, w](double t) { return c * std::exp(kI * (w * t)); },
      [c, w](double t) { return kI * w * c * std::exp(kI * (w * t)); },
      [c, w](double t) { return -w * w * c * std::exp(kI * (w * t)); });
  p.eigenvalue = w;
  p.operator_tag = "H";
  return p;
}

double circle_eigenvalue(int n, double gamma) {
  return static_cast<double>(n) + gamma;
}

EigenPair box_eigenfunction(int n, const std::string& tag) {
  if (tag != "H" && tag != "p") {
    throw std::invalid_argument("box_eigenfunction: tag must be 'H' or 'p'");
  }
  const double w = static_cast<double>(n) * M_PI;
  const double c = 1.0 / std::sqrt(2.0);
  EigenPair p;
  p.fn = make_smooth(
      [c, w](double q) { return c * std::exp(kI * (w * q)); },
      [c, w](double q) { return kI * w * c * std::exp(kI * (w * q)); },
      [c, w](double q) { return -w * w * c * std::exp(kI * (w * q)); });
  p.eigenvalue = (tag == "p") ? w : 0.5 * w * w;
  p.operator_tag = tag;
  return p;
}

EigenPair box_eigenfunction(int n) { return box_eigenfunction(n, "H"); }

double box_momentum_eigenvalue(int n) { return static_cast<double>(n) * M_PI; }

double box_energy(int n) {
  const double w = static_cast<double>(n) * M_PI;
  return 0.5 * w * w;
}

SmoothFunction counterexample_core_function() {
  const double nrm = std::sqrt(8.0 / 45.0);
  const double real_shift = -2.0 * std::sqrt(5.0) / 15.0;
  return make_smooth(
      [nrm, real_shift](double q) {
        return (kI * (q * q - 1.0 / 3.0) + real_shift) / nrm;
      },
      [nrm](double q) { return 2.0 * kI * q / nrm; },
      [nrm](double) { return 2.0 * kI / nrm; });
}

Model make_circle_model(double gamma, int panels, int order) {
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("make_circle_model: gamma must be in [0,1)");
  }
  Model m;
  m.id = "circle";
  m.interval = make_interval(0.0, 2.0 * M_PI);
  m.gamma = gamma;
  m.grid = build_quadrature(m.interval, panels, order);

  const Interval dom = m.interval;
  m.op_A.name = "T";
  m.op_A.domain_id = "all";
  m.op_A.hermitian = true;
  m.op_A.bounded = true;
  m.op_A.action = [dom](const SmoothFunction& f) {
    return apply_coordinate_multiplication(f, dom);
  };
  m.op_A.domain_defect = [](const SmoothFunction&) {
    return MembershipDefect{};
  };

  m.op_B.name = "H";
  m.op_B.domain_id = "domH";
  m.op_B.hermitian = true;
  m.op_B.bounded = false;
  m.op_B.action = [](const SmoothFunction& f) {
    return apply_circle_hamiltonian(f);
  };
  m.op_B.domain_defect = [dom, gamma](const SmoothFunction& f) {
    const Complex twist =
        f(dom.a) - std::exp(-kI * 2.0 * M_PI * gamma) * f(dom.b);
    return make_defect({{"twist", std::abs(twist)}});
  };

  m.has_eigenbasis = true;
  m.eigenfunction = [gamma](int n) { return circle_eigenfunction(n, gamma).fn; };
  m.eigenvalue = [gamma](int n) { return circle_eigenvalue(n, gamma); };
  m.bi_analytic = [](double beta) {
    return std::abs(beta - std::round(beta)) < 1e-9;
  };
  return m;
}

Model make_box_model(int panels, int order) {
  Model m;
  m.id = "box";
  m.interval = make_interval(-1.0, 1.0);
  m.grid = build_quadrature(m.interval, panels, order);

  const Interval dom = m.interval;
  m.op_A.name = "H";
  m.op_A.domain_id = "domH";
  m.op_A.hermitian = true;
  m.op_A.bounded = false;
  m.op_A.action = [](const SmoothFunction& f) {
    return apply_box_hamiltonian(f);
  };
  m.op_A.domain_defect = [dom](const SmoothFunction& f) {
    const Complex dv = f(dom.a) - f(dom.b);
    const Complex dd = deriv_at(f, dom.a, dom) - deriv_at(f, dom.b, dom);
    return make_defect(
        {{"periodic_value", std::abs(dv)}, {"periodic_deriv", std::abs(dd)}});
  };

  const int panels_half = std::max(1, panels / 2);
  m.op_B.name = "T";
  m.op_B.domain_id = "all";
  m.op_B.hermitian = true;
  m.op_B.bounded = true;
  m.op_B.action = [panels_half, order](const SmoothFunction& f) {
    return box_time_image(f, panels_half, order);
  };
  m.op_B.domain_defect = [](const SmoothFunction&) {
    return MembershipDefect{};
  };

  m.has_eigenbasis = true;
  m.eigenfunction = [](int n) { return box_eigenfunction(n).fn; };
  m.eigenvalue = [](int n) { return box_energy(n); };
  return m;
}

Model make_counterexample_model(int panels, int order) {
  Model m;
  m.id = "counterexample";
  m.interval = make_interval(0.0, 1.0);
  m.grid = build_quadrature(m.interval, panels, order);

  const Interval dom = m.interval;
  m.op_A.name = "Q";
  m.op_A.domain_id = "all";
  m.op_A.hermitian = true;
  m.op_A.bounded = true;
  m.op_A.action = [dom](const SmoothFunction& f) {
    return apply_coordinate_multiplication(f, dom);
  };
  m.op_A.domain_defect = [](const SmoothFunction&) {
    return MembershipDefect{};
  };

  const GridPtr grid = m.grid;
  m.op_B.name = "P";
  m.op_B.domain_id = "all";
  m.op_B.hermitian = true;
  m.op_B.bounded = true;
  m.op_B.action = [grid](const SmoothFunction& f) {
    const Complex m0 = grid_moment(*grid, f, 0);
    const Complex m1 = grid_moment(*grid, f, 1);
    const double c = 1.5 * std::sqrt(5.0);
    SmoothFunction out;
    out.eval = [c, m0, m1](double q) { return c * (q * m0 + m1); };
    out.d1 = [c, m0](double) { return c * m0; };
    out.d2 = [](double) { return Complex{0.0, 0.0}; };
    return out;
  };
  m.op_B.domain_defect = [](const SmoothFunction&) {
    return MembershipDefect{};
  };

  m.has_eigenbasis = false;
  return m;
}

Model make_model(const std::string& id, double gamma, int panels, int order) {
  if (id == "circle") {
    return make_circle_model(gamma, panels, order);
  }
  if (id == "box") {
    return make_box_model(panels, order);
  }
  if (id == "counterexample") {
    return make_counterexample_model(panels, order);
  }
  throw std::invalid_argument("make_model: unknown model id '" + id + "'");
}

std::vector<std::string> model_ids() {
  return {"box", "circle", "counterexample"};
}

MembershipDefect membership_defect(const Model& m, const std::string& subspace,
                                   const SmoothFunction& f) {
  if (subspace == "all") {
    return MembershipDefect{};
  }
  const Interval dom = m.interval;
  if (m.id == "circle") {
    const Complex twist =
        f(dom.a) - std::exp(-kI * 2.0 * M_PI * m.gamma) * f(dom.b);
    if (subspace == "domH") {
      return make_defect({{"twist", std::abs(twist)}});
    }
    if (subspace == "dc") {
      return make_defect({{"value_start", std::abs(f(dom.a))},
                          {"value_end", std::abs(f(dom.b))},
                          {"twist", std::abs(twist)}});
    }
  } else if (m.id == "box") {
    if (subspace == "domH") {
      const Complex dv = f(dom.a) - f(dom.b);
      const Complex dd = deriv_at(f, dom.a, dom) - deriv_at(f, dom.b, dom);
      return make_defect(
          {{"periodic_value", std::abs(dv)}, {"periodic_deriv", std::abs(dd)}});
    }
    if (subspace == "dc") {
      return make_defect(
          {{"moment0", std::abs(grid_moment(*m.grid, f, 0))},
           {"moment1", std::abs(grid_moment(*m.grid, f, 1))},
           {"value_left", std::abs(f(dom.a))},
           {"value_right", std::abs(f(dom.b))},
           {"deriv_left", std::abs(deriv_at(f, dom.a, dom))},
           {"deriv_right", std::abs(deriv_at(f, dom.b, dom))}});
    }
  } else if (m.id == "counterexample") {
    if (subspace == "dc") {
      const double nf = l2_norm(f, *m.grid);
      if (!(nf > 0.0)) {
        throw std::invalid_argument("membership_defect: zero function");
      }
      const SmoothFunction core = counterexample_core_function();
      const Complex coeff = inner_product(core, f, *m.grid);
      double acc = 0.0;
      for (std::size_t i = 0; i < m.grid->size(); ++i) {
        const double x = m.grid->nodes[i];
        acc += m.grid->weights[i] * std::norm(f(x) - coeff * core(x));
      }
      return make_defect({{"span_residual", std::sqrt(acc) / nf}});
    }
  }
  throw std::invalid_argument("membership_defect: unknown subspace '" +
                              subspace + "' for model '" + m.id + "'");
}

namespace {

// Samplers re-check their own draws on a fixed fine grid rather than the
// model's working grid, so a coarse working resolution (used by convergence
// series) cannot turn an analytically clean draw into a false failure.
Model reference_resolution_copy(const Model& m) {
  Model ref = m;
  ref.grid = build_quadrature(m.interval, 64, 16);
  return ref;
}

}  // namespace

std::vector<SmoothFunction> sample_dc(const Model& m, std::uint64_t seed,
                                      int count) {
  if (count < 1) {
    throw std::invalid_argument("sample_dc: count must be >= 1");
  }
  const Model ref = reference_resolution_copy(m);
  SampleRng rng(mix_seed(seed, m.id + ":dc"));
  std::vector<SmoothFunction> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    SmoothFunction f;
    if (m.id == "circle") {
      f = circle_core_function(damped_draw(rng, kMaxMode),
                               damped_draw(rng, kMaxMode));
    } else if (m.id == "box") {
      auto a = damped_draw(rng, kMaxMode);
      auto b = damped_draw(rng, kMaxMode);
      project_box_core(a, b);
      f = box_trig_function(std::move(a), std::move(b), Complex{0.0, 0.0});
    } else if (m.id == "counterexample") {
      Complex c = rng.complex_normal();
      while (std::abs(c) < 0.1) {
        c = rng.complex_normal();
      }
      f = scale_function(counterexample_core_function(), c);
    } else {
      throw std::invalid_argument("sample_dc: unknown model id '" + m.id + "'");
    }
    if (membership_defect(ref, "dc", f).aggregate > 1e-10) {
      throw std::logic_error("sample_dc: draw failed the core membership check");
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<SmoothFunction> sample_domain_minus_dc(const Model& m,
                                                   std::uint64_t seed,
                                                   int count) {
  if (m.id != "circle") {
    throw std::invalid_argument(
        "sample_domain_minus_dc: only the circle model has off-core "
        "generator-domain sampling");
  }
  if (count < 1) {
    throw std::invalid_argument("sample_domain_minus_dc: count must be >= 1");
  }
  const Model ref = reference_resolution_copy(m);
  SampleRng rng(mix_seed(seed, m.id + ":domH-minus-dc"));
  std::vector<SmoothFunction> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    SmoothFunction f;
    if (i % 2 == 0) {
      // Twisted eigenfunction plus a core draw: satisfies the twist, has a
      // nonzero endpoint value.
      const int n = static_cast<int>(rng.next_u64() % 11u) - 5;
      const SmoothFunction phi = circle_eigenfunction(n, m.gamma).fn;
      const SmoothFunction core = circle_core_function(
          damped_draw(rng, kMaxMode), damped_draw(rng, kMaxMode));
      f = make_smooth(
          [p = phi.eval, c = core.eval](double t) { return p(t) + c(t); },
          [p = phi.d1, c = core.d1](double t) { return p(t) + c(t); },
          [p = phi.d2, c = core.d2](double t) { return p(t) + c(t); });
    } else {
      // e^{i gamma t} times a 2pi-periodic trig polynomial: the twist is
      // automatic, the endpoint value is kept away from zero.
      Complex c0 = rng.complex_normal();
      auto a = damped_draw(rng, 6);
      auto b = damped_draw(rng, 6);
      Complex at_zero = c0;
      for (const Complex& ak : a) {
        at_zero += ak;
      }
      if (std::abs(at_zero) < 0.15) {
        c0 += 1.0;
      }
      const double gamma = m.gamma;
      auto g = [c0, a, b](double t, int deriv) {
        Complex acc = (deriv == 0) ? c0 : Complex{0.0, 0.0};
        for (std::size_t j = 0; j < a.size(); ++j) {
          const double k = static_cast<double>(j + 1);
          switch (deriv) {
            case 0:
              acc += a[j] * std::cos(k * t) + b[j] * std::sin(k * t);
              break;
            case 1:
              acc += -a[j] * k * std::sin(k * t) + b[j] * k * std::cos(k * t);
              break;
            default:
              acc += -a[j] * k * k * std::cos(k * t) -
                     b[j] * k * k * std::sin(k * t);
              break;
          }
        }
        return acc;
      };
      f = make_smooth(
          [g, gamma](double t) { return std::exp(kI * (gamma * t)) * g(t, 0); },
          [g, gamma](double t) {
            return std::exp(kI * (gamma * t)) * (kI * gamma * g(t, 0) + g(t, 1));
          },
          [g, gamma](double t) {
            return std::exp(kI * (gamma * t)) *
                   (-gamma * gamma * g(t, 0) + 2.0 * kI * gamma * g(t, 1) +
                    g(t, 2));
          });
    }
    if (membership_defect(ref, "domH", f).aggregate > 1e-10) {
      throw std::logic_error(
          "sample_domain_minus_dc: draw left the generator domain");
    }
    if (membership_defect(ref, "dc", f).aggregate < 0.1) {
      throw std::logic_error(
          "sample_domain_minus_dc: draw is not solidly outside the core");
    }
    out.push_back(std::move(f));
  }
  return out;
}

double classical_arrival_time(double q, double p) {
  if (std::abs(p) < 1e-12) {
    throw std::domain_error("classical_arrival_time: momentum too close to 0");
  }
  return -q / p;
}

double classical_poisson_bracket(double q, double p, double h) {
  if (!(h > 0.0)) {
    throw std::invalid_argument("classical_poisson_bracket: bad step");
  }
  if (std::abs(p) <= 2.0 * h) {
    throw std::domain_error(
        "classical_poisson_bracket: momentum too close to 0 for the stencil");
  }
  auto ham = [](double, double pp) { return 0.5 * pp * pp; };
  auto arr = [](double qq, double pp) {
    return classical_arrival_time(qq, pp);
  };
  const double dHdq = (ham(q + h, p) - ham(q - h, p)) / (2.0 * h);
  const double dHdp = (ham(q, p + h) - ham(q, p - h)) / (2.0 * h);
  const double dTdq = (arr(q + h, p) - arr(q - h, p)) / (2.0 * h);
  const double dTdp = (arr(q, p + h) - arr(q, p - h)) / (2.0 * h);
  return dHdq * dTdp - dHdp * dTdq;
}

}  // namespace canonpair
