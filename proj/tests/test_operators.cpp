#include <catch2/catch_amalgamated.hpp>

using Catch::Approx;

#include <cmath>
#include <complex>
#include <functional>

#include "canonpair/models.hpp"
#include "canonpair/operators.hpp"

using canonpair::box_time_image;
using canonpair::Complex;
using canonpair::commutator_audit;
using canonpair::counterexample_core_function;
using canonpair::counterexample_momentum_kernel;
using canonpair::differentiate_image;
using canonpair::fd_first_bounded;
using canonpair::fd_second_bounded;
using canonpair::GridPtr;
using canonpair::inner_product;
using canonpair::inverse_momentum_fn;
using canonpair::kernel_image;
using canonpair::l2_norm;
using canonpair::make_interval;
using canonpair::make_smooth;
using canonpair::matrix_element;
using canonpair::Model;
using canonpair::SmoothFunction;

namespace {

const Complex kI{0.0, 1.0};

// L2 distance over the model grid between two pointwise-evaluable functions.
double distance(const SmoothFunction& a, const SmoothFunction& b,
                const canonpair::QuadratureGrid& grid) {
  const SmoothFunction diff =
      make_smooth([a, b](double t) { return a(t) - b(t); });
  return l2_norm(diff, grid);
}

SmoothFunction scaled(Complex c, const SmoothFunction& f) {
  SmoothFunction out = make_smooth([c, f](double t) { return c * f(t); });
  if (f.has_d1()) {
    out.d1 = [c, f](double t) { return c * f.d1(t); };
  }
  if (f.has_d2()) {
    out.d2 = [c, f](double t) { return c * f.d2(t); };
  }
  return out;
}

SmoothFunction added(const SmoothFunction& f, const SmoothFunction& g) {
  SmoothFunction out = make_smooth([f, g](double t) { return f(t) + g(t); });
  if (f.has_d1() && g.has_d1()) {
    out.d1 = [f, g](double t) { return f.d1(t) + g.d1(t); };
  }
  if (f.has_d2() && g.has_d2()) {
    out.d2 = [f, g](double t) { return f.d2(t) + g.d2(t); };
  }
  return out;
}

}  // namespace

TEST_CASE("coordinate multiplication acts pointwise and propagates d1/d2") {
  const auto iv = make_interval(0.0, 2.0 * M_PI);
  const SmoothFunction f = make_smooth(
      [](double t) { return Complex{std::sin(t), 0.0}; },
      [](double t) { return Complex{std::cos(t), 0.0}; },
      [](double t) { return Complex{-std::sin(t), 0.0}; });
  const SmoothFunction tf = canonpair::apply_coordinate_multiplication(f, iv);
  const double t = 1.3;
  CHECK(std::abs(tf(t) - Complex{t * std::sin(t), 0.0}) < 1e-15);
  REQUIRE(tf.has_d1());
  CHECK(std::abs(tf.d1(t) - Complex{std::sin(t) + t * std::cos(t), 0.0}) <
        1e-14);
  REQUIRE(tf.has_d2());
  CHECK(std::abs(tf.d2(t) -
                 Complex{2.0 * std::cos(t) - t * std::sin(t), 0.0}) < 1e-14);
}

TEST_CASE("phase multiplication is unitary and composes additively") {
  const Model m = canonpair::make_circle_model(0.25, 20, 16);
  const SmoothFunction f =
      added(m.eigenfunction(1), scaled(Complex{0.5, 0.0}, m.eigenfunction(2)));

  const SmoothFunction uf = canonpair::apply_phase_multiplication(1.37, f);
  CHECK(l2_norm(uf, *m.grid) == Approx(l2_norm(f, *m.grid)).margin(1e-12));

  const SmoothFunction two_steps = canonpair::apply_phase_multiplication(
      0.9, canonpair::apply_phase_multiplication(0.47, f));
  CHECK(distance(two_steps, uf, *m.grid) < 1e-12);

  // integer shift maps one generator eigenfunction onto another
  const SmoothFunction shifted =
      canonpair::apply_phase_multiplication(1.0, m.eigenfunction(2));
  CHECK(distance(shifted, m.eigenfunction(1), *m.grid) < 1e-12);

  // conjugation by the phase shifts the generator eigenvalue by -beta
  const double beta = 0.6;
  const SmoothFunction u_phi =
      canonpair::apply_phase_multiplication(beta, m.eigenfunction(3));
  const SmoothFunction h_u_phi = canonpair::apply_circle_hamiltonian(u_phi);
  const double expected = m.eigenvalue(3) - beta;
  CHECK(distance(h_u_phi, scaled(Complex{expected, 0.0}, u_phi), *m.grid) <
        1e-12);
}

TEST_CASE("twisted translation: group law, seam factor, eigen action") {
  const double gamma = 0.25;
  const Model m = canonpair::make_circle_model(gamma, 20, 16);
  const SmoothFunction f =
      added(m.eigenfunction(0), scaled(Complex{0.0, 0.7}, m.eigenfunction(2)));

  SECTION("full turn equals the wrap phase times the identity") {
    const SmoothFunction turned =
        canonpair::apply_twisted_translation(2.0 * M_PI, gamma, f);
    const Complex wrap = std::exp(Complex{0.0, -2.0 * M_PI * gamma});
    CHECK(distance(turned, scaled(wrap, f), *m.grid) < 1e-12);
  }

  SECTION("translations compose additively, including negative steps") {
    const SmoothFunction ab = canonpair::apply_twisted_translation(
        0.8, gamma, canonpair::apply_twisted_translation(2.6, gamma, f));
    const SmoothFunction direct =
        canonpair::apply_twisted_translation(3.4, gamma, f);
    CHECK(distance(ab, direct, *m.grid) < 1e-12);

    const SmoothFunction back = canonpair::apply_twisted_translation(
        -1.1, gamma, canonpair::apply_twisted_translation(1.1, gamma, f));
    CHECK(distance(back, f, *m.grid) < 1e-12);
  }

  SECTION("eigenfunctions pick up the phase e^{-i alpha (n+gamma)}") {
    for (int n : {-2, 0, 3}) {
      const double alpha = 1.9;
      const SmoothFunction moved =
          canonpair::apply_twisted_translation(alpha, gamma, m.eigenfunction(n));
      const Complex phase =
          std::exp(Complex{0.0, -alpha * (n + gamma)});
      CHECK(distance(moved, scaled(phase, m.eigenfunction(n)), *m.grid) <
            1e-12);
    }
  }

  SECTION("norm is preserved") {
    const SmoothFunction moved =
        canonpair::apply_twisted_translation(1.234, gamma, f);
    CHECK(l2_norm(moved, *m.grid) == Approx(l2_norm(f, *m.grid)).margin(1e-12));
  }
}

TEST_CASE("box differential operators act as expected on the plane waves") {
  const Model m = canonpair::make_box_model(20, 16);
  for (int n : {-3, 1, 7}) {
    const SmoothFunction phi = m.eigenfunction(n);
    const SmoothFunction pphi = canonpair::apply_box_momentum(phi);
    const SmoothFunction hphi = canonpair::apply_box_hamiltonian(phi);
    CHECK(distance(pphi, scaled(Complex{n * M_PI, 0.0}, phi), *m.grid) <
          1e-12);
    const double energy = 0.5 * n * n * M_PI * M_PI;
    CHECK(distance(hphi, scaled(Complex{energy, 0.0}, phi), *m.grid) < 1e-10);
  }
}

TEST_CASE("arrival-time image of the constant mode has the closed form") {
  // T phi_0 = 2^{-1/2} (q^2 - 1/3) / (4i)
  const Model m = canonpair::make_box_model(20, 16);
  const SmoothFunction img = box_time_image(m.eigenfunction(0), 10, 16);
  const double c = 1.0 / std::sqrt(2.0);
  for (double q : {-0.9, -0.31, 0.0, 0.55, 1.0}) {
    const Complex expected = c * (q * q - 1.0 / 3.0) / (4.0 * kI);
    CHECK(std::abs(img(q) - expected) < 1e-12);
    REQUIRE(img.has_d1());
    CHECK(std::abs(img.d1(q) - c * 2.0 * q / (4.0 * kI)) < 1e-12);
    REQUIRE(img.has_d2());
    CHECK(std::abs(img.d2(q) - c * 2.0 / (4.0 * kI)) < 1e-12);
  }
}

TEST_CASE("split-kernel image matches a brute-force trapezoid integral") {
  const SmoothFunction f = make_smooth(
      [](double q) { return Complex{std::cos(M_PI * q), 0.0}; },
      [](double q) { return Complex{-M_PI * std::sin(M_PI * q), 0.0}; },
      [](double q) { return Complex{-M_PI * M_PI * std::cos(M_PI * q), 0.0}; });
  const SmoothFunction img = box_time_image(f, 16, 16);

  // The integrand jumps at qp == q (the sgn factor), so the reference
  // trapezoid sum must split there; a single sweep would carry an O(h)
  // error from the discontinuity.
  auto kernel_signed = [](double q, double qp, double s) {
    return ((q + qp) * s - (q * q - qp * qp)) / (4.0 * kI);
  };
  auto brute = [&](double q) {
    auto trap = [&](double a, double b, double s) {
      const int n = 100000;
      const double h = (b - a) / n;
      Complex acc = 0.5 * (kernel_signed(q, a, s) * f(a) +
                           kernel_signed(q, b, s) * f(b));
      for (int i = 1; i < n; ++i) {
        const double qp = a + i * h;
        acc += kernel_signed(q, qp, s) * f(qp);
      }
      return acc * h;
    };
    return trap(-1.0, q, 1.0) + trap(q, 1.0, -1.0);
  };

  for (double q : {-0.77, 0.0, 0.3, 0.9}) {
    CHECK(std::abs(img(q) - brute(q)) < 1e-7);
  }
}

TEST_CASE("closed-form image derivatives agree with the FD route") {
  const SmoothFunction f = make_smooth(
      [](double q) { return Complex{std::cos(M_PI * q), 0.0}; },
      [](double q) { return Complex{-M_PI * std::sin(M_PI * q), 0.0}; },
      [](double q) { return Complex{-M_PI * M_PI * std::cos(M_PI * q), 0.0}; });
  const SmoothFunction img = box_time_image(f, 16, 16);
  const auto iv = make_interval(-1.0, 1.0);
  CHECK(canonpair::dual_route_second_derivative_agreement(img, iv) < 1e-6);

  const SmoothFunction fd_d1 = differentiate_image(img, iv, 1);
  for (double q : {-0.5, 0.2, 0.8}) {
    CHECK(std::abs(fd_d1(q) - img.d1(q)) < 1e-6);
  }
}

TEST_CASE("arrival-time matrix is hermitian on the plane-wave basis") {
  const Model m = canonpair::make_box_model(20, 16);
  auto basis = [&m](int n) { return m.eigenfunction(n); };
  for (int a = -2; a <= 2; ++a) {
    for (int b = a; b <= 2; ++b) {
      const Complex mab = matrix_element(m.op_B, a, b, basis, *m.grid);
      const Complex mba = matrix_element(m.op_B, b, a, basis, *m.grid);
      CHECK(std::abs(mab - std::conj(mba)) < 1e-9);
    }
  }
}

TEST_CASE("truncated inverse momentum inverts the plane waves") {
  const Model m = canonpair::make_box_model(20, 16);
  for (int n : {1, -1, 7, -16}) {
    const SmoothFunction phi = m.eigenfunction(n);
    const SmoothFunction inv = inverse_momentum_fn(phi, 32, *m.grid);
    CHECK(distance(inv, scaled(Complex{1.0 / (n * M_PI), 0.0}, phi),
                   *m.grid) < 1e-10);
  }
  // the constant mode is annihilated, not inverted
  const SmoothFunction inv0 = inverse_momentum_fn(m.eigenfunction(0), 32,
                                                  *m.grid);
  CHECK(l2_norm(inv0, *m.grid) < 1e-12);
}

TEST_CASE("rank-style momentum image has the closed affine form") {
  // P phi*(q) = (3 sqrt10 / 4) (-q - 1/2 + i sqrt5 / 8)
  const SmoothFunction core = counterexample_core_function();
  const SmoothFunction img =
      kernel_image(counterexample_momentum_kernel(), core, 10, 16);
  const double slope = -2.3717082451262845;
  const Complex offset{-1.1858541225631423, 0.6629126073623885};
  for (double q : {0.0, 0.31, 0.77, 1.0}) {
    CHECK(std::abs(img(q) - (slope * q + offset)) < 1e-12);
  }
}

TEST_CASE("circle coordinate matrix elements: pi on the diagonal, -i/(n-m) off") {
  const Model m = canonpair::make_circle_model(0.25, 20, 16);
  auto basis = [&m](int n) { return m.eigenfunction(n); };
  for (int a = -2; a <= 2; ++a) {
    for (int b = -2; b <= 2; ++b) {
      const Complex mab = matrix_element(m.op_A, a, b, basis, *m.grid);
      const Complex expected =
          (a == b) ? Complex{M_PI, 0.0} : -kI / Complex{double(b - a), 0.0};
      CHECK(std::abs(mab - expected) < 1e-10);
    }
  }
}

TEST_CASE("bounded finite differences stay accurate at the interval ends") {
  const auto iv = make_interval(-1.0, 1.0);
  auto cubic = [](double q) { return Complex{q * q * q, 0.0}; };
  for (double q : {-1.0, -0.999, 0.0, 0.999, 1.0}) {
    CHECK(std::abs(fd_first_bounded(cubic, q, iv, 1e-3) -
                   Complex{3.0 * q * q, 0.0}) < 1e-8);
    CHECK(std::abs(fd_second_bounded(cubic, q, iv, 1e-3) -
                   Complex{6.0 * q, 0.0}) < 1e-6);
  }
}

TEST_CASE("commutator audit distinguishes pass, fail and domain violations") {
  const Model m = canonpair::make_circle_model(0.25, 20, 16);
  const SmoothFunction clean = canonpair::sample_dc(m, 11, 1).front();
  const SmoothFunction target = scaled(kI, clean);

  SECTION("clean core sample with the right target passes") {
    const auto audit = commutator_audit(m.op_A, m.op_B, clean, target,
                                        *m.grid, 1e-9);
    CHECK(audit.verdict == "pass");
    CHECK(audit.pointwise_residual < 1e-9);
    CHECK(audit.defect_Af_in_domB.aggregate < canonpair::kDefectClean);
  }

  SECTION("eigenfunction trips the domain violation with the known defect") {
    const SmoothFunction phi = m.eigenfunction(2);
    const auto audit = commutator_audit(m.op_A, m.op_B, phi, scaled(kI, phi),
                                        *m.grid, 1e-9);
    CHECK(audit.verdict == "domain-violation");
    // twist defect of t*phi_n is 2pi |phi_n(2pi)| = sqrt(2pi)
    CHECK(audit.defect_Af_in_domB.aggregate ==
          Approx(2.5066282746310002).margin(1e-9));
  }

  SECTION("wrong target on a clean sample fails without domain issues") {
    const auto audit = commutator_audit(m.op_A, m.op_B, clean,
                                        scaled(2.0 * kI, clean), *m.grid,
                                        1e-9);
    CHECK(audit.verdict == "fail");
    CHECK(audit.defect_Af_in_domB.aggregate < canonpair::kDefectClean);
  }

  SECTION("defect between the clean and violation thresholds is inconclusive") {
    const SmoothFunction mixed =
        added(clean, scaled(Complex{1e-5, 0.0}, m.eigenfunction(2)));
    const auto audit = commutator_audit(m.op_A, m.op_B, mixed,
                                        scaled(kI, mixed), *m.grid, 1e-9);
    CHECK(audit.verdict == "inconclusive");

    // tightening the violation threshold flips the verdict
    const auto strict = commutator_audit(m.op_A, m.op_B, mixed,
                                         scaled(kI, mixed), *m.grid, 1e-9,
                                         1e-6, canonpair::kDefectClean);
    CHECK(strict.verdict == "domain-violation");
  }
}
