#pragma once

#include <map>
#include <string>

#include "canonpair/funcspace.hpp"

namespace canonpair {

// Aggregated distance-from-a-subspace measurement: named scalar components
// plus their maximum. A zero aggregate means every membership condition the
// subspace imposes is numerically satisfied.
struct MembershipDefect {
  std::map<std::string, double> components;
  double aggregate = 0.0;
};

MembershipDefect make_defect(std::map<std::string, double> components);

// Verdict thresholds shared by every audit: an aggregate defect above
// kDefectViolation certifies the function left the operator domain; below
// kDefectClean the membership is treated as exact; in between nothing can be
// concluded at working precision.
inline constexpr double kDefectViolation = 1e-3;
inline constexpr double kDefectClean = 1e-8;

struct LinearOperatorSpec {
  std::string name;       // printable symbol, e.g. "T", "H", "Q", "P"
  std::string domain_id;  // subspace the operator is defined on: "domH" or "all"
  bool hermitian = false;
  bool bounded = false;
  std::function<SmoothFunction(const SmoothFunction&)> action;
  // Membership defect of a function against this operator's domain.
  std::function<MembershipDefect(const SmoothFunction&)> domain_defect;
};

// --- pointwise multiplication operators -----------------------------------

// (t f)(t) on the given interval; derivative callbacks propagate by the
// product rule.
SmoothFunction apply_coordinate_multiplication(const SmoothFunction& f,
                                               Interval interval);

// (e^{-i beta t} f)(t); the exponent sign is the adopted convention, callers
// flip beta to probe the opposite one.
SmoothFunction apply_phase_multiplication(double beta, const SmoothFunction& f);

// --- differential operators ------------------------------------------------

// -i f' (generator of translations; also the momentum on the box interval).
SmoothFunction apply_circle_hamiltonian(const SmoothFunction& f);
SmoothFunction apply_box_momentum(const SmoothFunction& f);

// -(1/2) f''
SmoothFunction apply_box_hamiltonian(const SmoothFunction& f);

// --- unitaries --------------------------------------------------------------

// (V_alpha f)(t) = f(t - alpha) on [0, 2pi], with factor e^{-i 2 pi gamma}
// whenever the argument wraps past the seam; alpha is reduced modulo 2pi
// first and each full wind contributes one wrap factor.
SmoothFunction apply_twisted_translation(double alpha, double gamma,
                                         const SmoothFunction& f);

// --- integral operators ------------------------------------------------------

struct KernelSpec {
  std::string name;
  Interval interval;
  std::function<Complex(double, double)> kernel;  // kernel(q_out, q_in)
  // When set, the integrand has a kink along q_in == q_out and the quadrature
  // is split there (two sub-rules, nodes never on the kink; sgn(0) := 0).
  bool split_at_diagonal = false;
};

// Pointwise-evaluable image of the kernel operator. Each evaluation runs a
// fresh composite Gauss-Legendre rule (per side of the split when
// split_at_diagonal), so the image can be probed anywhere in the interval.
SmoothFunction kernel_image(const KernelSpec& ker, const SmoothFunction& f,
                            int panels_per_side, int order);

// Sampled form: values at every grid node plus the two endpoint values.
GridFunction apply_integral_kernel(const KernelSpec& ker,
                                   const SmoothFunction& f,
                                   const GridPtr& grid);

// The box arrival-time kernel on [-1, 1]:
//   k(q, q') = [(q + q') sgn(q - q') - (q^2 - q'^2)] / (4i)
KernelSpec box_time_kernel();

// The rank-style momentum kernel of the counterexample pair on [0, 1]:
//   k(q, q') = (3 sqrt5 / 2) (q + q')
KernelSpec counterexample_momentum_kernel();

// Image of the box arrival-time operator with closed-form derivatives
// attached. Differentiating the split kernel in q gives, with
// A(q) = int_{-1}^{q} f - int_q^{1} f and m0 = int f:
//   (Tf)'(q)  = (A(q) + 4 q f(q) - 2 q m0) / (4i)
//   (Tf)''(q) = (6 f(q) + 4 q f'(q) - 2 m0) / (4i)
// (the sgn kink contributes the local f terms; the quadratic part only m0).
// f' comes from f.d1 when present, otherwise from bounded central differences.
SmoothFunction box_time_image(const SmoothFunction& f, int panels_per_side,
                              int order);

// Truncated inverse momentum on the box interval:
//   (Pinv_N f)(q) = (1/pi) sum_{0 < |n| <= n_max} n^{-1} (phi_n, f) phi_n(q)
// with phi_n = 2^{-1/2} e^{i n pi q}; coefficients by grid quadrature. The
// output is a trigonometric polynomial and carries analytic d1/d2.
SmoothFunction inverse_momentum_fn(const SmoothFunction& f, int n_max,
                                   const QuadratureGrid& grid);
GridFunction apply_inverse_momentum(const SmoothFunction& f, int n_max,
                                    const GridPtr& grid);

// --- derivative bookkeeping for integral-operator outputs -------------------

// Finite differences that never leave [dom.a, dom.b]: 5-point centered
// stencils of step `step` in the interior, step shrunk to half the boundary
// distance inside the edge band, one-sided 5-point stencils (with one
// Richardson level) exactly at the endpoints.
Complex fd_first_bounded(const std::function<Complex(double)>& eval, double t,
                         Interval dom, double step);
Complex fd_second_bounded(const std::function<Complex(double)>& eval, double t,
                          Interval dom, double step);

// FD-based derivative of an integral-operator image (images carry no analytic
// callbacks unless a closed form is known).
SmoothFunction differentiate_image(const SmoothFunction& g, Interval dom,
                                   int order, double step = 1e-3);

// Guard for closed-form image derivatives: relative L2 distance between g.d2
// and the finite-difference route over the uniform interior (full-step
// centered stencils only). Both routes must agree before a small commutator
// residual is trusted.
double dual_route_second_derivative_agreement(const SmoothFunction& g,
                                              Interval dom,
                                              double step = 1e-3);

// --- commutator audit --------------------------------------------------------

struct CommutatorAuditResult {
  // ||A(Bf) - B(Af) - target|| / ||f||
  double pointwise_residual = 0.0;
  MembershipDefect defect_Bf_in_domA;
  MembershipDefect defect_Af_in_domB;
  std::string verdict;  // pass | fail | domain-violation | inconclusive
};

// Domain-aware commutator check: apply B then A and vice versa, measure how
// far the intermediates leave the other operator's domain, and compare the
// commutator against `target` in relative L2. A defect above the violation
// threshold forces verdict domain-violation regardless of how small the
// pointwise residual is; that is the whole point of the audit.
CommutatorAuditResult commutator_audit(
    const LinearOperatorSpec& A, const LinearOperatorSpec& B,
    const SmoothFunction& f, const SmoothFunction& target,
    const QuadratureGrid& grid, double residual_tol,
    double violation_threshold = kDefectViolation,
    double clean_threshold = kDefectClean);

// <basis(m), op basis(n)> on the grid.
Complex matrix_element(const LinearOperatorSpec& op, int m, int n,
                       const std::function<SmoothFunction(int)>& basis,
                       const QuadratureGrid& grid);

}  // namespace canonpair
