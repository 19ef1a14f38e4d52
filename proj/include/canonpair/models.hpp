#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "canonpair/operators.hpp"
#include "canonpair/rng.hpp"

namespace canonpair {

// Default working resolution and twist. The panel count is chosen so the
// |n| <= 32 eigenbasis Gram matrices are identity to < 1e-12 at defaults.
inline constexpr int kDefaultPanels = 20;
inline constexpr int kDefaultOrder = 16;
inline constexpr double kDefaultGamma = 0.25;
inline constexpr int kDefaultSpectralN = 64;

struct EigenPair {
  SmoothFunction fn;
  double eigenvalue = 0.0;
  std::string operator_tag;  // "H" or "p"
};

// One catalog entry: a Hilbert space interval, a canonical pair ordered so
// that (A B - B A) f = i f holds on the dense core "dc", and the membership
// rules for the subspaces the audits care about.
struct Model {
  std::string id;  // "circle" | "box" | "counterexample"
  Interval interval;
  double gamma = 0.0;  // circle twist parameter, unused by the other models
  GridPtr grid;
  LinearOperatorSpec op_A;
  LinearOperatorSpec op_B;
  bool has_eigenbasis = false;
  std::function<SmoothFunction(int)> eigenfunction;  // of the generator
  std::function<double(int)> eigenvalue;             // generator eigenvalue
  // Analytic invariance-parameter predicate (circle only): true iff shifting
  // by beta maps the generator domain's off-core part into itself.
  std::function<bool(double)> bi_analytic;
};

// Interval [0, 2pi]; pair (T, H) with T = multiplication by t and
// H = -i d/dt on the twisted domain f(0) = e^{-i 2 pi gamma} f(2pi).
Model make_circle_model(double gamma, int panels, int order);

// Interval [-1, 1]; pair (H, T) with H = -(1/2) d^2/dq^2 on the periodic
// domain and T the sign-split arrival-time kernel.
Model make_box_model(int panels, int order);

// Interval [0, 1]; pair (Q, P) with P the bounded rank-style operator whose
// commutator with Q equals i exactly on a one-dimensional closed subspace.
Model make_counterexample_model(int panels, int order);

// Dispatch by id; gamma only affects the circle model.
Model make_model(const std::string& id, double gamma, int panels, int order);

std::vector<std::string> model_ids();

// --- eigenbases ---------------------------------------------------------------

// (2pi)^{-1/2} e^{i (n + gamma) t}; eigenvalue n + gamma, tag "H".
EigenPair circle_eigenfunction(int n, double gamma);
double circle_eigenvalue(int n, double gamma);

// 2^{-1/2} e^{i n pi q}; tag "p" -> eigenvalue n pi, tag "H" -> (n pi)^2 / 2.
EigenPair box_eigenfunction(int n, const std::string& tag);
EigenPair box_eigenfunction(int n);  // tag "H"
double box_momentum_eigenvalue(int n);
double box_energy(int n);

// Normalized spanning vector of the counterexample core,
// (i q^2 - 2 sqrt5/15 - i/3) / sqrt(8/45).
SmoothFunction counterexample_core_function();

// --- membership ---------------------------------------------------------------

// Named defect components of f against a subspace of the model:
//   "dc"   dense core (endpoint values, moments, span residual as applicable)
//   "domH" generator domain (twist or periodicity conditions)
//   "all"  whole space (no conditions)
// Unknown subspace ids throw.
MembershipDefect membership_defect(const Model& m, const std::string& subspace,
                                   const SmoothFunction& f);

// --- deterministic samplers -----------------------------------------------------

// Random elements of the dense core (trig polynomials with the core
// constraints projected out, or core multiples for the counterexample).
// Every returned function is re-checked; a dirty draw is a logic error.
std::vector<SmoothFunction> sample_dc(const Model& m, std::uint64_t seed,
                                      int count);

// Random elements of the circle generator domain that are NOT in the dense
// core (nonzero endpoint value, twist intact). Other models are out of scope
// for this sampler and throw.
std::vector<SmoothFunction> sample_domain_minus_dc(const Model& m,
                                                   std::uint64_t seed,
                                                   int count);

// --- classical side of the box pair ---------------------------------------------

// First passage time of a free particle through the origin, -q/p.
double classical_arrival_time(double q, double p);

// {H, T} at (q, p) for H = p^2/2, T = -q/p, all four partials by central
// differences of step h. Conjugacy of the classical pair means the value 1.
double classical_poisson_bracket(double q, double p, double h = 1e-5);

}  // namespace canonpair
