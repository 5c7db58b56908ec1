#pragma once

#include <functional>
#include <limits>

#include "stieltjes/derivator.hpp"
#include "stieltjes/scalar.hpp"

namespace stieltjes {

enum class Regularity { GContinuous, LeftRegulated };

// Bounded integrand for the Lebesgue-Stieltjes integral. `bound` is a value
// >= sup|f| on the integration interval; leave it NaN to have it estimated by
// grid sampling.
template <ScalarField T>
struct Integrand {
  std::function<T(double)> fn;
  Regularity regularity = Regularity::GContinuous;
  double bound = std::numeric_limits<double>::quiet_NaN();
};

struct Quadrature {
  double abs_tol = 1e-10;
  int max_refinements = 40;
  bool signed_orientation = true;  // integrate(a, b) == -integrate(b, a)
};

// mu_g([a, b)) = g(b) - g(a); requires a <= b.
double measure_interval(const Derivator& g, double a, double b);

// Integral of f over [a, b) against mu_g, split into the jump sum over the
// discontinuity set and quadrature against the continuous part. For a > b the
// signed convention -integral over [b, a) applies.
template <ScalarField T>
T integrate(const Derivator& g, const Integrand<T>& f, double a, double b,
            const Quadrature& q = {});

template <ScalarField T = double, class F>
T integrate_fn(const Derivator& g, F&& fn, double a, double b, const Quadrature& q = {}) {
  Integrand<T> wrapped;
  wrapped.fn = std::forward<F>(fn);
  return integrate<T>(g, wrapped, a, b, q);
}

// Difference-quotient schedule for the numerical g-derivative: step sizes
// start at `initial` (0 = auto from the window span and nearby features) and
// shrink geometrically; quotient sequences are Richardson-extrapolated and
// accepted once successive estimates agree to cauchy_tol.
struct DerivSchedule {
  double initial = 0;
  double shrink = 0.5;
  int max_steps = 40;
  double cauchy_tol = 1e-6;
  double limit_tol = 1e-9;  // acceptance for one-sided limit values f(x+)
};

// Stieltjes derivative of f at x. Dispatches on the classification of x:
// jump quotient at discontinuities, two-sided quotient at regular points,
// one-sided quotients at constancy endpoints, and the quotient at the
// component's right endpoint for constancy interiors.
template <ScalarField T>
T g_derivative(const Derivator& g, const std::function<T(double)>& f, double x,
               const DerivSchedule& sched = {});

// Right limit f(x+) estimated by extrapolating evaluations at x + h.
template <ScalarField T>
T right_limit_of(const Derivator& g, const std::function<T(double)>& f, double x,
                 const DerivSchedule& sched = {});

// Whether the derivative convention yields a formula at x (inside the window).
bool derivative_defined(const Derivator& g, double x);

}  // namespace stieltjes
