#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "stieltjes/derivator.hpp"
#include "stieltjes/integral.hpp"

namespace stieltjes {

enum class MonomialRoute { Auto, ContinuousClosedForm, JumpClosedForm, Decomposition, Oracle };

struct MonomialRequest {
  const Derivator* g = nullptr;
  double center = 0;
  int degree = 0;
  MonomialRoute route = MonomialRoute::Auto;
};

// Value of the degree-n iterated Stieltjes integral centered at req.center.
// Auto picks the continuous closed form when g has no jumps, the jump closed
// form when the continuous part is flat, and the binomial decomposition of
// continuous and jump parts otherwise.
double monomial(const MonomialRequest& req, double x);

// All degrees 0..max_degree at once (same routing as monomial()).
std::vector<double> monomial_values(const Derivator& g, double center, double x, int max_degree);

// n! * e_n over the jump sizes in [x0, x): the right-side closed form.
double jump_monomial_right(const std::vector<double>& sizes, int n);
// (-1)^n * n! * h_n over the jump sizes in [x, x0): the left-side closed form.
double jump_monomial_left(const std::vector<double>& sizes, int n);

// Evaluates the binomial change-of-center identity: the degree-n monomial
// centered at r expanded through monomials centered at s.
double change_center(const Derivator& g, double r, double s, int n, double x);

// (lower, upper): for x >= x0 bounds on the value itself; for x < x0 bounds
// on its absolute value.
std::pair<double, double> monomial_bounds(const Derivator& g, double x0, int n, double x);

// Independent cross-check: evaluates the monomial purely through the
// recursive integral definition (module integral), no closed forms.
double monomial_oracle(const Derivator& g, double x0, int n, double x, const Quadrature& q = {});

// Collocation tableau behind monomial_oracle, reusable across degrees and
// evaluation points. Each degree is stored per piece (between representation
// breakpoints) at Chebyshev-Lobatto nodes; node values come from integrate()
// applied to the interpolant one degree below.
class MonomialOracle {
 public:
  MonomialOracle(const Derivator& g, double x0, int max_degree, double lo, double hi,
                 Quadrature q = {});
  double eval(int n, double x) const;
  int max_degree() const { return max_degree_; }

 private:
  struct Level;
  const Derivator& g_;
  double x0_;
  int max_degree_;
  std::vector<std::shared_ptr<const Level>> levels_;
};

struct HFunctionRequest {
  const Derivator* g = nullptr;
  int j = 1;
  int k = 0;
  double center = 0;
};

// h_{j,k}(x): the iterated integrals measuring how far the degree-n monomial
// sits from the n-th power of the first one. Base case integrand is the
// degree-k monomial times the jump-size function.
double h_function(const HFunctionRequest& req, double x, const Quadrature& q = {});

// Table of h_{j,k} for fixed k and j = 1..j_max over a span, for suite use.
class HFunctionTable {
 public:
  HFunctionTable(const Derivator& g, double center, int k, int j_max, double lo, double hi,
                 Quadrature q = {});
  double eval(int j, double x) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

}  // namespace stieltjes
