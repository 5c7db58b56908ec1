#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "stieltjes/derivator.hpp"
#include "stieltjes/integral.hpp"
#include "stieltjes/scalar.hpp"

namespace stieltjes {

// Maximal interval of certified absolute convergence: the whole line, or an
// open half-line to the right of a left bound.
struct ConvergenceDomain {
  enum class Kind { WholeLine, LeftBounded };
  Kind kind = Kind::WholeLine;
  double left_bound = 0;
  bool certified = false;

  bool contains(double x) const {
    return kind == Kind::WholeLine || x > left_bound;
  }
  static ConvergenceDomain whole_line(bool cert = true) {
    return {Kind::WholeLine, 0, cert};
  }
  static ConvergenceDomain left_bounded(double t, bool cert = true) {
    return {Kind::LeftBounded, t, cert};
  }
};

// Coefficients past the stored prefix: zero, or the exponential pattern
// scale * lambda^n / n!.
template <ScalarField T>
struct TailRule {
  enum class Kind { None, Exp };
  Kind kind = Kind::None;
  T lambda{};
  T scale{};
};

// Series of monomials of g centered at a point: finite stored coefficient
// prefix plus an optional closed-form tail, with an optional growth
// certificate |a_n| <= M^{n+1}/n! validated on the prefix.
template <ScalarField T>
class GSeries {
 public:
  GSeries(std::shared_ptr<const Derivator> g, double center, std::vector<T> coeffs,
          TailRule<T> tail = {}, std::optional<double> growth = {});

  static GSeries exponential(std::shared_ptr<const Derivator> g, double center, T lambda,
                             T scale = T{1});

  const Derivator& derivator() const { return *g_; }
  const std::shared_ptr<const Derivator>& derivator_ptr() const { return g_; }
  double center() const { return center_; }
  const std::vector<T>& prefix() const { return coeffs_; }
  const TailRule<T>& tail() const { return tail_; }
  bool has_growth_cert() const { return growth_.has_value(); }
  double growth_M() const { return *growth_; }

  // a_n including the tail rule; zero past the prefix when the rule is None.
  T coeff(int n) const;
  // Index past which the tail rule takes over.
  int prefix_size() const { return static_cast<int>(coeffs_.size()); }
  bool is_finite_polynomial() const { return tail_.kind == TailRule<T>::Kind::None; }

  std::optional<ConvergenceDomain> validity;

 private:
  std::shared_ptr<const Derivator> g_;
  double center_;
  std::vector<T> coeffs_;
  TailRule<T> tail_;
  std::optional<double> growth_;
};

struct EvalOptions {
  double abs_tol = 1e-10;
  bool allow_uncertified = false;
  int max_terms = 10000;
};

template <ScalarField T>
struct SeriesValue {
  T value{};
  double tail_bound = 0;
  bool certified = false;
};

// Partial sum with a certified remainder when a growth certificate applies;
// falls back to the trailing-small-terms heuristic (certified = false), and
// with allow_uncertified to a plain Cauchy acceptance.
template <ScalarField T>
SeriesValue<T> eval_series(const GSeries<T>& s, double x, const EvalOptions& opt = {});

// Term-wise primitive: b_0 = 0, b_{n+1} = a_n/(n+1).
template <ScalarField T>
GSeries<T> integrate_series(const GSeries<T>& s);

// Term-wise k-th derivative: c_n = a_{n+k} (n+k)!/n!.
template <ScalarField T>
GSeries<T> differentiate_series(const GSeries<T>& s, int k);

// Re-expansion around s with certified truncation of the inner sums.
template <ScalarField T>
GSeries<T> recenter_series(const GSeries<T>& s, double new_center, const EvalOptions& opt = {});

// Recovers a_0..a_{count-1} by numerically g-differentiating the evaluated
// series at its center; requires the coefficient-uniqueness hypotheses.
template <ScalarField T>
std::vector<T> coefficients_from_derivatives(const GSeries<T>& s, double t, int count);

// Smallest growth constant M with |a_n| <= M^{n+1}/n! of the canonical form,
// given that the series is declared absolutely convergent at a jump point
// c < center. Raises BoundViolated when the coefficients are inconsistent
// with any such envelope.
template <ScalarField T>
double left_growth_bound(const GSeries<T>& s, double c);

// Remainder of sum_{n > N} t^n / n!.
double exp_tail_bound(double t, int N);

}  // namespace stieltjes
