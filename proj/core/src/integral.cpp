#include "stieltjes/integral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "stieltjes/errors.hpp"

namespace stieltjes {

double measure_interval(const Derivator& g, double a, double b) {
  g.check_in_window(a);
  g.check_in_window(b);
  if (!(a <= b)) throw ValidationError("measure_interval: requires a <= b");
  return g.eval(b) - g.eval(a);
}

namespace {

// Gauss 7 / Kronrod 15 pair (QUADPACK dqk15 constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <ScalarField T>
struct GkResult {
  T integral{};
  double error = 0;
};

template <ScalarField T>
GkResult<T> gk15(const std::function<T(double)>& f, double u, double v) {
  const double c = 0.5 * (u + v);
  const double h = 0.5 * (v - u);
  const T fc = f(c);
  T resg = fc * kWg[3];
  T resk = fc * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const T fsum = f(c - h * kXgk[j]) + f(c + h * kXgk[j]);
    resk += kWgk[j] * fsum;
    if (j % 2 == 1) resg += kWg[j / 2] * fsum;
  }
  GkResult<T> r;
  r.integral = resk * h;
  r.error = abs_value((resk - resg) * h);
  return r;
}

template <ScalarField T>
T adaptive(const std::function<T(double)>& f, double u, double v, double tol, int depth,
           int max_depth) {
  GkResult<T> r = gk15<T>(f, u, v);
  // Accept when the estimate meets the budget or sits at the roundoff floor.
  if (r.error <= tol || r.error <= 4e-14 * (1 + abs_value(r.integral))) return r.integral;
  if (depth >= max_depth)
    throw ToleranceNotMet("integrate: refinement budget exhausted on [" + std::to_string(u) +
                          ", " + std::to_string(v) + "]");
  const double mid = 0.5 * (u + v);
  return adaptive<T>(f, u, mid, 0.5 * tol, depth + 1, max_depth) +
         adaptive<T>(f, mid, v, 0.5 * tol, depth + 1, max_depth);
}

template <ScalarField T>
double estimate_bound(const std::function<T(double)>& f, double a, double b) {
  double m = 0;
  const int n = 48;
  for (int i = 0; i <= n; ++i) {
    double x = a + (b - a) * i / n;
    m = std::max(m, abs_value(f(x)));
  }
  return m;
}

}  // namespace

template <ScalarField T>
T integrate(const Derivator& g, const Integrand<T>& f, double a, double b,
            const Quadrature& q) {
  g.check_in_window(a);
  g.check_in_window(b);
  if (a == b) return T{};
  if (a > b) {
    if (!q.signed_orientation)
      throw ValidationError("integrate: reversed endpoints with signed orientation disabled");
    return -integrate<T>(g, f, b, a, q);
  }

  double bound = f.bound;
  if (!std::isfinite(bound)) bound = estimate_bound<T>(f.fn, a, b);

  // Jump part: exact sum over the discontinuity set. The generator remainder
  // must stay within half the budget once weighted by the integrand bound.
  double neglected = 0;
  std::vector<Jump> jumps = g.jumps_in(a, b, 1e300, &neglected);
  if (neglected * std::max(1.0, bound) > q.abs_tol / 2)
    throw ToleranceNotMet("integrate: generator remainder exceeds the error budget");
  T jump_part{};
  for (const Jump& j : jumps) jump_part += f.fn(j.location) * j.size;

  // Continuous part: each affine piece of g^C carries density `slope` against
  // Lebesgue measure; integrate f per piece, splitting at jump locations so a
  // regulated f stays smooth inside every quadrature interval.
  std::vector<double> cuts{a, b};
  for (const Segment& s : g.segments()) {
    if (s.from > a && s.from < b) cuts.push_back(s.from);
    if (s.to > a && s.to < b) cuts.push_back(s.to);
  }
  for (const Jump& j : jumps)
    if (j.location > a && j.location < b) cuts.push_back(j.location);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  struct Piece {
    double u, v, slope;
  };
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double u = cuts[i], v = cuts[i + 1];
    const double mid = 0.5 * (u + v);
    double slope = 0;
    for (const Segment& s : g.segments()) {
      if (mid >= s.from && mid <= s.to) {
        slope = s.slope;
        break;
      }
    }
    if (slope > 0) pieces.push_back({u, v, slope});
  }

  T continuous_part{};
  if (!pieces.empty()) {
    const double tol_each = (q.abs_tol / 2) / static_cast<double>(pieces.size());
    for (const Piece& p : pieces) {
      T piece = adaptive<T>(f.fn, p.u, p.v, tol_each / p.slope, 0, q.max_refinements);
      continuous_part += piece * p.slope;
    }
  }
  return jump_part + continuous_part;
}

template double integrate<double>(const Derivator&, const Integrand<double>&, double, double,
                                  const Quadrature&);
template std::complex<double> integrate<std::complex<double>>(
    const Derivator&, const Integrand<std::complex<double>>&, double, double, const Quadrature&);

namespace {

// Limit of q(h) as h -> 0+ by polynomial extrapolation in h^order. Entries may
// be missing (empty optional) when a quotient is not defined at that step.
template <ScalarField T, class Q>
T limit_by_extrapolation(Q&& quotient, double h0, double shrink, int max_steps, double tol,
                         int order, const char* what) {
  std::vector<double> ts;
  std::vector<std::vector<T>> tab;
  bool have_prev = false;
  T prev{};
  double h = h0;
  for (int k = 0; k < max_steps; ++k, h *= shrink) {
    std::optional<T> qv = quotient(h);
    if (!qv || !std::isfinite(abs_value(*qv))) continue;
    double t = order == 2 ? h * h : h;
    ts.push_back(t);
    std::vector<T> row{*qv};
    const std::size_t i = ts.size() - 1;
    const std::size_t max_col = std::min<std::size_t>(i, 6);
    for (std::size_t j = 1; j <= max_col; ++j) {
      const T& below = row[j - 1];
      const T& left = tab[i - 1][j - 1];
      const double ti = ts[i], tij = ts[i - j];
      row.push_back((ti * left - tij * below) / (ti - tij));
    }
    tab.push_back(row);
    const T diag = row.back();
    if (have_prev && abs_value(diag - prev) <= tol * (1 + abs_value(diag))) return diag;
    prev = diag;
    have_prev = true;
  }
  throw LimitNotConverged(std::string(what) + ": quotient sequence failed the Cauchy test");
}

double auto_step(const Derivator& g, double x, int side) {
  // Keep the sampling inside the smooth region next to x and inside the window.
  double h = 1e-3 * g.window_span();
  double feat = g.nearest_feature(x, side);
  if (feat > 0) h = std::min(h, 0.45 * feat);
  double room = side > 0 ? g.window_hi() - x : x - g.window_lo();
  h = std::min(h, 0.9 * room);
  return h;
}

}  // namespace

template <ScalarField T>
T right_limit_of(const Derivator& g, const std::function<T(double)>& f, double x,
                 const DerivSchedule& sched) {
  g.check_in_window(x);
  double h0 = sched.initial > 0 ? sched.initial : auto_step(g, x, +1);
  if (!(h0 > 0)) throw DerivativeUndefined("right limit: no room to the right of x");
  return limit_by_extrapolation<T>(
      [&](double h) -> std::optional<T> {
        double y = x + h;
        if (y > g.window_hi()) return std::nullopt;
        return f(y);
      },
      h0, sched.shrink, sched.max_steps, sched.limit_tol, 1, "right limit");
}

template double right_limit_of<double>(const Derivator&, const std::function<double(double)>&,
                                       double, const DerivSchedule&);
template std::complex<double> right_limit_of<std::complex<double>>(
    const Derivator&, const std::function<std::complex<double>(double)>&, double,
    const DerivSchedule&);

namespace {

template <ScalarField T>
T one_sided_quotient(const Derivator& g, const std::function<T(double)>& f, double x, int side,
                     const DerivSchedule& sched) {
  double h0 = sched.initial > 0 ? sched.initial : auto_step(g, x, side);
  if (!(h0 > 0))
    throw DerivativeUndefined("g-derivative: no room for a one-sided quotient at x");
  const double gx = g.eval(x);
  const T fx = f(x);
  return limit_by_extrapolation<T>(
      [&](double h) -> std::optional<T> {
        double y = x + side * h;
        if (y < g.window_lo() || y > g.window_hi()) return std::nullopt;
        double dg = g.eval(y) - gx;
        if (dg == 0) return std::nullopt;
        return (f(y) - fx) / dg;
      },
      h0, sched.shrink, sched.max_steps, sched.cauchy_tol, 1, "g-derivative");
}

template <ScalarField T>
T symmetric_quotient(const Derivator& g, const std::function<T(double)>& f, double x,
                     const DerivSchedule& sched) {
  double h0 = sched.initial > 0
                  ? sched.initial
                  : std::min(auto_step(g, x, +1), auto_step(g, x, -1));
  if (!(h0 > 0)) throw DerivativeUndefined("g-derivative: x has no two-sided neighborhood");
  return limit_by_extrapolation<T>(
      [&](double h) -> std::optional<T> {
        double yl = x - h, yr = x + h;
        if (yl < g.window_lo() || yr > g.window_hi()) return std::nullopt;
        double dg = g.eval(yr) - g.eval(yl);
        if (dg == 0) return std::nullopt;
        return (f(yr) - f(yl)) / dg;
      },
      h0, sched.shrink, sched.max_steps, sched.cauchy_tol, 2, "g-derivative");
}

}  // namespace

bool derivative_defined(const Derivator& g, double x) {
  if (!(x >= g.window_lo() && x <= g.window_hi())) return false;
  PointClass pc = g.classify(x);
  switch (pc.tag) {
    case PointTag::Jump:
    case PointTag::RightEndpoint:
      return x < g.window_hi();
    case PointTag::ConstantInterior:
      return pc.component_end < g.window_hi();
    case PointTag::LeftEndpoint:
      return x > g.window_lo();
    case PointTag::Regular:
      return x > g.window_lo() && x < g.window_hi();
  }
  return false;
}

template <ScalarField T>
T g_derivative(const Derivator& g, const std::function<T(double)>& f, double x,
               const DerivSchedule& sched) {
  g.check_in_window(x);
  PointClass pc = g.classify(x);
  switch (pc.tag) {
    case PointTag::Jump: {
      T fplus = right_limit_of<T>(g, f, x, sched);
      return (fplus - f(x)) / g.delta(x);
    }
    case PointTag::ConstantInterior: {
      // The derivative convention routes through the right endpoint of the
      // constancy component.
      double b = pc.component_end;
      if (!(b < g.window_hi()))
        throw DerivativeUndefined(
            "g-derivative: constancy component has no right endpoint inside the window");
      if (g.delta(b) > 0) {
        T fplus = right_limit_of<T>(g, f, b, sched);
        return (fplus - f(b)) / g.delta(b);
      }
      return one_sided_quotient<T>(g, f, b, +1, sched);
    }
    case PointTag::RightEndpoint:
      return one_sided_quotient<T>(g, f, x, +1, sched);
    case PointTag::LeftEndpoint:
      return one_sided_quotient<T>(g, f, x, -1, sched);
    case PointTag::Regular:
      return symmetric_quotient<T>(g, f, x, sched);
  }
  throw DerivativeUndefined("g-derivative: unreachable classification");
}

template double g_derivative<double>(const Derivator&, const std::function<double(double)>&,
                                     double, const DerivSchedule&);
template std::complex<double> g_derivative<std::complex<double>>(
    const Derivator&, const std::function<std::complex<double>(double)>&, double,
    const DerivSchedule&);

}  // namespace stieltjes
