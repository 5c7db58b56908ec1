#include "stieltjes/monomials.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "stieltjes/errors.hpp"

namespace stieltjes {

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// f[k] = k! * e_k(sizes), one DP pass per element. Carrying the factorial
// inside the recurrence keeps the values at sane magnitudes.
std::vector<double> factorial_elementary(const std::vector<double>& sizes, int max_n) {
  std::vector<double> f(max_n + 1, 0.0);
  f[0] = 1.0;
  for (double z : sizes) {
    int top = std::min<int>(max_n, static_cast<int>(sizes.size()));
    for (int k = top; k >= 1; --k) f[k] += k * z * f[k - 1];
  }
  return f;
}

// F[k] = k! * h_k(sizes) for the complete homogeneous polynomials.
std::vector<double> factorial_complete_homogeneous(const std::vector<double>& sizes, int max_n) {
  std::vector<double> F(max_n + 1, 0.0);
  F[0] = 1.0;
  for (double z : sizes)
    for (int k = 1; k <= max_n; ++k) F[k] += k * z * F[k - 1];
  return F;
}

std::vector<double> sizes_between(const Derivator& g, double lo, double hi) {
  // Materialize essentially all generator mass; the floor is far below any
  // tolerance used by callers.
  double neglected = 0;
  std::vector<Jump> jumps = g.jumps_in(lo, hi, 1e300, &neglected);
  std::vector<double> sizes;
  sizes.reserve(jumps.size());
  for (const Jump& j : jumps) sizes.push_back(j.size);
  return sizes;
}

}  // namespace

double jump_monomial_right(const std::vector<double>& sizes, int n) {
  if (n < 0) throw ValidationError("jump_monomial_right: degree must be >= 0");
  if (n == 0) return 1.0;
  if (static_cast<std::size_t>(n) > sizes.size()) return 0.0;
  return factorial_elementary(sizes, n)[n];
}

double jump_monomial_left(const std::vector<double>& sizes, int n) {
  if (n < 0) throw ValidationError("jump_monomial_left: degree must be >= 0");
  if (n == 0) return 1.0;
  double v = factorial_complete_homogeneous(sizes, n)[n];
  return (n % 2 == 0) ? v : -v;
}

namespace {

enum class ResolvedRoute { Continuous, JumpOnly, Decomposition };

ResolvedRoute resolve_route(const Derivator& g, MonomialRoute route) {
  switch (route) {
    case MonomialRoute::ContinuousClosedForm:
      if (g.has_jumps())
        throw RouteUnavailable("monomial: continuous closed form needs a jump-free derivator");
      return ResolvedRoute::Continuous;
    case MonomialRoute::JumpClosedForm:
      if (!g.continuous_is_flat())
        throw RouteUnavailable("monomial: jump closed form needs a flat continuous part");
      return ResolvedRoute::JumpOnly;
    case MonomialRoute::Decomposition:
      return ResolvedRoute::Decomposition;
    case MonomialRoute::Auto:
      if (!g.has_jumps()) return ResolvedRoute::Continuous;
      if (g.continuous_is_flat()) return ResolvedRoute::JumpOnly;
      return ResolvedRoute::Decomposition;
    case MonomialRoute::Oracle:
      break;
  }
  throw RouteUnavailable("monomial: oracle route is reached through monomial_oracle()");
}

}  // namespace

std::vector<double> monomial_values(const Derivator& g, double center, double x, int max_degree) {
  if (max_degree < 0) throw ValidationError("monomial_values: degree must be >= 0");
  g.check_in_window(center);
  g.check_in_window(x);
  ResolvedRoute route = resolve_route(g, MonomialRoute::Auto);

  std::vector<double> out(max_degree + 1, 0.0);
  out[0] = 1.0;
  if (max_degree == 0) return out;

  if (route == ResolvedRoute::Continuous) {
    const double a = g.increment(center, x);
    for (int n = 1; n <= max_degree; ++n) out[n] = out[n - 1] * a;
    return out;
  }

  const bool right = x >= center;
  std::vector<double> sizes =
      right ? sizes_between(g, center, x) : sizes_between(g, x, center);
  std::vector<double> jump_part =
      right ? factorial_elementary(sizes, max_degree)
            : factorial_complete_homogeneous(sizes, max_degree);
  if (!right)
    for (int n = 1; n <= max_degree; n += 2) jump_part[n] = -jump_part[n];

  if (route == ResolvedRoute::JumpOnly) return jump_part;

  // Binomial decomposition through continuous and jump parts; every addend
  // shares the sign (-1)^n on the left of the center, so the sum is stable.
  const double a = g.continuous_increment(center, x);
  std::vector<double> apow(max_degree + 1, 1.0);
  for (int k = 1; k <= max_degree; ++k) apow[k] = apow[k - 1] * a;
  for (int n = 1; n <= max_degree; ++n) {
    double acc = 0;
    for (int k = 0; k <= n; ++k) acc += binomial(n, k) * apow[k] * jump_part[n - k];
    out[n] = acc;
  }
  return out;
}

double monomial(const MonomialRequest& req, double x) {
  if (!req.g) throw ValidationError("monomial: request carries no derivator");
  const Derivator& g = *req.g;
  if (req.degree < 0) throw ValidationError("monomial: degree must be >= 0");
  g.check_in_window(req.center);
  g.check_in_window(x);
  if (req.route == MonomialRoute::Oracle) return monomial_oracle(g, req.center, req.degree, x);
  if (req.degree == 0) return 1.0;

  ResolvedRoute route = resolve_route(g, req.route);
  const int n = req.degree;
  switch (route) {
    case ResolvedRoute::Continuous: {
      return std::pow(g.increment(req.center, x), n);
    }
    case ResolvedRoute::JumpOnly: {
      if (x >= req.center) return jump_monomial_right(sizes_between(g, req.center, x), n);
      return jump_monomial_left(sizes_between(g, x, req.center), n);
    }
    case ResolvedRoute::Decomposition: {
      return monomial_values(g, req.center, x, n)[n];
    }
  }
  throw RouteUnavailable("monomial: unreachable route");
}

double change_center(const Derivator& g, double r, double s, int n, double x) {
  if (n < 0) throw ValidationError("change_center: degree must be >= 0");
  std::vector<double> at_s = monomial_values(g, r, s, n);       // g_{r,k}(s)
  std::vector<double> from_s = monomial_values(g, s, x, n);     // g_{s,n-k}(x)
  double acc = 0;
  for (int k = 0; k <= n; ++k) acc += binomial(n, k) * at_s[k] * from_s[n - k];
  return acc;
}

std::pair<double, double> monomial_bounds(const Derivator& g, double x0, int n, double x) {
  if (n < 0) throw ValidationError("monomial_bounds: degree must be >= 0");
  if (n == 0) return {1.0, 1.0};
  const double g1 = g.increment(x0, x);
  if (x >= x0) {
    auto [gc, gb] = g.split();
    double cpart = std::pow(gc.increment(x0, x), n);
    double bpart = jump_monomial_right(sizes_between(g, x0, x), n);
    return {std::max(cpart, bpart), std::pow(g1, n)};
  }
  double base = std::pow(std::abs(g1), n);
  double fact = 1;
  for (int i = 2; i <= n; ++i) fact *= i;
  return {base, fact * base};
}

// ---------------------------------------------------------------------------
// Collocation oracle

namespace {

std::vector<double> lobatto_nodes(int nn) {
  std::vector<double> t(nn);
  for (int j = 0; j < nn; ++j) t[j] = -std::cos(std::numbers::pi * j / (nn - 1));
  return t;
}

// Barycentric weights for Chebyshev-Lobatto nodes: (-1)^j, halved at the ends.
std::vector<double> lobatto_weights(int nn) {
  std::vector<double> w(nn);
  for (int j = 0; j < nn; ++j) w[j] = (j % 2 == 0) ? 1.0 : -1.0;
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

struct PiecewisePoly {
  // Piece i covers (lo[i], hi[i]]; values are at Lobatto nodes mapped onto it.
  std::vector<double> lo, hi;
  std::vector<std::vector<double>> values;
  std::vector<double> nodes, weights;  // reference nodes/weights on [-1, 1]

  double eval(double x) const {
    std::size_t i = piece_index(x);
    const double mid = 0.5 * (lo[i] + hi[i]);
    const double half = 0.5 * (hi[i] - lo[i]);
    const double t = (x - mid) / half;
    double num = 0, den = 0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      double d = t - nodes[j];
      if (d == 0) return values[i][j];
      double c = weights[j] / d;
      num += c * values[i][j];
      den += c;
    }
    return num / den;
  }

  std::size_t piece_index(double x) const {
    // Piece with lo < x <= hi keeps left-continuity at shared boundaries.
    auto it = std::lower_bound(lo.begin(), lo.end(), x);
    std::size_t i = static_cast<std::size_t>(it - lo.begin());
    if (i > 0) --i;
    if (i + 1 < lo.size() && x > hi[i]) ++i;
    return i;
  }

  double max_abs() const {
    double m = 0;
    for (const auto& vs : values)
      for (double v : vs) m = std::max(m, std::abs(v));
    return m;
  }
};

}  // namespace

struct MonomialOracle::Level {
  PiecewisePoly poly;
};

MonomialOracle::MonomialOracle(const Derivator& g, double x0, int max_degree, double lo,
                               double hi, Quadrature q)
    : g_(g), x0_(x0), max_degree_(max_degree) {
  if (max_degree < 0) throw ValidationError("MonomialOracle: degree must be >= 0");
  g.check_in_window(lo);
  g.check_in_window(hi);
  if (!(lo < hi)) throw ValidationError("MonomialOracle: empty span");
  if (!(x0 >= lo && x0 <= hi)) throw ValidationError("MonomialOracle: center outside span");

  // Piece boundaries: representation breakpoints and jump locations. A jump
  // exactly at `lo` would poison the first piece (its left node holds the
  // right limit), so nudge the span start below it.
  double span_lo = lo;
  while (g.delta(span_lo) > 0 && span_lo > g.window_lo())
    span_lo = std::max(g.window_lo(), span_lo - 1e-3 * (hi - lo));
  std::vector<double> cuts{span_lo, hi};
  if (x0 > span_lo && x0 < hi) cuts.push_back(x0);
  for (const Segment& s : g.segments()) {
    if (s.from > span_lo && s.from < hi) cuts.push_back(s.from);
    if (s.to > span_lo && s.to < hi) cuts.push_back(s.to);
  }
  double neglected = 0;
  for (const Jump& j : g.jumps_in(span_lo, hi, 1e300, &neglected))
    if (j.location > span_lo && j.location < hi) cuts.push_back(j.location);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const int nn = std::max(8, max_degree + 3);
  PiecewisePoly base;
  base.nodes = lobatto_nodes(nn);
  base.weights = lobatto_weights(nn);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    base.lo.push_back(cuts[i]);
    base.hi.push_back(cuts[i + 1]);
    base.values.emplace_back(nn, 1.0);  // degree 0 is identically 1
  }

  levels_.resize(max_degree + 1);
  levels_[0] = std::make_shared<Level>(Level{base});

  for (int k = 1; k <= max_degree; ++k) {
    const PiecewisePoly& prev = levels_[k - 1]->poly;
    PiecewisePoly cur = base;
    Quadrature ql = q;
    ql.abs_tol = q.abs_tol * std::max(1.0, prev.max_abs());
    Integrand<double> f;
    f.fn = [&prev](double s) { return prev.eval(s); };
    f.bound = prev.max_abs();
    for (std::size_t i = 0; i < cur.lo.size(); ++i) {
      const double mid = 0.5 * (cur.lo[i] + cur.hi[i]);
      const double half = 0.5 * (cur.hi[i] - cur.lo[i]);
      for (int jn = 0; jn < nn; ++jn) {
        const double y = (jn == 0) ? cur.lo[i] : (jn == nn - 1 ? cur.hi[i]
                                                               : mid + half * base.nodes[jn]);
        double v = k * integrate<double>(g, f, x0, y, ql);
        if (jn == 0) {
          // The left node of a piece represents the right limit at the
          // boundary; add the atom contribution when the boundary jumps.
          double d = g.delta(y);
          if (d > 0) v += k * d * prev.eval(y);
        }
        cur.values[i][jn] = v;
      }
    }
    levels_[k] = std::make_shared<Level>(Level{std::move(cur)});
  }
}

double MonomialOracle::eval(int n, double x) const {
  if (n < 0 || n > max_degree_)
    throw ValidationError("MonomialOracle: degree outside the built range");
  if (n == 0) return 1.0;
  if (x == x0_) return 0.0;
  return levels_[n]->poly.eval(x);
}

double monomial_oracle(const Derivator& g, double x0, int n, double x, const Quadrature& q) {
  if (n < 0) throw ValidationError("monomial_oracle: degree must be >= 0");
  if (n == 0) return 1.0;
  if (x == x0) return 0.0;
  double lo = std::min(x, x0), hi = std::max(x, x0);
  const double margin = 0.02 * (hi - lo) + 1e-9 * g.window_span();
  lo = std::max(g.window_lo(), lo - margin);
  MonomialOracle oracle(g, x0, n, lo, hi, q);
  return oracle.eval(n, x);
}

// ---------------------------------------------------------------------------
// h-functions

struct HFunctionTable::Impl {
  std::vector<PiecewisePoly> levels;  // index j-1 holds h_{j,k}
  double center = 0;
  int k = 0;
};

HFunctionTable::HFunctionTable(const Derivator& g, double center, int k, int j_max, double lo,
                               double hi, Quadrature q) {
  if (k < 0 || j_max < 1) throw ValidationError("HFunctionTable: needs k >= 0, j_max >= 1");
  g.check_in_window(lo);
  g.check_in_window(hi);

  double span_lo = lo;
  while (g.delta(span_lo) > 0 && span_lo > g.window_lo())
    span_lo = std::max(g.window_lo(), span_lo - 1e-3 * (hi - lo));
  std::vector<double> cuts{span_lo, hi};
  if (center > span_lo && center < hi) cuts.push_back(center);
  for (const Segment& s : g.segments()) {
    if (s.from > span_lo && s.from < hi) cuts.push_back(s.from);
    if (s.to > span_lo && s.to < hi) cuts.push_back(s.to);
  }
  double neglected = 0;
  for (const Jump& j : g.jumps_in(span_lo, hi, 1e300, &neglected))
    if (j.location > span_lo && j.location < hi) cuts.push_back(j.location);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const int nn = std::max(8, j_max + k + 3);
  PiecewisePoly base;
  base.nodes = lobatto_nodes(nn);
  base.weights = lobatto_weights(nn);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    base.lo.push_back(cuts[i]);
    base.hi.push_back(cuts[i + 1]);
    base.values.emplace_back(nn, 0.0);
  }

  auto impl = std::make_shared<Impl>();
  impl->center = center;
  impl->k = k;

  // Base level: integrand is the degree-k monomial times the jump-size
  // function, which vanishes off the discontinuity set; integrate() reduces
  // it to the exact atom sum.
  Integrand<double> base_f;
  base_f.fn = [&g, center, k](double s) {
    double d = g.delta(s);
    if (d == 0) return 0.0;
    return monomial({&g, center, k, MonomialRoute::Auto}, s) * d;
  };
  base_f.regularity = Regularity::LeftRegulated;
  base_f.bound = 0;  // estimated below
  {
    double m = 0;
    double neglected2 = 0;
    for (const Jump& j : g.jumps_in(span_lo, hi, 1e300, &neglected2))
      m = std::max(m, std::abs(base_f.fn(j.location)));
    base_f.bound = m;
  }

  // h_{j,k} = (k+j) * integral of the level below; the base integrand is the
  // atom-supported g_k * jump-size function.
  for (int j = 1; j <= j_max; ++j) {
    PiecewisePoly cur = base;
    Quadrature ql = q;
    Integrand<double> f;
    double mult;
    if (j == 1) {
      f = base_f;
      mult = k + 1;
    } else {
      const PiecewisePoly& prev = impl->levels[j - 2];
      f.fn = [&prev](double s) { return prev.eval(s); };
      f.bound = prev.max_abs();
      ql.abs_tol = q.abs_tol * std::max(1.0, f.bound);
      mult = k + j;
    }
    for (std::size_t i = 0; i < cur.lo.size(); ++i) {
      const double mid = 0.5 * (cur.lo[i] + cur.hi[i]);
      const double half = 0.5 * (cur.hi[i] - cur.lo[i]);
      for (int jn = 0; jn < nn; ++jn) {
        const double y = (jn == 0) ? cur.lo[i] : (jn == nn - 1 ? cur.hi[i]
                                                               : mid + half * base.nodes[jn]);
        double v = mult * integrate<double>(g, f, center, y, ql);
        if (jn == 0) {
          double d = g.delta(y);
          if (d > 0) v += mult * f.fn(y) * d;
        }
        cur.values[i][jn] = v;
      }
    }
    impl->levels.push_back(std::move(cur));
  }
  impl_ = impl;
}

double HFunctionTable::eval(int j, double x) const {
  if (j < 1 || static_cast<std::size_t>(j) > impl_->levels.size())
    throw ValidationError("HFunctionTable: level outside the built range");
  return impl_->levels[j - 1].eval(x);
}

double h_function(const HFunctionRequest& req, double x, const Quadrature& q) {
  if (!req.g) throw ValidationError("h_function: request carries no derivator");
  if (req.j < 1 || req.k < 0)
    throw ValidationError("h_function: needs j >= 1 and k >= 0");
  const Derivator& g = *req.g;
  g.check_in_window(x);
  g.check_in_window(req.center);
  if (x == req.center) return 0.0;
  double lo = std::min(x, req.center), hi = std::max(x, req.center);
  const double margin = 0.02 * (hi - lo) + 1e-9 * g.window_span();
  lo = std::max(g.window_lo(), lo - margin);
  HFunctionTable table(g, req.center, req.k, req.j, lo, hi, q);
  return table.eval(req.j, x);
}

}  // namespace stieltjes
