#include "stieltjes/derivator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "stieltjes/errors.hpp"

namespace stieltjes {

namespace {

constexpr double kGenFloorRel = 1e-18;      // materialization floor, relative to first_size
constexpr std::size_t kGenCap = 400000;     // hard cap on materialized generator jumps

bool finite(double x) { return std::isfinite(x); }

}  // namespace

Derivator::Derivator(std::vector<Segment> continuous, std::vector<Jump> jumps,
                     std::optional<JumpGenerator> generator, double window_lo,
                     double window_hi)
    : segments_(std::move(continuous)),
      jumps_(std::move(jumps)),
      generator_(std::move(generator)),
      window_lo_(window_lo),
      window_hi_(window_hi) {
  if (!finite(window_lo_) || !finite(window_hi_) || !(window_lo_ < window_hi_))
    throw ValidationError("derivator: window must be a finite interval [lo, hi] with lo < hi");

  if (segments_.empty())
    throw ValidationError("derivator: continuous part needs at least one segment");
  std::sort(segments_.begin(), segments_.end(),
            [](const Segment& a, const Segment& b) { return a.from < b.from; });
  const double span = window_span();
  const double snap = 1e-9 * span;
  auto close = [&](double a, double b) { return std::abs(a - b) <= snap; };
  if (!close(segments_.front().from, window_lo_) || !close(segments_.back().to, window_hi_))
    throw ValidationError("derivator: continuous segments must cover the window");
  segments_.front().from = window_lo_;
  segments_.back().to = window_hi_;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    Segment& s = segments_[i];
    if (!finite(s.slope) || !finite(s.intercept) || !finite(s.from) || !finite(s.to))
      throw ValidationError("derivator: non-finite segment data");
    if (s.slope < 0)
      throw ValidationError("derivator: segment slope must be >= 0 (g non-decreasing)");
    if (!(s.from < s.to)) throw ValidationError("derivator: empty or reversed segment");
    if (i + 1 < segments_.size()) {
      Segment& nxt = segments_[i + 1];
      if (!close(s.to, nxt.from))
        throw ValidationError("derivator: segments must be contiguous");
      nxt.from = s.to;
      const double scale = 1 + std::abs(s.value(s.to));
      if (std::abs(s.value(s.to) - nxt.value(s.to)) > 1e-9 * scale)
        throw ValidationError("derivator: continuous part has a gap at a breakpoint");
    }
  }
  // Monotonicity spot check on a dense grid (slopes >= 0 already make this exact;
  // the grid guards against malformed manual constructions).
  double prev = continuous_value(window_lo_);
  for (int i = 1; i <= 64; ++i) {
    double x = window_lo_ + span * i / 64.0;
    double v = continuous_value(x);
    if (v < prev - 1e-12 * (1 + std::abs(v)))
      throw ValidationError("derivator: continuous part decreases");
    prev = v;
  }

  std::sort(jumps_.begin(), jumps_.end(),
            [](const Jump& a, const Jump& b) { return a.location < b.location; });
  for (std::size_t i = 0; i < jumps_.size(); ++i) {
    const Jump& j = jumps_[i];
    if (!finite(j.location) || !finite(j.size) || j.size <= 0)
      throw ValidationError("derivator: jump sizes must be finite and > 0");
    if (j.location < window_lo_ || j.location > window_hi_)
      throw ValidationError("derivator: jump location outside the window");
    if (i > 0 && !(jumps_[i - 1].location < j.location))
      throw ValidationError("derivator: jump locations must be strictly increasing");
  }

  all_jumps_ = jumps_;
  if (generator_) {
    const JumpGenerator& gen = *generator_;
    if (!(gen.first_size > 0) || !finite(gen.first_size))
      throw ValidationError("derivator: generator first_size must be > 0");
    if (!(gen.ratio > 0) || !(gen.ratio < 1))
      throw ValidationError("derivator: generator ratio must lie in (0, 1)");
    if (gen.side != -1 && gen.side != 1)
      throw ValidationError("derivator: generator side must be -1 (left) or +1 (right)");
    if (gen.accumulation < window_lo_ || gen.accumulation > window_hi_)
      throw ValidationError("derivator: generator accumulation point outside the window");

    const double floor = kGenFloorRel * gen.first_size;
    double size = gen.first_size;
    std::size_t count = 0;
    std::vector<Jump> gj;
    while (size >= floor) {
      if (++count > kGenCap)
        throw ValidationError("derivator: generator ratio too close to 1 to materialize");
      double loc = gen.accumulation + gen.side * size;
      gj.push_back({loc, size});
      for (const Jump& e : jumps_)
        if (e.location == loc)
          throw ValidationError("derivator: explicit jump coincides with a generator jump");
      size *= gen.ratio;
    }
    // Remainder beyond the floor, clustered next to the accumulation point.
    gen_tail_mass_ = size / (1 - gen.ratio);
    if (gen.side < 0) {
      gen_tail_lo_ = gen.accumulation - size;
      gen_tail_hi_ = gen.accumulation;
    } else {
      gen_tail_lo_ = gen.accumulation;
      gen_tail_hi_ = gen.accumulation + size;
    }
    all_jumps_.insert(all_jumps_.end(), gj.begin(), gj.end());
    std::sort(all_jumps_.begin(), all_jumps_.end(),
              [](const Jump& a, const Jump& b) { return a.location < b.location; });
  }

  jump_prefix_.resize(all_jumps_.size() + 1, 0.0);
  for (std::size_t i = 0; i < all_jumps_.size(); ++i)
    jump_prefix_[i + 1] = jump_prefix_[i] + all_jumps_[i].size;
}

Derivator Derivator::identity(double lo, double hi) {
  return Derivator({Segment{lo, hi, 1.0, 0.0}}, {}, std::nullopt, lo, hi);
}

Derivator Derivator::pure_jumps(std::vector<Jump> jumps, double lo, double hi) {
  return Derivator({Segment{lo, hi, 0.0, 0.0}}, std::move(jumps), std::nullopt, lo, hi);
}

void Derivator::check_in_window(double x) const {
  if (!(x >= window_lo_ && x <= window_hi_))
    throw OutOfWindow("x = " + std::to_string(x) + " outside window [" +
                      std::to_string(window_lo_) + ", " + std::to_string(window_hi_) + "]");
}

double Derivator::continuous_value(double x) const {
  check_in_window(x);
  // Last segment whose start is <= x.
  auto it = std::upper_bound(segments_.begin(), segments_.end(), x,
                             [](double v, const Segment& s) { return v < s.from; });
  if (it != segments_.begin()) --it;
  return it->value(x);
}

double Derivator::jump_sum_below(double x) const {
  auto it = std::lower_bound(all_jumps_.begin(), all_jumps_.end(), x,
                             [](const Jump& j, double v) { return j.location < v; });
  double s = jump_prefix_[static_cast<std::size_t>(it - all_jumps_.begin())];
  // The non-materialized remainder clusters inside (gen_tail_lo_, gen_tail_hi_).
  if (gen_tail_mass_ > 0 && x >= gen_tail_hi_) s += gen_tail_mass_;
  return s;
}

double Derivator::eval(double x) const {
  check_in_window(x);
  // Jump part normalized to vanish at 0: sum over [0, x) minus sum over [x, 0).
  return continuous_value(x) + (jump_sum_below(x) - jump_sum_below(0.0));
}

double Derivator::delta(double x) const {
  check_in_window(x);
  auto it = std::lower_bound(all_jumps_.begin(), all_jumps_.end(), x,
                             [](const Jump& j, double v) { return j.location < v; });
  double d = 0;
  while (it != all_jumps_.end() && it->location == x) {
    d += it->size;
    ++it;
  }
  return d;
}

// Constancy detection works directly on the representation: g is constant on
// an open interval iff the covering segments all have slope 0 and no jump
// lies strictly inside it.

// Largest B >= x with g constant on (x, B).
double Derivator::flat_right_end(double x) const {
  double b = x;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const Segment& s = segments_[i];
    if (s.to <= x) continue;
    if (s.slope != 0.0) break;
    b = s.to;
  }
  auto j = std::upper_bound(all_jumps_.begin(), all_jumps_.end(), x,
                            [](double v, const Jump& jj) { return v < jj.location; });
  if (j != all_jumps_.end() && j->location < b) b = j->location;
  if (gen_tail_mass_ > 0 && gen_tail_hi_ > x && gen_tail_lo_ < b)
    b = std::max(x, gen_tail_lo_);
  return b;
}

// Smallest A <= x with g constant on (A, x).
double Derivator::flat_left_end(double x) const {
  double a = x;
  for (std::size_t i = segments_.size(); i-- > 0;) {
    const Segment& s = segments_[i];
    if (s.from >= x) continue;
    if (s.slope != 0.0) break;
    a = s.from;
  }
  auto j = std::lower_bound(all_jumps_.begin(), all_jumps_.end(), x,
                            [](const Jump& jj, double v) { return jj.location < v; });
  if (j != all_jumps_.begin()) {
    double loc = std::prev(j)->location;
    if (loc > a) a = loc;
  }
  if (gen_tail_mass_ > 0 && gen_tail_lo_ < x && gen_tail_hi_ > a)
    a = std::min(x, gen_tail_hi_);
  return a;
}

PointClass Derivator::classify(double x) const {
  check_in_window(x);
  if (delta(x) > 0) return {PointTag::Jump, 0.0};

  double B = flat_right_end(x);
  double A = flat_left_end(x);
  const bool flat_right = B > x;
  const bool flat_left = A < x;
  if (flat_left && flat_right) return {PointTag::ConstantInterior, B};
  if (flat_left) return {PointTag::RightEndpoint, x};
  if (flat_right) return {PointTag::LeftEndpoint, B};
  return {PointTag::Regular, 0.0};
}

std::pair<Derivator, Derivator> Derivator::split() const {
  Derivator gc(segments_, {}, std::nullopt, window_lo_, window_hi_);
  Derivator gb({Segment{window_lo_, window_hi_, 0.0, 0.0}}, jumps_, generator_, window_lo_,
               window_hi_);
  return {std::move(gc), std::move(gb)};
}

std::pair<Derivator, double> Derivator::truncate_jumps(int m) const {
  if (m < 1) throw ValidationError("truncate_jumps: m must be >= 1");
  if (generator_ && !(generator_->ratio < 1))
    throw GeneratorUnbounded("truncate_jumps: generator tail mass is not summable");
  const double threshold = 1.0 / m;
  std::vector<Jump> kept;
  double discarded = 0;
  for (const Jump& j : all_jumps_) {
    if (j.size >= threshold) {
      kept.push_back(j);
    } else if (j.location >= window_lo_ && j.location <= window_hi_) {
      discarded += j.size;
    }
  }
  if (gen_tail_mass_ > 0 && gen_tail_hi_ >= window_lo_ && gen_tail_lo_ <= window_hi_)
    discarded += gen_tail_mass_;
  std::sort(kept.begin(), kept.end(),
            [](const Jump& a, const Jump& b) { return a.location < b.location; });
  Derivator out(segments_, std::move(kept), std::nullopt, window_lo_, window_hi_);
  return {std::move(out), discarded};
}

std::vector<Jump> Derivator::jumps_in(double lo, double hi, double mass_tol,
                                      double* neglected) const {
  std::vector<Jump> out;
  double missed = 0;
  if (lo < hi) {
    auto first = std::lower_bound(all_jumps_.begin(), all_jumps_.end(), lo,
                                  [](const Jump& j, double v) { return j.location < v; });
    auto last = std::lower_bound(all_jumps_.begin(), all_jumps_.end(), hi,
                                 [](const Jump& j, double v) { return j.location < v; });
    out.assign(first, last);
    if (gen_tail_mass_ > 0 && gen_tail_hi_ > lo && gen_tail_lo_ < hi)
      missed = gen_tail_mass_;
  }
  if (neglected) *neglected = missed;
  if (missed > mass_tol && mass_tol > 0)
    throw ToleranceNotMet("jumps_in: generator remainder exceeds the requested mass budget");
  return out;
}

double Derivator::jump_mass(double lo, double hi) const {
  if (!(lo < hi)) return 0;
  return (jump_sum_below(hi) - jump_sum_below(lo));
}

bool Derivator::continuous_is_flat() const {
  for (const Segment& s : segments_)
    if (s.slope != 0.0) return false;
  return true;
}

double Derivator::nearest_feature(double x, int side) const {
  double best = side > 0 ? window_hi_ - x : x - window_lo_;
  auto consider = [&](double loc) {
    double d = side > 0 ? loc - x : x - loc;
    if (d > 0 && d < best) best = d;
  };
  for (const Segment& s : segments_) {
    consider(s.from);
    consider(s.to);
  }
  if (side > 0) {
    auto it = std::upper_bound(all_jumps_.begin(), all_jumps_.end(), x,
                               [](double v, const Jump& j) { return v < j.location; });
    if (it != all_jumps_.end()) consider(it->location);
  } else {
    auto it = std::lower_bound(all_jumps_.begin(), all_jumps_.end(), x,
                               [](const Jump& j, double v) { return j.location < v; });
    if (it != all_jumps_.begin()) consider(std::prev(it)->location);
  }
  if (gen_tail_mass_ > 0) {
    consider(gen_tail_lo_);
    consider(gen_tail_hi_);
  }
  return std::max(best, 0.0);
}

double Derivator::first_increase_after(double x) const {
  check_in_window(x);
  if (delta(x) > 0) return x;  // g exceeds g(x) immediately to the right
  PointClass pc = classify(x);
  if (pc.tag == PointTag::ConstantInterior || pc.tag == PointTag::LeftEndpoint)
    return std::min(pc.component_end, window_hi_);
  return x;
}

double Derivator::first_continuous_increase_after(double x) const {
  check_in_window(x);
  auto seg = std::upper_bound(segments_.begin(), segments_.end(), x,
                              [](double v, const Segment& s) { return v < s.from; });
  if (seg != segments_.begin()) --seg;
  double y = x;
  while (seg != segments_.end()) {
    if (seg->slope != 0.0) return std::max(y, seg->from);
    y = seg->to;
    ++seg;
  }
  return window_hi_;
}

}  // namespace stieltjes
