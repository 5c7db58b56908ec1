#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace stieltjes {

// Affine piece of the continuous part: value = slope*x + intercept on [from, to].
struct Segment {
  double from = 0;
  double to = 0;
  double slope = 0;
  double intercept = 0;

  double value(double x) const { return slope * x + intercept; }
};

struct Jump {
  double location = 0;
  double size = 0;
};

// Rule emitting countably many jumps accumulating at a point. Sizes follow
// first_size * ratio^k, k = 0, 1, ...; the k-th jump sits at
// accumulation - size (side = -1) or accumulation + size (side = +1).
struct JumpGenerator {
  double accumulation = 0;
  int side = -1;
  double first_size = 0;
  double ratio = 0;  // must lie in (0, 1) so the total mass is finite
};

enum class PointTag { Regular, Jump, ConstantInterior, LeftEndpoint, RightEndpoint };

// Classification of a point against the structure of g. component_end is the
// right endpoint of the surrounding constancy component and is meaningful for
// ConstantInterior (it is where the derivative convention evaluates).
struct PointClass {
  PointTag tag = PointTag::Regular;
  double component_end = 0;
};

// Left-continuous non-decreasing function given by a piecewise-affine
// continuous part, finitely many explicit jumps and at most one jump
// generator. Immutable after construction; queries are pure.
class Derivator {
 public:
  Derivator(std::vector<Segment> continuous, std::vector<Jump> jumps,
            std::optional<JumpGenerator> generator, double window_lo, double window_hi);

  static Derivator identity(double lo, double hi);
  // Continuous part constant zero on [lo, hi] with the given jumps.
  static Derivator pure_jumps(std::vector<Jump> jumps, double lo, double hi);

  double window_lo() const { return window_lo_; }
  double window_hi() const { return window_hi_; }
  double window_span() const { return window_hi_ - window_lo_; }

  // g(x). The value at a jump location is the left limit.
  double eval(double x) const;
  // Jump size at x; 0 when x is not a discontinuity point.
  double delta(double x) const;
  double right_limit(double x) const { return eval(x) + delta(x); }
  // g(x) - g(x0)
  double increment(double x0, double x) const { return eval(x) - eval(x0); }

  PointClass classify(double x) const;

  // (continuous part, jump part). The jump part has zero continuous part and
  // is normalized to vanish at 0; eval(g) == eval(gC) + eval(gB) exactly.
  std::pair<Derivator, Derivator> split() const;

  // Keep only jumps of size >= 1/m; the generator is materialized down to the
  // threshold. Returns the truncated derivator and the jump mass discarded on
  // the working window.
  std::pair<Derivator, double> truncate_jumps(int m) const;

  // Jumps (explicit + generator) with locations in [lo, hi). The generator is
  // materialized so only a remainder below mass_tol is missing; the bound on
  // what was actually neglected is written to *neglected when given.
  std::vector<Jump> jumps_in(double lo, double hi, double mass_tol,
                             double* neglected = nullptr) const;

  // Total jump mass on [lo, hi) including the generator remainder.
  double jump_mass(double lo, double hi) const;

  const std::vector<Segment>& segments() const { return segments_; }
  const std::vector<Jump>& explicit_jumps() const { return jumps_; }
  const std::optional<JumpGenerator>& generator() const { return generator_; }

  bool continuous_is_flat() const;  // gC constant on the whole window
  bool has_jumps() const { return !all_jumps_.empty() || gen_tail_mass_ > 0; }

  double continuous_value(double x) const;
  double continuous_increment(double x0, double x) const {
    return continuous_value(x) - continuous_value(x0);
  }

  // Distance from x to the nearest breakpoint or jump strictly on the given
  // side (+1 right, -1 left), capped by the window edge distance.
  double nearest_feature(double x, int side) const;

  // Smallest y > x with g(y) > g(x); window_hi when g is flat past x.
  double first_increase_after(double x) const;
  // Same for the continuous part alone.
  double first_continuous_increase_after(double x) const;

  void check_in_window(double x) const;

 private:
  Derivator() = default;

  double jump_sum_below(double x) const;  // sum of sizes at locations < x
  double flat_right_end(double x) const;
  double flat_left_end(double x) const;

  std::vector<Segment> segments_;       // sorted, contiguous cover of the window
  std::vector<Jump> jumps_;             // explicit jumps, sorted by location
  std::optional<JumpGenerator> generator_;
  std::vector<Jump> all_jumps_;         // explicit + materialized generator, sorted
  std::vector<double> jump_prefix_;     // prefix sums of all_jumps_ sizes
  double gen_tail_mass_ = 0;            // mass of the non-materialized remainder
  double gen_tail_lo_ = 0, gen_tail_hi_ = 0;  // interval holding the remainder
  double window_lo_ = 0;
  double window_hi_ = 0;
};

}  // namespace stieltjes
