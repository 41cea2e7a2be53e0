#pragma once

// Intervals, axis-aligned boxes and half-space sets.
//
// All arithmetic is plain IEEE double without directed rounding. Values are
// immutable after construction and every operation here is a pure function.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "reachguard/errors.hpp"

namespace reachguard {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  constexpr Interval() = default;
  // Throws InvalidInput unless lo <= hi and both are finite.
  Interval(double lo, double hi);

  static Interval point(double v) { return Interval(v, v); }

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double v) const { return lo <= v && v <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval operator*(double s, const Interval& a);
Interval hull(const Interval& a, const Interval& b);

class HyperRectangle {
 public:
  // Throws InvalidInput on an empty dimension list.
  explicit HyperRectangle(std::vector<Interval> dims);
  HyperRectangle(std::initializer_list<Interval> dims);

  static HyperRectangle point(std::span<const double> x);
  static HyperRectangle from_bounds(std::span<const double> lo, std::span<const double> hi);

  std::size_t dim() const { return dims_.size(); }
  const Interval& operator[](std::size_t k) const { return dims_[k]; }
  std::span<const Interval> intervals() const { return dims_; }

  bool contains(std::span<const double> x) const;
  bool contains(const HyperRectangle& other) const;
  std::vector<double> widths() const;

  friend bool operator==(const HyperRectangle&, const HyperRectangle&) = default;

 private:
  std::vector<Interval> dims_;
};

// One row C_k x <= d_k.
struct HalfSpace {
  std::vector<double> coeffs;
  double bound = 0.0;
};

// Conjunction {x : C x <= d}.
class LinearConstraintSet {
 public:
  // Throws InvalidInput if there are no rows or the rows disagree on length.
  explicit LinearConstraintSet(std::vector<HalfSpace> rows);

  std::size_t dim() const { return rows_.front().coeffs.size(); }
  std::span<const HalfSpace> rows() const { return rows_; }

  // True iff the point satisfies every row.
  bool satisfied_by(std::span<const double> x) const;

 private:
  std::vector<HalfSpace> rows_;
};

// Smallest box containing every input box.
HyperRectangle interval_hull(std::span<const HyperRectangle> rects);

// Euclidean norm of the per-axis gap between the projections of a and b
// onto `position_axes`; zero iff the projections overlap on every axis.
double min_distance(const HyperRectangle& a, const HyperRectangle& b,
                    std::span<const std::size_t> position_axes);

// False only when some row's lower bound over the box already exceeds its
// right-hand side. May report true for an empty intersection.
bool possibly_intersects(const HyperRectangle& rect, const LinearConstraintSet& unsafe);

HyperRectangle bloat(const HyperRectangle& rect, std::span<const double> eps);

// Cartesian product in the given order (used for joint multi-agent boxes).
HyperRectangle concat(std::span<const HyperRectangle> blocks);

}  // namespace reachguard
