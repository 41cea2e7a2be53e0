#include "reachguard/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace reachguard {

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw InvalidInput("interval bounds must be finite");
  }
  if (lo > hi) {
    throw InvalidInput("interval lower bound " + std::to_string(lo) + " exceeds upper bound " +
                       std::to_string(hi));
  }
}

Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }

Interval operator-(const Interval& a, const Interval& b) { return {a.lo - b.hi, a.hi - b.lo}; }

Interval operator*(const Interval& a, const Interval& b) {
  const double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

Interval operator*(double s, const Interval& a) {
  return s >= 0.0 ? Interval(s * a.lo, s * a.hi) : Interval(s * a.hi, s * a.lo);
}

Interval hull(const Interval& a, const Interval& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

HyperRectangle::HyperRectangle(std::vector<Interval> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw InvalidInput("hyper-rectangle needs at least one dimension");
}

HyperRectangle::HyperRectangle(std::initializer_list<Interval> dims)
    : HyperRectangle(std::vector<Interval>(dims)) {}

HyperRectangle HyperRectangle::point(std::span<const double> x) {
  std::vector<Interval> d;
  d.reserve(x.size());
  for (double v : x) d.push_back(Interval::point(v));
  return HyperRectangle(std::move(d));
}

HyperRectangle HyperRectangle::from_bounds(std::span<const double> lo, std::span<const double> hi) {
  if (lo.size() != hi.size()) throw InvalidInput("bound vectors differ in length");
  std::vector<Interval> d;
  d.reserve(lo.size());
  for (std::size_t k = 0; k < lo.size(); ++k) d.emplace_back(lo[k], hi[k]);
  return HyperRectangle(std::move(d));
}

bool HyperRectangle::contains(std::span<const double> x) const {
  if (x.size() != dims_.size()) return false;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!dims_[k].contains(x[k])) return false;
  }
  return true;
}

bool HyperRectangle::contains(const HyperRectangle& other) const {
  if (other.dim() != dim()) return false;
  for (std::size_t k = 0; k < dim(); ++k) {
    if (!dims_[k].contains(other.dims_[k])) return false;
  }
  return true;
}

std::vector<double> HyperRectangle::widths() const {
  std::vector<double> w;
  w.reserve(dims_.size());
  for (const auto& iv : dims_) w.push_back(iv.width());
  return w;
}

LinearConstraintSet::LinearConstraintSet(std::vector<HalfSpace> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw InvalidInput("constraint set needs at least one row");
  const std::size_t n = rows_.front().coeffs.size();
  if (n == 0) throw InvalidInput("constraint rows need at least one coefficient");
  for (const auto& r : rows_) {
    if (r.coeffs.size() != n) throw InvalidInput("constraint rows differ in length");
  }
}

bool LinearConstraintSet::satisfied_by(std::span<const double> x) const {
  if (x.size() != dim()) throw InvalidInput("point dimension does not match constraint set");
  for (const auto& r : rows_) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += r.coeffs[k] * x[k];
    if (s > r.bound) return false;
  }
  return true;
}

HyperRectangle interval_hull(std::span<const HyperRectangle> rects) {
  if (rects.empty()) throw InvalidInput("interval_hull of an empty list");
  std::vector<Interval> out(rects.front().intervals().begin(), rects.front().intervals().end());
  for (const auto& r : rects.subspan(1)) {
    if (r.dim() != out.size()) throw InvalidInput("interval_hull: mismatched dimensions");
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = hull(out[k], r[k]);
  }
  return HyperRectangle(std::move(out));
}

double min_distance(const HyperRectangle& a, const HyperRectangle& b,
                    std::span<const std::size_t> position_axes) {
  double sq = 0.0;
  for (std::size_t axis : position_axes) {
    if (axis >= a.dim() || axis >= b.dim()) {
      throw InvalidInput("min_distance: axis " + std::to_string(axis) + " out of range");
    }
    const double gap = std::max({0.0, a[axis].lo - b[axis].hi, b[axis].lo - a[axis].hi});
    sq += gap * gap;
  }
  return std::sqrt(sq);
}

bool possibly_intersects(const HyperRectangle& rect, const LinearConstraintSet& unsafe) {
  if (unsafe.dim() != rect.dim()) {
    throw InvalidInput("possibly_intersects: constraint length " + std::to_string(unsafe.dim()) +
                       " vs box dimension " + std::to_string(rect.dim()));
  }
  for (const auto& row : unsafe.rows()) {
    double lower = 0.0;
    for (std::size_t k = 0; k < rect.dim(); ++k) {
      const double c = row.coeffs[k];
      lower += c >= 0.0 ? c * rect[k].lo : c * rect[k].hi;
    }
    if (lower > row.bound) return false;
  }
  return true;
}

HyperRectangle bloat(const HyperRectangle& rect, std::span<const double> eps) {
  if (eps.size() != rect.dim()) throw InvalidInput("bloat: eps length does not match box");
  std::vector<Interval> d;
  d.reserve(rect.dim());
  for (std::size_t k = 0; k < rect.dim(); ++k) {
    if (!(eps[k] >= 0.0)) throw InvalidInput("bloat: negative widening");
    d.emplace_back(rect[k].lo - eps[k], rect[k].hi + eps[k]);
  }
  return HyperRectangle(std::move(d));
}

HyperRectangle concat(std::span<const HyperRectangle> blocks) {
  std::vector<Interval> d;
  for (const auto& b : blocks) d.insert(d.end(), b.intervals().begin(), b.intervals().end());
  return HyperRectangle(std::move(d));
}

}  // namespace reachguard
