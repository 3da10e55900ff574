#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "loch/common.hpp"

namespace loch {

struct Segment {
  Complex start;
  Complex end;
  double length() const { return std::abs(end - start); }
  Complex at(double t) const { return start + t * (end - start); }
};

// Parameter interval of `s` covered by `other` when the two are collinear and
// overlap in positive length; nullopt otherwise.
std::optional<std::pair<double, double>> collinear_overlap(const Segment& s, const Segment& other, double tol);
double point_segment_distance(Complex z, const Segment& s);
bool same_segment(const Segment& a, const Segment& b, double tol);

// Finite union of closed subintervals of [0,1]; only lengths matter.
class IntervalSet {
 public:
  IntervalSet() = default;
  static IntervalSet full() { return IntervalSet({{0.0, 1.0}}); }
  explicit IntervalSet(std::vector<std::pair<double, double>> parts);

  const std::vector<std::pair<double, double>>& parts() const { return parts_; }
  double length() const;
  bool empty() const { return length() <= 0.0; }

  IntervalSet unite(const IntervalSet& o) const;
  IntervalSet intersect(const IntervalSet& o) const;
  IntervalSet subtract(const IntervalSet& o) const;

 private:
  std::vector<std::pair<double, double>> parts_;  // sorted, disjoint, positive length
};

}  // namespace loch
