#include "loch/geometry.hpp"

#include <algorithm>

namespace loch {

double point_segment_distance(Complex z, const Segment& s) {
  const Complex d = s.end - s.start;
  const double l2 = std::norm(d);
  if (l2 == 0.0) return std::abs(z - s.start);
  double t = ((z - s.start) * std::conj(d)).real() / l2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(z - s.at(t));
}

bool same_segment(const Segment& a, const Segment& b, double tol) {
  return std::abs(a.start - b.start) <= tol && std::abs(a.end - b.end) <= tol;
}

std::optional<std::pair<double, double>> collinear_overlap(const Segment& s, const Segment& other, double tol) {
  const Complex d = s.end - s.start;
  const double len = std::abs(d);
  if (len == 0.0) return std::nullopt;
  const Complex u = d / len;
  // distance of other's endpoints from the line through s
  auto off_line = [&](Complex z) { return std::abs(((z - s.start) * std::conj(u)).imag()); };
  if (off_line(other.start) > tol || off_line(other.end) > tol) return std::nullopt;
  double a = ((other.start - s.start) * std::conj(u)).real() / len;
  double b = ((other.end - s.start) * std::conj(u)).real() / len;
  if (a > b) std::swap(a, b);
  a = std::max(a, 0.0);
  b = std::min(b, 1.0);
  if ((b - a) * len <= tol) return std::nullopt;
  return std::make_pair(a, b);
}

IntervalSet::IntervalSet(std::vector<std::pair<double, double>> parts) {
  std::sort(parts.begin(), parts.end());
  for (auto [a, b] : parts) {
    if (b <= a) continue;
    if (!parts_.empty() && a <= parts_.back().second)
      parts_.back().second = std::max(parts_.back().second, b);
    else
      parts_.emplace_back(a, b);
  }
}

double IntervalSet::length() const {
  double s = 0.0;
  for (auto [a, b] : parts_) s += b - a;
  return s;
}

IntervalSet IntervalSet::unite(const IntervalSet& o) const {
  auto all = parts_;
  all.insert(all.end(), o.parts_.begin(), o.parts_.end());
  return IntervalSet(std::move(all));
}

IntervalSet IntervalSet::intersect(const IntervalSet& o) const {
  std::vector<std::pair<double, double>> out;
  for (auto [a, b] : parts_)
    for (auto [c, d] : o.parts_) {
      double lo = std::max(a, c), hi = std::min(b, d);
      if (hi > lo) out.emplace_back(lo, hi);
    }
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::subtract(const IntervalSet& o) const {
  std::vector<std::pair<double, double>> out;
  for (auto [a, b] : parts_) {
    double cur = a;
    for (auto [c, d] : o.parts_) {
      if (d <= cur || c >= b) continue;
      if (c > cur) out.emplace_back(cur, c);
      cur = std::max(cur, d);
      if (cur >= b) break;
    }
    if (cur < b) out.emplace_back(cur, b);
  }
  return IntervalSet(std::move(out));
}

}  // namespace loch
