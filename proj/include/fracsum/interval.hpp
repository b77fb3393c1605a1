#pragma once

#include <cmath>
#include <string>

#include "fracsum/error.hpp"

namespace fracsum {

/// Closed interval [a, b] with a < b, plus its affine map onto [-1, 1].
class Interval {
 public:
  Interval(double a, double b) : a_(a), b_(b) {
    if (!(std::isfinite(a) && std::isfinite(b)) || !(a < b)) {
      throw ValidationError("interval requires finite a < b, got [" + std::to_string(a) +
                            ", " + std::to_string(b) + "]");
    }
  }

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double width() const noexcept { return b_ - a_; }
  double center() const noexcept { return 0.5 * (a_ + b_); }

  /// y = 2/(b-a) (x - (a+b)/2)
  double to_reference(double x) const noexcept { return 2.0 / (b_ - a_) * (x - center()); }
  /// x = (b-a)/2 y + (a+b)/2
  double from_reference(double y) const noexcept { return 0.5 * (b_ - a_) * y + center(); }

  bool contains(double x) const noexcept { return a_ <= x && x <= b_; }

  friend bool operator==(const Interval& l, const Interval& r) noexcept {
    return l.a_ == r.a_ && l.b_ == r.b_;
  }

 private:
  double a_;
  double b_;
};

}  // namespace fracsum
