#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "wassci/errors.hpp"

namespace wassci {

/// Closed interval on the extended real line. Endpoints may be infinite.
/// The empty interval is a distinguished state; a reversed interval
/// (lo > hi) is never representable from outside the class.
class ExtendedInterval {
 public:
  ExtendedInterval() = default;  // whole line

  static ExtendedInterval whole() { return ExtendedInterval(); }

  static ExtendedInterval empty() {
    ExtendedInterval r;
    r.empty_ = true;
    return r;
  }

  static ExtendedInterval bounded(double lo, double hi) {
    if (std::isnan(lo) || std::isnan(hi) || lo > hi)
      throw DomainError("ExtendedInterval::bounded: requires lo <= hi");
    ExtendedInterval r;
    r.lo_ = lo;
    r.hi_ = hi;
    return r;
  }

  static ExtendedInterval at_least(double lo) {
    return bounded(lo, std::numeric_limits<double>::infinity());
  }

  static ExtendedInterval at_most(double hi) {
    return bounded(-std::numeric_limits<double>::infinity(), hi);
  }

  bool is_empty() const { return empty_; }
  bool is_whole() const { return !empty_ && std::isinf(lo_) && std::isinf(hi_); }

  double lo() const { return lo_; }
  double hi() const { return hi_; }

  bool contains(double z, double slack = 0.0) const {
    if (empty_) return false;
    return z >= lo_ - slack && z <= hi_ + slack;
  }

  ExtendedInterval intersect(const ExtendedInterval& other) const {
    if (empty_ || other.empty_) return empty();
    const double lo = std::max(lo_, other.lo_);
    const double hi = std::min(hi_, other.hi_);
    if (lo > hi) return empty();
    return bounded(lo, hi);
  }

  double clamp(double x) const {
    return std::min(std::max(x, lo_), hi_);
  }

  /// +inf for unbounded intervals, 0 for the empty one.
  double width() const {
    if (empty_) return 0.0;
    return hi_ - lo_;
  }

  bool operator==(const ExtendedInterval& o) const {
    if (empty_ != o.empty_) return false;
    if (empty_) return true;
    return lo_ == o.lo_ && hi_ == o.hi_;
  }

 private:
  double lo_ = -std::numeric_limits<double>::infinity();
  double hi_ = std::numeric_limits<double>::infinity();
  bool empty_ = false;
};

}  // namespace wassci
