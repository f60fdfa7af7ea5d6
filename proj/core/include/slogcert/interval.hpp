#pragma once

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace slogcert {

/// Raised when a partial primitive (log, a restricted-analytic function,
/// the seed inverse) is applied outside its domain. `total` is set when the
/// whole argument lies outside the domain, so a caller working on boxes can
/// discard the box instead of refining it.
class DomainError : public std::runtime_error {
 public:
  DomainError(const std::string& what, bool total)
      : std::runtime_error(what), total_(total) {}
  bool total() const noexcept { return total_; }

 private:
  bool total_;
};

/// Closed interval [lo, hi] with outward-rounded arithmetic.
///
/// Every operation rounds to nearest and then widens each endpoint by one
/// ulp, so results enclose the exact real result. Endpoints may be infinite;
/// the empty interval is not representable (use std::optional).
class Interval {
 public:
  constexpr Interval() = default;
  Interval(double v);  // NOLINT: point intervals convert implicitly
  Interval(double lo, double hi);

  static Interval entire();

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double mid() const noexcept;
  double width() const noexcept { return hi_ - lo_; }
  double mag() const noexcept;  // max |x|
  double mig() const noexcept;  // min |x|

  bool is_point() const noexcept { return lo_ == hi_; }
  bool is_bounded() const noexcept;
  bool contains(double x) const noexcept { return lo_ <= x && x <= hi_; }
  bool contains(const Interval& other) const noexcept {
    return lo_ <= other.lo_ && other.hi_ <= hi_;
  }
  /// other lies in the open interior of *this.
  bool interior_contains(const Interval& other) const noexcept {
    return lo_ < other.lo_ && other.hi_ < hi_;
  }
  bool intersects(const Interval& other) const noexcept {
    return lo_ <= other.hi_ && other.lo_ <= hi_;
  }

  Interval& operator+=(const Interval& o);
  Interval& operator-=(const Interval& o);
  Interval& operator*=(const Interval& o);

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
/// Throws DomainError when b contains 0.
Interval operator/(const Interval& a, const Interval& b);
Interval inv(const Interval& a);

Interval hull(const Interval& a, const Interval& b);
std::optional<Interval> intersect(const Interval& a, const Interval& b);

Interval sqr(const Interval& a);
Interval exp(const Interval& a);
/// Throws DomainError unless a.lo() > 0.
Interval log(const Interval& a);
Interval sin(const Interval& a);
Interval cos(const Interval& a);
Interval atan(const Interval& a);

/// Widens [lo, hi] outward by one ulp on each side.
Interval outward(double lo, double hi);

std::ostream& operator<<(std::ostream& os, const Interval& x);

/// Axis-aligned box: a nonempty vector of intervals.
class Box {
 public:
  Box() = default;
  explicit Box(std::vector<Interval> coords);
  Box(std::initializer_list<Interval> coords);

  /// The cube [-r, r]^n.
  static Box cube(std::size_t n, double r);
  static Box point(const std::vector<double>& x);

  std::size_t size() const noexcept { return coords_.size(); }
  const Interval& operator[](std::size_t i) const { return coords_[i]; }
  Interval& operator[](std::size_t i) { return coords_[i]; }
  auto begin() const { return coords_.begin(); }
  auto end() const { return coords_.end(); }
  const std::vector<Interval>& coords() const noexcept { return coords_; }

  std::vector<double> mid() const;
  double max_width() const;
  /// Index of the widest coordinate; ties go to the lowest index.
  std::size_t widest() const;
  bool contains(const Box& other) const;
  bool contains(const std::vector<double>& x) const;
  bool interior_contains(const Box& other) const;
  bool intersects(const Box& other) const;

  friend bool operator==(const Box&, const Box&) = default;

 private:
  std::vector<Interval> coords_;
};

std::optional<Box> intersect(const Box& a, const Box& b);
Box hull(const Box& a, const Box& b);

/// Bisects the widest coordinate at its midpoint (ties: lowest index).
/// Throws std::invalid_argument for a zero-width box.
std::pair<Box, Box> subdivide(const Box& box);

std::ostream& operator<<(std::ostream& os, const Box& b);

}  // namespace slogcert
