#include "slogcert/interval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

namespace slogcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double down(double x) { return std::nextafter(x, -kInf); }
double up(double x) { return std::nextafter(x, kInf); }

// Endpoint product with the interval-arithmetic convention 0 * inf = 0.
double endpoint_mul(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

// Does [lo, hi] (padded by slack) contain phase + 2k*pi for some integer k?
bool hits_phase(double lo, double hi, double phase) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double slack = 8.0 * std::numeric_limits<double>::epsilon() *
                           std::max({1.0, std::abs(lo), std::abs(hi)});
  const double k = std::ceil((lo - slack - phase) / two_pi);
  return phase + k * two_pi <= hi + slack;
}

}  // namespace

Interval::Interval(double v) : lo_(v), hi_(v) {
  if (std::isnan(v)) throw std::invalid_argument("Interval: NaN endpoint");
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (std::isnan(lo) || std::isnan(hi)) throw std::invalid_argument("Interval: NaN endpoint");
  if (lo > hi) throw std::invalid_argument("Interval: lo > hi");
}

Interval Interval::entire() { return Interval(-kInf, kInf); }

double Interval::mid() const noexcept {
  if (lo_ == -kInf && hi_ == kInf) return 0.0;
  if (lo_ == -kInf) return -std::numeric_limits<double>::max();
  if (hi_ == kInf) return std::numeric_limits<double>::max();
  return lo_ + 0.5 * (hi_ - lo_);
}

double Interval::mag() const noexcept { return std::max(std::abs(lo_), std::abs(hi_)); }

double Interval::mig() const noexcept {
  if (lo_ <= 0.0 && hi_ >= 0.0) return 0.0;
  return std::min(std::abs(lo_), std::abs(hi_));
}

bool Interval::is_bounded() const noexcept { return std::isfinite(lo_) && std::isfinite(hi_); }

Interval outward(double lo, double hi) { return Interval(down(lo), up(hi)); }

Interval operator+(const Interval& a, const Interval& b) {
  return outward(a.lo() + b.lo(), a.hi() + b.hi());
}

Interval operator-(const Interval& a, const Interval& b) {
  return outward(a.lo() - b.hi(), a.hi() - b.lo());
}

Interval operator-(const Interval& a) { return Interval(-a.hi(), -a.lo()); }

Interval operator*(const Interval& a, const Interval& b) {
  const double p[4] = {endpoint_mul(a.lo(), b.lo()), endpoint_mul(a.lo(), b.hi()),
                       endpoint_mul(a.hi(), b.lo()), endpoint_mul(a.hi(), b.hi())};
  return outward(*std::min_element(p, p + 4), *std::max_element(p, p + 4));
}

Interval inv(const Interval& a) {
  if (a.contains(0.0)) throw DomainError("division by an interval containing 0", a.is_point());
  return Interval(down(1.0 / a.hi()), up(1.0 / a.lo()));
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains(0.0)) throw DomainError("division by an interval containing 0", b.is_point());
  if (!a.is_bounded() || !b.is_bounded()) return a * inv(b);
  const double p[4] = {a.lo() / b.lo(), a.lo() / b.hi(), a.hi() / b.lo(), a.hi() / b.hi()};
  return outward(*std::min_element(p, p + 4), *std::max_element(p, p + 4));
}

Interval& Interval::operator+=(const Interval& o) { return *this = *this + o; }
Interval& Interval::operator-=(const Interval& o) { return *this = *this - o; }
Interval& Interval::operator*=(const Interval& o) { return *this = *this * o; }

Interval hull(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

std::optional<Interval> intersect(const Interval& a, const Interval& b) {
  const double lo = std::max(a.lo(), b.lo());
  const double hi = std::min(a.hi(), b.hi());
  if (lo > hi) return std::nullopt;
  return Interval(lo, hi);
}

Interval sqr(const Interval& a) {
  const double l = a.mig();
  const double h = a.mag();
  return Interval(std::max(0.0, down(l * l)), up(h * h));
}

Interval exp(const Interval& a) {
  return Interval(std::max(0.0, down(std::exp(a.lo()))), up(std::exp(a.hi())));
}

Interval log(const Interval& a) {
  if (a.lo() <= 0.0) throw DomainError("log: argument not positive", a.hi() <= 0.0);
  return outward(std::log(a.lo()), std::log(a.hi()));
}

Interval sin(const Interval& a) {
  if (!a.is_bounded() || a.width() >= 2.0 * std::numbers::pi) return Interval(-1.0, 1.0);
  double lo = std::min(std::sin(a.lo()), std::sin(a.hi()));
  double hi = std::max(std::sin(a.lo()), std::sin(a.hi()));
  lo = std::max(-1.0, down(lo));
  hi = std::min(1.0, up(hi));
  if (hits_phase(a.lo(), a.hi(), 0.5 * std::numbers::pi)) hi = 1.0;
  if (hits_phase(a.lo(), a.hi(), -0.5 * std::numbers::pi)) lo = -1.0;
  return Interval(lo, hi);
}

Interval cos(const Interval& a) {
  if (!a.is_bounded() || a.width() >= 2.0 * std::numbers::pi) return Interval(-1.0, 1.0);
  double lo = std::min(std::cos(a.lo()), std::cos(a.hi()));
  double hi = std::max(std::cos(a.lo()), std::cos(a.hi()));
  lo = std::max(-1.0, down(lo));
  hi = std::min(1.0, up(hi));
  if (hits_phase(a.lo(), a.hi(), 0.0)) hi = 1.0;
  if (hits_phase(a.lo(), a.hi(), std::numbers::pi)) lo = -1.0;
  return Interval(lo, hi);
}

Interval atan(const Interval& a) {
  constexpr double half_pi_up = 1.5707963267948968;
  return Interval(std::max(-half_pi_up, down(std::atan(a.lo()))),
                  std::min(half_pi_up, up(std::atan(a.hi()))));
}

std::ostream& operator<<(std::ostream& os, const Interval& x) {
  return os << '[' << x.lo() << ", " << x.hi() << ']';
}

// ---------------------------------------------------------------- Box

Box::Box(std::vector<Interval> coords) : coords_(std::move(coords)) {}
Box::Box(std::initializer_list<Interval> coords) : coords_(coords) {}

Box Box::cube(std::size_t n, double r) {
  return Box(std::vector<Interval>(n, Interval(-r, r)));
}

Box Box::point(const std::vector<double>& x) {
  std::vector<Interval> c;
  c.reserve(x.size());
  for (double v : x) c.emplace_back(v);
  return Box(std::move(c));
}

std::vector<double> Box::mid() const {
  std::vector<double> m;
  m.reserve(coords_.size());
  for (const auto& c : coords_) m.push_back(c.mid());
  return m;
}

double Box::max_width() const {
  double w = 0.0;
  for (const auto& c : coords_) w = std::max(w, c.width());
  return w;
}

std::size_t Box::widest() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < coords_.size(); ++i) {
    if (coords_[i].width() > coords_[best].width()) best = i;
  }
  return best;
}

bool Box::contains(const Box& other) const {
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (!coords_[i].contains(other[i])) return false;
  }
  return true;
}

bool Box::contains(const std::vector<double>& x) const {
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (!coords_[i].contains(x[i])) return false;
  }
  return true;
}

bool Box::interior_contains(const Box& other) const {
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (!coords_[i].interior_contains(other[i])) return false;
  }
  return true;
}

bool Box::intersects(const Box& other) const {
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (!coords_[i].intersects(other[i])) return false;
  }
  return true;
}

std::optional<Box> intersect(const Box& a, const Box& b) {
  std::vector<Interval> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto c = intersect(a[i], b[i]);
    if (!c) return std::nullopt;
    out.push_back(*c);
  }
  return Box(std::move(out));
}

Box hull(const Box& a, const Box& b) {
  std::vector<Interval> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(hull(a[i], b[i]));
  return Box(std::move(out));
}

std::pair<Box, Box> subdivide(const Box& box) {
  if (box.size() == 0 || box.max_width() <= 0.0) {
    throw std::invalid_argument("subdivide: box has zero width");
  }
  const std::size_t k = box.widest();
  const double m = box[k].mid();
  Box left = box;
  Box right = box;
  left[k] = Interval(box[k].lo(), m);
  right[k] = Interval(m, box[k].hi());
  return {std::move(left), std::move(right)};
}

std::ostream& operator<<(std::ostream& os, const Box& b) {
  os << '{';
  for (std::size_t i = 0; i < b.size(); ++i) os << (i ? " x " : "") << b[i];
  return os << '}';
}

}  // namespace slogcert
