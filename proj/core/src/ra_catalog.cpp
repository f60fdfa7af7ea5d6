#include "slogcert/ra_catalog.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace slogcert {

void RAPrimitive::check_domain(double x) const {
  if (!domain.contains(x)) {
    throw DomainError(name + ": argument outside restricted domain", true);
  }
}

void RAPrimitive::check_domain(const Interval& x) const {
  if (!domain.contains(x)) {
    throw DomainError(name + ": argument outside restricted domain", !domain.intersects(x));
  }
}

namespace {

std::shared_ptr<const RAPrimitive> make_cos(double c);

std::shared_ptr<const RAPrimitive> make_sin(double c) {
  auto p = std::make_shared<RAPrimitive>();
  p->name = "sin";
  p->domain = Interval(-c, c);
  p->sup_abs = 1.0;
  p->value = [](double x) { return std::sin(x); };
  p->derivative = [](double x) { return std::cos(x); };
  p->value_enclosure = [](const Interval& x) { return sin(x); };
  p->derivative_enclosure = [](const Interval& x) { return cos(x); };
  p->derivative_term = [c](const Term& a) { return Term::ra(make_cos(c), a); };
  return p;
}

std::shared_ptr<const RAPrimitive> make_cos(double c) {
  auto p = std::make_shared<RAPrimitive>();
  p->name = "cos";
  p->domain = Interval(-c, c);
  p->sup_abs = 1.0;
  p->value = [](double x) { return std::cos(x); };
  p->derivative = [](double x) { return -std::sin(x); };
  p->value_enclosure = [](const Interval& x) { return cos(x); };
  p->derivative_enclosure = [](const Interval& x) { return -sin(x); };
  p->derivative_term = [c](const Term& a) { return Term::neg(Term::ra(make_sin(c), a)); };
  return p;
}

std::shared_ptr<const RAPrimitive> make_atan(double c) {
  auto p = std::make_shared<RAPrimitive>();
  p->name = "atan";
  p->domain = Interval(-c, c);
  p->sup_abs = std::atan(c) * (1.0 + 4.0 * std::numeric_limits<double>::epsilon());
  p->value = [](double x) { return std::atan(x); };
  p->derivative = [](double x) { return 1.0 / (1.0 + x * x); };
  p->value_enclosure = [](const Interval& x) { return atan(x); };
  p->derivative_enclosure = [](const Interval& x) {
    const Interval d = Interval(1.0) + sqr(x);
    // 1/d for d >= 1
    return Interval(std::nextafter(1.0 / d.hi(), 0.0), std::nextafter(1.0 / d.lo(), 2.0));
  };
  // 1/(1+a^2) written with the primitives of the language
  p->derivative_term = [](const Term& a) {
    return Term::exp(Term::neg(Term::log(Term::add(Term::constant(1.0), Term::mul(a, a)))));
  };
  return p;
}

}  // namespace

const RACatalog& RACatalog::standard() {
  static const RACatalog catalog = with_bound(100.0);
  return catalog;
}

RACatalog RACatalog::with_bound(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("RACatalog: bound must be > 0");
  RACatalog cat;
  cat.add(make_sin(c));
  cat.add(make_cos(c));
  cat.add(make_atan(c));
  return cat;
}

void RACatalog::add(std::shared_ptr<const RAPrimitive> primitive) {
  items_[primitive->name] = std::move(primitive);
}

std::shared_ptr<const RAPrimitive> RACatalog::find(const std::string& name) const {
  auto it = items_.find(name);
  return it == items_.end() ? nullptr : it->second;
}

std::vector<std::string> RACatalog::names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : items_) out.push_back(k);
  return out;
}

// ------------------------------------------------- piecewise polynomials

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double horner(const std::vector<double>& c, double t) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

Interval horner(const std::vector<double>& c, const Interval& t) {
  Interval acc(0.0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + Interval(*it);
  return acc;
}

// Rounding error bound for Horner evaluation with 0 <= t <= 1.
double horner_pad(const std::vector<double>& c) {
  double s = 0.0;
  for (double v : c) s += std::abs(v);
  return 4.0 * static_cast<double>(c.size() + 2) * kEps * s;
}

// Range of a polynomial over [t0, t1] subset of [0, 1]: values at the ends and
// at interior critical points, padded for rounding. Degrees above three fall
// back to interval Horner on a few slices.
Interval poly_range(const std::vector<double>& c, double t0, double t1) {
  const std::size_t deg = c.empty() ? 0 : c.size() - 1;
  if (deg > 3) {
    constexpr int slices = 8;
    Interval out = horner(c, Interval(t0, t0 + (t1 - t0) / slices));
    for (int s = 1; s < slices; ++s) {
      const double a = t0 + (t1 - t0) * s / slices;
      const double b = s + 1 == slices ? t1 : t0 + (t1 - t0) * (s + 1) / slices;
      out = hull(out, horner(c, Interval(a, b)));
    }
    return out;
  }
  double lo = std::min(horner(c, t0), horner(c, t1));
  double hi = std::max(horner(c, t0), horner(c, t1));
  auto consider = [&](double t) {
    if (t > t0 && t < t1) {
      const double v = horner(c, t);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  };
  if (deg == 2 && c[2] != 0.0) {
    consider(-c[1] / (2.0 * c[2]));
  } else if (deg == 3) {
    // p'(t) = c1 + 2 c2 t + 3 c3 t^2
    const double a = 3.0 * c[3];
    const double b = 2.0 * c[2];
    const double cc = c[1];
    if (a == 0.0) {
      if (b != 0.0) consider(-cc / b);
    } else {
      const double disc = b * b - 4.0 * a * cc;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double q = -0.5 * (b + std::copysign(sq, b));
        if (q != 0.0) {
          consider(q / a);
          consider(cc / q);
        } else {
          consider(0.0);
        }
      }
    }
  }
  // a slightly misplaced critical point costs only second order; the pad
  // covers it together with evaluation rounding
  const double pad = 2.0 * horner_pad(c);
  return Interval(std::nextafter(lo - pad, -INFINITY), std::nextafter(hi + pad, INFINITY));
}

}  // namespace

PiecewisePolynomial::PiecewisePolynomial(double lo, double hi,
                                         std::vector<std::vector<double>> pieces)
    : lo_(lo), hi_(hi), pieces_(std::move(pieces)) {
  if (!(lo < hi) || pieces_.empty()) {
    throw std::invalid_argument("PiecewisePolynomial: need lo < hi and at least one piece");
  }
  h_ = (hi_ - lo_) / static_cast<double>(pieces_.size());
  piece_range_.reserve(pieces_.size());
  for (const auto& p : pieces_) piece_range_.push_back(poly_range(p, 0.0, 1.0));

  const std::size_t n = pieces_.size();
  table_min_.push_back({});
  table_max_.push_back({});
  for (const auto& r : piece_range_) {
    table_min_[0].push_back(r.lo());
    table_max_[0].push_back(r.hi());
  }
  for (std::size_t j = 1; (std::size_t{1} << j) <= n; ++j) {
    const std::size_t half = std::size_t{1} << (j - 1);
    const std::size_t len = n - (std::size_t{1} << j) + 1;
    std::vector<double> mn(len), mx(len);
    for (std::size_t k = 0; k < len; ++k) {
      mn[k] = std::min(table_min_[j - 1][k], table_min_[j - 1][k + half]);
      mx[k] = std::max(table_max_[j - 1][k], table_max_[j - 1][k + half]);
    }
    table_min_.push_back(std::move(mn));
    table_max_.push_back(std::move(mx));
  }
}

std::size_t PiecewisePolynomial::piece_index(double x) const {
  const double u = (x - lo_) / h_;
  if (u <= 0.0) return 0;
  const auto k = static_cast<std::size_t>(u);
  return std::min(k, pieces_.size() - 1);
}

double PiecewisePolynomial::value(double x) const {
  if (!(x >= lo_ && x <= hi_)) throw DomainError("piecewise polynomial: outside range", true);
  const std::size_t k = piece_index(x);
  const double t = std::clamp((x - lo_) / h_ - static_cast<double>(k), 0.0, 1.0);
  return horner(pieces_[k], t);
}

Interval PiecewisePolynomial::piece_enclosure(std::size_t k, double t0, double t1) const {
  t0 = std::clamp(t0, 0.0, 1.0);
  t1 = std::clamp(t1, 0.0, 1.0);
  if (t0 <= 0.0 && t1 >= 1.0) return piece_range_[k];
  return poly_range(pieces_[k], t0, t1);
}

Interval PiecewisePolynomial::enclose(const Interval& x) const {
  if (!(x.lo() >= lo_ && x.hi() <= hi_)) {
    throw DomainError("piecewise polynomial: outside range", !x.intersects(Interval(lo_, hi_)));
  }
  // local coordinates are rounded; widen by a few ulps of the piece index
  const double slack = 4.0 * kEps * static_cast<double>(pieces_.size());
  const double u0 = (x.lo() - lo_) / h_ - slack;
  const double u1 = (x.hi() - lo_) / h_ + slack;
  const auto index = [&](double u) {
    if (u <= 0.0) return std::size_t{0};
    return std::min(static_cast<std::size_t>(u), pieces_.size() - 1);
  };
  const std::size_t k0 = index(u0);
  const std::size_t k1 = index(u1);
  if (k0 == k1) return piece_enclosure(k0, u0 - k0, u1 - k0);
  Interval out = hull(piece_enclosure(k0, u0 - k0, 1.0), piece_enclosure(k1, 0.0, u1 - k1));
  if (k1 > k0 + 1) {
    const std::size_t a = k0 + 1;
    const std::size_t b = k1 - 1;
    const std::size_t j = std::bit_width(b - a + 1) - 1;
    const std::size_t w = std::size_t{1} << j;
    out = hull(out, Interval(std::min(table_min_[j][a], table_min_[j][b + 1 - w]),
                             std::max(table_max_[j][a], table_max_[j][b + 1 - w])));
  }
  return out;
}

PiecewisePolynomial PiecewisePolynomial::derivative() const {
  std::vector<std::vector<double>> d;
  d.reserve(pieces_.size());
  for (const auto& p : pieces_) {
    std::vector<double> q;
    for (std::size_t i = 1; i < p.size(); ++i) q.push_back(static_cast<double>(i) * p[i] / h_);
    if (q.empty()) q.push_back(0.0);
    d.push_back(std::move(q));
  }
  return PiecewisePolynomial(lo_, hi_, std::move(d));
}

double PiecewisePolynomial::sup_abs() const {
  double s = 0.0;
  for (const auto& r : piece_range_) s = std::max(s, r.mag());
  return s;
}

PiecewisePolynomial hermite_interpolant(const std::function<double(double)>& f,
                                        const std::function<double(double)>& df, double lo,
                                        double hi, std::size_t pieces) {
  if (pieces == 0) throw std::invalid_argument("hermite_interpolant: zero pieces");
  const double h = (hi - lo) / static_cast<double>(pieces);
  std::vector<double> fv(pieces + 1), dv(pieces + 1);
  for (std::size_t k = 0; k <= pieces; ++k) {
    const double x = k == pieces ? hi : lo + h * static_cast<double>(k);
    fv[k] = f(x);
    dv[k] = df(x) * h;  // slope in the local coordinate
  }
  std::vector<std::vector<double>> coef;
  coef.reserve(pieces);
  for (std::size_t k = 0; k < pieces; ++k) {
    const double p0 = fv[k], p1 = fv[k + 1], m0 = dv[k], m1 = dv[k + 1];
    coef.push_back({p0, m0, 3.0 * (p1 - p0) - 2.0 * m0 - m1, 2.0 * (p0 - p1) + m0 + m1});
  }
  return PiecewisePolynomial(lo, hi, std::move(coef));
}

std::shared_ptr<const RAPrimitive> make_piecewise_primitive(std::string name,
                                                            PiecewisePolynomial poly) {
  auto p = std::make_shared<RAPrimitive>();
  auto f = std::make_shared<const PiecewisePolynomial>(std::move(poly));
  auto df = std::make_shared<const PiecewisePolynomial>(f->derivative());
  p->name = std::move(name);
  p->domain = Interval(f->lo(), f->hi());
  p->sup_abs = f->sup_abs();
  p->value = [f](double x) { return f->value(x); };
  p->derivative = [df](double x) { return df->value(x); };
  p->value_enclosure = [f](const Interval& x) { return f->enclose(x); };
  p->derivative_enclosure = [df](const Interval& x) { return df->enclose(x); };
  p->derivative_term = [df, base = p->name](const Term& a) {
    return Term::ra(make_piecewise_primitive(base + "'", *df), a);
  };
  return p;
}

}  // namespace slogcert
