#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "slogcert/interval.hpp"
#include "slogcert/term.hpp"

namespace slogcert {

/// A restricted-analytic primitive: a smooth real function on a compact
/// interval, with point and interval evaluators for itself and its first
/// derivative, plus the symbolic rule used by `differentiate`.
struct RAPrimitive {
  std::string name;
  Interval domain;
  /// sup |f| over the domain (upper bound), used by growth analysis.
  double sup_abs = 0.0;
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::function<Interval(const Interval&)> value_enclosure;
  std::function<Interval(const Interval&)> derivative_enclosure;
  /// d/dx f(arg(x)) = derivative_term(arg) * d arg/dx.
  std::function<Term(const Term&)> derivative_term;

  /// Throws DomainError when x is outside the domain.
  void check_domain(double x) const;
  void check_domain(const Interval& x) const;
};

/// Named primitives known to the parser.
class RACatalog {
 public:
  /// sin, cos and atan restricted to [-c, c].
  static const RACatalog& standard();
  static RACatalog with_bound(double c);

  void add(std::shared_ptr<const RAPrimitive> primitive);
  std::shared_ptr<const RAPrimitive> find(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, std::shared_ptr<const RAPrimitive>> items_;
};

/// Piecewise polynomial on a uniform knot grid over [lo, hi]; each piece is
/// stored in the local coordinate t in [0, 1]. Used as the replacement
/// primitive when a phi-node is restricted to a compact argument range.
class PiecewisePolynomial {
 public:
  PiecewisePolynomial(double lo, double hi, std::vector<std::vector<double>> pieces);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::size_t piece_count() const { return pieces_.size(); }
  double value(double x) const;
  Interval enclose(const Interval& x) const;
  PiecewisePolynomial derivative() const;
  double sup_abs() const;

 private:
  std::size_t piece_index(double x) const;
  Interval piece_enclosure(std::size_t k, double t0, double t1) const;

  double lo_;
  double hi_;
  double h_;
  std::vector<std::vector<double>> pieces_;
  std::vector<Interval> piece_range_;
  // sparse tables for O(1) range hulls over whole pieces
  std::vector<std::vector<double>> table_min_;
  std::vector<std::vector<double>> table_max_;
};

/// Cubic Hermite interpolant of f on `pieces` uniform pieces of [lo, hi],
/// from values and first derivatives at the knots.
PiecewisePolynomial hermite_interpolant(const std::function<double(double)>& f,
                                        const std::function<double(double)>& df, double lo,
                                        double hi, std::size_t pieces);

/// Wraps a piecewise polynomial as a primitive whose derivative chain is
/// built from exact piecewise derivatives.
std::shared_ptr<const RAPrimitive> make_piecewise_primitive(std::string name,
                                                            PiecewisePolynomial poly);

}  // namespace slogcert
