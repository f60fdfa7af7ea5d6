#include "slogcert/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slogcert/ra_catalog.hpp"

namespace slogcert {

int fcpx(const Term& t) {
  int inner = 0;
  for (const auto& c : t.children()) inner = std::max(inner, fcpx(c));
  return t.kind() == TermKind::Phi ? inner + 1 : inner;
}

int constant_growth(double c) {
  const double a = std::abs(c);
  int s = 0;
  double bound = 0.0;  // exp_s(0)
  while (a > bound) {
    bound = std::exp(bound);
    ++s;
  }
  return s;
}

Interval global_range(const Term& t, const AbelFunction& abel) {
  switch (t.kind()) {
    case TermKind::Var:
      return Interval::entire();
    case TermKind::Const:
      return Interval(t.constant_value());
    case TermKind::Add:
      return global_range(t.child(0), abel) + global_range(t.child(1), abel);
    case TermKind::Mul:
      if (t.is_square()) return sqr(global_range(t.child(0), abel));
      return global_range(t.child(0), abel) * global_range(t.child(1), abel);
    case TermKind::Neg:
      return -global_range(t.child(0), abel);
    case TermKind::Exp:
      return exp(global_range(t.child(0), abel));
    case TermKind::Log: {
      const Interval a = global_range(t.child(0), abel);
      if (a.lo() > 0.0) return log(a);
      if (a.hi() <= 0.0) throw DomainError("log: argument never positive", true);
      return a.hi() == std::numeric_limits<double>::infinity()
                 ? Interval::entire()
                 : Interval(-std::numeric_limits<double>::infinity(), log(Interval(a.hi())).hi());
    }
    case TermKind::RA: {
      const double s = t.primitive().sup_abs;
      return Interval(-s, s);
    }
    case TermKind::Phi: {
      const Interval a = global_range(t.child(0), abel);
      if (t.phi_order() == 0) return abel.enclose(a);
      if (t.phi_order() == 1) return Interval(0.0, abel.sup_dphi());
      return Interval::entire();
    }
  }
  return Interval::entire();
}

int growth_exponent(const Term& t, const AbelFunction& abel) {
  switch (t.kind()) {
    case TermKind::Var:
      return 0;
    case TermKind::Const:
      return constant_growth(t.constant_value());
    case TermKind::Neg:
      return growth_exponent(t.child(0), abel);
    case TermKind::Add:
    case TermKind::Mul:
      return std::max(growth_exponent(t.child(0), abel), growth_exponent(t.child(1), abel)) + 1;
    case TermKind::Exp:
      return growth_exponent(t.child(0), abel) + 1;
    case TermKind::Log: {
      const int inner = growth_exponent(t.child(0), abel);
      Interval a;
      try {
        a = global_range(t.child(0), abel);
      } catch (const DomainError&) {
        throw GrowthError("growth: log argument has no positive range");
      }
      if (!(a.lo() > 0.0)) {
        throw GrowthError("growth: log argument may approach the domain boundary (unbounded pathway)");
      }
      return std::max(inner, constant_growth(std::abs(std::log(a.lo())) * (1.0 + 1e-12)));
    }
    case TermKind::RA:
      return constant_growth(t.primitive().sup_abs);
    case TermKind::Phi: {
      if (t.phi_order() == 1) return constant_growth(abel.sup_dphi());
      if (t.phi_order() > 1) throw GrowthError("growth: higher phi derivatives are not supported");
      const int inner = growth_exponent(t.child(0), abel);
      Interval a;
      try {
        a = global_range(t.child(0), abel);
      } catch (const DomainError&) {
        a = Interval::entire();
      }
      return std::max(inner, a.lo() >= 0.0 ? 1 : 2);
    }
  }
  throw GrowthError("growth: unknown node");
}

}  // namespace slogcert
