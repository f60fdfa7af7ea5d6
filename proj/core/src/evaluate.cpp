#include "slogcert/evaluate.hpp"

#include <cmath>
#include <stdexcept>

#include "slogcert/ra_catalog.hpp"

namespace slogcert {

const AbelFunction& default_abel() {
  static const AbelFunction phi = AbelFunction::build(3, 1e-8);
  return phi;
}

namespace {

template <class S>
struct Scalar;

template <>
struct Scalar<double> {
  static double exp(double x) { return std::exp(x); }
  static double log(double x) {
    if (!(x > 0.0)) throw DomainError("log: argument not positive", true);
    return std::log(x);
  }
  static double sqr(double x) { return x * x; }
  static double ra(const RAPrimitive& p, double x) {
    p.check_domain(x);
    return p.value(x);
  }
  static double dra(const RAPrimitive& p, double x) { return p.derivative(x); }
  static double phi(const AbelFunction& a, int k, double x) { return a.derivative(x, k); }
  static double div(double a, double b) { return a / b; }
};

template <>
struct Scalar<Interval> {
  static Interval exp(const Interval& x) { return slogcert::exp(x); }
  static Interval log(const Interval& x) { return slogcert::log(x); }
  static Interval sqr(const Interval& x) { return slogcert::sqr(x); }
  static Interval ra(const RAPrimitive& p, const Interval& x) {
    p.check_domain(x);
    return p.value_enclosure(x);
  }
  static Interval dra(const RAPrimitive& p, const Interval& x) { return p.derivative_enclosure(x); }
  static Interval phi(const AbelFunction& a, int k, const Interval& x) {
    return a.enclose_derivative(x, k);
  }
  static Interval div(const Interval& a, const Interval& b) { return a / b; }
};

template <class S>
struct Dual {
  S v;
  std::vector<S> d;
};

void check_phi_order(int k) {
  if (k + 1 > AbelFunction::kMaxOrder) {
    throw std::invalid_argument("phi derivative order beyond supported range");
  }
}

// Plain evaluation.
template <class S, class Input>
S value(const Term& t, const Input& x, const AbelFunction& abel) {
  using Ops = Scalar<S>;
  switch (t.kind()) {
    case TermKind::Var:
      if (t.var_index() >= x.size()) throw std::invalid_argument("eval: point has too few coordinates");
      return S(x[t.var_index()]);
    case TermKind::Const:
      return S(t.constant_value());
    case TermKind::Add:
      return value<S>(t.child(0), x, abel) + value<S>(t.child(1), x, abel);
    case TermKind::Mul:
      if (t.is_square()) return Ops::sqr(value<S>(t.child(0), x, abel));
      return value<S>(t.child(0), x, abel) * value<S>(t.child(1), x, abel);
    case TermKind::Neg:
      return -value<S>(t.child(0), x, abel);
    case TermKind::Exp:
      return Ops::exp(value<S>(t.child(0), x, abel));
    case TermKind::Log:
      return Ops::log(value<S>(t.child(0), x, abel));
    case TermKind::RA:
      return Ops::ra(t.primitive(), value<S>(t.child(0), x, abel));
    case TermKind::Phi:
      return Ops::phi(abel, t.phi_order(), value<S>(t.child(0), x, abel));
  }
  throw std::logic_error("eval: unknown node");
}

// Forward mode with n-dimensional tangents; child tangents are reused in place.
template <class S, class Input>
Dual<S> dual(const Term& t, const Input& x, std::size_t n, const AbelFunction& abel) {
  using Ops = Scalar<S>;
  auto chain = [](Dual<S>& a, S v, const S& dv) {
    a.v = std::move(v);
    for (auto& di : a.d) di = dv * di;
    return std::move(a);
  };
  switch (t.kind()) {
    case TermKind::Var: {
      if (t.var_index() >= x.size()) throw std::invalid_argument("eval: point has too few coordinates");
      Dual<S> r{S(x[t.var_index()]), std::vector<S>(n, S(0.0))};
      if (t.var_index() < n) r.d[t.var_index()] = S(1.0);
      return r;
    }
    case TermKind::Const:
      return {S(t.constant_value()), std::vector<S>(n, S(0.0))};
    case TermKind::Add: {
      Dual<S> a = dual<S>(t.child(0), x, n, abel);
      const Dual<S> b = dual<S>(t.child(1), x, n, abel);
      a.v = a.v + b.v;
      for (std::size_t i = 0; i < n; ++i) a.d[i] = a.d[i] + b.d[i];
      return a;
    }
    case TermKind::Mul: {
      Dual<S> a = dual<S>(t.child(0), x, n, abel);
      if (t.is_square()) {
        const S v = Ops::sqr(a.v);
        const S dv = S(2.0) * a.v;
        return chain(a, v, dv);
      }
      const Dual<S> b = dual<S>(t.child(1), x, n, abel);
      for (std::size_t i = 0; i < n; ++i) a.d[i] = a.d[i] * b.v + a.v * b.d[i];
      a.v = a.v * b.v;
      return a;
    }
    case TermKind::Neg: {
      Dual<S> a = dual<S>(t.child(0), x, n, abel);
      a.v = -a.v;
      for (auto& di : a.d) di = -di;
      return a;
    }
    case TermKind::Exp: {
      Dual<S> a = dual<S>(t.child(0), x, n, abel);
      const S e = Ops::exp(a.v);
      return chain(a, e, e);
    }
    case TermKind::Log: {
      Dual<S> a = dual<S>(t.child(0), x, n, abel);
      const S l = Ops::log(a.v);
      const S dl = Ops::div(S(1.0), a.v);
      return chain(a, l, dl);
    }
    case TermKind::RA: {
      Dual<S> a = dual<S>(t.child(0), x, n, abel);
      const S v = Ops::ra(t.primitive(), a.v);
      const S dv = Ops::dra(t.primitive(), a.v);
      return chain(a, v, dv);
    }
    case TermKind::Phi: {
      Dual<S> a = dual<S>(t.child(0), x, n, abel);
      check_phi_order(t.phi_order());
      const S v = Ops::phi(abel, t.phi_order(), a.v);
      const S dv = Ops::phi(abel, t.phi_order() + 1, a.v);
      return chain(a, v, dv);
    }
  }
  throw std::logic_error("eval: unknown node");
}

}  // namespace

double eval(const Term& t, std::span<const double> x, const AbelFunction& abel) {
  return value<double>(t, x, abel);
}

std::vector<double> gradient(const Term& t, std::span<const double> x, const AbelFunction& abel) {
  return dual<double>(t, x, x.size(), abel).d;
}

std::pair<double, std::vector<double>> value_and_gradient(const Term& t, std::span<const double> x,
                                                          const AbelFunction& abel) {
  auto r = dual<double>(t, x, x.size(), abel);
  return {r.v, std::move(r.d)};
}

Interval interval_eval(const Term& t, const Box& box, const AbelFunction& abel) {
  return value<Interval>(t, box.coords(), abel);
}

std::pair<Interval, std::vector<Interval>> interval_value_and_gradient(const Term& t,
                                                                       const Box& box,
                                                                       const AbelFunction& abel) {
  auto r = dual<Interval>(t, box.coords(), box.size(), abel);
  return {r.v, std::move(r.d)};
}

}  // namespace slogcert
