#include "slogcert/term.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "slogcert/ra_catalog.hpp"

namespace slogcert {

struct Term::Node {
  TermKind kind = TermKind::Const;
  std::size_t index = 0;
  double value = 0.0;
  int order = 0;
  bool square = false;
  std::shared_ptr<const RAPrimitive> primitive;
  std::vector<Term> children;
};

namespace {

std::shared_ptr<Term::Node> make_node(TermKind kind, std::vector<Term> children) {
  auto n = std::make_shared<Term::Node>();
  n->kind = kind;
  n->children = std::move(children);
  return n;
}

}  // namespace

Term::Term() : Term(constant(0.0)) {}

Term Term::variable(std::size_t index) {
  auto n = make_node(TermKind::Var, {});
  n->index = index;
  return Term(std::move(n));
}

Term Term::constant(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("Term::constant: non-finite value");
  auto n = make_node(TermKind::Const, {});
  n->value = value;
  return Term(std::move(n));
}

Term Term::add(Term a, Term b) { return Term(make_node(TermKind::Add, {std::move(a), std::move(b)})); }

Term Term::mul(Term a, Term b) {
  const bool sq = structurally_equal(a, b);
  auto n = make_node(TermKind::Mul, {std::move(a), std::move(b)});
  n->square = sq;
  return Term(std::move(n));
}

Term Term::neg(Term a) { return Term(make_node(TermKind::Neg, {std::move(a)})); }
Term Term::exp(Term a) { return Term(make_node(TermKind::Exp, {std::move(a)})); }
Term Term::log(Term a) { return Term(make_node(TermKind::Log, {std::move(a)})); }

Term Term::ra(std::shared_ptr<const RAPrimitive> primitive, Term a) {
  if (!primitive) throw std::invalid_argument("Term::ra: null primitive");
  auto n = make_node(TermKind::RA, {std::move(a)});
  n->primitive = std::move(primitive);
  return Term(std::move(n));
}

Term Term::phi(Term a, int order) {
  if (order < 0) throw std::invalid_argument("Term::phi: negative order");
  auto n = make_node(TermKind::Phi, {std::move(a)});
  n->order = order;
  return Term(std::move(n));
}

TermKind Term::kind() const { return node_->kind; }
std::size_t Term::var_index() const { return node_->index; }
double Term::constant_value() const { return node_->value; }
int Term::phi_order() const { return node_->order; }
const RAPrimitive& Term::primitive() const { return *node_->primitive; }
const std::shared_ptr<const RAPrimitive>& Term::primitive_ptr() const { return node_->primitive; }
const std::vector<Term>& Term::children() const { return node_->children; }
bool Term::is_square() const { return node_->square; }

Term operator+(const Term& a, const Term& b) { return Term::add(a, b); }
Term operator-(const Term& a, const Term& b) { return Term::add(a, Term::neg(b)); }
Term operator*(const Term& a, const Term& b) { return Term::mul(a, b); }
Term operator-(const Term& a) { return Term::neg(a); }

bool structurally_equal(const Term& a, const Term& b) {
  if (a.id() == b.id()) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::Var:
      return a.var_index() == b.var_index();
    case TermKind::Const:
      return a.constant_value() == b.constant_value();
    case TermKind::Phi:
      if (a.phi_order() != b.phi_order()) return false;
      break;
    case TermKind::RA:
      if (a.primitive_ptr() != b.primitive_ptr() && a.primitive().name != b.primitive().name) {
        return false;
      }
      break;
    default:
      break;
  }
  if (a.arity() != b.arity()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (!structurally_equal(a.child(i), b.child(i))) return false;
  }
  return true;
}

std::size_t variable_span(const Term& t) {
  if (t.kind() == TermKind::Var) return t.var_index() + 1;
  std::size_t span = 0;
  for (const auto& c : t.children()) span = std::max(span, variable_span(c));
  return span;
}

std::size_t node_count(const Term& t) {
  std::size_t n = 1;
  for (const auto& c : t.children()) n += node_count(c);
  return n;
}

// ------------------------------------------------------------- printing

namespace {

int level(const Term& t) {
  switch (t.kind()) {
    case TermKind::Add:
      return 1;
    case TermKind::Mul:
      return 2;
    case TermKind::Neg:
      return 3;
    case TermKind::Const:
      return t.constant_value() < 0.0 || std::signbit(t.constant_value()) ? 3 : 4;
    default:
      return 4;
  }
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string phi_name(int order) {
  if (order == 0) return "phi";
  if (order == 1) return "dphi";
  return "d" + std::to_string(order) + "phi";
}

void print(const Term& t, std::span<const std::string> names, int min_level, std::string& out);

void print_call(const std::string& fn, const Term& arg, std::span<const std::string> names,
                std::string& out) {
  out += fn;
  out += '(';
  print(arg, names, 1, out);
  out += ')';
}

void print(const Term& t, std::span<const std::string> names, int min_level, std::string& out) {
  const bool paren = level(t) < min_level;
  if (paren) out += '(';
  switch (t.kind()) {
    case TermKind::Var:
      if (t.var_index() < names.size()) {
        out += names[t.var_index()];
      } else {
        out += 'v';
        out += std::to_string(t.var_index());
      }
      break;
    case TermKind::Const:
      out += format_number(t.constant_value());
      break;
    case TermKind::Add:
      print(t.child(0), names, 1, out);
      if (t.child(1).kind() == TermKind::Neg) {
        out += " - ";
        print(t.child(1).child(0), names, 2, out);
      } else {
        out += " + ";
        print(t.child(1), names, 2, out);
      }
      break;
    case TermKind::Mul:
      print(t.child(0), names, 2, out);
      out += " * ";
      print(t.child(1), names, 3, out);
      break;
    case TermKind::Neg:
      out += '-';
      print(t.child(0), names, 3, out);
      break;
    case TermKind::Exp:
      print_call("exp", t.child(0), names, out);
      break;
    case TermKind::Log:
      print_call("log", t.child(0), names, out);
      break;
    case TermKind::RA:
      print_call(t.primitive().name, t.child(0), names, out);
      break;
    case TermKind::Phi:
      print_call(phi_name(t.phi_order()), t.child(0), names, out);
      break;
  }
  if (paren) out += ')';
}

}  // namespace

std::string to_string(const Term& t, std::span<const std::string> names) {
  std::string out;
  print(t, names, 1, out);
  return out;
}

// ------------------------------------------------------- folding helpers

namespace {

bool is_const(const Term& t, double v) {
  return t.kind() == TermKind::Const && t.constant_value() == v;
}

}  // namespace

namespace fold {

Term add(const Term& a, const Term& b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  if (a.kind() == TermKind::Const && b.kind() == TermKind::Const) {
    const double s = a.constant_value() + b.constant_value();
    if (std::isfinite(s)) return Term::constant(s);
  }
  return Term::add(a, b);
}

Term mul(const Term& a, const Term& b) {
  if (is_const(a, 0.0) || is_const(b, 0.0)) return Term::constant(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (a.kind() == TermKind::Const && b.kind() == TermKind::Const) {
    const double p = a.constant_value() * b.constant_value();
    if (std::isfinite(p)) return Term::constant(p);
  }
  return Term::mul(a, b);
}

Term neg(const Term& a) {
  if (a.kind() == TermKind::Const) return Term::constant(-a.constant_value());
  if (a.kind() == TermKind::Neg) return a.child(0);
  return Term::neg(a);
}

Term sum(std::span<const Term> terms) {
  if (terms.empty()) return Term::constant(0.0);
  Term acc = terms[0];
  for (std::size_t i = 1; i < terms.size(); ++i) acc = add(acc, terms[i]);
  return acc;
}

Term square(const Term& a) {
  if (a.kind() == TermKind::Const) return mul(a, a);
  return Term::mul(a, a);
}

}  // namespace fold

// ------------------------------------------------- substitution, calculus

Term substitute(const Term& t, std::span<const Term> replacement) {
  switch (t.kind()) {
    case TermKind::Var:
      return t.var_index() < replacement.size() ? replacement[t.var_index()] : t;
    case TermKind::Const:
      return t;
    case TermKind::Add:
      return Term::add(substitute(t.child(0), replacement), substitute(t.child(1), replacement));
    case TermKind::Mul:
      return Term::mul(substitute(t.child(0), replacement), substitute(t.child(1), replacement));
    case TermKind::Neg:
      return Term::neg(substitute(t.child(0), replacement));
    case TermKind::Exp:
      return Term::exp(substitute(t.child(0), replacement));
    case TermKind::Log:
      return Term::log(substitute(t.child(0), replacement));
    case TermKind::RA:
      return Term::ra(t.primitive_ptr(), substitute(t.child(0), replacement));
    case TermKind::Phi:
      return Term::phi(substitute(t.child(0), replacement), t.phi_order());
  }
  return t;
}

Term differentiate(const Term& t, std::size_t index) {
  switch (t.kind()) {
    case TermKind::Var:
      return Term::constant(t.var_index() == index ? 1.0 : 0.0);
    case TermKind::Const:
      return Term::constant(0.0);
    case TermKind::Add:
      return fold::add(differentiate(t.child(0), index), differentiate(t.child(1), index));
    case TermKind::Mul: {
      const Term& a = t.child(0);
      const Term& b = t.child(1);
      const Term da = differentiate(a, index);
      if (t.is_square()) return fold::mul(fold::mul(Term::constant(2.0), a), da);
      return fold::add(fold::mul(da, b), fold::mul(a, differentiate(b, index)));
    }
    case TermKind::Neg:
      return fold::neg(differentiate(t.child(0), index));
    case TermKind::Exp:
      return fold::mul(t, differentiate(t.child(0), index));
    case TermKind::Log: {
      const Term da = differentiate(t.child(0), index);
      if (is_const(da, 0.0)) return da;
      return fold::mul(Term::exp(Term::neg(t)), da);
    }
    case TermKind::RA: {
      const Term da = differentiate(t.child(0), index);
      if (is_const(da, 0.0)) return da;
      return fold::mul(t.primitive().derivative_term(t.child(0)), da);
    }
    case TermKind::Phi: {
      const Term da = differentiate(t.child(0), index);
      if (is_const(da, 0.0)) return da;
      return fold::mul(Term::phi(t.child(0), t.phi_order() + 1), da);
    }
  }
  return Term::constant(0.0);
}

std::vector<Term> phi_nodes(const Term& t) {
  std::vector<Term> out;
  std::function<void(const Term&)> walk = [&](const Term& u) {
    if (u.kind() == TermKind::Phi) {
      const bool seen = std::any_of(out.begin(), out.end(),
                                    [&](const Term& v) { return structurally_equal(u, v); });
      if (!seen) out.push_back(u);
    }
    for (const auto& c : u.children()) walk(c);
  };
  walk(t);
  return out;
}

}  // namespace slogcert
