#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace slogcert {

struct RAPrimitive;

enum class TermKind { Var, Const, Add, Mul, Neg, Exp, Log, RA, Phi };

/// Immutable expression tree over indexed variables, real constants, +, *,
/// unary minus, exp, log, restricted-analytic primitives and the Abel
/// function. `Phi` nodes carry a derivative order: 0 is phi, 1 is dphi;
/// higher orders only arise from symbolic differentiation.
///
/// Copies share structure; a Term is safe to read from many threads.
class Term {
 public:
  struct Node;

  /// The constant 0.
  Term();

  static Term variable(std::size_t index);
  static Term constant(double value);
  static Term add(Term a, Term b);
  static Term mul(Term a, Term b);
  static Term neg(Term a);
  static Term exp(Term a);
  static Term log(Term a);
  static Term ra(std::shared_ptr<const RAPrimitive> primitive, Term a);
  static Term phi(Term a, int order = 0);

  TermKind kind() const;
  std::size_t var_index() const;
  double constant_value() const;
  int phi_order() const;
  const RAPrimitive& primitive() const;
  const std::shared_ptr<const RAPrimitive>& primitive_ptr() const;
  const std::vector<Term>& children() const;
  const Term& child(std::size_t i) const { return children()[i]; }
  std::size_t arity() const { return children().size(); }

  /// Mul node whose two operands are structurally equal (evaluated as a
  /// square so interval enclosures stay non-negative).
  bool is_square() const;

  const Node* id() const noexcept { return node_.get(); }

 private:
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Term operator+(const Term& a, const Term& b);
Term operator-(const Term& a, const Term& b);
Term operator*(const Term& a, const Term& b);
Term operator-(const Term& a);

bool structurally_equal(const Term& a, const Term& b);

/// One plus the largest variable index referenced, or 0 for closed terms.
std::size_t variable_span(const Term& t);

/// Number of nodes in the tree (shared subtrees counted per use).
std::size_t node_count(const Term& t);

/// Renders a term in the surface grammar. Terms produced by the parser
/// print back to text that parses to a structurally equal tree. Variables
/// without a name are printed as `v<index>`.
std::string to_string(const Term& t, std::span<const std::string> names);

/// Replaces Var(i) by replacement[i]; indices past the end are kept.
Term substitute(const Term& t, std::span<const Term> replacement);

/// Symbolic partial derivative with respect to variable `index`. Constant
/// zeros and ones are folded so derivative trees stay small.
Term differentiate(const Term& t, std::size_t index);

/// Folding builders used by derived constructions.
namespace fold {
Term add(const Term& a, const Term& b);
Term mul(const Term& a, const Term& b);
Term neg(const Term& a);
Term sum(std::span<const Term> terms);
Term square(const Term& a);
}  // namespace fold

/// Distinct Phi-nodes (by structure) in pre-order.
std::vector<Term> phi_nodes(const Term& t);

}  // namespace slogcert
