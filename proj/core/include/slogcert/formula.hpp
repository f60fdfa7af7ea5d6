#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slogcert/ra_catalog.hpp"
#include "slogcert/term.hpp"

namespace slogcert {

/// term REL 0
enum class Rel { Eq, Gt, Lt, Ge, Le, Ne };

const char* to_string(Rel r);

struct Atom {
  Term term;
  Rel rel = Rel::Eq;
};

/// Quantifier-free formula over atoms, before normalization.
class Formula {
 public:
  enum class Kind { True, False, Atom, Not, And, Or };

  static Formula truth(bool value);
  static Formula atom(Term t, Rel rel);
  static Formula negation(Formula f);
  static Formula conjunction(std::vector<Formula> parts);
  static Formula disjunction(std::vector<Formula> parts);

  Kind kind() const noexcept { return kind_; }
  const Atom& atom() const { return atom_; }
  const std::vector<Formula>& parts() const noexcept { return parts_; }

 private:
  Kind kind_ = Kind::True;
  Atom atom_;
  std::vector<Formula> parts_;
};

/// Disjunction of conjunctions; every atom is `= 0` or `> 0`. An empty
/// disjunction is false, an empty conjunction is true.
struct QFFormula {
  std::vector<std::vector<Atom>> dnf;

  bool is_false() const noexcept { return dnf.empty(); }
};

/// Parses formulas such as "x1*x1 + x2*x2 = 1 & !(x1 < 0)". Atoms compare
/// two terms with one of = != < <= > >=. Connectives: ! (not), & (and),
/// | (or), parentheses, and the constants true / false. Parentheses around
/// a comparison group formulas; otherwise they belong to the term.
/// Throws ParseError.
Formula parse_formula(std::string_view text, std::span<const std::string> names,
                      const RACatalog& catalog = RACatalog::standard());

/// Pushes negations to atoms, rewrites < <= >= != in terms of = and >, and
/// distributes to DNF. Formulas already in that shape come back unchanged.
QFFormula normalize(const Formula& f);

struct WilkieForm {
  /// variables 0..n-1 are the original ones, n..n+aux-1 the auxiliaries
  Term f;
  std::size_t aux = 0;
};

/// F = prod_i sum_j G_ij^2 with G = F for equalities and F u^2 - 1 (u fresh)
/// for strict inequalities. The formula's set is the projection of Z(F)
/// to the first n coordinates. A false formula gives F = 1.
WilkieForm wilkie_reduce(const QFFormula& f, std::size_t n);

/// k rows (l_1 .. l_n, l) with entries in [-1, 1], each meaning
/// l_1 x_1 + ... + l_n x_n = l.
struct AffineSubspace {
  std::size_t n = 0;
  std::vector<std::vector<double>> rows;

  /// Throws std::invalid_argument on shape or range violations.
  void validate() const;
};

/// F + sum_m (l_m . x - l_m0)^2 over the first L.n variables.
Term affine_restrict(const Term& f, const AffineSubspace& l);

std::string to_string(const QFFormula& f, std::span<const std::string> names);

}  // namespace slogcert
