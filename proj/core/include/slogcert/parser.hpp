#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "slogcert/ra_catalog.hpp"
#include "slogcert/term.hpp"

namespace slogcert {

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, UnknownIdentifier, Arity };

  ParseError(Kind kind, std::size_t column, const std::string& message);

  Kind kind() const noexcept { return kind_; }
  /// 1-based column of the offending token (one past the end for
  /// unexpected end of input).
  std::size_t column() const noexcept { return column_; }

 private:
  Kind kind_;
  std::size_t column_;
};

/// Parses the term grammar
///
///   expr   := term (('+' | '-') term)*
///   term   := factor ('*' factor)*
///   factor := NUMBER | IDENT | '(' expr ')' | '-' factor | FUNC '(' expr ')'
///
/// FUNC is exp, log, phi, dphi, d<k>phi (k >= 2) or a catalog name.
/// Identifiers resolve by position in `names`; `a - b` is read as
/// `a + (-b)`.
Term parse_term(std::string_view text, std::span<const std::string> names,
                const RACatalog& catalog = RACatalog::standard());

/// x1, ..., xn.
std::vector<std::string> default_var_names(std::size_t n);

}  // namespace slogcert
