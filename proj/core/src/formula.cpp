#include "slogcert/formula.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

#include "slogcert/parser.hpp"

namespace slogcert {

const char* to_string(Rel r) {
  switch (r) {
    case Rel::Eq:
      return "=";
    case Rel::Gt:
      return ">";
    case Rel::Lt:
      return "<";
    case Rel::Ge:
      return ">=";
    case Rel::Le:
      return "<=";
    case Rel::Ne:
      return "!=";
  }
  return "?";
}

Formula Formula::truth(bool value) {
  Formula f;
  f.kind_ = value ? Kind::True : Kind::False;
  return f;
}

Formula Formula::atom(Term t, Rel rel) {
  Formula f;
  f.kind_ = Kind::Atom;
  f.atom_ = {std::move(t), rel};
  return f;
}

Formula Formula::negation(Formula g) {
  Formula f;
  f.kind_ = Kind::Not;
  f.parts_.push_back(std::move(g));
  return f;
}

Formula Formula::conjunction(std::vector<Formula> parts) {
  Formula f;
  f.kind_ = Kind::And;
  f.parts_ = std::move(parts);
  return f;
}

Formula Formula::disjunction(std::vector<Formula> parts) {
  Formula f;
  f.kind_ = Kind::Or;
  f.parts_ = std::move(parts);
  return f;
}

// --------------------------------------------------------------- parsing

namespace {

class FormulaParser {
 public:
  FormulaParser(std::string_view text, std::span<const std::string> names, const RACatalog& catalog)
      : s_(text), names_(names), catalog_(catalog) {}

  Formula parse() {
    Formula f = parse_or();
    skip();
    if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(ParseError::Kind::Syntax, pos_ + 1, msg);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  Formula parse_or() {
    std::vector<Formula> parts{parse_and()};
    while (peek('|')) {
      ++pos_;
      parts.push_back(parse_and());
    }
    return parts.size() == 1 ? std::move(parts[0]) : Formula::disjunction(std::move(parts));
  }

  Formula parse_and() {
    std::vector<Formula> parts{parse_unary()};
    while (peek('&')) {
      ++pos_;
      parts.push_back(parse_unary());
    }
    return parts.size() == 1 ? std::move(parts[0]) : Formula::conjunction(std::move(parts));
  }

  Formula parse_unary() {
    skip();
    if (pos_ >= s_.size()) fail("expected a formula before end of input");
    if (s_[pos_] == '!' && (pos_ + 1 >= s_.size() || s_[pos_ + 1] != '=')) {
      ++pos_;
      return Formula::negation(parse_unary());
    }
    if (s_[pos_] == '(') {
      const std::size_t close = matching(pos_);
      const std::string_view inner = s_.substr(pos_ + 1, close - pos_ - 1);
      // a parenthesised formula, unless the parentheses only group a term
      if (inner.find_first_of("=<>&|!") != std::string_view::npos && ends_group(close + 1)) {
        ++pos_;
        Formula f = parse_or();
        if (!peek(')')) fail("expected ')'");
        ++pos_;
        return f;
      }
    }
    for (const char* word : {"true", "false"}) {
      const std::size_t len = std::char_traits<char>::length(word);
      if (s_.substr(pos_, len) == word &&
          (pos_ + len == s_.size() || !(std::isalnum(static_cast<unsigned char>(s_[pos_ + len])) ||
                                        s_[pos_ + len] == '_'))) {
        pos_ += len;
        return Formula::truth(word[0] == 't');
      }
    }
    return parse_atom();
  }

  // True when the text after position `p` continues a formula rather than
  // a term (so "(a < b)" is a group but "(x1 + 1) * 2 > 0" is an atom).
  bool ends_group(std::size_t p) const {
    while (p < s_.size() && std::isspace(static_cast<unsigned char>(s_[p]))) ++p;
    return p >= s_.size() || s_[p] == '&' || s_[p] == '|' || s_[p] == ')';
  }

  std::size_t matching(std::size_t open) const {
    int depth = 0;
    for (std::size_t i = open; i < s_.size(); ++i) {
      if (s_[i] == '(') ++depth;
      if (s_[i] == ')' && --depth == 0) return i;
    }
    throw ParseError(ParseError::Kind::Syntax, s_.size() + 1, "expected ')' before end of input");
  }

  Formula parse_atom() {
    const std::size_t start = pos_;
    int depth = 0;
    std::size_t end = pos_;
    for (; end < s_.size(); ++end) {
      const char c = s_[end];
      if (c == '(') ++depth;
      if (c == ')') {
        if (depth == 0) break;
        --depth;
      }
      if (depth == 0 && (c == '&' || c == '|')) break;
    }
    const std::string_view text = s_.substr(start, end - start);

    std::size_t op = std::string_view::npos;
    std::size_t op_len = 0;
    Rel rel = Rel::Eq;
    for (std::size_t i = 0; i < text.size(); ++i) {
      const char c = text[i];
      if (c != '=' && c != '<' && c != '>' && c != '!') continue;
      if (op != std::string_view::npos) {
        pos_ = start + i;
        fail("more than one comparison in an atom");
      }
      const bool eq_next = i + 1 < text.size() && text[i + 1] == '=';
      op = i;
      op_len = eq_next && c != '=' ? 2 : 1;
      switch (c) {
        case '=':
          rel = Rel::Eq;
          break;
        case '<':
          rel = eq_next ? Rel::Le : Rel::Lt;
          break;
        case '>':
          rel = eq_next ? Rel::Ge : Rel::Gt;
          break;
        default:
          if (!eq_next) {
            pos_ = start + i;
            fail("'!' must start a negation or '!='");
          }
          rel = Rel::Ne;
      }
      i += op_len - 1;
    }
    if (op == std::string_view::npos) {
      pos_ = end;
      fail("expected a comparison (= != < <= > >=)");
    }
    const Term lhs = sub_term(text.substr(0, op), start);
    const Term rhs = sub_term(text.substr(op + op_len), start + op + op_len);
    pos_ = end;
    const bool rhs_zero = rhs.kind() == TermKind::Const && rhs.constant_value() == 0.0;
    return Formula::atom(rhs_zero ? lhs : lhs - rhs, rel);
  }

  Term sub_term(std::string_view text, std::size_t offset) const {
    try {
      return parse_term(text, names_, catalog_);
    } catch (const ParseError& e) {
      throw ParseError(e.kind(), e.column() + offset, e.what());
    }
  }

  std::string_view s_;
  std::span<const std::string> names_;
  const RACatalog& catalog_;
  std::size_t pos_ = 0;
};

using Dnf = std::vector<std::vector<Atom>>;

Dnf rewrite_atom(const Atom& a, bool negate) {
  Rel r = a.rel;
  if (negate) {
    switch (r) {
      case Rel::Eq:
        r = Rel::Ne;
        break;
      case Rel::Ne:
        r = Rel::Eq;
        break;
      case Rel::Gt:
        r = Rel::Le;
        break;
      case Rel::Le:
        r = Rel::Gt;
        break;
      case Rel::Lt:
        r = Rel::Ge;
        break;
      case Rel::Ge:
        r = Rel::Lt;
        break;
    }
  }
  const Term& f = a.term;
  switch (r) {
    case Rel::Eq:
      return {{{f, Rel::Eq}}};
    case Rel::Gt:
      return {{{f, Rel::Gt}}};
    case Rel::Lt:
      return {{{fold::neg(f), Rel::Gt}}};
    case Rel::Ge:
      return {{{f, Rel::Gt}}, {{f, Rel::Eq}}};
    case Rel::Le:
      return {{{fold::neg(f), Rel::Gt}}, {{f, Rel::Eq}}};
    case Rel::Ne:
      return {{{f, Rel::Gt}}, {{fold::neg(f), Rel::Gt}}};
  }
  return {};
}

Dnf cross(const Dnf& a, const Dnf& b) {
  Dnf out;
  for (const auto& x : a) {
    for (const auto& y : b) {
      auto c = x;
      c.insert(c.end(), y.begin(), y.end());
      out.push_back(std::move(c));
    }
  }
  return out;
}

Dnf to_dnf(const Formula& f, bool negate) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
      return negate ? Dnf{} : Dnf{{}};
    case K::False:
      return negate ? Dnf{{}} : Dnf{};
    case K::Atom:
      return rewrite_atom(f.atom(), negate);
    case K::Not:
      return to_dnf(f.parts()[0], !negate);
    case K::And:
    case K::Or: {
      const bool conj = (f.kind() == K::And) != negate;
      Dnf acc = conj ? Dnf{{}} : Dnf{};
      for (const auto& p : f.parts()) {
        Dnf d = to_dnf(p, negate);
        if (conj) {
          acc = cross(acc, d);
        } else {
          acc.insert(acc.end(), d.begin(), d.end());
        }
      }
      return acc;
    }
  }
  return {};
}

}  // namespace

Formula parse_formula(std::string_view text, std::span<const std::string> names,
                      const RACatalog& catalog) {
  return FormulaParser(text, names, catalog).parse();
}

QFFormula normalize(const Formula& f) { return {to_dnf(f, false)}; }

WilkieForm wilkie_reduce(const QFFormula& f, std::size_t n) {
  WilkieForm out;
  if (f.is_false()) {
    out.f = Term::constant(1.0);
    return out;
  }
  Term product = Term::constant(1.0);
  for (const auto& conj : f.dnf) {
    std::vector<Term> squares;
    for (const auto& a : conj) {
      if (a.rel == Rel::Eq) {
        squares.push_back(fold::square(a.term));
      } else if (a.rel == Rel::Gt) {
        const Term u = Term::variable(n + out.aux++);
        squares.push_back(fold::square(fold::add(fold::mul(a.term, fold::square(u)), Term::constant(-1.0))));
      } else {
        throw std::invalid_argument("wilkie_reduce: formula is not normalized");
      }
    }
    product = fold::mul(product, fold::sum(squares));
  }
  out.f = product;
  return out;
}

void AffineSubspace::validate() const {
  if (n == 0) throw std::invalid_argument("affine subspace: dimension must be positive");
  for (const auto& r : rows) {
    if (r.size() != n + 1) throw std::invalid_argument("affine subspace: row needs n + 1 entries");
    for (double v : r) {
      if (!(v >= -1.0 && v <= 1.0)) throw std::invalid_argument("affine subspace: entry outside [-1, 1]");
    }
  }
}

Term affine_restrict(const Term& f, const AffineSubspace& l) {
  l.validate();
  Term out = f;
  for (const auto& r : l.rows) {
    Term lin = Term::constant(0.0);
    for (std::size_t j = 0; j < l.n; ++j) {
      if (r[j] != 0.0) lin = fold::add(lin, fold::mul(Term::constant(r[j]), Term::variable(j)));
    }
    lin = fold::add(lin, Term::constant(-r[l.n]));
    out = fold::add(out, fold::square(lin));
  }
  return out;
}

std::string to_string(const QFFormula& f, std::span<const std::string> names) {
  if (f.dnf.empty()) return "false";
  std::string out;
  for (std::size_t i = 0; i < f.dnf.size(); ++i) {
    if (i > 0) out += " | ";
    const auto& conj = f.dnf[i];
    if (conj.empty()) {
      out += "true";
      continue;
    }
    const bool wrap = f.dnf.size() > 1 && conj.size() > 1;
    if (wrap) out += "(";
    for (std::size_t j = 0; j < conj.size(); ++j) {
      if (j > 0) out += " & ";
      out += to_string(conj[j].term, names);
      out += conj[j].rel == Rel::Eq ? " = 0" : " > 0";
    }
    if (wrap) out += ")";
  }
  return out;
}

}  // namespace slogcert
