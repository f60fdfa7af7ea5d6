#include "slogcert/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>

namespace slogcert {

ParseError::ParseError(Kind kind, std::size_t column, const std::string& message)
    : std::runtime_error("column " + std::to_string(column) + ": " + message),
      kind_(kind),
      column_(column) {}

std::vector<std::string> default_var_names(std::size_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::size_t pos;  // 0-based offset
  std::string_view text;
  double number = 0.0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Token next() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    const std::size_t start = i_;
    if (i_ == s_.size()) return {Tok::End, start, {}};
    const char c = s_[i_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(start);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) {
        ++i_;
      }
      return {Tok::Ident, start, s_.substr(start, i_ - start)};
    }
    ++i_;
    switch (c) {
      case '+': return {Tok::Plus, start, s_.substr(start, 1)};
      case '-': return {Tok::Minus, start, s_.substr(start, 1)};
      case '*': return {Tok::Star, start, s_.substr(start, 1)};
      case '(': return {Tok::LParen, start, s_.substr(start, 1)};
      case ')': return {Tok::RParen, start, s_.substr(start, 1)};
      case ',': return {Tok::Comma, start, s_.substr(start, 1)};
      default:
        throw ParseError(ParseError::Kind::Syntax, start + 1,
                         std::string("unexpected character '") + c + "'");
    }
  }

 private:
  Token number(std::size_t start) {
    auto digits = [&] {
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    };
    digits();
    if (i_ < s_.size() && s_[i_] == '.') {
      ++i_;
      digits();
    }
    if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
      std::size_t j = i_ + 1;
      if (j < s_.size() && (s_[j] == '+' || s_[j] == '-')) ++j;
      if (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) {
        i_ = j;
        digits();
      }
    }
    Token t{Tok::Number, start, s_.substr(start, i_ - start)};
    auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
    if (res.ec != std::errc() || res.ptr != t.text.data() + t.text.size() ||
        !std::isfinite(t.number)) {
      throw ParseError(ParseError::Kind::Syntax, start + 1,
                       "malformed number '" + std::string(t.text) + "'");
    }
    return t;
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> names, const RACatalog& catalog)
      : lex_(text), names_(names), catalog_(catalog) {
    cur_ = lex_.next();
  }

  Term parse() {
    Term t = expr();
    if (cur_.kind != Tok::End) fail("unexpected '" + std::string(cur_.text) + "'");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg,
                         ParseError::Kind kind = ParseError::Kind::Syntax) const {
    throw ParseError(kind, cur_.pos + 1, msg);
  }

  void advance() { cur_ = lex_.next(); }

  void expect(Tok kind, const char* what) {
    if (cur_.kind != kind) {
      fail(cur_.kind == Tok::End ? std::string("expected ") + what + " before end of input"
                                 : std::string("expected ") + what);
    }
    advance();
  }

  Term expr() {
    Term acc = term();
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      const bool minus = cur_.kind == Tok::Minus;
      advance();
      Term rhs = term();
      acc = minus ? Term::add(acc, Term::neg(rhs)) : Term::add(acc, rhs);
    }
    return acc;
  }

  Term term() {
    Term acc = factor();
    while (cur_.kind == Tok::Star) {
      advance();
      acc = Term::mul(acc, factor());
    }
    return acc;
  }

  Term factor() {
    switch (cur_.kind) {
      case Tok::Number: {
        const double v = cur_.number;
        advance();
        return Term::constant(v);
      }
      case Tok::Minus:
        advance();
        return Term::neg(factor());
      case Tok::LParen: {
        advance();
        Term t = expr();
        expect(Tok::RParen, "')'");
        return t;
      }
      case Tok::Ident:
        return identifier();
      case Tok::End:
        fail("unexpected end of input");
      default:
        fail("unexpected '" + std::string(cur_.text) + "'");
    }
  }

  // d<k>phi for k >= 2
  static int derivative_order(std::string_view name) {
    if (name == "phi") return 0;
    if (name == "dphi") return 1;
    if (name.size() < 5 || name.front() != 'd' || name.substr(name.size() - 3) != "phi") return -1;
    int k = 0;
    auto digits = name.substr(1, name.size() - 4);
    auto res = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (res.ec != std::errc() || res.ptr != digits.data() + digits.size() || k < 2) return -1;
    return k;
  }

  Term identifier() {
    const Token id = cur_;
    const std::string name(id.text);
    advance();

    std::function<Term(Term)> build;
    if (name == "exp") {
      build = [](Term a) { return Term::exp(std::move(a)); };
    } else if (name == "log") {
      build = [](Term a) { return Term::log(std::move(a)); };
    } else if (int k = derivative_order(name); k >= 0) {
      build = [k](Term a) { return Term::phi(std::move(a), k); };
    } else if (auto prim = catalog_.find(name)) {
      build = [prim](Term a) { return Term::ra(prim, std::move(a)); };
    }

    if (!build) {
      for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) {
          if (cur_.kind == Tok::LParen) fail("'" + name + "' is not a function");
          return Term::variable(i);
        }
      }
      throw ParseError(ParseError::Kind::UnknownIdentifier, id.pos + 1,
                       "unknown identifier '" + name + "'");
    }

    if (cur_.kind != Tok::LParen) {
      throw ParseError(ParseError::Kind::Arity, id.pos + 1, "'" + name + "' expects one argument");
    }
    advance();
    if (cur_.kind == Tok::RParen) {
      throw ParseError(ParseError::Kind::Arity, cur_.pos + 1,
                       "'" + name + "' expects one argument, got none");
    }
    Term arg = expr();
    if (cur_.kind == Tok::Comma) {
      fail("'" + name + "' expects one argument", ParseError::Kind::Arity);
    }
    expect(Tok::RParen, "')'");
    return build(std::move(arg));
  }

  Lexer lex_;
  std::span<const std::string> names_;
  const RACatalog& catalog_;
  Token cur_{Tok::End, 0, {}};
};

}  // namespace

Term parse_term(std::string_view text, std::span<const std::string> names,
                const RACatalog& catalog) {
  return Parser(text, names, catalog).parse();
}

}  // namespace slogcert
