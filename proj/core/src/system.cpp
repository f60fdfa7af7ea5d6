#include "slogcert/system.hpp"

#include <algorithm>
#include <cmath>

#include "slogcert/evaluate.hpp"
#include "slogcert/parser.hpp"

namespace slogcert {

std::shared_ptr<const AbelFunction> default_abel_ptr() {
  return std::shared_ptr<const AbelFunction>(std::shared_ptr<const AbelFunction>(), &default_abel());
}

std::vector<std::string> SquareSystem::names(std::size_t n) {
  std::vector<std::string> out = default_var_names(n);
  for (std::size_t i = 1; i <= n + 1; ++i) out.push_back("l" + std::to_string(i));
  for (std::size_t i = 1; i <= n; ++i) out.push_back("eps" + std::to_string(i));
  out.push_back("delta");
  return out;
}

namespace {

void check_param(double v, const char* what) {
  if (!std::isfinite(v) || v < -1.0 || v > 1.0) {
    throw SystemError(std::string("parameter ") + what + " outside [-1, 1]");
  }
}

SystemParams normalize(SystemParams p, std::size_t n) {
  if (p.l.size() > n + 1) throw SystemError("too many l parameters");
  if (p.eps.size() > n) throw SystemError("too many eps parameters");
  p.l.resize(n + 1, 0.0);
  p.eps.resize(n, 0.0);
  for (double v : p.l) check_param(v, "l");
  for (double v : p.eps) check_param(v, "eps");
  check_param(p.delta, "delta");
  return p;
}

void collect(const Term& t, std::vector<Term>& phi, std::vector<Term>& dphi) {
  for (const auto& c : t.children()) collect(c, phi, dphi);
  if (t.kind() != TermKind::Phi) return;
  auto& reg = t.phi_order() == 0 ? phi : dphi;
  const bool seen =
      std::any_of(reg.begin(), reg.end(), [&](const Term& u) { return structurally_equal(t, u); });
  if (!seen) reg.push_back(t);
}

}  // namespace

SquareSystem SquareSystem::build(std::vector<Term> equations, std::size_t n, SystemParams params,
                                 std::shared_ptr<const AbelFunction> abel) {
  if (n == 0) throw SystemError("system must have at least one unknown");
  if (equations.size() != n) {
    throw SystemError("system is not square: " + std::to_string(equations.size()) +
                      " equations in " + std::to_string(n) + " unknowns");
  }
  const std::size_t slots = n + (n + 1) + n + 1;
  for (const auto& e : equations) {
    if (variable_span(e) > slots) throw SystemError("equation references an unknown variable");
  }
  if (!abel) throw SystemError("system needs a phi");
  SquareSystem s;
  s.n_ = n;
  s.source_ = std::move(equations);
  s.params_ = normalize(std::move(params), n);
  s.abel_ = std::move(abel);
  s.tilt_ = Eigen::MatrixXd::Identity(n, n);
  s.target_.assign(n, 0.0);
  s.rebuild();
  return s;
}

SquareSystem SquareSystem::parse(const std::vector<std::string>& equations, std::size_t n,
                                 SystemParams params, std::shared_ptr<const AbelFunction> abel,
                                 const RACatalog& catalog) {
  // shape first, so a surplus equation in x(n+1) reads as non-square
  if (equations.size() != n) {
    throw SystemError("system is not square: " + std::to_string(equations.size()) + " equations in " +
                      std::to_string(n) + " unknowns");
  }
  const auto nm = names(n);
  std::vector<Term> terms;
  terms.reserve(equations.size());
  for (const auto& e : equations) terms.push_back(parse_term(e, nm, catalog));
  return build(std::move(terms), n, std::move(params), std::move(abel));
}

void SquareSystem::rebuild() {
  // parameters -> constants
  std::vector<Term> rep;
  for (std::size_t i = 0; i < n_; ++i) rep.push_back(Term::variable(i));
  for (double v : params_.l) rep.push_back(Term::constant(v));
  for (double v : params_.eps) rep.push_back(Term::constant(v));
  rep.push_back(Term::constant(params_.delta));

  instantiated_.clear();
  for (const auto& e : source_) instantiated_.push_back(substitute(e, rep));

  phi_registry_.clear();
  dphi_registry_.clear();
  for (const auto& e : instantiated_) collect(e, phi_registry_, dphi_registry_);

  const bool identity = tilt_.isIdentity(0.0);
  std::vector<Term> ax;
  if (!identity) {
    for (std::size_t i = 0; i < n_; ++i) {
      std::vector<Term> row;
      for (std::size_t j = 0; j < n_; ++j) {
        const double a = tilt_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (a != 0.0) row.push_back(fold::mul(Term::constant(a), Term::variable(j)));
      }
      ax.push_back(fold::sum(row));
    }
  }
  effective_.clear();
  for (std::size_t i = 0; i < n_; ++i) {
    Term e = identity ? instantiated_[i] : substitute(instantiated_[i], ax);
    if (target_[i] != 0.0) e = Term::add(e, Term::constant(-target_[i]));
    effective_.push_back(std::move(e));
  }
}

SquareSystem SquareSystem::with_tilt(const Eigen::MatrixXd& a) const {
  if (a.rows() != static_cast<Eigen::Index>(n_) || a.cols() != static_cast<Eigen::Index>(n_)) {
    throw SystemError("tilt has wrong shape");
  }
  SquareSystem s = *this;
  s.tilt_ = a;
  s.rebuild();
  return s;
}

SquareSystem SquareSystem::with_target(std::vector<double> eta) const {
  if (eta.size() != n_) throw SystemError("target has wrong dimension");
  SquareSystem s = *this;
  s.target_ = std::move(eta);
  s.rebuild();
  return s;
}

SquareSystem SquareSystem::with_params(SystemParams params) const {
  SquareSystem s = *this;
  s.params_ = normalize(std::move(params), n_);
  s.rebuild();
  return s;
}

SquareSystem SquareSystem::with_equations(std::vector<Term> equations) const {
  SquareSystem s = build(std::move(equations), n_, params_, abel_);
  s.tilt_ = tilt_;
  s.target_ = target_;
  s.rebuild();
  return s;
}

std::vector<double> SquareSystem::eval(std::span<const double> x) const {
  std::vector<double> out;
  out.reserve(n_);
  for (const auto& e : effective_) out.push_back(slogcert::eval(e, x, *abel_));
  return out;
}

Eigen::MatrixXd SquareSystem::jacobian(std::span<const double> x) const {
  Eigen::MatrixXd j(n_, n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const auto g = gradient(effective_[i], x, *abel_);
    for (std::size_t k = 0; k < n_; ++k) {
      j(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = g[k];
    }
  }
  return j;
}

std::vector<Interval> SquareSystem::interval_eval(const Box& box) const {
  std::vector<Interval> out;
  out.reserve(n_);
  for (const auto& e : effective_) out.push_back(slogcert::interval_eval(e, box, *abel_));
  return out;
}

void SquareSystem::interval_eval_jacobian(const Box& box, std::vector<Interval>& values,
                                          std::vector<Interval>& jacobian) const {
  values.assign(n_, Interval(0.0));
  jacobian.assign(n_ * n_, Interval(0.0));
  for (std::size_t i = 0; i < n_; ++i) {
    auto [v, g] = interval_value_and_gradient(effective_[i], box, *abel_);
    values[i] = v;
    for (std::size_t k = 0; k < n_; ++k) jacobian[i * n_ + k] = g[k];
  }
}

}  // namespace slogcert
