#pragma once

#include <Eigen/Dense>

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "slogcert/abel.hpp"
#include "slogcert/interval.hpp"
#include "slogcert/ra_catalog.hpp"
#include "slogcert/term.hpp"

namespace slogcert {

/// Non-owning handle to default_abel().
std::shared_ptr<const AbelFunction> default_abel_ptr();

/// Parameter slots of a square system: l has n+1 entries, eps has n, all
/// in [-1, 1]. Missing trailing entries are zero.
struct SystemParams {
  std::vector<double> l;
  std::vector<double> eps;
  double delta = 0.0;
};

class SystemError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// n equations in n unknowns x1..xn. Equations may also reference the
/// parameter slots, which are variables n .. 3n+1 in the order
/// l1..l(n+1), eps1..epsn, delta and are replaced by their values.
///
/// The zero set studied is that of x -> P(A x) - eta with a tilt A
/// (identity by default) and a target eta (zero by default).
class SquareSystem {
 public:
  /// Throws SystemError when the system is not square or a parameter is
  /// out of range.
  static SquareSystem build(std::vector<Term> equations, std::size_t n, SystemParams params = {},
                            std::shared_ptr<const AbelFunction> abel = default_abel_ptr());

  /// Parses each equation with names x1..xn followed by the parameter
  /// names. Throws ParseError or SystemError.
  static SquareSystem parse(const std::vector<std::string>& equations, std::size_t n,
                            SystemParams params = {},
                            std::shared_ptr<const AbelFunction> abel = default_abel_ptr(),
                            const RACatalog& catalog = RACatalog::standard());

  /// x1..xn, l1..l(n+1), eps1..epsn, delta.
  static std::vector<std::string> names(std::size_t n);

  std::size_t dimension() const noexcept { return n_; }
  const std::vector<Term>& equations() const noexcept { return source_; }
  /// Equations with parameters substituted (before tilt and target).
  const std::vector<Term>& instantiated() const noexcept { return instantiated_; }
  /// Equations actually evaluated: instantiated(A x) - eta.
  const std::vector<Term>& effective() const noexcept { return effective_; }
  const SystemParams& params() const noexcept { return params_; }
  /// Distinct phi-monomials and phi'-monomials (derivative order >= 1).
  const std::vector<Term>& phi_registry() const noexcept { return phi_registry_; }
  const std::vector<Term>& dphi_registry() const noexcept { return dphi_registry_; }
  const AbelFunction& abel() const noexcept { return *abel_; }
  const std::shared_ptr<const AbelFunction>& abel_ptr() const noexcept { return abel_; }
  const Eigen::MatrixXd& tilt() const noexcept { return tilt_; }
  const std::vector<double>& target() const noexcept { return target_; }
  bool has_phi() const noexcept { return !phi_registry_.empty() || !dphi_registry_.empty(); }

  SquareSystem with_tilt(const Eigen::MatrixXd& a) const;
  SquareSystem with_target(std::vector<double> eta) const;
  SquareSystem with_params(SystemParams params) const;
  /// Same tilt, target and params with new equations (same dimension).
  SquareSystem with_equations(std::vector<Term> equations) const;

  std::vector<double> eval(std::span<const double> x) const;
  Eigen::MatrixXd jacobian(std::span<const double> x) const;
  std::vector<Interval> interval_eval(const Box& box) const;
  /// Values and row-major n x n Jacobian enclosure over the box.
  void interval_eval_jacobian(const Box& box, std::vector<Interval>& values,
                              std::vector<Interval>& jacobian) const;

 private:
  SquareSystem() = default;
  void rebuild();

  std::size_t n_ = 0;
  std::vector<Term> source_;
  std::vector<Term> instantiated_;
  std::vector<Term> effective_;
  SystemParams params_;
  std::vector<Term> phi_registry_;
  std::vector<Term> dphi_registry_;
  std::shared_ptr<const AbelFunction> abel_;
  Eigen::MatrixXd tilt_;
  std::vector<double> target_;
};

}  // namespace slogcert
