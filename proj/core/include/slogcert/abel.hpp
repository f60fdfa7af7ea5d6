#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "slogcert/interval.hpp"

namespace slogcert {

/// Raised by AbelFunction::build when the requested tolerance is not met.
class AbelBuildError : public std::runtime_error {
 public:
  AbelBuildError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved_residual() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Strictly increasing solution of phi(exp(x)) = phi(x) + 1 with phi(1) = 0.
///
/// On the fundamental domain [1, e] phi is a polynomial seed s of degree
/// 2k+1 in u = x - 1 whose derivatives up to order k match across the
/// junction x = 1 <-> x = e; elsewhere phi is obtained by moving the
/// argument into [1, e] with log or exp and shifting by the number of steps.
///
/// Immutable after construction; every member function is const and
/// reentrant.
class AbelFunction {
 public:
  static constexpr int kRecursionCap = 64;
  /// Highest derivative order supported by `derivative` and
  /// `enclose_derivative`.
  static constexpr int kMaxOrder = 6;

  /// Builds the seed for smoothness order k in {1, 2, 3}. Throws
  /// std::invalid_argument for bad arguments and AbelBuildError when the
  /// Abel residual on [-5, 5] exceeds tol.
  static AbelFunction build(int order = 3, double tol = 1e-8);

  /// Wraps explicit seed coefficients (in u = x - 1). Nothing is checked
  /// beyond shape; use the check suite to validate.
  static AbelFunction from_coefficients(int order, std::vector<double> coefficients,
                                        double seed_error);

  /// Versioned text format with exact (hex-float) coefficients.
  std::string serialize() const;
  /// Throws std::runtime_error on malformed input.
  static AbelFunction deserialize(std::string_view text);

  int order() const noexcept { return order_; }
  const std::vector<double>& coefficients() const noexcept { return coef_; }
  double seed_error() const noexcept { return seed_error_; }
  /// Upper bound for sup |phi'| over [1, e].
  double sup_dphi_fundamental() const noexcept { return sup_dphi_; }
  /// Upper bound for sup |phi'| over the whole line.
  double sup_dphi() const noexcept;
  /// The seed derivative is certified positive on [1, e].
  bool seed_monotone() const noexcept { return monotone_; }
  /// max over m = 0..k of the mismatch of the m-th derivative across the
  /// junction, plus |s(1)| and |s(e) - 1|.
  double junction_defect() const noexcept { return junction_defect_; }

  double operator()(double x) const { return value(x); }
  double value(double x) const;
  double derivative(double x) const;
  /// m-th derivative, 0 <= m <= kMaxOrder.
  double derivative(double x, int m) const;

  /// Enclosure of phi over x; widened by seed_error.
  Interval enclose(const Interval& x) const;
  /// Enclosure of the m-th derivative over x.
  Interval enclose_derivative(const Interval& x, int m) const;

  /// Monotone inverse of phi (the trans-exponential function). Throws
  /// DomainError for y <= -2 and std::overflow_error past double range.
  double trans_exp(double y) const;

  /// x - phi(x) > i, equivalent to trans_exp(x) > exp_i(x).
  bool check_transexp(int i, double x) const;

  /// Seed polynomial and its derivatives in u = x - 1.
  double seed(double u, int m = 0) const;

 private:
  AbelFunction() = default;
  void finalize();

  using Jet = std::array<Interval, kMaxOrder + 1>;
  Jet seed_jet(const Interval& u, int m) const;
  Jet phi_jet(const Interval& x, int m, int depth) const;

  int order_ = 0;
  std::vector<double> coef_;
  double seed_error_ = 0.0;
  double sup_dphi_ = 0.0;
  double junction_defect_ = 0.0;
  bool monotone_ = false;
  // seed_derivs_[j] holds the coefficients of s^{(j)}
  std::vector<std::vector<double>> seed_derivs_;
  // per-order, per-piece ranges of s^{(j)} over a uniform split of [0, e-1]
  std::vector<std::vector<Interval>> table_;
};

/// exp applied n times (n >= 0); inf on overflow.
double exp_n(int n, double x);
/// log applied n times; NaN once the argument leaves (0, inf).
double log_n(int n, double x);

/// sup over `points` uniform grid points of [lo, hi] of
/// |phi(exp(x)) - phi(x) - 1|, maxed with the junction defect (the
/// pointwise identity holds by construction away from the junction).
double abel_residual(const AbelFunction& phi, double lo = -5.0, double hi = 5.0,
                     std::size_t points = 10000);

struct DominationReport {
  bool found = false;
  /// Least sample from which |phi| <= log_n holds at every later sample.
  double threshold = 0.0;
  std::size_t samples = 0;
  /// Last sample where the inequality failed (NaN if none).
  double last_violation = 0.0;
};

/// Scans `samples` log-spaced points of [x_lo, x_hi].
DominationReport check_domination(const AbelFunction& phi, int n, double x_lo, double x_hi,
                                  std::size_t samples = 4096);

}  // namespace slogcert
