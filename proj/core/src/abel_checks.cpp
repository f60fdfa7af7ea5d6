#include "slogcert/abel_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace slogcert {

namespace {

constexpr double kE = std::numbers::e;

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return v;
}

std::vector<double> logspace(double a, double b, std::size_t n) {
  auto v = linspace(std::log(a), std::log(b), n);
  for (auto& x : v) x = std::exp(x);
  v.front() = a;
  v.back() = b;
  return v;
}

// a then b, dropping b's first point when it repeats a's last
std::vector<double> join(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> v;
  v.reserve(a.size() + b.size());
  for (double x : a) v.push_back(x);
  for (double x : b) {
    if (v.empty() || x != v.back()) v.push_back(x);
  }
  return v;
}

CheckResult upper(std::string name, double measured, double threshold, std::string detail = {}) {
  return {std::move(name), measured <= threshold, measured, threshold, std::move(detail)};
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

}  // namespace

double locate_transexp_threshold(const AbelFunction& phi, int i, double lo, double hi,
                                 std::size_t samples) {
  const auto xs = linspace(lo, hi, samples);
  double threshold = lo;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (!phi.check_transexp(i, xs[k])) {
      if (k + 1 == xs.size()) return std::numeric_limits<double>::quiet_NaN();
      threshold = xs[k + 1];
    }
  }
  return threshold;
}

std::vector<CheckResult> run_slog_checks(const AbelFunction& phi, const SlogCheckOptions& opt) {
  const double tol = opt.tol;
  const double scale = std::max(1.0, tol / 1e-8);
  std::vector<CheckResult> out;

  out.push_back(upper("abel_residual", abel_residual(phi), tol, "sup over 1e4 points of [-5, 5]"));
  out.push_back(upper("seed_error", phi.seed_error(), tol));
  out.push_back(upper("junction_defect", phi.junction_defect(), tol));
  out.push_back({"seed_monotone", phi.seed_monotone(), phi.seed_monotone() ? 1.0 : 0.0, 1.0,
                 "seed derivative enclosure positive on [1, e]"});

  {
    const double ee = std::exp(kE);
    const double e3 = exp_n(3, 1.0);
    const double err = std::max({std::abs(phi(1.0)), std::abs(phi(0.0) + 1.0), std::abs(phi(kE) - 1.0),
                                 std::abs(phi(ee) - 2.0), std::abs(phi(e3) - 3.0)});
    out.push_back(upper("normalization", err, 4.0 * tol, "phi at 0, 1, e, e^e, exp_3(1)"));
  }

  {
    // consecutive pairs over [-50, 1e8]; below -20 the step in phi is under
    // one ulp of -1, so only the weak inequality is meaningful there
    const auto xs = join(linspace(-50.0, 1.0, 5001), logspace(1.0, 1e8, 5001));
    std::size_t bad = 0;
    double first_bad = std::numeric_limits<double>::quiet_NaN();
    double prev = phi(xs.front());
    for (std::size_t k = 1; k < xs.size(); ++k) {
      const double cur = phi(xs[k]);
      const bool ok = xs[k - 1] >= -20.0 ? prev < cur : prev <= cur;
      if (!ok) {
        if (bad++ == 0) first_bad = xs[k];
      }
      prev = cur;
    }
    out.push_back(upper("monotone", static_cast<double>(bad), 0.0,
                        std::to_string(xs.size() - 1) + " pairs" +
                            (bad ? ", first failure at " + fmt(first_bad) : "")));
  }

  {
    // phi(x) = phi(e^x) - 1 rounds to -2 once e^x is below the seed's
    // resolution near 0 (x < -37), so the strict side is checked above -35
    std::size_t bad = 0;
    for (double x : linspace(-1000.0, 0.0, 4001)) {
      const double v = phi(x);
      const bool lower_ok = x >= -35.0 ? v > -2.0 : v >= -2.0;
      if (!lower_ok || !(v <= -1.0)) ++bad;
    }
    out.push_back(upper("bounded_below", static_cast<double>(bad), 0.0, "-2 < phi <= -1 on [-1000, 0]"));
  }

  {
    double worst = 0.0;
    for (double x : linspace(-3.0, 3.0, 2001)) {
      const double d = phi.derivative(x);
      const double ex = std::exp(x);
      worst = std::max(worst, std::abs(d - phi.derivative(ex) * ex) / (1.0 + std::abs(d)));
    }
    out.push_back(upper("chain_identity", worst, 1e-7 * scale, "|phi'(x) - phi'(e^x) e^x| / (1 + |phi'(x)|)"));
  }

  {
    const double d0 = phi.derivative(1.0), d2 = phi.derivative(1e2), d4 = phi.derivative(1e4),
                 d8 = phi.derivative(1e8);
    const bool ok = d0 > d2 && d2 > d4 && d4 > d8 && d8 > 0.0;
    out.push_back({"dphi_decreasing", ok, d8, d2,
                   "phi' at 1, 1e2, 1e4, 1e8: " + fmt(d0) + " " + fmt(d2) + " " + fmt(d4) + " " + fmt(d8)});
  }

  {
    double least = std::numeric_limits<double>::infinity();
    for (double x : {-5.0, 0.0, 1.0, 2.0, 10.0, 1e6}) least = std::min(least, phi.derivative(x));
    out.push_back({"dphi_positive", least > 0.0, least, 0.0, "min phi' over -5, 0, 1, 2, 10, 1e6"});
  }

  {
    // 1e6 -> log -> 13.8 -> log -> 2.63 lies in [1, e]
    const double x = 1e6;
    const double bound = phi.sup_dphi_fundamental() / (x * std::log(x));
    out.push_back(upper("dphi_chain_bound", phi.derivative(x), bound, "phi'(1e6) <= sup phi'|[1,e] * log_2'(1e6)"));
  }

  {
    double worst = 0.0;
    for (double x : linspace(-3.0, 100.0, 100)) {
      const double h = 1e-6;
      const double fd = (phi(x + h) - phi(x - h)) / (2.0 * h);
      const double d = phi.derivative(x);
      worst = std::max(worst, std::abs(fd - d) / std::abs(d));
    }
    out.push_back(upper("finite_difference", worst, 1e-5 * scale, "central differences, h = 1e-6, 100 points of [-3, 100]"));
  }

  {
    const DominationReport d1 = check_domination(phi, 1, kE, 1e8);
    out.push_back({"domination_log1", d1.found && d1.threshold <= 100.0, d1.found ? d1.threshold : NAN, 100.0,
                   "|phi| <= log x from the threshold on, scanned over [e, 1e8]"});
    const DominationReport d2 = check_domination(phi, 2, opt.domination2_lo, opt.domination2_hi);
    out.push_back({"domination_log2", d2.found, d2.found ? d2.threshold : NAN, opt.domination2_hi,
                   "|phi| <= log log x scanned over [" + fmt(opt.domination2_lo) + ", " +
                       fmt(opt.domination2_hi) + "]"});
  }

  {
    for (int i = 1; i <= 3; ++i) {
      // a looser build moves the crossing by about tol / (1 - phi')
      const double start = kTransExpThreshold[static_cast<std::size_t>(i - 1)] + 50.0 * tol;
      std::size_t bad = 0;
      for (double x : join(linspace(start, start + 1.0, 20001), logspace(start + 1.0, 1e8, 4001))) {
        if (!phi.check_transexp(i, x)) ++bad;
      }
      out.push_back(upper("transexp_" + std::to_string(i), static_cast<double>(bad), 0.0,
                          "x - phi(x) > " + std::to_string(i) + " for x >= " + fmt(start)));
    }
  }

  {
    const double err = std::max({std::abs(phi.trans_exp(0.0) - 1.0), std::abs(phi.trans_exp(1.0) - kE),
                                 std::abs(phi.trans_exp(2.0) - std::exp(kE)) / std::exp(kE)});
    out.push_back(upper("transexp_values", err, 1e-12 * scale, "T(0) = 1, T(1) = e, T(2) = e^e"));

    double worst = 0.0;
    for (double x : logspace(0.1, 1e4, 2001)) {
      worst = std::max(worst, std::abs(phi.trans_exp(phi(x)) - x) / (1.0 + std::abs(x)));
    }
    out.push_back(upper("inversion", worst, 1e-6 * scale, "|T(phi(x)) - x| / (1 + |x|) on [0.1, 1e4]"));
  }
  return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
}

}  // namespace slogcert
