#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "slogcert/abel.hpp"

namespace slogcert {

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct SlogCheckOptions {
  /// Build tolerance; numeric thresholds grow by max(1, tol / 1e-8).
  double tol = 1e-8;
  /// Scan range for log_2 domination. The crossing sits near 7e9, so the
  /// default reaches past it.
  double domination2_lo = 20.0;
  double domination2_hi = 1e12;
};

/// x - phi(x) > i holds at every scanned x >= kTransExpThreshold[i - 1]
/// for the default build (located by a dense scan, kept as regression
/// constants).
inline constexpr std::array<double, 3> kTransExpThreshold{1.0001, 3.1110, 4.3696};

/// Least scanned x in [lo, hi] after the last failure of x - phi(x) > i;
/// NaN if the last sample still fails.
double locate_transexp_threshold(const AbelFunction& phi, int i, double lo, double hi,
                                 std::size_t samples = 200'000);

/// Every property check, in a fixed order.
std::vector<CheckResult> run_slog_checks(const AbelFunction& phi, const SlogCheckOptions& options = {});

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace slogcert
