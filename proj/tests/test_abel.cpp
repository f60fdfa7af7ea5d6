#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "slogcert/abel.hpp"
#include "slogcert/abel_checks.hpp"
#include "slogcert/evaluate.hpp"

namespace slogcert {
namespace {

constexpr double kE = std::numbers::e;

const AbelFunction& phi() { return default_abel(); }

TEST(AbelBuild, Normalization) {
  EXPECT_NEAR(phi()(1.0), 0.0, 1e-12);
  EXPECT_NEAR(phi()(0.0), -1.0, 1e-8);
  EXPECT_NEAR(phi()(std::exp(kE)), 2.0, 1e-8);
  EXPECT_NEAR(phi()(15.154262241479262), 2.0, 1e-8);
}

TEST(AbelBuild, AllOrdersMeetTolerance) {
  for (int k = 1; k <= 3; ++k) {
    const AbelFunction f = AbelFunction::build(k, 1e-8);
    EXPECT_EQ(f.order(), k);
    EXPECT_EQ(f.coefficients().size(), static_cast<std::size_t>(2 * k + 2));
    EXPECT_LE(abel_residual(f), 1e-8);
    EXPECT_TRUE(f.seed_monotone());
  }
}

TEST(AbelBuild, RejectsBadArguments) {
  EXPECT_THROW(AbelFunction::build(0, 1e-8), std::invalid_argument);
  EXPECT_THROW(AbelFunction::build(4, 1e-8), std::invalid_argument);
  EXPECT_THROW(AbelFunction::build(3, 0.0), std::invalid_argument);
}

TEST(AbelBuild, UnreachableToleranceReportsResidual) {
  try {
    AbelFunction::build(3, 1e-30);
    FAIL() << "expected AbelBuildError";
  } catch (const AbelBuildError& e) {
    EXPECT_GT(e.achieved_residual(), 1e-30);
  }
}

TEST(AbelSeed, JunctionDerivativesMatch) {
  // s^(m)(e - 1) e^m-weighted chain: phi'(e) e = phi'(1) and friends
  const double l = kE - 1.0;
  EXPECT_NEAR(phi().seed(0.0), 0.0, 1e-12);
  EXPECT_NEAR(phi().seed(l), 1.0, 1e-12);
  EXPECT_NEAR(phi().seed(l, 1) * kE, phi().seed(0.0, 1), 1e-10);
  EXPECT_LE(phi().junction_defect(), 1e-10);
}

TEST(AbelEval, Examples) {
  const double v = phi()(-10.0);
  EXPECT_GT(v, -2.0);
  EXPECT_LE(v, -1.0);
  EXPECT_NEAR(phi()(exp_n(3, 1.0)), 3.0, 1e-8);
  EXPECT_NEAR(exp_n(3, 1.0), 3814279.1047602205, 1e-6);
}

TEST(AbelEval, FunctionalEquationOnWideRange) {
  for (double x = -40.0; x <= 20.0; x += 0.173) {
    EXPECT_NEAR(phi()(std::exp(x)), phi()(x) + 1.0, 1e-8) << x;
  }
}

TEST(AbelEval, NonFiniteArgumentThrows) {
  EXPECT_THROW(phi()(NAN), DomainError);
  EXPECT_THROW(phi()(INFINITY), DomainError);
}

TEST(AbelDerivative, Positive) {
  for (double x : {-5.0, 0.0, 1.0, 2.0, 10.0, 1e6}) EXPECT_GT(phi().derivative(x), 0.0) << x;
}

TEST(AbelDerivative, ChainBoundAtMillion) {
  const double x = 1e6;
  EXPECT_LE(phi().derivative(x), phi().sup_dphi_fundamental() / (x * std::log(x)));
}

TEST(AbelDerivative, FiniteDifferences) {
  for (int k = 0; k < 100; ++k) {
    const double x = -3.0 + 103.0 * k / 99.0;
    const double h = 1e-6;
    const double fd = (phi()(x + h) - phi()(x - h)) / (2.0 * h);
    EXPECT_NEAR(fd, phi().derivative(x), 1e-5 * phi().derivative(x)) << x;
  }
}

TEST(AbelDerivative, SupBoundsCoverSamples) {
  double sup = 0.0;
  for (int k = 0; k <= 2000; ++k) sup = std::max(sup, phi().derivative(1.0 + (kE - 1.0) * k / 2000.0));
  EXPECT_LE(sup, phi().sup_dphi_fundamental());
  for (double x = -30.0; x < 50.0; x += 0.01) EXPECT_LE(phi().derivative(x), phi().sup_dphi());
}

TEST(Domination, LogThresholdBelowHundred) {
  const DominationReport r = check_domination(phi(), 1, kE, 1e8);
  ASSERT_TRUE(r.found);
  EXPECT_LE(r.threshold, 100.0);
}

TEST(Domination, HoldsAboveReportedThreshold) {
  const DominationReport r = check_domination(phi(), 1, kE, 1e8);
  ASSERT_TRUE(r.found);
  for (int k = 0; k <= 5000; ++k) {
    const double x = r.threshold * std::pow(1e8 / r.threshold, k / 5000.0);
    EXPECT_LE(std::abs(phi()(x)), std::log(x)) << x;
  }
}

TEST(Domination, LogLogCrossingLiesBeyond1e8) {
  // phi(1e8) is about 3.1 while log log 1e8 is about 2.9
  EXPECT_FALSE(check_domination(phi(), 2, 20.0, 1e8).found);
  const DominationReport r = check_domination(phi(), 2, 20.0, 1e12);
  ASSERT_TRUE(r.found);
  EXPECT_GT(r.threshold, 1e9);
  EXPECT_LT(r.threshold, 1e10);
  EXPECT_LE(std::abs(phi()(2e10)), log_n(2, 2e10));
}

TEST(Domination, RejectsBadRange) {
  EXPECT_THROW(check_domination(phi(), 3, kE, 10.0), std::invalid_argument);
  EXPECT_THROW(check_domination(phi(), 1, 0.5, 10.0), std::invalid_argument);
}

TEST(TransExp, TowerValues) {
  EXPECT_NEAR(phi().trans_exp(0.0), 1.0, 1e-12);
  EXPECT_NEAR(phi().trans_exp(1.0), kE, 1e-12);
  EXPECT_NEAR(phi().trans_exp(2.0), std::exp(kE), 1e-10);
  EXPECT_THROW(phi().trans_exp(-2.0), DomainError);
  EXPECT_THROW(phi().trans_exp(5.0), std::overflow_error);
}

TEST(TransExp, Inversion) {
  for (int k = 0; k <= 1000; ++k) {
    const double x = 0.1 * std::pow(1e5, k / 1000.0);
    EXPECT_LE(std::abs(phi().trans_exp(phi()(x)) - x), 1e-6 * (1.0 + x)) << x;
  }
}

TEST(TransExp, CheckExamples) {
  EXPECT_TRUE(phi().check_transexp(2, 5.0));
  EXPECT_FALSE(phi().check_transexp(3, 4.0));
}

// Once true above x = 1, the check stays true.
TEST(TransExp, MonotoneInX) {
  for (int i = 1; i <= 3; ++i) {
    bool seen = false;
    for (double x = 1.0; x < 50.0; x += 0.001) {
      const bool ok = phi().check_transexp(i, x);
      if (seen) {
        ASSERT_TRUE(ok) << i << " " << x;
      }
      seen = seen || ok;
    }
    EXPECT_TRUE(seen);
  }
}

TEST(TransExp, RegressionThresholds) {
  for (int i = 1; i <= 3; ++i) {
    const double x = locate_transexp_threshold(phi(), i, 0.5, 10.0);
    EXPECT_LE(x, kTransExpThreshold[i - 1]) << i;
    EXPECT_GT(x, kTransExpThreshold[i - 1] - 1e-3) << i;
  }
}

TEST(Serialization, RoundTripIsExact) {
  const std::string text = phi().serialize();
  const AbelFunction back = AbelFunction::deserialize(text);
  EXPECT_EQ(back.coefficients(), phi().coefficients());
  EXPECT_EQ(back.order(), phi().order());
  EXPECT_EQ(back.seed_error(), phi().seed_error());
  EXPECT_EQ(back.serialize(), text);
  for (double x : {-3.0, 0.5, 2.0, 1e5}) EXPECT_EQ(back(x), phi()(x));
}

TEST(Serialization, RejectsGarbage) {
  EXPECT_THROW(AbelFunction::deserialize("not an abel file"), std::runtime_error);
  EXPECT_THROW(AbelFunction::deserialize(""), std::runtime_error);
}

TEST(SlogChecks, DefaultBuildPasses) {
  const auto results = run_slog_checks(phi());
  for (const auto& r : results) EXPECT_TRUE(r.passed) << r.name << " measured " << r.measured;
  EXPECT_TRUE(all_passed(results));
}

TEST(SlogChecks, LooseBuildPassesScaledThresholds) {
  const AbelFunction f = AbelFunction::build(3, 1e-2);
  SlogCheckOptions opt;
  opt.tol = 1e-2;
  EXPECT_TRUE(all_passed(run_slog_checks(f, opt)));
}

TEST(SlogChecks, CorruptedSeedFailsResidual) {
  auto c = phi().coefficients();
  c[2] += 1e-3;
  const AbelFunction bad = AbelFunction::from_coefficients(phi().order(), c, phi().seed_error());
  const auto results = run_slog_checks(bad);
  EXPECT_FALSE(all_passed(results));
  for (const auto& r : results) {
    if (r.name == "abel_residual") {
      EXPECT_FALSE(r.passed);
    }
  }
}

// The trans-exp thresholds are pinned to the default build only.
TEST(SlogChecks, LowerOrdersPass) {
  for (int k = 1; k <= 2; ++k) {
    const auto results = run_slog_checks(AbelFunction::build(k, 1e-8));
    for (const auto& r : results) {
      if (r.name.starts_with("transexp_") && r.name != "transexp_values") continue;
      EXPECT_TRUE(r.passed) << "order " << k << ": " << r.name;
    }
  }
}

}  // namespace
}  // namespace slogcert
