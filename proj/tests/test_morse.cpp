#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "slogcert/census.hpp"
#include "slogcert/evaluate.hpp"
#include "slogcert/formula.hpp"
#include "slogcert/morse.hpp"
#include "slogcert/parser.hpp"

namespace slogcert {
namespace {

const std::vector<std::string> kNames = default_var_names(3);

QFFormula qf(const std::string& text) { return normalize(parse_formula(text, kNames)); }

double at(const Term& t, std::vector<double> x) { return eval(t, x); }

AffineSubspace whole(std::size_t n) { return AffineSubspace{n, {}}; }

TEST(Normalize, Examples) {
  const QFFormula lt = qf("x1 < 0");
  ASSERT_EQ(lt.dnf.size(), 1u);
  ASSERT_EQ(lt.dnf[0].size(), 1u);
  EXPECT_EQ(lt.dnf[0][0].rel, Rel::Gt);
  EXPECT_DOUBLE_EQ(at(lt.dnf[0][0].term, {-2.0}), 2.0);

  const QFFormula ne = qf("!(x1 = 0)");
  ASSERT_EQ(ne.dnf.size(), 2u);
  for (const auto& c : ne.dnf) EXPECT_EQ(c[0].rel, Rel::Gt);

  const QFFormula d = qf("x1 = 0 & (x2 > 0 | x2 < 0)");
  ASSERT_EQ(d.dnf.size(), 2u);
  for (const auto& c : d.dnf) EXPECT_EQ(c.size(), 2u);

  EXPECT_TRUE(qf("false").is_false());
  const QFFormula t = qf("true");
  ASSERT_EQ(t.dnf.size(), 1u);
  EXPECT_TRUE(t.dnf[0].empty());
}

TEST(Normalize, SetPreservedOnSamples) {
  const std::vector<std::string> formulas = {
      "x1 <= x2", "!(x1 > 1 | x2 >= 0)", "x1*x2 != 1 & x1 < 2", "!(!(x1 = x2) & x2 > 0)",
  };
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> u(-3, 3);
  auto holds = [](const QFFormula& f, const std::vector<double>& x) {
    for (const auto& c : f.dnf) {
      bool ok = true;
      for (const auto& a : c) {
        const double v = eval(a.term, x);
        ok = ok && (a.rel == Rel::Eq ? v == 0.0 : v > 0.0);
      }
      if (ok) return true;
    }
    return false;
  };
  auto reference = [](std::size_t i, double a, double b) {
    switch (i) {
      case 0:
        return a <= b;
      case 1:
        return !(a > 1 || b >= 0);
      case 2:
        return a * b != 1 && a < 2;
      default:
        return !(a != b && b > 0);
    }
  };
  for (std::size_t i = 0; i < formulas.size(); ++i) {
    const QFFormula f = qf(formulas[i]);
    for (int k = 0; k < 200; ++k) {
      // integer points hit the boundaries
      const std::vector<double> x{static_cast<double>(u(rng)), static_cast<double>(u(rng))};
      EXPECT_EQ(holds(f, x), reference(i, x[0], x[1])) << formulas[i] << " at " << x[0] << "," << x[1];
    }
  }
}

TEST(ParseFormula, Errors) {
  EXPECT_THROW(parse_formula("x1 +", kNames), ParseError);
  EXPECT_THROW(parse_formula("x1 = 0 &", kNames), ParseError);
  EXPECT_THROW(parse_formula("y = 0", kNames), ParseError);
}

TEST(Wilkie, Examples) {
  const WilkieForm sq = wilkie_reduce(qf("x1*x1 = 1"), 1);
  EXPECT_EQ(sq.aux, 0u);
  EXPECT_DOUBLE_EQ(at(sq.f, {1.0}), 0.0);
  EXPECT_GT(at(sq.f, {0.5}), 0.0);

  // x1 > 0 becomes (x1 u^2 - 1)^2
  const WilkieForm gt = wilkie_reduce(qf("x1 > 0"), 1);
  EXPECT_EQ(gt.aux, 1u);
  EXPECT_NEAR(at(gt.f, {4.0, 0.5}), 0.0, 1e-15);
  EXPECT_NEAR(at(gt.f, {-4.0, 0.5}), 4.0, 1e-12);

  // disjunction: product of the two branches
  const WilkieForm two = wilkie_reduce(qf("x1 = 0 | x2 = 0"), 2);
  EXPECT_DOUBLE_EQ(at(two.f, {0.0, 3.0}), 0.0);
  EXPECT_DOUBLE_EQ(at(two.f, {3.0, 0.0}), 0.0);
  EXPECT_DOUBLE_EQ(at(two.f, {2.0, 3.0}), 36.0);

  EXPECT_DOUBLE_EQ(at(wilkie_reduce(qf("false"), 2).f, {0.3, 0.4}), 1.0);
}

TEST(Wilkie, ZeroSetProjectsOntoFormulaSet) {
  const QFFormula f = qf("x1*x1 + x2*x2 = 1 & x1 > 0");
  const WilkieForm w = wilkie_reduce(f, 2);
  ASSERT_EQ(w.aux, 1u);
  for (double a = -3.0; a <= 3.0; a += 0.25) {
    const double x = std::cos(a), y = std::sin(a);
    const std::vector<double> pt{x, y, x > 0 ? 1.0 / std::sqrt(x) : 1.0};
    if (x > 0) {
      EXPECT_NEAR(eval(w.f, pt), 0.0, 1e-12);
    } else {
      EXPECT_GT(eval(w.f, pt), 0.0);
    }
  }
}

TEST(AffineRestrict, Examples) {
  const Term f = parse_term("x1*x1 + x2*x2 - 1", kNames);
  const AffineSubspace l{2, {{1.0, -1.0, 0.5}}};
  const Term g = affine_restrict(f, l);
  EXPECT_DOUBLE_EQ(at(g, {1.0, 0.0}), at(f, {1.0, 0.0}) + 0.25);
  EXPECT_DOUBLE_EQ(at(g, {0.5, 0.0}), at(f, {0.5, 0.0}));
  EXPECT_TRUE(structurally_equal(affine_restrict(f, whole(2)), f));
  EXPECT_THROW((AffineSubspace{2, {{2.0, 0.0, 0.0}}}.validate()), std::invalid_argument);
  EXPECT_THROW((AffineSubspace{2, {{1.0, 0.0}}}.validate()), std::invalid_argument);
}

TEST(MilnorTube, ClosedForm) {
  const Term f = parse_term("x1*x2 - 0.3", kNames);
  const Term t = milnor_tube(f, 2, 0.01, 0.1);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 100; ++k) {
    const std::vector<double> x{u(rng), u(rng)};
    const double v = eval(f, x);
    EXPECT_NEAR(eval(t, x), v * v + 0.01 * (x[0] * x[0] + x[1] * x[1]) - 0.01, 1e-12);
  }
}

TEST(MilnorTube, SublevelSetIsCompact) {
  // eps |x|^2 <= delta^2 forces |x| <= delta / sqrt(eps)
  const Term t = milnor_tube(parse_term("x1 - x2", kNames), 2, 0.01, 0.1);
  for (double r = 1.01; r < 100.0; r *= 1.7) {
    for (double a = 0.0; a < 6.3; a += 0.1) EXPECT_GT(eval(t, std::vector<double>{r * std::cos(a), r * std::sin(a)}), 0.0);
  }
}

TEST(Schedule, Validation) {
  const MilnorSchedule g = MilnorSchedule::geometric();
  ASSERT_EQ(g.stages.size(), 3u);
  EXPECT_DOUBLE_EQ(g.stages[1].first, 0.01 / 4.0);
  EXPECT_DOUBLE_EQ(g.stages[2].second, 0.1 / 4.0);
  EXPECT_THROW((MilnorSchedule{{{0.01, 0.1}, {0.01, 0.05}}}.validate()), std::invalid_argument);
  EXPECT_THROW((MilnorSchedule{{{1.5, 0.1}}}.validate()), std::invalid_argument);
  EXPECT_THROW(MilnorSchedule{}.validate(), std::invalid_argument);
}

TEST(RandomRotation, OrthogonalAndReproducible) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Eigen::MatrixXd q = random_rotation(3, seed);
    EXPECT_LT((q.transpose() * q - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_EQ(random_rotation(3, 11), random_rotation(3, 11));
  EXPECT_NE(random_rotation(3, 11), random_rotation(3, 12));
}

TEST(CriticalSystem, OneDimensional) {
  // (x^2-1)^2 + eps x^2 = delta^2 has four roots near +-1
  const Term f = parse_term("x1*x1 - 1", kNames);
  const SquareSystem s = critical_system(f, 1, 0.01, 0.1, Eigen::MatrixXd::Identity(1, 1));
  const CensusReport r = count_nonsingular_zeros(s, 3.0);
  ASSERT_TRUE(r.exact());
  EXPECT_EQ(r.certified_count, 4u);
}

TEST(CriticalSystem, CircleHasFourCriticalPoints) {
  const Term f = parse_term("x1*x1 + x2*x2 - 1", kNames);
  const CensusReport r = count_nonsingular_zeros(critical_system(f, 2, 0.01, 0.1, Eigen::MatrixXd::Identity(2, 2)), 3.0);
  ASSERT_TRUE(r.exact());
  EXPECT_EQ(r.certified_count, 4u);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const CensusReport q = count_nonsingular_zeros(critical_system(f, 2, 0.01, 0.1, random_rotation(2, seed)), 3.0);
    ASSERT_TRUE(q.exact()) << seed;
    EXPECT_EQ(q.certified_count, 4u) << seed;
  }
}

TEST(CriticalSystem, RejectsNonOrthogonal) {
  const Term f = parse_term("x1*x1 + x2*x2 - 1", kNames);
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(2, 2);
  q(0, 1) = 0.1;
  EXPECT_THROW(critical_system(f, 2, 0.01, 0.1, q), std::invalid_argument);
  EXPECT_THROW(critical_system(f, 2, 0.01, 0.1, Eigen::MatrixXd::Identity(3, 3)), std::invalid_argument);
}

TEST(RegularLevel, Circle) {
  const Term f = parse_term("x1*x1 + x2*x2 - 1", kNames);
  EXPECT_TRUE(certify_regular_level(f, 2, 0.01, 0.25));
  // h = F^2 + eps |x|^2 has a critical point at the origin with h = 1
  EXPECT_FALSE(certify_regular_level(f, 2, 0.01, 1.0));
}

struct MorseCase {
  const char* formula;
  std::size_t n;
  std::size_t critical, bound, oracle;
};

void PrintTo(const MorseCase& c, std::ostream* os) { *os << c.formula; }

class MorseExamples : public ::testing::TestWithParam<MorseCase> {};

TEST_P(MorseExamples, CountsAndOracle) {
  const MorseCase& c = GetParam();
  ComponentOptions opt;
  opt.seed = 7;
  const ComponentReport r = component_bound(qf(c.formula), c.n, whole(c.n), opt);
  EXPECT_EQ(r.critical_count, c.critical);
  EXPECT_EQ(r.component_bound, c.bound);
  EXPECT_EQ(r.component_bound, (r.critical_count + 1) / 2);
  ASSERT_TRUE(r.oracle_components);
  EXPECT_EQ(*r.oracle_components, c.oracle);
  EXPECT_LE(*r.oracle_components, r.component_bound);
  EXPECT_TRUE(r.nested);
  EXPECT_EQ(r.stages.size(), r.schedule.stages.size());
}

INSTANTIATE_TEST_SUITE_P(Sets, MorseExamples,
                         ::testing::Values(MorseCase{"x1*x1 + x2*x2 = 1", 2, 4, 2, 1},
                                           MorseCase{"x1*x1 = 1", 1, 4, 2, 2},
                                           MorseCase{"x1*x1 + x2*x2 + 1 = 0", 2, 0, 0, 0},
                                           MorseCase{"0 = 0", 2, 2, 1, 1}));

TEST(ComponentBound, AffineSectionOfCircle) {
  // x1 = 0 cuts the circle in two points
  ComponentOptions opt;
  opt.seed = 3;
  const ComponentReport r = component_bound(qf("x1*x1 + x2*x2 = 1"), 2, AffineSubspace{2, {{1.0, 0.0, 0.0}}}, opt);
  ASSERT_TRUE(r.oracle_components);
  EXPECT_EQ(*r.oracle_components, 2u);
  EXPECT_GE(r.component_bound, 2u);
}

TEST(ComponentBound, Reproducible) {
  ComponentOptions opt;
  opt.seed = 99;
  opt.oracle = false;
  const QFFormula f = qf("x1*x1 + x2*x2 = 1");
  const ComponentReport a = component_bound(f, 2, whole(2), opt);
  const ComponentReport b = component_bound(f, 2, whole(2), opt);
  EXPECT_EQ(a.critical_count, b.critical_count);
  EXPECT_FALSE(a.oracle_components);
  ASSERT_EQ(a.stages.size(), b.stages.size());
  for (std::size_t i = 0; i < a.stages.size(); ++i) EXPECT_EQ(a.stages[i].rotation, b.stages[i].rotation);
}

TEST(ComponentBound, RejectsBadSchedule) {
  ComponentOptions opt;
  opt.schedule = MilnorSchedule{{{0.01, 0.1}, {0.02, 0.05}}};
  EXPECT_THROW(component_bound(qf("x1 = 0"), 1, whole(1), opt), std::invalid_argument);
}

TEST(Gamma, PlaneAndEmpty) {
  GammaOptions opt;
  opt.trials = 6;
  opt.seed = 5;
  const GammaReport p = gamma_estimate(qf("0 = 0"), 2, opt);
  EXPECT_EQ(p.estimate, 1u);
  EXPECT_TRUE(p.bound_respected);
  const GammaReport e = gamma_estimate(qf("x1*x1 + 1 = 0"), 2, opt);
  EXPECT_EQ(e.estimate, 0u);
  EXPECT_EQ(e.max_component_bound, 0u);
}

TEST(Gamma, CircleFewTrials) {
  GammaOptions opt;
  opt.trials = 8;
  opt.seed = 7;
  const GammaReport g = gamma_estimate(qf("x1*x1 + x2*x2 = 1"), 2, opt);
  EXPECT_EQ(g.trials.size(), 8u);
  EXPECT_LE(g.estimate, 2u);
  EXPECT_GE(g.estimate, 1u);
  EXPECT_TRUE(g.bound_respected);
  for (const auto& t : g.trials) {
    EXPECT_LE(t.rows, 2u);
    if (t.bound) {
      EXPECT_LE(t.oracle, *t.bound);
    }
  }
}

}  // namespace
}  // namespace slogcert
