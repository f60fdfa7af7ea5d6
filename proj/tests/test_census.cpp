#include <gtest/gtest.h>

#include <cmath>

#include "corpus.hpp"
#include "slogcert/analysis.hpp"
#include "slogcert/census.hpp"
#include "slogcert/deformation.hpp"
#include "slogcert/evaluate.hpp"
#include "slogcert/reduce.hpp"

namespace slogcert {
namespace {

using testing::CorpusEntry;

class Corpus : public ::testing::TestWithParam<CorpusEntry> {};

TEST_P(Corpus, CountMatchesGridOracle) {
  const CorpusEntry& e = GetParam();
  const SquareSystem s = testing::build(e);
  const double r = testing::radius_of(e, s);
  const CensusReport rep = count_nonsingular_zeros(s, r);
  ASSERT_TRUE(rep.exact()) << rep.unknown_boxes.size() << " unknown boxes";
  EXPECT_EQ(rep.certified_count, testing::oracle_count(s, r));
  EXPECT_EQ(rep.zero_boxes.size(), rep.certified_count);
  EXPECT_EQ(rep.search_radius, r);
}

TEST_P(Corpus, ZeroBoxesDisjointAndResidualSmall) {
  const CorpusEntry& e = GetParam();
  const SquareSystem s = testing::build(e);
  const CensusReport rep = count_nonsingular_zeros(s, testing::radius_of(e, s));
  for (std::size_t i = 0; i < rep.zero_boxes.size(); ++i) {
    for (std::size_t j = i + 1; j < rep.zero_boxes.size(); ++j) {
      EXPECT_FALSE(rep.zero_boxes[i].intersects(rep.zero_boxes[j]));
    }
    for (double v : s.eval(rep.zero_boxes[i].mid())) EXPECT_LT(std::abs(v), 1e-6);
  }
}

TEST_P(Corpus, RadiusMonotone) {
  const CorpusEntry& e = GetParam();
  const SquareSystem s = testing::build(e);
  const double r = testing::radius_of(e, s);
  std::size_t prev = 0;
  for (double f : {0.3, 0.55, 0.8, 1.0}) {
    const CensusReport rep = count_nonsingular_zeros(s, f * r);
    if (!rep.exact()) continue;
    EXPECT_GE(rep.certified_count, prev) << f * r;
    prev = rep.certified_count;
  }
}

TEST_P(Corpus, Deterministic) {
  const CorpusEntry& e = GetParam();
  const SquareSystem s = testing::build(e);
  const double r = testing::radius_of(e, s);
  const CensusReport a = count_nonsingular_zeros(s, r);
  const CensusReport b = count_nonsingular_zeros(testing::build(e), r);
  EXPECT_EQ(a.zero_boxes, b.zero_boxes);
  EXPECT_EQ(a.unknown_boxes, b.unknown_boxes);
  EXPECT_EQ(a.boxes_examined, b.boxes_examined);
  EXPECT_EQ(a.depth_used, b.depth_used);
}

TEST_P(Corpus, ReductionPreservesCount) {
  const CorpusEntry& e = GetParam();
  const SquareSystem s = testing::build(e);
  const double r = testing::radius_of(e, s);
  const ReducedSystem red = reduce_phi_complexity(s, r);
  const CensusReport a = count_nonsingular_zeros(s, r);
  const CensusReport b = count_nonsingular_zeros(red.system, r);
  ASSERT_TRUE(a.exact() && b.exact());
  EXPECT_EQ(a.certified_count, b.certified_count);
  EXPECT_EQ(red.replaced > 0, e.has_phi);
  for (const auto& t : red.system.instantiated()) EXPECT_EQ(fcpx(t), 0);
  if (e.has_phi) {
    EXPECT_LT(red.fidelity, 1e-9);
  }
}

INSTANTIATE_TEST_SUITE_P(Desk, Corpus, ::testing::ValuesIn(testing::census_corpus()),
                         [](const auto& info) { return info.param.name; });

TEST(BuildSystem, Examples) {
  const SquareSystem a = SquareSystem::parse({"x1*x1 + x2*x2 - 1", "x1 - x2"}, 2);
  EXPECT_EQ(a.dimension(), 2u);
  EXPECT_TRUE(a.phi_registry().empty());
  EXPECT_FALSE(a.has_phi());

  SystemParams p;
  p.delta = 0.5;
  const SquareSystem b = SquareSystem::parse({"phi(x1) - delta", "x2"}, 2, p);
  ASSERT_EQ(b.phi_registry().size(), 1u);
  EXPECT_EQ(b.phi_registry()[0].child(0).kind(), TermKind::Var);
  EXPECT_EQ(b.phi_registry()[0].child(0).var_index(), 0u);
  EXPECT_NEAR(b.eval(std::vector<double>{1.0, 0.0})[0], -0.5, 1e-12);

  EXPECT_THROW(SquareSystem::parse({"x1", "x2", "x3"}, 2), SystemError);
  SystemParams bad;
  bad.delta = 1.5;
  EXPECT_THROW(SquareSystem::parse({"x1"}, 1, bad), SystemError);
}

TEST(Census, SingularZeroLeftUnknown) {
  const CensusReport r = count_nonsingular_zeros(SquareSystem::parse({"x1*x1"}, 1), 2.0);
  EXPECT_EQ(r.certified_count, 0u);
  ASSERT_FALSE(r.exact());
  for (const auto& b : r.unknown_boxes) EXPECT_LT(std::abs(b.mid()[0]), 1e-3);
}

TEST(Census, CircleLineZerosNearDiagonal) {
  const CensusReport r = count_nonsingular_zeros(SquareSystem::parse({"x1*x1 + x2*x2 - 1", "x1 - x2"}, 2), 2.0);
  ASSERT_EQ(r.certified_count, 2u);
  const double h = std::sqrt(0.5);
  EXPECT_TRUE(r.zero_boxes[0].contains(std::vector<double>{-h, -h}));
  EXPECT_TRUE(r.zero_boxes[1].contains(std::vector<double>{h, h}));
}

TEST(Census, RejectsBadArguments) {
  const SquareSystem s = SquareSystem::parse({"x1"}, 1);
  EXPECT_THROW(count_nonsingular_zeros(s, 0.0), std::invalid_argument);
  EXPECT_THROW(count_nonsingular_zeros(s, 1.0, -1), std::invalid_argument);
  EXPECT_THROW(count_in_box(s, Box::cube(2, 1.0)), std::invalid_argument);
}

TEST(Census, BudgetExhaustionLeavesUnknowns) {
  CensusOptions opt;
  opt.box_budget = 3;
  const CensusReport r =
      count_nonsingular_zeros(SquareSystem::parse({"sin(x1)"}, 1), 20.0, 40, opt);
  EXPECT_FALSE(r.exact());
  EXPECT_LE(r.boxes_examined, 3u);
}

// Scalar oracle: root of z/2 - k |phi(z) + 2s| by bisection.
double bisect_threshold(std::size_t k, int s, double lo, double hi) {
  const AbelFunction& phi = default_abel();
  auto g = [&](double z) { return z / 2.0 - static_cast<double>(k) * std::abs(phi(z) + 2.0 * s); };
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (lo + hi);
    (g(m) < 0.0 ? lo : hi) = m;
  }
  return hi;
}

TEST(SearchRadius, PolynomialSystemIsHeuristic) {
  const SearchRadius r = search_radius(SquareSystem::parse({"x1*x1 - 1"}, 1));
  EXPECT_TRUE(r.heuristic);
  EXPECT_EQ(r.radius, kDefaultRadius);
}

TEST(SearchRadius, PhiLevelMatchesScalarOracle) {
  const SearchRadius r = search_radius(SquareSystem::parse({"phi(x1) - 0.5", "x2"}, 2));
  EXPECT_FALSE(r.heuristic);
  EXPECT_EQ(r.s, 0);
  EXPECT_NEAR(r.d_iii, bisect_threshold(1, 0, 0.1, 5.0), 1e-3);
  EXPECT_TRUE(std::isfinite(r.radius));
  EXPECT_GE(r.radius, r.d_iii);
  EXPECT_GE(r.radius, r.d_iv);
}

TEST(SearchRadius, GrowsWithExponent) {
  const SearchRadius r1 = search_radius(SquareSystem::parse({"phi(exp(x1)) - 0.5"}, 1));
  const SearchRadius r2 = search_radius(SquareSystem::parse({"phi(exp(exp(x1))) - 0.5"}, 1));
  EXPECT_EQ(r1.s, 1);
  EXPECT_EQ(r2.s, 2);
  EXPECT_NEAR(r1.d_iii, bisect_threshold(1, 1, 1.0, 50.0), 1e-3);
  EXPECT_NEAR(r2.d_iii, bisect_threshold(1, 2, 1.0, 50.0), 1e-3);
  EXPECT_GT(r2.d_iii, r1.d_iii);
  EXPECT_GE(r2.radius, r1.radius);
}

TEST(SearchRadius, ZerosLieInside) {
  for (const char* eq : {"phi(x1) - 0.5", "phi(exp(x1)) - 2.5", "dphi(x1) - 0.3"}) {
    const SquareSystem s = SquareSystem::parse({eq}, 1);
    const double r = search_radius(s).radius;
    const CensusReport in = count_nonsingular_zeros(s, r);
    const CensusReport wide = count_nonsingular_zeros(s, 4.0 * r);
    ASSERT_TRUE(in.exact() && wide.exact()) << eq;
    EXPECT_EQ(in.certified_count, wide.certified_count) << eq;
  }
}

TEST(RegularValue, SquareRejectsZeroTarget) {
  const RegularValue v = sample_regular_value(SquareSystem::parse({"x1*x1"}, 1), Box::cube(1, 2.0), 1);
  EXPECT_GT(v.attempts, 1u);
  ASSERT_EQ(v.eta.size(), 1u);
  EXPECT_NE(v.eta[0], 0.0);
  EXPECT_EQ(v.census.certified_count, v.eta[0] > 0.0 ? 2u : 0u);
}

TEST(RegularValue, CircleLineAcceptsZero) {
  const RegularValue v =
      sample_regular_value(SquareSystem::parse({"x1*x1 + x2*x2 - 1", "x1 - x2"}, 2), Box::cube(2, 2.0), 1);
  EXPECT_EQ(v.attempts, 1u);
  EXPECT_EQ(v.eta, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(v.census.certified_count, 2u);
}

TEST(RegularValue, ZeroBudget) {
  EXPECT_THROW(sample_regular_value(SquareSystem::parse({"x1"}, 1), Box::cube(1, 1.0), 1, 0), std::runtime_error);
}

TEST(GenericTilt, Examples) {
  const Eigen::MatrixXd a = sample_generic_tilt(3, 1e-9, 5);
  EXPECT_LT((a - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR(a.determinant(), 1.0, 1e-8);
  EXPECT_EQ(sample_generic_tilt(2, 0.3, 42), sample_generic_tilt(2, 0.3, 42));
  EXPECT_NE(sample_generic_tilt(2, 0.3, 42), sample_generic_tilt(2, 0.3, 43));
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    EXPECT_GT(std::abs(sample_generic_tilt(2, 0.1, seed).determinant()), 0.5);
  }
  EXPECT_THROW(sample_generic_tilt(2, 0.0, 1), std::invalid_argument);
  EXPECT_THROW(sample_generic_tilt(2, 1.0, 1), std::invalid_argument);
}

TEST(Track, ConstantPath) {
  const SquareSystem s = SquareSystem::parse({"x1*x1 - 1"}, 1);
  const TrackReport r = track_path(s, DeformationPath::constant(1), 10, 2.0);
  EXPECT_TRUE(r.constant);
  EXPECT_EQ(r.steps.size(), 11u);
  EXPECT_FALSE(r.first_change);
  EXPECT_FALSE(r.first_irregular);
}

TEST(Track, CircleLineShiftedTarget) {
  const SquareSystem s = SquareSystem::parse({"x1*x1 + x2*x2 - 1", "x1 - x2"}, 2);
  PathPoint a, b;
  a.t = 0.0;
  a.tilt = Eigen::MatrixXd::Identity(2, 2);
  a.target = {0.0, 0.0};
  b = a;
  b.t = 1.0;
  b.target = {0.1, 0.0};
  const TrackReport r = track_path(s, DeformationPath({a, b}), 20, 2.0);
  EXPECT_TRUE(r.constant);
  for (const auto& st : r.steps) EXPECT_EQ(st.census.certified_count, 2u);
  EXPECT_EQ(testing::oracle_count(s.with_target({0.1, 0.0}), 2.0), 2u);
}

TEST(Track, DoubleRootOnParameterPath) {
  // x^2 - delta with delta running from -0.5 to 0.5
  const SquareSystem s = SquareSystem::parse({"x1*x1 - delta"}, 1);
  PathPoint a, b;
  a.t = 0.0;
  a.tilt = Eigen::MatrixXd::Identity(1, 1);
  a.target = {0.0};
  a.params.delta = -0.5;
  b = a;
  b.t = 1.0;
  b.params.delta = 0.5;
  const TrackReport r = track_path(s, DeformationPath({a, b}), 100, 2.0);
  EXPECT_FALSE(r.constant);
  ASSERT_TRUE(r.first_irregular);
  ASSERT_TRUE(r.first_change);
  EXPECT_NEAR(r.steps[*r.first_irregular].t, 0.5, 0.01 + 1e-12);
  EXPECT_NEAR(r.steps[*r.first_change].t, 0.5, 0.01 + 1e-12);
  EXPECT_EQ(r.steps.front().census.certified_count, 0u);
  EXPECT_EQ(r.steps.back().census.certified_count, 2u);
}

TEST(Track, PathValidation) {
  PathPoint a;
  a.t = 0.0;
  a.tilt = Eigen::MatrixXd::Identity(1, 1);
  a.target = {0.0};
  PathPoint b = a;
  b.t = 0.5;
  EXPECT_THROW(DeformationPath({a, b}), PathError);
  b.t = 1.0;
  b.tilt = Eigen::MatrixXd::Zero(1, 1);
  EXPECT_THROW(DeformationPath({a, b}), PathError);
  const SquareSystem s = SquareSystem::parse({"x1"}, 1);
  EXPECT_THROW(track_path(s, DeformationPath::constant(1), 1, 1.0), PathError);
}

TEST(Probe, CircleLineStable) {
  const SquareSystem s = SquareSystem::parse({"x1*x1 + x2*x2 - 1", "x1 - x2"}, 2);
  const ProbeReport p = probe_boundedness(s, Eigen::MatrixXd::Identity(2, 2), {0.0, 0.0}, {2.0, 4.0, 8.0});
  EXPECT_TRUE(p.stable);
  for (const auto& c : p.census) EXPECT_EQ(c.certified_count, 2u);
}

TEST(Probe, EscapingZeroIsUnstable) {
  // x1 x2 = 1, x2 = eps1 puts the zero at x1 = 1/eps1 = 5
  SystemParams prm;
  prm.eps = {0.2, 0.0};
  const SquareSystem s = SquareSystem::parse({"x1*x2 - 1", "x2 - eps1"}, 2, prm);
  const ProbeReport p = probe_boundedness(s, Eigen::MatrixXd::Identity(2, 2), {0.0, 0.0}, {2.0, 4.0, 8.0});
  EXPECT_FALSE(p.stable);
  EXPECT_EQ(p.census[0].certified_count, 0u);
  EXPECT_EQ(p.census[1].certified_count, 0u);
  ASSERT_EQ(p.census[2].certified_count, 1u);
  EXPECT_TRUE(p.census[2].zero_boxes[0].contains(std::vector<double>{5.0, 0.2}));
}

TEST(Probe, EmptyZeroSetStable) {
  const SquareSystem s = SquareSystem::parse({"x1*x1 + 1"}, 1);
  const ProbeReport p = probe_boundedness(s, Eigen::MatrixXd::Identity(1, 1), {0.0}, {1.0, 2.0});
  EXPECT_TRUE(p.stable);
  EXPECT_THROW(probe_boundedness(s, Eigen::MatrixXd::Identity(1, 1), {0.0}, {2.0, 1.0}), std::invalid_argument);
}

TEST(Reduce, DropsComplexity) {
  const SquareSystem s = SquareSystem::parse({"phi(x1) - 0.5", "x2"}, 2);
  EXPECT_EQ(fcpx(s.instantiated()[0]), 1);
  const ReducedSystem r = reduce_phi_complexity(s, 2.0);
  EXPECT_EQ(r.replaced, 1u);
  EXPECT_EQ(fcpx(r.system.instantiated()[0]), 0);
  EXPECT_FALSE(r.system.has_phi());
  EXPECT_EQ(count_nonsingular_zeros(r.system, 2.0).certified_count,
            count_nonsingular_zeros(s, 2.0).certified_count);
}

TEST(Reduce, NestedPhi) {
  const SquareSystem s = SquareSystem::parse({"phi(phi(x1) + 2) - 0.4"}, 1);
  const ReducedSystem r = reduce_phi_complexity(s, 3.0);
  EXPECT_EQ(r.replaced, 2u);
  EXPECT_EQ(fcpx(r.system.instantiated()[0]), 0);
  const CensusReport a = count_nonsingular_zeros(s, 3.0), b = count_nonsingular_zeros(r.system, 3.0);
  ASSERT_TRUE(a.exact() && b.exact());
  EXPECT_EQ(a.certified_count, b.certified_count);
}

TEST(Reduce, PhiFreeUnchanged) {
  const SquareSystem s = SquareSystem::parse({"x1*x1 - 1"}, 1);
  const ReducedSystem r = reduce_phi_complexity(s, 2.0);
  EXPECT_EQ(r.replaced, 0u);
  EXPECT_TRUE(structurally_equal(r.system.instantiated()[0], s.instantiated()[0]));
}

TEST(Reduce, UnboundedArgumentRejected) {
  const SquareSystem s = SquareSystem::parse({"phi(log(x1)) - 0.5"}, 1);
  EXPECT_THROW(reduce_phi_complexity(s, 2.0), ReduceError);
}

}  // namespace
}  // namespace slogcert
