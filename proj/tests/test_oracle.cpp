#include <gtest/gtest.h>

#include <cmath>

#include "corpus.hpp"
#include "slogcert/census.hpp"
#include "slogcert/formula.hpp"
#include "slogcert/oracle.hpp"
#include "slogcert/parser.hpp"

namespace slogcert {
namespace {

const std::vector<std::string> kNames = default_var_names(2);

CellPredicate predicate(const std::string& text, std::size_t n, AffineSubspace l = {}, double ball = 2.0) {
  if (l.n == 0) l.n = n;
  return formula_predicate(normalize(parse_formula(text, kNames)), l, ball);
}

TEST(GridSpec, Geometry) {
  const GridSpec g = GridSpec::uniform(Box::cube(2, 1.0), 4);
  EXPECT_EQ(g.cell_count(), 16u);
  EXPECT_EQ(g.cell(0), (Box{Interval(-1.0, -0.5), Interval(-1.0, -0.5)}));
  EXPECT_EQ(g.center(15), (std::vector<double>{0.75, 0.75}));
  EXPECT_NEAR(g.diagonal(), std::sqrt(0.5), 1e-15);
  EXPECT_THROW(GridSpec::uniform(Box::cube(2, 1.0), 1).cell_count(), std::invalid_argument);
}

TEST(GridSpec, CapRaises) {
  GridSpec g = GridSpec::uniform(Box::cube(3, 1.0), 1000);
  g.cap = 1'000'000;
  EXPECT_THROW(g.cell_count(), GridCapError);
  EXPECT_THROW(grid_zero_cells(SquareSystem::parse({"x1", "x2", "x3"}, 3), g), GridCapError);
}

TEST(ZeroCells, CircleLineTwoClusters) {
  const SquareSystem s = SquareSystem::parse({"x1*x1 + x2*x2 - 1", "x1 - x2"}, 2);
  const GridSpec g = GridSpec::uniform(Box::cube(2, 2.0), 512);
  const auto cells = grid_zero_cells(s, g);
  const auto clusters = cell_clusters(cells, g);
  ASSERT_EQ(clusters.size(), 2u);
  for (const auto& c : clusters) {
    std::vector<double> mean(2, 0.0);
    for (std::size_t k : c) {
      const auto x = g.center(k);
      mean[0] += x[0] / static_cast<double>(c.size());
      mean[1] += x[1] / static_cast<double>(c.size());
    }
    for (double v : s.eval(mean)) EXPECT_LT(std::abs(v), 1e-2);
  }
  EXPECT_EQ(oracle_zero_count(s, g), 2u);
}

TEST(ZeroCells, EmptyAndEverything) {
  const GridSpec g = GridSpec::uniform(Box::cube(1, 2.0), 256);
  EXPECT_TRUE(grid_zero_cells(SquareSystem::parse({"x1 - 10"}, 1), g).empty());
  EXPECT_EQ(grid_zero_cells(SquareSystem::parse({"0"}, 1), g).size(), 256u);
  EXPECT_EQ(oracle_zero_count(SquareSystem::parse({"0"}, 1), g), 1u);
}

TEST(ZeroCells, ThreadCountDoesNotMatter) {
  const SquareSystem s = SquareSystem::parse({"x1*x1 + x2*x2 - 4", "x1*x2 - 1"}, 2);
  const GridSpec g = GridSpec::uniform(Box::cube(2, 3.0), 300);
  EXPECT_EQ(grid_zero_cells(s, g, 1), grid_zero_cells(s, g, 4));
}

TEST(Clusters, DiagonalNeighboursJoin) {
  const GridSpec g = GridSpec::uniform(Box::cube(2, 1.0), 4);
  // cells (0,0) and (1,1) touch at a corner; (3,3) is apart
  const auto c = cell_clusters({0, 5, 15}, g);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0], (std::vector<std::size_t>{0, 5}));
  EXPECT_EQ(c[1], (std::vector<std::size_t>{15}));
}

TEST(Flood, CircleIsOneComponentAtEveryResolution) {
  const auto p = predicate("x1*x1 + x2*x2 = 1", 2);
  for (std::size_t r : {512u, 1024u, 2048u}) {
    EXPECT_EQ(flood_components(p, GridSpec::uniform(Box::cube(2, 2.0), r)), 1u) << r;
  }
  const StabilityReport st = flood_stability(p, Box::cube(2, 2.0), 512);
  EXPECT_TRUE(st.stable());
}

TEST(Flood, Examples) {
  EXPECT_EQ(flood_components(predicate("x1*x1 = 1", 1), GridSpec::uniform(Box::cube(1, 2.0), 4096)), 2u);
  EXPECT_EQ(flood_components(predicate("x1*x1 + 1 = 0", 1), GridSpec::uniform(Box::cube(1, 2.0), 4096)), 0u);
  EXPECT_EQ(flood_components(predicate("x1*x1 + x2*x2 > 1 & x1*x1 + x2*x2 < 2", 2),
                             GridSpec::uniform(Box::cube(2, 2.0), 256)),
            1u);
  EXPECT_EQ(flood_components(predicate("x1*x2 > 0", 2), GridSpec::uniform(Box::cube(2, 2.0), 256)), 2u);
}

TEST(Flood, BallAndAffineRestriction) {
  // the line x1 = x2 meets the circle in two points
  const AffineSubspace l{2, {{1.0, -1.0, 0.0}}};
  EXPECT_EQ(flood_components(predicate("x1*x1 + x2*x2 = 1", 2, l), GridSpec::uniform(Box::cube(2, 2.0), 1024)), 2u);
  // outside the unit ball nothing of x1 = 1.5 survives
  EXPECT_EQ(flood_components(predicate("x1 = 1.5", 2, {}, 1.0), GridSpec::uniform(Box::cube(2, 2.0), 512)), 0u);
}

TEST(Oracle, CertifiedZerosLieInZeroCells) {
  for (const auto& e : testing::census_corpus()) {
    const SquareSystem s = testing::build(e);
    const double r = testing::radius_of(e, s);
    const GridSpec g = GridSpec::uniform(Box::cube(s.dimension(), r), testing::oracle_resolution(s.dimension()));
    const auto cells = grid_zero_cells(s, g);
    for (const Box& z : count_nonsingular_zeros(s, r).zero_boxes) {
      bool hit = false;
      for (std::size_t k : cells) hit = hit || g.cell(k).intersects(z);
      EXPECT_TRUE(hit) << e.name;
    }
  }
}

}  // namespace
}  // namespace slogcert
