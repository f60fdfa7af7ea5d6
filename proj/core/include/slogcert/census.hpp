#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

#include "slogcert/interval.hpp"
#include "slogcert/system.hpp"

namespace slogcert {

struct CensusOptions {
  int max_depth = 40;
  /// Boxes examined before the search gives up; the rest become unknown.
  std::size_t box_budget = 2'000'000;
};

/// Result of a branch-and-prune census over the cube [-r, r]^n.
struct CensusReport {
  std::size_t certified_count = 0;
  /// One Krawczyk box per certified zero, sorted lexicographically.
  std::vector<Box> zero_boxes;
  /// Boxes left undecided at the depth or budget limit.
  std::vector<Box> unknown_boxes;
  double search_radius = 0.0;
  int depth_used = 0;
  std::size_t boxes_examined = 0;

  bool exact() const noexcept { return unknown_boxes.empty(); }
};

CensusReport count_nonsingular_zeros(const SquareSystem& system, double radius,
                                     int max_depth = 40, const CensusOptions& options = {});

/// Same census over an arbitrary box; search_radius is left at 0.
CensusReport count_in_box(const SquareSystem& system, const Box& box, int max_depth = 40,
                          const CensusOptions& options = {});

/// Search radius from the growth argument. For systems without phi-monomials
/// the fallback radius is returned with `heuristic` set.
struct SearchRadius {
  double radius = 0.0;
  bool heuristic = false;
  /// max growth exponent over the monomial arguments
  int s = 0;
  /// least z0 with k |phi(exp_{2s}(z))| < z/2 for all z >= z0
  double d_iii = 0.0;
  /// 2 (2n + 2 + u sup |phi'|)
  double d_iv = 0.0;
};

constexpr double kDefaultRadius = 8.0;

/// Throws GrowthError when a monomial argument has no growth exponent.
SearchRadius search_radius(const SquareSystem& system, double fallback = kDefaultRadius);

/// Least z0 (on a fine grid, with an analytic tail) such that
/// k |phi(z) + 2s| < z/2 for every z >= z0.
double growth_threshold(const AbelFunction& phi, std::size_t k, int s);

struct RegularValue {
  std::vector<double> eta;
  std::size_t attempts = 0;
  CensusReport census;
};

/// Tries eta = 0 first, then uniform samples of [-scale, scale]^n, until the
/// census of system - eta over the box leaves no unknown boxes. Throws
/// std::runtime_error when the budget runs out.
RegularValue sample_regular_value(const SquareSystem& system, const Box& box, std::uint64_t seed,
                                  std::size_t budget = 32, double scale = 1.0,
                                  int max_depth = 40);

/// I + scale * U with U uniform in [-1, 1]^{n x n}, redrawn until
/// |det| > 1e-6 (at most 100 draws).
Eigen::MatrixXd sample_generic_tilt(std::size_t n, double scale, std::uint64_t seed);

}  // namespace slogcert
