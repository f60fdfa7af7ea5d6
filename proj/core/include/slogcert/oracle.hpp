#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "slogcert/formula.hpp"
#include "slogcert/interval.hpp"
#include "slogcert/system.hpp"

namespace slogcert {

// Brute-force grid checks. Nothing here is certified; tests and reports use
// it as an independent reference.

class GridCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  Box box;
  std::vector<std::size_t> resolution;
  std::size_t cap = 100'000'000;

  /// Same resolution on every axis.
  static GridSpec uniform(Box box, std::size_t per_axis);

  /// Throws std::invalid_argument (bad shape, resolution < 2) or
  /// GridCapError (too many cells).
  std::size_t cell_count() const;
  Box cell(std::size_t linear) const;
  std::vector<double> center(std::size_t linear) const;
  /// length of the longest cell diagonal
  double diagonal() const;
};

/// Cells on which the interval value of every equation contains 0,
/// in increasing linear order.
std::vector<std::size_t> grid_zero_cells(const SquareSystem& system, const GridSpec& grid,
                                         unsigned threads = 0);

/// Clusters of a cell set, cells sharing a face, edge or corner joined
/// (bands of transversal curves may only touch at corners). Each cluster
/// is a sorted list of linear indices, clusters ordered by first cell.
std::vector<std::vector<std::size_t>> cell_clusters(const std::vector<std::size_t>& cells,
                                                    const GridSpec& grid);

/// Zero count reference: number of clusters of grid_zero_cells.
std::size_t oracle_zero_count(const SquareSystem& system, const GridSpec& grid, unsigned threads = 0);

using CellPredicate = std::function<bool(std::span<const double> center, double diagonal)>;

/// Number of face-connected components of the cells whose center satisfies
/// the predicate. Rows are evaluated in parallel; labelling is sequential.
std::size_t flood_components(const CellPredicate& member, const GridSpec& grid, unsigned threads = 0);

/// Membership in (set of f) ∩ L ∩ ball at a cell center. The equalities
/// of a conjunction together with the affine rows pass when one
/// Gauss-Newton step towards their common zero set is at most 4 cell
/// diagonals long; for a single equation that is |F| <= 4 diag |grad F|.
CellPredicate formula_predicate(const QFFormula& f, const AffineSubspace& l, double ball_radius);

/// Default per-axis resolution for the flood oracle by dimension.
std::size_t default_resolution(std::size_t n);

struct StabilityReport {
  std::size_t coarse = 0;
  std::size_t fine = 0;
  bool stable() const noexcept { return coarse == fine; }
};

/// Component counts at per_axis and 2 * per_axis.
StabilityReport flood_stability(const CellPredicate& member, const Box& box, std::size_t per_axis,
                                unsigned threads = 0);

}  // namespace slogcert
