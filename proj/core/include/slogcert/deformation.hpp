#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <vector>

#include "slogcert/census.hpp"
#include "slogcert/system.hpp"

namespace slogcert {

class PathError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One breakpoint of a piecewise-linear deformation.
struct PathPoint {
  double t = 0.0;
  Eigen::MatrixXd tilt;
  std::vector<double> target;
  SystemParams params;
};

/// t -> (A(t), eta(t), params(t)), linear between breakpoints. Breakpoints
/// must start at t=0, end at t=1, increase strictly and have invertible tilts.
class DeformationPath {
 public:
  explicit DeformationPath(std::vector<PathPoint> points);

  /// Constant path at (identity, 0, params).
  static DeformationPath constant(std::size_t n, const SystemParams& params = {});

  std::size_t dimension() const noexcept { return n_; }
  const std::vector<PathPoint>& points() const noexcept { return points_; }
  PathPoint at(double t) const;

 private:
  std::size_t n_ = 0;
  std::vector<PathPoint> points_;
};

struct TrackStep {
  double t = 0.0;
  CensusReport census;
};

struct TrackReport {
  std::vector<TrackStep> steps;
  /// all counts equal and every step exact
  bool constant = false;
  /// first step with unknown boxes
  std::optional<std::size_t> first_irregular;
  /// first step whose count differs from the step before
  std::optional<std::size_t> first_change;
};

/// Census at t_j = j/steps for j = 0..steps. Throws PathError if A(t_j) is
/// singular (|det| <= 1e-6) or steps < 2.
TrackReport track_path(const SquareSystem& system, const DeformationPath& path, std::size_t steps,
                       double radius, int max_depth = 40);

struct ProbeReport {
  std::vector<double> radii;
  std::vector<CensusReport> census;
  /// count and zero locations agree over the last two radii
  bool stable = false;
};

/// Heuristic boundedness probe; proves nothing. The radii must increase.
ProbeReport probe_boundedness(const SquareSystem& system, const Eigen::MatrixXd& tilt,
                              const std::vector<double>& target, const std::vector<double>& radii,
                              int max_depth = 40);

}  // namespace slogcert
