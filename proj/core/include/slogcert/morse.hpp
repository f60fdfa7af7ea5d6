#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "slogcert/formula.hpp"
#include "slogcert/system.hpp"

namespace slogcert {

class MorseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pairs (eps_i, delta_i) in (0, 1)^2, both strictly decreasing.
struct MilnorSchedule {
  std::vector<std::pair<double, double>> stages;

  /// eps0 4^-i, delta0 2^-i for i < count.
  static MilnorSchedule geometric(double eps0 = 0.01, double delta0 = 0.1, std::size_t count = 3);

  /// Throws std::invalid_argument.
  void validate() const;
};

/// F_L^2 + eps |x|^2 - delta^2 over the first n variables.
Term milnor_tube(const Term& fl, std::size_t n, double eps, double delta);

/// Haar-distributed orthogonal matrix.
Eigen::MatrixXd random_rotation(std::size_t n, std::uint64_t seed);

/// Critical points of the last coordinate y_n on the tube level set, in
/// coordinates y = Q x: for i < n, 2 G dG/dy_i + 2 eps y_i = 0, and
/// G^2 + eps |y|^2 - delta^2 = 0, where G = F_L(Q^T y). Throws
/// std::invalid_argument if Q is not orthogonal to 1e-12.
SquareSystem critical_system(const Term& fl, std::size_t n, double eps, double delta,
                             const Eigen::MatrixXd& q,
                             std::shared_ptr<const AbelFunction> abel = default_abel_ptr());

/// Interval branch-and-prune proof that `level` is a regular value of
/// h = F_L^2 + eps |x|^2 on the cube where h can reach it.
bool certify_regular_level(const Term& fl, std::size_t n, double eps, double level,
                           std::size_t box_budget = 200'000);

struct StageReport {
  double eps = 0.0;
  double delta = 0.0;
  std::size_t critical_count = 0;
  /// rotations tried, 1 when the first one was Morse-usable
  std::size_t rotations = 0;
  std::size_t delta_resamples = 0;
  Eigen::MatrixXd rotation;
};

struct ComponentOptions {
  double radius = 2.0;
  /// empty: MilnorSchedule::geometric() rescaled to the radius
  MilnorSchedule schedule;
  std::uint64_t seed = 0;
  int max_depth = 40;
  unsigned threads = 0;
  std::size_t max_rotations = 5;
  bool oracle = true;
  /// per-axis oracle resolution, 0 for default_resolution(n)
  std::size_t oracle_resolution = 0;
};

struct ComponentReport {
  std::size_t critical_count = 0;
  std::size_t component_bound = 0;
  std::optional<std::size_t> oracle_components;
  /// dimension after the single-equation reduction (n + auxiliaries)
  std::size_t dimension = 0;
  MilnorSchedule schedule;
  std::vector<StageReport> stages;
  /// sampled nesting check of consecutive tubes
  bool nested = true;
  /// the bound is carried from the tubes to the set itself without a
  /// separate numerical check
  static constexpr const char* kAssumption = "limit transfer from tubes to the set is assumed";
};

/// Throws MorseError when a stage cannot be certified.
ComponentReport component_bound(const QFFormula& f, std::size_t n, const AffineSubspace& l,
                                const ComponentOptions& options = {});

struct GammaTrial {
  std::size_t rows = 0;
  std::size_t oracle = 0;
  /// empty when the trial's bound could not be certified
  std::optional<std::size_t> bound;
};

struct GammaReport {
  std::size_t estimate = 0;
  std::size_t max_component_bound = 0;
  std::vector<GammaTrial> trials;
  std::size_t uncertified_trials = 0;
  /// oracle <= bound on every certified trial
  bool bound_respected = true;
};

struct GammaOptions {
  std::size_t trials = 50;
  double radius = 2.0;
  std::uint64_t seed = 0;
  int max_depth = 40;
  unsigned threads = 0;
  /// per-axis oracle resolution, 0 for half of default_resolution(n)
  std::size_t oracle_resolution = 0;
};

/// Samples affine subspaces (k uniform in 0..n rows, entries uniform in
/// [-1, 1]) and reports the largest oracle component count together with
/// the component bound of each section.
GammaReport gamma_estimate(const QFFormula& f, std::size_t n, const GammaOptions& options);

}  // namespace slogcert
