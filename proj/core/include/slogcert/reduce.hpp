#pragma once

#include <stdexcept>

#include "slogcert/system.hpp"

namespace slogcert {

class ReduceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ReducedSystem {
  SquareSystem system;
  std::size_t replaced = 0;
  /// max |spline - phi^(k)| sampled over the spline domains
  double fidelity = 0.0;
};

/// Replaces every phi / phi^(k) node, innermost first, by a cubic Hermite
/// spline of phi^(k) on the argument's range over the (tilted) ball of the
/// given radius plus a 5% margin. Tilt and target carry over. Throws
/// ReduceError when an argument range over the ball is unbounded or
/// the argument is undefined somewhere on it.
ReducedSystem reduce_phi_complexity(const SquareSystem& system, double radius,
                                    std::size_t pieces = 2048);

}  // namespace slogcert
