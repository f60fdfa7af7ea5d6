#pragma once

#include <optional>

#include "slogcert/interval.hpp"
#include "slogcert/system.hpp"

namespace slogcert {

enum class Verdict { UniqueZero, NoZero, Unknown };

const char* to_string(Verdict v);

struct KrawczykResult {
  Verdict verdict = Verdict::Unknown;
  /// K(X) for UniqueZero (it lies in the interior of X and holds the zero);
  /// K(X) intersected with X for Unknown when that is a proper contraction.
  std::optional<Box> box;
};

/// K(X) = m - Y f(m) + (I - Y J(X)) (X - m) with m the midpoint of X and Y
/// the inverse of the midpoint Jacobian. Domain errors over the whole box
/// give NoZero, partial ones Unknown.
KrawczykResult krawczyk_test(const SquareSystem& system, const Box& box);

}  // namespace slogcert
