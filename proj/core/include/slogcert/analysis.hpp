#pragma once

#include <stdexcept>
#include <string>

#include "slogcert/abel.hpp"
#include "slogcert/interval.hpp"
#include "slogcert/term.hpp"

namespace slogcert {

/// Formal complexity: nesting depth of phi / dphi applications.
int fcpx(const Term& t);

class GrowthError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Smallest s in {0, 1, 2, ...} with |c| <= exp_s(0).
int constant_growth(double c);

/// An s with |t(x)| <= exp_s(|x|) for every x where t is defined, derived
/// by structural induction:
///
///   Var -> 0, Const c -> constant_growth(c), Neg -> child,
///   Add, Mul -> max(children) + 1, Exp -> child + 1,
///   Log -> max(child, constant_growth(|log m|)) when the argument is
///          globally bounded below by m > 0 (fails otherwise),
///   RA  -> constant_growth(sup |f|),
///   phi -> max(child, 1) for a non-negative argument, else max(child, 2),
///   dphi -> constant_growth(sup phi').
///
/// Throws GrowthError for log of an argument that may approach 0 and for
/// derivative orders above one.
int growth_exponent(const Term& t, const AbelFunction& abel);

/// Enclosure of the range of t over all of R^n (RA nodes contribute
/// [-sup, sup], log of a possibly non-positive argument gives the entire
/// line).
Interval global_range(const Term& t, const AbelFunction& abel);

}  // namespace slogcert
