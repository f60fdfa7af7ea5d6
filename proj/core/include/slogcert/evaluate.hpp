#pragma once

#include <span>
#include <utility>
#include <vector>

#include "slogcert/abel.hpp"
#include "slogcert/interval.hpp"
#include "slogcert/term.hpp"

namespace slogcert {

/// Shared default phi (order 3, tol 1e-8), built on first use.
const AbelFunction& default_abel();

/// Point value. Throws DomainError for log of a non-positive number or an
/// RA argument outside its domain. The point must cover every variable
/// index used by the term.
double eval(const Term& t, std::span<const double> x, const AbelFunction& abel = default_abel());

/// Forward-mode gradient with respect to the first x.size() variables.
std::vector<double> gradient(const Term& t, std::span<const double> x,
                             const AbelFunction& abel = default_abel());

std::pair<double, std::vector<double>> value_and_gradient(
    const Term& t, std::span<const double> x, const AbelFunction& abel = default_abel());

/// Enclosure of the range of t over the box.
Interval interval_eval(const Term& t, const Box& box, const AbelFunction& abel = default_abel());

/// Enclosures of the value and of every partial derivative over the box.
std::pair<Interval, std::vector<Interval>> interval_value_and_gradient(
    const Term& t, const Box& box, const AbelFunction& abel = default_abel());

}  // namespace slogcert
