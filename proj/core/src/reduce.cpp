#include "slogcert/reduce.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slogcert/evaluate.hpp"
#include "slogcert/ra_catalog.hpp"

namespace slogcert {

namespace {

class Reducer {
 public:
  Reducer(const AbelFunction& abel, Box ball, std::size_t pieces)
      : abel_(abel), ball_(std::move(ball)), pieces_(pieces) {}

  Term reduce(const Term& t) {
    if (t.arity() == 0) return t;
    std::vector<Term> kids;
    kids.reserve(t.arity());
    for (const auto& c : t.children()) kids.push_back(reduce(c));
    switch (t.kind()) {
      case TermKind::Add:
        return Term::add(kids[0], kids[1]);
      case TermKind::Mul:
        return Term::mul(kids[0], kids[1]);
      case TermKind::Neg:
        return Term::neg(kids[0]);
      case TermKind::Exp:
        return Term::exp(kids[0]);
      case TermKind::Log:
        return Term::log(kids[0]);
      case TermKind::RA:
        return Term::ra(t.primitive_ptr(), kids[0]);
      case TermKind::Phi:
        return replace(t.phi_order(), kids[0]);
      default:
        return t;
    }
  }

  std::size_t replaced() const { return replaced_; }
  double fidelity() const { return fidelity_; }

 private:
  Term replace(int order, const Term& arg) {
    if (order + 1 > AbelFunction::kMaxOrder) throw ReduceError("reduce: phi derivative order too high");
    const Interval range = [&] {
      try {
        return interval_eval(arg, ball_, abel_);
      } catch (const DomainError& e) {
        throw ReduceError(std::string("reduce: argument undefined on part of the ball: ") + e.what());
      }
    }();
    if (!range.is_bounded()) throw ReduceError("reduce: argument range unbounded over the ball");
    const double margin = 0.05 * std::max(range.width(), 1e-3);
    const double lo = range.lo() - margin;
    const double hi = range.hi() + margin;

    auto f = [&](double y) { return abel_.derivative(y, order); };
    auto df = [&](double y) { return abel_.derivative(y, order + 1); };
    PiecewisePolynomial poly = hermite_interpolant(f, df, lo, hi, pieces_);

    constexpr int samples = 4096;
    for (int i = 0; i <= samples; ++i) {
      const double y = lo + (hi - lo) * static_cast<double>(i) / samples;
      fidelity_ = std::max(fidelity_, std::abs(poly.value(std::min(y, hi)) - f(y)));
    }
    ++replaced_;
    const std::string base = order == 0 ? "phi" : order == 1 ? "dphi" : "d" + std::to_string(order) + "phi";
    auto prim = make_piecewise_primitive(base + "_spline" + std::to_string(replaced_), std::move(poly));
    return Term::ra(prim, arg);
  }

  const AbelFunction& abel_;
  Box ball_;
  std::size_t pieces_;
  std::size_t replaced_ = 0;
  double fidelity_ = 0.0;
};

}  // namespace

ReducedSystem reduce_phi_complexity(const SquareSystem& system, double radius, std::size_t pieces) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("reduce: radius must be positive");
  if (pieces == 0) throw std::invalid_argument("reduce: need at least one piece");
  if (!system.has_phi()) return {system, 0, 0.0};

  // the instantiated equations see A x, so the ball is pushed through A
  const std::size_t n = system.dimension();
  const Eigen::MatrixXd& a = system.tilt();
  std::vector<Interval> coords;
  for (std::size_t i = 0; i < n; ++i) {
    const double row = a.row(static_cast<Eigen::Index>(i)).cwiseAbs().sum();
    const double reach = std::nextafter(radius * row * (1.0 + 1e-12), INFINITY);
    coords.emplace_back(-reach, reach);
  }
  Reducer r(system.abel(), Box(std::move(coords)), pieces);
  std::vector<Term> out;
  for (const auto& eq : system.instantiated()) out.push_back(r.reduce(eq));
  return {system.with_equations(std::move(out)), r.replaced(), r.fidelity()};
}

}  // namespace slogcert
