#include "slogcert/morse.hpp"

#include <algorithm>
#include <cmath>

#include "slogcert/census.hpp"
#include "slogcert/evaluate.hpp"
#include "slogcert/oracle.hpp"
#include "slogcert/parallel.hpp"
#include "slogcert/random.hpp"

namespace slogcert {

MilnorSchedule MilnorSchedule::geometric(double eps0, double delta0, std::size_t count) {
  MilnorSchedule s;
  for (std::size_t i = 0; i < count; ++i) {
    s.stages.emplace_back(eps0 * std::pow(4.0, -static_cast<double>(i)),
                          delta0 * std::pow(2.0, -static_cast<double>(i)));
  }
  s.validate();
  return s;
}

void MilnorSchedule::validate() const {
  if (stages.empty()) throw std::invalid_argument("schedule: no stages");
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const auto [e, d] = stages[i];
    if (!(e > 0.0 && e < 1.0 && d > 0.0 && d < 1.0)) {
      throw std::invalid_argument("schedule: stage outside (0, 1)^2");
    }
    if (i > 0 && !(e < stages[i - 1].first && d < stages[i - 1].second)) {
      throw std::invalid_argument("schedule: stages must decrease strictly");
    }
  }
}

namespace {

Term squared_norm(std::size_t n) {
  Term s = Term::constant(0.0);
  for (std::size_t i = 0; i < n; ++i) s = fold::add(s, fold::square(Term::variable(i)));
  return s;
}

}  // namespace

Term milnor_tube(const Term& fl, std::size_t n, double eps, double delta) {
  return fold::add(fold::add(fold::square(fl), fold::mul(Term::constant(eps), squared_norm(n))),
                   Term::constant(-delta * delta));
}

Eigen::MatrixXd random_rotation(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd g(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) g(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // sign fix so the distribution is Haar
  for (Eigen::Index j = 0; j < m; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

SquareSystem critical_system(const Term& fl, std::size_t n, double eps, double delta,
                             const Eigen::MatrixXd& q, std::shared_ptr<const AbelFunction> abel) {
  const auto m = static_cast<Eigen::Index>(n);
  if (q.rows() != m || q.cols() != m) throw std::invalid_argument("critical_system: rotation has wrong shape");
  if ((q.transpose() * q - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("critical_system: rotation is not orthogonal");
  }
  // x = Q^T y
  std::vector<Term> x;
  for (Eigen::Index j = 0; j < m; ++j) {
    Term xj = Term::constant(0.0);
    for (Eigen::Index k = 0; k < m; ++k) {
      xj = fold::add(xj, fold::mul(Term::constant(q(k, j)), Term::variable(static_cast<std::size_t>(k))));
    }
    x.push_back(xj);
  }
  const Term g = substitute(fl, x);
  std::vector<Term> eqs;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    eqs.push_back(fold::add(fold::mul(fold::mul(Term::constant(2.0), g), differentiate(g, i)),
                            fold::mul(Term::constant(2.0 * eps), Term::variable(i))));
  }
  eqs.push_back(fold::add(fold::add(fold::square(g), fold::mul(Term::constant(eps), squared_norm(n))),
                          Term::constant(-delta * delta)));
  return SquareSystem::build(std::move(eqs), n, {}, std::move(abel));
}

bool certify_regular_level(const Term& fl, std::size_t n, double eps, double level, std::size_t box_budget) {
  const Term t = milnor_tube(fl, n, eps, std::sqrt(level));
  // h >= eps |x|^2, so the level set sits inside this cube
  const double r = 1.01 * std::sqrt(level / eps);
  std::vector<Box> stack{Box::cube(n, r)};
  std::size_t examined = 0;
  while (!stack.empty()) {
    Box b = std::move(stack.back());
    stack.pop_back();
    if (++examined > box_budget) return false;
    try {
      const auto [v, grad] = interval_value_and_gradient(t, b);
      if (!v.contains(0.0)) continue;
      if (std::any_of(grad.begin(), grad.begin() + static_cast<std::ptrdiff_t>(n),
                      [](const Interval& g) { return !g.contains(0.0); })) {
        continue;
      }
    } catch (const DomainError& e) {
      if (e.total()) continue;
    }
    if (b.max_width() < 1e-9) return false;
    auto [lo, hi] = subdivide(b);
    stack.push_back(std::move(hi));
    stack.push_back(std::move(lo));
  }
  return true;
}

namespace {

bool nested_on_samples(const Term& fl, std::size_t n, const MilnorSchedule& s, std::uint64_t seed) {
  if (s.stages.size() < 2) return true;
  double r = 0.0;
  for (auto [e, d] : s.stages) r = std::max(r, d / std::sqrt(e));
  std::vector<Term> tubes;
  for (auto [e, d] : s.stages) tubes.push_back(milnor_tube(fl, n, e, d));
  Rng rng(seed);
  std::vector<double> x(n);
  for (int k = 0; k < 10000; ++k) {
    for (auto& v : x) v = rng.uniform(-r, r);
    try {
      for (std::size_t i = 0; i + 1 < tubes.size(); ++i) {
        if (eval(tubes[i + 1], x) <= 0.0 && eval(tubes[i], x) > 0.0) return false;
      }
    } catch (const DomainError&) {
    }
  }
  return true;
}

MilnorSchedule default_schedule(double radius) {
  constexpr double kEps0 = 0.01, kDelta0 = 0.1;
  // the tube reaches |x| = delta / sqrt(eps); stretch it to the radius
  const double eps0 = std::min(kEps0, (kDelta0 / radius) * (kDelta0 / radius));
  return MilnorSchedule::geometric(eps0, kDelta0, 3);
}

StageReport run_stage(const Term& fl, std::size_t dim, double eps, double delta, std::uint64_t seed,
                      const ComponentOptions& opt) {
  StageReport st;
  st.eps = eps;
  Rng rng(seed);
  double d = delta;
  bool regular = certify_regular_level(fl, dim, eps, d * d);
  while (!regular && st.delta_resamples < 8) {
    ++st.delta_resamples;
    d = std::min(delta * (1.0 + rng.uniform(-0.1, 0.1)), std::nextafter(1.0, 0.0));
    regular = certify_regular_level(fl, dim, eps, d * d);
  }
  if (!regular) throw MorseError("component_bound: no certified regular level near delta");
  st.delta = d;

  const double cube = 1.01 * d / std::sqrt(eps);
  for (std::size_t a = 0; a < opt.max_rotations; ++a) {
    const Eigen::MatrixXd q = random_rotation(dim, Rng::derive(seed, a + 1));
    const SquareSystem sys = critical_system(fl, dim, eps, d, q);
    const CensusReport rep = count_nonsingular_zeros(sys, cube, opt.max_depth);
    if (rep.exact()) {
      st.critical_count = rep.certified_count;
      st.rotations = a + 1;
      st.rotation = q;
      return st;
    }
  }
  throw MorseError("component_bound: critical system not Morse-usable after " +
                   std::to_string(opt.max_rotations) + " rotations");
}

}  // namespace

ComponentReport component_bound(const QFFormula& f, std::size_t n, const AffineSubspace& l,
                                const ComponentOptions& opt) {
  if (n == 0) throw std::invalid_argument("component_bound: dimension must be positive");
  if (!(opt.radius > 0.0)) throw std::invalid_argument("component_bound: radius must be positive");
  AffineSubspace sub = l;
  if (sub.n == 0) sub.n = n;
  if (sub.n != n) throw std::invalid_argument("component_bound: affine subspace dimension mismatch");

  ComponentReport rep;
  rep.schedule = opt.schedule.stages.empty() ? default_schedule(opt.radius) : opt.schedule;
  rep.schedule.validate();

  const WilkieForm w = wilkie_reduce(f, n);
  const Term fl = affine_restrict(w.f, sub);
  rep.dimension = n + w.aux;

  rep.stages.resize(rep.schedule.stages.size());
  parallel_for(rep.stages.size(), opt.threads, [&](std::size_t i) {
    const auto [e, d] = rep.schedule.stages[i];
    rep.stages[i] = run_stage(fl, rep.dimension, e, d, Rng::derive(opt.seed, i), opt);
  });
  for (std::size_t i = 0; i < rep.stages.size(); ++i) {
    rep.schedule.stages[i].second = rep.stages[i].delta;
    rep.critical_count = std::max(rep.critical_count, rep.stages[i].critical_count);
  }
  rep.component_bound = (rep.critical_count + 1) / 2;
  // resampled deltas may break strict decrease; nesting is then only sampled
  rep.nested = nested_on_samples(fl, rep.dimension, rep.schedule, Rng::derive(opt.seed, 1000));

  if (opt.oracle) {
    const std::size_t res = opt.oracle_resolution ? opt.oracle_resolution : default_resolution(n);
    const GridSpec grid = GridSpec::uniform(Box::cube(n, opt.radius), res);
    rep.oracle_components = flood_components(formula_predicate(f, sub, opt.radius), grid, opt.threads);
  }
  return rep;
}

GammaReport gamma_estimate(const QFFormula& f, std::size_t n, const GammaOptions& opt) {
  if (opt.trials == 0) throw std::invalid_argument("gamma_estimate: need at least one trial");
  if (n == 0) throw std::invalid_argument("gamma_estimate: dimension must be positive");
  const std::size_t res = opt.oracle_resolution ? opt.oracle_resolution : default_resolution(n) / 2;
  const GridSpec grid = GridSpec::uniform(Box::cube(n, opt.radius), res);

  GammaReport rep;
  rep.trials.resize(opt.trials);
  parallel_for(opt.trials, opt.threads, [&](std::size_t t) {
    Rng rng(Rng::derive(opt.seed, t));
    AffineSubspace l;
    l.n = n;
    const int k = rng.uniform_int(0, static_cast<int>(n));
    for (int r = 0; r < k; ++r) {
      std::vector<double> row(n + 1);
      for (auto& v : row) v = rng.uniform(-1.0, 1.0);
      l.rows.push_back(std::move(row));
    }
    GammaTrial& tr = rep.trials[t];
    tr.rows = l.rows.size();
    tr.oracle = flood_components(formula_predicate(f, l, opt.radius), grid, 1);
    ComponentOptions co;
    co.radius = opt.radius;
    co.seed = rng.bits();
    co.max_depth = opt.max_depth;
    co.threads = 1;
    co.oracle = false;
    try {
      tr.bound = component_bound(f, n, l, co).component_bound;
    } catch (const MorseError&) {
      tr.bound.reset();
    }
  });
  for (const auto& tr : rep.trials) {
    rep.estimate = std::max(rep.estimate, tr.oracle);
    if (tr.bound) {
      rep.max_component_bound = std::max(rep.max_component_bound, *tr.bound);
      if (tr.oracle > *tr.bound) rep.bound_respected = false;
    } else {
      ++rep.uncertified_trials;
    }
  }
  return rep;
}

}  // namespace slogcert
