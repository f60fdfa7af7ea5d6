#include "slogcert/census.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "slogcert/analysis.hpp"
#include "slogcert/krawczyk.hpp"
#include "slogcert/random.hpp"

namespace slogcert {

namespace {

struct Certified {
  std::vector<Box> regions;  // each holds exactly this one zero
  Box k;                     // encloses it
};

bool lex_less(const Box& a, const Box& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].lo() != b[i].lo()) return a[i].lo() < b[i].lo();
    if (a[i].hi() != b[i].hi()) return a[i].hi() < b[i].hi();
  }
  return false;
}

class Census {
 public:
  Census(const SquareSystem& system, const Box& root, int max_depth, const CensusOptions& opt)
      : sys_(system), root_(root), max_depth_(max_depth), opt_(opt) {}

  CensusReport run() {
    std::vector<std::pair<Box, int>> stack{{root_, 0}};
    while (!stack.empty()) {
      auto [x, depth] = std::move(stack.back());
      stack.pop_back();
      if (rep_.boxes_examined >= opt_.box_budget) {
        rep_.unknown_boxes.push_back(std::move(x));
        continue;
      }
      ++rep_.boxes_examined;
      rep_.depth_used = std::max(rep_.depth_used, depth);
      if (covered(x)) continue;

      const KrawczykResult kr = krawczyk_test(sys_, x);
      if (kr.verdict == Verdict::NoZero) continue;
      if (kr.verdict == Verdict::UniqueZero) {
        record(x, *kr.box);
        continue;
      }
      if (depth >= max_depth_ || !(x.max_width() > 0.0)) {
        rep_.unknown_boxes.push_back(std::move(x));
        continue;
      }
      try_newton(x);
      if (covered(x)) continue;

      // every zero of x lies in K(x), so a real contraction can replace x
      if (kr.box && kr.box->max_width() > 0.0 && kr.box->max_width() < 0.5 * x.max_width()) {
        stack.emplace_back(*kr.box, depth + 1);
        continue;
      }
      auto [left, right] = subdivide(x);
      stack.emplace_back(std::move(right), depth + 1);
      stack.emplace_back(std::move(left), depth + 1);
    }

    for (const auto& c : found_) rep_.zero_boxes.push_back(c.k);
    std::sort(rep_.zero_boxes.begin(), rep_.zero_boxes.end(), lex_less);
    std::sort(rep_.unknown_boxes.begin(), rep_.unknown_boxes.end(), lex_less);
    rep_.certified_count = rep_.zero_boxes.size();
    return std::move(rep_);
  }

 private:
  bool covered(const Box& x) const {
    for (const auto& c : found_) {
      for (const auto& r : c.regions) {
        if (r.contains(x)) return true;
      }
    }
    return false;
  }

  // Shrinks a uniqueness box by re-applying the operator.
  Box tighten(Box k) const {
    for (int it = 0; it < 4; ++it) {
      if (!(k.max_width() > 0.0)) break;
      const KrawczykResult r = krawczyk_test(sys_, k);
      if (r.verdict != Verdict::UniqueZero) break;
      k = *r.box;
    }
    return k;
  }

  void record(const Box& region, const Box& k0) {
    const Box k = tighten(k0);
    if (!root_.contains(k)) {
      // outside the search region, or too close to its boundary to tell
      if (root_.intersects(k)) rep_.unknown_boxes.push_back(region);
      return;
    }
    for (const auto& c : found_) {
      bool same = region.contains(c.k);
      bool apart = !region.intersects(c.k);
      for (const auto& r : c.regions) {
        same = same || r.contains(k);
        apart = apart || !r.intersects(k);
      }
      if (same) return;
      if (!apart) {
        rep_.unknown_boxes.push_back(region);
        return;
      }
    }
    found_.push_back({{region}, k});
    inflate(found_.back());
  }

  // Grows the uniqueness region around the zero so that boxes straddling
  // it do not get split down to the depth limit.
  void inflate(Certified& c) const {
    const std::vector<double> z = c.k.mid();
    double rho = 0.5 * c.regions.front().max_width();
    for (int it = 0; it < 12; ++it) {
      rho *= 2.0;
      std::vector<Interval> b;
      b.reserve(z.size());
      for (double v : z) b.emplace_back(v - rho, v + rho);
      Box big(std::move(b));
      if (!big.contains(c.k)) continue;
      if (krawczyk_test(sys_, big).verdict != Verdict::UniqueZero) break;
      c.regions.push_back(std::move(big));
    }
  }

  // Newton from the midpoint; a converged point inside x gets a small
  // verification box of its own.
  void try_newton(const Box& x) {
    const std::size_t n = sys_.dimension();
    std::vector<double> p = x.mid();
    bool converged = false;
    try {
      for (int it = 0; it < 16; ++it) {
        const std::vector<double> f = sys_.eval(p);
        const Eigen::MatrixXd j = sys_.jacobian(p);
        Eigen::VectorXd fv(n);
        for (std::size_t i = 0; i < n; ++i) fv(static_cast<Eigen::Index>(i)) = f[i];
        Eigen::FullPivLU<Eigen::MatrixXd> lu(j);
        if (!lu.isInvertible()) return;
        const Eigen::VectorXd dx = lu.solve(fv);
        if (!dx.allFinite()) return;
        double step = 0.0, scale = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
          p[i] -= dx(static_cast<Eigen::Index>(i));
          step = std::max(step, std::abs(dx(static_cast<Eigen::Index>(i))));
          scale = std::max(scale, std::abs(p[i]));
        }
        if (step <= 1e-13 * scale) {
          converged = true;
          break;
        }
      }
    } catch (const DomainError&) {
      return;
    }
    if (!converged) return;
    // a zero just outside x still blocks x's pruning, so take it as well
    std::vector<Interval> grown;
    for (const auto& c : x) grown.emplace_back(c.lo() - c.width(), c.hi() + c.width());
    if (!Box(std::move(grown)).contains(p)) return;

    double scale = 1.0;
    for (double v : p) scale = std::max(scale, std::abs(v));
    const double w = x.max_width();
    for (double rho : {w / 4.0, w / 64.0, 1e-6 * scale, 1e-10 * scale}) {
      if (!(rho > 0.0)) continue;
      std::vector<Interval> c;
      c.reserve(n);
      for (double v : p) c.emplace_back(v - rho, v + rho);
      const Box b(std::move(c));
      const KrawczykResult kr = krawczyk_test(sys_, b);
      if (kr.verdict == Verdict::UniqueZero) {
        record(b, *kr.box);
        return;
      }
    }
  }

  const SquareSystem& sys_;
  Box root_;
  int max_depth_;
  CensusOptions opt_;
  CensusReport rep_;
  std::vector<Certified> found_;
};

}  // namespace

CensusReport count_in_box(const SquareSystem& system, const Box& box, int max_depth,
                          const CensusOptions& options) {
  if (box.size() != system.dimension()) throw std::invalid_argument("census: box dimension mismatch");
  return Census(system, box, max_depth, options).run();
}

CensusReport count_nonsingular_zeros(const SquareSystem& system, double radius, int max_depth,
                                     const CensusOptions& options) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("census: radius must be positive");
  }
  if (max_depth < 0) throw std::invalid_argument("census: negative depth");
  CensusReport rep = count_in_box(system, Box::cube(system.dimension(), radius), max_depth, options);
  rep.search_radius = radius;
  return rep;
}

// ------------------------------------------------------- search radius

double growth_threshold(const AbelFunction& phi, std::size_t k, int s) {
  const double kk = static_cast<double>(k);
  auto holds = [&](double z) { return kk * std::abs(phi(z) + 2.0 * s) < z / 2.0; };
  // analytic tail: 0 <= phi(z) <= log z + 1 for z >= 1, and
  // z/2 - k (log z + 1 + 2s) increases for z > 2k
  double z1 = std::max(2.0 * kk, 1.0);
  while (!(kk * (std::log(z1) + 1.0 + 2.0 * s) < z1 / 2.0)) z1 *= 2.0;

  constexpr std::size_t grid = 20000;
  double z0 = z1;
  for (std::size_t i = grid; i-- > 0;) {
    const double z = z1 * static_cast<double>(i) / static_cast<double>(grid);
    if (!holds(z)) break;
    z0 = z;
  }
  return z0;
}

SearchRadius search_radius(const SquareSystem& system, double fallback) {
  SearchRadius r;
  if (!system.has_phi()) {
    r.radius = fallback;
    r.heuristic = true;
    return r;
  }
  const AbelFunction& phi = system.abel();
  for (const auto& m : system.phi_registry()) r.s = std::max(r.s, growth_exponent(m.child(0), phi));
  for (const auto& m : system.dphi_registry()) r.s = std::max(r.s, growth_exponent(m.child(0), phi));
  const std::size_t k = system.phi_registry().size();
  const std::size_t u = system.dphi_registry().size();
  const double n = static_cast<double>(system.dimension());
  r.d_iii = k > 0 ? growth_threshold(phi, k, r.s) : 0.0;
  r.d_iv = 2.0 * (2.0 * n + 2.0 + static_cast<double>(u) * phi.sup_dphi());
  r.radius = std::max(r.d_iii, r.d_iv);
  return r;
}

// ------------------------------------------------------------ sampling

RegularValue sample_regular_value(const SquareSystem& system, const Box& box, std::uint64_t seed,
                                  std::size_t budget, double scale, int max_depth) {
  if (budget == 0) throw std::runtime_error("sample_regular_value: attempt budget is zero");
  Rng rng(seed);
  const std::size_t n = system.dimension();
  for (std::size_t attempt = 1; attempt <= budget; ++attempt) {
    std::vector<double> eta(n, 0.0);
    if (attempt > 1) {
      for (auto& v : eta) v = rng.uniform(-scale, scale);
    }
    CensusReport rep = count_in_box(system.with_target(eta), box, max_depth);
    if (rep.exact()) return {std::move(eta), attempt, std::move(rep)};
  }
  throw std::runtime_error("sample_regular_value: attempt budget exhausted");
}

Eigen::MatrixXd sample_generic_tilt(std::size_t n, double scale, std::uint64_t seed) {
  if (!(scale > 0.0 && scale < 1.0)) throw std::invalid_argument("sample_generic_tilt: need 0 < scale < 1");
  Rng rng(seed);
  for (int attempt = 0; attempt < 100; ++attempt) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += scale * rng.uniform(-1.0, 1.0);
      }
    }
    if (std::abs(a.determinant()) > 1e-6) return a;
  }
  throw std::runtime_error("sample_generic_tilt: no invertible sample in 100 draws");
}

}  // namespace slogcert
