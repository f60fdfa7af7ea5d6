#include "slogcert/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>

#include <Eigen/Dense>

#include "slogcert/evaluate.hpp"
#include "slogcert/parallel.hpp"

namespace slogcert {

GridSpec GridSpec::uniform(Box box, std::size_t per_axis) {
  GridSpec g;
  g.resolution.assign(box.size(), per_axis);
  g.box = std::move(box);
  return g;
}

std::size_t GridSpec::cell_count() const {
  if (box.size() == 0 || resolution.size() != box.size()) {
    throw std::invalid_argument("grid: resolution must match the box dimension");
  }
  std::size_t total = 1;
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (resolution[i] < 2) throw std::invalid_argument("grid: resolution must be at least 2");
    if (!box[i].is_bounded()) throw std::invalid_argument("grid: box must be bounded");
    if (total > cap / resolution[i]) throw GridCapError("grid: cell cap exceeded");
    total *= resolution[i];
  }
  if (total > cap) throw GridCapError("grid: cell cap exceeded");
  return total;
}

// axis 0 varies fastest
Box GridSpec::cell(std::size_t linear) const {
  std::vector<Interval> c;
  c.reserve(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) {
    const std::size_t k = linear % resolution[i];
    linear /= resolution[i];
    const double lo = box[i].lo(), w = box[i].width() / static_cast<double>(resolution[i]);
    const double a = k == 0 ? lo : lo + w * static_cast<double>(k);
    const double b = k + 1 == resolution[i] ? box[i].hi() : lo + w * static_cast<double>(k + 1);
    c.emplace_back(a, b);
  }
  return Box(std::move(c));
}

std::vector<double> GridSpec::center(std::size_t linear) const {
  std::vector<double> c(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) {
    const std::size_t k = linear % resolution[i];
    linear /= resolution[i];
    const double w = box[i].width() / static_cast<double>(resolution[i]);
    c[i] = box[i].lo() + w * (static_cast<double>(k) + 0.5);
  }
  return c;
}

double GridSpec::diagonal() const {
  double s = 0.0;
  for (std::size_t i = 0; i < box.size(); ++i) {
    const double w = box[i].width() / static_cast<double>(resolution[i]);
    s += w * w;
  }
  return std::sqrt(s);
}

namespace {

// Evaluates `test` on every cell, parallel over slices of the slowest axis.
template <class Test>
std::vector<std::uint8_t> mark_cells(const GridSpec& grid, unsigned threads, Test&& test) {
  const std::size_t total = grid.cell_count();
  const std::size_t slices = grid.resolution.back();
  const std::size_t per_slice = total / slices;
  std::vector<std::uint8_t> mark(total, 0);
  parallel_for(slices, threads, [&](std::size_t s) {
    for (std::size_t k = s * per_slice; k < (s + 1) * per_slice; ++k) mark[k] = test(k) ? 1 : 0;
  });
  return mark;
}

// Neighbour offsets: the 2n face neighbours, or all 3^n - 1 cells that
// share at least a corner.
std::vector<std::vector<int>> neighbour_offsets(std::size_t n, bool corners) {
  std::vector<std::vector<int>> out;
  if (!corners) {
    for (std::size_t ax = 0; ax < n; ++ax) {
      for (int s : {-1, 1}) {
        std::vector<int> o(n, 0);
        o[ax] = s;
        out.push_back(std::move(o));
      }
    }
    return out;
  }
  std::vector<int> o(n, -1);
  while (true) {
    if (std::any_of(o.begin(), o.end(), [](int v) { return v != 0; })) out.push_back(o);
    std::size_t ax = 0;
    while (ax < n && o[ax] == 1) o[ax++] = -1;
    if (ax == n) break;
    ++o[ax];
  }
  return out;
}

std::vector<std::vector<std::size_t>> label(const std::vector<std::uint8_t>& mark, const GridSpec& grid,
                                            bool corners) {
  const std::size_t n = grid.box.size();
  std::vector<std::size_t> stride(n, 1);
  for (std::size_t i = 1; i < n; ++i) stride[i] = stride[i - 1] * grid.resolution[i - 1];
  const auto offsets = neighbour_offsets(n, corners);

  std::vector<std::uint8_t> seen(mark.size(), 0);
  std::vector<std::vector<std::size_t>> clusters;
  std::deque<std::size_t> queue;
  std::vector<std::size_t> coord(n);
  for (std::size_t start = 0; start < mark.size(); ++start) {
    if (!mark[start] || seen[start]) continue;
    std::vector<std::size_t> cluster;
    seen[start] = 1;
    queue.push_back(start);
    while (!queue.empty()) {
      const std::size_t c = queue.front();
      queue.pop_front();
      cluster.push_back(c);
      for (std::size_t ax = 0; ax < n; ++ax) coord[ax] = (c / stride[ax]) % grid.resolution[ax];
      for (const auto& o : offsets) {
        std::size_t nb = c;
        bool inside = true;
        for (std::size_t ax = 0; ax < n && inside; ++ax) {
          if (o[ax] < 0) {
            inside = coord[ax] > 0;
            nb -= stride[ax];
          } else if (o[ax] > 0) {
            inside = coord[ax] + 1 < grid.resolution[ax];
            nb += stride[ax];
          }
        }
        if (inside && mark[nb] && !seen[nb]) {
          seen[nb] = 1;
          queue.push_back(nb);
        }
      }
    }
    std::sort(cluster.begin(), cluster.end());
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

}  // namespace

std::vector<std::size_t> grid_zero_cells(const SquareSystem& system, const GridSpec& grid,
                                         unsigned threads) {
  if (grid.box.size() != system.dimension()) throw std::invalid_argument("grid: dimension mismatch");
  const auto mark = mark_cells(grid, threads, [&](std::size_t k) {
    try {
      for (const auto& v : system.interval_eval(grid.cell(k))) {
        if (!v.contains(0.0)) return false;
      }
      return true;
    } catch (const DomainError& e) {
      return !e.total();
    }
  });
  std::vector<std::size_t> cells;
  for (std::size_t k = 0; k < mark.size(); ++k) {
    if (mark[k]) cells.push_back(k);
  }
  return cells;
}

std::vector<std::vector<std::size_t>> cell_clusters(const std::vector<std::size_t>& cells,
                                                    const GridSpec& grid) {
  std::vector<std::uint8_t> mark(grid.cell_count(), 0);
  for (std::size_t c : cells) mark.at(c) = 1;
  return label(mark, grid, true);
}

std::size_t oracle_zero_count(const SquareSystem& system, const GridSpec& grid, unsigned threads) {
  return cell_clusters(grid_zero_cells(system, grid, threads), grid).size();
}

std::size_t flood_components(const CellPredicate& member, const GridSpec& grid, unsigned threads) {
  const double diag = grid.diagonal();
  const auto mark = mark_cells(grid, threads, [&](std::size_t k) {
    const auto c = grid.center(k);
    return member(c, diag);
  });
  return label(mark, grid, false).size();
}

CellPredicate formula_predicate(const QFFormula& f, const AffineSubspace& l, double ball_radius) {
  if (!l.rows.empty()) l.validate();
  return [f, l, ball_radius](std::span<const double> c, double diag) {
    const std::size_t n = c.size();
    double r2 = 0.0;
    for (double v : c) r2 += v * v;
    if (r2 > ball_radius * ball_radius) return false;
    const double tol = 4.0 * diag;
    for (const auto& conj : f.dnf) {
      // equalities of the conjunction and the affine rows, stacked
      std::vector<double> g;
      std::vector<std::vector<double>> jac;
      for (const auto& row : l.rows) {
        double lin = -row[l.n];
        for (std::size_t j = 0; j < l.n; ++j) lin += row[j] * c[j];
        g.push_back(lin);
        jac.emplace_back(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(l.n));
      }
      bool ok = true;
      for (const auto& a : conj) {
        try {
          if (a.rel == Rel::Gt) {
            ok = eval(a.term, c) > 0.0;
          } else {
            auto [v, grad] = value_and_gradient(a.term, c);
            g.push_back(v);
            jac.push_back(std::move(grad));
          }
        } catch (const DomainError&) {
          ok = false;
        }
        if (!ok) break;
      }
      if (!ok) continue;
      if (g.empty()) return true;
      // the common zero set is no closer than any single one: |F| <= tol |grad F|
      for (std::size_t r = 0; r < g.size() && ok; ++r) {
        double gn = 0.0;
        for (double d : jac[r]) gn += d * d;
        ok = std::abs(g[r]) <= tol * std::sqrt(gn);
      }
      if (!ok) continue;
      if (g.size() == 1) return true;
      // distance to the common zero set by one Gauss-Newton step
      Eigen::MatrixXd j(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(n));
      Eigen::VectorXd gv(static_cast<Eigen::Index>(g.size()));
      for (std::size_t r = 0; r < g.size(); ++r) {
        gv(static_cast<Eigen::Index>(r)) = g[r];
        for (std::size_t k = 0; k < n; ++k) {
          j(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = k < jac[r].size() ? jac[r][k] : 0.0;
        }
      }
      const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(j);
      const Eigen::VectorXd step = cod.solve(gv);
      const double residual = (gv - j * step).norm();
      if (step.norm() <= tol && residual <= tol * j.norm()) return true;
    }
    return false;
  };
}

std::size_t default_resolution(std::size_t n) {
  switch (n) {
    case 1:
      return 8192;
    case 2:
      return 1024;
    case 3:
      return 128;
    default:
      return 24;
  }
}

StabilityReport flood_stability(const CellPredicate& member, const Box& box, std::size_t per_axis,
                                unsigned threads) {
  StabilityReport r;
  r.coarse = flood_components(member, GridSpec::uniform(box, per_axis), threads);
  r.fine = flood_components(member, GridSpec::uniform(box, 2 * per_axis), threads);
  return r;
}

}  // namespace slogcert
