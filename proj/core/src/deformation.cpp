#include "slogcert/deformation.hpp"

#include <algorithm>
#include <cmath>

namespace slogcert {

namespace {

constexpr double kDetFloor = 1e-6;

std::vector<double> padded(std::vector<double> v, std::size_t len) {
  if (v.size() > len) throw PathError("deformation: parameter vector too long");
  v.resize(len, 0.0);
  return v;
}

std::vector<double> lerp(const std::vector<double>& a, const std::vector<double>& b, double s) {
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = (1.0 - s) * a[i] + s * b[i];
  return r;
}

}  // namespace

DeformationPath::DeformationPath(std::vector<PathPoint> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw PathError("deformation: need at least two breakpoints");
  if (points_.front().t != 0.0 || points_.back().t != 1.0) {
    throw PathError("deformation: breakpoints must span [0, 1]");
  }
  n_ = static_cast<std::size_t>(points_.front().tilt.rows());
  if (n_ == 0) throw PathError("deformation: empty tilt");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    auto& p = points_[i];
    if (i > 0 && !(p.t > points_[i - 1].t)) throw PathError("deformation: breakpoints must increase");
    if (static_cast<std::size_t>(p.tilt.rows()) != n_ || static_cast<std::size_t>(p.tilt.cols()) != n_) {
      throw PathError("deformation: tilt has wrong shape");
    }
    if (!(std::abs(p.tilt.determinant()) > kDetFloor)) {
      throw PathError("deformation: singular tilt at a breakpoint");
    }
    if (p.target.empty()) p.target.assign(n_, 0.0);
    if (p.target.size() != n_) throw PathError("deformation: target has wrong length");
    p.params.l = padded(p.params.l, n_ + 1);
    p.params.eps = padded(p.params.eps, n_);
  }
}

DeformationPath DeformationPath::constant(std::size_t n, const SystemParams& params) {
  const auto id = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  return DeformationPath({{0.0, id, std::vector<double>(n, 0.0), params},
                          {1.0, id, std::vector<double>(n, 0.0), params}});
}

PathPoint DeformationPath::at(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw PathError("deformation: t outside [0, 1]");
  std::size_t k = 1;
  while (k + 1 < points_.size() && points_[k].t < t) ++k;
  const PathPoint& a = points_[k - 1];
  const PathPoint& b = points_[k];
  const double s = (t - a.t) / (b.t - a.t);
  PathPoint r;
  r.t = t;
  r.tilt = (1.0 - s) * a.tilt + s * b.tilt;
  r.target = lerp(a.target, b.target, s);
  r.params.l = lerp(a.params.l, b.params.l, s);
  r.params.eps = lerp(a.params.eps, b.params.eps, s);
  r.params.delta = (1.0 - s) * a.params.delta + s * b.params.delta;
  return r;
}

TrackReport track_path(const SquareSystem& system, const DeformationPath& path, std::size_t steps,
                       double radius, int max_depth) {
  if (steps < 2) throw PathError("track_path: need at least 2 steps");
  if (path.dimension() != system.dimension()) throw PathError("track_path: dimension mismatch");
  TrackReport rep;
  rep.steps.reserve(steps + 1);
  for (std::size_t j = 0; j <= steps; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(steps);
    PathPoint p = path.at(t);
    if (!(std::abs(p.tilt.determinant()) > kDetFloor)) {
      throw PathError("track_path: tilt singular at t = " + std::to_string(t));
    }
    const SquareSystem s = system.with_params(p.params).with_tilt(p.tilt).with_target(p.target);
    TrackStep step{t, count_nonsingular_zeros(s, radius, max_depth)};
    if (!rep.first_irregular && !step.census.exact()) rep.first_irregular = j;
    if (!rep.first_change && j > 0 &&
        step.census.certified_count != rep.steps.back().census.certified_count) {
      rep.first_change = j;
    }
    rep.steps.push_back(std::move(step));
  }
  rep.constant = !rep.first_irregular && !rep.first_change;
  return rep;
}

ProbeReport probe_boundedness(const SquareSystem& system, const Eigen::MatrixXd& tilt,
                              const std::vector<double>& target, const std::vector<double>& radii,
                              int max_depth) {
  if (radii.empty()) throw std::invalid_argument("probe_boundedness: empty radius schedule");
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] > radii[i - 1])) throw std::invalid_argument("probe_boundedness: radii must increase");
  }
  const SquareSystem s = system.with_tilt(tilt).with_target(target);
  ProbeReport rep;
  rep.radii = radii;
  for (double r : radii) rep.census.push_back(count_nonsingular_zeros(s, r, max_depth));

  if (rep.census.size() < 2) {
    rep.stable = rep.census.back().exact();
    return rep;
  }
  const CensusReport& a = rep.census[rep.census.size() - 2];
  const CensusReport& b = rep.census.back();
  bool same = a.exact() && b.exact() && a.certified_count == b.certified_count;
  for (const Box& zb : b.zero_boxes) {
    if (!same) break;
    const auto m = zb.mid();
    same = std::any_of(a.zero_boxes.begin(), a.zero_boxes.end(), [&](const Box& za) {
      const auto ma = za.mid();
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (std::abs(m[i] - ma[i]) > 1e-6 * (1.0 + std::abs(m[i]))) return false;
      }
      return true;
    });
  }
  rep.stable = same;
  return rep;
}

}  // namespace slogcert
