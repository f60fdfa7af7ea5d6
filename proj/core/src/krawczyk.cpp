#include "slogcert/krawczyk.hpp"

#include <cmath>
#include <stdexcept>

namespace slogcert {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::UniqueZero:
      return "unique";
    case Verdict::NoZero:
      return "none";
    case Verdict::Unknown:
      return "unknown";
  }
  return "unknown";
}

KrawczykResult krawczyk_test(const SquareSystem& system, const Box& box) {
  const std::size_t n = system.dimension();
  if (box.size() != n) throw std::invalid_argument("krawczyk_test: box dimension mismatch");

  std::vector<Interval> fx;
  std::vector<Interval> jx;
  try {
    system.interval_eval_jacobian(box, fx, jx);
  } catch (const DomainError& e) {
    return {e.total() ? Verdict::NoZero : Verdict::Unknown, std::nullopt};
  }
  for (const auto& f : fx) {
    if (!f.contains(0.0)) return {Verdict::NoZero, std::nullopt};
  }
  for (const auto& j : jx) {
    if (!j.is_bounded()) return {Verdict::Unknown, std::nullopt};
  }

  const std::vector<double> m = box.mid();
  std::vector<Interval> fm;
  try {
    fm = system.interval_eval(Box::point(m));
  } catch (const DomainError&) {
    return {Verdict::Unknown, std::nullopt};
  }

  Eigen::MatrixXd jc(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      jc(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = jx[i * n + k].mid();
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(jc);
  if (!lu.isInvertible() || lu.rcond() < 1e-14) return {Verdict::Unknown, std::nullopt};
  const Eigen::MatrixXd y = lu.inverse();
  if (!y.allFinite()) return {Verdict::Unknown, std::nullopt};

  std::vector<Interval> k(n);
  for (std::size_t i = 0; i < n; ++i) {
    Interval acc(m[i]);
    for (std::size_t j = 0; j < n; ++j) {
      const Interval yij(y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      acc = acc - yij * fm[j];
    }
    for (std::size_t c = 0; c < n; ++c) {
      // (I - Y J)_{ic}
      Interval mij(i == c ? 1.0 : 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        const Interval yij(y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        mij = mij - yij * jx[j * n + c];
      }
      acc = acc + mij * (box[c] - Interval(m[c]));
    }
    if (!acc.is_bounded()) return {Verdict::Unknown, std::nullopt};
    k[i] = acc;
  }

  const Box kb(std::move(k));
  auto inter = intersect(kb, box);
  if (!inter) return {Verdict::NoZero, std::nullopt};
  if (box.interior_contains(kb)) return {Verdict::UniqueZero, kb};
  if (*inter == box) return {Verdict::Unknown, std::nullopt};
  return {Verdict::Unknown, *inter};
}

}  // namespace slogcert
