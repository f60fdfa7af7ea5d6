#include "slogcert/abel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

namespace slogcert {

namespace {

constexpr double kE = std::numbers::e;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kTablePieces = 512;
// first double above the true e (std::numbers::e rounds down)
const double kEUp = std::nextafter(kE, kInf);
const double kL = kE - 1.0;

constexpr int kJetSize = AbelFunction::kMaxOrder + 1;
template <class T>
using JetT = std::array<T, kJetSize>;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Stirling numbers of the second kind S(m, j).
double stirling2(int m, int j) {
  std::vector<std::vector<double>> s(m + 1, std::vector<double>(m + 1, 0.0));
  s[0][0] = 1.0;
  for (int a = 1; a <= m; ++a) {
    for (int b = 1; b <= a; ++b) s[a][b] = b * s[a - 1][b] + s[a - 1][b - 1];
  }
  return j <= m ? s[m][j] : 0.0;
}

std::vector<double> poly_derivative(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(static_cast<double>(i) * c[i]);
  if (d.empty()) d.push_back(0.0);
  return d;
}

template <class T>
T horner(const std::vector<double>& c, const T& t) {
  T acc(0.0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + T(*it);
  return acc;
}

// --------------------------------------------------------------- jets

template <class T>
JetT<T> jet_zero() {
  JetT<T> j;
  j.fill(T(0.0));
  return j;
}

template <class T>
JetT<T> jet_mul(const JetT<T>& a, const JetT<T>& b, int m) {
  JetT<T> r = jet_zero<T>();
  for (int k = 0; k <= m; ++k) {
    T acc(0.0);
    for (int i = 0; i <= k; ++i) acc = acc + a[i] * b[k - i];
    r[k] = acc;
  }
  return r;
}

double jet_div(double a, double b) { return a / b; }
Interval jet_div(const Interval& a, const Interval& b) { return a / b; }

template <class T>
JetT<T> jet_exp(const JetT<T>& u, int m, const T& y0) {
  JetT<T> y = jet_zero<T>();
  y[0] = y0;
  for (int k = 1; k <= m; ++k) {
    T acc(0.0);
    for (int j = 1; j <= k; ++j) acc = acc + T(static_cast<double>(j)) * u[j] * y[k - j];
    y[k] = jet_div(acc, T(static_cast<double>(k)));
  }
  return y;
}

template <class T>
JetT<T> jet_log(const JetT<T>& u, int m, const T& y0) {
  JetT<T> y = jet_zero<T>();
  y[0] = y0;
  for (int k = 1; k <= m; ++k) {
    T acc(0.0);
    for (int j = 1; j < k; ++j) acc = acc + T(static_cast<double>(j)) * y[j] * u[k - j];
    y[k] = jet_div(u[k] - jet_div(acc, T(static_cast<double>(k))), u[0]);
  }
  return y;
}

// Taylor coefficients of f(g(x)) from those of f at g(x) and of g at x.
template <class T>
JetT<T> jet_compose(const JetT<T>& f, const JetT<T>& g, int m) {
  JetT<T> gt = g;
  gt[0] = T(0.0);
  JetT<T> r = jet_zero<T>();
  r[0] = f[m];
  for (int j = m - 1; j >= 0; --j) {
    r = jet_mul(r, gt, m);
    r[0] = r[0] + f[j];
  }
  return r;
}

}  // namespace

// ------------------------------------------------------------ building

AbelFunction AbelFunction::build(int order, double tol) {
  if (order < 1 || order > 3) throw std::invalid_argument("build_abel: order must be 1, 2 or 3");
  if (!(tol > 0.0) || !std::isfinite(tol)) throw std::invalid_argument("build_abel: tol must be > 0");

  using Mat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  const int k = order;
  const int n = 2 * k + 2;
  const long double L = std::numbers::e_v<long double> - 1.0L;
  const long double e = std::numbers::e_v<long double>;

  // d_j(i): contribution of c_i to s^{(j)} at u = L
  auto dj = [&](int j, int i) -> long double {
    if (i < j) return 0.0L;
    long double f = 1.0L;
    for (int t = i - j + 1; t <= i; ++t) f *= t;
    return f * std::pow(L, static_cast<long double>(i - j));
  };
  // junction row for order m: sum_j S(m,j) e^j s^{(j)}(e) - s^{(m)}(1)
  auto junction_row = [&](int m) {
    Vec r = Vec::Zero(n);
    for (int i = 0; i < n; ++i) {
      long double acc = 0.0L;
      for (int j = 1; j <= m; ++j) {
        acc += static_cast<long double>(stirling2(m, j)) * std::pow(e, static_cast<long double>(j)) *
               dj(j, i);
      }
      if (i == m) acc -= static_cast<long double>(factorial(m));
      r(i) = acc;
    }
    return r;
  };

  const int nc = 2 + k;
  Mat A = Mat::Zero(nc, n);
  Vec b = Vec::Zero(nc);
  A(0, 0) = 1.0L;
  for (int i = 0; i < n; ++i) A(1, i) = std::pow(L, static_cast<long double>(i));
  b(1) = 1.0L;
  for (int m = 1; m <= k; ++m) A.row(1 + m) = junction_row(m).transpose();

  // objective: w * (jump of order k+1)^2 + integral of (s'')^2 over [0, L]
  constexpr long double w = 1e8L;
  Mat H = Mat::Zero(n, n);
  for (int i = 2; i < n; ++i) {
    for (int j = 2; j < n; ++j) {
      const int p = i + j - 3;
      H(i, j) = static_cast<long double>(i * (i - 1) * j * (j - 1)) *
                std::pow(L, static_cast<long double>(p)) / p;
    }
  }
  const Vec jr = junction_row(k + 1);
  H += w * jr * jr.transpose();

  Mat K = Mat::Zero(n + nc, n + nc);
  K.topLeftCorner(n, n) = 2.0L * H;
  K.topRightCorner(n, nc) = A.transpose();
  K.bottomLeftCorner(nc, n) = A;
  Vec rhs = Vec::Zero(n + nc);
  rhs.tail(nc) = b;
  // the penalty row dwarfs the rest; the default rank threshold would drop it
  Eigen::FullPivLU<Mat> lu(K);
  lu.setThreshold(0.0L);
  Vec sol = lu.solve(rhs);
  for (int it = 0; it < 3; ++it) sol += lu.solve(rhs - K * sol);

  std::vector<double> coef(n);
  for (int i = 0; i < n; ++i) coef[i] = static_cast<double>(sol(i));
  coef[0] = 0.0;

  AbelFunction phi;
  phi.order_ = order;
  phi.coef_ = std::move(coef);
  phi.seed_error_ = -1.0;
  phi.finalize();

  if (!phi.monotone_) {
    throw AbelBuildError("build_abel: seed is not increasing on [1, e]", kInf);
  }
  const double residual = abel_residual(phi);
  if (residual > tol) {
    throw AbelBuildError("build_abel: residual " + std::to_string(residual) + " exceeds tol",
                         residual);
  }
  if (phi.seed_error_ > tol) {
    throw AbelBuildError("build_abel: seed error exceeds tol", phi.seed_error_);
  }
  return phi;
}

AbelFunction AbelFunction::from_coefficients(int order, std::vector<double> coefficients,
                                             double seed_error) {
  if (order < 1 || order > 3) throw std::invalid_argument("AbelFunction: order must be 1, 2 or 3");
  if (coefficients.size() < 2) throw std::invalid_argument("AbelFunction: too few coefficients");
  for (double c : coefficients) {
    if (!std::isfinite(c)) throw std::invalid_argument("AbelFunction: non-finite coefficient");
  }
  AbelFunction phi;
  phi.order_ = order;
  phi.coef_ = std::move(coefficients);
  phi.seed_error_ = seed_error;
  phi.finalize();
  return phi;
}

void AbelFunction::finalize() {
  seed_derivs_.clear();
  seed_derivs_.push_back(coef_);
  for (int j = 1; j <= kMaxOrder + 1; ++j) seed_derivs_.push_back(poly_derivative(seed_derivs_.back()));

  // junction defect, evaluated in long double
  auto sd = [&](int j, long double u) {
    long double acc = 0.0L;
    const auto& c = seed_derivs_[j];
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + *it;
    return acc;
  };
  const long double L = std::numbers::e_v<long double> - 1.0L;
  const long double e = std::numbers::e_v<long double>;
  long double defect = std::max(std::abs(sd(0, 0.0L)), std::abs(sd(0, L) - 1.0L));
  for (int m = 1; m <= order_; ++m) {
    long double lhs = 0.0L;
    for (int j = 1; j <= m; ++j) {
      lhs += static_cast<long double>(stirling2(m, j)) * std::pow(e, static_cast<long double>(j)) *
             sd(j, L);
    }
    defect = std::max(defect, std::abs(lhs - sd(m, 0.0L)));
  }
  junction_defect_ = static_cast<double>(defect);

  table_.assign(kMaxOrder + 1, {});
  const double h = kL / static_cast<double>(kTablePieces);
  for (int j = 0; j <= kMaxOrder; ++j) {
    table_[j].reserve(kTablePieces);
    for (std::size_t p = 0; p < kTablePieces; ++p) {
      const double a = h * static_cast<double>(p);
      const double b = p + 1 == kTablePieces ? kEUp - 1.0 : h * static_cast<double>(p + 1);
      const Interval u(std::max(0.0, std::nextafter(a, -kInf)), std::nextafter(b, kInf));
      table_[j].push_back(horner(seed_derivs_[j], u));
    }
  }
  sup_dphi_ = 0.0;
  monotone_ = true;
  for (const auto& r : table_[1]) {
    sup_dphi_ = std::max(sup_dphi_, r.mag());
    if (!(r.lo() > 0.0)) monotone_ = false;
  }

  if (seed_error_ < 0.0) {
    double abs_sum = 0.0;
    for (std::size_t i = 0; i < coef_.size(); ++i) {
      abs_sum += std::abs(coef_[i]) * std::pow(kL, static_cast<double>(i));
    }
    // Horner rounding, argument rounding through the log/exp chain and the
    // final integer shift
    const double rounding = 4.0 * static_cast<double>(coef_.size()) * kEps * abs_sum +
                            16.0 * kEps * kE * sup_dphi_ + 8.0 * kEps * 8.0;
    seed_error_ = junction_defect_ + rounding;
  }
}

double AbelFunction::sup_dphi() const noexcept { return kE * sup_dphi_; }

double AbelFunction::seed(double u, int m) const {
  if (m < 0 || m > kMaxOrder + 1) throw std::invalid_argument("seed: derivative order out of range");
  return horner(seed_derivs_[m], u);
}

// ---------------------------------------------------------- evaluation

double AbelFunction::value(double x) const {
  if (!std::isfinite(x)) throw DomainError("phi: non-finite argument", true);
  int shift = 0;
  for (int it = 0; it <= kRecursionCap; ++it) {
    if (x > kE) {
      x = std::log(x);
      ++shift;
    } else if (x < 1.0) {
      const double ex = std::exp(x);
      if (ex >= 1.0) return horner(coef_, std::expm1(x)) + static_cast<double>(shift - 1);
      x = ex;
      --shift;
    } else {
      return horner(coef_, x - 1.0) + static_cast<double>(shift);
    }
  }
  throw std::runtime_error("phi: recursion cap exceeded");
}

double AbelFunction::derivative(double x) const { return derivative(x, 1); }

double AbelFunction::derivative(double x, int m) const {
  if (m < 0 || m > kMaxOrder) throw std::invalid_argument("phi: derivative order out of range");
  if (m == 0) return value(x);
  if (!std::isfinite(x)) throw DomainError("phi: non-finite argument", true);

  // jet of the reduced argument u = g(x) - 1 as a function of x
  JetT<double> g = jet_zero<double>();
  g[0] = x;
  g[1] = 1.0;
  double u0 = 0.0;
  bool done = false;
  for (int it = 0; it <= kRecursionCap && !done; ++it) {
    if (g[0] > kE) {
      g = jet_log(g, m, std::log(g[0]));
    } else if (g[0] < 1.0) {
      const double x0 = g[0];
      g = jet_exp(g, m, std::exp(x0));
      if (g[0] >= 1.0) {
        u0 = std::expm1(x0);
        done = true;
      }
    } else {
      u0 = g[0] - 1.0;
      done = true;
    }
  }
  if (!done) throw std::runtime_error("phi: recursion cap exceeded");

  JetT<double> s = jet_zero<double>();
  for (int j = 0; j <= m; ++j) s[j] = horner(seed_derivs_[j], u0) / factorial(j);
  const JetT<double> r = jet_compose(s, g, m);
  return r[m] * factorial(m);
}

// ------------------------------------------------------------ enclosure

AbelFunction::Jet AbelFunction::seed_jet(const Interval& u, int m) const {
  Jet out;
  out.fill(Interval(0.0));
  const double h = kL / static_cast<double>(kTablePieces);
  const bool tabulated = u.lo() >= 0.0 && u.hi() <= kEUp - 1.0;
  std::size_t p0 = 0, p1 = 0;
  if (tabulated) {
    p0 = std::min(kTablePieces - 1, static_cast<std::size_t>(std::max(0.0, u.lo() / h - 1e-9)));
    p1 = std::min(kTablePieces - 1, static_cast<std::size_t>(u.hi() / h + 1e-9));
  }
  for (int j = 0; j <= m; ++j) {
    Interval direct = horner(seed_derivs_[j], u);
    if (tabulated) {
      Interval hull_t = table_[j][p0];
      for (std::size_t p = p0 + 1; p <= p1; ++p) hull_t = hull(hull_t, table_[j][p]);
      if (auto both = intersect(direct, hull_t)) direct = *both;
    }
    out[j] = direct / Interval(factorial(j));
  }
  return out;
}

AbelFunction::Jet AbelFunction::phi_jet(const Interval& x, int m, int depth) const {
  if (depth > kRecursionCap) throw std::runtime_error("phi: recursion cap exceeded");
  std::optional<Jet> acc;
  auto merge = [&](const Jet& j) {
    if (!acc) {
      acc = j;
      return;
    }
    for (int k = 0; k <= m; ++k) (*acc)[k] = hull((*acc)[k], j[k]);
  };

  if (x.hi() == kInf) {
    Jet j;
    j.fill(Interval::entire());
    const Interval v = enclose(Interval(std::max(x.lo(), -std::numeric_limits<double>::max()), kInf));
    j[0] = v;
    if (m >= 1) j[1] = Interval(0.0, sup_dphi());
    merge(j);
    return *acc;
  }

  // The three branches overlap only at single points whose value the seed
  // already covers; keeping the side branches strict stops them from
  // bouncing 1 <-> e forever under outward rounding.
  // left of the fundamental domain: phi(x) = phi(exp x) - 1
  if (x.lo() < 1.0) {
    const Interval p(x.lo(), std::min(x.hi(), 1.0));
    JetT<Interval> g = jet_zero<Interval>();
    g[0] = p;
    g[1] = Interval(1.0);
    const Interval ex = exp(p);
    const Interval image(ex.lo(), std::min(ex.hi(), kEUp));
    g = jet_exp(g, m, ex);
    g[0] = image;
    Jet inner = phi_jet(image, m, depth + 1);
    Jet r = jet_compose(inner, g, m);
    r[0] = r[0] - Interval(1.0);
    merge(r);
  }
  // fundamental domain
  if (x.hi() >= 1.0 && x.lo() <= kEUp) {
    const Interval p(std::max(x.lo(), 1.0), std::min(x.hi(), kEUp));
    merge(seed_jet(p - Interval(1.0), m));
  }
  // right of it: phi(x) = phi(log x) + 1
  if (x.hi() > kE) {
    const Interval p(std::max(x.lo(), kE), x.hi());
    JetT<Interval> g = jet_zero<Interval>();
    g[0] = p;
    g[1] = Interval(1.0);
    const Interval lg = log(p);
    const Interval image(std::max(lg.lo(), 1.0), std::max(lg.hi(), 1.0));
    g = jet_log(g, m, lg);
    g[0] = image;
    Jet inner = phi_jet(image, m, depth + 1);
    Jet r = jet_compose(inner, g, m);
    r[0] = r[0] + Interval(1.0);
    merge(r);
  }
  return *acc;
}

Interval AbelFunction::enclose(const Interval& x) const {
  const double err = seed_error_;
  if (monotone_) {
    const double lo = x.lo() == -kInf ? -2.0 : value(x.lo());
    const double hi = x.hi() == kInf ? kInf : value(x.hi());
    return Interval(std::nextafter(std::max(-2.0, lo - err), -kInf),
                    hi == kInf ? kInf : std::nextafter(hi + err, kInf));
  }
  if (x.hi() == kInf) return Interval(-kInf, kInf);
  const Jet j = phi_jet(x, 0, 0);
  return j[0] + Interval(-err, err);
}

Interval AbelFunction::enclose_derivative(const Interval& x, int m) const {
  if (m < 0 || m > kMaxOrder) throw std::invalid_argument("phi: derivative order out of range");
  if (m == 0) return enclose(x);
  const Jet j = phi_jet(x, m, 0);
  Interval r = j[m] * Interval(factorial(m));
  if (m == 1 && monotone_) {
    if (auto c = intersect(r, Interval(0.0, kInf))) r = *c;
  }
  return r;
}

// ------------------------------------------------------------ inverse

double AbelFunction::trans_exp(double y) const {
  if (!std::isfinite(y)) throw DomainError("trans_exp: non-finite argument", true);
  if (y <= -2.0) throw DomainError("trans_exp: argument must exceed -2", true);
  const double n = std::floor(y);
  const double f = y - n;
  double lo = 0.0, hi = kL;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (horner(coef_, mid) < f) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double u = std::abs(horner(coef_, lo) - f) <= std::abs(horner(coef_, hi) - f) ? lo : hi;
  if (n >= 0.0) {
    double x = 1.0 + u;
    for (int k = 0; k < static_cast<int>(n); ++k) {
      x = std::exp(x);
      if (!std::isfinite(x)) throw std::overflow_error("trans_exp: result exceeds double range");
    }
    return x;
  }
  double x = std::log1p(u);
  if (n <= -2.0) x = std::log(x);
  return x;
}

bool AbelFunction::check_transexp(int i, double x) const { return x - value(x) > i; }

// -------------------------------------------------------- serialization

namespace {

std::string hex(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::hex);
  return std::string(buf, r.ptr);
}

double parse_hex(const std::string& s) {
  double v = 0.0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v, std::chars_format::hex);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw std::runtime_error("abel file: bad number '" + s + "'");
  }
  return v;
}

}  // namespace

std::string AbelFunction::serialize() const {
  std::ostringstream os;
  os << "slogcert-abel 1\n";
  os << "order " << order_ << "\n";
  os << "normalization phi(1)=0\n";
  os << "coefficients " << coef_.size();
  for (double c : coef_) os << ' ' << hex(c);
  os << "\n";
  os << "seed_error " << hex(seed_error_) << "\n";
  os << "end\n";
  return os.str();
}

AbelFunction AbelFunction::deserialize(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string tag;
  int version = 0;
  if (!(is >> tag >> version) || tag != "slogcert-abel") {
    throw std::runtime_error("abel file: missing header");
  }
  if (version != 1) throw std::runtime_error("abel file: unsupported version");
  int order = -1;
  std::vector<double> coef;
  double err = -1.0;
  bool ended = false;
  std::string key;
  while (is >> key) {
    if (key == "order") {
      if (!(is >> order)) throw std::runtime_error("abel file: bad order");
    } else if (key == "normalization") {
      std::string v;
      is >> v;
      if (v != "phi(1)=0") throw std::runtime_error("abel file: unknown normalization");
    } else if (key == "coefficients") {
      std::size_t n = 0;
      if (!(is >> n) || n < 2 || n > 64) throw std::runtime_error("abel file: bad coefficient count");
      coef.resize(n);
      for (auto& c : coef) {
        std::string s;
        if (!(is >> s)) throw std::runtime_error("abel file: truncated coefficients");
        c = parse_hex(s);
      }
    } else if (key == "seed_error") {
      std::string s;
      if (!(is >> s)) throw std::runtime_error("abel file: bad seed_error");
      err = parse_hex(s);
    } else if (key == "end") {
      ended = true;
      break;
    } else {
      throw std::runtime_error("abel file: unknown field '" + key + "'");
    }
  }
  if (!ended || order < 0 || coef.empty() || !(err >= 0.0)) {
    throw std::runtime_error("abel file: incomplete");
  }
  try {
    return from_coefficients(order, std::move(coef), err);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("abel file: ") + e.what());
  }
}

// ------------------------------------------------------------- helpers

double exp_n(int n, double x) {
  for (int i = 0; i < n; ++i) x = std::exp(x);
  return x;
}

double log_n(int n, double x) {
  for (int i = 0; i < n; ++i) {
    if (!(x > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    x = std::log(x);
  }
  return x;
}

double abel_residual(const AbelFunction& phi, double lo, double hi, std::size_t points) {
  double worst = phi.junction_defect();
  for (std::size_t i = 0; i < points; ++i) {
    const double x =
        points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    worst = std::max(worst, std::abs(phi(std::exp(x)) - phi(x) - 1.0));
  }
  return worst;
}

DominationReport check_domination(const AbelFunction& phi, int n, double x_lo, double x_hi,
                                  std::size_t samples) {
  if (n < 1 || n > 2) throw std::invalid_argument("check_domination: n must be 1 or 2");
  if (!(x_lo > 1.0) || !(x_hi > x_lo) || samples < 2) {
    throw std::invalid_argument("check_domination: need 1 < x_lo < x_hi and samples >= 2");
  }
  DominationReport rep;
  rep.samples = samples;
  rep.last_violation = std::numeric_limits<double>::quiet_NaN();
  const double a = std::log(x_lo);
  const double b = std::log(x_hi);
  std::size_t first_ok = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = i + 1 == samples
                         ? x_hi
                         : std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(samples - 1));
    const double bound = log_n(n, x);
    if (!(std::abs(phi(x)) <= bound)) {
      rep.last_violation = x;
      first_ok = i + 1;
    }
  }
  if (first_ok < samples) {
    rep.found = true;
    rep.threshold = first_ok == 0 ? x_lo
                                  : std::exp(a + (b - a) * static_cast<double>(first_ok) /
                                                     static_cast<double>(samples - 1));
    if (first_ok + 1 == samples) rep.threshold = x_hi;
  }
  return rep;
}

}  // namespace slogcert
