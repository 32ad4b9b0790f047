#include "bfholes/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bfholes/errors.hpp"
#include "series.hpp"

namespace bfholes {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Plain accumulation is used while log of sum_j |alpha_j| |z^j| / sqrt(j!) stays below this.
constexpr double kPlainLogLimit = 650.0;
constexpr double kUnderflowLog = -700.0;

void check_dimension(const CoefficientDraw& draw, std::size_t dim) {
  if (!draw.indices) throw InvalidArgument("coefficient draw has no index table");
  if (dim != static_cast<std::size_t>(draw.m())) throw InvalidArgument("point dimension does not match the draw");
}

double max_abs(const std::vector<double>& v) {
  double mx = 0.0;
  for (double a : v) mx = std::max(mx, std::abs(a));
  return mx;
}

// Upper bound on log sum_j |alpha_j| |z^j| / sqrt(j!) from Cauchy-Schwarz:
// sum_k R^k / sqrt(k!) <= sqrt(2) e^{R^2} per coordinate.
bool plain_is_safe(double norm, int m, double amax) {
  return norm * norm + 0.35 * m + std::log(amax) < kPlainLogLimit;
}

template <class T>
T evaluate_tables(const CoefficientDraw& draw, std::span<const T> z) {
  const int m = draw.m();
  const int n = draw.degree();
  const auto is = draw.indices->inv_sqrt();
  std::vector<T> f(static_cast<std::size_t>(m) * (n + 1));
  for (int k = 0; k < m; ++k) {
    T* row = f.data() + static_cast<std::size_t>(k) * (n + 1);
    row[0] = T(1.0);
    for (int e = 1; e <= n; ++e) row[e] = row[e - 1] * z[static_cast<std::size_t>(k)] * is[static_cast<std::size_t>(e)];
  }
  T acc(0.0);
  const auto& idx = *draw.indices;
  for (std::size_t p = 0; p < idx.size(); ++p) {
    const double a = draw.values[p];
    if (a == 0.0) continue;
    const auto j = idx.exponents(p);
    T t(a);
    for (int k = 0; k < m; ++k) t *= f[static_cast<std::size_t>(k) * (n + 1) + static_cast<std::size_t>(j[static_cast<std::size_t>(k)])];
    acc += t;
  }
  return acc;
}

FieldValue evaluate_log_space(const CoefficientDraw& draw, std::span<const Complex> z) {
  const int m = draw.m();
  const int n = draw.degree();
  const auto& idx = *draw.indices;
  std::vector<double> lz(static_cast<std::size_t>(m));
  std::vector<Complex> ph(static_cast<std::size_t>(m) * (n + 1));
  for (int k = 0; k < m; ++k) {
    const Complex zk = z[static_cast<std::size_t>(k)];
    const double az = std::abs(zk);
    lz[static_cast<std::size_t>(k)] = az > 0.0 ? std::log(az) : kNegInf;
    const Complex u = az > 0.0 ? zk / az : Complex(1.0, 0.0);
    Complex* row = ph.data() + static_cast<std::size_t>(k) * (n + 1);
    row[0] = 1.0;
    for (int e = 1; e <= n; ++e) row[e] = row[e - 1] * u;
  }
  std::vector<double> lt(idx.size(), kNegInf);
  double mx = kNegInf;
  for (std::size_t p = 0; p < idx.size(); ++p) {
    const double a = draw.values[p];
    if (a == 0.0) continue;
    const auto j = idx.exponents(p);
    double l = std::log(std::abs(a)) - 0.5 * idx.log_factorial(p);
    bool zero = false;
    for (int k = 0; k < m; ++k) {
      const int e = j[static_cast<std::size_t>(k)];
      if (e == 0) continue;
      if (!std::isfinite(lz[static_cast<std::size_t>(k)])) {
        zero = true;
        break;
      }
      l += e * lz[static_cast<std::size_t>(k)];
    }
    if (zero) continue;
    lt[p] = l;
    mx = std::max(mx, l);
  }
  FieldValue out;
  if (!std::isfinite(mx)) return out;
  Complex acc(0.0, 0.0);
  for (std::size_t p = 0; p < idx.size(); ++p) {
    if (!std::isfinite(lt[p])) continue;
    const auto j = idx.exponents(p);
    Complex phase(draw.values[p] > 0.0 ? 1.0 : -1.0, 0.0);
    for (int k = 0; k < m; ++k) phase *= ph[static_cast<std::size_t>(k) * (n + 1) + static_cast<std::size_t>(j[static_cast<std::size_t>(k)])];
    acc += std::exp(lt[p] - mx) * phase;
  }
  out.mantissa = acc;
  out.log_scale = mx;
  return out;
}

// One-axis Taylor recentering of the line v_0..v_{L-1}, in place.
// d_i = sum_{j >= i} v_j C(j,i) y^{j-i} / sqrt(j!) * sqrt(i!)
// beta_k = e^{-y^2/2} sum_l (-y)^l / l! sqrt(k! / (k-l)!) d_{k-l}
struct LineTransform {
  int n = 0;
  std::vector<double> up;    // up[(j-i)*(n+1)+i]
  std::vector<double> down;  // down[l*(n+1)+k]
  double scale = 1.0;

  LineTransform(int degree, double y) : n(degree) {
    const std::size_t w = static_cast<std::size_t>(n) + 1;
    up.assign(w * w, 0.0);
    down.assign(w * w, 0.0);
    scale = std::exp(-0.5 * y * y);
    std::vector<double> lf(w);
    for (std::size_t i = 0; i < w; ++i) lf[i] = std::lgamma(static_cast<double>(i) + 1.0);
    const double ly = y != 0.0 ? std::log(std::abs(y)) : kNegInf;
    for (int d = 0; d <= n; ++d) {
      const double sgn_up = (y < 0.0 && (d & 1)) ? -1.0 : 1.0;
      const double sgn_down = (y > 0.0 && (d & 1)) ? -1.0 : 1.0;
      for (int i = 0; i + d <= n; ++i) {
        const std::size_t ud = static_cast<std::size_t>(d), ui = static_cast<std::size_t>(i);
        if (d == 0) {
          up[ui] = 1.0;
          down[ui] = 1.0;
          continue;
        }
        if (y == 0.0) continue;
        const double j = i + d;
        up[ud * w + ui] =
            sgn_up * std::exp(d * ly + 0.5 * (lf[static_cast<std::size_t>(j)] - lf[ui]) - lf[ud]);
        // here i plays k - l with k = i + d, l = d
        down[ud * w + static_cast<std::size_t>(j)] =
            sgn_down * std::exp(d * ly - lf[ud] + 0.5 * (lf[static_cast<std::size_t>(j)] - lf[ui]));
      }
    }
  }

  void apply(std::vector<double>& v) const {
    const int len = static_cast<int>(v.size());
    const std::size_t w = static_cast<std::size_t>(n) + 1;
    std::vector<double> d(v.size(), 0.0);
    for (int i = 0; i < len; ++i) {
      double s = 0.0;
      for (int j = i; j < len; ++j) s += v[static_cast<std::size_t>(j)] * up[static_cast<std::size_t>(j - i) * w + static_cast<std::size_t>(i)];
      d[static_cast<std::size_t>(i)] = s;
    }
    for (int k = 0; k < len; ++k) {
      double s = 0.0;
      for (int l = 0; l <= k; ++l) s += down[static_cast<std::size_t>(l) * w + static_cast<std::size_t>(k)] * d[static_cast<std::size_t>(k - l)];
      v[static_cast<std::size_t>(k)] = scale * s;
    }
  }
};

double circle_log_abs(const CoefficientDraw& draw, double r, double theta) {
  return evaluate(draw, EvaluationPoint::complex(std::polar(r, theta))).log_abs();
}

// Trapezoid average of log|psi| over n nodes theta_i = 2 pi (i + 1/2) / n (n even, m = 1).
double trapezoid_average(const CoefficientDraw& draw, double r, int n, int& excluded) {
  double acc = 0.0;
  int used = 0;
  for (int i = 0; i < n / 2; ++i) {
    const double theta = 2.0 * std::numbers::pi * (i + 0.5) / n;
    double v = circle_log_abs(draw, r, theta);
    for (int attempt = 1; attempt <= 3 && !(v > kUnderflowLog); ++attempt) {
      v = circle_log_abs(draw, r, theta + attempt * 1e-7);
    }
    if (!(v > kUnderflowLog)) {
      excluded += 2;
      continue;
    }
    acc += 2.0 * v;
    used += 2;
  }
  return used > 0 ? acc / used : kNegInf;
}

}  // namespace

EvaluationPoint EvaluationPoint::real(std::span<const double> x) {
  EvaluationPoint p;
  p.coordinates.reserve(x.size());
  for (double v : x) p.coordinates.emplace_back(v, 0.0);
  return p;
}

bool EvaluationPoint::is_real() const noexcept {
  return std::all_of(coordinates.begin(), coordinates.end(), [](Complex c) { return c.imag() == 0.0; });
}

double EvaluationPoint::norm() const noexcept {
  double s = 0.0;
  for (Complex c : coordinates) s += std::norm(c);
  return std::sqrt(s);
}

FieldValue evaluate(const CoefficientDraw& draw, const EvaluationPoint& p) {
  check_dimension(draw, p.coordinates.size());
  const double norm = p.norm();
  FieldValue out;
  out.certified = norm <= draw.plan.radius * (1.0 + 1e-12);
  const double amax = max_abs(draw.values);
  if (amax == 0.0) return out;
  if (!std::isfinite(norm)) throw InvalidArgument("evaluation point is not finite");

  if (plain_is_safe(norm, draw.m(), amax)) {
    const bool real = p.is_real();
    if (draw.m() == 1) {
      const double* a = draw.values.data();
      const double* is = draw.indices->inv_sqrt().data();
      if (real) {
        out.mantissa = detail::horner(a, is, draw.degree(), p.coordinates[0].real());
      } else {
        out.mantissa = detail::horner(a, is, draw.degree(), p.coordinates[0]);
      }
    } else if (real) {
      std::vector<double> x(p.coordinates.size());
      for (std::size_t k = 0; k < x.size(); ++k) x[k] = p.coordinates[k].real();
      out.mantissa = evaluate_tables<double>(draw, x);
    } else {
      out.mantissa = evaluate_tables<Complex>(draw, p.coordinates);
    }
    return out;
  }
  const bool certified = out.certified;
  out = evaluate_log_space(draw, p.coordinates);
  out.certified = certified;
  if (p.is_real()) out.mantissa = Complex(out.mantissa.real(), 0.0);
  return out;
}

double evaluate_real(const CoefficientDraw& draw, std::span<const double> x) {
  check_dimension(draw, x.size());
  if (draw.m() == 1) return detail::horner(draw.values.data(), draw.indices->inv_sqrt().data(), draw.degree(), x[0]);
  return evaluate_tables<double>(draw, x);
}

double evaluate_weighted(const CoefficientDraw& draw, std::span<const double> x) {
  const FieldValue v = evaluate(draw, EvaluationPoint::real(x));
  double n2 = 0.0;
  for (double t : x) n2 += t * t;
  return v.mantissa.real() * std::exp(v.log_scale - 0.5 * n2);
}

double kernel(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("kernel arguments differ in dimension");
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  return std::exp(s);
}

double kernel_identity_residual(std::span<const double> s, std::span<const double> t) {
  if (s.size() != t.size()) throw InvalidArgument("kernel arguments differ in dimension");
  double ss = 0.0, tt = 0.0, d2 = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    ss += s[k] * s[k];
    tt += t[k] * t[k];
    d2 += (s[k] - t[k]) * (s[k] - t[k]);
  }
  return std::abs(std::exp(-0.5 * ss) * std::exp(-0.5 * tt) * kernel(s, t) - std::exp(-0.5 * d2));
}

CoefficientDraw recenter_coefficients(const CoefficientDraw& draw, std::span<const double> y) {
  check_dimension(draw, y.size());
  double n2 = 0.0;
  for (double v : y) n2 += v * v;
  const double ny = std::sqrt(n2);
  if (!(ny < draw.plan.radius)) throw InvalidArgument("recentering point must lie inside the plan radius");

  CoefficientDraw out = draw;
  out.plan.radius = draw.plan.radius - ny;
  if (ny == 0.0) return out;

  const int m = draw.m();
  const int n = draw.degree();
  const auto& idx = *draw.indices;
  std::vector<int> e(static_cast<std::size_t>(m));
  std::vector<std::size_t> line_pos;
  std::vector<double> line;
  for (int axis = 0; axis < m; ++axis) {
    const double ya = y[static_cast<std::size_t>(axis)];
    if (ya == 0.0) continue;
    const LineTransform tf(n, ya);
    for (std::size_t p = 0; p < idx.size(); ++p) {
      const auto j = idx.exponents(p);
      if (j[static_cast<std::size_t>(axis)] != 0) continue;
      std::copy(j.begin(), j.end(), e.begin());
      const int len = n - idx.degree(p) + 1;
      line_pos.resize(static_cast<std::size_t>(len));
      line.resize(static_cast<std::size_t>(len));
      for (int t = 0; t < len; ++t) {
        e[static_cast<std::size_t>(axis)] = t;
        const std::size_t q = t == 0 ? p : idx.position(e);
        line_pos[static_cast<std::size_t>(t)] = q;
        line[static_cast<std::size_t>(t)] = out.values[q];
      }
      tf.apply(line);
      for (int t = 0; t < len; ++t) out.values[line_pos[static_cast<std::size_t>(t)]] = line[static_cast<std::size_t>(t)];
    }
  }
  return out;
}

RotatedExpansion rotate_recenter_coefficients(const CoefficientDraw& draw, std::span<const Complex> zeta) {
  check_dimension(draw, zeta.size());
  RotatedExpansion r;
  r.zeta.assign(zeta.begin(), zeta.end());
  for (Complex z : zeta) {
    if (z.imag() == 0.0) {
      r.moduli.push_back(z.real());
      r.angles.push_back(0.0);
    } else {
      r.moduli.push_back(std::abs(z));
      r.angles.push_back(std::arg(z));
    }
  }
  r.beta = recenter_coefficients(draw, r.moduli);
  const auto& idx = *draw.indices;
  r.phases.resize(idx.size());
  for (std::size_t p = 0; p < idx.size(); ++p) {
    const auto j = idx.exponents(p);
    double th = 0.0;
    for (std::size_t k = 0; k < j.size(); ++k) th -= j[k] * r.angles[k];
    r.phases[p] = th;
  }
  return r;
}

Complex evaluate_rotated_expansion(const RotatedExpansion& e, std::span<const double> x) {
  const CoefficientDraw& b = e.beta;
  check_dimension(b, x.size());
  const int m = b.m();
  const int n = b.degree();
  const auto is = b.indices->inv_sqrt();
  std::vector<Complex> g(static_cast<std::size_t>(m) * (n + 1));
  double expo = 0.0;
  for (int k = 0; k < m; ++k) {
    const std::size_t uk = static_cast<std::size_t>(k);
    expo += -0.5 * std::norm(e.zeta[uk]) + x[uk] * e.moduli[uk];
    const Complex w = x[uk] * std::polar(1.0, e.angles[uk]) - e.zeta[uk];
    Complex* row = g.data() + uk * (n + 1);
    row[0] = 1.0;
    for (int d = 1; d <= n; ++d) row[d] = row[d - 1] * w * is[static_cast<std::size_t>(d)];
  }
  Complex acc(0.0, 0.0);
  const auto& idx = *b.indices;
  for (std::size_t p = 0; p < idx.size(); ++p) {
    if (b.values[p] == 0.0) continue;
    const auto j = idx.exponents(p);
    Complex t = b.values[p] * std::polar(1.0, e.phases[p]);
    for (int k = 0; k < m; ++k) t *= g[static_cast<std::size_t>(k) * (n + 1) + static_cast<std::size_t>(j[static_cast<std::size_t>(k)])];
    acc += t;
  }
  return std::exp(expo) * acc;
}

const char* to_string(GrowthKind kind) {
  switch (kind) {
    case GrowthKind::max_log_modulus: return "max_log_modulus";
    case GrowthKind::sphere_average_log: return "sphere_average_log";
    case GrowthKind::weighted_value: return "weighted_value";
  }
  return "unknown";
}

double log_abs_series(const CoefficientDraw& draw, double x, int order) {
  if (!draw.indices) throw InvalidArgument("coefficient draw has no index table");
  if (order < 0 || order > 2) throw InvalidArgument("order must be 0, 1 or 2");
  if (x < 0.0) throw InvalidArgument("radius must be nonnegative");
  const auto& idx = *draw.indices;
  const double lx = x > 0.0 ? std::log(x) : kNegInf;
  std::vector<double> lt;
  lt.reserve(idx.size());
  double mx = kNegInf;
  for (std::size_t p = 0; p < idx.size(); ++p) {
    const double a = draw.values[p];
    const int d = idx.degree(p);
    if (a == 0.0 || d < order) continue;
    double l = std::log(std::abs(a)) - 0.5 * idx.log_factorial(p);
    for (int q = 0; q < order; ++q) l += std::log(static_cast<double>(d - q));
    if (d > order) {
      if (x == 0.0) continue;
      l += (d - order) * lx;
    }
    lt.push_back(l);
    mx = std::max(mx, l);
  }
  if (!std::isfinite(mx)) return kNegInf;
  double acc = 0.0;
  for (double l : lt) acc += std::exp(l - mx);
  return mx + std::log(acc);
}

int default_sphere_nodes(int m, double r) {
  if (m == 1) return 4 * static_cast<int>(std::ceil(r * r)) + 64;
  return 1000;
}

GrowthStatistic max_log_modulus(const CoefficientDraw& draw, double r, NetOptions options) {
  if (!draw.indices) throw InvalidArgument("coefficient draw has no index table");
  if (!(r >= 0.0)) throw InvalidArgument("radius must be nonnegative");
  GrowthStatistic g;
  g.kind = GrowthKind::max_log_modulus;
  g.radius = r;
  const int m = draw.m();
  const double target = options.tolerance * r * r;
  if (r == 0.0) {
    g.value = std::log(std::abs(draw.values[0]));
    g.nodes = 1;
    g.resolution = "origin";
    g.certified = true;
    return g;
  }

  if (m == 1) {
    const double log_l = log_abs_series(draw, r, 1);
    int n = options.initial_nodes > 0 ? options.initial_nodes : default_sphere_nodes(1, r);
    n += n & 1;
    for (;;) {
      double mx = kNegInf;
      for (int i = 0; i <= n / 2; ++i) mx = std::max(mx, circle_log_abs(draw, r, 2.0 * std::numbers::pi * i / n));
      // Every circle point is within arc length pi r / n of a node.
      const double err = std::log1p(std::exp(log_l + std::log(std::numbers::pi * r / n) - mx));
      g.value = mx;
      g.nodes = n;
      g.error_bound = err;
      if (err <= target || 2LL * n > options.max_nodes) break;
      n *= 2;
    }
    g.resolution = "circle nodes=" + std::to_string(g.nodes) + " (maximum principle)";
  } else {
    const double rho = r / std::sqrt(static_cast<double>(m));
    const double log_g = log_abs_series(draw, rho, 1);
    int n = options.initial_nodes > 0 ? options.initial_nodes
                                      : std::max(8, 2 * static_cast<int>(std::ceil(rho * rho)) + 16);
    auto total = [m](int per) {
      long long t = 1;
      for (int k = 0; k < m; ++k) t *= per;
      return t;
    };
    for (;;) {
      double mx = kNegInf;
      std::vector<int> ang(static_cast<std::size_t>(m), 0);
      EvaluationPoint pt;
      pt.coordinates.resize(static_cast<std::size_t>(m));
      const long long count = total(n);
      for (long long c = 0; c < count; ++c) {
        for (int k = 0; k < m; ++k) pt.coordinates[static_cast<std::size_t>(k)] = std::polar(rho, 2.0 * std::numbers::pi * ang[static_cast<std::size_t>(k)] / n);
        mx = std::max(mx, evaluate(draw, pt).log_abs());
        for (int k = 0; k < m; ++k) {
          if (++ang[static_cast<std::size_t>(k)] < n) break;
          ang[static_cast<std::size_t>(k)] = 0;
        }
      }
      const double err = std::log1p(std::exp(log_g + std::log(std::numbers::pi * rho / n) - mx));
      g.value = mx;
      g.nodes = static_cast<int>(count);
      g.error_bound = err;
      if (err <= target || total(2 * n) > options.max_nodes) break;
      n *= 2;
    }
    g.resolution = "torus net " + std::to_string(n) + "^" + std::to_string(m) + " on polydisk radius r/sqrt(m)";
  }
  g.certified = g.error_bound <= target && r <= draw.plan.radius * (1.0 + 1e-12);
  return g;
}

GrowthStatistic sphere_average_log(const CoefficientDraw& draw, double r, int nodes) {
  if (!draw.indices) throw InvalidArgument("coefficient draw has no index table");
  if (!(r >= 0.0)) throw InvalidArgument("radius must be nonnegative");
  const int m = draw.m();
  GrowthStatistic g;
  g.kind = GrowthKind::sphere_average_log;
  g.radius = r;
  g.certified = r <= draw.plan.radius * (1.0 + 1e-12);
  if (r == 0.0) {
    g.value = std::log(std::abs(draw.values[0]));
    g.nodes = 1;
    g.resolution = "origin";
    return g;
  }
  int n = nodes > 0 ? nodes : default_sphere_nodes(m, r);
  if (m == 1) {
    n = std::max(n + (n & 1), 4);
    int excluded = 0, coarse_excluded = 0;
    g.value = trapezoid_average(draw, r, n, excluded);
    const int half = n / 2 + ((n / 2) & 1);
    g.error_bound = std::abs(g.value - trapezoid_average(draw, r, half, coarse_excluded));
    g.nodes = n;
    g.excluded_nodes = excluded;
    g.resolution = "trapezoid nodes=" + std::to_string(n);
    return g;
  }

  const NormalStream stream({draw.stream.master_seed, draw.stream.trial_id, StreamRole::quadrature});
  const std::uint64_t stride = 2 * static_cast<std::uint64_t>(m);
  EvaluationPoint pt;
  pt.coordinates.resize(static_cast<std::size_t>(m));
  std::vector<double> gauss(stride);
  double sum = 0.0, sum2 = 0.0;
  int used = 0;
  for (int i = 0; i < n; ++i) {
    double v = kNegInf;
    for (int attempt = 0; attempt <= 3 && !(v > kUnderflowLog); ++attempt) {
      const std::uint64_t base = (static_cast<std::uint64_t>(attempt) << 40) + static_cast<std::uint64_t>(i) * stride;
      stream.fill_normal(gauss, base);
      double s = 0.0;
      for (double x : gauss) s += x * x;
      const double scale = r / std::sqrt(s);
      for (int k = 0; k < m; ++k) pt.coordinates[static_cast<std::size_t>(k)] = Complex(gauss[2 * k] * scale, gauss[2 * k + 1] * scale);
      v = evaluate(draw, pt).log_abs();
    }
    if (!(v > kUnderflowLog)) {
      ++g.excluded_nodes;
      continue;
    }
    sum += v;
    sum2 += v * v;
    ++used;
  }
  g.nodes = n;
  if (used == 0) {
    g.value = kNegInf;
    return g;
  }
  g.value = sum / used;
  if (used > 1) {
    const double var = std::max(0.0, (sum2 - used * g.value * g.value) / (used - 1));
    g.standard_error = std::sqrt(var / used);
  }
  g.error_bound = 3.0 * g.standard_error;
  g.resolution = "gaussian directions=" + std::to_string(n);
  return g;
}

GrowthStatistic max_log_weighted_real(const CoefficientDraw& draw, double r, double step) {
  if (draw.m() != 1) throw InvalidArgument("weighted real maximum is implemented for m = 1");
  if (!(step > 0.0)) throw InvalidArgument("step must be positive");
  GrowthStatistic g;
  g.kind = GrowthKind::weighted_value;
  g.radius = r;
  const int cells = std::max(1, static_cast<int>(std::ceil(2.0 * r / step)));
  double mx = kNegInf;
  for (int i = 0; i <= cells; ++i) {
    const double x = -r + 2.0 * r * i / cells;
    const FieldValue v = evaluate(draw, EvaluationPoint::real(x));
    mx = std::max(mx, v.log_abs() - 0.5 * x * x);
  }
  g.value = mx;
  g.nodes = cells + 1;
  g.resolution = "real grid nodes=" + std::to_string(cells + 1);
  g.certified = r <= draw.plan.radius * (1.0 + 1e-12);
  return g;
}

}  // namespace bfholes
