#include "bfholes/census.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "bfholes/errors.hpp"
#include "bfholes/field.hpp"
#include "series.hpp"

namespace bfholes {

namespace {

constexpr int kMaxCellDepth = 40;
constexpr int kMaxCubeDepth = 6;
constexpr int kMaxArcDepth = 50;
constexpr double kRootTolerance = 1e-12;

int sign_beyond(double v, double t) {
  if (v > t) return 1;
  if (v < -t) return -1;
  return 0;
}

void require_plain_range(const CoefficientDraw& draw, double x_max) {
  double amax = 0.0;
  for (double a : draw.values) amax = std::max(amax, std::abs(a));
  if (amax > 0.0 && x_max * x_max + 0.35 * draw.m() + std::log(amax) > 650.0) {
    throw InvalidArgument("census region too large for double-precision evaluation");
  }
}

struct LineCensus {
  const double* a = nullptr;
  const double* is = nullptr;
  int n = 0;
  double tail = 0.0;
  double tail_d1 = 0.0;
  double m3 = 0.0;  // sup |psi_N'''| on the box
  bool stop_at_first = false;

  std::vector<double> zeros;
  int uncertain = 0;
  int depth_reached = 0;
  bool stop = false;

  double value(double x) const { return detail::horner(a, is, n, x); }

  double bisect(double lo, double hi, double vlo) const {
    for (int it = 0; it < 200 && hi - lo > kRootTolerance; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double vm = value(mid);
      if (vm == 0.0) return mid;
      if ((vm > 0.0) == (vlo > 0.0)) {
        lo = mid;
        vlo = vm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }

  void cell(double lo, double hi, double vlo, double vhi, int depth) {
    if (stop) return;
    depth_reached = std::max(depth_reached, depth);
    const double c = 0.5 * (lo + hi);
    const double w = 0.5 * (hi - lo);
    const detail::Jet j = detail::horner_jet(a, is, n, c);
    const double m2 = std::abs(j.d2) + m3 * w;  // sup |psi_N''| on the cell
    const bool monotone = std::abs(j.d1) > m2 * w + tail_d1;
    const int slo = sign_beyond(vlo, tail);
    const int shi = sign_beyond(vhi, tail);
    if (slo != 0 && shi != 0) {
      if (slo != shi && monotone) {
        zeros.push_back(bisect(lo, hi, vlo));
        if (stop_at_first) stop = true;
        return;
      }
      if (slo == shi) {
        if (monotone) return;
        const double floor = std::abs(j.v) - std::abs(j.d1) * w - 0.5 * m2 * w * w - tail;
        if (floor > 0.0) return;
      }
    }
    if (depth >= kMaxCellDepth) {
      ++uncertain;
      return;
    }
    // Split away from points whose sign cannot be certified.
    double s = c;
    double vs = j.v;
    for (double f : {0.4, 0.6, 0.3, 0.7}) {
      if (sign_beyond(vs, tail) != 0) break;
      s = lo + f * (hi - lo);
      vs = value(s);
    }
    if (sign_beyond(vs, tail) == 0) {
      s = c;
      vs = j.v;
    }
    cell(lo, s, vlo, vs, depth + 1);
    cell(s, hi, vs, vhi, depth + 1);
  }
};

CensusResult line_census(const CoefficientDraw& draw, const BoxSpec& box, bool stop_at_first) {
  const double c = box.center.empty() ? 0.0 : box.center[0];
  const double lo = c - box.half_width;
  const double hi = c + box.half_width;
  const double xmax = std::max(std::abs(lo), std::abs(hi));
  require_plain_range(draw, xmax);

  LineCensus lc;
  lc.a = draw.values.data();
  lc.is = draw.indices->inv_sqrt().data();
  lc.n = draw.degree();
  lc.tail = draw.plan.tail_bound;
  lc.tail_d1 = draw.plan.tail_bound_d1;
  lc.m3 = detail::abs_d3(lc.a, lc.is, lc.n, xmax);
  lc.stop_at_first = stop_at_first;

  CensusResult res;
  if (box.half_width == 0.0) {
    const double v = lc.value(c);
    res.verdict = sign_beyond(v, lc.tail) != 0 ? CensusVerdict::hole : CensusVerdict::uncertain;
    res.uncertain_cells = res.verdict == CensusVerdict::uncertain ? 1 : 0;
    res.count_is_lower_bound = res.uncertain_cells > 0;
    return res;
  }

  const double h = box.grid_step > 0.0 ? box.grid_step : default_grid_step(draw.degree());
  const int cells = std::max(1, static_cast<int>(std::ceil((hi - lo) / h)));
  std::vector<double> grid(static_cast<std::size_t>(cells) + 1);
  std::vector<double> vals(grid.size());
  for (int i = 0; i <= cells; ++i) {
    grid[static_cast<std::size_t>(i)] = i == cells ? hi : lo + (hi - lo) * i / cells;
    vals[static_cast<std::size_t>(i)] = lc.value(grid[static_cast<std::size_t>(i)]);
  }
  // Interior nodes are free: move any node sitting within the tail band of a zero.
  for (int i = 1; i < cells; ++i) {
    const std::size_t u = static_cast<std::size_t>(i);
    const double base = grid[u];
    const double step = (hi - lo) / cells;
    for (double f : {0.21, -0.23, 0.37, -0.39}) {
      if (sign_beyond(vals[u], lc.tail) != 0) break;
      grid[u] = base + f * step;
      vals[u] = lc.value(grid[u]);
    }
  }

  if (stop_at_first) {
    // A certified sign change on the grid settles the verdict without any cell work.
    for (int i = 0; i < cells; ++i) {
      const std::size_t u = static_cast<std::size_t>(i);
      const int s0 = sign_beyond(vals[u], lc.tail);
      const int s1 = sign_beyond(vals[u + 1], lc.tail);
      if (s0 != 0 && s1 != 0 && s0 != s1) {
        const double root = lc.bisect(grid[u], grid[u + 1], vals[u]);
        res.verdict = CensusVerdict::zero_found;
        res.count = 1;
        res.count_is_lower_bound = true;
        res.zeros = {root};
        res.witness_value = std::abs(lc.value(root));
        return res;
      }
    }
  }

  for (int i = 0; i < cells && !lc.stop; ++i) {
    const std::size_t u = static_cast<std::size_t>(i);
    lc.cell(grid[u], grid[u + 1], vals[u], vals[u + 1], 0);
  }
  res.zeros = std::move(lc.zeros);
  std::sort(res.zeros.begin(), res.zeros.end());
  res.count = static_cast<int>(res.zeros.size());
  res.uncertain_cells = lc.uncertain;
  res.refinement_depth = lc.depth_reached;
  res.count_is_lower_bound = lc.uncertain > 0 || lc.stop;
  if (res.count > 0) {
    res.verdict = CensusVerdict::zero_found;
    res.witness_value = std::abs(lc.value(res.zeros.front()));
  } else {
    res.verdict = lc.uncertain > 0 ? CensusVerdict::uncertain : CensusVerdict::hole;
  }
  return res;
}

struct CubeCensus {
  const CoefficientDraw* draw = nullptr;
  int m = 2;
  double tail = 0.0;
  double grad = 0.0;  // sup |grad psi| on the box (sum of partials)
  int uncertain = 0;
  int depth_reached = 0;
  bool found = false;
  std::vector<double> witness;
  double witness_value = 0.0;

  double value(const std::vector<double>& x) const { return evaluate_real(*draw, x); }

  void locate(std::vector<double> p, std::vector<double> q, double vp) {
    std::vector<double> mid(p.size());
    for (int it = 0; it < 200; ++it) {
      double d = 0.0;
      for (std::size_t k = 0; k < p.size(); ++k) {
        mid[k] = 0.5 * (p[k] + q[k]);
        d = std::max(d, std::abs(p[k] - q[k]));
      }
      if (d <= kRootTolerance) break;
      const double vm = value(mid);
      if (vm == 0.0) break;
      if ((vm > 0.0) == (vp > 0.0)) {
        p = mid;
        vp = vm;
      } else {
        q = mid;
      }
    }
    witness = mid;
    witness_value = std::abs(value(mid));
  }

  void cube(const std::vector<double>& lo, double side, int depth) {
    if (found) return;
    depth_reached = std::max(depth_reached, depth);
    const int corners = 1 << m;
    std::vector<double> x(static_cast<std::size_t>(m));
    std::vector<double> vals(static_cast<std::size_t>(corners));
    double min_abs = INFINITY;
    int first_sign = 0;
    for (int c = 0; c < corners; ++c) {
      for (int k = 0; k < m; ++k) x[static_cast<std::size_t>(k)] = lo[static_cast<std::size_t>(k)] + (((c >> k) & 1) ? side : 0.0);
      const double v = value(x);
      vals[static_cast<std::size_t>(c)] = v;
      min_abs = std::min(min_abs, std::abs(v));
      const int s = sign_beyond(v, tail);
      if (s == 0) continue;
      if (first_sign == 0) {
        first_sign = s;
      } else if (s != first_sign) {
        // opposite certified signs at two corners: a zero lies on the segment between them
        for (int c0 = 0; c0 < c; ++c0) {
          if (sign_beyond(vals[static_cast<std::size_t>(c0)], tail) == -s) {
            std::vector<double> p(static_cast<std::size_t>(m));
            for (int k = 0; k < m; ++k) p[static_cast<std::size_t>(k)] = lo[static_cast<std::size_t>(k)] + (((c0 >> k) & 1) ? side : 0.0);
            found = true;
            locate(p, x, vals[static_cast<std::size_t>(c0)]);
            return;
          }
        }
      }
    }
    // Every point is within side sqrt(m)/2 of a corner.
    if (first_sign != 0 && min_abs > grad * side * std::sqrt(static_cast<double>(m)) * 0.5 + tail) return;
    if (depth >= kMaxCubeDepth) {
      ++uncertain;
      return;
    }
    const double half = 0.5 * side;
    std::vector<double> sub(lo);
    for (int c = 0; c < corners && !found; ++c) {
      for (int k = 0; k < m; ++k) sub[static_cast<std::size_t>(k)] = lo[static_cast<std::size_t>(k)] + (((c >> k) & 1) ? half : 0.0);
      cube(sub, half, depth + 1);
    }
  }
};

CensusResult cube_census(const CoefficientDraw& draw, const BoxSpec& box) {
  const int m = draw.m();
  std::vector<double> center = box.center.empty() ? std::vector<double>(static_cast<std::size_t>(m), 0.0) : box.center;
  double xmax = 0.0;
  for (double c : center) xmax = std::max(xmax, std::abs(c) + box.half_width);
  require_plain_range(draw, xmax * std::sqrt(static_cast<double>(m)));

  CubeCensus cc;
  cc.draw = &draw;
  cc.m = m;
  cc.tail = draw.plan.tail_bound;
  cc.grad = std::exp(log_abs_series(draw, xmax, 1)) + m * draw.plan.tail_bound_d1;

  const double h = box.grid_step > 0.0 ? box.grid_step : default_grid_step(draw.degree());
  const int cells = std::max(1, static_cast<int>(std::ceil(2.0 * box.half_width / h)));
  const double side = 2.0 * box.half_width / cells;
  std::vector<int> idx(static_cast<std::size_t>(m), 0);
  std::vector<double> lo(static_cast<std::size_t>(m));
  long long total = 1;
  for (int k = 0; k < m; ++k) total *= cells;
  for (long long t = 0; t < total && !cc.found; ++t) {
    for (int k = 0; k < m; ++k) lo[static_cast<std::size_t>(k)] = center[static_cast<std::size_t>(k)] - box.half_width + side * idx[static_cast<std::size_t>(k)];
    cc.cube(lo, side, 0);
    for (int k = 0; k < m; ++k) {
      if (++idx[static_cast<std::size_t>(k)] < cells) break;
      idx[static_cast<std::size_t>(k)] = 0;
    }
  }
  CensusResult res;
  res.uncertain_cells = cc.uncertain;
  res.refinement_depth = cc.depth_reached;
  if (cc.found) {
    res.verdict = CensusVerdict::zero_found;
    res.count = 1;
    res.count_is_lower_bound = true;
    res.zeros = cc.witness;
    res.witness_value = cc.witness_value;
  } else {
    res.verdict = cc.uncertain > 0 ? CensusVerdict::uncertain : CensusVerdict::hole;
    res.count_is_lower_bound = cc.uncertain > 0;
  }
  return res;
}

void check_box(const CoefficientDraw& draw, const BoxSpec& box) {
  if (!draw.indices) throw InvalidArgument("coefficient draw has no index table");
  if (box.m != draw.m()) throw InvalidArgument("box dimension does not match the draw");
  if (!(box.half_width >= 0.0)) throw InvalidArgument("box half width must be nonnegative");
  if (box.grid_step < 0.0) throw InvalidArgument("grid step must be positive");
  if (!box.center.empty() && box.center.size() != static_cast<std::size_t>(box.m)) {
    throw InvalidArgument("box center dimension does not match");
  }
  double far2 = 0.0;
  for (int k = 0; k < box.m; ++k) {
    const double c = box.center.empty() ? 0.0 : box.center[static_cast<std::size_t>(k)];
    far2 += (std::abs(c) + box.half_width) * (std::abs(c) + box.half_width);
  }
  if (std::sqrt(far2) > draw.plan.radius * (1.0 + 1e-12)) throw InvalidArgument("box exceeds the certified plan radius");
}

// Argument tracking on the upper half circle of radius r.
struct ArcTracker {
  const double* a = nullptr;
  const double* is = nullptr;
  int n = 0;
  double r = 0.0;
  double m2 = 0.0;
  double guard = 0.0;  // 3 * tail
  int steps = 0;
  bool failed = false;

  void eval(double theta, Complex& v, Complex& d) const { detail::horner_d1(a, is, n, std::polar(r, theta), v, d); }

  double track(double ta, Complex va, Complex da, double tb, Complex vb, Complex db, int depth) {
    if (failed) return 0.0;
    const double s = r * (tb - ta);
    const double av = std::abs(va);
    if (std::abs(da) * s + 0.5 * m2 * s * s + guard < av) {
      ++steps;
      return std::arg(vb / va);
    }
    if (depth >= kMaxArcDepth) {
      failed = true;
      return 0.0;
    }
    const double tm = 0.5 * (ta + tb);
    Complex vm, dm;
    eval(tm, vm, dm);
    return track(ta, va, da, tm, vm, dm, depth + 1) + track(tm, vm, dm, tb, vb, db, depth + 1);
  }
};

bool try_winding(const CoefficientDraw& draw, double r, int& count, int& steps) {
  ArcTracker t;
  t.a = draw.values.data();
  t.is = draw.indices->inv_sqrt().data();
  t.n = draw.degree();
  t.r = r;
  t.m2 = detail::abs_jet(t.a, t.is, t.n, r).d2 + draw.plan.tail_bound_d2;
  t.guard = 3.0 * draw.plan.tail_bound;
  const int nodes = 2 * static_cast<int>(std::ceil(r * r)) + 32;
  std::vector<Complex> v(static_cast<std::size_t>(nodes) + 1), d(v.size());
  for (int i = 0; i <= nodes; ++i) t.eval(std::numbers::pi * i / nodes, v[static_cast<std::size_t>(i)], d[static_cast<std::size_t>(i)]);
  double total = 0.0;
  for (int i = 0; i < nodes && !t.failed; ++i) {
    const std::size_t u = static_cast<std::size_t>(i);
    total += t.track(std::numbers::pi * i / nodes, v[u], d[u], std::numbers::pi * (i + 1) / nodes, v[u + 1], d[u + 1], 0);
  }
  if (t.failed) return false;
  const double turns = total / std::numbers::pi;
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 0.25) return false;
  count = static_cast<int>(rounded);
  steps = t.steps;
  return true;
}

int origin_order(const CoefficientDraw& draw) {
  for (std::size_t k = 0; k < draw.values.size(); ++k) {
    if (draw.values[k] != 0.0) return static_cast<int>(k);
  }
  return -1;
}

// Winding count at some radius in (lo, hi), preferring the given fractions of the interval.
// A circle passing too close to a zero fails; another radius nearby then works.
bool count_inside(const CoefficientDraw& draw, double lo, double hi, std::initializer_list<double> fractions,
                  double& t, int& count) {
  for (double f : fractions) {
    t = lo + f * (hi - lo);
    try {
      count = winding_count(draw, t);
      return true;
    } catch (const CensusFailure&) {
    }
  }
  return false;
}

void locate_moduli(const CoefficientDraw& draw, double lo, double hi, int nlo, int nhi, std::vector<double>& out,
                   int depth) {
  if (nhi <= nlo) return;
  double mid = 0.5 * (lo + hi);
  int nm = 0;
  if (hi - lo <= 1e-9 * hi || !count_inside(draw, lo, hi, {0.5, 0.45, 0.55, 0.3, 0.7}, mid, nm)) {
    // Interval at tolerance, or every probe circle touches a zero: the moduli are pinned here.
    for (int i = nlo; i < nhi; ++i) out.push_back(0.5 * (lo + hi));
    return;
  }
  if (depth > 200) throw CensusFailure("zero radii could not be refined");
  nm = std::clamp(nm, nlo, nhi);
  locate_moduli(draw, lo, mid, nlo, nm, out, depth + 1);
  locate_moduli(draw, mid, hi, nm, nhi, out, depth + 1);
}

}  // namespace

const char* to_string(CensusVerdict v) {
  switch (v) {
    case CensusVerdict::hole: return "hole";
    case CensusVerdict::zero_found: return "zero_found";
    case CensusVerdict::uncertain: return "uncertain";
  }
  return "unknown";
}

double default_grid_step(int degree) { return std::min(0.05, 1.0 / (4.0 * std::sqrt(std::max(degree, 1)))); }

CensusResult real_zero_count(const CoefficientDraw& draw, const BoxSpec& box) {
  check_box(draw, box);
  return draw.m() == 1 ? line_census(draw, box, false) : cube_census(draw, box);
}

CensusResult real_hole_census(const CoefficientDraw& draw, const BoxSpec& box) {
  check_box(draw, box);
  return draw.m() == 1 ? line_census(draw, box, true) : cube_census(draw, box);
}

CensusVerdict real_hole_indicator(const CoefficientDraw& draw, const BoxSpec& box) {
  return real_hole_census(draw, box).verdict;
}

WindingResult winding_count_detailed(const CoefficientDraw& draw, double r) {
  if (!draw.indices) throw InvalidArgument("coefficient draw has no index table");
  if (draw.m() != 1) throw InvalidArgument("winding count is implemented for m = 1");
  if (!(r > 0.0)) throw InvalidArgument("winding radius must be positive");
  if (r > draw.plan.radius * (1.0 + 1e-6)) throw InvalidArgument("winding radius exceeds the certified plan radius");
  require_plain_range(draw, r * (1.0 + 1e-8));
  WindingResult res;
  double rr = r;
  for (int attempt = 0; attempt <= 5; ++attempt) {
    if (try_winding(draw, rr, res.count, res.steps)) {
      res.radius_used = rr;
      res.perturbations = attempt;
      return res;
    }
    rr += 1e-9 * r;
  }
  throw CensusFailure("zero pinned to the circle |z| = " + std::to_string(r) + " after 5 perturbations");
}

int winding_count(const CoefficientDraw& draw, double r) { return winding_count_detailed(draw, r).count; }

std::vector<double> zero_moduli(const CoefficientDraw& draw, double r, int shells) {
  if (shells < 1) throw InvalidArgument("shells must be >= 1");
  const int k0 = std::max(origin_order(draw), 0);
  std::vector<double> out(static_cast<std::size_t>(k0), 0.0);
  if (origin_order(draw) < 0) return out;
  // geometric shells r 2^{i - shells}, i = 1..shells, below them the disc of radius r 2^{1-shells}
  double lo = 0.0;
  int nlo = k0;
  for (int i = 1; i <= shells; ++i) {
    double hi = r * std::ldexp(1.0, i - shells);
    int nhi = 0;
    if (i == shells) {
      nhi = winding_count(draw, hi);
    } else if (!count_inside(draw, lo, hi, {1.0, 0.99, 0.9, 0.75}, hi, nhi)) {
      throw CensusFailure("no zero-free circle near radius " + std::to_string(hi));
    }
    nhi = std::max(nhi, nlo);
    locate_moduli(draw, lo, hi, nlo, nhi, out, 0);
    lo = hi;
    nlo = nhi;
  }
  std::sort(out.begin(), out.end());
  return out;
}

JensenAudit jensen_audit(const CoefficientDraw& draw, double r, int shells) {
  if (draw.m() != 1) throw InvalidArgument("Jensen audit is implemented for m = 1");
  if (!(r > 0.0)) throw InvalidArgument("radius must be positive");
  JensenAudit j;
  j.r = r;
  const int k0 = origin_order(draw);
  if (k0 < 0) return j;
  j.origin_order = k0;

  const auto moduli = zero_moduli(draw, r, shells);
  j.zeros = static_cast<int>(moduli.size());
  double zs = k0 * std::log(r);
  for (double rho : moduli) {
    if (rho > 0.0) zs += std::log(r / rho);
  }
  j.zero_side = zs;

  int n = default_sphere_nodes(1, r);
  double prev = sphere_average_log(draw, r, n).value;
  for (; n < (1 << 18);) {
    n *= 2;
    const double cur = sphere_average_log(draw, r, n).value;
    const bool done = std::abs(cur - prev) < 1e-9;
    prev = cur;
    if (done) break;
  }
  j.nodes = n;
  const double log_ck = std::log(std::abs(draw.values[static_cast<std::size_t>(k0)])) - 0.5 * std::lgamma(k0 + 1.0);
  j.average_side = prev - log_ck;
  j.residual = std::abs(j.zero_side - j.average_side);
  return j;
}

}  // namespace bfholes
