#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bfholes/census.hpp"
#include "bfholes/comparison.hpp"
#include "bfholes/errors.hpp"
#include "bfholes/experiment.hpp"
#include "bfholes/field.hpp"
#include "bfholes/multiindex.hpp"
#include "bfholes/rare_events.hpp"
#include "bfholes/report.hpp"
#include "bfholes/rng.hpp"

namespace py = pybind11;
using namespace bfholes;

namespace {

py::object cell_to_py(const Cell& c) {
  return std::visit([](const auto& v) -> py::object { return py::cast(v); }, c);
}

py::dict table_to_dict(const Table& t) {
  py::dict out;
  out["columns"] = t.columns;
  py::list rows;
  for (const auto& row : t.rows) {
    py::list r;
    for (const auto& c : row) r.append(cell_to_py(c));
    rows.append(r);
  }
  out["rows"] = rows;
  return out;
}

TruncationPlan explicit_plan(int m, double radius, std::size_t n_values) {
  PlanOptions o;
  o.omega_floor = false;
  TruncationPlan plan = truncation_plan(m, radius, 1e-9, o);
  while (plan.coefficient_count() < n_values) {
    o.min_degree = plan.degree + 1;
    plan = truncation_plan(m, radius, 1e-9, o);
  }
  return plan;
}

CoefficientDraw seeded_draw(int m, double radius, std::uint64_t seed, std::uint64_t trial) {
  PlanOptions o;
  o.omega_floor = false;
  return draw_coefficients(NormalStream({seed, trial, StreamRole::coefficients}), truncation_plan(m, radius, 1e-9, o));
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Real random Bargmann-Fock functions: sampling, zero census and hole probabilities";
  mod.attr("__version__") = BFHOLES_VERSION;

  static py::exception<Error> base(mod, "BfholesError");
  static py::exception<ConfigError> config_error(mod, "ConfigError", base.ptr());
  static py::exception<ResourceCapExceeded> resource(mod, "ResourceCapExceeded", base.ptr());
  static py::exception<InsufficientData> insufficient(mod, "InsufficientData", base.ptr());
  static py::exception<CensusFailure> census_failure(mod, "CensusFailure", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      py::set_error(config_error, e.what());
    } catch (const ResourceCapExceeded& e) {
      py::set_error(resource, e.what());
    } catch (const InsufficientData& e) {
      py::set_error(insufficient, e.what());
    } catch (const CensusFailure& e) {
      py::set_error(census_failure, e.what());
    } catch (const InvalidArgument& e) {
      py::set_error(PyExc_ValueError, e.what());
    } catch (const Error& e) {
      py::set_error(base, e.what());
    }
  });

  mod.def("config_keys", &config_keys);
  mod.def(
      "run_experiment",
      [](const std::string& config_json) {
        const auto res = run_experiment(parse_config(config_json));
        py::dict out = table_to_dict(res.table);
        out["config_hash"] = res.config_hash;
        out["written"] = res.written;
        return out;
      },
      py::arg("config_json"), "Run an experiment from its JSON config; returns columns, rows and config_hash.");

  mod.def(
      "philox4x32_10",
      [](std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key) { return philox4x32_10(counter, key); },
      py::arg("counter"), py::arg("key"));

  mod.def(
      "draw",
      [](int m, double radius, std::uint64_t seed, std::uint64_t trial) {
        const auto d = seeded_draw(m, radius, seed, trial);
        py::dict out;
        out["values"] = d.values;
        out["degree"] = d.degree();
        out["tail_bound"] = d.plan.tail_bound;
        return out;
      },
      py::arg("m"), py::arg("radius"), py::arg("seed"), py::arg("trial") = 0,
      "Coefficients alpha_j in canonical order for the stream (seed, trial).");

  mod.def(
      "evaluate_real",
      [](const std::vector<double>& values, const std::vector<double>& x) {
        const int m = static_cast<int>(x.size());
        double radius = 0.0;
        for (double v : x) radius += v * v;
        const auto d = make_draw(explicit_plan(m, std::max(1.0, std::sqrt(radius)), values.size()), values);
        return evaluate_real(d, x);
      },
      py::arg("values"), py::arg("x"), "psi(x) for explicit coefficients (missing ones are zero).");

  mod.def(
      "real_zeros",
      [](const std::vector<double>& values, double r) {
        const auto d = make_draw(explicit_plan(1, r, values.size()), values);
        return real_zero_count(d, BoxSpec::interval(r)).zeros;
      },
      py::arg("values"), py::arg("r"), "Certified real zeros in [-r, r] (m = 1).");

  mod.def(
      "zero_count",
      [](std::uint64_t seed, std::uint64_t trial, double r) {
        return real_zero_count(seeded_draw(1, r, seed, trial), BoxSpec::interval(r)).count;
      },
      py::arg("seed"), py::arg("trial"), py::arg("r"));

  mod.def(
      "winding_count",
      [](const std::vector<double>& values, double r) {
        return winding_count(make_draw(explicit_plan(1, r, values.size()), values), r);
      },
      py::arg("values"), py::arg("r"), "Number of complex zeros in the disc of radius r (m = 1).");

  mod.def(
      "jensen_residual",
      [](std::uint64_t seed, std::uint64_t trial, double r) { return jensen_audit(seeded_draw(1, r, seed, trial), r).residual; },
      py::arg("seed"), py::arg("trial"), py::arg("r"));

  mod.def(
      "estimate_hole",
      [](const std::string& kind, int m, double r, std::uint64_t trials, std::uint64_t seed) {
        EventSpec e;
        e.kind = event_kind_from_string(kind);
        e.m = m;
        e.r = r;
        const auto est = estimate_event_probability(e, trials, seed);
        py::dict out;
        out["p_hat"] = est.p_hat;
        out["ci_low"] = est.ci_low;
        out["ci_high"] = est.ci_high;
        out["trials"] = est.trials;
        out["uncertain"] = est.uncertain;
        return out;
      },
      py::arg("kind"), py::arg("m"), py::arg("r"), py::arg("trials"), py::arg("seed") = 0,
      "Plain Monte Carlo estimate of a hole probability.");

  mod.def(
      "li_shao_bounds",
      [](int m, double r, double spacing) {
        const auto b = li_shao_bounds(build_lattice(m, r, spacing));
        return py::make_tuple(b.n, b.lower, b.upper);
      },
      py::arg("m"), py::arg("r"), py::arg("spacing") = 2.0, "(n, log lower, log upper) for the orthant probability.");

  mod.def("bivariate_orthant", &bivariate_orthant, py::arg("rho"));
  mod.def("omega_log_probability", [](const std::string& variant, int m, double r) {
    return omega_log_probability(
        OmegaSpec::proof_default(variant == "complex" ? OmegaVariant::complex : OmegaVariant::real, m, r));
  }, py::arg("variant"), py::arg("m"), py::arg("r"));
  mod.def("e_m_constant", &e_m_constant, py::arg("m"));

  mod.def(
      "fit_decay_exponent",
      [](const std::vector<std::tuple<double, double, double, double, std::uint64_t>>& points, double threshold) {
        std::vector<FitPoint> pts;
        for (const auto& [r, p, lo, hi, n] : points) pts.push_back({r, p, lo, hi, n});
        const auto f = fit_decay_exponent(pts, threshold);
        py::dict out;
        out["slope"] = f.slope;
        out["intercept"] = f.intercept;
        out["slope_se"] = f.slope_se;
        out["slope_ci"] = f.slope_ci;
        out["radii"] = f.radii;
        return out;
      },
      py::arg("points"), py::arg("threshold") = 1.0, "Points are (r, p_hat, ci_low, ci_high, trials).");
}
