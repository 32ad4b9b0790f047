#include "bfholes/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <json.hpp>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "bfholes/errors.hpp"

namespace bfholes {

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::ordered_json cell_json(const Cell& c) {
  return std::visit([](const auto& v) { return nlohmann::ordered_json(v); }, c);
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open output file", path);
  f << data;
  f.flush();
  if (!f) throw IoError("write failed", path);
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw InvalidArgument("row width does not match the table schema");
  rows.push_back(std::move(row));
}

const char* to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

Format format_from_string(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw InvalidArgument("unknown format '" + s + "' (expected csv or json)");
}

std::string format_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(double d) const {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", d);
      return buf;
    }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(std::uint64_t v) const { return std::to_string(v); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  };
  return std::visit(Visitor{}, c);
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + csv_escape(t.columns[i]);
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_escape(format_cell(row[i]));
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& t) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = cell_json(row[i]);
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

ParsedCsv parse_csv(const std::string& text) {
  ParsedCsv out;
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> rec;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      rec.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        rec.push_back(std::move(field));
        records.push_back(std::move(rec));
      }
      rec.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw InvalidArgument("unterminated quote in CSV");
  if (any || !field.empty()) {
    rec.push_back(std::move(field));
    records.push_back(std::move(rec));
  }
  if (records.empty()) return out;
  out.columns = std::move(records.front());
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() != out.columns.size()) throw InvalidArgument("CSV row width does not match the header");
    out.rows.push_back(std::move(records[i]));
  }
  return out;
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void emit_report(const Table& t, Format format, const std::string& path, const ReportMeta& meta) {
  write_file(path, format == Format::csv ? to_csv(t) : to_json(t));
  nlohmann::ordered_json m;
  m["version"] = BFHOLES_VERSION;
  m["experiment"] = meta.experiment;
  m["config_hash"] = meta.config_hash;
  m["format"] = to_string(format);
  m["rows"] = t.rows.size();
  m["wall_clock_seconds"] = meta.wall_clock_seconds;
  write_file(path + ".meta.json", m.dump(2) + "\n");
}

std::vector<std::string> estimate_columns() {
  return {"experiment", "kind",    "m",           "r",           "spacing_or_delta", "trials",     "p_hat",
          "ci_low",     "ci_high", "sampler",     "seed_master", "seed_trial_base",  "plan_degree", "uncertain_fraction"};
}

std::vector<Cell> estimate_row(const std::string& experiment, const std::string& kind, int m, double r,
                               double spacing_or_delta, const RareEventEstimate& e) {
  return {experiment,
          kind,
          static_cast<std::int64_t>(m),
          r,
          spacing_or_delta,
          static_cast<std::uint64_t>(e.trials),
          e.p_hat,
          e.ci_low,
          e.ci_high,
          e.sampler.describe(),
          static_cast<std::uint64_t>(e.seed_master),
          static_cast<std::uint64_t>(e.seed_trial_base),
          static_cast<std::int64_t>(e.plan_degree),
          e.uncertain_fraction};
}

void write_draw(std::ostream& out, const CoefficientDraw& draw) {
  out << "# bfholes-draw 1\n";
  out << "# m " << draw.m() << "\n";
  out << "# degree " << draw.degree() << "\n";
  out << "# radius " << format_cell(draw.plan.radius) << "\n";
  out << "# master_seed " << draw.stream.master_seed << "\n";
  out << "# trial_id " << draw.stream.trial_id << "\n";
  out << "# role " << to_string(draw.stream.role) << "\n";
  out << "# log_weight " << format_cell(draw.log_weight) << "\n";
  out << "# tail_bound " << format_cell(draw.plan.tail_bound) << "\n";
  out << "# tail_bound_d1 " << format_cell(draw.plan.tail_bound_d1) << "\n";
  out << "# tail_bound_d2 " << format_cell(draw.plan.tail_bound_d2) << "\n";
  out << "# envelope_confidence " << format_cell(draw.plan.envelope_confidence) << "\n";
  for (double v : draw.values) out << format_cell(v) << "\n";
}

CoefficientDraw read_draw(std::istream& in) {
  int m = 0, degree = -1;
  double radius = 0.0, log_weight = 0.0;
  RngStreamSpec spec;
  std::vector<double> values;
  std::map<std::string, double> stored = {
      {"tail_bound", -1.0}, {"tail_bound_d1", -1.0}, {"tail_bound_d2", -1.0}, {"envelope_confidence", -1.0}};
  std::string line;
  bool magic = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string key;
      ss >> key;
      if (key == "bfholes-draw") {
        magic = true;
      } else if (key == "m") {
        ss >> m;
      } else if (key == "degree") {
        ss >> degree;
      } else if (key == "radius") {
        std::string v;
        ss >> v;
        radius = std::stod(v);
      } else if (key == "master_seed") {
        ss >> spec.master_seed;
      } else if (key == "trial_id") {
        ss >> spec.trial_id;
      } else if (key == "role") {
        std::string v;
        ss >> v;
        if (v == "coefficients") spec.role = StreamRole::coefficients;
        else if (v == "quadrature") spec.role = StreamRole::quadrature;
        else if (v == "oracle") spec.role = StreamRole::oracle;
        else throw InvalidArgument("unknown stream role '" + v + "'");
      } else if (key == "log_weight") {
        std::string v;
        ss >> v;
        log_weight = std::stod(v);
      } else if (stored.count(key)) {
        std::string v;
        ss >> v;
        stored[key] = std::stod(v);
      }
      continue;
    }
    values.push_back(std::stod(line));
  }
  if (!magic || m < 1 || degree < 0) throw InvalidArgument("not a bfholes draw file");
  TruncationPlan plan;
  plan.m = m;
  plan.degree = degree;
  plan.radius = radius;
  // Files without the stored bounds get them recomputed from (m, radius, degree).
  auto pick = [&](const char* key, auto recompute) { return stored[key] >= 0.0 ? stored[key] : recompute(); };
  if (radius > 0.0) {
    plan.tail_bound = pick("tail_bound", [&] { return envelope_tail_bound(m, radius, degree, 0); });
    plan.tail_bound_d1 = pick("tail_bound_d1", [&] { return envelope_tail_bound(m, radius, degree, 1); });
    plan.tail_bound_d2 = pick("tail_bound_d2", [&] { return envelope_tail_bound(m, radius, degree, 2); });
  }
  plan.envelope_confidence = pick("envelope_confidence", [&] { return envelope_confidence(m, degree); });
  if (values.size() != count_up_to_degree(m, degree)) throw InvalidArgument("draw file has the wrong number of coefficients");
  CoefficientDraw d = make_draw(plan, std::move(values));
  d.stream = spec;
  d.log_weight = log_weight;
  return d;
}

double clopper_pearson_zero_upper(std::uint64_t trials, double alpha) {
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  return 1.0 - std::pow(0.5 * alpha, 1.0 / static_cast<double>(trials));
}

ExponentFit fit_decay_exponent(const std::vector<FitPoint>& points, double threshold) {
  ExponentFit fit;
  std::vector<double> xs, ys, sig;
  for (const auto& p : points) {
    if (p.p_hat == 0.0 && p.trials > 0) {
      fit.zero_hit_bounds.emplace_back(p.r, clopper_pearson_zero_upper(p.trials));
      continue;
    }
    const double width = p.ci_high - p.ci_low;
    if (!(p.r > 0.0) || !(p.p_hat > 0.0 && p.p_hat < 1.0) || width / p.p_hat > threshold) {
      fit.rejected_radii.push_back(p.r);
      continue;
    }
    const double lp = std::log(p.p_hat);
    xs.push_back(std::log(p.r));
    ys.push_back(std::log(-lp));
    sig.push_back(width / (2.0 * 1.959963984540054) / std::abs(p.p_hat * lp));
    fit.radii.push_back(p.r);
  }
  if (xs.size() < 3) throw InsufficientData("fit needs at least 3 usable points, got " + std::to_string(xs.size()));
  fit.log_neg_log_p = ys;
  fit.sigma = sig;

  const bool weighted = std::all_of(sig.begin(), sig.end(), [](double s) { return s > 0.0; });
  std::vector<double> w(xs.size(), 1.0);
  if (weighted) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 / (sig[i] * sig[i]);
  }
  const double sw = std::accumulate(w.begin(), w.end(), 0.0);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += w[i] * xs[i];
    my += w[i] * ys[i];
  }
  mx /= sw;
  my /= sw;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += w[i] * (xs[i] - mx) * (xs[i] - mx);
    sxy += w[i] * (xs[i] - mx) * (ys[i] - my);
    syy += w[i] * (ys[i] - my) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw InsufficientData("fit needs at least two distinct radii");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - fit.intercept - fit.slope * xs[i];
    ss_res += w[i] * e * e;
  }
  fit.r2_fit = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  if (weighted) {
    // Inflate by the reduced chi-square when the scatter exceeds the error bars.
    const double dof = static_cast<double>(xs.size() - 2);
    const double birge = dof > 0.0 ? std::max(1.0, ss_res / dof) : 1.0;
    fit.slope_se = std::sqrt(birge / sxx);
  } else {
    fit.slope_se = std::sqrt(ss_res / static_cast<double>(xs.size() - 2) / sxx);
  }
  fit.slope_ci = {fit.slope - 1.959963984540054 * fit.slope_se, fit.slope + 1.959963984540054 * fit.slope_se};
  return fit;
}

}  // namespace bfholes
