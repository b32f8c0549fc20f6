#include "relaysec/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <initializer_list>
#include <json.hpp>
#include <limits>
#include <ostream>
#include <sstream>
#include <string_view>

#include "relaysec/errors.hpp"

namespace relaysec::cli {
namespace {

using json = nlohmann::json;

constexpr double kFallbackDelta = 0.05;
constexpr double kNoiseFraction = 1e-6;

[[noreturn]] void config_error(const std::string& message) { throw ConfigurationError(message); }

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                    const std::string& where) {
  if (!obj.is_object()) {
    config_error(where + " must be an object");
  }
  for (const auto& item : obj.items()) {
    bool known = false;
    for (auto a : allowed) {
      known = known || item.key() == a;
    }
    if (!known) {
      config_error("unknown key '" + item.key() + "' in " + where);
    }
  }
}

double read_double(const json& obj, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_number()) {
    config_error(std::string("'") + key + "' must be a number");
  }
  return v.get<double>();
}

std::uint64_t read_count(const json& obj, const char* key) {
  const auto& v = obj.at(key);
  if (v.is_number_unsigned()) {
    return v.get<std::uint64_t>();
  }
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0.0 && d == std::floor(d) && d < 1.8e19) {
      return static_cast<std::uint64_t>(d);
    }
  }
  config_error(std::string("'") + key + "' must be a nonnegative integer");
}

double read_radius(const json& v) {
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") {
      return std::numeric_limits<double>::infinity();
    }
    config_error("'r' must be a number or \"inf\"");
  }
  if (!v.is_number()) {
    config_error("'r' must be a number or \"inf\"");
  }
  return v.get<double>();
}

json radius_json(double r) {
  if (std::isinf(r)) {
    return "inf";
  }
  return r;
}

PathLossCase read_case(const json& v) {
  if (!v.is_string()) {
    config_error("'case' must be \"equal\" or \"general\"");
  }
  const auto s = v.get<std::string>();
  if (s == "equal") {
    return PathLossCase::EqualPathLoss;
  }
  if (s == "general") {
    return PathLossCase::DistanceDependent;
  }
  config_error("'case' must be \"equal\" or \"general\" (got \"" + s + "\")");
}

std::string case_name(PathLossCase c) {
  return c == PathLossCase::EqualPathLoss ? "equal" : "general";
}

RegionModel read_region(const json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "pi_r2") {
      return RegionModel::pi_r2();
    }
    if (s == "exact") {
      return RegionModel::exact_overlap();
    }
    config_error("'p_region' must be \"pi_r2\", \"exact\" or a probability");
  }
  if (!v.is_number()) {
    config_error("'p_region' must be \"pi_r2\", \"exact\" or a probability");
  }
  const double p = v.get<double>();
  if (!(p >= 0.0 && p <= 1.0)) {
    config_error("'p_region' override must lie in [0, 1]");
  }
  return RegionModel::override_with(p);
}

json region_json(const RegionModel& region) {
  switch (region.kind) {
    case RegionModel::Kind::Override:
      return region.value;
    case RegionModel::Kind::ExactOverlap:
      return "exact";
    case RegionModel::Kind::PiR2:
      break;
  }
  return "pi_r2";
}

SweepSpec read_sweep(const json& s) {
  reject_unknown(s, {"parameter", "from", "to", "steps", "scale", "estimates"}, "sweep");
  SweepSpec spec;
  if (!s.contains("parameter") || !s.at("parameter").is_string()) {
    config_error("missing required field: sweep.parameter");
  }
  spec.parameter = s.at("parameter").get<std::string>();
  bool known = false;
  for (const auto& p : sweep_parameters()) {
    known = known || p == spec.parameter;
  }
  if (!known) {
    config_error("sweep.parameter must be one of r, k, tau, n, m, gamma_r, gamma_e (got '" +
                 spec.parameter + "')");
  }
  for (const char* key : {"from", "to"}) {
    if (!s.contains(key)) {
      config_error(std::string("missing required field: sweep.") + key);
    }
  }
  spec.from = read_double(s, "from");
  spec.to = read_double(s, "to");
  if (!std::isfinite(spec.from) || !std::isfinite(spec.to)) {
    config_error("sweep bounds must be finite");
  }
  if (s.contains("steps")) {
    const auto steps = read_count(s, "steps");
    if (steps < 1 || steps > 1000000) {
      config_error("sweep.steps must be at least 1");
    }
    spec.steps = static_cast<int>(steps);
  }
  if (s.contains("scale")) {
    const auto& v = s.at("scale");
    const std::string scale = v.is_string() ? v.get<std::string>() : "";
    if (scale == "linear") {
      spec.scale = SweepSpec::Scale::Linear;
    } else if (scale == "log") {
      spec.scale = SweepSpec::Scale::Log;
    } else {
      config_error("sweep.scale must be \"linear\" or \"log\"");
    }
  }
  if (spec.scale == SweepSpec::Scale::Log && !(spec.from > 0.0 && spec.to > 0.0)) {
    config_error("a log-scale sweep needs positive bounds");
  }
  if (s.contains("estimates")) {
    if (!s.at("estimates").is_boolean()) {
      config_error("sweep.estimates must be true or false");
    }
    spec.estimates = s.at("estimates").get<bool>();
  }
  return spec;
}

RunConfig parse_config_json(const json& j) {
  reject_unknown(j, {"params", "requirements", "run", "bounds", "sweep", "out"}, "config");
  RunConfig cfg;
  auto& p = cfg.params;

  bool delta_given = false;
  bool n0_given = false;
  if (j.contains("params")) {
    const auto& jp = j.at("params");
    reject_unknown(jp,
                   {"case", "n", "m", "k", "r", "tau", "gamma_r", "gamma_e", "alpha", "d0",
                    "delta", "es", "n0"},
                   "params");
    if (jp.contains("case")) p.path_case = read_case(jp.at("case"));
    if (jp.contains("n")) p.n = read_count(jp, "n");
    if (jp.contains("m")) p.m = read_count(jp, "m");
    if (jp.contains("k")) p.k = read_count(jp, "k");
    if (jp.contains("r")) p.r = read_radius(jp.at("r"));
    if (jp.contains("tau")) p.tau = read_double(jp, "tau");
    if (jp.contains("gamma_r")) p.gamma_r = read_double(jp, "gamma_r");
    if (jp.contains("gamma_e")) p.gamma_e = read_double(jp, "gamma_e");
    if (jp.contains("alpha")) p.alpha = read_double(jp, "alpha");
    if (jp.contains("d0")) p.d0 = read_double(jp, "d0");
    if (jp.contains("es")) p.es = read_double(jp, "es");
    if (jp.contains("delta")) {
      p.delta = read_double(jp, "delta");
      delta_given = true;
    }
    if (jp.contains("n0")) {
      p.n0 = read_double(jp, "n0");
      n0_given = true;
    }
  }
  if (!delta_given) {
    p.delta = p.d0 > 0.0 ? p.d0 : kFallbackDelta;
  }
  if (!n0_given) {
    p.n0 = kNoiseFraction * p.es;
  }

  if (j.contains("requirements")) {
    const auto& jr = j.at("requirements");
    reject_unknown(jr, {"eps_t", "eps_s"}, "requirements");
    if (jr.contains("eps_t")) cfg.requirements.eps_t = read_double(jr, "eps_t");
    if (jr.contains("eps_s")) cfg.requirements.eps_s = read_double(jr, "eps_s");
  }
  for (double eps : {cfg.requirements.eps_t, cfg.requirements.eps_s}) {
    if (!(eps > 0.0 && eps <= 1.0)) {
      config_error("requirements eps_t and eps_s must lie in (0, 1]");
    }
  }

  if (j.contains("run")) {
    const auto& jr = j.at("run");
    reject_unknown(jr, {"trials", "seed", "coherence"}, "run");
    if (jr.contains("trials")) cfg.trials = read_count(jr, "trials");
    if (jr.contains("seed")) cfg.seed = read_count(jr, "seed");
    if (jr.contains("coherence")) cfg.coherence = read_count(jr, "coherence");
  }
  if (cfg.coherence < 1) {
    config_error("run.coherence must be at least 1");
  }

  if (j.contains("bounds")) {
    const auto& jb = j.at("bounds");
    reject_unknown(jb, {"p_region"}, "bounds");
    if (jb.contains("p_region")) cfg.region = read_region(jb.at("p_region"));
  }
  if (j.contains("sweep") && !j.at("sweep").is_null()) {
    cfg.sweep = read_sweep(j.at("sweep"));
  }
  if (j.contains("out")) {
    if (!j.at("out").is_string()) {
      config_error("'out' must be a path string");
    }
    cfg.out = j.at("out").get<std::string>();
  }

  try {
    p.validate();
  } catch (const ParameterError& e) {
    config_error(e.what());
  }
  return cfg;
}

json config_to_json(const RunConfig& cfg) {
  const auto& p = cfg.params;
  json j;
  j["params"] = {{"case", case_name(p.path_case)},
                 {"n", p.n},
                 {"m", p.m},
                 {"k", p.k},
                 {"r", radius_json(p.r)},
                 {"tau", p.tau},
                 {"gamma_r", p.gamma_r},
                 {"gamma_e", p.gamma_e},
                 {"alpha", p.alpha},
                 {"d0", p.d0},
                 {"delta", p.delta},
                 {"es", p.es},
                 {"n0", p.n0}};
  j["requirements"] = {{"eps_t", cfg.requirements.eps_t}, {"eps_s", cfg.requirements.eps_s}};
  json run = {{"coherence", cfg.coherence}};
  if (cfg.trials) run["trials"] = *cfg.trials;
  if (cfg.seed) run["seed"] = *cfg.seed;
  j["run"] = run;
  j["bounds"] = {{"p_region", region_json(cfg.region)}};
  if (cfg.sweep) {
    const auto& s = *cfg.sweep;
    j["sweep"] = {{"parameter", s.parameter},
                  {"from", s.from},
                  {"to", s.to},
                  {"steps", s.steps},
                  {"scale", s.scale == SweepSpec::Scale::Log ? "log" : "linear"},
                  {"estimates", s.estimates}};
  }
  if (!cfg.out.empty()) {
    j["out"] = cfg.out;
  }
  return j;
}

// ---- CSV cells ----

std::string num(double v) { return fmt::format("{}", v); }

template <typename T>
std::string opt_num(const std::optional<T>& v) {
  return v ? fmt::format("{}", *v) : std::string{};
}

bool has_issue(const BoundReport& b, std::string_view key) {
  for (const auto& issue : b.issues) {
    if (issue.rfind(key, 0) == 0 && issue.size() > key.size() && issue[key.size()] == ':') {
      return true;
    }
  }
  return false;
}

std::string window_cell(const BoundReport& b, const std::optional<double>& v, std::string_view key) {
  if (has_issue(b, key)) return "error";
  return v ? num(*v) : "infeasible";
}

struct CellSet {
  std::string bound_t, bound_s, tau_min, tau_max, max_m, feasible;
};

CellSet bound_cells(const BoundReport* b) {
  CellSet c;
  if (b == nullptr) {
    return c;
  }
  c.bound_t = has_issue(*b, "bound_t") ? "error" : opt_num(b->bound_t);
  c.bound_s = has_issue(*b, "bound_s") ? "error"
              : b->bound_s          ? num(b->bound_s->effective())
                                    : "";
  c.tau_min = window_cell(*b, b->window.tau_min, "tau_min");
  c.tau_max = window_cell(*b, b->window.tau_max, "tau_max");
  if (has_issue(*b, "max_m")) {
    c.max_m = "error";
  } else {
    c.max_m = b->max_m ? num(b->max_m->count) : "infeasible";
  }
  const bool window_error = has_issue(*b, "tau_min") || has_issue(*b, "tau_max");
  c.feasible = window_error ? "error" : (b->feasible() ? "true" : "false");
  return c;
}

// ---- Overrides from flags ----

struct Overrides {
  std::optional<std::string> config_path;
  std::optional<std::string> case_name;
  std::optional<std::uint64_t> n, m, k;
  std::optional<std::string> r;
  std::optional<double> tau, gamma_r, gamma_e, alpha, d0, delta, es, n0, eps_t, eps_s;
  std::optional<std::uint64_t> trials, seed, coherence;
  std::optional<std::string> p_region;
  std::optional<std::string> out;
  std::optional<std::string> sweep_param, sweep_scale;
  std::optional<double> sweep_from, sweep_to;
  std::optional<std::uint64_t> sweep_steps;
  bool no_estimates = false;
  unsigned workers = 1;
  bool report = false;
};

json parse_radius_flag(const std::string& s) {
  if (s == "inf") {
    return "inf";
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) {
      throw std::invalid_argument(s);
    }
    return v;
  } catch (const std::exception&) {
    config_error("--r must be a number or inf (got '" + s + "')");
  }
}

json parse_region_flag(const std::string& s) {
  if (s == "pi_r2" || s == "exact") {
    return s;
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) {
      throw std::invalid_argument(s);
    }
    return v;
  } catch (const std::exception&) {
    config_error("--p-region must be pi_r2, exact or a probability (got '" + s + "')");
  }
}

json merged_config(const Overrides& ov) {
  json j = json::object();
  if (ov.config_path) {
    std::ifstream in(*ov.config_path);
    if (!in) {
      config_error("cannot read config file " + *ov.config_path);
    }
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      config_error("malformed config file: " + std::string(e.what()));
    }
    if (!j.is_object()) {
      config_error("config file must hold a JSON object");
    }
  }
  auto set = [&](const char* section, const char* key, const json& v) {
    if (!j.contains(section) || !j[section].is_object()) {
      j[section] = json::object();
    }
    j[section][key] = v;
  };
  if (ov.case_name) set("params", "case", *ov.case_name);
  if (ov.n) set("params", "n", *ov.n);
  if (ov.m) set("params", "m", *ov.m);
  if (ov.k) set("params", "k", *ov.k);
  if (ov.r) set("params", "r", parse_radius_flag(*ov.r));
  if (ov.tau) set("params", "tau", *ov.tau);
  if (ov.gamma_r) set("params", "gamma_r", *ov.gamma_r);
  if (ov.gamma_e) set("params", "gamma_e", *ov.gamma_e);
  if (ov.alpha) set("params", "alpha", *ov.alpha);
  if (ov.d0) set("params", "d0", *ov.d0);
  if (ov.delta) set("params", "delta", *ov.delta);
  if (ov.es) set("params", "es", *ov.es);
  if (ov.n0) set("params", "n0", *ov.n0);
  if (ov.eps_t) set("requirements", "eps_t", *ov.eps_t);
  if (ov.eps_s) set("requirements", "eps_s", *ov.eps_s);
  if (ov.trials) set("run", "trials", *ov.trials);
  if (ov.seed) set("run", "seed", *ov.seed);
  if (ov.coherence) set("run", "coherence", *ov.coherence);
  if (ov.p_region) set("bounds", "p_region", parse_region_flag(*ov.p_region));
  if (ov.sweep_param) set("sweep", "parameter", *ov.sweep_param);
  if (ov.sweep_from) set("sweep", "from", *ov.sweep_from);
  if (ov.sweep_to) set("sweep", "to", *ov.sweep_to);
  if (ov.sweep_steps) set("sweep", "steps", *ov.sweep_steps);
  if (ov.sweep_scale) set("sweep", "scale", *ov.sweep_scale);
  if (ov.no_estimates) set("sweep", "estimates", false);
  if (ov.out) j["out"] = *ov.out;
  return j;
}

// ---- Human-readable report ----

void report_line(std::ostream& os, std::string_view label, const std::string& value) {
  os << fmt::format("  {:<22}{}\n", label, value);
}

std::string window_text(const std::optional<double>& v) { return v ? num(*v) : "infeasible"; }

void write_params(std::ostream& os, const ProtocolParams& p) {
  report_line(os, "case", case_name(p.path_case));
  report_line(os, "n / m / k", fmt::format("{} / {} / {}", p.n, p.m, p.k));
  report_line(os, "r", num(p.r));
  report_line(os, "tau", num(p.tau));
  report_line(os, "gamma_r / gamma_e", fmt::format("{} / {}", p.gamma_r, p.gamma_e));
  if (p.path_case == PathLossCase::DistanceDependent) {
    report_line(os, "alpha / d0 / delta", fmt::format("{} / {} / {}", p.alpha, p.d0, p.delta));
  }
}

void write_bounds(std::ostream& os, const BoundReport& b) {
  report_line(os, "eps_t / eps_s",
              fmt::format("{} / {}", b.requirements.eps_t, b.requirements.eps_s));
  if (b.bound_t) report_line(os, "transmission bound", num(*b.bound_t));
  if (b.bound_t_diagnostic) {
    const char* label = b.params.path_case == PathLossCase::EqualPathLoss
                            ? "  jammer-averaged"
                            : "  pre-relaxation";
    report_line(os, label, num(*b.bound_t_diagnostic));
  }
  if (b.bound_s) {
    report_line(os, "secrecy bound",
                b.bound_s->saturated
                    ? fmt::format("1 (saturated, raw {} with m*B = {})", b.bound_s->raw,
                                  b.bound_s->linear)
                    : num(b.bound_s->raw));
  }
  if (b.bound_s_diagnostic) report_line(os, "  jammer-averaged", num(*b.bound_s_diagnostic));
  report_line(os, "tau window", fmt::format("[{}, {}] {}", window_text(b.window.tau_min),
                                            window_text(b.window.tau_max),
                                            b.feasible() ? "feasible" : "infeasible"));
  if (b.max_m) {
    report_line(os, "max eavesdroppers", fmt::format("{} (bound {})", b.max_m->count, b.max_m->bound));
  } else {
    report_line(os, "max eavesdroppers", "infeasible");
  }
  for (const auto& issue : b.issues) {
    report_line(os, "not evaluated", issue);
  }
}

void write_estimate(std::ostream& os, const EstimateReport& e) {
  report_line(os, "trials / seed", fmt::format("{} / {}", e.trials, e.seed));
  report_line(os, "P_T estimate",
              fmt::format("{} [{}, {}]", e.p_t_hat, e.ci_t.lo, e.ci_t.hi));
  report_line(os, "P_S estimate",
              fmt::format("{} [{}, {}]", e.p_s_hat, e.ci_s.lo, e.ci_s.hi));
  report_line(os, "no-candidate rate", num(e.no_candidate_rate));
  report_line(os, "mean |R1| / |R2|", fmt::format("{:.4f} / {:.4f}", e.mean_jam1, e.mean_jam2));
  report_line(os, "jain / entropy", fmt::format("{} / {}", e.jain_index, e.norm_entropy));
  std::string hist;
  for (std::size_t i = 0; i < e.selection_histogram.size(); ++i) {
    hist += (i ? " " : "") + std::to_string(e.selection_histogram[i]);
  }
  report_line(os, "selections", hist);
}

void write_comparison(std::ostream& os, const ComparisonRow& row) {
  auto line = [&](std::string_view label, const MetricComparison& m) {
    if (!m.bound) return;
    report_line(os, label,
                fmt::format("{} (slack {}, 3SE {})", m.pass ? "within bound" : "EXCEEDS bound",
                            *m.slack, 3.0 * m.se));
  };
  line("transmission check", row.transmission);
  line("secrecy check", row.secrecy);
}

// ---- Commands ----

enum class Command { Bounds, TauRange, MaxEaves, Simulate, Sweep };

void require_run_fields(const RunConfig& cfg) {
  if (!cfg.trials) config_error("missing required field: trials");
  if (!cfg.seed) config_error("missing required field: seed");
  if (*cfg.trials < 1) config_error("trials must be at least 1");
}

void require_case_fields(const ProtocolParams& p) {
  if (p.path_case == PathLossCase::DistanceDependent && !std::isfinite(p.r)) {
    config_error("missing required field: r (the distance-dependent case needs a finite radius)");
  }
}

struct Output {
  std::string csv;
  std::string report;
};

std::string csv_prelude(const RunConfig& cfg) {
  return "# config: " + config_to_text(cfg) + "\n" + csv_header() + "\n";
}

Output run_single(const RunConfig& cfg, Command cmd, unsigned workers) {
  Output o;
  std::ostringstream report;
  const auto& p = cfg.params;
  const auto bounds = evaluate_bounds(p, cfg.requirements, cfg.region);
  report << "parameters\n";
  write_params(report, p);
  std::optional<EstimateReport> est;
  if (cmd == Command::Simulate) {
    est = estimate(p, *cfg.trials, *cfg.seed, {workers, cfg.coherence});
    report << "simulation\n";
    write_estimate(report, *est);
  }
  report << "bounds\n";
  write_bounds(report, bounds);
  if (est) {
    write_comparison(report, compare(*est, bounds));
  }
  o.csv = csv_prelude(cfg) +
          csv_row(p, cfg.trials, cfg.seed, est ? &*est : nullptr, &bounds) + "\n";
  o.report = report.str();
  return o;
}

Output run_sweep(const RunConfig& cfg, unsigned workers) {
  if (!cfg.sweep) {
    config_error("missing required field: sweep");
  }
  const auto& sweep = *cfg.sweep;
  if (sweep.estimates) {
    require_run_fields(cfg);
  }
  Output o;
  o.csv = csv_prelude(cfg);
  std::ostringstream report;
  report << fmt::format("sweep over {} ({} points)\n", sweep.parameter, sweep_values(sweep).size());
  report << fmt::format("  {:>12} {:>12} {:>12} {:>12} {:>12} {:>10} {:>8}\n", sweep.parameter,
                        "p_t_hat", "bound_t", "p_s_hat", "bound_s", "max_m", "jain");
  for (double v : sweep_values(sweep)) {
    const ProtocolParams p = with_parameter(cfg.params, sweep.parameter, v);
    bool params_ok = true;
    try {
      p.validate();
    } catch (const ParameterError&) {
      params_ok = false;
    }
    std::optional<BoundReport> bounds;
    std::optional<EstimateReport> est;
    bool est_error = false;
    if (params_ok) {
      bounds = evaluate_bounds(p, cfg.requirements, cfg.region);
      if (sweep.estimates) {
        est = estimate(p, *cfg.trials, *cfg.seed, {workers, cfg.coherence});
      }
    } else {
      bounds = BoundReport{};
      bounds->params = p;
      bounds->requirements = cfg.requirements;
      for (const char* key : {"bound_t", "bound_s", "tau_min", "tau_max", "max_m"}) {
        bounds->issues.push_back(std::string(key) + ": invalid parameters");
      }
      est_error = sweep.estimates;
    }
    o.csv += csv_row(p, cfg.trials, cfg.seed, est ? &*est : nullptr, &*bounds, est_error) + "\n";
    const auto cells = bound_cells(&*bounds);
    report << fmt::format("  {:>12} {:>12} {:>12} {:>12} {:>12} {:>10} {:>8}\n", num(v),
                          est ? fmt::format("{:.5f}", est->p_t_hat) : "-", cells.bound_t,
                          est ? fmt::format("{:.5f}", est->p_s_hat) : "-", cells.bound_s,
                          cells.max_m, est ? fmt::format("{:.4f}", est->jain_index) : "-");
  }
  o.report = report.str();
  return o;
}

int dispatch(Command cmd, const Overrides& ov, std::ostream& out) {
  const RunConfig cfg = parse_config_json(merged_config(ov));
  require_case_fields(cfg.params);
  Output result;
  if (cmd == Command::Sweep) {
    result = run_sweep(cfg, ov.workers);
  } else {
    if (cmd == Command::Simulate) {
      require_run_fields(cfg);
    }
    result = run_single(cfg, cmd, ov.workers);
  }
  if (!cfg.out.empty()) {
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) {
      config_error("cannot open output file " + cfg.out);
    }
    file << result.csv;
    if (ov.report) {
      out << result.report;
    }
  } else {
    out << (ov.report ? result.report : result.csv);
  }
  return kExitOk;
}

}  // namespace

const std::vector<std::string>& sweep_parameters() {
  static const std::vector<std::string> names{"r", "k", "tau", "n", "m", "gamma_r", "gamma_e"};
  return names;
}

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    config_error("malformed config: " + std::string(e.what()));
  }
  return parse_config_json(j);
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    config_error("cannot read config file " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string config_to_text(const RunConfig& config) { return config_to_json(config).dump(); }

std::vector<double> sweep_values(const SweepSpec& sweep) {
  std::vector<double> values;
  const int steps = std::max(sweep.steps, 1);
  for (int i = 0; i < steps; ++i) {
    double v = sweep.from;
    if (steps > 1) {
      const double t = static_cast<double>(i) / (steps - 1);
      v = sweep.scale == SweepSpec::Scale::Log
              ? std::exp(std::log(sweep.from) + t * (std::log(sweep.to) - std::log(sweep.from)))
              : sweep.from + t * (sweep.to - sweep.from);
      if (i == steps - 1) {
        v = sweep.to;
      }
    }
    const bool integral = sweep.parameter == "k" || sweep.parameter == "n" || sweep.parameter == "m";
    if (integral) {
      v = std::round(v);
      if (!values.empty() && values.back() == v) {
        continue;
      }
    }
    values.push_back(v);
  }
  return values;
}

ProtocolParams with_parameter(const ProtocolParams& base, const std::string& name, double value) {
  ProtocolParams p = base;
  auto count = [&](double v) {
    if (!(v >= 0.0)) {
      throw ParameterError(name + " must be nonnegative");
    }
    return static_cast<std::size_t>(std::llround(v));
  };
  if (name == "r") {
    p.r = value;
  } else if (name == "k") {
    p.k = count(value);
  } else if (name == "tau") {
    p.tau = value;
  } else if (name == "n") {
    p.n = count(value);
  } else if (name == "m") {
    p.m = count(value);
  } else if (name == "gamma_r") {
    p.gamma_r = value;
  } else if (name == "gamma_e") {
    p.gamma_e = value;
  } else {
    throw ParameterError("unknown sweep parameter " + name);
  }
  return p;
}

const std::string& csv_header() {
  static const std::string header =
      "case,n,m,k,r,tau,gamma_r,gamma_e,alpha,d0,delta,trials,seed,p_t_hat,p_t_lo,p_t_hi,"
      "p_s_hat,p_s_lo,p_s_hi,bound_t,bound_s,tau_min,tau_max,max_m,jain,entropy,"
      "no_candidate_rate,feasible";
  return header;
}

std::string csv_row(const ProtocolParams& p, std::optional<std::uint64_t> trials,
                    std::optional<std::uint64_t> seed, const EstimateReport* e,
                    const BoundReport* b, bool estimate_error) {
  std::vector<std::string> cells{case_name(p.path_case), num(p.n),       num(p.m),
                                 num(p.k),               num(p.r),       num(p.tau),
                                 num(p.gamma_r),         num(p.gamma_e), num(p.alpha),
                                 num(p.d0),              num(p.delta),   opt_num(trials),
                                 opt_num(seed)};
  if (e != nullptr) {
    auto defined = [](double v) { return std::isnan(v) ? std::string{} : num(v); };
    for (double v : {e->p_t_hat, e->ci_t.lo, e->ci_t.hi, e->p_s_hat, e->ci_s.lo, e->ci_s.hi}) {
      cells.push_back(num(v));
    }
    const auto c = bound_cells(b);
    cells.insert(cells.end(), {c.bound_t, c.bound_s, c.tau_min, c.tau_max, c.max_m});
    cells.push_back(defined(e->jain_index));
    cells.push_back(defined(e->norm_entropy));
    cells.push_back(num(e->no_candidate_rate));
    cells.push_back(c.feasible);
  } else {
    const std::string fill = estimate_error ? "error" : "";
    for (int i = 0; i < 6; ++i) cells.push_back(fill);
    const auto c = bound_cells(b);
    cells.insert(cells.end(), {c.bound_t, c.bound_s, c.tau_min, c.tau_max, c.max_m});
    cells.insert(cells.end(), {fill, fill, fill});
    cells.push_back(c.feasible);
  }
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  return line;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Secure two-hop relay simulator and bound calculator", "relaysec"};
  app.require_subcommand(1);
  Overrides ov;

  app.add_option("--config", ov.config_path, "JSON config file; flags override its values");
  app.add_option("--case", ov.case_name, "equal | general");
  app.add_option("--n", ov.n, "relay count");
  app.add_option("--m", ov.m, "eavesdropper count");
  app.add_option("--k", ov.k, "candidate set size");
  app.add_option("--r", ov.r, "selection radius (number or inf)");
  app.add_option("--tau", ov.tau, "jamming threshold");
  app.add_option("--gamma-r", ov.gamma_r, "legitimate SINR threshold");
  app.add_option("--gamma-e", ov.gamma_e, "eavesdropper SINR threshold");
  app.add_option("--alpha", ov.alpha, "path-loss exponent");
  app.add_option("--d0", ov.d0, "capture radius");
  app.add_option("--delta", ov.delta, "minimum-distance clamp (defaults to d0)");
  app.add_option("--es", ov.es, "transmit power");
  app.add_option("--n0", ov.n0, "noise level (defaults to 1e-6 * es)");
  app.add_option("--eps-t", ov.eps_t, "transmission outage target");
  app.add_option("--eps-s", ov.eps_s, "secrecy outage target");
  app.add_option("--trials", ov.trials, "Monte Carlo trials");
  app.add_option("--seed", ov.seed, "master seed");
  app.add_option("--coherence", ov.coherence, "trials sharing one network realization");
  app.add_option("--workers", ov.workers, "worker threads (0 = all cores)");
  app.add_option("--p-region", ov.p_region, "pi_r2 | exact | probability override");
  app.add_option("--out", ov.out, "CSV output path (default stdout)");
  app.add_option("--sweep-param", ov.sweep_param, "r | k | tau | n | m | gamma_r | gamma_e");
  app.add_option("--sweep-from", ov.sweep_from, "first grid value");
  app.add_option("--sweep-to", ov.sweep_to, "last grid value");
  app.add_option("--sweep-steps", ov.sweep_steps, "grid points");
  app.add_option("--sweep-scale", ov.sweep_scale, "linear | log");
  app.add_flag("--no-estimates", ov.no_estimates, "sweep bounds only");
  app.add_flag("--report", ov.report, "print a human-readable summary");

  Command cmd = Command::Bounds;
  app.add_subcommand("bounds", "evaluate the closed-form bounds")
      ->fallthrough()
      ->callback([&] { cmd = Command::Bounds; });
  app.add_subcommand("tau-range", "admissible jamming-threshold window")
      ->fallthrough()
      ->callback([&] { cmd = Command::TauRange; });
  app.add_subcommand("max-eaves", "tolerable number of eavesdroppers")
      ->fallthrough()
      ->callback([&] { cmd = Command::MaxEaves; });
  app.add_subcommand("simulate", "Monte Carlo estimate of the outage probabilities")
      ->fallthrough()
      ->callback([&] { cmd = Command::Simulate; });
  app.add_subcommand("sweep", "one row per grid point of a parameter sweep")
      ->fallthrough()
      ->callback([&] { cmd = Command::Sweep; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    return dispatch(cmd, ov, out);
  } catch (const ConfigurationError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParameterError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const DomainError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace relaysec::cli
