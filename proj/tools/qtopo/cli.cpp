#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qtopo/errors.hpp"
#include "qtopo/evolution.hpp"
#include "qtopo/geometry.hpp"
#include "qtopo/phasescan.hpp"
#include "qtopo/qmodel.hpp"
#include "qtopo/spectra.hpp"

namespace qtopo::cli {

using Json = nlohmann::ordered_json;

double parse_number(std::string_view text) {
  std::string_view s = text;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (s.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw Error(ErrorKind::InvalidArgument, "not a finite number: '" + std::string(text) + "'");
  }
  return value;
}

double parse_angle(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c != ' ') s.push_back(c);
  }
  const auto pos = s.find("pi");
  if (pos == std::string::npos) return parse_number(s);
  try {
    std::string_view coef = std::string_view(s).substr(0, pos);
    std::string_view rest = std::string_view(s).substr(pos + 2);
    if (!coef.empty() && coef.back() == '*') coef.remove_suffix(1);
    double k = 1.0;
    if (coef == "-") {
      k = -1.0;
    } else if (!coef.empty() && coef != "+") {
      k = parse_number(coef);
    }
    double d = 1.0;
    if (!rest.empty()) {
      if (rest.front() != '/') throw Error(ErrorKind::InvalidArgument, "");
      d = parse_number(rest.substr(1));
      if (d == 0.0) throw Error(ErrorKind::InvalidArgument, "");
    }
    return k * kPi / d;
  } catch (const Error&) {
    throw Error(ErrorKind::InvalidArgument, "not an angle: '" + std::string(text) + "'");
  }
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::string s = fmt::format("{:.17g}", value);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

namespace {

void write_json(std::string& s, const Json& v, int depth) {
  const auto pad = [&s](int d) { s.append(static_cast<std::size_t>(2 * d), ' '); };
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        s += "{}";
        return;
      }
      s += "{\n";
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) s += ",\n";
        first = false;
        pad(depth + 1);
        s += Json(key).dump();
        s += ": ";
        write_json(s, item, depth + 1);
      }
      s += "\n";
      pad(depth);
      s += "}";
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        s += "[]";
        return;
      }
      // arrays of scalars stay on one line
      const bool flat = std::none_of(v.begin(), v.end(),
                                     [](const Json& e) { return e.is_structured(); });
      s += "[";
      bool first = true;
      for (const auto& item : v) {
        if (!first) s += flat ? ", " : ",";
        first = false;
        if (!flat) {
          s += "\n";
          pad(depth + 1);
        }
        write_json(s, item, depth + 1);
      }
      if (!flat) {
        s += "\n";
        pad(depth);
      }
      s += "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = v.get<double>();
      s += std::isfinite(x) ? format_double(x) : "null";
      return;
    }
    default:
      s += v.dump();
  }
}

}  // namespace

std::string dump_json(const nlohmann::ordered_json& value) {
  std::string s;
  write_json(s, value, 0);
  s += "\n";
  return s;
}

namespace {

struct Report {
  Json params = Json::object();
  Json results = Json::object();
  Json diagnostics = Json::object();
  // flat view used for CSV
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;

  Json row_objects() const {
    Json out = Json::array();
    for (const auto& row : rows) {
      Json obj = Json::object();
      for (std::size_t c = 0; c < columns.size(); ++c) obj[columns[c]] = row[c];
      out.push_back(std::move(obj));
    }
    return out;
  }
};

std::string csv_field(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }
  return v.dump();
}

std::string render_csv(const Report& r) {
  std::string s;
  for (std::size_t c = 0; c < r.columns.size(); ++c) {
    if (c) s += ',';
    s += csv_field(r.columns[c]);
  }
  s += '\n';
  for (const auto& row : r.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) s += ',';
      s += csv_field(row[c]);
    }
    s += '\n';
  }
  return s;
}

std::string render_json(const std::string& command, const Report& r) {
  Json doc = Json::object();
  doc["schema_version"] = 1;
  doc["command"] = command;
  doc["params"] = r.params;
  doc["results"] = r.results;
  doc["diagnostics"] = r.diagnostics;
  return dump_json(doc);
}

Json optional_value(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string label_column(StateLabel l, std::string_view suffix = {}) {
  std::string name = l.name();
  if (!suffix.empty()) {
    name += '_';
    name += suffix;
  }
  return name;
}

// Options shared by the single-point commands; kept as text so every number
// goes through the locale-independent parser.
struct DriveArgs {
  std::string b = "2";
  std::string theta = "0";
  std::string phi = "pi";
  std::string omega = "0";
  std::string t_lr = "1";

  void add_to(CLI::App* app, bool with_theta) {
    app->add_option("--b", b, "field magnitude B > 0")->capture_default_str();
    if (with_theta) {
      app->add_option("--theta", theta, "polar angle in [0, pi]")->capture_default_str();
    }
    app->add_option("--phi", phi, "site-phase difference (phi_l = 0, phi_r = -phi)")
        ->capture_default_str();
    app->add_option("--omega", omega, "drive frequency >= 0")->capture_default_str();
    app->add_option("--t-lr", t_lr, "tunneling amplitude >= 0")->capture_default_str();
  }

  DriveConfig config() const {
    DriveConfig cfg = DriveConfig::make(parse_number(b), parse_angle(theta), parse_angle(phi),
                                        parse_number(omega), parse_number(t_lr));
    cfg.validate();
    return cfg;
  }
};

void echo_config(Json& params, const DriveConfig& cfg, bool with_theta) {
  params["b"] = cfg.b;
  if (with_theta) params["theta"] = cfg.theta;
  params["phi"] = cfg.phase_difference();
  params["phi_l"] = cfg.phi_l;
  params["phi_r"] = cfg.phi_r;
  params["omega"] = cfg.omega;
  params["t_lr"] = cfg.t_lr;
}

Regime parse_regime(const std::string& s) {
  return s == "nonadiabatic" ? Regime::nonadiabatic : Regime::adiabatic;
}

struct ThetaArgs {
  std::string theta;
  int steps = 200;

  void add_to(CLI::App* app) {
    auto* single = app->add_option("--theta", theta, "single polar angle in [0, pi]");
    app->add_option("--theta-steps", steps, "inclusive grid on [0, pi]")
        ->capture_default_str()
        ->excludes(single);
  }

  std::vector<double> values() const {
    if (!theta.empty()) {
      const double value = parse_angle(theta);
      if (!(value >= 0.0 && value <= kPi)) {
        throw Error(ErrorKind::InvalidArgument, "--theta must lie in [0, pi]");
      }
      return {value};
    }
    if (steps < 2) throw Error(ErrorKind::InvalidArgument, "--theta-steps must be >= 2");
    std::vector<double> out(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) out[static_cast<std::size_t>(k)] = k * kPi / (steps - 1);
    out.back() = kPi;
    return out;
  }
};

// ---- spectrum

struct SpectrumArgs {
  DriveArgs drive;
  ThetaArgs theta;
  std::string regime = "adiabatic";
};

Report cmd_spectrum(const SpectrumArgs& a) {
  const DriveConfig base = a.drive.config();
  const Regime regime = parse_regime(a.regime);
  const std::vector<double> thetas = a.theta.values();
  const auto branch = phase_branch(base);

  Report r;
  echo_config(r.params, base, false);
  r.params["regime"] = to_string(regime);
  r.params["theta"] = thetas;

  r.columns.push_back("theta");
  if (branch) {
    for (const StateLabel l : kAllLabels) r.columns.push_back(label_column(l));
    for (const StateLabel l : kAllLabels) r.columns.push_back(label_column(l, "closed"));
  } else {
    for (int k = 0; k < 4; ++k) r.columns.push_back("e" + std::to_string(k));
  }

  double max_diff = 0.0;
  double min_gap = INFINITY;
  for (const double theta : thetas) {
    const DriveConfig cfg = base.with_theta(theta);
    const Operator4 h = regime == Regime::adiabatic ? build_hamiltonian(cfg, 0.0)
                                                    : build_rotating_hamiltonian(cfg);
    std::vector<Json> row{theta};
    if (branch) {
      const SectorSpectrum s = sector_eigenstates(h, *branch);
      for (const StateLabel l : kAllLabels) row.emplace_back(s[l].energy);
      for (const StateLabel l : kAllLabels) {
        const double closed = closed_form_energy(cfg, l, regime);
        max_diff = std::max(max_diff, std::abs(closed - s[l].energy));
        row.emplace_back(closed);
      }
      min_gap = std::min({min_gap, s.gap(1), s.gap(-1)});
    } else {
      const EigenSystem es = eigensystem(h);
      for (const double e : es.values) row.emplace_back(e);
      for (int k = 0; k + 1 < 4; ++k) {
        min_gap = std::min(min_gap, es.values[static_cast<std::size_t>(k + 1)] -
                                        es.values[static_cast<std::size_t>(k)]);
      }
    }
    r.rows.push_back(std::move(row));
  }

  r.results["rows"] = r.row_objects();
  r.diagnostics["labeled"] = branch.has_value();
  if (branch) r.diagnostics["max_abs_closed_minus_numeric"] = max_diff;
  r.diagnostics[branch ? "min_sector_gap" : "min_level_spacing"] = min_gap;
  return r;
}

// ---- berry

struct BerryArgs {
  DriveArgs drive;
  ThetaArgs theta;
  std::vector<std::string> lambdas;
  std::string regime = "adiabatic";
  int n_steps = kDefaultWilsonSteps;
};

struct CurveStats {
  double uncovered_arc = 0.0;
  double winding = 0.0;
};

// Largest arc of the circle not visited by the samples, and the net winding
// of the sampled curve in units of 2 pi.
CurveStats curve_stats(const std::vector<double>& phases) {
  CurveStats st;
  if (phases.empty()) return st;
  std::vector<double> sorted;
  for (const double p : phases) sorted.push_back(wrap_phase(p));
  std::sort(sorted.begin(), sorted.end());
  st.uncovered_arc = sorted.front() + kTwoPi - sorted.back();
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    st.uncovered_arc = std::max(st.uncovered_arc, sorted[k] - sorted[k - 1]);
  }
  double net = 0.0;
  for (std::size_t k = 1; k < phases.size(); ++k) net += wrap_phase(phases[k] - phases[k - 1]);
  st.winding = net / kTwoPi;
  return st;
}

std::string join_errors(const std::vector<std::string>& errors) {
  std::string s;
  for (const auto& e : errors) {
    if (!s.empty()) s += ';';
    s += e;
  }
  return s;
}

Report cmd_berry(const BerryArgs& a) {
  const DriveConfig base = a.drive.config();
  require_phase_branch(base);
  const Regime regime = parse_regime(a.regime);
  const std::vector<double> thetas = a.theta.values();
  if (regime == Regime::adiabatic && a.n_steps < 64) {
    throw Error(ErrorKind::InvalidArgument, "--n-steps must be >= 64");
  }
  std::vector<double> lambdas;
  for (const auto& s : a.lambdas) {
    const double v = parse_number(s);
    if (v < 0.0) throw Error(ErrorKind::InvalidArgument, "lambda must be >= 0");
    lambdas.push_back(v);
  }
  if (lambdas.empty()) lambdas.push_back(base.lambda());

  Report r;
  echo_config(r.params, base, false);
  r.params["regime"] = to_string(regime);
  r.params["lambda"] = lambdas;
  r.params["theta"] = thetas;
  if (regime == Regime::adiabatic) r.params["n_steps"] = a.n_steps;

  const std::vector<std::string> kinds =
      regime == Regime::adiabatic
          ? std::vector<std::string>{"wilson", "closed", "diff"}
          : std::vector<std::string>{"closed", "numeric", "evolution", "diff"};
  r.columns = {"lambda", "theta"};
  for (const StateLabel l : kAllLabels) {
    for (const auto& k : kinds) r.columns.push_back(label_column(l, k));
  }
  r.columns.push_back("error");

  double max_diff = 0.0;
  double max_offset_deviation = 0.0;
  double min_gap = INFINITY;
  Json curves = Json::array();
  for (const double lambda : lambdas) {
    DriveConfig cfg_l = base;
    cfg_l.t_lr = 0.5 * lambda * base.b;
    std::array<std::vector<double>, 4> curve;
    for (const double theta : thetas) {
      const DriveConfig cfg = cfg_l.with_theta(theta);
      std::vector<Json> row{lambda, theta};
      std::vector<std::string> errors;
      auto fail = [&errors](StateLabel l, std::string_view what, ErrorKind kind) {
        errors.push_back(l.name() + ":" + std::string(what) + ":" + std::string(to_string(kind)));
      };
      if (regime == Regime::adiabatic) {
        const WilsonBandPhases w = berry_phases_wilson(cfg, theta, a.n_steps);
        min_gap = std::min(min_gap, w.min_gap);
        for (const StateLabel l : kAllLabels) {
          std::optional<double> wilson;
          std::optional<double> closed;
          if (w.phase[l.index()]) {
            wilson = w.phase[l.index()]->value();
          } else {
            fail(l, "wilson", *w.error[l.index()]);
          }
          try {
            closed = berry_phase_closed(cfg, theta, l).value();
          } catch (const Error& e) {
            fail(l, "closed", e.kind());
          }
          std::optional<double> diff;
          if (wilson && closed) {
            diff = circular_distance(*wilson, *closed);
            max_diff = std::max(max_diff, *diff);
          }
          if (wilson || closed) curve[l.index()].push_back(wilson ? *wilson : *closed);
          row.push_back(optional_value(wilson));
          row.push_back(optional_value(closed));
          row.push_back(optional_value(diff));
        }
      } else {
        for (const StateLabel l : kAllLabels) {
          std::optional<double> closed;
          std::optional<double> numeric;
          std::optional<double> evolution;
          try {
            closed = aa_phase_closed(cfg, l).value();
          } catch (const Error& e) {
            fail(l, "closed", e.kind());
          }
          try {
            numeric = wrap_phase(kTwoPi * aa_connection_numeric(cfg, l));
          } catch (const Error& e) {
            fail(l, "numeric", e.kind());
          }
          if (cfg.omega > 0.0) {
            try {
              evolution = extract_phases(cfg, l).geometric;
            } catch (const Error& e) {
              fail(l, "evolution", e.kind());
            }
          }
          std::optional<double> diff;
          if (numeric && closed) {
            diff = circular_distance(*numeric, *closed);
            max_diff = std::max(max_diff, *diff);
          }
          if (evolution && closed) {
            max_offset_deviation = std::max(
                max_offset_deviation, circular_distance(*evolution - *closed, kPi));
          }
          if (numeric || closed) curve[l.index()].push_back(numeric ? *numeric : *closed);
          row.push_back(optional_value(closed));
          row.push_back(optional_value(numeric));
          row.push_back(optional_value(evolution));
          row.push_back(optional_value(diff));
        }
      }
      row.emplace_back(join_errors(errors));
      r.rows.push_back(std::move(row));
    }
    for (const StateLabel l : kAllLabels) {
      const CurveStats st = curve_stats(curve[l.index()]);
      Json c = Json::object();
      c["lambda"] = lambda;
      c["label"] = l.name();
      c["largest_uncovered_arc"] = st.uncovered_arc;
      c["winding"] = st.winding;
      curves.push_back(std::move(c));
    }
  }

  r.results["rows"] = r.row_objects();
  r.diagnostics["max_circular_diff"] = max_diff;
  if (regime == Regime::adiabatic) {
    r.diagnostics["min_sector_gap"] = min_gap;
  } else if (base.omega > 0.0) {
    r.diagnostics["max_evolution_offset_minus_pi"] = max_offset_deviation;
  }
  r.diagnostics["phase_gap"] = std::move(curves);
  return r;
}

// ---- chern

struct ChernArgs {
  DriveArgs drive;
  std::string regime = "adiabatic";
  int n_theta = kDefaultLatticeSize;
  int n_phi = kDefaultLatticeSize;
};

Report cmd_chern(const ChernArgs& a, int threads) {
  const DriveConfig cfg = a.drive.config();
  require_phase_branch(cfg);
  const Regime regime = parse_regime(a.regime);
  if (a.n_theta < 20 || a.n_phi < 20) {
    throw Error(ErrorKind::InvalidArgument, "--n-theta and --n-phi must be >= 20");
  }

  Report r;
  echo_config(r.params, cfg, false);
  r.params["regime"] = to_string(regime);
  r.params["n_theta"] = a.n_theta;
  r.params["n_phi"] = a.n_phi;

  const ChernReport report = chern_lattice(cfg, a.n_theta, a.n_phi, regime, threads);

  Json lattice = Json::object();
  Json flux = Json::object();
  Json closed = Json::object();
  Json closed_errors = Json::object();
  std::vector<Json> lattice_row{"lattice"};
  std::vector<Json> flux_row{"flux"};
  std::vector<Json> closed_row{"closed"};
  bool agree = true;
  for (const StateLabel l : kAllLabels) {
    lattice[l.name()] = report[l];
    flux[l.name()] = report.flux[l.index()];
    lattice_row.emplace_back(report[l]);
    flux_row.emplace_back(report.flux[l.index()]);
    try {
      const int c = chern_closed(cfg, l, regime);
      closed[l.name()] = c;
      closed_row.emplace_back(c);
      agree = agree && c == report[l];
    } catch (const Error& e) {
      closed[l.name()] = nullptr;
      closed_errors[l.name()] = std::string(e.name());
      closed_row.emplace_back(nullptr);
      agree = false;
    }
  }
  r.columns.push_back("method");
  for (const StateLabel l : kAllLabels) r.columns.push_back(label_column(l));
  r.rows = {lattice_row, flux_row, closed_row};

  r.results["lattice"] = std::move(lattice);
  r.results["closed"] = std::move(closed);
  if (!closed_errors.empty()) r.results["closed_errors"] = std::move(closed_errors);
  r.results["phase_class"] = phase_class_from_chern(report.c1).name();
  r.results["flux"] = std::move(flux);
  r.diagnostics["methods_agree"] = agree;
  r.diagnostics["min_gap"] = report.min_gap;
  r.diagnostics["max_integer_residual"] = report.max_residual;
  return r;
}

// ---- evolve

struct EvolveArgs {
  DriveArgs drive;
  int rk4_steps = 100000;
};

Report cmd_evolve(const EvolveArgs& a) {
  const DriveConfig cfg = a.drive.config();
  require_phase_branch(cfg);
  if (a.rk4_steps < 1000) throw Error(ErrorKind::InvalidArgument, "--rk4-steps must be >= 1000");
  const double period = drive_period(cfg);

  Report r;
  echo_config(r.params, cfg, true);
  r.params["rk4_steps"] = a.rk4_steps;

  static const std::vector<std::string> kQuantities = {
      "total",          "dynamical",           "geometric",       "aa_closed",
      "geometric_minus_aa_closed", "dynamical_quadrature", "quasienergy",
      "quasienergy_closed", "floquet_quasienergy", "sz_expectation", "cyclic_overlap"};
  std::array<std::array<double, 11>, 4> table{};
  Json bands = Json::object();
  for (const StateLabel l : kAllLabels) {
    const PhaseBreakdown p = extract_phases(cfg, l);
    const double aa = aa_phase_closed(cfg, l).value();
    auto& v = table[l.index()];
    v = {p.total,
         p.dynamical,
         p.geometric,
         aa,
         wrap_phase(p.geometric - aa),
         p.dynamical_quadrature,
         p.quasienergy,
         closed_form_quasienergy(cfg, l),
         floquet_quasienergy(cfg, l),
         p.sz_expectation,
         p.cyclic_overlap};
    Json band = Json::object();
    for (std::size_t q = 0; q < kQuantities.size(); ++q) band[kQuantities[q]] = v[q];
    bands[l.name()] = std::move(band);
  }
  r.columns.push_back("quantity");
  for (const StateLabel l : kAllLabels) r.columns.push_back(label_column(l));
  for (std::size_t q = 0; q < kQuantities.size(); ++q) {
    std::vector<Json> row{kQuantities[q]};
    for (const StateLabel l : kAllLabels) row.emplace_back(table[l.index()][q]);
    r.rows.push_back(std::move(row));
  }

  const Operator4 exact = propagator_exact(cfg, period);
  const Rk4Propagator rk = propagator_rk4(cfg, period, a.rk4_steps);
  r.results["period"] = period;
  r.results["bands"] = std::move(bands);
  r.diagnostics["rk4_max_deviation"] = max_abs(rk.propagator - exact);
  r.diagnostics["rk4_unitarity_correction"] = rk.unitarity_correction;
  r.diagnostics["exact_unitarity_error"] = unitarity_error(exact);
  return r;
}

// ---- phase-diagram

struct DiagramArgs {
  std::string b_min = "0";
  std::string b_max = "6";
  std::string omega_min = "0";
  std::string omega_max = "6";
  std::string t_lr = "1";
  std::string phi = "pi";
  int n_b = 60;
  int n_omega = 60;
  std::string method = "closed";
  int lattice_n = kDefaultLatticeSize;
};

Report cmd_phase_diagram(const DiagramArgs& a, int threads) {
  ScanRequest req;
  req.b_min = parse_number(a.b_min);
  req.b_max = parse_number(a.b_max);
  req.omega_min = parse_number(a.omega_min);
  req.omega_max = parse_number(a.omega_max);
  req.t_lr = parse_number(a.t_lr);
  req.phi = parse_angle(a.phi);
  req.n_b = a.n_b;
  req.n_omega = a.n_omega;
  req.method = a.method == "lattice" ? ScanMethod::lattice : ScanMethod::closed;
  req.lattice_size = a.lattice_n;
  req.threads = threads;
  req.validate();

  Report r;
  r.params["b_min"] = req.b_min;
  r.params["b_max"] = req.b_max;
  r.params["omega_min"] = req.omega_min;
  r.params["omega_max"] = req.omega_max;
  r.params["t_lr"] = req.t_lr;
  r.params["phi"] = req.phi;
  r.params["n_b"] = req.n_b;
  r.params["n_omega"] = req.n_omega;
  r.params["method"] = to_string(req.method);
  if (req.method == ScanMethod::lattice) r.params["lattice_n"] = req.lattice_size;

  const auto cells = scan_diagram(req);
  r.columns = {"b", "omega", "class", "error", "boundary_distance"};
  Json counts = Json::object();
  for (const auto& name : {"(0,0)", "(Z,Z)", "(0,Z)", "(Z,0)"}) counts[name] = 0;
  Json errors = Json::object();
  for (const auto& cell : cells) {
    Json phase = nullptr;
    Json error = nullptr;
    if (cell.phase) {
      phase = cell.phase->name();
      counts[cell.phase->name()] = counts[cell.phase->name()].get<int>() + 1;
    } else {
      const std::string name(to_string(*cell.error));
      error = name;
      errors[name] = errors.value(name, 0) + 1;
    }
    r.rows.push_back({cell.b, cell.omega, phase, error, cell.boundary_distance});
  }
  r.results["rows"] = r.row_objects();
  r.diagnostics["class_counts"] = std::move(counts);
  r.diagnostics["error_counts"] = std::move(errors);
  return r;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::UnsupportedPhase:
    case ErrorKind::ZeroFrequency:
      return kExitValidation;
    default:
      return kExitComputation;
  }
}

void write_error(std::ostream& err, std::string_view name, int code, const std::string& message) {
  Json doc = Json::object();
  doc["schema_version"] = 1;
  Json e = Json::object();
  e["name"] = name;
  e["exit_code"] = code;
  e["message"] = message;
  doc["error"] = std::move(e);
  err << dump_json(doc);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geometric phases and topology of a driven two-site spin qubit", "qtopo"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "json";
  std::string out_path;
  int threads = 1;
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--out", out_path, "write output to PATH instead of stdout");
  app.add_option("--threads", threads, "worker threads for grid computations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  const auto regime_check = CLI::IsMember({"adiabatic", "nonadiabatic"});

  SpectrumArgs spectrum;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "energies or quasienergies vs theta");
  spectrum.drive.add_to(spectrum_cmd, false);
  spectrum.theta.add_to(spectrum_cmd);
  spectrum_cmd->add_option("--regime", spectrum.regime)->check(regime_check)->capture_default_str();

  BerryArgs berry;
  auto* berry_cmd = app.add_subcommand("berry", "Berry or A-A phases vs theta");
  berry.drive.add_to(berry_cmd, false);
  berry.theta.add_to(berry_cmd);
  berry_cmd->add_option("--lambda", berry.lambdas, "2 t_lr / B values; overrides --t-lr")
      ->delimiter(',');
  berry_cmd->add_option("--regime", berry.regime)->check(regime_check)->capture_default_str();
  berry_cmd->add_option("--n-steps", berry.n_steps, "Wilson loop steps")->capture_default_str();

  ChernArgs chern;
  auto* chern_cmd = app.add_subcommand("chern", "per-band Chern numbers, lattice and closed form");
  chern.drive.add_to(chern_cmd, false);
  chern_cmd->add_option("--regime", chern.regime)->check(regime_check)->capture_default_str();
  chern_cmd->add_option("--n-theta", chern.n_theta)->capture_default_str();
  chern_cmd->add_option("--n-phi", chern.n_phi)->capture_default_str();

  EvolveArgs evolve;
  auto* evolve_cmd = app.add_subcommand("evolve", "one-period evolution and phase split");
  evolve.drive.add_to(evolve_cmd, true);
  evolve_cmd->add_option("--rk4-steps", evolve.rk4_steps)->capture_default_str();

  DiagramArgs diagram;
  auto* diagram_cmd = app.add_subcommand("phase-diagram", "phase classes over (B, Omega)");
  diagram_cmd->add_option("--b-min", diagram.b_min)->capture_default_str();
  diagram_cmd->add_option("--b-max", diagram.b_max)->capture_default_str();
  diagram_cmd->add_option("--omega-min", diagram.omega_min)->capture_default_str();
  diagram_cmd->add_option("--omega-max", diagram.omega_max)->capture_default_str();
  diagram_cmd->add_option("--t-lr", diagram.t_lr)->capture_default_str();
  diagram_cmd->add_option("--phi", diagram.phi)->capture_default_str();
  diagram_cmd->add_option("--n-b", diagram.n_b)->capture_default_str();
  diagram_cmd->add_option("--n-omega", diagram.n_omega)->capture_default_str();
  diagram_cmd->add_option("--method", diagram.method)
      ->check(CLI::IsMember({"closed", "lattice"}))
      ->capture_default_str();
  diagram_cmd->add_option("--lattice-n", diagram.lattice_n)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    write_error(err, to_string(ErrorKind::InvalidArgument), kExitValidation, e.what());
    return kExitValidation;
  }

  std::string command;
  std::string text;
  try {
    Report report;
    if (spectrum_cmd->parsed()) {
      command = "spectrum";
      report = cmd_spectrum(spectrum);
    } else if (berry_cmd->parsed()) {
      command = "berry";
      report = cmd_berry(berry);
    } else if (chern_cmd->parsed()) {
      command = "chern";
      report = cmd_chern(chern, threads);
    } else if (evolve_cmd->parsed()) {
      command = "evolve";
      report = cmd_evolve(evolve);
    } else {
      command = "phase-diagram";
      report = cmd_phase_diagram(diagram, threads);
    }
    report.params["format"] = format;
    report.params["threads"] = threads;
    text = format == "csv" ? render_csv(report) : render_json(command, report);
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    write_error(err, e.name(), code, e.what());
    return code;
  }

  if (out_path.empty()) {
    out << text;
    return kExitOk;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file || !(file << text)) {
    write_error(err, to_string(ErrorKind::InvalidArgument), kExitValidation,
                "cannot write " + out_path);
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace qtopo::cli
