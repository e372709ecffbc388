#include "qlcod/run.hpp"

#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "parallel.hpp"
#include "qlcod/error.hpp"
#include "qlcod/observables.hpp"

namespace qlcod {

using nlohmann::json;

namespace {

constexpr RunMode kModes[] = {RunMode::ClassicalScan, RunMode::QuantumSteady,  RunMode::QuantumSweep,
                              RunMode::WignerExport,  RunMode::SdeEnsemble,   RunMode::EntanglementSweep};

[[noreturn]] void config_error(const std::string& key, const std::string& what) {
  throw Error(ErrorCode::Config, "config key \"" + key + "\": " + what);
}

void reject_unknown(const json& obj, const std::string& prefix, std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) config_error(prefix + it.key(), "unknown key");
  }
}

const json& object_at(const json& obj, const char* key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_object()) config_error(path, "expected an object");
  return v;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) config_error(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) config_error(path, "must be finite");
  return d;
}

long long integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) config_error(path, "expected an integer");
  return v.get<long long>();
}

bool boolean(const json& v, const std::string& path) {
  if (!v.is_boolean()) config_error(path, "expected true or false");
  return v.get<bool>();
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) config_error(path, "expected a string");
  return v.get<std::string>();
}

template <class F>
void optional_field(const json& obj, const char* key, const std::string& prefix, F&& f) {
  if (obj.contains(key)) f(obj.at(key), prefix + key);
}

SweepSpec parse_sweep(const json& v, const std::string& path) {
  if (!v.is_object()) config_error(path, "expected an object");
  reject_unknown(v, path + ".", {"parameter", "values"});
  if (!v.contains("parameter")) config_error(path + ".parameter", "missing");
  if (!v.contains("values")) config_error(path + ".values", "missing");
  SweepSpec s;
  s.parameter = text(v.at("parameter"), path + ".parameter");
  if (s.parameter != "eps_over_k1" && s.parameter != "kerr")
    config_error(path + ".parameter", "must be \"eps_over_k1\" or \"kerr\"");
  const json& vals = v.at("values");
  if (!vals.is_array() || vals.empty()) config_error(path + ".values", "expected a non-empty array");
  for (std::size_t i = 0; i < vals.size(); ++i)
    s.values.push_back(number(vals[i], path + ".values[" + std::to_string(i) + "]"));
  return s;
}

json sweep_json(const SweepSpec& s) { return {{"parameter", s.parameter}, {"values", s.values}}; }

}  // namespace

const char* to_string(RunMode m) noexcept {
  switch (m) {
    case RunMode::ClassicalScan: return "classical-scan";
    case RunMode::QuantumSteady: return "quantum-steady";
    case RunMode::QuantumSweep: return "quantum-sweep";
    case RunMode::WignerExport: return "wigner-export";
    case RunMode::SdeEnsemble: return "sde-ensemble";
    case RunMode::EntanglementSweep: return "entanglement-sweep";
  }
  return "unknown";
}

std::optional<RunMode> parse_mode(std::string_view name) noexcept {
  for (RunMode m : kModes)
    if (name == to_string(m)) return m;
  return std::nullopt;
}

void RunConfig::validate() const {
  try {
    params.validate();
  } catch (const Error& e) {
    config_error("params", e.what());
  }
  if (n_max < 2) config_error("n_max", "must be at least 2");
  try {
    grid.validate();
  } catch (const Error& e) {
    config_error("grid", e.what());
  }
  try {
    sde.validate(params);
  } catch (const Error& e) {
    config_error("sde", e.what());
  }
  const bool needs_sweep = mode == RunMode::ClassicalScan || mode == RunMode::QuantumSweep ||
                           mode == RunMode::SdeEnsemble || mode == RunMode::EntanglementSweep;
  if (needs_sweep && !sweep) config_error("sweep", "required for mode " + std::string(to_string(mode)));
  if (!needs_sweep && sweep) config_error("sweep", "not used by mode " + std::string(to_string(mode)));
  if (sweep) {
    if (sweep->values.empty()) config_error("sweep.values", "must not be empty");
    for (std::size_t i = 1; i < sweep->values.size(); ++i)
      if (!(sweep->values[i] > sweep->values[i - 1])) config_error("sweep.values", "must be strictly ascending");
    if (mode != RunMode::ClassicalScan && sweep->parameter != "eps_over_k1")
      config_error("sweep.parameter", "mode " + std::string(to_string(mode)) + " sweeps eps_over_k1 only");
    for (double v : sweep->values) {
      if (sweep->parameter == "eps_over_k1" && v < 0.0) config_error("sweep.values", "eps_over_k1 must be >= 0");
    }
  }
  if (sweep2) {
    if (mode != RunMode::QuantumSweep) config_error("sweep2", "only quantum-sweep accepts a second axis");
    if (sweep2->parameter != "kerr") config_error("sweep2.parameter", "must be \"kerr\"");
    for (std::size_t i = 1; i < sweep2->values.size(); ++i)
      if (!(sweep2->values[i] > sweep2->values[i - 1])) config_error("sweep2.values", "must be strictly ascending");
  }
  if (truncation_check) {
    if (truncation_check->step < 1) config_error("truncation_check.step", "must be positive");
    if (!(truncation_check->rel_tol > 0.0)) config_error("truncation_check.rel_tol", "must be positive");
    if (truncation_check->n_cap < n_max + truncation_check->step)
      config_error("truncation_check.n_cap", "must be at least n_max + step");
  }
}

namespace {

RunConfig parse_document(const json& doc, std::optional<RunMode> expected);

json parse_json(std::string_view text_in) {
  try {
    return json::parse(text_in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Config, std::string("config is not valid JSON: ") + e.what());
  }
}

}  // namespace

RunConfig parse_config(std::string_view text_in) { return parse_document(parse_json(text_in), std::nullopt); }

RunConfig parse_config(std::string_view text_in, RunMode mode) { return parse_document(parse_json(text_in), mode); }

namespace {

RunConfig parse_document(const json& doc, std::optional<RunMode> expected) {
  if (!doc.is_object()) throw Error(ErrorCode::Config, "config must be a JSON object");
  reject_unknown(doc, "", {"mode", "params", "sweep", "sweep2", "n_max", "grid", "sde", "classical",
                           "truncation_check", "seed", "threads", "output"});
  RunConfig c;
  if (doc.contains("mode")) {
    const std::string mode = text(doc.at("mode"), "mode");
    auto m = parse_mode(mode);
    if (!m) config_error("mode", "unknown mode \"" + mode + "\"");
    if (expected && *m != *expected)
      config_error("mode", "config says \"" + mode + "\" but \"" + to_string(*expected) + "\" was requested");
    c.mode = *m;
  } else if (expected) {
    c.mode = *expected;
  } else {
    config_error("mode", "missing");
  }

  if (doc.contains("params")) {
    const json& p = object_at(doc, "params", "params");
    reject_unknown(p, "params.", {"omega", "k1", "k2", "kerr", "epsilon"});
    optional_field(p, "omega", "params.", [&](const json& v, const std::string& k) { c.params.omega = number(v, k); });
    optional_field(p, "k1", "params.", [&](const json& v, const std::string& k) { c.params.k1 = number(v, k); });
    optional_field(p, "k2", "params.", [&](const json& v, const std::string& k) { c.params.k2 = number(v, k); });
    optional_field(p, "kerr", "params.", [&](const json& v, const std::string& k) { c.params.kerr = number(v, k); });
    optional_field(p, "epsilon", "params.",
                   [&](const json& v, const std::string& k) { c.params.epsilon = number(v, k); });
  }
  if (!(c.params.k1 > 0.0)) config_error("params.k1", "must be > 0");
  if (!(c.params.k2 > 0.0)) config_error("params.k2", "must be > 0");
  if (!(c.params.epsilon >= 0.0)) config_error("params.epsilon", "must be >= 0");

  optional_field(doc, "sweep", "", [&](const json& v, const std::string& k) { c.sweep = parse_sweep(v, k); });
  optional_field(doc, "sweep2", "", [&](const json& v, const std::string& k) { c.sweep2 = parse_sweep(v, k); });
  optional_field(doc, "n_max", "", [&](const json& v, const std::string& k) {
    const long long n = integer(v, k);
    if (n < 2 || n > 64) config_error(k, "must lie in [2, 64]");
    c.n_max = static_cast<int>(n);
  });

  c.grid = PhaseGrid::for_regime(c.params.regime());
  if (doc.contains("grid")) {
    const json& g = object_at(doc, "grid", "grid");
    reject_unknown(g, "grid.", {"x_min", "x_max", "y_min", "y_max", "n_x", "n_y"});
    optional_field(g, "x_min", "grid.", [&](const json& v, const std::string& k) { c.grid.x_min = number(v, k); });
    optional_field(g, "x_max", "grid.", [&](const json& v, const std::string& k) { c.grid.x_max = number(v, k); });
    optional_field(g, "y_min", "grid.", [&](const json& v, const std::string& k) { c.grid.y_min = number(v, k); });
    optional_field(g, "y_max", "grid.", [&](const json& v, const std::string& k) { c.grid.y_max = number(v, k); });
    auto count = [&](const json& v, const std::string& k) {
      const long long n = integer(v, k);
      if (n < 16 || n > 4001) config_error(k, "must lie in [16, 4001]");
      return static_cast<int>(n);
    };
    optional_field(g, "n_x", "grid.", [&](const json& v, const std::string& k) { c.grid.n_x = count(v, k); });
    optional_field(g, "n_y", "grid.", [&](const json& v, const std::string& k) { c.grid.n_y = count(v, k); });
  }

  c.sde = SdeConfig::defaults(c.params);
  optional_field(doc, "seed", "", [&](const json& v, const std::string& k) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      config_error(k, "expected a non-negative integer");
    c.seed = v.get<std::uint64_t>();
  });
  if (doc.contains("sde")) {
    const json& s = object_at(doc, "sde", "sde");
    reject_unknown(s, "sde.", {"dt", "t_final", "n_trajectories", "transient_fraction", "scheme", "noise_scale",
                               "initial"});
    optional_field(s, "dt", "sde.", [&](const json& v, const std::string& k) {
      c.sde.dt = number(v, k);
      if (!(c.sde.dt > 0.0)) config_error(k, "must be > 0");
    });
    double t_final = static_cast<double>(c.sde.n_steps) * (1e-3 / c.params.k1);
    optional_field(s, "t_final", "sde.", [&](const json& v, const std::string& k) {
      t_final = number(v, k);
      if (!(t_final > 0.0)) config_error(k, "must be > 0");
    });
    c.sde.n_steps = static_cast<std::uint64_t>(std::llround(t_final / c.sde.dt));
    if (c.sde.n_steps == 0) config_error("sde.t_final", "shorter than one step");
    optional_field(s, "n_trajectories", "sde.", [&](const json& v, const std::string& k) {
      const long long n = integer(v, k);
      if (n < 1 || n > 1'000'000) config_error(k, "must lie in [1, 1000000]");
      c.sde.n_trajectories = static_cast<std::uint32_t>(n);
    });
    optional_field(s, "transient_fraction", "sde.",
                   [&](const json& v, const std::string& k) { c.sde.transient_fraction = number(v, k); });
    optional_field(s, "noise_scale", "sde.",
                   [&](const json& v, const std::string& k) { c.sde.noise_scale = number(v, k); });
    optional_field(s, "scheme", "sde.", [&](const json& v, const std::string& k) {
      const std::string name = text(v, k);
      if (name == to_string(SdeScheme::SplitRk4)) c.sde.scheme = SdeScheme::SplitRk4;
      else if (name == to_string(SdeScheme::EulerMaruyama)) c.sde.scheme = SdeScheme::EulerMaruyama;
      else config_error(k, "must be \"split-rk4\" or \"euler-maruyama\"");
    });
    optional_field(s, "initial", "sde.", [&](const json& v, const std::string& k) {
      if (!v.is_array() || v.size() != 4) config_error(k, "expected [x1, y1, x2, y2]");
      c.sde.initial = {number(v[0], k + "[0]"), number(v[1], k + "[1]"), number(v[2], k + "[2]"),
                       number(v[3], k + "[3]")};
    });
  }

  if (doc.contains("classical")) {
    const json& s = object_at(doc, "classical", "classical");
    reject_unknown(s, "classical.", {"direction", "continuation", "initial", "t_transient", "t_measure", "dt"});
    optional_field(s, "direction", "classical.", [&](const json& v, const std::string& k) {
      const std::string d = text(v, k);
      if (d == "forward") c.classical.direction = SweepDirection::Forward;
      else if (d == "backward") c.classical.direction = SweepDirection::Backward;
      else config_error(k, "must be \"forward\" or \"backward\"");
    });
    optional_field(s, "continuation", "classical.",
                   [&](const json& v, const std::string& k) { c.classical.continuation = boolean(v, k); });
    optional_field(s, "initial", "classical.", [&](const json& v, const std::string& k) {
      if (!v.is_array() || v.size() != 4) config_error(k, "expected [x1, y1, x2, y2]");
      c.classical.initial = {number(v[0], k + "[0]"), number(v[1], k + "[1]"), number(v[2], k + "[2]"),
                             number(v[3], k + "[3]")};
    });
    optional_field(s, "t_transient", "classical.",
                   [&](const json& v, const std::string& k) { c.classical.attractor.t_transient = number(v, k); });
    optional_field(s, "t_measure", "classical.",
                   [&](const json& v, const std::string& k) { c.classical.attractor.t_measure = number(v, k); });
    optional_field(s, "dt", "classical.", [&](const json& v, const std::string& k) {
      c.classical.attractor.dt = number(v, k);
      if (!(c.classical.attractor.dt > 0.0 && c.classical.attractor.dt <= 0.01)) config_error(k, "must lie in (0, 0.01]");
    });
  }

  optional_field(doc, "truncation_check", "", [&](const json& v, const std::string& k) {
    if (v.is_boolean()) {
      if (v.get<bool>()) c.truncation_check = TruncationSpec{};
      return;
    }
    if (!v.is_object()) config_error(k, "expected true, false or an object");
    reject_unknown(v, k + ".", {"step", "rel_tol", "n_cap"});
    TruncationSpec t;
    optional_field(v, "step", k + ".", [&](const json& x, const std::string& kk) { t.step = static_cast<int>(integer(x, kk)); });
    optional_field(v, "rel_tol", k + ".", [&](const json& x, const std::string& kk) { t.rel_tol = number(x, kk); });
    optional_field(v, "n_cap", k + ".", [&](const json& x, const std::string& kk) { t.n_cap = static_cast<int>(integer(x, kk)); });
    c.truncation_check = t;
  });
  optional_field(doc, "threads", "", [&](const json& v, const std::string& k) {
    const long long n = integer(v, k);
    if (n < 0 || n > 1024) config_error(k, "must lie in [0, 1024]");
    c.threads = static_cast<unsigned>(n);
  });
  optional_field(doc, "output", "", [&](const json& v, const std::string& k) { c.output = text(v, k); });

  c.sde.base_seed = c.seed;
  c.validate();
  return c;
}

}  // namespace

std::string canonical_json(const RunConfig& c) {
  json j;
  j["mode"] = to_string(c.mode);
  j["params"] = {{"omega", c.params.omega}, {"k1", c.params.k1}, {"k2", c.params.k2}, {"kerr", c.params.kerr},
                 {"epsilon", c.params.epsilon}};
  if (c.sweep) j["sweep"] = sweep_json(*c.sweep);
  if (c.sweep2) j["sweep2"] = sweep_json(*c.sweep2);
  j["n_max"] = c.n_max;
  j["grid"] = {{"x_min", c.grid.x_min}, {"x_max", c.grid.x_max}, {"y_min", c.grid.y_min},
               {"y_max", c.grid.y_max}, {"n_x", c.grid.n_x},     {"n_y", c.grid.n_y}};
  const auto& s = c.sde;
  j["sde"] = {{"dt", s.dt},
              {"t_final", static_cast<double>(s.n_steps) * s.dt},
              {"n_trajectories", s.n_trajectories},
              {"transient_fraction", s.transient_fraction},
              {"scheme", to_string(s.scheme)},
              {"noise_scale", s.noise_scale},
              {"initial", {s.initial.x1, s.initial.y1, s.initial.x2, s.initial.y2}}};
  const auto& cl = c.classical;
  j["classical"] = {{"direction", cl.direction == SweepDirection::Forward ? "forward" : "backward"},
                    {"continuation", cl.continuation},
                    {"initial", {cl.initial.x1, cl.initial.y1, cl.initial.x2, cl.initial.y2}},
                    {"t_transient", cl.attractor.t_transient},
                    {"t_measure", cl.attractor.t_measure},
                    {"dt", cl.attractor.dt}};
  if (c.truncation_check)
    j["truncation_check"] = {{"step", c.truncation_check->step},
                             {"rel_tol", c.truncation_check->rel_tol},
                             {"n_cap", c.truncation_check->n_cap}};
  else
    j["truncation_check"] = false;
  j["seed"] = c.seed;
  return j.dump();
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += "\"\"";
    else if (ch == '\n' || ch == '\r') out += ' ';
    else out += ch;
  }
  return out + "\"";
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> notes;  // extra header comments
  std::size_t failed = 0;
  std::size_t points = 0;
};

unsigned thread_count(const RunConfig& c) {
  if (c.threads > 0) return c.threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

struct QuantumPoint {
  double eps_over_k1 = 0.0;
  double kerr = 0.0;
  double n1 = NAN, n2 = NAN, delta_y = NAN, negativity = NAN, renyi2 = NAN;
  std::string classification;
  int n_used = 0;
  double truncation_change = NAN;
  std::string error;
};

QuantumPoint quantum_point(const RunConfig& c, const SystemParams& p, bool want_lobes, bool want_entanglement) {
  QuantumPoint q;
  q.eps_over_k1 = p.epsilon / p.k1;
  q.kerr = p.kerr;
  try {
    int n = c.n_max;
    if (c.truncation_check) {
      const auto t = converge_truncation(p, c.n_max, [](const DensityMatrix& r) { return mean_phonon(r, 1); },
                                         c.truncation_check->step, c.truncation_check->rel_tol,
                                         c.truncation_check->n_cap);
      n = t.n_max;
      q.truncation_change = t.relative_change;
      if (!t.converged) q.error = "truncation not converged by n_max " + std::to_string(c.truncation_check->n_cap);
    }
    q.n_used = n;
    const FockSpace space(n);
    const SteadyState ss = steady_state(build_liouvillian(p, space));
    q.n1 = mean_phonon(ss.rho, 1);
    q.n2 = mean_phonon(ss.rho, 2);
    const DensityMatrix r1 = partial_trace(ss.rho, 1);
    if (want_entanglement) {
      q.negativity = negativity(ss.rho);
      q.renyi2 = renyi2(r1);
    }
    if (want_lobes) {
      const LobeReport rep = lobe_report(wigner(r1, c.grid));
      q.delta_y = rep.delta_y;
      q.classification = to_string(rep.classification);
    }
  } catch (const std::exception& ex) {
    q.error = ex.what();
  }
  return q;
}

Table run_quantum_sweep(const RunConfig& c, bool lobes) {
  Table t;
  const bool two_d = c.sweep2.has_value();
  std::vector<SystemParams> points;
  const std::vector<double> kerrs = two_d ? c.sweep2->values : std::vector<double>{c.params.kerr};
  for (double k : kerrs)
    for (double e : c.sweep->values) points.push_back(c.params.with_kerr(k).with_epsilon(e * c.params.k1));

  std::vector<QuantumPoint> results(points.size());
  detail::parallel_for(points.size(), thread_count(c),
                       [&](std::size_t i) { results[i] = quantum_point(c, points[i], lobes, true); });

  if (two_d) t.columns.push_back("kerr");
  if (lobes)
    t.columns.insert(t.columns.end(), {"eps_over_k1", "mean_phonon_1", "mean_phonon_2", "delta_y", "classification",
                                       "negativity", "renyi2"});
  else
    t.columns.insert(t.columns.end(), {"eps_over_k1", "negativity", "renyi2"});
  if (c.truncation_check) t.columns.insert(t.columns.end(), {"n_max_used", "truncation_rel_change"});
  t.columns.push_back("errors");

  for (const auto& q : results) {
    std::vector<std::string> row;
    if (two_d) row.push_back(format_double(q.kerr));
    row.push_back(format_double(q.eps_over_k1));
    if (lobes) {
      row.insert(row.end(), {format_double(q.n1), format_double(q.n2), format_double(q.delta_y), q.classification});
    }
    row.insert(row.end(), {format_double(q.negativity), format_double(q.renyi2)});
    if (c.truncation_check) row.insert(row.end(), {std::to_string(q.n_used), format_double(q.truncation_change)});
    row.push_back(csv_field(q.error));
    const bool failed = !q.error.empty() && std::isnan(q.n1);
    t.failed += failed ? 1 : 0;
    t.rows.push_back(std::move(row));
  }
  t.points = results.size();
  return t;
}

Table run_quantum_steady(const RunConfig& c) {
  Table t;
  t.points = 1;
  t.columns = {"n", "p_site1", "p_site2", "errors"};
  try {
    const FockSpace space(c.n_max);
    const SteadyState ss = steady_state(build_liouvillian(c.params, space));
    const DensityMatrix r1 = partial_trace(ss.rho, 1);
    const LobeReport rep = lobe_report(wigner(r1, c.grid));
    t.notes = {"mean_phonon_1=" + format_double(mean_phonon(ss.rho, 1)),
               "mean_phonon_2=" + format_double(mean_phonon(ss.rho, 2)),
               "classification=" + std::string(to_string(rep.classification)),
               "delta_y=" + format_double(rep.delta_y), "negativity=" + format_double(negativity(ss.rho)),
               "renyi2=" + format_double(renyi2(r1)), "residual=" + format_double(ss.residual)};
    const auto d1 = fock_distribution(ss.rho, 1);
    const auto d2 = fock_distribution(ss.rho, 2);
    for (std::size_t n = 0; n < d1.probabilities.size(); ++n)
      t.rows.push_back({std::to_string(n), format_double(d1.probabilities[n]), format_double(d2.probabilities[n]), ""});
  } catch (const std::exception& ex) {
    t.failed = 1;
    t.rows.push_back({"", "", "", csv_field(ex.what())});
  }
  return t;
}

Table run_wigner_export(const RunConfig& c) {
  Table t;
  t.points = 1;
  t.columns = {"x", "y", "w"};
  try {
    const FockSpace space(c.n_max);
    const SteadyState ss = steady_state(build_liouvillian(c.params, space));
    const WignerField f = wigner(partial_trace(ss.rho, 1), c.grid);
    t.notes = {"normalization=" + format_double(f.normalization()),
               "boundary_warning=" + std::string(f.boundary_warning ? "true" : "false")};
    for (int i = 0; i < c.grid.n_y; ++i)
      for (int j = 0; j < c.grid.n_x; ++j)
        t.rows.push_back({format_double(c.grid.x(j)), format_double(c.grid.y(i)), format_double(f.values(i, j))});
  } catch (const std::exception& ex) {
    t.failed = 1;
    t.columns.push_back("errors");
    t.rows.push_back({"", "", "", csv_field(ex.what())});
  }
  return t;
}

Table run_classical_scan(const RunConfig& c) {
  Table t;
  t.columns = {"param", "classification", "amplitude", "x1", "y1", "x2", "y2", "errors"};
  ClassicalSweepOptions o = c.classical;
  o.parameter = c.sweep->parameter == "kerr" ? SweepParameter::Kerr : SweepParameter::EpsilonOverK1;
  const auto table = classical_sweeps(c.params, c.sweep->values, o);
  for (const auto& pt : table) {
    if (pt.attractor) {
      const auto& a = *pt.attractor;
      t.rows.push_back({format_double(pt.value), to_string(a.kind), format_double(a.amplitude),
                        format_double(a.state.x1), format_double(a.state.y1), format_double(a.state.x2),
                        format_double(a.state.y2), ""});
    } else {
      ++t.failed;
      t.rows.push_back({format_double(pt.value), "", "", "", "", "", "", csv_field(pt.error)});
    }
  }
  t.points = table.size();
  return t;
}

Table run_sde_ensemble(const RunConfig& c) {
  Table t;
  t.columns = {"eps_over_k1", "mean_amp_sq", "std_err", "errors"};
  for (double e : c.sweep->values) {
    try {
      const auto r = ensemble_amplitude(c.params.with_epsilon(e * c.params.k1), c.sde, thread_count(c));
      t.rows.push_back({format_double(e), format_double(r.mean), format_double(r.std_err), ""});
    } catch (const std::exception& ex) {
      ++t.failed;
      t.rows.push_back({format_double(e), "", "", csv_field(ex.what())});
    }
  }
  t.points = c.sweep->values.size();
  return t;
}

}  // namespace

RunSummary run(const RunConfig& c, std::ostream& out) {
  c.validate();
  Table t;
  switch (c.mode) {
    case RunMode::ClassicalScan: t = run_classical_scan(c); break;
    case RunMode::QuantumSteady: t = run_quantum_steady(c); break;
    case RunMode::QuantumSweep: t = run_quantum_sweep(c, true); break;
    case RunMode::WignerExport: t = run_wigner_export(c); break;
    case RunMode::SdeEnsemble: t = run_sde_ensemble(c); break;
    case RunMode::EntanglementSweep: t = run_quantum_sweep(c, false); break;
  }
  out << "# qlcod " << QLCOD_VERSION << " mode=" << to_string(c.mode) << "\n";
  out << "# config=" << canonical_json(c) << "\n";
  out << "# seed=" << c.seed << "\n";
  for (const auto& n : t.notes) out << "# " << n << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "failed to write CSV output");
  return {t.points, t.failed};
}

RunSummary run(const RunConfig& c) {
  if (c.output.empty()) throw Error(ErrorCode::Io, "no output path configured");
  std::ofstream f(c.output, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot open " + c.output + " for writing");
  return run(c, f);
}

}  // namespace qlcod
