#pragma once

// Scenario layer: configuration, figure presets, trajectories with metrics,
// CSV output, and the microscopic-vs-phenomenological comparison.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <locale>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qbath/basis.hpp"
#include "qbath/core.hpp"
#include "qbath/errors.hpp"
#include "qbath/generator.hpp"
#include "qbath/metrics.hpp"
#include "qbath/microscopic.hpp"
#include "qbath/phenomenological.hpp"
#include "qbath/spectral_gap.hpp"
#include "qbath/system.hpp"

namespace qbath {

inline constexpr const char* kToolVersion = "qbath 0.1.0";

enum class InitialState { Ket10, Ket01, DressedA, Custom };
enum class Metric { Concurrence, Discord, LinearEntropy, Populations };
enum class Model { Microscopic, Phenomenological };

inline const char* to_string(InitialState s) {
  switch (s) {
    case InitialState::Ket10: return "ket10";
    case InitialState::Ket01: return "ket01";
    case InitialState::DressedA: return "dressed_a";
    case InitialState::Custom: return "custom";
  }
  return "?";
}

inline const char* to_string(Metric m) {
  switch (m) {
    case Metric::Concurrence: return "concurrence";
    case Metric::Discord: return "discord";
    case Metric::LinearEntropy: return "linear_entropy";
    case Metric::Populations: return "populations";
  }
  return "?";
}

inline const char* to_string(Model m) { return m == Model::Microscopic ? "microscopic" : "phenomenological"; }
inline const char* short_name(Model m) { return m == Model::Microscopic ? "micro" : "phenom"; }

/// Everything needed to run one scenario.
struct ScenarioConfig {
  SystemParams params;
  InitialState initial_state = InitialState::Ket10;
  Mat4 custom_rho;                 // computational basis, used when initial_state == Custom
  std::optional<double> t_max;     // empty: auto
  std::size_t n_points = 2000;
  std::vector<Metric> metrics{Metric::Concurrence, Metric::Discord, Metric::LinearEntropy};
  std::vector<Model> models{Model::Microscopic, Model::Phenomenological};
  std::string label = "scenario";
  std::optional<double> omega1, omega2;

  bool has(Metric m) const { return std::find(metrics.begin(), metrics.end(), m) != metrics.end(); }
  bool has(Model m) const { return std::find(models.begin(), models.end(), m) != models.end(); }

  /// Folds omega1/omega2 into params and checks the invariants. Throws ConfigError.
  void resolve() {
    if (omega1 || omega2) {
      const double w1 = omega1.value_or(omega2.value_or(0.0));
      const double w2 = omega2.value_or(w1);
      try {
        params = SystemParams::from_qubit_frequencies(w1, w2, params.lambda, params.gamma0, params.gamma_width,
                                                      params.omega0, params.temperature);
      } catch (const InvalidParams& e) {
        throw ConfigError(e.what());
      }
      omega1.reset();
      omega2.reset();
    }
    try {
      params.validate();
    } catch (const InvalidParams& e) {
      throw ConfigError(e.what());
    }
    if (n_points < 2) throw ConfigError("n_points must be >= 2");
    if (t_max && !(*t_max > 0.0)) throw ConfigError("t_max must be > 0");
    if (metrics.empty()) throw ConfigError("metrics must not be empty");
    if (models.empty()) throw ConfigError("models must not be empty");
  }
};

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline double parse_real(std::string_view key, std::string_view text, int line) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
    throw ConfigError("field '" + std::string(key) + "': not a number: '" + std::string(text) + "'", line);
  return v;
}

}  // namespace detail

inline Metric parse_metric(std::string_view s, int line = 0) {
  if (s == "concurrence") return Metric::Concurrence;
  if (s == "discord") return Metric::Discord;
  if (s == "linear_entropy") return Metric::LinearEntropy;
  if (s == "populations") return Metric::Populations;
  throw ConfigError("field 'metrics': unknown metric '" + std::string(s) + "'", line);
}

inline Model parse_model(std::string_view s, int line = 0) {
  if (s == "microscopic" || s == "micro") return Model::Microscopic;
  if (s == "phenomenological" || s == "phenom") return Model::Phenomenological;
  throw ConfigError("field 'models': unknown model '" + std::string(s) + "'", line);
}

/// Applies one `key = value` setting. Unknown keys and malformed values throw
/// ConfigError naming the field.
inline void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value, int line = 0) {
  using detail::parse_real;
  key = detail::trim(key);
  value = detail::trim(value);
  auto& p = cfg.params;
  if (key == "omega") p.omega = parse_real(key, value, line);
  else if (key == "lambda") p.lambda = parse_real(key, value, line);
  else if (key == "gamma0") p.gamma0 = parse_real(key, value, line);
  else if (key == "gamma_width") p.gamma_width = parse_real(key, value, line);
  else if (key == "omega0") p.omega0 = parse_real(key, value, line);
  else if (key == "temperature") p.temperature = parse_real(key, value, line);
  else if (key == "omega1") cfg.omega1 = parse_real(key, value, line);
  else if (key == "omega2") cfg.omega2 = parse_real(key, value, line);
  else if (key == "label") {
    if (value.empty()) throw ConfigError("field 'label': empty", line);
    cfg.label = std::string(value);
  } else if (key == "t_max") {
    if (value == "auto") cfg.t_max.reset();
    else cfg.t_max = parse_real(key, value, line);
  } else if (key == "n_points") {
    const double n = parse_real(key, value, line);
    if (n < 2 || n != std::floor(n) || n > 1e9) throw ConfigError("field 'n_points': must be an integer >= 2", line);
    cfg.n_points = static_cast<std::size_t>(n);
  } else if (key == "initial_state") {
    if (value == "ket10") cfg.initial_state = InitialState::Ket10;
    else if (value == "ket01") cfg.initial_state = InitialState::Ket01;
    else if (value == "dressed_a") cfg.initial_state = InitialState::DressedA;
    else if (value == "custom") cfg.initial_state = InitialState::Custom;
    else throw ConfigError("field 'initial_state': unknown state '" + std::string(value) + "'", line);
  } else if (key == "custom_rho") {
    // 32 reals: (re, im) of the 16 entries, row-major
    const auto parts = detail::split_list(value);
    if (parts.size() != 32) throw ConfigError("field 'custom_rho': expected 32 numbers (re, im pairs)", line);
    for (std::size_t k = 0; k < 16; ++k)
      cfg.custom_rho(k / 4, k % 4) = {parse_real(key, parts[2 * k], line), parse_real(key, parts[2 * k + 1], line)};
  } else if (key == "metrics") {
    cfg.metrics.clear();
    for (const auto& m : detail::split_list(value)) {
      const Metric mm = parse_metric(m, line);
      if (!cfg.has(mm)) cfg.metrics.push_back(mm);
    }
    if (cfg.metrics.empty()) throw ConfigError("field 'metrics': empty list", line);
  } else if (key == "models") {
    cfg.models.clear();
    for (const auto& m : detail::split_list(value)) {
      const Model mm = parse_model(m, line);
      if (!cfg.has(mm)) cfg.models.push_back(mm);
    }
    if (cfg.models.empty()) throw ConfigError("field 'models': empty list", line);
  } else {
    throw ConfigError("unknown field '" + std::string(key) + "'", line);
  }
}

/// Reads `key = value` lines on top of `base`. `#` starts a comment.
/// Does not call resolve(); the caller applies overrides first.
inline ScenarioConfig parse_config(std::istream& in, ScenarioConfig base = {}) {
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = raw;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = detail::trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line);
    const auto key = detail::trim(s.substr(0, eq));
    if (key.empty()) throw ConfigError("missing key before '='", line);
    apply_setting(base, key, s.substr(eq + 1), line);
  }
  return base;
}

inline ScenarioConfig load_config(const std::string& path, ScenarioConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, std::move(base));
}

// ---------------------------------------------------------------------------
// Figure presets

/// Preset parameters of figures 1..10. Figures 8-10 yield one config per
/// temperature (0.005, 0.05, 0.15 K).
inline std::vector<ScenarioConfig> figure_presets(int n) {
  if (n < 1 || n > 10) throw OutOfRange("figure number must be in 1..10, got " + std::to_string(n));
  ScenarioConfig c;
  c.models = {Model::Microscopic, Model::Phenomenological};
  c.initial_state = InitialState::Ket10;
  c.n_points = 2000;
  if (n == 1 || n == 2 || n == 3 || n == 8) c.metrics = {Metric::Concurrence};
  else if (n == 4 || n == 5 || n == 9) c.metrics = {Metric::Discord};
  else c.metrics = {Metric::LinearEntropy};

  if (n == 1) {
    c.params = {4e8, 10.0 * 4e8, 0.01 * 5e10, 5e10, 2.0 * 4e8, 0.0};
    c.label = "fig1";
    return {c};
  }
  if (n <= 7) {
    const double temp = (n % 2 == 0) ? 5e-4 : 1.5e-2;
    c.params = {4e9, 4e9, 0.001 * 5e10, 5e10, 2.0 * 4e9, temp};
    c.label = "fig" + std::to_string(n);
    return {c};
  }
  const double gamma0 = (n == 10 ? 0.01 : 0.001) * 5e5;
  std::vector<ScenarioConfig> out;
  for (const auto& [temp, tag] : {std::pair{0.005, "T0.005"}, {0.05, "T0.05"}, {0.15, "T0.15"}}) {
    c.params = {5e6, 4e4, gamma0, 5e5, 2.0 * 5e6, temp};
    c.label = "fig" + std::to_string(n) + "_" + tag;
    out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Running

/// 17 significant digits, '.' decimal point regardless of the global locale.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << v;
  return os.str();
}


/// Initial state in the computational basis.
inline DensityMatrix4 initial_density(const ScenarioConfig& cfg) {
  switch (cfg.initial_state) {
    case InitialState::Ket10: return validate_density(projector(ket(1, 0)));
    case InitialState::Ket01: return validate_density(projector(ket(0, 1)));
    case InitialState::DressedA: {
      const DressedFrame f = dressed_frame(cfg.params);
      return validate_density(to_computational(Mat4::diagonal({1.0, 0.0, 0.0, 0.0}), f));
    }
    case InitialState::Custom:
      try {
        return validate_density(cfg.custom_rho);
      } catch (const InvalidDensity& e) {
        throw ConfigError(std::string("field 'custom_rho': ") + e.what());
      }
  }
  throw ConfigError("unknown initial state");
}

/// Slowest relaxation rate of a model's generator.
inline double model_relaxation_gap(Model m, const SystemParams& p, const RateSet& r, const DressedFrame& f) {
  return relaxation_gap(m == Model::Microscopic ? build_dissipator_oracle(p, r, f) : phenom_generator(p, r));
}

/// Explicit t_max, or 10 / (slowest relaxation rate over the enabled models).
inline double resolve_t_max(const ScenarioConfig& cfg) {
  if (cfg.t_max) return *cfg.t_max;
  const DressedFrame f = dressed_frame(cfg.params);
  const RateSet r = rate_set(cfg.params, f);
  double gap = std::numeric_limits<double>::infinity();
  for (Model m : cfg.models) gap = std::min(gap, model_relaxation_gap(m, cfg.params, r, f));
  if (!(gap > 0.0) || !std::isfinite(gap))
    throw ConfigError("t_max = auto needs dissipation (gamma0 > 0); set t_max explicitly");
  return 10.0 / gap;
}

struct ModelSeries {
  Model model = Model::Microscopic;
  std::vector<DensityMatrix4> states;  // computational basis
  std::vector<double> concurrence, discord, linear_entropy;
  std::vector<std::array<double, 4>> populations;
  std::size_t discord_clamped = 0;
  bool non_x = false;

  const std::vector<double>& values(Metric m) const {
    switch (m) {
      case Metric::Concurrence: return concurrence;
      case Metric::Discord: return discord;
      case Metric::LinearEntropy: return linear_entropy;
      case Metric::Populations: break;
    }
    throw Error("populations are not a scalar series");
  }
};

struct Trajectory {
  ScenarioConfig cfg;
  double t_max = 0.0;
  bool auto_span = false;
  FairnessReport fairness;
  std::vector<double> times;
  std::vector<ModelSeries> series;
  std::vector<std::string> warnings;

  const ModelSeries& of(Model m) const {
    for (const auto& s : series)
      if (s.model == m) return s;
    throw Error(std::string("model not in trajectory: ") + to_string(m));
  }
};

namespace detail {

constexpr double kXTolerance = 1e-10;

/// Metrics of one snapshot. `dressed` carries the microscopic state so the
/// Q-element route can be used.
inline void record_metrics(ModelSeries& out, const ScenarioConfig& cfg, const DensityMatrix4& comp,
                           const DressedStateVector* dressed, const DressedFrame& f) {
  const bool is_x = XStateElements::off_x_magnitude(comp.matrix()) <= kXTolerance;
  std::optional<XStateElements> x;
  if (is_x) {
    using C = DressedStateVector::Coherence;
    if (dressed && std::abs(dressed->coherences[C::ad]) <= kXTolerance) x = x_elements_from_dressed(*dressed, f);
    else x = XStateElements::from_computational(comp);
  } else {
    out.non_x = true;
  }
  if (cfg.has(Metric::Concurrence)) out.concurrence.push_back(x ? concurrence_x(*x) : concurrence_general(comp));
  if (cfg.has(Metric::Discord)) {
    if (x) {
      const DiscordBreakdown d = discord_approx_q2_breakdown(*x);
      if (d.clamped && d.raw < -1e-9) ++out.discord_clamped;
      out.discord.push_back(d.value);
    } else {
      out.discord.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  if (cfg.has(Metric::LinearEntropy)) out.linear_entropy.push_back(x ? linear_entropy_q1(*x) : linear_entropy_q1(comp));
  if (cfg.has(Metric::Populations)) {
    const Mat4& m = comp.matrix();
    out.populations.push_back({m(0, 0).real(), m(1, 1).real(), m(2, 2).real(), m(3, 3).real()});
  }
  out.states.push_back(comp);
}

inline ModelSeries run_micro(const ScenarioConfig& cfg, const DensityMatrix4& rho0, const RateSet& r,
                             const DressedFrame& f, const TimeGrid& grid) {
  const Tolerances tol = Tolerances::evolved();
  const DensityMatrix4 rho0_d = change_basis(rho0, f, Basis::Dressed, tol);
  StateTrajectory traj;
  try {
    traj = propagate_analytic_trajectory(DressedStateVector::from_matrix(rho0_d.matrix()), r, f, grid, tol);
  } catch (const DegenerateRates&) {
    // one channel without dissipation: fall back to the generator
    traj = propagate_numeric(rho0_d, build_dissipator_oracle(cfg.params, r, f), grid, default_max_step(cfg.params, r),
                             tol);
  }
  ModelSeries out;
  out.model = Model::Microscopic;
  for (const auto& st : traj.states) {
    const DressedStateVector dv = DressedStateVector::from_matrix(st.matrix());
    record_metrics(out, cfg, change_basis(st, f, Basis::Computational, tol), &dv, f);
  }
  return out;
}

inline ModelSeries run_phenom(const ScenarioConfig& cfg, const DensityMatrix4& rho0, const RateSet& r,
                              const DressedFrame& f, const TimeGrid& grid) {
  const StateTrajectory traj = propagate_phenom(rho0, cfg.params, r, grid);
  ModelSeries out;
  out.model = Model::Phenomenological;
  for (const auto& st : traj.states) record_metrics(out, cfg, st, nullptr, f);
  return out;
}

}  // namespace detail

/// Runs every enabled model on a uniform grid of cfg.n_points samples.
inline Trajectory run_scenario(ScenarioConfig cfg) {
  cfg.resolve();
  Trajectory out;
  out.cfg = cfg;
  out.auto_span = !cfg.t_max.has_value();
  out.t_max = resolve_t_max(cfg);
  out.fairness = fairness_check(cfg.params);
  const TimeGrid grid = TimeGrid::uniform(out.t_max, cfg.n_points);
  out.times = grid.times;

  const DressedFrame f = dressed_frame(cfg.params);
  const RateSet r = rate_set(cfg.params, f);
  const DensityMatrix4 rho0 = initial_density(cfg);

  if (out.fairness.strong_damping)
    out.warnings.push_back("strong damping: gamma0 > 0.1 min(w_I, w_II); weak-coupling assumptions are doubtful");
  if (cfg.has(Model::Microscopic) && cfg.params.lambda < 10.0 * r.max_rate())
    out.warnings.push_back("lambda < 10 x max rate: Bohr frequencies nearly degenerate, secular approximation doubtful");
  if (out.fairness.unfair)
    out.warnings.push_back("bath quantities at the Bohr frequencies differ from those at omega by more than " +
                           std::to_string(std::lround(100.0 * out.fairness.threshold)) + "%");

  for (Model m : cfg.models) {
    ModelSeries s = m == Model::Microscopic ? detail::run_micro(cfg, rho0, r, f, grid)
                                            : detail::run_phenom(cfg, rho0, r, f, grid);
    if (s.non_x && cfg.has(Metric::Discord))
      out.warnings.push_back(std::string(short_name(m)) + ": state is not X-shaped; discord reported as nan");
    if (s.discord_clamped > 0)
      out.warnings.push_back(std::string(short_name(m)) + ": approximate discord negative at " +
                             std::to_string(s.discord_clamped) + " samples, clamped to 0");
    out.series.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

inline void write_metadata(std::ostream& os, const Trajectory& tr) {
  const auto& c = tr.cfg;
  const auto& p = c.params;
  const auto& fr = tr.fairness;
  os << "# " << kToolVersion << "\n";
  os << "# label = " << c.label << "\n";
  os << "# omega = " << format_number(p.omega) << "\n";
  os << "# lambda = " << format_number(p.lambda) << "\n";
  os << "# gamma0 = " << format_number(p.gamma0) << "\n";
  os << "# gamma_width = " << format_number(p.gamma_width) << "\n";
  os << "# omega0 = " << format_number(p.omega0) << "\n";
  os << "# temperature = " << format_number(p.temperature) << "\n";
  os << "# initial_state = " << to_string(c.initial_state) << "\n";
  os << "# t_max = " << format_number(tr.t_max) << (tr.auto_span ? " (auto)" : "") << "\n";
  os << "# n_points = " << c.n_points << "\n";
  os << "# fairness j_dev_I = " << format_number(fr.j_dev_I) << ", j_dev_II = " << format_number(fr.j_dev_II)
     << ", n_dev_I = " << format_number(fr.n_dev_I) << ", n_dev_II = " << format_number(fr.n_dev_II)
     << ", threshold = " << format_number(fr.threshold) << ", unfair = " << (fr.unfair ? "yes" : "no")
     << ", strong_damping = " << (fr.strong_damping ? "yes" : "no") << "\n";
  for (const auto& w : tr.warnings) os << "# warning: " << w << "\n";
}

/// One model's series: header comments, a column header row, n_points rows.
inline void write_csv(std::ostream& os, const Trajectory& tr, Model m) {
  const ModelSeries& s = tr.of(m);
  const auto& c = tr.cfg;
  write_metadata(os, tr);
  os << "# model = " << to_string(m) << "\n";
  os << "t";
  for (Metric k : c.metrics) {
    if (k == Metric::Populations) os << ",p00,p01,p10,p11";
    else os << "," << to_string(k);
  }
  os << "\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    os << format_number(tr.times[i]);
    for (Metric k : c.metrics) {
      if (k == Metric::Populations) {
        for (double v : s.populations[i]) os << "," << format_number(v);
      } else {
        os << "," << format_number(s.values(k)[i]);
      }
    }
    os << "\n";
  }
}

inline std::string csv_string(const Trajectory& tr, Model m) {
  std::ostringstream os;
  write_csv(os, tr, m);
  return os.str();
}

// ---------------------------------------------------------------------------
// Comparison

/// Mean over the final `fraction` of the samples (at least one sample).
inline double trailing_mean(const std::vector<double>& v, double fraction = 0.05) {
  if (v.empty()) throw Error("trailing_mean of an empty series");
  const std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(fraction * v.size())));
  double acc = 0.0;
  for (std::size_t i = v.size() - n; i < v.size(); ++i) acc += v[i];
  return acc / static_cast<double>(n);
}

/// Time of the first sample from which the series stays <= zero_tol for at
/// least min_run consecutive samples, counted only after the series has been
/// positive (so a state that starts unentangled does not count).
inline std::optional<double> sustained_zero_onset(const std::vector<double>& times, const std::vector<double>& v,
                                                  double zero_tol = 1e-12, std::size_t min_run = 5) {
  bool seen_positive = false;
  std::size_t run = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] > zero_tol) {
      seen_positive = true;
      run = 0;
      continue;
    }
    if (!seen_positive) continue;
    if (++run >= min_run) return times[i + 1 - run];
  }
  return std::nullopt;
}

struct MetricComparison {
  Metric metric = Metric::Concurrence;
  double micro = 0.0;
  double phenom = 0.0;
  double relative_difference = 0.0;  // (phenom - micro) / micro; nan when micro == 0
};

struct ComparisonReport {
  std::string label;
  SystemParams params;
  double t_max = 0.0;
  std::vector<MetricComparison> metrics;
  std::optional<bool> micro_thermal;   // Gibbs check of the microscopic stationary state
  double micro_gibbs_deviation = 0.0;  // final microscopic sample vs Gibbs, max entry
  std::optional<bool> phenom_thermal;
  double phenom_dressed_coherence = 0.0;  // max(|rho_bc|, |rho_ad|) of the phenomenological stationary state
  std::optional<double> sudden_death_micro, sudden_death_phenom;
  FairnessReport fairness;
  std::vector<std::string> warnings;

  const MetricComparison& of(Metric m) const {
    for (const auto& c : metrics)
      if (c.metric == m) return c;
    throw Error(std::string("metric not in report: ") + to_string(m));
  }
};

inline double relative_difference(double micro, double phenom) {
  if (micro == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (phenom - micro) / micro;
}

/// Runs both models and compares stationary metrics, thermal character and
/// concurrence sudden death.
inline ComparisonReport compare_report(ScenarioConfig cfg) {
  if (!cfg.has(Model::Microscopic) || !cfg.has(Model::Phenomenological))
    throw ConfigError("comparison needs both models enabled");
  cfg.metrics = {Metric::Concurrence, Metric::Discord, Metric::LinearEntropy};
  const Trajectory tr = run_scenario(cfg);
  const auto& mic = tr.of(Model::Microscopic);
  const auto& phe = tr.of(Model::Phenomenological);

  ComparisonReport rep;
  rep.label = tr.cfg.label;
  rep.params = tr.cfg.params;
  rep.t_max = tr.t_max;
  rep.fairness = tr.fairness;
  rep.warnings = tr.warnings;
  for (Metric m : tr.cfg.metrics) {
    MetricComparison c;
    c.metric = m;
    c.micro = trailing_mean(mic.values(m));
    c.phenom = trailing_mean(phe.values(m));
    c.relative_difference = relative_difference(c.micro, c.phenom);
    rep.metrics.push_back(c);
  }

  const SystemParams& p = tr.cfg.params;
  const DressedFrame f = dressed_frame(p);
  const RateSet r = rate_set(p, f);
  try {
    const DressedStateVector gibbs = steady_state_microscopic(r, f, p.temperature);
    rep.micro_thermal = true;
    const Mat4 last = to_dressed(mic.states.back().matrix(), f);
    rep.micro_gibbs_deviation = max_abs_diff(last, gibbs.matrix());
  } catch (const DegenerateRates&) {
    rep.warnings.push_back("no dissipation: stationary states undefined");
  } catch (const Error&) {
    rep.micro_thermal = false;
  }
  try {
    const DensityMatrix4 ps = steady_state_phenom_dressed(p, r, f, Tolerances::evolved());
    rep.phenom_dressed_coherence = std::max(std::abs(ps(1, 2)), std::abs(ps(0, 3)));
    if (rep.phenom_dressed_coherence > 1e-10) {
      rep.phenom_thermal = false;
    } else {
      const DressedStateVector gibbs = steady_state_gibbs(f, p.temperature);
      double dev = 0.0;
      for (std::size_t i = 0; i < 4; ++i) dev = std::max(dev, std::abs(ps(i, i).real() - gibbs.populations[i]));
      rep.phenom_thermal = dev <= 1e-9;
    }
  } catch (const DegenerateRates&) {
  }

  rep.sudden_death_micro = sustained_zero_onset(tr.times, mic.concurrence);
  rep.sudden_death_phenom = sustained_zero_onset(tr.times, phe.concurrence);
  return rep;
}

namespace detail {
inline std::string yes_no(const std::optional<bool>& b) { return b ? (*b ? "yes" : "no") : "undetermined"; }
inline std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : "none"; }
}  // namespace detail

inline std::string format_report(const ComparisonReport& r) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "scenario " << r.label << "  (t_max = " << format_number(r.t_max) << " s)\n";
  os << std::left << std::setw(16) << "metric" << std::setw(26) << "microscopic" << std::setw(26)
     << "phenomenological" << "relative difference\n";
  for (const auto& m : r.metrics) {
    os << std::setw(16) << to_string(m.metric) << std::setw(26) << format_number(m.micro) << std::setw(26)
       << format_number(m.phenom);
    if (std::isnan(m.relative_difference)) os << "n/a\n";
    else os << std::fixed << std::setprecision(1) << 100.0 * m.relative_difference << " %\n" << std::defaultfloat;
  }
  os << "microscopic stationary state thermal (Gibbs): " << detail::yes_no(r.micro_thermal)
     << "  (final sample deviation " << format_number(r.micro_gibbs_deviation) << ")\n";
  os << "phenomenological stationary state thermal: " << detail::yes_no(r.phenom_thermal)
     << "  (max dressed coherence " << format_number(r.phenom_dressed_coherence) << ")\n";
  os << "concurrence sudden death: micro " << detail::opt_number(r.sudden_death_micro) << ", phenom "
     << detail::opt_number(r.sudden_death_phenom) << "\n";
  for (const auto& w : r.warnings) os << "warning: " << w << "\n";
  return os.str();
}

inline std::string report_csv_header() {
  return "value,t_max,micro_concurrence,phenom_concurrence,rel_concurrence,micro_discord,phenom_discord,"
         "rel_discord,micro_linear_entropy,phenom_linear_entropy,rel_linear_entropy,micro_thermal,"
         "phenom_thermal,phenom_dressed_coherence,sudden_death_micro,sudden_death_phenom";
}

inline std::string report_csv_row(const ComparisonReport& r, double value) {
  std::ostringstream os;
  os << format_number(value) << "," << format_number(r.t_max);
  for (Metric m : {Metric::Concurrence, Metric::Discord, Metric::LinearEntropy}) {
    const auto& c = r.of(m);
    os << "," << format_number(c.micro) << "," << format_number(c.phenom) << ","
       << format_number(c.relative_difference);
  }
  os << "," << detail::yes_no(r.micro_thermal) << "," << detail::yes_no(r.phenom_thermal) << ","
     << format_number(r.phenom_dressed_coherence) << "," << detail::opt_number(r.sudden_death_micro) << ","
     << detail::opt_number(r.sudden_death_phenom);
  return os.str();
}

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepAxis { Temperature, Lambda, Gamma0 };

inline const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::Temperature: return "temperature";
    case SweepAxis::Lambda: return "lambda";
    case SweepAxis::Gamma0: return "gamma0";
  }
  return "?";
}

inline SweepAxis parse_sweep_axis(std::string_view s) {
  if (s == "temperature") return SweepAxis::Temperature;
  if (s == "lambda") return SweepAxis::Lambda;
  if (s == "gamma0") return SweepAxis::Gamma0;
  throw ConfigError("unknown sweep axis '" + std::string(s) + "'");
}

struct SweepRow {
  double value = 0.0;
  ComparisonReport report;
};

/// One compare_report per value, in the order given.
inline std::vector<SweepRow> sweep(const ScenarioConfig& base, SweepAxis axis, const std::vector<double>& values) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (double v : values) {
    ScenarioConfig c = base;
    switch (axis) {
      case SweepAxis::Temperature: c.params.temperature = v; break;
      case SweepAxis::Lambda: c.params.lambda = v; break;
      case SweepAxis::Gamma0: c.params.gamma0 = v; break;
    }
    rows.push_back({v, compare_report(c)});
  }
  return rows;
}

inline void write_sweep_csv(std::ostream& os, const ScenarioConfig& base, SweepAxis axis,
                            const std::vector<SweepRow>& rows) {
  os << "# " << kToolVersion << "\n";
  os << "# label = " << base.label << "\n";
  os << "# sweep axis = " << to_string(axis) << "\n";
  os << report_csv_header() << "\n";
  for (const auto& r : rows) os << report_csv_row(r.report, r.value) << "\n";
}

}  // namespace qbath
