// qbath command-line front end.
//
//   qbath spectrum|evolve|steady|compare|sweep|selftest [options]
//   qbath figure N [options]
//
// Exit codes: 0 ok, 1 configuration error, 2 numerical invariant violation.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qbath/scenario.hpp"

namespace fs = std::filesystem;
using namespace qbath;

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string model;
  std::string tmax;
  std::string points;
  std::string temp;
  std::string label;
  int figure = 0;
  std::string axis = "temperature";
  std::vector<double> values;
};

void add_common(CLI::App* cmd, Options& o, bool with_figure = true) {
  cmd->add_option("--config", o.config, "key = value scenario file");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--model", o.model, "micro | phenom | both");
  cmd->add_option("--tmax", o.tmax, "time span in seconds, or auto");
  cmd->add_option("--points", o.points, "number of time samples");
  cmd->add_option("--temp", o.temp, "bath temperature in K");
  cmd->add_option("--label", o.label, "scenario label used in file names");
  if (with_figure) cmd->add_option("--figure", o.figure, "start from a figure preset (1..10)");
}

// preset -> config file -> flags. A multi-temperature preset collapses to one
// scenario when the temperature is fixed by a flag or swept.
std::vector<ScenarioConfig> scenarios(const Options& o, int figure, bool single = false) {
  std::vector<ScenarioConfig> list = figure > 0 ? figure_presets(figure) : std::vector<ScenarioConfig>{{}};
  if (list.size() > 1 && (single || !o.temp.empty())) {
    list.resize(1);
    list[0].label = "fig" + std::to_string(figure);
  }
  for (auto& c : list) {
    if (!o.config.empty()) c = load_config(o.config, c);
    if (!o.model.empty()) apply_setting(c, "models", o.model == "both" ? "micro,phenom" : o.model);
    if (!o.tmax.empty()) apply_setting(c, "t_max", o.tmax);
    if (!o.points.empty()) apply_setting(c, "n_points", o.points);
    if (!o.temp.empty()) apply_setting(c, "temperature", o.temp);
    if (!o.label.empty()) c.label = list.size() > 1 ? o.label + "_" + c.label : o.label;
    c.resolve();
  }
  return list;
}

fs::path out_dir(const Options& o) {
  fs::path d = o.out.empty() ? fs::path(".") : fs::path(o.out);
  fs::create_directories(d);
  return d;
}

void warn(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << text;
  std::cout << path.string() << "\n";
}

void evolve(const std::vector<ScenarioConfig>& list, const Options& o) {
  const fs::path dir = out_dir(o);
  for (const auto& c : list) {
    const Trajectory tr = run_scenario(c);
    warn(tr.warnings);
    for (const auto& s : tr.series)
      write_file(dir / (c.label + "_" + short_name(s.model) + ".csv"), csv_string(tr, s.model));
  }
}

void spectrum(const ScenarioConfig& c) {
  const SystemParams& p = c.params;
  const DressedFrame f = dressed_frame(p);
  const RateSet r = rate_set(p, f);
  const FairnessReport fr = fairness_check(p);
  const char* names = "abcd";
  for (std::size_t i = 0; i < 4; ++i) std::cout << "E_" << names[i] << " = " << format_number(f.energies[i]) << "\n";
  std::cout << "w_I = " << format_number(f.bohr_I) << "\n"
            << "w_II = " << format_number(f.bohr_II) << "\n"
            << "alpha = " << format_number(f.alpha) << "\n"
            << "eta = " << format_number(f.eta) << "\n"
            << "gamma(w_I) = " << format_number(r.gamma_I) << "\n"
            << "gamma_bar(w_I) = " << format_number(r.gamma_bar_I) << "\n"
            << "gamma(w_II) = " << format_number(r.gamma_II) << "\n"
            << "gamma_bar(w_II) = " << format_number(r.gamma_bar_II) << "\n"
            << "gamma(omega) = " << format_number(r.gamma_phen) << "\n"
            << "gamma_bar(omega) = " << format_number(r.gamma_bar_phen) << "\n"
            << "fairness worst deviation = " << format_number(fr.worst()) << (fr.unfair ? " (unfair)" : "") << "\n";
  if (fr.strong_damping) std::cerr << "warning: strong damping, gamma0 > 0.1 min(w_I, w_II)\n";
}

void print_matrix(const char* title, const Mat4& m) {
  std::cout << title << "\n";
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j)
      std::cout << "  " << format_number(m(i, j).real()) << (m(i, j).imag() < 0 ? "-" : "+")
                << format_number(std::abs(m(i, j).imag())) << "i";
    std::cout << "\n";
  }
}

void steady(const ScenarioConfig& c) {
  const SystemParams& p = c.params;
  const DressedFrame f = dressed_frame(p);
  const RateSet r = rate_set(p, f);
  auto metrics = [](const DensityMatrix4& comp) {
    const auto x = XStateElements::from_computational(comp);
    std::cout << "  concurrence = " << format_number(concurrence_x(x))
              << ", discord = " << format_number(discord_approx_q2(x))
              << ", linear_entropy = " << format_number(linear_entropy_q1(comp)) << "\n";
  };
  if (c.has(Model::Microscopic)) {
    const auto s = steady_state_microscopic(r, f, p.temperature);
    print_matrix("microscopic stationary state (dressed basis a,b,c,d):", s.matrix());
    metrics(change_basis(s.density(Tolerances::evolved()), f, Basis::Computational, Tolerances::evolved()));
  }
  if (c.has(Model::Phenomenological)) {
    const auto s = steady_state_phenom(p, r).density();
    print_matrix("phenomenological stationary state (computational basis 00,01,10,11):", s.matrix());
    metrics(s);
    print_matrix("same state, dressed basis:", steady_state_phenom_dressed(p, r, f).matrix());
  }
}

void compare(const std::vector<ScenarioConfig>& list, const Options& o) {
  for (const auto& c : list) {
    const ComparisonReport rep = compare_report(c);
    std::cout << format_report(rep);
    if (!o.out.empty())
      write_file(out_dir(o) / (c.label + "_compare.csv"),
                 report_csv_header() + "\n" + report_csv_row(rep, rep.params.temperature) + "\n");
  }
}

void run_sweep(const std::vector<ScenarioConfig>& list, const Options& o) {
  const ScenarioConfig& base = list.front();
  const SweepAxis axis = parse_sweep_axis(o.axis);
  const auto rows = sweep(base, axis, o.values);
  std::ostringstream os;
  write_sweep_csv(os, base, axis, rows);
  for (const auto& r : rows) warn(r.report.warnings);
  if (o.out.empty()) std::cout << os.str();
  else write_file(out_dir(o) / (base.label + "_sweep_" + to_string(axis) + ".csv"), os.str());
}

// analytic microscopic solution against the generic Lindblad integration
int selftest() {
  int failed = 0;
  for (int fig = 1; fig <= 7; ++fig) {
    const auto t0 = std::chrono::steady_clock::now();
    const ScenarioConfig c = figure_presets(fig)[0];
    const DressedFrame f = dressed_frame(c.params);
    const RateSet r = rate_set(c.params, f);
    const TimeGrid grid = TimeGrid::uniform(resolve_t_max(c), c.n_points);
    const auto rho0 = change_basis(initial_density(c), f, Basis::Dressed);
    const auto a = propagate_analytic_trajectory(DressedStateVector::from_density(initial_density(c), f), r, f, grid);
    const auto n = propagate_numeric(rho0, build_dissipator_oracle(c.params, r, f), grid,
                                     default_max_step(c.params, r));
    double worst = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k)
      worst = std::max(worst, max_abs_diff(a.states[k].matrix(), n.states[k].matrix()));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = worst <= 1e-7;
    failed += !ok;
    std::printf("%s fig%d max deviation %.3e (%.3f s)\n", ok ? "ok  " : "FAIL", fig, worst, secs);
  }
  return failed == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two coupled qubits with one qubit in a thermal bath: microscopic vs phenomenological master equations"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  Options o;
  int fig_n = 0;

  auto* cmd_spectrum = app.add_subcommand("spectrum", "dressed energies, Bohr frequencies and rates");
  auto* cmd_evolve = app.add_subcommand("evolve", "time evolution, one CSV per model");
  auto* cmd_steady = app.add_subcommand("steady", "closed-form stationary states");
  auto* cmd_figure = app.add_subcommand("figure", "run a figure preset, one CSV per model and temperature");
  auto* cmd_compare = app.add_subcommand("compare", "stationary comparison report");
  auto* cmd_sweep = app.add_subcommand("sweep", "comparison report over a parameter axis");
  auto* cmd_selftest = app.add_subcommand("selftest", "analytic vs numeric propagation on figure presets 1-7");
  for (auto* c : {cmd_spectrum, cmd_evolve, cmd_steady, cmd_compare, cmd_sweep}) add_common(c, o);
  add_common(cmd_figure, o, false);
  cmd_figure->add_option("N", fig_n, "figure number 1..10")->required();
  cmd_sweep->add_option("--axis", o.axis, "temperature | lambda | gamma0");
  cmd_sweep->add_option("--values", o.values, "comma-separated values")->delimiter(',')->check(CLI::Number)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*cmd_selftest) return selftest();
    if (*cmd_figure) {
      evolve(scenarios(o, fig_n), o);
      return 0;
    }
    const auto list = scenarios(o, o.figure, static_cast<bool>(*cmd_sweep));
    if (*cmd_spectrum) for (const auto& c : list) spectrum(c);
    else if (*cmd_evolve) evolve(list, o);
    else if (*cmd_steady) for (const auto& c : list) steady(c);
    else if (*cmd_compare) compare(list, o);
    else if (*cmd_sweep) run_sweep(list, o);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const OutOfRange& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const InvalidParams& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
