#pragma once

// Command-line front end: spectrum, wavefunction, table and sweep
// subcommands writing CSV or JSON. `run` is what the executable calls; it
// takes the argument list without the program name so tests can drive it.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rashba_dot/error.hpp"
#include "rashba_dot/spectral_solver.hpp"
#include "rashba_dot/table_reference.hpp"
#include "rashba_dot/units.hpp"
#include "rashba_dot/wavefunction.hpp"

namespace rashba_dot::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 2,
  kNumericalFailure = 3,
  kBadLevelIndex = 4,
  kTableMismatch = 5,
};

struct GlobalOptions {
  std::string format = "csv";
  std::string out;
  int grid = 2000;
  double tol = 1e-10;
  int jobs = 1;

  ScanSpec scan() const {
    ScanSpec s;
    s.grid_points = grid;
    s.refine_tol = tol;
    return s;
  }
  bool json() const { return format == "json"; }
};

struct SpectrumOptions {
  double v = 0.0;
  double beta = 0.0;
  int m = 0;
  bool physical = false;
  PhysicalInputs inputs;
};

struct WavefunctionOptions {
  double v = 0.0;
  double beta = 0.0;
  int m = 0;
  std::optional<int> level;
  std::optional<double> energy;
  double energy_tol = 1e-3;
  double rmax = 3.0;
  int samples = 300;
};

struct TableOptions {
  double tol = 0.01;
};

struct SweepOptions {
  double v = 0.0;
  std::string beta_range;
  std::vector<int> m_list;
};

/// Thrown by command bodies for conditions that map to a specific exit code.
struct CommandFailure {
  int code;
  std::string message;
};

// ---------------------------------------------------------------------------
// Formatting
// ---------------------------------------------------------------------------

inline std::string format_number(const char* spec, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

/// Energies: six significant digits.
inline std::string format_energy(double e) { return format_number("%.6g", e); }

inline std::string format_sample(double x) { return format_number("%.10g", x); }

/// Evaluates fn(0..count-1) on up to `jobs` threads; results keep index order.
template <class Fn>
auto parallel_map(std::size_t count, int jobs, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using Result = decltype(fn(std::size_t{}));
  std::vector<Result> results(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        results[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::clamp(jobs, 1, 256));
  if (threads == 1 || count <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(threads, count); ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

inline nlohmann::json spectrum_json(const EnergySpectrum& s) {
  nlohmann::json diag = nlohmann::json::array();
  for (const auto& d : s.diagnostics) diag.push_back({{"e", d.e}, {"relative_det", d.relative_det}});
  return {{"params", {{"v", s.params.v}, {"beta", s.params.beta}, {"m", s.params.m}}},
          {"window", {s.window_lo, s.window_hi}},
          {"levels", s.levels},
          {"diagnostics", diag}};
}

inline std::string render_spectrum(const EnergySpectrum& s, const GlobalOptions& g,
                                   std::optional<double> energy_scale) {
  if (g.json()) {
    nlohmann::json j = spectrum_json(s);
    if (energy_scale) {
      std::vector<double> mev;
      for (double e : s.levels) mev.push_back(e * *energy_scale);
      j["levels_meV"] = mev;
    }
    return j.dump(2) + "\n";
  }
  std::string text = energy_scale ? "index,e,E_meV\n" : "index,e\n";
  for (std::size_t i = 0; i < s.levels.size(); ++i) {
    text += std::to_string(i) + "," + format_energy(s.levels[i]);
    if (energy_scale) text += "," + format_energy(s.levels[i] * *energy_scale);
    text += "\n";
  }
  return text;
}

// ---------------------------------------------------------------------------
// Commands. Each returns the document to emit; failures throw.
// ---------------------------------------------------------------------------

inline std::string spectrum_command(const SpectrumOptions& o, const GlobalOptions& g) {
  DotParameters params{o.v, o.beta, o.m};
  std::optional<double> scale;
  if (o.physical) {
    const DimensionlessInputs d = to_dimensionless(o.inputs);
    params.v = d.v;
    params.beta = d.beta;
    scale = d.energy_scale;
  }
  return render_spectrum(find_spectrum(params, g.scan()), g, scale);
}

struct WavefunctionResult {
  BoundState state;
  std::size_t level_index = 0;
  std::string document;
  std::string provenance;
};

inline WavefunctionResult wavefunction_command(const WavefunctionOptions& o, const GlobalOptions& g) {
  if (o.samples < 2) throw CommandFailure{kUsage, "--samples must be at least 2"};
  if (!(o.rmax > 0.0)) throw CommandFailure{kUsage, "--rmax must be positive"};
  const DotParameters params{o.v, o.beta, o.m};
  const EnergySpectrum spectrum = find_spectrum(params, g.scan());

  WavefunctionResult result;
  if (o.energy) {
    auto best = spectrum.levels.end();
    for (auto it = spectrum.levels.begin(); it != spectrum.levels.end(); ++it)
      if (best == spectrum.levels.end() || std::abs(*it - *o.energy) < std::abs(*best - *o.energy)) best = it;
    if (best == spectrum.levels.end() || std::abs(*best - *o.energy) > o.energy_tol) {
      throw CommandFailure{kBadLevelIndex, "no level within " + format_energy(o.energy_tol) + " of e = " +
                                               format_energy(*o.energy)};
    }
    result.level_index = static_cast<std::size_t>(best - spectrum.levels.begin());
  } else {
    const int level = o.level.value_or(0);
    if (level < 0 || static_cast<std::size_t>(level) >= spectrum.levels.size()) {
      throw CommandFailure{kBadLevelIndex, "level index " + std::to_string(level) + " out of range; spectrum has " +
                                               std::to_string(spectrum.levels.size()) + " levels"};
    }
    result.level_index = static_cast<std::size_t>(level);
  }

  const BoundState state = normalize(solve_coefficients(params, spectrum.levels[result.level_index]));
  result.state = state;

  std::vector<SpinorSample> samples;
  samples.reserve(static_cast<std::size_t>(o.samples));
  for (int i = 0; i < o.samples; ++i) {
    const double r = (i + 1 == o.samples) ? o.rmax : o.rmax * i / (o.samples - 1);
    samples.push_back(evaluate_radial(state, r));
  }

  result.provenance = "# v=" + format_sample(o.v) + " beta=" + format_sample(o.beta) + " m=" + std::to_string(o.m) +
                      " level=" + std::to_string(result.level_index) + "\n# e=" + format_sample(state.e) +
                      "\n# c1=" + format_sample(state.c1) + " c2=" + format_sample(state.c2) +
                      " d1=" + format_sample(state.d1) + " d2=" + format_sample(state.d2) + "\n";

  if (g.json()) {
    std::vector<double> rs, us, ws;
    for (const auto& s : samples) {
      rs.push_back(s.r);
      us.push_back(s.u);
      ws.push_back(s.w);
    }
    nlohmann::json j{{"params", {{"v", o.v}, {"beta", o.beta}, {"m", o.m}}},
                     {"level_index", result.level_index},
                     {"e", state.e},
                     {"coefficients", {{"c1", state.c1}, {"c2", state.c2}, {"d1", state.d1}, {"d2", state.d2}}},
                     {"samples", {{"r", rs}, {"u", us}, {"w", ws}}}};
    result.document = j.dump(2) + "\n";
  } else {
    result.document = "r,u,w\n";
    for (const auto& s : samples)
      result.document += format_sample(s.r) + "," + format_sample(s.u) + "," + format_sample(s.w) + "\n";
  }
  return result;
}

struct TableRowResult {
  const ReferenceRow* reference = nullptr;
  EnergySpectrum spectrum;
  std::vector<CellComparison> cells;
};

inline std::vector<TableRowResult> compute_table(const GlobalOptions& g, double tol) {
  const auto& rows = reference_table();
  return parallel_map(rows.size(), g.jobs, [&](std::size_t i) {
    TableRowResult r;
    r.reference = &rows[i];
    r.spectrum = find_spectrum({rows[i].v, rows[i].beta(), rows[i].m}, g.scan());
    r.cells = compare_levels(r.spectrum.levels, rows[i].levels, tol);
    return r;
  });
}

struct TableReport {
  std::string document;
  std::size_t cells = 0;
  std::size_t mismatches = 0;
};

inline TableReport table_command(const TableOptions& o, const GlobalOptions& g) {
  const std::vector<TableRowResult> rows = compute_table(g, o.tol);
  TableReport report;
  nlohmann::json jrows = nlohmann::json::array();
  std::string csv = "m,v,beta,level_index,e_computed,e_reference,delta,status\n";
  for (const auto& row : rows) {
    const ReferenceRow& ref = *row.reference;
    nlohmann::json jcells = nlohmann::json::array();
    for (const auto& c : row.cells) {
      ++report.cells;
      if (c.status != CellStatus::Pass) ++report.mismatches;
      const bool both = c.has_computed && c.has_reference;
      csv += std::to_string(ref.m) + "," + format_energy(ref.v) + "," + format_energy(ref.beta()) + "," +
             std::to_string(c.index) + "," + (c.has_computed ? format_energy(c.computed) : "") + "," +
             (c.has_reference ? format_number("%.2f", c.reference) : "") + "," +
             (both ? format_number("%.4f", c.computed - c.reference) : "") + "," + to_string(c.status) + "\n";
      nlohmann::json jc{{"level_index", c.index}, {"status", to_string(c.status)}};
      jc["e_computed"] = c.has_computed ? nlohmann::json(c.computed) : nlohmann::json(nullptr);
      jc["e_reference"] = c.has_reference ? nlohmann::json(c.reference) : nlohmann::json(nullptr);
      jcells.push_back(jc);
    }
    jrows.push_back({{"m", ref.m}, {"v", ref.v}, {"beta", ref.beta()}, {"cells", jcells}});
  }
  report.document = g.json() ? nlohmann::json{{"tolerance", o.tol}, {"rows", jrows}}.dump(2) + "\n" : csv;
  return report;
}

/// "LO:HI:STEP" -> LO, LO+STEP, ... up to HI (inclusive within 1e-9 STEP).
inline std::vector<double> parse_range(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CommandFailure{kUsage, "malformed range '" + text + "'"};
    }
  }
  if (parts.size() != 3 || !(parts[2] > 0.0) || !(parts[1] >= parts[0]) || !std::isfinite(parts[0]) ||
      !std::isfinite(parts[1])) {
    throw CommandFailure{kUsage, "range must be LO:HI:STEP with STEP > 0 and HI >= LO"};
  }
  std::vector<double> values;
  for (long i = 0;; ++i) {
    const double x = parts[0] + static_cast<double>(i) * parts[2];
    if (x > parts[1] + 1e-9 * parts[2]) break;
    values.push_back(x);
  }
  return values;
}

inline std::string sweep_command(const SweepOptions& o, const GlobalOptions& g) {
  const std::vector<double> betas = parse_range(o.beta_range);
  std::vector<int> ms = o.m_list;
  if (ms.empty()) throw CommandFailure{kUsage, "--m-list must not be empty"};
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());

  struct Item {
    double beta;
    int m;
  };
  std::vector<Item> items;
  for (double b : betas)
    for (int m : ms) items.push_back({b, m});
  const auto spectra = parallel_map(items.size(), g.jobs, [&](std::size_t i) {
    return find_spectrum({o.v, items[i].beta, items[i].m}, g.scan());
  });

  if (g.json()) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < items.size(); ++i)
      for (std::size_t k = 0; k < spectra[i].levels.size(); ++k)
        rows.push_back({{"beta", items[i].beta}, {"m", items[i].m}, {"level_index", k}, {"e", spectra[i].levels[k]}});
    return nlohmann::json{{"v", o.v}, {"rows", rows}}.dump(2) + "\n";
  }
  std::string csv = "beta,m,level_index,e\n";
  for (std::size_t i = 0; i < items.size(); ++i)
    for (std::size_t k = 0; k < spectra[i].levels.size(); ++k)
      csv += format_energy(items[i].beta) + "," + std::to_string(items[i].m) + "," + std::to_string(k) + "," +
             format_energy(spectra[i].levels[k]) + "\n";
  return csv;
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline int emit(const std::string& text, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
  if (g.out.empty()) {
    out << text;
    return kSuccess;
  }
  std::ofstream file(g.out, std::ios::binary);
  if (!file) {
    err << "error: cannot open " << g.out << " for writing\n";
    return kUsage;
  }
  file << text;
  return file ? kSuccess : kUsage;
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bound states of an electron in a circular quantum dot with Rashba coupling", "rashba_dot"};
  app.require_subcommand(1);

  GlobalOptions g;
  auto add_globals = [&g](CLI::App* a, bool with_tol) {
    a->add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    a->add_option("--out", g.out, "Write output to PATH instead of stdout");
    a->add_option("--grid", g.grid, "Energy grid points for the root scan")->check(CLI::Range(100, 10000000));
    if (with_tol) a->add_option("--tol", g.tol, "Root refinement tolerance")->check(CLI::PositiveNumber);
    a->add_option("--jobs", g.jobs, "Worker threads")->check(CLI::Range(1, 256));
  };
  add_globals(&app, true);

  SpectrumOptions so;
  CLI::App* spectrum = app.add_subcommand("spectrum", "Energy levels for one (v, beta, m)");
  add_globals(spectrum, true);
  CLI::Option* sv = spectrum->add_option("--v", so.v, "Dimensionless well depth");
  spectrum->add_option("--beta", so.beta, "Dimensionless Rashba strength");
  spectrum->add_option("--m", so.m, "Angular number of the spin-up component");
  CLI::Option* phys = spectrum->add_flag("--physical", so.physical, "Read laboratory units instead of --v/--beta");
  CLI::Option* mass = spectrum->add_option("--mass", so.inputs.effective_mass, "Effective mass / m_e");
  CLI::Option* radius = spectrum->add_option("--radius", so.inputs.dot_radius, "Dot radius in nm");
  CLI::Option* depth = spectrum->add_option("--depth", so.inputs.well_depth, "Well depth in meV");
  CLI::Option* rashba = spectrum->add_option("--rashba", so.inputs.rashba_coefficient, "Rashba alpha in meV nm");
  for (CLI::Option* o : {mass, radius, depth, rashba}) o->needs(phys);
  sv->excludes(phys);

  WavefunctionOptions wo;
  CLI::App* wave = app.add_subcommand("wavefunction", "Sampled radial wave function of one level");
  add_globals(wave, true);
  wave->add_option("--v", wo.v, "Dimensionless well depth")->required();
  wave->add_option("--beta", wo.beta, "Dimensionless Rashba strength");
  wave->add_option("--m", wo.m, "Angular number of the spin-up component");
  CLI::Option* level = wave->add_option("--level", wo.level, "Level index (0 = lowest)");
  CLI::Option* energy = wave->add_option("--energy", wo.energy, "Select the level nearest this energy");
  level->excludes(energy);
  wave->add_option("--energy-tol", wo.energy_tol, "Accepted distance for --energy")->needs(energy);
  wave->add_option("--rmax", wo.rmax, "Largest sampled radius");
  wave->add_option("--samples", wo.samples, "Number of evenly spaced samples on [0, rmax]");

  TableOptions to;
  CLI::App* table = app.add_subcommand("table", "Recompute the reference table and compare");
  add_globals(table, false);
  table->add_option("--tol", to.tol, "Allowed |delta e| per cell")->check(CLI::PositiveNumber);

  SweepOptions sw;
  CLI::App* sweep = app.add_subcommand("sweep", "Spectra over a range of beta and a list of m");
  add_globals(sweep, true);
  sweep->add_option("--v", sw.v, "Dimensionless well depth")->required();
  sweep->add_option("--beta-range", sw.beta_range, "LO:HI:STEP")->required();
  sweep->add_option("--m-list", sw.m_list, "Comma-separated angular numbers")->delimiter(',')->required();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (*spectrum) {
      if (!so.physical && sv->count() == 0) throw CommandFailure{kUsage, "spectrum needs --v (or --physical)"};
      if (so.physical && (mass->count() == 0 || radius->count() == 0 || depth->count() == 0)) {
        throw CommandFailure{kUsage, "--physical needs --mass, --radius and --depth"};
      }
      return emit(spectrum_command(so, g), g, out, err);
    }
    if (*wave) {
      const WavefunctionResult r = wavefunction_command(wo, g);
      err << r.provenance;
      return emit(r.document, g, out, err);
    }
    if (*table) {
      const TableReport r = table_command(to, g);
      const int code = emit(r.document, g, out, err);
      err << "table: " << r.cells << " cells, " << r.mismatches << " not matching within " << format_energy(to.tol)
          << "\n";
      if (code != kSuccess) return code;
      return r.mismatches == 0 ? kSuccess : kTableMismatch;
    }
    if (*sweep) return emit(sweep_command(sw, g), g, out, err);
  } catch (const CommandFailure& f) {
    err << "error: " << f.message << "\n";
    return f.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    const bool usage = e.code() == ErrorCode::InvalidInput || e.code() == ErrorCode::OrderCapExceeded;
    return usage ? kUsage : kNumericalFailure;
  }
  return kUsage;
}

}  // namespace rashba_dot::cli
