#include "qwz/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "qwz/negf.hpp"
#include "qwz/observables.hpp"
#include "qwz/symmetry.hpp"
#include "qwz/version.hpp"
#include "qwz/weakcoupling.hpp"

namespace qwz {

namespace {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// config parsing

const char* experiment_name(Experiment e) {
  switch (e) {
    case Experiment::CurrentField: return "current-field";
    case Experiment::GammaSweep: return "gamma-sweep";
    case Experiment::ImpurityStudy: return "impurity-study";
    case Experiment::Distribution: return "distribution";
    case Experiment::Semiclassical: return "semiclassical";
    case Experiment::SymmetryReport: return "symmetry-report";
  }
  return "?";
}

Experiment experiment_from_name(const std::string& name) {
  for (Experiment e : {Experiment::CurrentField, Experiment::GammaSweep,
                       Experiment::ImpurityStudy, Experiment::Distribution,
                       Experiment::Semiclassical, Experiment::SymmetryReport})
    if (name == experiment_name(e)) return e;
  throw ConfigError("experiment", "unknown experiment '" + name + "'");
}

template <typename T>
T field_or(const json& j, const std::string& key, T fallback, const std::string& context) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(context + "." + key, e.what());
  }
}

RunConfig parse_config(const json& j) {
  RunConfig c;
  if (!j.contains("experiment")) throw ConfigError("experiment", "missing");
  c.experiment = experiment_from_name(j.at("experiment").get<std::string>());

  if (j.contains("lattice")) {
    const json& l = j.at("lattice");
    c.lattice.lx = field_or<int>(l, "L_X", c.lattice.lx, "lattice");
    c.lattice.ly = field_or<int>(l, "L_Y", c.lattice.ly, "lattice");
    c.lattice.tx = field_or<double>(l, "t_X", c.lattice.tx, "lattice");
    c.lattice.ty = field_or<double>(l, "t_Y", c.lattice.ty, "lattice");
    c.lattice.m = field_or<double>(l, "m", c.lattice.m, "lattice");
    c.lattice.omega0 = field_or<double>(l, "omega0", c.lattice.omega0, "lattice");
  }
  if (j.contains("bath")) {
    const json& b = j.at("bath");
    c.bath.t_hot = field_or<double>(b, "T_h", c.bath.t_hot, "bath");
    c.bath.t_cold = field_or<double>(b, "T_c", c.bath.t_cold, "bath");
    c.bath.mu = field_or<double>(b, "mu", c.bath.mu, "bath");
    c.bath.gamma = field_or<double>(b, "gamma", c.bath.gamma, "bath");
    const std::string stat = field_or<std::string>(b, "statistics", "boson", "bath");
    if (stat == "boson") c.bath.statistics = Statistics::Boson;
    else if (stat == "fermion") c.bath.statistics = Statistics::Fermion;
    else throw ConfigError("bath.statistics", "must be 'boson' or 'fermion'");
  }
  if (j.contains("impurities")) {
    const json& imp = j.at("impurities");
    c.impurities.delta = field_or<double>(imp, "delta", c.impurities.delta, "impurities");
    if (imp.contains("sites")) {
      try {
        for (const auto& site : imp.at("sites"))
          c.impurities.sites.emplace_back(site.at(0).get<int>(), site.at(1).get<int>());
      } catch (const json::exception& e) {
        throw ConfigError("impurities.sites", e.what());
      }
    }
  }
  if (j.contains("quadrature")) {
    const json& q = j.at("quadrature");
    c.quadrature.rel_tolerance =
        field_or<double>(q, "rel_tolerance", c.quadrature.rel_tolerance, "quadrature");
    c.quadrature.abs_tolerance =
        field_or<double>(q, "abs_tolerance", c.quadrature.abs_tolerance, "quadrature");
    c.quadrature.window_margin =
        field_or<double>(q, "window_margin", c.quadrature.window_margin, "quadrature");
    c.quadrature.max_panels =
        field_or<int>(q, "max_panels", c.quadrature.max_panels, "quadrature");
  }
  if (j.contains("sweep")) {
    SweepSpec s;
    s.parameter = field_or<std::string>(j.at("sweep"), "parameter", "gamma", "sweep");
    s.values = field_or<std::vector<double>>(j.at("sweep"), "values", {}, "sweep");
    c.sweep = std::move(s);
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    c.output.directory = field_or<std::string>(o, "directory", c.output.directory, "output");
    const std::string fmt = field_or<std::string>(o, "format", "csv", "output");
    if (fmt == "csv") c.output.format = OutputFormat::Csv;
    else if (fmt == "json") c.output.format = OutputFormat::Json;
    else throw ConfigError("output.format", "must be 'csv' or 'json'");
  }
  if (j.contains("potential")) {
    const json& p = j.at("potential");
    c.potential.scale_x = field_or<double>(p, "scale_x", c.potential.scale_x, "potential");
    c.potential.scale_y = field_or<double>(p, "scale_y", c.potential.scale_y, "potential");
    c.potential.exponent = field_or<int>(p, "exponent", c.potential.exponent, "potential");
    c.potential.grad_step = field_or<double>(p, "grad_step", c.potential.grad_step, "potential");
  }
  if (j.contains("field_grid")) {
    const json& g = j.at("field_grid");
    c.field_grid.half_extent =
        field_or<double>(g, "half_extent", c.field_grid.half_extent, "field_grid");
    c.field_grid.points_per_side =
        field_or<int>(g, "points_per_side", c.field_grid.points_per_side, "field_grid");
  }
  return c;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["experiment"] = experiment_name(c.experiment);
  j["lattice"] = {{"L_X", c.lattice.lx}, {"L_Y", c.lattice.ly}, {"t_X", c.lattice.tx},
                  {"t_Y", c.lattice.ty}, {"m", c.lattice.m},    {"omega0", c.lattice.omega0}};
  j["bath"] = {{"T_h", c.bath.t_hot},
               {"T_c", c.bath.t_cold},
               {"mu", c.bath.mu},
               {"gamma", c.bath.gamma},
               {"statistics", c.bath.statistics == Statistics::Boson ? "boson" : "fermion"}};
  json sites = json::array();
  for (const auto& [x, y] : c.impurities.sites) sites.push_back({x, y});
  j["impurities"] = {{"sites", sites}, {"delta", c.impurities.delta}};
  j["quadrature"] = {{"rel_tolerance", c.quadrature.rel_tolerance},
                     {"abs_tolerance", c.quadrature.abs_tolerance},
                     {"window_margin", c.quadrature.window_margin},
                     {"max_panels", c.quadrature.max_panels}};
  if (c.sweep)
    j["sweep"] = {{"parameter", c.sweep->parameter}, {"values", c.sweep->values}};
  j["output"] = {{"directory", c.output.directory},
                 {"format", c.output.format == OutputFormat::Csv ? "csv" : "json"}};
  if (c.experiment == Experiment::Semiclassical) {
    j["potential"] = {{"scale_x", c.potential.scale_x},
                      {"scale_y", c.potential.scale_y},
                      {"exponent", c.potential.exponent},
                      {"grad_step", c.potential.grad_step}};
    j["field_grid"] = {{"half_extent", c.field_grid.half_extent},
                       {"points_per_side", c.field_grid.points_per_side}};
  }
  return j;
}

// ---------------------------------------------------------------------------
// deterministic table emission

std::string fmt_value(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12e", v);
  return buffer;
}

std::string fmt_coord(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.6f", v);
  return buffer;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows; ///< preformatted cells
  std::vector<bool> quoted; ///< JSON: quote the cell (string) or emit raw (number)

  std::string render_csv() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < columns.size(); ++i)
      out << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    for (const auto& row : rows)
      for (std::size_t i = 0; i < row.size(); ++i)
        out << row[i] << (i + 1 < row.size() ? "," : "\n");
    return out.str();
  }

  std::string render_json() const {
    std::ostringstream out;
    out << "[\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
      out << "  {";
      for (std::size_t i = 0; i < rows[r].size(); ++i) {
        out << "\"" << columns[i] << "\":";
        if (quoted[i]) out << "\"" << rows[r][i] << "\"";
        else out << rows[r][i];
        if (i + 1 < rows[r].size()) out << ",";
      }
      out << "}" << (r + 1 < rows.size() ? "," : "") << "\n";
    }
    out << "]\n";
    return out.str();
  }
};

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char b : bytes) {
    hash ^= b;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string checksum_hex(const std::string& bytes) {
  char buffer[20];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buffer;
}

class OutputWriter {
public:
  OutputWriter(const OutputSpec& spec) : spec_(spec) {
    std::filesystem::create_directories(spec.directory);
  }

  void write_table(const std::string& stem, const Table& table, RunManifest& manifest) {
    const bool csv = spec_.format == OutputFormat::Csv;
    const std::string name = stem + (csv ? ".csv" : ".json");
    const std::string bytes = csv ? table.render_csv() : table.render_json();
    write_bytes(name, bytes, manifest);
  }

  void write_bytes(const std::string& name, const std::string& bytes, RunManifest& manifest) {
    const auto path = std::filesystem::path(spec_.directory) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.close();
    manifest.files.push_back({name, bytes.size(), checksum_hex(bytes)});
  }

private:
  OutputSpec spec_;
};

// ---------------------------------------------------------------------------
// experiment bodies

struct NessObservables {
  CurrentField field;
  CurrentDiagnostics diagnostics;
  double landauer = 0.0;
  QuadratureReport report;
};

NessObservables solve_observables(const LatticeSpec& lattice, const BathSpec& bath,
                                  const ImpuritySet& impurities,
                                  const QuadratureSpec& quadrature) {
  const Eigen::MatrixXcd h = build_hamiltonian(lattice, impurities);
  const SelfEnergyPair se = build_self_energies(lattice, bath);
  const EffectiveHamiltonian eff = effective_hamiltonian(h, se);
  NessSolution ness = steady_correlation(eff, se, bath, quadrature);

  NessObservables obs;
  obs.field = bond_currents(ness.correlation, lattice);
  obs.diagnostics = edge_bulk_diagnostics(obs.field, lattice);
  obs.landauer = landauer_total(eff, se, bath, quadrature);
  obs.report = ness.report;
  return obs;
}

Table current_table(const CurrentField& field, const LatticeSpec& spec) {
  Table t;
  t.columns = {"x", "y", "direction", "value"};
  t.quoted = {false, false, true, false};
  for (int y = 1; y <= spec.ly; ++y)
    for (int x = 1; x < spec.lx; ++x)
      t.rows.push_back({std::to_string(x), std::to_string(y), "X",
                        fmt_value(field.jx(x - 1, y - 1))});
  for (int y = 1; y < spec.ly; ++y)
    for (int x = 1; x <= spec.lx; ++x)
      t.rows.push_back({std::to_string(x), std::to_string(y), "Y",
                        fmt_value(field.jy(x - 1, y - 1))});
  return t;
}

void add_ness_metrics(RunManifest& manifest, const NessObservables& obs,
                      const LatticeSpec& lattice, const std::string& prefix = "") {
  manifest.metrics.emplace_back(prefix + "J_edge", obs.diagnostics.edge);
  manifest.metrics.emplace_back(prefix + "J_bulk", obs.diagnostics.bulk);
  manifest.metrics.emplace_back(prefix + "J_tot", obs.diagnostics.total);
  manifest.metrics.emplace_back(prefix + "J_tot_landauer", obs.landauer);
  manifest.metrics.emplace_back(prefix + "continuity_residual",
                                continuity_residual(obs.field, lattice));
  manifest.metrics.emplace_back(prefix + "quadrature_error", obs.report.error_estimate);
  manifest.metrics.emplace_back(prefix + "quadrature_panels", obs.report.panels);
  manifest.metrics.emplace_back(prefix + "hermitization_defect",
                                obs.report.hermitization_defect);
  manifest.metrics.emplace_back(prefix + "tail_contribution", obs.report.tail_contribution);
}

Table distribution_table(const Spectrum& spectrum, const ModeCouplings& couplings,
                         const WeakCouplingSolution& weak) {
  Table t;
  t.columns = {"omega_alpha", "n_alpha", "s_alpha", "r_alpha"};
  t.quoted = {false, false, false, false};
  for (int a = 0; a < spectrum.dim(); ++a)
    t.rows.push_back({fmt_value(spectrum.omega[a]), fmt_value(weak.occupations[a]),
                      fmt_value(couplings.hot[a]), fmt_value(couplings.cold[a])});
  return t;
}

void apply_sweep_value(const std::string& parameter, double value, LatticeSpec& lattice,
                       BathSpec& bath) {
  if (parameter == "gamma") bath.gamma = value;
  else if (parameter == "m") lattice.m = value;
  else if (parameter == "T_h") bath.t_hot = value;
  else if (parameter == "T_c") bath.t_cold = value;
  else if (parameter == "mu") bath.mu = value;
  else throw ConfigError("sweep.parameter", "unknown parameter '" + parameter + "'");
}

void run_current_field(const RunConfig& config, OutputWriter& writer, RunManifest& manifest) {
  const NessObservables obs =
      solve_observables(config.lattice, config.bath, config.impurities, config.quadrature);
  writer.write_table("currents", current_table(obs.field, config.lattice), manifest);
  add_ness_metrics(manifest, obs, config.lattice);
}

void run_gamma_sweep(const RunConfig& config, int workers, OutputWriter& writer,
                     RunManifest& manifest) {
  const SweepSpec& sweep = *config.sweep;
  const int n = static_cast<int>(sweep.values.size());
  std::vector<CurrentDiagnostics> results(n);
  std::vector<double> quad_errors(n);
  std::vector<std::pair<int, std::exception_ptr>> failures;

  std::atomic<int> next{0};
  std::mutex failure_mutex;
  auto worker = [&]() {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        LatticeSpec lattice = config.lattice;
        BathSpec bath = config.bath;
        apply_sweep_value(sweep.parameter, sweep.values[i], lattice, bath);
        const NessObservables obs =
            solve_observables(lattice, bath, config.impurities, config.quadrature);
        results[i] = obs.diagnostics;
        quad_errors[i] = obs.report.error_estimate;
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        failures.emplace_back(i, std::current_exception());
      }
    }
  };

  int thread_count = workers > 0 ? workers
                                 : static_cast<int>(std::thread::hardware_concurrency());
  thread_count = std::clamp(thread_count, 1, std::max(1, n));
  std::vector<std::thread> pool;
  for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  if (!failures.empty()) {
    std::sort(failures.begin(), failures.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    const int i = failures.front().first;
    try {
      std::rethrow_exception(failures.front().second);
    } catch (const std::exception& e) {
      throw NumericalError("sweep point " + std::to_string(i) + " (" + sweep.parameter +
                           " = " + fmt_value(sweep.values[i]) + ") failed: " + e.what());
    }
  }

  Table t;
  t.columns = {sweep.parameter, "J_edge", "J_bulk", "J_tot"};
  t.quoted = {false, false, false, false};
  double worst_error = 0.0;
  for (int i = 0; i < n; ++i) {
    t.rows.push_back({fmt_value(sweep.values[i]), fmt_value(results[i].edge),
                      fmt_value(results[i].bulk), fmt_value(results[i].total)});
    worst_error = std::max(worst_error, quad_errors[i]);
  }
  writer.write_table("sweep", t, manifest);
  manifest.metrics.emplace_back("points", n);
  manifest.metrics.emplace_back("max_quadrature_error", worst_error);
}

void run_distribution(const RunConfig& config, OutputWriter& writer, RunManifest& manifest) {
  const Eigen::MatrixXcd h = build_hamiltonian(config.lattice, config.impurities);
  const Spectrum spectrum = single_particle_spectrum(h);
  const ModeCouplings couplings = mode_couplings(spectrum, config.lattice);
  const WeakCouplingSolution weak = weak_coupling_correlation(spectrum, couplings, config.bath);
  writer.write_table("distribution", distribution_table(spectrum, couplings, weak), manifest);
  manifest.metrics.emplace_back("max_coupling_asymmetry",
                                (couplings.hot - couplings.cold).cwiseAbs().maxCoeff());
  manifest.metrics.emplace_back("degenerate_modes", couplings.degenerate ? 1.0 : 0.0);
  manifest.metrics.emplace_back("decoupled_modes", weak.decoupled_mode ? 1.0 : 0.0);
  manifest.metrics.emplace_back(
      "lindblad_residual",
      lindblad_residual(spectrum, couplings, config.bath, weak.correlation));
}

void run_impurity_study(const RunConfig& config, OutputWriter& writer, RunManifest& manifest) {
  const NessObservables obs =
      solve_observables(config.lattice, config.bath, config.impurities, config.quadrature);
  writer.write_table("currents", current_table(obs.field, config.lattice), manifest);
  add_ness_metrics(manifest, obs, config.lattice);
  run_distribution(config, writer, manifest);
}

void run_semiclassical(const RunConfig& config, OutputWriter& writer, RunManifest& manifest) {
  const BathSpec& bath = config.bath;
  auto avg_occupation = [&bath](double w) {
    return 0.5 * (occupation(w, bath.t_hot, bath.mu, bath.statistics) +
                  occupation(w, bath.t_cold, bath.mu, bath.statistics));
  };
  const double weight = semiclassical_weight(config.lattice, avg_occupation, 200);
  const PlanarField field = semiclassical_current_field(
      config.lattice, avg_occupation, config.potential, config.field_grid, 200);

  Table t;
  t.columns = {"x", "y", "direction", "value"};
  t.quoted = {false, false, true, false};
  for (int i = 0; i < field.x.size(); ++i)
    t.rows.push_back({fmt_coord(field.x[i]), fmt_coord(field.y[i]), "X",
                      fmt_value(field.ix[i])});
  for (int i = 0; i < field.x.size(); ++i)
    t.rows.push_back({fmt_coord(field.x[i]), fmt_coord(field.y[i]), "Y",
                      fmt_value(field.iy[i])});
  writer.write_table("semiclassical", t, manifest);
  manifest.metrics.emplace_back("bz_weight", weight);
  manifest.metrics.emplace_back(
      "bulk_cancellation", bulk_cancellation_check(config.lattice, avg_occupation, 200));
}

void run_symmetry_report(const RunConfig& config, RunManifest& manifest) {
  const Eigen::MatrixXcd h = build_hamiltonian(config.lattice, config.impurities);
  manifest.metrics.emplace_back("residual_pi_r_pi",
                                check_hamiltonian_symmetry(h, pi_r_pi(config.lattice)));
  manifest.metrics.emplace_back(
      "residual_pi_theta_sigma_y",
      check_hamiltonian_symmetry(h, pi_theta_sigma_y(config.lattice)));
  manifest.metrics.emplace_back("residual_gph",
                                check_hamiltonian_symmetry(h, gph(config.lattice)));
  manifest.metrics.emplace_back("residual_sigma_y_alone",
                                check_hamiltonian_symmetry(h, reflection_y(config.lattice)));
}

} // namespace

RunConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return config_from_json_text(buffer.str());
}

std::vector<Diagnostic> validate_config(const RunConfig& config) {
  std::vector<Diagnostic> out;
  auto check = [&](auto&& fn) {
    try {
      fn();
    } catch (const ConfigError& e) {
      out.push_back({e.field(), e.what()});
    }
  };

  check([&] { config.lattice.validate(); });
  check([&] { config.impurities.validate(config.lattice); });
  if (config.bath.statistics == Statistics::Boson && config.bath.mu != 0.0)
    out.push_back({"bath.mu", "bosonic chemical potential must be zero"});
  check([&] {
    BathSpec b = config.bath;
    b.mu = 0.0; // μ ≠ 0 already reported above
    b.validate();
  });

  const bool needs_baths = config.experiment == Experiment::CurrentField ||
                           config.experiment == Experiment::GammaSweep ||
                           config.experiment == Experiment::ImpurityStudy ||
                           config.experiment == Experiment::Distribution;
  if (needs_baths && config.lattice.lx < 2)
    out.push_back({"lattice.L_X", "must be >= 2 so hot and cold baths attach to distinct columns"});

  if (config.experiment == Experiment::GammaSweep) {
    if (!config.sweep) {
      out.push_back({"sweep", "gamma-sweep requires a sweep section"});
    } else {
      static const std::vector<std::string> allowed = {"gamma", "m", "T_h", "T_c", "mu"};
      if (std::find(allowed.begin(), allowed.end(), config.sweep->parameter) == allowed.end())
        out.push_back({"sweep.parameter",
                       "unknown parameter '" + config.sweep->parameter + "'"});
      if (config.sweep->values.empty())
        out.push_back({"sweep.values", "must be non-empty"});
      const bool positive = config.sweep->parameter == "gamma" ||
                            config.sweep->parameter == "T_h" ||
                            config.sweep->parameter == "T_c";
      for (double v : config.sweep->values) {
        if (!std::isfinite(v))
          out.push_back({"sweep.values", "values must be finite"});
        else if (positive && v <= 0.0)
          out.push_back({"sweep.values",
                         config.sweep->parameter + " values must be > 0"});
      }
    }
  } else if (config.sweep) {
    out.push_back({"sweep", "only the gamma-sweep experiment consumes a sweep section"});
  }

  if (config.output.directory.empty())
    out.push_back({"output.directory", "must be non-empty"});

  // Bosonic admissibility: every eigenfrequency must be positive.
  if (config.bath.statistics == Statistics::Boson && out.empty() &&
      config.experiment != Experiment::SymmetryReport) {
    if (config.experiment == Experiment::Semiclassical) {
      double min_band = config.lattice.omega0;
      for (int i = 0; i <= 100; ++i)
        for (int j = 0; j <= 100; ++j) {
          const double kx = -M_PI + 2.0 * M_PI * i / 100.0;
          const double ky = -M_PI + 2.0 * M_PI * j / 100.0;
          min_band = std::min(min_band, bloch_point(kx, ky, config.lattice).omega_minus);
        }
      if (min_band <= 0.0)
        out.push_back({"lattice.omega0", "bosonic bands must stay positive (min ω_- = " +
                                             std::to_string(min_band) + ")"});
    } else {
      const Spectrum spectrum =
          single_particle_spectrum(build_hamiltonian(config.lattice, config.impurities));
      double min_omega = spectrum.omega.minCoeff();
      if (config.experiment == Experiment::GammaSweep && config.sweep &&
          config.sweep->parameter == "m") {
        for (double m : config.sweep->values) {
          LatticeSpec lattice = config.lattice;
          lattice.m = m;
          const Spectrum s =
              single_particle_spectrum(build_hamiltonian(lattice, config.impurities));
          min_omega = std::min(min_omega, s.omega.minCoeff());
        }
      }
      if (min_omega <= 0.0)
        out.push_back({"lattice.omega0", "bosonic spectrum must be positive (min ω = " +
                                             std::to_string(min_omega) + ")"});
    }
  }
  return out;
}

RunManifest run(const RunConfig& config, int workers) {
  const auto t0 = std::chrono::steady_clock::now();

  const auto diagnostics = validate_config(config);
  if (!diagnostics.empty()) {
    std::string joined;
    for (const auto& d : diagnostics) joined += d.field + ": " + d.message + "; ";
    throw ConfigError("config", joined);
  }

  RunManifest manifest;
  manifest.version = kVersion;
  manifest.config_echo = config_to_json(config).dump(2) + "\n";

  const ImpurityClassification cls = classify_impurities(config.impurities, config.lattice);
  manifest.sigma_y_symmetric = cls.sigma_y_symmetric;
  manifest.r_pi_symmetric = cls.r_pi_symmetric;

  OutputWriter writer(config.output);
  switch (config.experiment) {
    case Experiment::CurrentField: run_current_field(config, writer, manifest); break;
    case Experiment::GammaSweep: run_gamma_sweep(config, workers, writer, manifest); break;
    case Experiment::ImpurityStudy: run_impurity_study(config, writer, manifest); break;
    case Experiment::Distribution: run_distribution(config, writer, manifest); break;
    case Experiment::Semiclassical: run_semiclassical(config, writer, manifest); break;
    case Experiment::SymmetryReport: run_symmetry_report(config, manifest); break;
  }

  const auto t1 = std::chrono::steady_clock::now();
  manifest.metrics.emplace_back(
      "wall_ms", std::chrono::duration<double, std::milli>(t1 - t0).count());

  json m;
  m["version"] = manifest.version;
  m["config"] = json::parse(manifest.config_echo);
  m["symmetry"] = {{"sigma_y_symmetric", manifest.sigma_y_symmetric},
                   {"r_pi_symmetric", manifest.r_pi_symmetric}};
  json metrics;
  for (const auto& [key, value] : manifest.metrics) metrics[key] = value;
  m["metrics"] = metrics;
  json files = json::array();
  for (const auto& f : manifest.files)
    files.push_back({{"path", f.path}, {"bytes", f.bytes}, {"checksum", f.checksum}});
  m["files"] = files;
  writer.write_bytes("manifest.json", m.dump(2) + "\n", manifest);

  return manifest;
}

} // namespace qwz
