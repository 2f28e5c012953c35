#ifndef QWZ_RUNNER_HPP
#define QWZ_RUNNER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qwz/baths.hpp"
#include "qwz/lattice.hpp"
#include "qwz/quadrature.hpp"
#include "qwz/semiclassical.hpp"

namespace qwz {

enum class Experiment {
  CurrentField,
  GammaSweep,
  ImpurityStudy,
  Distribution,
  Semiclassical,
  SymmetryReport,
};

enum class OutputFormat { Csv, Json };

struct SweepSpec {
  std::string parameter; ///< one of gamma, m, T_h, T_c, mu
  std::vector<double> values;
};

struct OutputSpec {
  std::string directory = "out";
  OutputFormat format = OutputFormat::Csv;
};

/// One experiment, fully specified. All energies in units of t (t = 1).
struct RunConfig {
  Experiment experiment = Experiment::CurrentField;
  LatticeSpec lattice;
  BathSpec bath;
  ImpuritySet impurities{{}, 1e4};
  QuadratureSpec quadrature;
  std::optional<SweepSpec> sweep;
  OutputSpec output;
  PotentialSpec potential; ///< semiclassical experiment only
  FieldGrid field_grid;    ///< semiclassical experiment only
};

/// Parse a JSON config document (see README for the schema).
RunConfig config_from_json_text(const std::string& text);
RunConfig load_config(const std::string& path);

struct Diagnostic {
  std::string field;
  std::string message;
};

/// All validation findings, without running anything. Empty means runnable.
std::vector<Diagnostic> validate_config(const RunConfig& config);

struct OutputFile {
  std::string path; ///< relative to the output directory
  std::uint64_t bytes = 0;
  std::string checksum; ///< fnv1a-64 of the file content, hex
};

struct RunManifest {
  std::string version;
  std::string config_echo; ///< canonical JSON of the parsed config
  bool sigma_y_symmetric = false;
  bool r_pi_symmetric = false;
  /// Scalar diagnostics in emission order: quadrature error estimates,
  /// edge/bulk currents, symmetry residuals, wall-clock timings (ms).
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<OutputFile> files;
};

/// Execute the experiment, write its data files and manifest.json into the
/// output directory, and return the manifest. Deterministic: identical
/// configs produce byte-identical data files regardless of worker count.
/// workers <= 0 selects a hardware-based default (sweep points only).
RunManifest run(const RunConfig& config, int workers = 0);

} // namespace qwz

#endif
