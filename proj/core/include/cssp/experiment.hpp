#pragma once

#include "cssp/matrix_io.hpp"
#include "cssp/selectors.hpp"
#include "cssp/synthgen.hpp"
#include "cssp/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cssp {

inline constexpr const char* kReportVersion = "1";

// One experiment = one matrix, a k list, a c or theta sweep and a method
// set. Randomized methods run `repetitions` times per cell and report the
// best and the mean ratio. `jobs` controls worker threads; it never affects
// the emitted bytes, so it is not part of the report identity.
struct ExperimentConfig {
  std::string label = "dataset";
  std::string input_path;                // file input when non-empty
  MatrixFormat input_format = MatrixFormat::matrixmarket;
  std::optional<SyntheticSpec> synth;    // used when input_path is empty
  std::vector<Index> k_list;
  std::vector<Index> c_list;             // exactly one sweep list is nonempty
  std::vector<double> theta_list;
  std::vector<std::string> methods;
  int repetitions = 10;
  std::uint64_t seed = 0;
  std::string norm = "both";             // spectral | frobenius | both
  double basis_epsilon = 0.5;            // approx-basis accuracy in c sweeps
  int jobs = 1;
};

struct ExperimentRow {
  std::string dataset;
  Index k = 0;
  Index c = 0;
  std::optional<double> theta;
  std::string method;
  std::optional<double> spectral_ratio;       // best over repetitions
  std::optional<double> frobenius_ratio;
  std::optional<double> spectral_ratio_mean;
  std::optional<double> frobenius_ratio_mean;
  std::optional<double> certificate;
  std::uint64_t seed = 0;                     // cell base seed
  std::string error;                          // nonempty when the cell failed
};

// Figure-style vertical markers: the c = k point and the first sweep c whose
// deterministic spectral ratio drops to 1 or below.
struct ExperimentMarker {
  Index k = 0;
  std::string kind;
  std::optional<Index> c;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ExperimentRow> rows;
  std::vector<ExperimentMarker> markers;
  std::string version = kReportVersion;
};

ExperimentReport run_experiment(const ExperimentConfig& config);

// Serializations are byte-deterministic for a fixed config and seed.
std::string report_to_json(const ExperimentReport& report);
std::string report_to_csv(const ExperimentReport& report);

} // namespace cssp
