#include "cssp/experiment.hpp"

#include "cssp/errors.hpp"
#include "cssp/evaluation.hpp"
#include "cssp/leverage.hpp"
#include "cssp/matrix.hpp"
#include "cssp/rng.hpp"
#include "cssp/sketch.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <map>
#include <sstream>
#include <thread>

namespace cssp {

namespace {

using ordered_json = nlohmann::ordered_json;

struct Cell {
  Index k = 0;
  std::optional<Index> c;
  std::optional<double> theta;
  std::string method;
  std::uint64_t seed = 0;
};

std::uint64_t cell_seed(const ExperimentConfig& config, const Cell& cell) {
  std::uint64_t h = config.seed;
  h = mix_seed(h, static_cast<std::uint64_t>(cell.k));
  if (cell.c) {
    h = mix_seed(h, static_cast<std::uint64_t>(*cell.c));
  }
  if (cell.theta) {
    std::uint64_t bits = 0;
    static_assert(sizeof(bits) == sizeof(double));
    std::memcpy(&bits, &*cell.theta, sizeof(bits));
    h = mix_seed(h, bits);
  }
  return mix_seed(h, hash_tag(cell.method));
}

struct SharedState {
  const ExperimentConfig* config = nullptr;
  Matrix a;
  SvdFactors factors;
  std::map<Index, LeverageProfile> profiles;               // per k
  std::map<Index, Matrix> bases;                           // exact v_k per k
  std::map<Index, BasisArtifact> approx_bases;             // approx-basis per k
  std::map<Index, std::string> approx_errors;              // basis failures per k
  IndexList pivot_perm;                                    // lazy pivoted QR
};

ExperimentRow evaluate_cell(const SharedState& shared, const Cell& cell) {
  const ExperimentConfig& config = *shared.config;
  ExperimentRow row;
  row.dataset = config.label;
  row.k = cell.k;
  row.method = cell.method;
  row.theta = cell.theta;
  row.c = cell.c.value_or(0);
  row.seed = cell.seed;

  try {
    if (cell.k >= shared.factors.rank) {
      throw InvalidArgumentError("k must be below rank " +
                                 std::to_string(shared.factors.rank));
    }
    const LeverageProfile& profile = shared.profiles.at(cell.k);
    const Matrix& v_k = shared.bases.at(cell.k);

    const int reps = cell.method == kMethodRandomized ? config.repetitions : 1;
    std::optional<double> best_spec, best_frob, cert;
    double sum_spec = 0.0, sum_frob = 0.0;
    int counted = 0;

    std::optional<BasisArtifact> local_basis;
    for (int rep = 0; rep < reps; ++rep) {
      SelectionResult sel;
      const Matrix* cert_basis = &v_k;
      if (cell.method == kMethodDeterministic) {
        sel = cell.theta ? select_deterministic(profile, *cell.theta)
                         : select_top_c(profile, *cell.c);
      } else if (cell.method == kMethodRandomized) {
        if (!cell.c) {
          throw InvalidArgumentError("randomized-leverage requires a c sweep");
        }
        sel = select_randomized(profile, *cell.c,
                                mix_seed(cell.seed, static_cast<std::uint64_t>(rep)));
      } else if (cell.method == kMethodPivotedQr) {
        if (!cell.c) {
          throw InvalidArgumentError("pivoted-qr requires a c sweep");
        }
        sel.method = kMethodPivotedQr;
        sel.c = *cell.c;
        sel.indices.assign(shared.pivot_perm.begin(),
                           shared.pivot_perm.begin() + *cell.c);
      } else if (cell.method == kMethodApproxBasis) {
        if (cell.theta) {
          // Tie the basis accuracy to the threshold: theta = k - eps.
          const double eps = static_cast<double>(cell.k) - *cell.theta;
          if (!(eps > 0.0 && eps <= 1.0)) {
            throw InvalidArgumentError(
                "approx-basis theta must satisfy k - 1 <= theta < k");
          }
          local_basis = frequent_directions_basis(shared.a, cell.k, eps);
          cert_basis = &local_basis->z;
          sel = select_with_basis(shared.a, local_basis->z, cell.k, *cell.theta);
        } else {
          const auto it = shared.approx_errors.find(cell.k);
          if (it != shared.approx_errors.end()) {
            throw InvalidArgumentError(it->second);
          }
          const BasisArtifact& basis = shared.approx_bases.at(cell.k);
          cert_basis = &basis.z;
          sel = select_top_c(leverage_scores(basis.z, cell.k), *cell.c);
          sel.method = kMethodApproxBasis;
        }
      } else {
        throw InvalidArgumentError("unknown method '" + cell.method + "'");
      }

      const ErrorReport rep_report = error_report(shared.a, shared.factors, sel, cell.k);
      row.c = sel.c;
      const double cval = lemma1_certificate(*cert_basis, sel);
      if (rep_report.spectral_ratio) {
        sum_spec += *rep_report.spectral_ratio;
        if (!best_spec || *rep_report.spectral_ratio < *best_spec) {
          best_spec = rep_report.spectral_ratio;
          cert = cval;
        }
      } else {
        cert = cval;
      }
      if (rep_report.frobenius_ratio) {
        sum_frob += *rep_report.frobenius_ratio;
        if (!best_frob || *rep_report.frobenius_ratio < *best_frob) {
          best_frob = rep_report.frobenius_ratio;
        }
      }
      ++counted;
    }

    const bool want_spec = config.norm != "frobenius";
    const bool want_frob = config.norm != "spectral";
    if (want_spec) {
      row.spectral_ratio = best_spec;
      if (best_spec && counted > 0) {
        row.spectral_ratio_mean = sum_spec / counted;
      }
    }
    if (want_frob) {
      row.frobenius_ratio = best_frob;
      if (best_frob && counted > 0) {
        row.frobenius_ratio_mean = sum_frob / counted;
      }
    }
    row.certificate = cert;
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

ordered_json config_json(const ExperimentConfig& config) {
  ordered_json j;
  j["label"] = config.label;
  if (!config.input_path.empty()) {
    j["input"] = config.input_path;
    j["format"] =
        config.input_format == MatrixFormat::matrixmarket ? "matrixmarket" : "csv";
  } else if (config.synth) {
    ordered_json s;
    s["kind"] = config.synth->profile_kind;
    s["m"] = config.synth->m;
    s["n"] = config.synth->n;
    s["k"] = config.synth->k;
    s["seed"] = config.synth->seed;
    j["synth"] = s;
  }
  j["k_list"] = config.k_list;
  if (!config.c_list.empty()) {
    j["c_list"] = config.c_list;
  } else {
    j["theta_list"] = config.theta_list;
  }
  j["methods"] = config.methods;
  j["repetitions"] = config.repetitions;
  j["seed"] = config.seed;
  j["norm"] = config.norm;
  j["basis_epsilon"] = config.basis_epsilon;
  return j;
}

ordered_json row_json(const ExperimentRow& row) {
  ordered_json j;
  j["dataset"] = row.dataset;
  j["k"] = row.k;
  j["c"] = row.c;
  if (row.theta) {
    j["theta"] = *row.theta;
  }
  j["method"] = row.method;
  j["spectral_ratio"] = row.spectral_ratio ? ordered_json(*row.spectral_ratio)
                                           : ordered_json(nullptr);
  j["frobenius_ratio"] = row.frobenius_ratio ? ordered_json(*row.frobenius_ratio)
                                             : ordered_json(nullptr);
  j["spectral_ratio_mean"] = row.spectral_ratio_mean
                                 ? ordered_json(*row.spectral_ratio_mean)
                                 : ordered_json(nullptr);
  j["frobenius_ratio_mean"] = row.frobenius_ratio_mean
                                  ? ordered_json(*row.frobenius_ratio_mean)
                                  : ordered_json(nullptr);
  j["certificate"] =
      row.certificate ? ordered_json(*row.certificate) : ordered_json(nullptr);
  j["seed"] = row.seed;
  j["error"] = row.error;
  return j;
}

} // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
  if (config.k_list.empty()) {
    throw InvalidArgumentError("experiment: k_list is empty");
  }
  if (config.c_list.empty() == config.theta_list.empty()) {
    throw InvalidArgumentError("experiment: provide exactly one of c_list / theta_list");
  }
  if (config.repetitions < 1) {
    throw InvalidArgumentError("experiment: repetitions must be at least 1");
  }
  if (!std::is_sorted(config.c_list.begin(), config.c_list.end()) ||
      !std::is_sorted(config.theta_list.begin(), config.theta_list.end())) {
    throw InvalidArgumentError("experiment: sweep lists must be sorted ascending");
  }
  if (config.norm != "spectral" && config.norm != "frobenius" && config.norm != "both") {
    throw InvalidArgumentError("experiment: norm must be spectral, frobenius or both");
  }

  SharedState shared;
  shared.config = &config;
  if (!config.input_path.empty()) {
    shared.a = load_matrix(config.input_path, config.input_format);
  } else if (config.synth) {
    shared.a = assemble_matrix(*config.synth);
  } else {
    throw InvalidArgumentError("experiment: no input matrix");
  }
  shared.factors = svd(shared.a);

  const auto has = [&](const char* m) {
    return std::find(config.methods.begin(), config.methods.end(), m) !=
           config.methods.end();
  };
  if (config.methods.empty()) {
    throw InvalidArgumentError("experiment: methods is empty");
  }
  for (const Index k : config.k_list) {
    if (k >= 1 && k < shared.factors.rank) {
      shared.bases.emplace(k, shared.factors.v.leftCols(k));
      shared.profiles.emplace(k, leverage_scores(shared.bases.at(k), k));
      if (has(kMethodApproxBasis) && !config.c_list.empty()) {
        try {
          shared.approx_bases.emplace(
              k, frequent_directions_basis(shared.a, k, config.basis_epsilon));
        } catch (const std::exception& e) {
          shared.approx_errors.emplace(k, e.what());
        }
      }
    }
  }
  if (has(kMethodPivotedQr)) {
    shared.pivot_perm = pivoted_qr(shared.a).perm;
  }

  std::vector<Cell> cells;
  for (const Index k : config.k_list) {
    if (!config.c_list.empty()) {
      for (const Index c : config.c_list) {
        for (const std::string& method : config.methods) {
          Cell cell{k, c, std::nullopt, method, 0};
          cell.seed = cell_seed(config, cell);
          cells.push_back(cell);
        }
      }
    } else {
      for (const double theta : config.theta_list) {
        for (const std::string& method : config.methods) {
          Cell cell{k, std::nullopt, theta, method, 0};
          cell.seed = cell_seed(config, cell);
          cells.push_back(cell);
        }
      }
    }
  }

  std::vector<ExperimentRow> rows(cells.size());
  const int jobs = std::max(1, config.jobs);
  if (jobs == 1 || cells.size() <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      rows[i] = evaluate_cell(shared, cells[i]);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const int count = std::min<int>(jobs, static_cast<int>(cells.size()));
    workers.reserve(static_cast<std::size_t>(count));
    for (int w = 0; w < count; ++w) {
      workers.emplace_back([&]() {
        for (std::size_t i = next.fetch_add(1); i < cells.size();
             i = next.fetch_add(1)) {
          rows[i] = evaluate_cell(shared, cells[i]);
        }
      });
    }
    for (auto& worker : workers) {
      worker.join();
    }
  }

  ExperimentReport report;
  report.config = config;
  report.rows = std::move(rows);

  // Vertical markers per k, computed from the deterministic curve.
  for (const Index k : config.k_list) {
    report.markers.push_back({k, "c-equals-k", k});
    std::optional<Index> first_good;
    for (const ExperimentRow& row : report.rows) {
      if (row.k == k && row.method == kMethodDeterministic && row.error.empty() &&
          row.spectral_ratio && *row.spectral_ratio <= 1.0) {
        if (!first_good || row.c < *first_good) {
          first_good = row.c;
        }
      }
    }
    report.markers.push_back({k, "first-c-ratio-le-1", first_good});
  }
  return report;
}

std::string report_to_json(const ExperimentReport& report) {
  ordered_json j;
  j["config"] = config_json(report.config);
  j["rows"] = ordered_json::array();
  for (const ExperimentRow& row : report.rows) {
    j["rows"].push_back(row_json(row));
  }
  j["markers"] = ordered_json::array();
  for (const ExperimentMarker& marker : report.markers) {
    ordered_json m;
    m["k"] = marker.k;
    m["kind"] = marker.kind;
    m["c"] = marker.c ? ordered_json(*marker.c) : ordered_json(nullptr);
    j["markers"].push_back(m);
  }
  j["version"] = report.version;
  return j.dump(2) + "\n";
}

std::string report_to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  const auto opt = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  out << "type,dataset,k,c,theta,method,spectral_ratio,frobenius_ratio,"
         "spectral_ratio_mean,frobenius_ratio_mean,certificate,seed,error\n";
  for (const ExperimentRow& row : report.rows) {
    out << "row," << row.dataset << ',' << row.k << ',' << row.c << ','
        << (row.theta ? format_double(*row.theta) : std::string()) << ','
        << row.method << ',' << opt(row.spectral_ratio) << ','
        << opt(row.frobenius_ratio) << ',' << opt(row.spectral_ratio_mean) << ','
        << opt(row.frobenius_ratio_mean) << ',' << opt(row.certificate) << ','
        << row.seed << ',' << row.error << '\n';
  }
  for (const ExperimentMarker& marker : report.markers) {
    out << "marker,," << marker.k << ','
        << (marker.c ? std::to_string(*marker.c) : std::string()) << ",,"
        << marker.kind << ",,,,,,,\n";
  }
  return out.str();
}

} // namespace cssp
