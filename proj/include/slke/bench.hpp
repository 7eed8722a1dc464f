#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slke/kernels.hpp"
#include "slke/solver.hpp"
#include "slke/types.hpp"

namespace slke {

// Full description of a benchmark run: dataset, kernel grid, gamma grid,
// methods and solver settings. Loadable from a JSON manifest file; every
// key can be overridden by a CLI flag.
struct ExperimentManifest {
  std::string dataset;
  bool has_labels = true;
  std::vector<KernelSpec> kernels = standard_grid();
  std::vector<double> gammas = {1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1};
  std::vector<std::string> methods = {"slke-s", "slke-r", "sc-baseline"};
  double mu = 1.0;
  double tol = 1e-4;
  int max_iters = 300;
  bool nonneg_projection = true;
  int restarts = 20;
  std::uint64_t seed = 0;
  std::string output_dir = ".";
  int jobs = 1;
  bool dump_z = false;
  bool trace = false;
  // Wall times are recorded in reports only when enabled; the default
  // keeps cells.csv / report.json byte-reproducible across runs.
  bool timings = false;
};

struct CellResult {
  std::string method;
  std::string kernel_id;
  double gamma = 0.0;
  double acc = 0.0;
  double nmi = 0.0;
  int iterations = 0;
  bool converged = false;
  double seconds = 0.0;
  bool failed = false;
  std::string error;

  bool operator==(const CellResult&) const = default;
};

// Per-method aggregates over kernels: each kernel is scored at its best
// gamma (independently for Acc and NMI), then best = max and mean = average
// of those per-kernel scores. Kernels whose cells all failed are excluded.
struct MethodAggregate {
  std::string method;
  double best_acc = 0.0;
  double mean_acc = 0.0;
  double best_nmi = 0.0;
  double mean_nmi = 0.0;
  int kernels_used = 0;
  int kernels_failed = 0;

  bool operator==(const MethodAggregate&) const = default;
};

struct ResultTable {
  std::vector<CellResult> cells;  // sorted by (method, kernel_id, gamma)
  std::vector<MethodAggregate> aggregates;

  bool operator==(const ResultTable&) const = default;
};

enum class ReportFormat { Text, Csv, Json };

void validate_manifest(const ExperimentManifest& m);

// Runs every (method, kernel, gamma) cell, clusters with k = number of
// ground-truth classes, and scores Acc/NMI. Cell failures are recorded
// without aborting; throws only if every cell fails.
ResultTable run_grid(const ExperimentManifest& m);

std::string report(const ResultTable& table, ReportFormat format);

ResultTable table_from_json(const std::string& json_text);

// Writes report.txt, cells.csv and report.json into m.output_dir.
void write_reports(const ResultTable& table, const ExperimentManifest& m);

ExperimentManifest load_manifest(const std::string& path);

Regularizer method_regularizer(const std::string& method);

// Percentage with two decimals, half-up: 0.6624 -> "66.24".
std::string format_pct(double fraction);

}  // namespace slke
