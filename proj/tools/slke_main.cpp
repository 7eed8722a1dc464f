// Command-line front end: kernel construction, single solver runs,
// spectral clustering, label scoring, and the full benchmark grid.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "slke/bench.hpp"
#include "slke/dataset.hpp"
#include "slke/errors.hpp"
#include "slke/kernels.hpp"
#include "slke/metrics.hpp"
#include "slke/solver.hpp"
#include "slke/spectral.hpp"

namespace fs = std::filesystem;

namespace {

std::vector<slke::KernelSpec> parse_kernel_list(const std::string& text) {
  if (text == "standard") return slke::standard_grid();
  std::vector<slke::KernelSpec> specs;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      if (i > start) specs.push_back(slke::KernelSpec::parse(text.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (specs.empty()) throw slke::DataError("no kernel specs in '" + text + "'");
  return specs;
}

struct KernelArgs {
  std::string data;
  bool labels = false;
  std::string specs = "standard";
  bool no_rescale = false;
  std::string out = ".";
};

int run_kernel(const KernelArgs& args) {
  const slke::Dataset ds = slke::load_dataset(args.data, args.labels);
  fs::create_directories(args.out);
  for (const auto& spec : parse_kernel_list(args.specs)) {
    slke::Matrix k = slke::build_kernel(ds.features, spec);
    if (!args.no_rescale) k = slke::rescale_kernel(k);
    const auto path = fs::path(args.out) / ("kernel_" + spec.name() + ".csv");
    slke::write_matrix_csv(path.string(), k);
    std::cout << path.string() << "\n";
  }
  return 0;
}

struct FitArgs {
  std::string kernel;
  std::string data;
  bool labels = false;
  std::string spec;
  bool rescale = false;
  std::string method = "slke-s";
  double gamma = 1e-3;
  double mu = 1.0;
  double tol = 1e-4;
  int max_iters = 300;
  std::uint64_t seed = 0;
  bool allow_negative = false;
  std::string out;
  std::string trace;
};

int run_fit(const FitArgs& args) {
  slke::Matrix k;
  if (!args.kernel.empty()) {
    k = slke::load_kernel(args.kernel);
    if (args.rescale) k = slke::rescale_kernel(k);
  } else {
    if (args.data.empty() || args.spec.empty())
      throw slke::DataError("fit needs either --kernel or --data with --spec");
    const slke::Dataset ds = slke::load_dataset(args.data, args.labels);
    k = slke::rescale_kernel(slke::build_kernel(ds.features, slke::KernelSpec::parse(args.spec)));
  }

  slke::SolverConfig cfg;
  cfg.regularizer = slke::method_regularizer(args.method);
  cfg.gamma = args.gamma;
  cfg.mu = args.mu;
  cfg.tol = args.tol;
  cfg.max_iters = args.max_iters;
  cfg.seed = args.seed;
  cfg.nonneg_projection = !args.allow_negative;
  cfg.trace_path = args.trace;

  const slke::SlkeResult result = slke::slke_fit(k, cfg);
  if (!args.out.empty()) slke::write_matrix_csv(args.out, result.Z);

  std::cout << "iterations " << result.iterations << "\ن";
  return 0;
}

struct ClusterArgs {
  std::string affinity;
  int k = 2;
  std::uint64_t seed = 0;
  int restarts = 20;
  bool symmetrize = false;
  std::string out;
};

int run_cluster(const ClusterArgs& args) {
  slke::Matrix a = slke::load_matrix_csv(args.affinity);
  if (args.symmetrize) a = slke::symmetrize_affinity(a);
  const slke::Labels labels = slke::spectral_clustering(a, args.k, args.seed, args.restarts);
  if (!args.out.empty()) {
    slke::write_labels_csv(args.out, labels);
    std::cout << args.out << "\n";
  } else {
    for (int l : labels) std::cout << l << "\n";
  }
  return 0;
}

struct EvalArgs {
  std::string truth;
  std::string pred;
};

int run_eval(const EvalArgs& args) {
  const slke::Labels truth = slke::load_labels_csv(args.truth);
  const slke::Labels pred = slke::load_labels_csv(args.pred);
  std::printf("acc=%.6f nmi=%.6f\n", slke::accuracy(truth, pred), slke::nmi(truth, pred));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"similarity learning by kernel reconstruction, with spectral "
               "clustering and evaluation"};
  app.require_subcommand(1);

  KernelArgs kernel_args;
  auto* kernel_cmd = app.add_subcommand("kernel", "build kernel matrices from a dataset CSV");
  kernel_cmd->add_option("--data", kernel_args.data, "dataset CSV, one sample per row")->required();
  kernel_cmd->add_flag("--labels", kernel_args.labels, "last column holds class labels");
  kernel_cmd->add_option("--specs", kernel_args.specs,
                         "'standard' or comma list like gaussian:1,linear,poly:1:2");
  kernel_cmd->add_flag("--no-rescale", kernel_args.no_rescale, "skip division by the max element");
  kernel_cmd->add_option("--out", kernel_args.out, "output directory");

  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "learn a similarity matrix from a kernel");
  fit_cmd->add_option("--kernel", fit_args.kernel, "precomputed kernel CSV");
  fit_cmd->add_option("--data", fit_args.data, "dataset CSV (used with --spec)");
  fit_cmd->add_flag("--labels", fit_args.labels, "last column holds class labels");
  fit_cmd->add_option("--spec", fit_args.spec, "kernel spec, e.g. gaussian:1");
  fit_cmd->add_flag("--rescale", fit_args.rescale, "rescale a precomputed kernel");
  fit_cmd->add_option("--method", fit_args.method, "slke-s (sparse) or slke-r (low-rank)")
      ->check(CLI::IsMember({"slke-s", "slke-r"}));
  fit_cmd->add_option("--gamma", fit_args.gamma, "regularization weight");
  fit_cmd->add_option("--mu", fit_args.mu, "ADMM penalty");
  fit_cmd->add_option("--tol", fit_args.tol, "feasibility tolerance");
  fit_cmd->add_option("--max-iters", fit_args.max_iters, "iteration cap");
  fit_cmd->add_option("--seed", fit_args.seed, "RNG seed");
  fit_cmd->add_flag("--allow-negative", fit_args.allow_negative,
                    "skip clamping negative Z entries");
  fit_cmd->add_option("--out", fit_args.out, "write learned Z here");
  fit_cmd->add_option("--trace", fit_args.trace, "write per-iteration trace CSV here");

  ClusterArgs cluster_args;
  auto* cluster_cmd = app.add_subcommand("cluster", "spectral clustering of an affinity CSV");
  cluster_cmd->add_option("--affinity", cluster_args.affinity, "affinity matrix CSV")->required();
  cluster_cmd->add_option("--k", cluster_args.k, "number of clusters")->required();
  cluster_cmd->add_option("--seed", cluster_args.seed, "RNG seed");
  cluster_cmd->add_option("--restarts", cluster_args.restarts, "k-means restarts");
  cluster_cmd->add_flag("--symmetrize", cluster_args.symmetrize,
                        "apply (|A| + |A^T|)/2 before clustering");
  cluster_cmd->add_option("--out", cluster_args.out, "write labels here (default: stdout)");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "score predicted labels against ground truth");
  eval_cmd->add_option("--truth", eval_args.truth, "ground-truth label CSV")->required();
  eval_cmd->add_option("--pred", eval_args.pred, "predicted label CSV")->required();

  slke::ExperimentManifest manifest;
  std::string manifest_path, methods_csv, kernels_csv, gammas_csv;
  auto* bench_cmd = app.add_subcommand("bench", "run the full kernel x gamma x method grid");
  bench_cmd->add_option("--manifest", manifest_path, "JSON manifest; flags override its keys");
  auto* opt_data = bench_cmd->add_option("--data", manifest.dataset, "dataset CSV");
  auto* opt_labels = bench_cmd->add_flag("--labels", manifest.has_labels,
                                         "last column holds class labels");
  auto* opt_methods = bench_cmd->add_option(
      "--methods", methods_csv, "comma list from {slke-s, slke-r, sc-baseline}");
  auto* opt_kernels = bench_cmd->add_option(
      "--kernels", kernels_csv, "'standard' or comma list of kernel specs");
  auto* opt_gammas = bench_cmd->add_option("--gammas", gammas_csv, "comma list of gamma values");
  auto* opt_mu = bench_cmd->add_option("--mu", manifest.mu, "ADMM penalty");
  auto* opt_tol = bench_cmd->add_option("--tol", manifest.tol, "feasibility tolerance");
  auto* opt_iters = bench_cmd->add_option("--max-iters", manifest.max_iters, "iteration cap");
  auto* opt_restarts = bench_cmd->add_option("--restarts", manifest.restarts, "k-means restarts");
  auto* opt_seed = bench_cmd->add_option("--seed", manifest.seed, "RNG seed");
  auto* opt_out = bench_cmd->add_option("--out", manifest.output_dir, "output directory");
  auto* opt_jobs = bench_cmd->add_option("--jobs", manifest.jobs, "parallel grid workers");
  auto* opt_dump = bench_cmd->add_flag("--dump-z", manifest.dump_z, "write learned Z per cell");
  auto* opt_trace = bench_cmd->add_flag("--trace", manifest.trace, "write solver traces per cell");
  auto* opt_timings = bench_cmd->add_flag(
      "--timings", manifest.timings, "record wall times (reports stop being byte-reproducible)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*kernel_cmd) return run_kernel(kernel_args);
    if (*fit_cmd) return run_fit(fit_args);
    if (*cluster_cmd) return run_cluster(cluster_args);
    if (*eval_cmd) return run_eval(eval_args);

    // bench: manifest file first, then CLI overrides on top
    if (!manifest_path.empty()) {
      slke::ExperimentManifest base = slke::load_manifest(manifest_path);
      if (!*opt_data) manifest.dataset = base.dataset;
      if (!*opt_labels) manifest.has_labels = base.has_labels;
      if (!*opt_kernels) manifest.kernels = base.kernels;
      if (!*opt_gammas) manifest.gammas = base.gammas;
      if (!*opt_methods) manifest.methods = base.methods;
      if (!*opt_mu) manifest.mu = base.mu;
      if (!*opt_tol) manifest.tol = base.tol;
      if (!*opt_iters) manifest.max_iters = base.max_iters;
      if (!*opt_restarts) manifest.restarts = base.restarts;
      if (!*opt_seed) manifest.seed = base.seed;
      if (!*opt_out) manifest.output_dir = base.output_dir;
      if (!*opt_jobs) manifest.jobs = base.jobs;
      if (!*opt_dump) manifest.dump_z = base.dump_z;
      if (!*opt_trace) manifest.trace = base.trace;
      if (!*opt_timings) manifest.timings = base.timings;
      manifest.nonneg_projection = base.nonneg_projection;
    }
    if (*opt_methods) {
      manifest.methods.clear();
      std::size_t start = 0;
      for (std::size_t i = 0; i <= methods_csv.size(); ++i) {
        if (i == methods_csv.size() || methods_csv[i] == ',') {
          if (i > start) manifest.methods.push_back(methods_csv.substr(start, i - start));
          start = i + 1;
        }
      }
    }
    if (*opt_kernels) manifest.kernels = parse_kernel_list(kernels_csv);
    if (*opt_gammas) {
      manifest.gammas.clear();
      std::size_t start = 0;
      for (std::size_t i = 0; i <= gammas_csv.size(); ++i) {
        if (i == gammas_csv.size() || gammas_csv[i] == ',') {
          if (i > start) {
            try {
              manifest.gammas.push_back(std::stod(gammas_csv.substr(start, i - start)));
            } catch (const std::exception&) {
              throw slke::DataError("bad gamma value in '" + gammas_csv + "'");
            }
          }
          start = i + 1;
        }
      }
    }

    const slke::ResultTable table = slke::run_grid(manifest);
    slke::write_reports(table, manifest);
    std::cout << slke::report(table, slke::ReportFormat::Text);
    return 0;
  } catch (const slke::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const slke::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
