#include "slke/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <thread>

#include <json.hpp>

#include "slke/dataset.hpp"
#include "slke/errors.hpp"
#include "slke/metrics.hpp"
#include "slke/spectral.hpp"
#include "text.hpp"

namespace slke {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

const std::set<std::string>& allowed_methods() {
  static const std::set<std::string> methods = {"slke-s", "slke-r", "sc-baseline"};
  return methods;
}

std::string cell_stem(const CellResult& cell) {
  return cell.method + "_" + cell.kernel_id + "_g" + detail::format_double(cell.gamma);
}

struct PreparedKernel {
  std::string id;
  Matrix values;   // built and rescaled
  std::string error;  // non-empty when construction failed
};

CellResult run_cell(const ExperimentManifest& m, const PreparedKernel& kernel,
                    const std::string& method, double gamma, const Labels& truth,
                    int k) {
  CellResult cell;
  cell.method = method;
  cell.kernel_id = kernel.id;
  cell.gamma = gamma;

  const auto start = std::chrono::steady_clock::now();
  try {
    if (!kernel.error.empty()) throw DataError(kernel.error);

    Matrix affinity;
    if (method == "sc-baseline") {
      // The kernel itself serves as the similarity matrix.
      affinity = symmetrize_affinity(kernel.values);
      cell.converged = true;
    } else {
      SolverConfig cfg;
      cfg.regularizer = method_regularizer(method);
      cfg.gamma = gamma;
      cfg.mu = m.mu;
      cfg.tol = m.tol;
      cfg.max_iters = m.max_iters;
      cfg.seed = m.seed;
      cfg.nonneg_projection = m.nonneg_projection;
      if (m.trace)
        cfg.trace_path = (fs::path(m.output_dir) / ("trace_" + cell_stem(cell) + ".csv")).string();
      SlkeResult result = slke_fit(kernel.values, cfg);
      cell.iterations = result.iterations;
      cell.converged = result.converged;
      if (m.dump_z)
        write_matrix_csv((fs::path(m.output_dir) / ("Z_" + cell_stem(cell) + ".csv")).string(),
                         result.Z);
      affinity = symmetrize_affinity(result.Z);
    }

    const Labels pred = spectral_clustering(affinity, k, m.seed, m.restarts);
    cell.acc = accuracy(truth, pred);
    cell.nmi = nmi(truth, pred);
  } catch (const std::exception& e) {
    cell.failed = true;
    cell.error = e.what();
    cell.acc = 0.0;
    cell.nmi = 0.0;
  }
  if (m.timings) {
    cell.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return cell;
}

std::vector<MethodAggregate> aggregate(const std::vector<CellResult>& cells,
                                       const std::vector<std::string>& methods) {
  std::vector<MethodAggregate> out;
  for (const auto& method : methods) {
    MethodAggregate agg;
    agg.method = method;
    // Per-kernel best over the gamma grid, independently for Acc and NMI.
    std::set<std::string> kernel_ids;
    for (const auto& c : cells)
      if (c.method == method) kernel_ids.insert(c.kernel_id);
    double sum_acc = 0.0, sum_nmi = 0.0;
    for (const auto& id : kernel_ids) {
      double best_acc = -1.0, best_nmi = -1.0;
      for (const auto& c : cells) {
        if (c.method != method || c.kernel_id != id || c.failed) continue;
        best_acc = std::max(best_acc, c.acc);
        best_nmi = std::max(best_nmi, c.nmi);
      }
      if (best_acc < 0.0) {
        ++agg.kernels_failed;
        continue;
      }
      ++agg.kernels_used;
      sum_acc += best_acc;
      sum_nmi += best_nmi;
      agg.best_acc = std::max(agg.best_acc, best_acc);
      agg.best_nmi = std::max(agg.best_nmi, best_nmi);
    }
    if (agg.kernels_used > 0) {
      agg.mean_acc = sum_acc / agg.kernels_used;
      agg.mean_nmi = sum_nmi / agg.kernels_used;
    }
    out.push_back(std::move(agg));
  }
  return out;
}

json cell_to_json(const CellResult& c) {
  return json{{"method", c.method},     {"kernel_id", c.kernel_id},
              {"gamma", c.gamma},       {"acc", c.acc},
              {"nmi", c.nmi},           {"iterations", c.iterations},
              {"converged", c.converged}, {"seconds", c.seconds},
              {"failed", c.failed},     {"error", c.error}};
}

json aggregate_to_json(const MethodAggregate& a) {
  return json{{"method", a.method},       {"best_acc", a.best_acc},
              {"mean_acc", a.mean_acc},   {"best_nmi", a.best_nmi},
              {"mean_nmi", a.mean_nmi},   {"kernels_used", a.kernels_used},
              {"kernels_failed", a.kernels_failed}};
}

}  // namespace

Regularizer method_regularizer(const std::string& method) {
  if (method == "slke-s") return Regularizer::Sparse;
  if (method == "slke-r") return Regularizer::LowRank;
  throw DataError("method has no regularizer: " + method);
}

std::string format_pct(double fraction) {
  const double pct = std::round(fraction * 10000.0) / 100.0;  // half-up at 2 decimals
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", pct);
  return buf;
}

void validate_manifest(const ExperimentManifest& m) {
  if (m.dataset.empty()) throw DataError("manifest: dataset path is required");
  if (!m.has_labels)
    throw DataError("manifest: bench needs ground-truth labels (has_labels)");
  if (m.kernels.empty()) throw DataError("manifest: kernel grid is empty");
  if (m.gammas.empty()) throw DataError("manifest: gamma grid is empty");
  for (double g : m.gammas)
    if (!(g > 0.0)) throw DataError("manifest: gamma values must be positive");
  if (m.methods.empty()) throw DataError("manifest: methods list is empty");
  for (const auto& method : m.methods) {
    if (!allowed_methods().count(method))
      throw DataError("manifest: unknown method '" + method + "'");
  }
  if (!(m.mu > 0.0)) throw DataError("manifest: mu must be positive");
  if (!(m.tol > 0.0)) throw DataError("manifest: tol must be positive");
  if (m.max_iters < 1) throw DataError("manifest: max_iters must be at least 1");
  if (m.restarts < 1) throw DataError("manifest: restarts must be at least 1");
  if (m.jobs < 1) throw DataError("manifest: jobs must be at least 1");
}

ResultTable run_grid(const ExperimentManifest& m) {
  validate_manifest(m);

  const Dataset ds = load_dataset(m.dataset, m.has_labels);
  if (!ds.labels) throw DataError("bench dataset has no labels");
  const Labels& truth = *ds.labels;
  const int k = ds.num_classes();
  if (k < 2) throw DataError("bench needs at least 2 ground-truth classes");

  if (m.trace || m.dump_z) fs::create_directories(m.output_dir);

  // Kernels are shared read-only across cells; a kernel that cannot be
  // built marks all of its cells failed instead of aborting the grid.
  std::vector<PreparedKernel> kernels;
  std::set<std::string> seen_ids;
  for (const auto& spec : m.kernels) {
    PreparedKernel pk;
    pk.id = spec.name();
    if (!seen_ids.insert(pk.id).second) continue;  // duplicate spec
    try {
      pk.values = rescale_kernel(build_kernel(ds.features, spec));
    } catch (const std::exception& e) {
      pk.error = e.what();
    }
    kernels.push_back(std::move(pk));
  }
  std::sort(kernels.begin(), kernels.end(),
            [](const PreparedKernel& a, const PreparedKernel& b) { return a.id < b.id; });

  std::vector<std::string> methods = m.methods;
  std::sort(methods.begin(), methods.end());
  methods.erase(std::unique(methods.begin(), methods.end()), methods.end());
  std::vector<double> gammas = m.gammas;
  std::sort(gammas.begin(), gammas.end());
  gammas.erase(std::unique(gammas.begin(), gammas.end()), gammas.end());

  struct CellSpec {
    const std::string* method;
    const PreparedKernel* kernel;
    double gamma;
  };
  std::vector<CellSpec> specs;  // enumeration order == report order
  for (const auto& method : methods)
    for (const auto& kernel : kernels)
      for (double gamma : gammas) specs.push_back({&method, &kernel, gamma});

  std::vector<CellResult> cells(specs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= specs.size()) return;
      cells[i] = run_cell(m, *specs[i].kernel, *specs[i].method, specs[i].gamma, truth, k);
    }
  };
  const int jobs = std::max(1, m.jobs);
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  const bool all_failed =
      std::all_of(cells.begin(), cells.end(), [](const CellResult& c) { return c.failed; });
  if (all_failed) {
    throw DataError("all " + std::to_string(cells.size()) +
                    " grid cells failed; first error: " + cells.front().error);
  }

  ResultTable table;
  table.cells = std::move(cells);
  table.aggregates = aggregate(table.cells, methods);
  return table;
}

std::string report(const ResultTable& table, ReportFormat format) {
  if (table.cells.empty()) throw DataError("empty result table");

  if (format == ReportFormat::Csv) {
    std::string out = "method,kernel_id,gamma,acc,nmi,iters,converged,seconds\n";
    for (const auto& c : table.cells) {
      out += c.method + ',' + c.kernel_id + ',' + detail::format_double(c.gamma) + ',';
      out += c.failed ? "" : detail::format_double(c.acc);
      out += ',';
      out += c.failed ? "" : detail::format_double(c.nmi);
      out += ',' + std::to_string(c.iterations) + ',' + (c.converged ? "true" : "false") +
             ',' + detail::format_double(c.seconds) + '\n';
    }
    return out;
  }

  if (format == ReportFormat::Json) {
    json j;
    j["cells"] = json::array();
    for (const auto& c : table.cells) j["cells"].push_back(cell_to_json(c));
    j["aggregates"] = json::array();
    for (const auto& a : table.aggregates) j["aggregates"].push_back(aggregate_to_json(a));
    return j.dump(2) + "\n";
  }

  // Text: per method "best (mean)" percentages for Acc and NMI.
  std::size_t width = 6;
  for (const auto& a : table.aggregates) width = std::max(width, a.method.size());
  std::string out = "method";
  out.append(width - 6 + 2, ' ');
  out += "Acc best (mean)  NMI best (mean)  kernels\n";
  for (const auto& a : table.aggregates) {
    std::string acc = format_pct(a.best_acc) + " (" + format_pct(a.mean_acc) + ")";
    std::string nm = format_pct(a.best_nmi) + " (" + format_pct(a.mean_nmi) + ")";
    out += a.method;
    out.append(width - a.method.size() + 2, ' ');
    out += acc;
    out.append(acc.size() < 15 ? 15 - acc.size() + 2 : 2, ' ');
    out += nm;
    out.append(nm.size() < 15 ? 15 - nm.size() + 2 : 2, ' ');
    out += std::to_string(a.kernels_used) + "/" +
           std::to_string(a.kernels_used + a.kernels_failed) + "\n";
  }
  std::size_t failed = 0;
  for (const auto& c : table.cells)
    if (c.failed) ++failed;
  if (failed > 0) {
    out += "failed cells: " + std::to_string(failed) + " of " +
           std::to_string(table.cells.size()) + " (excluded from aggregates)\n";
  }
  return out;
}

ResultTable table_from_json(const std::string& json_text) {
  json j = json::parse(json_text);
  ResultTable table;
  for (const auto& jc : j.at("cells")) {
    CellResult c;
    c.method = jc.at("method").get<std::string>();
    c.kernel_id = jc.at("kernel_id").get<std::string>();
    c.gamma = jc.at("gamma").get<double>();
    c.acc = jc.at("acc").get<double>();
    c.nmi = jc.at("nmi").get<double>();
    c.iterations = jc.at("iterations").get<int>();
    c.converged = jc.at("converged").get<bool>();
    c.seconds = jc.at("seconds").get<double>();
    c.failed = jc.at("failed").get<bool>();
    c.error = jc.at("error").get<std::string>();
    table.cells.push_back(std::move(c));
  }
  for (const auto& ja : j.at("aggregates")) {
    MethodAggregate a;
    a.method = ja.at("method").get<std::string>();
    a.best_acc = ja.at("best_acc").get<double>();
    a.mean_acc = ja.at("mean_acc").get<double>();
    a.best_nmi = ja.at("best_nmi").get<double>();
    a.mean_nmi = ja.at("mean_nmi").get<double>();
    a.kernels_used = ja.at("kernels_used").get<int>();
    a.kernels_failed = ja.at("kernels_failed").get<int>();
    table.aggregates.push_back(std::move(a));
  }
  return table;
}

void write_reports(const ResultTable& table, const ExperimentManifest& m) {
  fs::create_directories(m.output_dir);
  auto write = [&](const char* name, const std::string& content) {
    const auto path = fs::path(m.output_dir) / name;
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("write failed: " + path.string());
  };
  write("report.txt", report(table, ReportFormat::Text));
  write("cells.csv", report(table, ReportFormat::Csv));
  write("report.json", report(table, ReportFormat::Json));
}

ExperimentManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError("manifest " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError("manifest must be a JSON object");

  static const std::set<std::string> known = {
      "dataset", "has_labels", "kernels",  "gammas",   "methods",
      "mu",      "tol",        "max_iters", "nonneg_projection",
      "restarts", "seed",      "output_dir", "jobs",   "dump_z",
      "trace",   "timings"};
  for (const auto& item : j.items()) {
    if (!known.count(item.key()))
      throw ParseError("manifest: unknown key '" + item.key() + "'");
  }

  ExperimentManifest m;
  try {
    if (j.contains("dataset")) m.dataset = j["dataset"].get<std::string>();
    if (j.contains("has_labels")) m.has_labels = j["has_labels"].get<bool>();
    if (j.contains("kernels")) {
      if (j["kernels"].is_string()) {
        if (j["kernels"] != "standard")
          throw ParseError("manifest: kernels must be \"standard\" or a list of specs");
      } else {
        m.kernels.clear();
        for (const auto& s : j["kernels"]) m.kernels.push_back(KernelSpec::parse(s.get<std::string>()));
      }
    }
    if (j.contains("gammas")) m.gammas = j["gammas"].get<std::vector<double>>();
    if (j.contains("methods")) m.methods = j["methods"].get<std::vector<std::string>>();
    if (j.contains("mu")) m.mu = j["mu"].get<double>();
    if (j.contains("tol")) m.tol = j["tol"].get<double>();
    if (j.contains("max_iters")) m.max_iters = j["max_iters"].get<int>();
    if (j.contains("nonneg_projection")) m.nonneg_projection = j["nonneg_projection"].get<bool>();
    if (j.contains("restarts")) m.restarts = j["restarts"].get<int>();
    if (j.contains("seed")) m.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("output_dir")) m.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("jobs")) m.jobs = j["jobs"].get<int>();
    if (j.contains("dump_z")) m.dump_z = j["dump_z"].get<bool>();
    if (j.contains("trace")) m.trace = j["trace"].get<bool>();
    if (j.contains("timings")) m.timings = j["timings"].get<bool>();
  } catch (const json::exception& e) {
    throw ParseError("manifest " + path + ": " + e.what());
  }
  return m;
}

}  // namespace slke
