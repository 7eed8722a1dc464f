#include "slke/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "slke/errors.hpp"
#include "text.hpp"

namespace slke {

namespace {

struct CsvTable {
  std::vector<std::vector<std::string>> rows;  // header already stripped
  bool had_header = false;
};

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;  // blank lines ignored
    lines.push_back(line);
  }
  return lines;
}

// `numeric_cells(row)` says how many leading cells must parse as numbers;
// the first row is treated as a header when any of those cells does not.
template <typename F>
CsvTable read_csv(const std::string& path, F numeric_cells) {
  CsvTable table;
  auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto cells = detail::split_line(lines[i]);
    if (i == 0) {
      const std::size_t need = std::min<std::size_t>(numeric_cells(cells), cells.size());
      bool header = false;
      for (std::size_t c = 0; c < need; ++c) {
        if (!detail::parse_double(cells[c])) {
          header = true;
          break;
        }
      }
      if (header) {
        table.had_header = true;
        continue;
      }
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

double parse_numeric_cell(const std::string& cell, std::size_t row, std::size_t col) {
  auto v = detail::parse_double(cell);
  if (!v) {
    throw ParseError("non-numeric cell '" + cell + "' at row " + std::to_string(row + 1) +
                     ", column " + std::to_string(col + 1));
  }
  if (!std::isfinite(*v)) {
    throw ParseError("non-finite cell '" + cell + "' at row " + std::to_string(row + 1) +
                     ", column " + std::to_string(col + 1));
  }
  return *v;
}

void check_arity(const CsvTable& table) {
  const std::size_t width = table.rows.front().size();
  for (std::size_t r = 1; r < table.rows.size(); ++r) {
    if (table.rows[r].size() != width) {
      throw ParseError("row " + std::to_string(r + 1) + " has " +
                       std::to_string(table.rows[r].size()) + " cells, expected " +
                       std::to_string(width));
    }
  }
}

// First-appearance dense encoding; preserves the partition structure.
Labels encode_labels(const std::vector<std::string>& raw) {
  Labels out;
  out.reserve(raw.size());
  std::unordered_map<std::string, int> ids;
  for (const auto& s : raw) {
    auto [it, inserted] = ids.emplace(s, static_cast<int>(ids.size()));
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

int count_classes(const Labels& labels) {
  std::unordered_set<int> distinct(labels.begin(), labels.end());
  return static_cast<int>(distinct.size());
}

int Dataset::num_classes() const { return labels ? count_classes(*labels) : 0; }

Dataset load_dataset(const std::string& path, bool has_labels) {
  auto table = read_csv(path, [&](const std::vector<std::string>& cells) {
    return has_labels && !cells.empty() ? cells.size() - 1 : cells.size();
  });
  if (table.rows.empty()) throw ParseError("no data rows in " + path);
  check_arity(table);

  const std::size_t n = table.rows.size();
  const std::size_t width = table.rows.front().size();
  const std::size_t m = has_labels ? width - 1 : width;
  if (n < 2) throw DataError("need at least 2 samples, got " + std::to_string(n));
  if (m < 1) throw DataError("no feature columns in " + path);

  Dataset ds;
  ds.features.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  std::vector<std::string> raw_labels;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      ds.features(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r)) =
          parse_numeric_cell(table.rows[r][c], r, c);
    }
    if (has_labels) raw_labels.push_back(table.rows[r][m]);
  }
  if (has_labels) ds.labels = encode_labels(raw_labels);
  return ds;
}

Matrix load_matrix_csv(const std::string& path) {
  auto table = read_csv(path, [](const std::vector<std::string>& cells) { return cells.size(); });
  if (table.rows.empty()) throw ParseError("no data rows in " + path);
  check_arity(table);

  const auto rows = static_cast<Eigen::Index>(table.rows.size());
  const auto cols = static_cast<Eigen::Index>(table.rows.front().size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = parse_numeric_cell(table.rows[r][c], r, c);
  return m;
}

Matrix load_kernel(const std::string& path) {
  Matrix k = load_matrix_csv(path);
  if (k.rows() != k.cols()) {
    throw DataError("kernel matrix is not square: " + std::to_string(k.rows()) + "x" +
                    std::to_string(k.cols()));
  }
  const double asym = (k - k.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8) {
    throw DataError("kernel asymmetry " + detail::format_double(asym) +
                    " exceeds tolerance 1e-8");
  }
  return ((k + k.transpose()) / 2.0).eval();
}

Labels load_labels_csv(const std::string& path) {
  // Header detection degrades to "non-numeric first cell" here, so label
  // files holding string labels should carry a header row.
  auto lines = read_lines(path);
  std::vector<std::string> raw;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto cells = detail::split_line(lines[i]);
    if (cells.size() != 1) {
      throw ParseError("label file row " + std::to_string(i + 1) + " has " +
                       std::to_string(cells.size()) + " cells, expected 1");
    }
    if (i == 0 && !detail::parse_double(cells[0])) continue;
    raw.push_back(cells[0]);
  }
  if (raw.empty()) throw ParseError("no labels in " + path);
  return encode_labels(raw);
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? "," : "") << 'c' << c;
  out << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      out << (c ? "," : "") << detail::format_double(m(r, c));
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

void write_labels_csv(const std::string& path, const Labels& labels) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  out << "label\n";
  for (int l : labels) out << l << '\n';
  if (!out) throw IoError("write failed: " + path);
}

void write_dataset_csv(const std::string& path, const Dataset& ds) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  for (Eigen::Index f = 0; f < ds.features.rows(); ++f) out << (f ? "," : "") << 'f' << f;
  if (ds.labels) out << ",label";
  out << '\n';
  for (Eigen::Index s = 0; s < ds.features.cols(); ++s) {
    for (Eigen::Index f = 0; f < ds.features.rows(); ++f)
      out << (f ? "," : "") << detail::format_double(ds.features(f, s));
    if (ds.labels) out << ',' << (*ds.labels)[static_cast<std::size_t>(s)];
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace slke
