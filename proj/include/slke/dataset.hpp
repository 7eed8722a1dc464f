#pragma once

#include <optional>
#include <string>

#include "slke/types.hpp"

namespace slke {

/// Feature matrix in feature-major form (m features x n sample columns),
/// optionally paired with ground-truth labels encoded 0..k-1 by first
/// appearance in the source file.
struct Dataset {
  Matrix features;
  std::optional<Labels> labels;

  int num_features() const { return static_cast<int>(features.rows()); }
  int num_samples() const { return static_cast<int>(features.cols()); }
  int num_classes() const;
};

// CSV with one sample per row; when has_labels, the last column is the
// class label (integer or string). A single header row is auto-detected
// by a non-numeric first row.
Dataset load_dataset(const std::string& path, bool has_labels);

// Dense n x n kernel CSV. Validates squareness and symmetry to 1e-8,
// then symmetrizes via (K + K^T) / 2.
Matrix load_kernel(const std::string& path);

// Generic rectangular matrix CSV (no transpose applied).
Matrix load_matrix_csv(const std::string& path);

// Single-column label file; labels re-encoded 0..k-1 by first appearance.
Labels load_labels_csv(const std::string& path);

// Writers emit UTF-8, comma-delimited CSV with a header row. Values are
// printed with shortest round-trip precision.
void write_matrix_csv(const std::string& path, const Matrix& m);
void write_labels_csv(const std::string& path, const Labels& labels);
void write_dataset_csv(const std::string& path, const Dataset& ds);

int count_classes(const Labels& labels);

}  // namespace slke
