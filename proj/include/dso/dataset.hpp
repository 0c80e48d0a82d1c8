/*
 * Copyright 2026 The DSO Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DSO_DATASET_HPP_
#define DSO_DATASET_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dso {

using Index = std::uint32_t;

enum class LabelMode { kClassification, kRegression };

// One stored coordinate. In a row view `index` is the feature j; in a column
// view it is the example i.
struct Nonzero {
  Index index;
  double value;
};

// An element (i, j, x_ij) of Omega.
struct OmegaEntry {
  Index i;
  Index j;
  double x;
};

struct SparseRow {
  double label = 0.0;
  std::vector<Nonzero> entries;  // feature indices, any order
};

/// The m x d design matrix with labels, stored twice: row-major (CSR) for the
/// per-example view Omega_i and column-major (CSC) for the per-feature view
/// Omega-bar_j. Immutable after construction and safe to share between
/// threads.
///
/// For classification losses the labels are folded into the rows (x_i <- y_i
/// x_i, y_i <- +1) so that every loss is written in margin form. The labels as
/// loaded are kept in raw_labels() for evaluation.
class SparseDataset {
 public:
  SparseDataset() = default;

  /// Validates and indexes `rows`. Feature indices are 0-based and need not be
  /// sorted; duplicates, out-of-range indices and non-finite values throw.
  /// Explicit zeros are dropped since they are not part of Omega.
  static SparseDataset from_rows(std::vector<SparseRow> rows, std::size_t num_features,
                                 LabelMode mode);

  std::size_t num_examples() const noexcept { return row_ptr_.empty() ? 0 : row_ptr_.size() - 1; }
  std::size_t num_features() const noexcept { return col_ptr_.empty() ? 0 : col_ptr_.size() - 1; }
  std::size_t nnz() const noexcept { return row_entries_.size(); }

  std::span<const Nonzero> row(std::size_t i) const {
    return {row_entries_.data() + row_ptr_[i], row_entries_.data() + row_ptr_[i + 1]};
  }
  std::span<const Nonzero> col(std::size_t j) const {
    return {col_entries_.data() + col_ptr_[j], col_entries_.data() + col_ptr_[j + 1]};
  }
  std::size_t row_nnz(std::size_t i) const { return row_ptr_[i + 1] - row_ptr_[i]; }
  std::size_t col_nnz(std::size_t j) const { return col_ptr_[j + 1] - col_ptr_[j]; }

  /// x_ij if (i, j) is in Omega.
  std::optional<double> find(std::size_t i, std::size_t j) const;

  double label(std::size_t i) const { return labels_[i]; }
  std::span<const double> labels() const noexcept { return labels_; }
  std::span<const double> raw_labels() const noexcept { return raw_labels_; }

  LabelMode mode() const noexcept { return mode_; }
  bool folded() const noexcept { return folded_; }

  /// <w, x_i> over the stored row; features at or beyond w.size() are skipped.
  double dot_row(std::size_t i, std::span<const double> w) const;

  /// Raw-label view of the margin: y_i <w, x_i> for folded data, <w, x_i> otherwise.
  double raw_score(std::size_t i, std::span<const double> w) const;

 private:
  friend SparseDataset fold_labels(const SparseDataset& dataset);

  void build_columns(std::size_t num_features);

  std::vector<std::size_t> row_ptr_;
  std::vector<Nonzero> row_entries_;
  std::vector<std::size_t> col_ptr_;
  std::vector<Nonzero> col_entries_;
  std::vector<double> labels_;
  std::vector<double> raw_labels_;
  LabelMode mode_ = LabelMode::kClassification;
  bool folded_ = false;
};

struct DatasetStats {
  std::size_t m = 0;
  std::size_t d = 0;
  std::size_t nnz_total = 0;
  double density = 0.0;
  std::size_t max_row_nnz = 0;
  std::size_t max_col_nnz = 0;
};

struct ParseOptions {
  LabelMode mode = LabelMode::kClassification;
  // Lower bound on d, e.g. the training dimension when loading a test split.
  std::size_t min_features = 0;
};

/// Reads the LIBSVM text format ("label idx:val idx:val ..." with 1-based
/// indices). In classification mode labels 1/+1 map to +1 and 0/-1 to -1.
/// No scaling or normalization is applied.
SparseDataset parse_libsvm(std::istream& in, const ParseOptions& options = {});
SparseDataset read_libsvm_file(const std::filesystem::path& path, const ParseOptions& options = {});

/// Writes the current (possibly folded) values with 1-based indices and
/// round-trip precision.
void write_libsvm(std::ostream& out, const SparseDataset& dataset);

/// Returns a copy with x_i <- y_i x_i and y_i <- +1.
SparseDataset fold_labels(const SparseDataset& dataset);

DatasetStats dataset_stats(const SparseDataset& dataset);

/// All of Omega as (i, j, x_ij) triples sorted by (i, j).
std::vector<OmegaEntry> omega_entries(const SparseDataset& dataset);

/// Single JSON object with keys m, d, nnz, density, max_row_nnz, max_col_nnz.
std::string stats_to_json(const DatasetStats& stats);

}  // namespace dso

#endif  // DSO_DATASET_HPP_
