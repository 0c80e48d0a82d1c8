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

#include "dso/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string_view>

#include "dso/error.hpp"
#include "json.hpp"

namespace dso {
namespace {

bool parse_double(std::string_view token, double& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_index(std::string_view token, std::uint64_t& out) {
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end;
}

double map_label(double raw, LabelMode mode, std::size_t line) {
  if (mode == LabelMode::kRegression) return raw;
  if (raw == 1.0) return 1.0;
  if (raw == 0.0 || raw == -1.0) return -1.0;
  throw ParseError(ErrorCode::kParse, line, "classification label must be one of -1, 0, +1");
}

}  // namespace

SparseDataset SparseDataset::from_rows(std::vector<SparseRow> rows, std::size_t num_features,
                                       LabelMode mode) {
  if (rows.empty()) throw Error(ErrorCode::kEmptyDataset, "dataset has no examples");
  if (num_features == 0) throw Error(ErrorCode::kEmptyDataset, "dataset has no features");
  if (num_features > std::numeric_limits<Index>::max() ||
      rows.size() > std::numeric_limits<Index>::max()) {
    throw Error(ErrorCode::kInvalidArgument, "dataset dimensions exceed 32-bit indexing");
  }

  SparseDataset ds;
  ds.mode_ = mode;
  ds.row_ptr_.reserve(rows.size() + 1);
  ds.row_ptr_.push_back(0);
  ds.labels_.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& entries = rows[i].entries;
    if (!std::isfinite(rows[i].label)) {
      throw Error(ErrorCode::kNonFinite, "label of example " + std::to_string(i) + " is not finite");
    }
    if (mode == LabelMode::kClassification && rows[i].label != 1.0 && rows[i].label != -1.0) {
      throw Error(ErrorCode::kInvalidArgument, "classification labels must be -1 or +1");
    }
    std::sort(entries.begin(), entries.end(),
              [](const Nonzero& a, const Nonzero& b) { return a.index < b.index; });
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const auto& e = entries[k];
      if (e.index >= num_features) {
        throw Error(ErrorCode::kInvalidArgument,
                    "feature index " + std::to_string(e.index) + " out of range in example " + std::to_string(i));
      }
      if (!std::isfinite(e.value)) {
        throw Error(ErrorCode::kNonFinite, "non-finite value in example " + std::to_string(i));
      }
      if (k > 0 && entries[k - 1].index == e.index) {
        throw Error(ErrorCode::kDuplicateFeature,
                    "feature " + std::to_string(e.index) + " repeated in example " + std::to_string(i));
      }
      if (e.value != 0.0) ds.row_entries_.push_back(e);
    }
    ds.row_ptr_.push_back(ds.row_entries_.size());
    ds.labels_.push_back(rows[i].label);
  }
  ds.raw_labels_ = ds.labels_;
  ds.build_columns(num_features);
  return ds;
}

void SparseDataset::build_columns(std::size_t num_features) {
  col_ptr_.assign(num_features + 1, 0);
  for (const auto& e : row_entries_) ++col_ptr_[e.index + 1];
  for (std::size_t j = 0; j < num_features; ++j) col_ptr_[j + 1] += col_ptr_[j];
  col_entries_.resize(row_entries_.size());
  std::vector<std::size_t> cursor(col_ptr_.begin(), col_ptr_.end() - 1);
  const std::size_t m = num_examples();
  // Rows are visited in order, so each column list comes out sorted by i.
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& e : row(i)) {
      col_entries_[cursor[e.index]++] = Nonzero{static_cast<Index>(i), e.value};
    }
  }
}

std::optional<double> SparseDataset::find(std::size_t i, std::size_t j) const {
  if (i >= num_examples()) return std::nullopt;
  auto r = row(i);
  auto it = std::lower_bound(r.begin(), r.end(), j,
                             [](const Nonzero& e, std::size_t key) { return e.index < key; });
  if (it == r.end() || it->index != j) return std::nullopt;
  return it->value;
}

double SparseDataset::dot_row(std::size_t i, std::span<const double> w) const {
  double sum = 0.0;
  for (const auto& e : row(i)) {
    if (e.index < w.size()) sum += w[e.index] * e.value;
  }
  return sum;
}

double SparseDataset::raw_score(std::size_t i, std::span<const double> w) const {
  const double s = dot_row(i, w);
  return folded_ ? raw_labels_[i] * s : s;
}

SparseDataset parse_libsvm(std::istream& in, const ParseOptions& options) {
  std::vector<SparseRow> rows;
  std::size_t max_feature = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);

    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < view.size()) {
      while (pos < view.size() && std::isspace(static_cast<unsigned char>(view[pos]))) ++pos;
      std::size_t start = pos;
      while (pos < view.size() && !std::isspace(static_cast<unsigned char>(view[pos]))) ++pos;
      if (pos > start) tokens.push_back(view.substr(start, pos - start));
    }
    if (tokens.empty()) continue;

    SparseRow row;
    double raw_label = 0.0;
    if (!parse_double(tokens[0], raw_label)) {
      throw ParseError(ErrorCode::kParse, line_no, "malformed label '" + std::string(tokens[0]) + "'");
    }
    if (!std::isfinite(raw_label)) throw ParseError(ErrorCode::kNonFinite, line_no, "label is not finite");
    row.label = map_label(raw_label, options.mode, line_no);

    row.entries.reserve(tokens.size() - 1);
    for (std::size_t k = 1; k < tokens.size(); ++k) {
      auto token = tokens[k];
      auto colon = token.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(ErrorCode::kParse, line_no, "expected idx:val, got '" + std::string(token) + "'");
      }
      std::uint64_t index = 0;
      double value = 0.0;
      if (!parse_index(token.substr(0, colon), index) || index == 0) {
        throw ParseError(ErrorCode::kParse, line_no, "bad feature index in '" + std::string(token) + "'");
      }
      if (!parse_double(token.substr(colon + 1), value)) {
        throw ParseError(ErrorCode::kParse, line_no, "bad feature value in '" + std::string(token) + "'");
      }
      if (!std::isfinite(value)) {
        throw ParseError(ErrorCode::kNonFinite, line_no, "non-finite value in '" + std::string(token) + "'");
      }
      if (index > std::numeric_limits<Index>::max()) {
        throw ParseError(ErrorCode::kParse, line_no, "feature index too large");
      }
      max_feature = std::max<std::size_t>(max_feature, index);
      row.entries.push_back(Nonzero{static_cast<Index>(index - 1), value});
    }
    std::sort(row.entries.begin(), row.entries.end(),
              [](const Nonzero& a, const Nonzero& b) { return a.index < b.index; });
    for (std::size_t k = 1; k < row.entries.size(); ++k) {
      if (row.entries[k].index == row.entries[k - 1].index) {
        throw ParseError(ErrorCode::kDuplicateFeature, line_no,
                         "feature " + std::to_string(row.entries[k].index + 1) + " appears twice");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::kEmptyDataset, "input contains no examples");
  const std::size_t d = std::max<std::size_t>({max_feature, options.min_features, 1});
  return SparseDataset::from_rows(std::move(rows), d, options.mode);
}

SparseDataset read_libsvm_file(const std::filesystem::path& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return parse_libsvm(in, options);
}

void write_libsvm(std::ostream& out, const SparseDataset& dataset) {
  char buffer[64];
  auto put = [&](double v) {
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
    out.write(buffer, ptr - buffer);
  };
  for (std::size_t i = 0; i < dataset.num_examples(); ++i) {
    const double y = dataset.label(i);
    if (dataset.mode() == LabelMode::kClassification) {
      out << (y > 0 ? "+1" : "-1");
    } else {
      put(y);
    }
    for (const auto& e : dataset.row(i)) {
      out << ' ' << (e.index + 1) << ':';
      put(e.value);
    }
    out << '\n';
  }
}

SparseDataset fold_labels(const SparseDataset& dataset) {
  if (dataset.folded()) throw Error(ErrorCode::kAlreadyFolded, "labels were already folded into the data");
  if (dataset.mode() != LabelMode::kClassification) {
    throw Error(ErrorCode::kFoldRequiresBinaryLabels, "only classification datasets can be folded");
  }
  SparseDataset out = dataset;
  for (std::size_t i = 0; i < out.num_examples(); ++i) {
    const double y = out.labels_[i];
    for (std::size_t k = out.row_ptr_[i]; k < out.row_ptr_[i + 1]; ++k) out.row_entries_[k].value *= y;
    out.labels_[i] = 1.0;
  }
  out.folded_ = true;
  out.build_columns(dataset.num_features());
  return out;
}

DatasetStats dataset_stats(const SparseDataset& dataset) {
  DatasetStats s;
  s.m = dataset.num_examples();
  s.d = dataset.num_features();
  s.nnz_total = dataset.nnz();
  s.density = static_cast<double>(s.nnz_total) / (static_cast<double>(s.m) * static_cast<double>(s.d));
  for (std::size_t i = 0; i < s.m; ++i) s.max_row_nnz = std::max(s.max_row_nnz, dataset.row_nnz(i));
  for (std::size_t j = 0; j < s.d; ++j) s.max_col_nnz = std::max(s.max_col_nnz, dataset.col_nnz(j));
  return s;
}

std::vector<OmegaEntry> omega_entries(const SparseDataset& dataset) {
  std::vector<OmegaEntry> out;
  out.reserve(dataset.nnz());
  for (std::size_t i = 0; i < dataset.num_examples(); ++i) {
    for (const auto& e : dataset.row(i)) out.push_back(OmegaEntry{static_cast<Index>(i), e.index, e.value});
  }
  return out;
}

std::string stats_to_json(const DatasetStats& stats) {
  nlohmann::ordered_json j;
  j["m"] = stats.m;
  j["d"] = stats.d;
  j["nnz"] = stats.nnz_total;
  j["density"] = stats.density;
  j["max_row_nnz"] = stats.max_row_nnz;
  j["max_col_nnz"] = stats.max_col_nnz;
  return j.dump();
}

}  // namespace dso
