#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "mbfr/errors.hpp"
#include "mbfr/rng.hpp"

namespace mbfr {

// Original (min, max) of a column before the unit rescale.
struct RescaleRecord {
  double min = 0.0;
  double max = 0.0;
};

// Immutable column-major numeric table with one designated target column.
// All mutating operations return a new Dataset.
class Dataset {
 public:
  Dataset() = default;

  Dataset(std::vector<std::string> names,
          std::vector<std::vector<double>> columns, std::string target)
      : names_(std::move(names)),
        columns_(std::move(columns)),
        target_(std::move(target)) {
    validate();
  }

  std::size_t n_rows() const { return columns_.empty() ? 0 : columns_[0].size(); }
  std::size_t n_cols() const { return columns_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& target_name() const { return target_; }
  bool has_target() const { return !target_.empty(); }

  std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    throw DataError("unknown column: " + name);
  }

  const std::vector<double>& column(std::size_t i) const { return columns_.at(i); }
  const std::vector<double>& column(const std::string& name) const {
    return columns_[index_of(name)];
  }
  const std::vector<double>& target() const { return column(target_); }

  std::vector<std::string> feature_names() const {
    std::vector<std::string> out;
    for (const auto& n : names_)
      if (n != target_) out.push_back(n);
    return out;
  }

  bool rescaled() const { return !rescale_records_.empty(); }
  const std::vector<RescaleRecord>& rescale_records() const { return rescale_records_; }
  const std::vector<bool>& constant_flags() const { return constant_flags_; }
  std::size_t dropped_rows() const { return dropped_rows_; }

  // Maps every column to [0,1] via x -> (x - min) / (max - min). Constant
  // columns become all-zeros and are flagged. Idempotent.
  Dataset rescale_unit() const {
    Dataset out = *this;
    out.rescale_records_.resize(n_cols());
    out.constant_flags_.assign(n_cols(), false);
    for (std::size_t c = 0; c < n_cols(); ++c) {
      auto& col = out.columns_[c];
      auto [mn_it, mx_it] = std::minmax_element(col.begin(), col.end());
      double mn = *mn_it, mx = *mx_it;
      out.rescale_records_[c] = {mn, mx};
      if (mx == mn) {
        std::fill(col.begin(), col.end(), 0.0);
        out.constant_flags_[c] = true;
        continue;
      }
      double span = mx - mn;
      for (double& v : col) v = (v - mn) / span;
      // Guard against round-off pushing the extremes off their exact values.
      for (double& v : col) v = std::clamp(v, 0.0, 1.0);
    }
    return out;
  }

  // Replaces the target column with a seeded random permutation of itself.
  Dataset shuffle_target(std::uint64_t seed) const {
    if (!has_target()) throw DataError("dataset has no target column");
    Dataset out = *this;
    Rng rng(seed);
    rng.shuffle(out.columns_[index_of(target_)]);
    return out;
  }

  // Restriction to the named columns, row order preserved. The target
  // designation survives only if the target is among the names.
  Dataset subset(const std::vector<std::string>& keep) const {
    Dataset out;
    out.target_ = "";
    for (const auto& name : keep) {
      std::size_t i = index_of(name);
      out.names_.push_back(names_[i]);
      out.columns_.push_back(columns_[i]);
      if (!rescale_records_.empty()) {
        out.rescale_records_.push_back(rescale_records_[i]);
        out.constant_flags_.push_back(constant_flags_[i]);
      }
      if (names_[i] == target_) out.target_ = target_;
    }
    out.validate(/*require_target=*/false);
    return out;
  }

  Dataset with_target(const std::string& name) const {
    Dataset out = *this;
    out.target_ = name;
    (void)out.index_of(name);
    return out;
  }

  void write_csv(std::ostream& os) const {
    for (std::size_t c = 0; c < n_cols(); ++c)
      os << (c ? "," : "") << names_[c];
    os << "\n";
    std::ostringstream cell;
    cell.precision(17);
    for (std::size_t r = 0; r < n_rows(); ++r) {
      for (std::size_t c = 0; c < n_cols(); ++c) {
        if (c) os << ",";
        cell.str("");
        cell << columns_[c][r];
        os << cell.str();
      }
      os << "\n";
    }
  }

  void write_csv(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw DataError("cannot open for writing: " + path);
    write_csv(os);
  }

  static Dataset from_columns(std::vector<std::string> names,
                              std::vector<std::vector<double>> columns,
                              std::string target) {
    return Dataset(std::move(names), std::move(columns), std::move(target));
  }

  friend Dataset load_csv(const std::string&, const std::string&, bool);

 private:
  void validate(bool require_target = true) const {
    if (columns_.size() != names_.size())
      throw DataError("column/name count mismatch");
    if (!columns_.empty()) {
      std::size_t n = columns_[0].size();
      for (const auto& c : columns_)
        if (c.size() != n) throw DataError("ragged columns");
    }
    std::unordered_set<std::string> seen;
    for (const auto& n : names_)
      if (!seen.insert(n).second) throw DataError("duplicate column name: " + n);
    if (!target_.empty()) {
      bool found = false;
      for (const auto& n : names_) found |= (n == target_);
      if (!found) throw DataError("target column not present: " + target_);
    } else if (require_target) {
      throw DataError("no target column designated");
    }
  }

  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
  std::string target_;
  std::vector<RescaleRecord> rescale_records_;
  std::vector<bool> constant_flags_;
  std::size_t dropped_rows_ = 0;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(field);
      field.clear();
    } else if (ch != '\r') {
      field += ch;
    }
  }
  out.push_back(field);
  return out;
}

inline std::optional<double> parse_cell(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace detail

// Loads an RFC-4180-style CSV with a mandatory header row. Every cell must
// parse as a finite number; with drop_incomplete, rows containing a
// non-finite or empty cell are dropped and counted instead.
inline Dataset load_csv(const std::string& path, const std::string& target,
                        bool drop_incomplete = false) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw DataError("empty file: " + path);
  Dataset d;
  d.names_ = detail::split_csv_line(line);
  std::unordered_set<std::string> seen;
  for (const auto& n : d.names_)
    if (!seen.insert(n).second)
      throw DataError("duplicate header column: " + n);
  d.columns_.assign(d.names_.size(), {});
  d.target_ = target;

  std::size_t row = 0;
  std::vector<double> buf(d.names_.size());
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    auto cells = detail::split_csv_line(line);
    if (cells.size() != d.names_.size())
      throw DataError("row " + std::to_string(row) + ": expected " +
                      std::to_string(d.names_.size()) + " cells, got " +
                      std::to_string(cells.size()));
    bool incomplete = false;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      auto v = detail::parse_cell(cells[c]);
      if (!v || !std::isfinite(*v)) {
        if (drop_incomplete) {
          incomplete = true;
          break;
        }
        throw DataError("non-numeric cell at row " + std::to_string(row) +
                        ", column " + d.names_[c]);
      }
      buf[c] = *v;
    }
    if (incomplete) {
      ++d.dropped_rows_;
      continue;
    }
    for (std::size_t c = 0; c < buf.size(); ++c) d.columns_[c].push_back(buf[c]);
  }
  // An empty target name loads a feature-only table (estimate-id use case).
  d.validate(/*require_target=*/false);
  if (d.n_rows() < 2) throw DataError("dataset needs at least 2 rows");
  return d;
}

}  // namespace mbfr
