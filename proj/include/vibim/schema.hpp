#pragma once

#include <cstddef>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "vibim/common.hpp"

namespace vibim {

enum class PredictorKind { Continuous, Categorical };

struct PredictorSpec {
  std::string name;
  PredictorKind kind = PredictorKind::Continuous;
  std::vector<std::string> levels;  // categorical only, J >= 2, declared order

  std::size_t n_levels() const { return levels.size(); }
};

/// Ordered, typed predictor roster. Ordering defines the predictor index
/// used everywhere downstream (group i of the main-effects design).
class PredictorSchema {
 public:
  PredictorSchema() = default;

  explicit PredictorSchema(std::vector<PredictorSpec> entries)
      : entries_(std::move(entries)) {
    std::unordered_set<std::string> seen;
    for (const auto& e : entries_) {
      if (!seen.insert(e.name).second)
        throw DataError("duplicate predictor name '" + e.name + "'");
      if (e.kind == PredictorKind::Categorical) {
        if (e.levels.size() < 2)
          throw DataError("categorical predictor '" + e.name +
                          "' needs at least 2 levels");
        std::unordered_set<std::string> lv(e.levels.begin(), e.levels.end());
        if (lv.size() != e.levels.size())
          throw DataError("categorical predictor '" + e.name +
                          "' has duplicate levels");
      }
    }
  }

  const std::vector<PredictorSpec>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const PredictorSpec& at(std::size_t i) const { return entries_.at(i); }

 private:
  std::vector<PredictorSpec> entries_;
};

/// Column of raw (pre-encoding) data: continuous values, or 0-based level
/// indices for a categorical predictor.
using RawColumn = std::variant<std::vector<double>, std::vector<int>>;

struct RawTable {
  std::size_t n_rows = 0;
  std::vector<RawColumn> columns;  // aligned with schema entries

  const std::vector<double>& numeric(std::size_t i) const {
    return std::get<std::vector<double>>(columns.at(i));
  }
  const std::vector<int>& levels(std::size_t i) const {
    return std::get<std::vector<int>>(columns.at(i));
  }
};

}  // namespace vibim
