#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vibim/common.hpp"
#include "vibim/schema.hpp"

namespace vibim {

enum class GroupKind { Main, Interaction };

struct GroupSource {
  GroupKind kind = GroupKind::Main;
  int i = -1;  // main-effect predictor index, or first parent of a pair
  int j = -1;  // second parent of a pair, -1 for mains
};

/// One selectable unit of the design: a contiguous block of columns that is
/// kept or dropped together (dummies of a categorical, a continuous column,
/// or all products of an interaction pair).
struct Group {
  std::string label;
  GroupSource source;
  int start = 0;
  int size = 0;
};

struct GroupedDesign {
  Matrix matrix;                          // n x total columns
  std::vector<Group> groups;              // contiguous, disjoint, covering
  std::vector<std::string> column_labels; // one per column
  std::vector<bool> constant_col;         // zero-variance flag per column

  Eigen::Index n_rows() const { return matrix.rows(); }
  int cols() const { return static_cast<int>(matrix.cols()); }
  int n_groups() const { return static_cast<int>(groups.size()); }

  std::vector<int> columns_of(int g) const {
    const Group& grp = groups.at(static_cast<std::size_t>(g));
    std::vector<int> out(static_cast<std::size_t>(grp.size));
    for (int k = 0; k < grp.size; ++k) out[static_cast<std::size_t>(k)] = grp.start + k;
    return out;
  }

  std::vector<int> columns_of_groups(const std::vector<int>& gs) const {
    std::vector<int> out;
    for (int g : gs) {
      const Group& grp = groups.at(static_cast<std::size_t>(g));
      for (int k = 0; k < grp.size; ++k) out.push_back(grp.start + k);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Interaction pairs present among the given groups, as pairs of parent
  /// group indices within this design, normalized to i < j.
  std::set<std::pair<int, int>> interaction_pairs(const std::vector<int>& gs) const {
    std::set<std::pair<int, int>> out;
    for (int g : gs) {
      const GroupSource& s = groups.at(static_cast<std::size_t>(g)).source;
      if (s.kind == GroupKind::Interaction)
        out.insert({std::min(s.i, s.j), std::max(s.i, s.j)});
    }
    return out;
  }

  /// Pair set of every interaction group in the design.
  std::set<std::pair<int, int>> all_interaction_pairs() const {
    std::vector<int> gs(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) gs[g] = static_cast<int>(g);
    return interaction_pairs(gs);
  }

  /// Interaction pairs among the given groups, resolved to the original
  /// predictor indices of the parents. Works on designs whose main-effect
  /// groups are a reordered subset of the schema (two-stage designs).
  std::set<std::pair<int, int>> predictor_pairs(const std::vector<int>& gs) const {
    std::set<std::pair<int, int>> out;
    for (auto [a, b] : interaction_pairs(gs)) {
      const int i = groups.at(static_cast<std::size_t>(a)).source.i;
      const int j = groups.at(static_cast<std::size_t>(b)).source.i;
      out.insert({std::min(i, j), std::max(i, j)});
    }
    return out;
  }

  /// Original predictor indices of the main-effect groups among `gs`.
  std::vector<int> predictor_mains(const std::vector<int>& gs) const {
    std::vector<int> out;
    for (int g : gs) {
      const GroupSource& s = groups.at(static_cast<std::size_t>(g)).source;
      if (s.kind == GroupKind::Main) out.push_back(s.i);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Design containing only the given groups, columns re-laid contiguously
  /// in the given order. Group sources are kept verbatim so the original
  /// predictor identities survive the subset.
  GroupedDesign subset_groups(const std::vector<int>& gs) const {
    GroupedDesign out;
    int total = 0;
    for (int g : gs) total += groups.at(static_cast<std::size_t>(g)).size;
    out.matrix.resize(matrix.rows(), total);
    out.groups.reserve(gs.size());
    int col = 0;
    for (int g : gs) {
      const Group& grp = groups[static_cast<std::size_t>(g)];
      Group copy = grp;
      copy.start = col;
      for (int k = 0; k < grp.size; ++k) {
        out.matrix.col(col + k) = matrix.col(grp.start + k);
        out.column_labels.push_back(column_labels[static_cast<std::size_t>(grp.start + k)]);
        out.constant_col.push_back(constant_col[static_cast<std::size_t>(grp.start + k)]);
      }
      col += grp.size;
      out.groups.push_back(std::move(copy));
    }
    return out;
  }

  GroupedDesign subset_rows(const std::vector<int>& rows) const {
    GroupedDesign out;
    out.matrix.resize(static_cast<Eigen::Index>(rows.size()), matrix.cols());
    for (std::size_t r = 0; r < rows.size(); ++r)
      out.matrix.row(static_cast<Eigen::Index>(r)) = matrix.row(rows[r]);
    out.groups = groups;
    out.column_labels = column_labels;
    out.constant_col.resize(static_cast<std::size_t>(matrix.cols()));
    for (int c = 0; c < out.cols(); ++c) {
      const auto col = out.matrix.col(c);
      out.constant_col[static_cast<std::size_t>(c)] =
          rows.empty() || col.maxCoeff() == col.minCoeff();
    }
    return out;
  }
};

namespace detail {

inline void flag_constant_columns(GroupedDesign& d, int from_col) {
  d.constant_col.resize(static_cast<std::size_t>(d.cols()));
  for (int c = from_col; c < d.cols(); ++c) {
    const auto col = d.matrix.col(c);
    d.constant_col[static_cast<std::size_t>(c)] =
        d.matrix.rows() == 0 || col.maxCoeff() == col.minCoeff();
  }
}

}  // namespace detail

/// Dummy-codes a typed raw table into a grouped design matrix. The last
/// declared level of each categorical is the reference and gets no column;
/// columns follow schema order, then level order.
inline GroupedDesign encode(const PredictorSchema& schema, const RawTable& raw) {
  if (schema.size() != raw.columns.size())
    throw DataError("raw table has " + std::to_string(raw.columns.size()) +
                    " columns but schema declares " + std::to_string(schema.size()));
  const std::size_t n = raw.n_rows;

  int total = 0;
  for (const auto& e : schema.entries())
    total += e.kind == PredictorKind::Categorical
                 ? static_cast<int>(e.n_levels()) - 1
                 : 1;

  GroupedDesign design;
  design.matrix.setZero(static_cast<Eigen::Index>(n), total);
  design.groups.reserve(schema.size());
  design.column_labels.reserve(static_cast<std::size_t>(total));

  int col = 0;
  for (std::size_t i = 0; i < schema.size(); ++i) {
    const PredictorSpec& e = schema.at(i);
    Group grp;
    grp.label = e.name;
    grp.source = GroupSource{GroupKind::Main, static_cast<int>(i), -1};
    grp.start = col;
    if (e.kind == PredictorKind::Continuous) {
      grp.size = 1;
      const auto& vals = raw.numeric(i);
      for (std::size_t r = 0; r < n; ++r) {
        if (!std::isfinite(vals.at(r))) throw NonFiniteValueError(r, e.name);
        design.matrix(static_cast<Eigen::Index>(r), col) = vals.at(r);
      }
      design.column_labels.push_back(e.name);
      ++col;
    } else {
      const int n_dummies = static_cast<int>(e.n_levels()) - 1;
      grp.size = n_dummies;
      const auto& lv = raw.levels(i);
      for (std::size_t r = 0; r < n; ++r) {
        const int l = lv.at(r);
        if (l < 0 || l >= static_cast<int>(e.n_levels()))
          throw UnknownLevelError(r, e.name);
        if (l < n_dummies)
          design.matrix(static_cast<Eigen::Index>(r), col + l) = 1.0;
      }
      for (int d = 0; d < n_dummies; ++d)
        design.column_labels.push_back(e.name + "." + e.levels[static_cast<std::size_t>(d)]);
      col += n_dummies;
    }
    design.groups.push_back(std::move(grp));
  }
  detail::flag_constant_columns(design, 0);
  return design;
}

/// Appends one product group per requested pair of existing main-effect
/// groups. Product columns are ordered row-major in (column of I_i, column
/// of I_j) and are computed from the raw, unstandardized parent columns.
inline GroupedDesign augment_interactions(const GroupedDesign& design,
                                          const std::set<std::pair<int, int>>& pairs) {
  std::vector<std::pair<int, int>> ordered;
  ordered.reserve(pairs.size());
  for (auto [i, j] : pairs) {
    if (i == j) throw SelfPairError(i);
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= design.n_groups())
      throw DataError("interaction pair {" + std::to_string(i) + "," +
                      std::to_string(j) + "} references a missing group");
    ordered.emplace_back(i, j);
  }
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());

  int extra = 0;
  for (auto [i, j] : ordered)
    extra += design.groups[static_cast<std::size_t>(i)].size *
             design.groups[static_cast<std::size_t>(j)].size;

  GroupedDesign out;
  out.matrix.resize(design.matrix.rows(), design.matrix.cols() + extra);
  out.matrix.leftCols(design.matrix.cols()) = design.matrix;
  out.groups = design.groups;
  out.column_labels = design.column_labels;

  int col = design.cols();
  for (auto [i, j] : ordered) {
    const Group& gi = design.groups[static_cast<std::size_t>(i)];
    const Group& gj = design.groups[static_cast<std::size_t>(j)];
    Group grp;
    grp.label = gi.label + "*" + gj.label;
    grp.source = GroupSource{GroupKind::Interaction, i, j};
    grp.start = col;
    grp.size = gi.size * gj.size;
    for (int a = 0; a < gi.size; ++a) {
      for (int b = 0; b < gj.size; ++b) {
        out.matrix.col(col) = design.matrix.col(gi.start + a).cwiseProduct(
            design.matrix.col(gj.start + b));
        out.column_labels.push_back(
            design.column_labels[static_cast<std::size_t>(gi.start + a)] + "*" +
            design.column_labels[static_cast<std::size_t>(gj.start + b)]);
        ++col;
      }
    }
    out.groups.push_back(std::move(grp));
  }
  out.constant_col = design.constant_col;
  detail::flag_constant_columns(out, design.cols());
  return out;
}

}  // namespace vibim
