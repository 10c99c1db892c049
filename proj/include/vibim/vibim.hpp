#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vibim/encoding.hpp"
#include "vibim/importance.hpp"
#include "vibim/model_set.hpp"
#include "vibim/solvers.hpp"

namespace vibim {

struct VibimConfig {
  double psi = 1.0;
  double threshold_c = 1e-4;  // screening threshold, in (0,1)
  int max_rank_K = 15;        // nested-model count cap
  bool high_dim_criteria = false;  // forced on; auto-triggers when columns >= n
  std::uint64_t rng_seed = 0;
  int n_lambda = 100;

  std::array<PenaltySpec, 3> penalty_specs() const {
    PenaltySpec lasso, scad, mcp;
    lasso.family = PenaltyFamily::GroupLasso;
    scad.family = PenaltyFamily::GroupScad;
    mcp.family = PenaltyFamily::GroupMcp;
    lasso.n_lambda = scad.n_lambda = mcp.n_lambda = n_lambda;
    return {lasso, scad, mcp};
  }

  void validate() const {
    if (!(threshold_c > 0.0 && threshold_c < 1.0))
      throw DataError("screening threshold must lie in (0,1)");
    if (max_rank_K < 1) throw DataError("need at least one nested model");
    if (psi <= 0.0) throw DataError("psi must be positive");
  }
};

struct NestedModel {
  int size_s = 0;            // number of groups (ranking prefix length)
  std::vector<int> groups;   // the top-s groups, in ranking order
  OlsFit fit;
  CriterionValue criterion;
};

struct VibimReport {
  ImportanceVector stage1_importance;   // over the main-effects design
  std::vector<int> screened_set;        // M_c, main-effect groups past the threshold
  GroupedDesign augmented;              // mains + screened pairwise interactions
  ImportanceVector stage2_importance;   // over the augmented design
  std::vector<int> ranking;             // all augmented groups, by descending score
  std::vector<NestedModel> nested_models;
  int window_lo = 1;                    // L: 1-based index of the BIC minimizer
  int window_hi = 1;                    // U: 1-based index of the AIC minimizer
  bool high_dim_criteria_used = false;
  ModelSet stage2_models;               // weighted candidate set behind stage 2

  /// Groups of the s-th nested model (ranking prefix), clamped to the
  /// built range.
  std::vector<int> top_groups(int s) const {
    s = std::clamp(s, 1, static_cast<int>(ranking.size()));
    return std::vector<int>(ranking.begin(), ranking.begin() + s);
  }
};

/// The five-step interaction modeling procedure: main-effect importance,
/// threshold screening, pairwise augmentation, re-ranking, nested models,
/// and the AIC/BIC plausibility window.
inline VibimReport run_vibim(const GroupedDesign& design, const Vector& response,
                             const VibimConfig& config = {}) {
  config.validate();
  if (design.n_groups() == 0) throw EmptyDesignError();
  const int n = static_cast<int>(design.matrix.rows());
  if (n < 10) throw DataError("need at least 10 observations");

  const auto specs = config.penalty_specs();

  VibimReport report;

  // Step 1: importance of the main effects.
  ModelSet stage1 = bicp_weights(
      assemble_candidates(design, response, specs, config.psi), config.psi);
  report.stage1_importance = soil(design, stage1);

  // Step 2: screen, then add every distinct pair from the screened set.
  for (int g = 0; g < design.n_groups(); ++g)
    if (report.stage1_importance.scores[static_cast<std::size_t>(g)] > config.threshold_c)
      report.screened_set.push_back(g);
  std::set<std::pair<int, int>> pairs;
  for (std::size_t a = 0; a < report.screened_set.size(); ++a)
    for (std::size_t b = a + 1; b < report.screened_set.size(); ++b)
      pairs.insert({report.screened_set[a], report.screened_set[b]});
  report.augmented = augment_interactions(design, pairs);

  // Step 3: recompute importance over the augmented design.
  report.stage2_models = bicp_weights(
      assemble_candidates(report.augmented, response, specs, config.psi), config.psi);
  report.stage2_importance = soil(report.augmented, report.stage2_models);

  // Step 4: rank (ties by ascending group index) and build nested models,
  // capped so the largest stays comfortably OLS-estimable.
  report.ranking.resize(static_cast<std::size_t>(report.augmented.n_groups()));
  for (int g = 0; g < report.augmented.n_groups(); ++g)
    report.ranking[static_cast<std::size_t>(g)] = g;
  const auto& s2 = report.stage2_importance.scores;
  std::stable_sort(report.ranking.begin(), report.ranking.end(), [&](int a, int b) {
    const double sa = s2[static_cast<std::size_t>(a)], sb = s2[static_cast<std::size_t>(b)];
    if (sa != sb) return sa > sb;
    return a < b;
  });

  const int col_budget = std::max(1, n / 2);
  int used_cols = 0;
  std::vector<int> prefix;
  for (int g : report.ranking) {
    const int gcols = report.augmented.groups[static_cast<std::size_t>(g)].size;
    if (static_cast<int>(report.nested_models.size()) >= config.max_rank_K) break;
    if (!prefix.empty() && used_cols + gcols > col_budget) break;
    prefix.push_back(g);
    used_cols += gcols;
    NestedModel nm;
    nm.size_s = static_cast<int>(prefix.size());
    nm.groups = prefix;
    std::vector<int> sorted_groups = prefix;
    std::sort(sorted_groups.begin(), sorted_groups.end());
    const std::vector<int> cols = report.augmented.columns_of_groups(sorted_groups);
    nm.fit = fit_ols(report.augmented, cols, response);
    nm.criterion = criteria(nm.fit, static_cast<int>(cols.size()),
                            report.augmented.cols(), config.psi);
    report.nested_models.push_back(std::move(nm));
  }

  // Step 5: plausibility window between the BIC and AIC minimizers, with
  // the complexity-corrected criteria once the design outgrows n.
  report.high_dim_criteria_used =
      config.high_dim_criteria || report.augmented.cols() >= n;
  int arg_bic = 0, arg_aic = 0;
  for (std::size_t s = 1; s < report.nested_models.size(); ++s) {
    const CriterionValue& c = report.nested_models[s].criterion;
    const CriterionValue& cb = report.nested_models[static_cast<std::size_t>(arg_bic)].criterion;
    const CriterionValue& ca = report.nested_models[static_cast<std::size_t>(arg_aic)].criterion;
    if ((report.high_dim_criteria_used ? c.bic_p : c.bic) <
        (report.high_dim_criteria_used ? cb.bic_p : cb.bic))
      arg_bic = static_cast<int>(s);
    if ((report.high_dim_criteria_used ? c.aic_p : c.aic) <
        (report.high_dim_criteria_used ? ca.aic_p : ca.aic))
      arg_aic = static_cast<int>(s);
  }
  report.window_lo = std::min(arg_bic, arg_aic) + 1;
  report.window_hi = std::max(arg_bic, arg_aic) + 1;
  return report;
}

struct NestedModelRow {
  int size_s = 0;
  std::vector<std::string> labels;
  double bic = 0.0;
  double aic = 0.0;
  bool in_window = false;
};

/// Flat projection of the nested-model sequence for printing.
inline std::vector<NestedModelRow> nested_model_table(const VibimReport& report) {
  std::vector<NestedModelRow> rows;
  rows.reserve(report.nested_models.size());
  for (const NestedModel& nm : report.nested_models) {
    NestedModelRow row;
    row.size_s = nm.size_s;
    for (int g : nm.groups)
      row.labels.push_back(report.augmented.groups[static_cast<std::size_t>(g)].label);
    row.bic = nm.criterion.bic;
    row.aic = nm.criterion.aic;
    row.in_window = nm.size_s >= report.window_lo && nm.size_s <= report.window_hi;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace vibim
