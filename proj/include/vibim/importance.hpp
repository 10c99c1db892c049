#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "vibim/model_set.hpp"
#include "vibim/solvers.hpp"

namespace vibim {

/// Builds the candidate model set: the union of active sets across every
/// step of every requested path, deduplicated, with the null model always
/// present. Models too dense for a meaningful OLS refit (columns >= n-1)
/// are dropped. Each survivor carries its refit and criteria.
inline ModelSet assemble_candidates(const GroupedDesign& design, const Vector& response,
                                    std::span<const PenaltySpec> specs, double psi = 1.0) {
  const int n = static_cast<int>(design.matrix.rows());

  std::set<std::vector<int>> harvested;
  harvested.insert(std::vector<int>{});  // null model is always a candidate
  ModelSet out;
  for (const PenaltySpec& spec : specs) {
    const SolverPath path = fit_path(design, response, spec);
    int fresh = 0;
    for (const PathStep& step : path.steps)
      if (harvested.insert(step.active_groups).second) ++fresh;
    const char* name = spec.family == PenaltyFamily::GroupLasso  ? "group lasso"
                       : spec.family == PenaltyFamily::GroupScad ? "group SCAD"
                                                                 : "group MCP";
    out.provenance.push_back(std::string(name) + " path: " + std::to_string(fresh) +
                             " new active sets");
  }

  out.p_star = design.cols();
  out.psi = psi;
  for (const std::vector<int>& groups : harvested) {
    const std::vector<int> cols = design.columns_of_groups(groups);
    if (!groups.empty() && static_cast<int>(cols.size()) >= n - 1) continue;
    out.models.push_back(make_candidate(design, response, groups, psi));
  }
  // std::set already yields a deterministic order (size-agnostic lex);
  // sort by (columns, groups) so reports read smallest models first.
  std::sort(out.models.begin(), out.models.end(),
            [](const CandidateModel& a, const CandidateModel& b) {
              if (a.column_set.size() != b.column_set.size())
                return a.column_set.size() < b.column_set.size();
              return a.group_set < b.group_set;
            });
  return out;
}

/// Exponential model weights w_M ∝ exp(-I_M/2 - psi * C_M), normalized to
/// sum exactly to one. The max exponent is subtracted before
/// exponentiation, so criterion magnitudes in the thousands are safe.
inline ModelSet bicp_weights(ModelSet models, double psi = 1.0) {
  if (models.models.empty()) throw DataError("cannot weight an empty model set");
  if (psi <= 0.0) throw DataError("psi must be positive");
  models.psi = psi;
  std::vector<double> expo(models.models.size());
  double max_expo = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < models.models.size(); ++i) {
    const CriterionValue& c = models.models[i].criterion;
    expo[i] = -0.5 * c.bic - psi * c.c_m;
    max_expo = std::max(max_expo, expo[i]);
  }
  models.weights.resize(models.models.size());
  double total = 0.0;
  for (std::size_t i = 0; i < expo.size(); ++i) {
    models.weights[i] = std::exp(expo[i] - max_expo);
    total += models.weights[i];
  }
  for (double& w : models.weights) w /= total;
  return models;
}

/// SOIL importance: S_j = sum of weights of the candidate models whose
/// column set contains every column of group j.
inline ImportanceVector soil(const GroupedDesign& design, const ModelSet& models,
                             const std::vector<int>& target_groups) {
  if (models.weights.size() != models.models.size())
    throw DataError("model set must be weighted before scoring");
  ImportanceVector iv;
  iv.psi = models.psi;
  iv.provenance = models.provenance;
  iv.scores.assign(static_cast<std::size_t>(design.n_groups()), 0.0);
  for (int g : target_groups) {
    const std::vector<int> cols = design.columns_of(g);
    double score = 0.0;
    for (std::size_t i = 0; i < models.models.size(); ++i) {
      const std::vector<int>& m = models.models[i].column_set;
      if (std::includes(m.begin(), m.end(), cols.begin(), cols.end()))
        score += models.weights[i];
    }
    // Summation roundoff must not push past the [0,1] bounds.
    iv.scores[static_cast<std::size_t>(g)] = std::clamp(score, 0.0, 1.0);
  }
  return iv;
}

inline ImportanceVector soil(const GroupedDesign& design, const ModelSet& models) {
  std::vector<int> all(static_cast<std::size_t>(design.n_groups()));
  for (int g = 0; g < design.n_groups(); ++g) all[static_cast<std::size_t>(g)] = g;
  return soil(design, models, all);
}

}  // namespace vibim
