#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "vibim/encoding.hpp"
#include "vibim/regression.hpp"

namespace vibim {

/// A candidate model: a set of design groups, the induced column set, and
/// its OLS refit with information criteria.
struct CandidateModel {
  std::vector<int> group_set;   // sorted group indices
  std::vector<int> column_set;  // sorted column indices (union of groups)
  OlsFit fit;
  CriterionValue criterion;
};

/// Deduplicated candidate models plus (once weighted) their normalized
/// model-averaging weights.
struct ModelSet {
  std::vector<CandidateModel> models;
  std::vector<double> weights;  // empty until weighted; sums to 1 after
  int p_star = 0;               // shared column total the criteria used
  double psi = 1.0;
  std::vector<std::string> provenance;

  std::size_t size() const { return models.size(); }
};

/// Per-group importance scores in [0,1].
struct ImportanceVector {
  std::vector<double> scores;  // indexed by group
  double psi = 1.0;
  std::vector<std::string> provenance;
};

inline CandidateModel make_candidate(const GroupedDesign& design, const Vector& response,
                                     std::vector<int> groups, double psi = 1.0) {
  std::sort(groups.begin(), groups.end());
  groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
  CandidateModel m;
  m.group_set = std::move(groups);
  m.column_set = design.columns_of_groups(m.group_set);
  m.fit = fit_ols(design, m.column_set, response);
  m.criterion = criteria(m.fit, static_cast<int>(m.column_set.size()), design.cols(), psi);
  return m;
}

}  // namespace vibim
