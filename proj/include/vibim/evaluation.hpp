#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iterator>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "vibim/common.hpp"
#include "vibim/encoding.hpp"
#include "vibim/regression.hpp"
#include "vibim/rng.hpp"

namespace vibim {

using PairSet = std::set<std::pair<int, int>>;

/// Interaction-selection accuracy: F is the harmonic mean of precision and
/// recall, G the geometric mean, both against the true pair set. Two empty
/// sets count as a perfect score; exactly one empty scores zero.
struct InteractionScore {
  double f = 0.0;
  double g = 0.0;
  PairSet selected;
  PairSet truth;
};

inline InteractionScore fg_measure(const PairSet& selected, const PairSet& truth) {
  InteractionScore score;
  score.selected = selected;
  score.truth = truth;
  if (selected.empty() && truth.empty()) {
    score.f = score.g = 1.0;
    return score;
  }
  if (selected.empty() || truth.empty()) {
    score.f = score.g = 0.0;
    return score;
  }
  std::size_t hits = 0;
  for (const auto& p : selected) hits += truth.count(p);
  score.f = 2.0 * static_cast<double>(hits) /
            static_cast<double>(selected.size() + truth.size());
  score.g = static_cast<double>(hits) /
            std::sqrt(static_cast<double>(selected.size()) * static_cast<double>(truth.size()));
  return score;
}

/// Canonical variable identity, stable across designs: a main effect is its
/// predictor index, an interaction encodes its (normalized) parent pair.
inline long long main_variable_id(int predictor) { return predictor; }

inline long long pair_variable_id(int i, int j) {
  if (i > j) std::swap(i, j);
  return 1000000LL * (static_cast<long long>(i) + 1) + j;
}

inline std::vector<long long> canonical_selection(const GroupedDesign& design,
                                                  const std::vector<int>& groups) {
  std::vector<long long> out;
  out.reserve(groups.size());
  for (int g : groups) {
    const GroupSource& s = design.groups.at(static_cast<std::size_t>(g)).source;
    if (s.kind == GroupKind::Main) {
      out.push_back(main_variable_id(s.i));
    } else {
      const int i = design.groups.at(static_cast<std::size_t>(s.i)).source.i;
      const int j = design.groups.at(static_cast<std::size_t>(s.j)).source.i;
      out.push_back(pair_variable_id(i, j));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// A selection procedure: maps (design, response, seed) to the canonical
/// ids of the selected variables. Must be a pure function of its arguments.
using Selector =
    std::function<std::vector<long long>(const GroupedDesign&, const Vector&, std::uint64_t)>;

struct StabilityScore {
  double pivs = 0.0;
  double sivs = 0.0;
  double parameter = 0.0;  // tau for PIVS, removal fraction for SIVS
  int replications = 0;
  int failures = 0;  // selector failures, excluded from the mean
};

namespace detail {

inline double symmetric_difference_size(std::vector<long long> a, std::vector<long long> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<long long> diff;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(diff));
  return static_cast<double>(diff.size());
}

}  // namespace detail

/// Residual scale for perturbation schemes: the full-design fit when that
/// is comfortably estimable, otherwise the intercept-only scale.
inline double residual_sigma_hat(const GroupedDesign& design, const Vector& response) {
  const int n = static_cast<int>(design.matrix.rows());
  std::vector<int> groups;
  if (design.cols() <= n / 2) {
    groups.resize(static_cast<std::size_t>(design.n_groups()));
    for (int g = 0; g < design.n_groups(); ++g) groups[static_cast<std::size_t>(g)] = g;
  }
  const OlsFit fit = fit_ols(design, design.columns_of_groups(groups), response);
  if (fit.degenerate || !(fit.sigma2_hat >= 0.0)) return std::sqrt(fit.rss / fit.n);
  return std::sqrt(fit.sigma2_hat);
}

/// Perturbation instability: mean symmetric-difference size (in variables)
/// between the baseline selection and selections on y + tau * sigma_hat * e
/// with standard-normal e, over `reps` draws. Pass a finite `sigma_hat` to
/// override the automatic residual-scale estimate.
inline StabilityScore pivs(const Selector& selector, const GroupedDesign& design,
                           const Vector& response, double tau, int reps,
                           std::uint64_t seed,
                           double sigma_hat = std::numeric_limits<double>::quiet_NaN()) {
  if (!(tau > 0.0)) throw DataError("perturbation size must be positive");
  if (reps < 1) throw DataError("need at least one replication");
  const std::vector<long long> baseline = selector(design, response, seed);
  if (!std::isfinite(sigma_hat)) sigma_hat = residual_sigma_hat(design, response);

  StabilityScore score;
  score.parameter = tau;
  double total = 0.0;
  int counted = 0;
  for (int rep = 0; rep < reps; ++rep) {
    Rng rng(Rng::derive_seed(seed, 1000 + static_cast<std::uint64_t>(rep)));
    Vector perturbed = response;
    for (Eigen::Index i = 0; i < perturbed.size(); ++i)
      perturbed[i] += tau * sigma_hat * rng.normal();
    try {
      const std::vector<long long> sel =
          selector(design, perturbed, Rng::derive_seed(seed, 2000 + static_cast<std::uint64_t>(rep)));
      total += detail::symmetric_difference_size(baseline, sel);
      ++counted;
    } catch (const std::exception&) {
      ++score.failures;
    }
  }
  score.replications = counted;
  score.pivs = counted > 0 ? total / counted : 0.0;
  return score;
}

/// Subsampling instability: mean symmetric-difference size between the
/// baseline selection and selections with floor(fraction * n) rows removed
/// uniformly without replacement.
inline StabilityScore sivs(const Selector& selector, const GroupedDesign& design,
                           const Vector& response, double removal_fraction, int reps,
                           std::uint64_t seed) {
  if (!(removal_fraction >= 0.0 && removal_fraction < 1.0))
    throw DataError("removal fraction must lie in [0,1)");
  if (reps < 1) throw DataError("need at least one replication");
  const int n = static_cast<int>(design.matrix.rows());
  const int drop = static_cast<int>(std::floor(removal_fraction * n));
  const std::vector<long long> baseline = selector(design, response, seed);

  StabilityScore score;
  score.parameter = removal_fraction;
  double total = 0.0;
  int counted = 0;
  for (int rep = 0; rep < reps; ++rep) {
    Rng rng(Rng::derive_seed(seed, 3000 + static_cast<std::uint64_t>(rep)));
    std::vector<int> rows(static_cast<std::size_t>(n));
    std::iota(rows.begin(), rows.end(), 0);
    for (int i = 0; i < drop; ++i) {
      const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
      std::swap(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(j)]);
    }
    std::vector<int> keep(rows.begin() + drop, rows.end());
    std::sort(keep.begin(), keep.end());
    const GroupedDesign reduced = design.subset_rows(keep);
    Vector yred(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i) yred[static_cast<Eigen::Index>(i)] = response[keep[i]];
    try {
      const std::vector<long long> sel =
          selector(reduced, yred, Rng::derive_seed(seed, 4000 + static_cast<std::uint64_t>(rep)));
      total += detail::symmetric_difference_size(baseline, sel);
      ++counted;
    } catch (const std::exception&) {
      ++score.failures;
    }
  }
  score.replications = counted;
  score.sivs = counted > 0 ? total / counted : 0.0;
  return score;
}

struct VifEntry {
  double vif = 1.0;
  bool infinite = false;
  bool collinear = false;  // vif > 4, the conventional alarm level
};

/// Variance inflation factors: column k regressed on the other selected
/// columns plus intercept; VIF_k = 1/(1-R^2_k). Exact collinearity is
/// reported as an infinite flag, not a failure.
inline std::map<int, VifEntry> vif(const GroupedDesign& design,
                                   const std::vector<int>& columns) {
  std::map<int, VifEntry> out;
  for (int k : columns) {
    std::vector<int> others;
    for (int c : columns)
      if (c != k) others.push_back(c);
    const Vector xk = design.matrix.col(k);
    const OlsFit fit = fit_ols(design, others, xk);
    VifEntry entry;
    if (fit.tss <= 0.0) {
      // Constant column: no variance to inflate.
      entry.vif = std::numeric_limits<double>::infinity();
      entry.infinite = true;
    } else {
      const double unexplained = fit.rss / fit.tss;
      if (unexplained <= 1e-12) {
        entry.vif = std::numeric_limits<double>::infinity();
        entry.infinite = true;
      } else {
        entry.vif = 1.0 / unexplained;
      }
    }
    entry.collinear = entry.infinite || entry.vif > 4.0;
    out[k] = entry;
  }
  return out;
}

}  // namespace vibim
