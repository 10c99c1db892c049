#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "vibim/common.hpp"
#include "vibim/encoding.hpp"
#include "vibim/model_set.hpp"
#include "vibim/rng.hpp"

namespace vibim {

enum class PenaltyFamily { GroupLasso, GroupScad, GroupMcp };

/// Group-penalized path request. An empty lambda_grid asks the solver to
/// build the default log-equispaced grid of n_lambda values.
struct PenaltySpec {
  PenaltyFamily family = PenaltyFamily::GroupLasso;
  std::vector<double> lambda_grid;
  int n_lambda = 100;
  double scad_a = 3.7;   // must stay > 2
  double mcp_gamma = 3.0;  // must stay > 1
  bool standardize = true;
};

struct PathStep {
  double lambda = 0.0;
  Vector beta;            // coefficients on the original column scale
  double intercept = 0.0;
  std::vector<int> active_groups;  // sorted; groups with nonzero block norm
  bool converged = true;
  int iterations = 0;
};

struct SolverPath {
  std::vector<PathStep> steps;
};

namespace detail {

// Group blocks centered (optionally) and orthonormalized so Z_g'Z_g = n*I.
// Rank-deficient blocks shrink to their rank; all-constant blocks vanish.
struct ZGroup {
  int group = 0;    // index into the source design
  int z_start = 0;  // first column in Z
  int rank = 0;
  double mult = 1.0;  // penalty multiplier, sqrt(original group size)
  Matrix back;        // original block size x rank; beta_x = back * beta_z
};

struct StandardizedDesign {
  Matrix Z;
  std::vector<ZGroup> zgroups;
  Vector col_mean;  // per original column (zero when not centering)
  bool centered = true;
  int n = 0;
};

inline StandardizedDesign standardize_design(const GroupedDesign& design, bool center) {
  const Eigen::Index n = design.matrix.rows();
  StandardizedDesign sd;
  sd.n = static_cast<int>(n);
  sd.centered = center;
  sd.col_mean = center ? Vector(design.matrix.colwise().mean())
                       : Vector(Vector::Zero(design.matrix.cols()));

  std::vector<Matrix> zblocks;
  int total_rank = 0;
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  for (int g = 0; g < design.n_groups(); ++g) {
    const Group& grp = design.groups[static_cast<std::size_t>(g)];
    Matrix block = design.matrix.middleCols(grp.start, grp.size);
    if (center) block.rowwise() -= sd.col_mean.segment(grp.start, grp.size).transpose();

    Eigen::JacobiSVD<Matrix> svd(block, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double tol = std::max<double>(static_cast<double>(n), grp.size) *
                       std::numeric_limits<double>::epsilon() * (sv.size() > 0 ? sv[0] : 0.0);
    int rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
      if (sv[k] > tol && sv[k] > 0.0) ++rank;
    if (rank == 0) continue;

    ZGroup zg;
    zg.group = g;
    zg.z_start = total_rank;
    zg.rank = rank;
    zg.mult = std::sqrt(static_cast<double>(grp.size));
    zg.back = svd.matrixV().leftCols(rank) *
              sv.head(rank).cwiseInverse().asDiagonal() * sqrt_n;
    zblocks.push_back(svd.matrixU().leftCols(rank) * sqrt_n);
    sd.zgroups.push_back(std::move(zg));
    total_rank += rank;
  }

  sd.Z.resize(n, total_rank);
  for (std::size_t k = 0; k < sd.zgroups.size(); ++k)
    sd.Z.middleCols(sd.zgroups[k].z_start, sd.zgroups[k].rank) = zblocks[k];
  return sd;
}

inline double lambda_max_of(const StandardizedDesign& sd, const Vector& y_centered) {
  double lam = 0.0;
  for (const ZGroup& zg : sd.zgroups) {
    const double gnorm =
        (sd.Z.middleCols(zg.z_start, zg.rank).transpose() * y_centered).norm();
    lam = std::max(lam, gnorm / (zg.mult * static_cast<double>(sd.n)));
  }
  // Nudge above the exact boundary so the first grid point is a clean null.
  return lam * (1.0 + 1e-12);
}

// Blockwise soft-threshold: shrink the block norm by t, or kill the block.
inline Vector soft_threshold(const Vector& z, double t) {
  const double s = z.norm();
  if (s <= t) return Vector::Zero(z.size());
  return (1.0 - t / s) * z;
}

inline Vector group_update(const Vector& z, double t, PenaltyFamily family,
                           double scad_a, double mcp_gamma) {
  if (t <= 0.0) return z;
  const double s = z.norm();
  switch (family) {
    case PenaltyFamily::GroupLasso:
      return soft_threshold(z, t);
    case PenaltyFamily::GroupScad:
      if (s <= 2.0 * t) return soft_threshold(z, t);
      if (s <= scad_a * t)
        return ((scad_a - 1.0) / (scad_a - 2.0)) *
               soft_threshold(z, scad_a * t / (scad_a - 1.0));
      return z;
    case PenaltyFamily::GroupMcp:
      if (s <= mcp_gamma * t)
        return (mcp_gamma / (mcp_gamma - 1.0)) * soft_threshold(z, t);
      return z;
  }
  return z;
}

inline double penalty_value(double s, double t, PenaltyFamily family, double scad_a,
                            double mcp_gamma) {
  switch (family) {
    case PenaltyFamily::GroupLasso:
      return t * s;
    case PenaltyFamily::GroupScad:
      if (s <= t) return t * s;
      if (s <= scad_a * t)
        return (2.0 * scad_a * t * s - s * s - t * t) / (2.0 * (scad_a - 1.0));
      return 0.5 * (scad_a + 1.0) * t * t;
    case PenaltyFamily::GroupMcp:
      if (s <= mcp_gamma * t) return t * s - s * s / (2.0 * mcp_gamma);
      return 0.5 * mcp_gamma * t * t;
  }
  return 0.0;
}

inline void validate_spec(const PenaltySpec& spec) {
  if (spec.scad_a <= 2.0) throw DataError("SCAD shape parameter must exceed 2");
  if (spec.mcp_gamma <= 1.0) throw DataError("MCP shape parameter must exceed 1");
  if (spec.n_lambda < 1) throw DataError("need at least one lambda value");
  const auto& g = spec.lambda_grid;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!(g[k] >= 0.0) || !std::isfinite(g[k]))
      throw DataError("lambda grid must be finite and nonnegative");
    if (k > 0 && !(g[k] < g[k - 1]))
      throw DataError("lambda grid must be strictly descending");
  }
}

}  // namespace detail

/// Default tuning grid: log-equispaced from the smallest lambda that kills
/// every group down to a ratio of it (1e-4 when n exceeds the column count,
/// 0.05 otherwise), both ends included.
inline std::vector<double> lambda_grid(const GroupedDesign& design, const Vector& response,
                                       int n_lambda = 100) {
  if (design.n_groups() == 0) throw EmptyDesignError();
  if (n_lambda < 1) throw DataError("need at least one lambda value");
  detail::StandardizedDesign sd = detail::standardize_design(design, true);
  if (sd.zgroups.empty()) throw AllConstantDesignError();
  const Vector yc = response.array() - response.mean();
  const double lam_max = detail::lambda_max_of(sd, yc);
  if (!(lam_max > 0.0)) throw AllConstantDesignError();
  const double ratio = sd.n > design.cols() ? 1e-4 : 0.05;
  const double lam_min = ratio * lam_max;
  std::vector<double> grid(static_cast<std::size_t>(n_lambda));
  if (n_lambda == 1) {
    grid[0] = lam_max;
    return grid;
  }
  const double step = (std::log(lam_min) - std::log(lam_max)) / (n_lambda - 1);
  for (int k = 0; k < n_lambda; ++k)
    grid[static_cast<std::size_t>(k)] = std::exp(std::log(lam_max) + step * k);
  grid.front() = lam_max;
  grid.back() = lam_min;
  return grid;
}

/// Fits the whole regularization path by group coordinate descent on the
/// group-orthonormalized design, warm-starting each lambda from the last.
/// Coefficients come back on the original column scale; constant columns
/// stay pinned at zero. A non-converged step is flagged, not fatal.
///
/// `sweep_observer`, when set, receives the penalized objective after every
/// sweep (test hook for monotonicity checks).
inline SolverPath fit_path(const GroupedDesign& design, const Vector& response,
                           const PenaltySpec& spec,
                           const std::function<void(double)>& sweep_observer = {}) {
  detail::validate_spec(spec);
  if (design.n_groups() == 0) throw EmptyDesignError();

  detail::StandardizedDesign sd = detail::standardize_design(design, spec.standardize);
  const double y_mean = spec.standardize ? response.mean() : 0.0;
  const Vector yc = response.array() - y_mean;
  const double n = static_cast<double>(sd.n);

  std::vector<double> grid = spec.lambda_grid;
  if (grid.empty()) grid = lambda_grid(design, response, spec.n_lambda);

  const int total_rank = static_cast<int>(sd.Z.cols());
  Vector beta = Vector::Zero(total_rank);
  Vector r = yc;

  const int max_sweeps = 10000;
  const double tol = 1e-7;

  // One pass over the given blocks; returns the largest block change.
  const auto sweep = [&](const std::vector<int>& which, double lambda) {
    double max_change = 0.0;
    for (int k : which) {
      const detail::ZGroup& zg = sd.zgroups[static_cast<std::size_t>(k)];
      const auto zblock = sd.Z.middleCols(zg.z_start, zg.rank);
      Vector z = zblock.transpose() * r / n + beta.segment(zg.z_start, zg.rank);
      Vector updated =
          detail::group_update(z, lambda * zg.mult, spec.family, spec.scad_a, spec.mcp_gamma);
      Vector delta = updated - beta.segment(zg.z_start, zg.rank);
      const double change = delta.lpNorm<Eigen::Infinity>();
      if (change > 0.0) {
        r.noalias() -= zblock * delta;
        beta.segment(zg.z_start, zg.rank) = updated;
      }
      max_change = std::max(max_change, change);
    }
    return max_change;
  };

  const auto objective = [&](double lambda) {
    double pen = 0.0;
    for (const detail::ZGroup& zg : sd.zgroups)
      pen += detail::penalty_value(beta.segment(zg.z_start, zg.rank).norm(),
                                   lambda * zg.mult, spec.family, spec.scad_a,
                                   spec.mcp_gamma);
    return r.squaredNorm() / (2.0 * n) + pen;
  };

  std::vector<int> all_groups(sd.zgroups.size());
  std::iota(all_groups.begin(), all_groups.end(), 0);

  SolverPath path;
  path.steps.reserve(grid.size());
  for (double lambda : grid) {
    int sweeps = 0;
    bool converged = false;
    while (sweeps < max_sweeps) {
      const double change = sweep(all_groups, lambda);
      ++sweeps;
      if (sweep_observer) sweep_observer(objective(lambda));
      const double thresh = tol * (1.0 + beta.lpNorm<Eigen::Infinity>());
      if (change < thresh) {
        converged = true;
        break;
      }
      // Refine over the current active set before re-scanning everything.
      std::vector<int> active;
      for (std::size_t k = 0; k < sd.zgroups.size(); ++k)
        if (beta.segment(sd.zgroups[k].z_start, sd.zgroups[k].rank).squaredNorm() > 0.0)
          active.push_back(static_cast<int>(k));
      while (sweeps < max_sweeps) {
        const double inner_change = sweep(active, lambda);
        ++sweeps;
        if (sweep_observer) sweep_observer(objective(lambda));
        if (inner_change < tol * (1.0 + beta.lpNorm<Eigen::Infinity>())) break;
      }
    }

    PathStep step;
    step.lambda = lambda;
    step.intercept = y_mean;
    step.beta = Vector::Zero(design.cols());
    for (const detail::ZGroup& zg : sd.zgroups) {
      const Vector bz = beta.segment(zg.z_start, zg.rank);
      if (bz.squaredNorm() == 0.0) continue;
      const Group& grp = design.groups[static_cast<std::size_t>(zg.group)];
      step.beta.segment(grp.start, grp.size) = zg.back * bz;
      step.active_groups.push_back(zg.group);
    }
    if (spec.standardize) step.intercept -= sd.col_mean.dot(step.beta);
    std::sort(step.active_groups.begin(), step.active_groups.end());
    step.converged = converged;
    step.iterations = sweeps;
    path.steps.push_back(std::move(step));
  }
  return path;
}

namespace detail {

inline std::vector<int> fold_assignment(int n, int folds, std::uint64_t seed) {
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (int i = n - 1; i > 0; --i)
    std::swap(order[static_cast<std::size_t>(i)],
              order[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(i) + 1))]);
  std::vector<int> fold(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) fold[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = k % folds;
  return fold;
}

}  // namespace detail

/// Active set at the lambda minimizing mean out-of-fold squared error.
/// The grid is fixed on the full data and shared across folds.
inline CandidateModel select_by_cv(const GroupedDesign& design, const Vector& response,
                                   PenaltySpec spec, int folds, std::uint64_t seed) {
  const int n = static_cast<int>(design.matrix.rows());
  if (folds < 2 || folds > n) throw DataError("folds must satisfy 2 <= folds <= n");
  if (spec.lambda_grid.empty())
    spec.lambda_grid = lambda_grid(design, response, spec.n_lambda);

  const std::vector<int> fold = detail::fold_assignment(n, folds, seed);
  std::vector<double> cv_sse(spec.lambda_grid.size(), 0.0);
  for (int f = 0; f < folds; ++f) {
    std::vector<int> train, test;
    for (int i = 0; i < n; ++i)
      (fold[static_cast<std::size_t>(i)] == f ? test : train).push_back(i);
    if (test.empty()) continue;
    const GroupedDesign dtrain = design.subset_rows(train);
    Vector ytrain(static_cast<Eigen::Index>(train.size()));
    for (std::size_t i = 0; i < train.size(); ++i) ytrain[static_cast<Eigen::Index>(i)] = response[train[i]];
    const SolverPath path = fit_path(dtrain, ytrain, spec);
    for (std::size_t l = 0; l < path.steps.size(); ++l) {
      const PathStep& s = path.steps[l];
      for (int i : test) {
        const double pred = s.intercept + design.matrix.row(i).dot(s.beta);
        const double err = response[i] - pred;
        cv_sse[l] += err * err;
      }
    }
  }

  std::size_t best = 0;
  for (std::size_t l = 1; l < cv_sse.size(); ++l)
    if (cv_sse[l] < cv_sse[best]) best = l;

  const SolverPath full = fit_path(design, response, spec);
  return make_candidate(design, response, full.steps[best].active_groups);
}

/// Active set at the path step whose OLS refit minimizes BIC. Steps too
/// dense to refit (columns >= n-1) are skipped.
inline CandidateModel select_by_bic(const GroupedDesign& design, const Vector& response,
                                    const PenaltySpec& spec) {
  const SolverPath path = fit_path(design, response, spec);
  const int n = static_cast<int>(design.matrix.rows());

  std::set<std::vector<int>> seen;
  bool have_best = false;
  CandidateModel best;
  for (const PathStep& s : path.steps) {
    if (!seen.insert(s.active_groups).second) continue;
    const std::vector<int> cols = design.columns_of_groups(s.active_groups);
    if (static_cast<int>(cols.size()) >= n - 1) continue;
    CandidateModel m = make_candidate(design, response, s.active_groups);
    if (!have_best || m.criterion.bic < best.criterion.bic) {
      best = std::move(m);
      have_best = true;
    }
  }
  if (!have_best) best = make_candidate(design, response, {});
  return best;
}

enum class TuneRule { CrossValidation, Bic };

/// Two-stage baseline: stage 1 tunes a group-penalized selector on the main
/// effects; stage 2 reruns the same selector on the selected mains plus all
/// their pairwise interactions.
struct TwoStageFit {
  std::vector<int> stage1_groups;    // indices into the mains design
  GroupedDesign stage2;              // selected mains + their interactions
  SolverPath stage2_path;
  std::vector<int> selected_groups;  // tuned selection, stage2 indices
};

inline TwoStageFit two_stage_select(const GroupedDesign& mains, const Vector& response,
                                    const PenaltySpec& spec, TuneRule rule, int folds,
                                    std::uint64_t seed) {
  TwoStageFit out;
  const CandidateModel stage1 =
      rule == TuneRule::CrossValidation
          ? select_by_cv(mains, response, spec, folds, seed)
          : select_by_bic(mains, response, spec);
  out.stage1_groups = stage1.group_set;

  out.stage2 = mains.subset_groups(out.stage1_groups);
  std::set<std::pair<int, int>> pairs;
  for (int a = 0; a < out.stage2.n_groups(); ++a)
    for (int b = a + 1; b < out.stage2.n_groups(); ++b) pairs.insert({a, b});
  out.stage2 = augment_interactions(out.stage2, pairs);

  if (out.stage2.n_groups() == 0) return out;
  PenaltySpec spec2 = spec;
  spec2.lambda_grid.clear();  // re-derive the grid on the augmented design
  out.stage2_path = fit_path(out.stage2, response, spec2);
  const CandidateModel picked =
      rule == TuneRule::CrossValidation
          ? select_by_cv(out.stage2, response, spec2, folds,
                         Rng::derive_seed(seed, 0x2517))
          : select_by_bic(out.stage2, response, spec2);
  out.selected_groups = picked.group_set;
  return out;
}

/// Model of a requested size from a solution path: the earliest step along
/// the path (largest lambda) whose active set has exactly `size` groups,
/// else the step with the closest size.
inline std::vector<int> path_model_of_size(const SolverPath& path, int size) {
  if (path.steps.empty()) return {};
  std::size_t best = 0;
  int best_gap = std::numeric_limits<int>::max();
  for (std::size_t l = 0; l < path.steps.size(); ++l) {
    const int gap = std::abs(static_cast<int>(path.steps[l].active_groups.size()) - size);
    if (gap < best_gap) {
      best_gap = gap;
      best = l;
      if (gap == 0) break;
    }
  }
  return path.steps[best].active_groups;
}

}  // namespace vibim
