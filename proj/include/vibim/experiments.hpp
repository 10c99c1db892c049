#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vibim/encoding.hpp"
#include "vibim/evaluation.hpp"
#include "vibim/importance.hpp"
#include "vibim/parallel.hpp"
#include "vibim/simgen.hpp"
#include "vibim/solvers.hpp"
#include "vibim/vibim.hpp"

namespace vibim {

enum class Method { Vibim, TwoStageGroupLasso, TwoStageGroupScad, TwoStageGroupMcp };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::Vibim: return "vibim";
    case Method::TwoStageGroupLasso: return "glasso";
    case Method::TwoStageGroupScad: return "gscad";
    case Method::TwoStageGroupMcp: return "gmcp";
  }
  return "?";
}

inline bool parse_method(const std::string& text, Method& out) {
  for (Method m : {Method::Vibim, Method::TwoStageGroupLasso, Method::TwoStageGroupScad,
                   Method::TwoStageGroupMcp}) {
    if (text == method_name(m)) {
      out = m;
      return true;
    }
  }
  return false;
}

inline PenaltySpec penalty_for(Method m, int n_lambda = 100) {
  PenaltySpec spec;
  spec.n_lambda = n_lambda;
  switch (m) {
    case Method::TwoStageGroupLasso: spec.family = PenaltyFamily::GroupLasso; break;
    case Method::TwoStageGroupScad: spec.family = PenaltyFamily::GroupScad; break;
    case Method::TwoStageGroupMcp: spec.family = PenaltyFamily::GroupMcp; break;
    case Method::Vibim: break;
  }
  return spec;
}

struct FgCell {
  double mean_f = 0.0;
  double se_f = 0.0;
  double mean_g = 0.0;
  double se_g = 0.0;
};

struct SimulationSummary {
  Scenario scenario = Scenario::Ex1_I;
  int n = 0;
  int p = 0;
  int reps = 0;
  std::vector<int> sizes;
  std::vector<Method> methods;
  std::vector<std::vector<FgCell>> cells;  // [method][size]
};

namespace detail {

inline std::pair<double, double> mean_se(const std::vector<double>& xs) {
  const int n = static_cast<int>(xs.size());
  if (n == 0) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  if (n < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1) / n)};
}

}  // namespace detail

/// Repeats the scenario `reps` times and scores interaction selection at
/// each requested model size: nested (ranking-prefix) models for the
/// importance-based method, path models of matching size for the two-stage
/// baselines, which tune their first stage by 10-fold cross-validation.
inline SimulationSummary run_simulation_experiment(
    Scenario scenario, int n, int p, int reps, const std::vector<Method>& methods,
    const std::vector<int>& sizes, std::uint64_t seed, int threads,
    const VibimConfig& config = {}) {
  if (reps < 1) throw DataError("need at least one replication");
  if (sizes.empty()) throw DataError("need at least one model size");

  SimulationSummary out;
  out.scenario = scenario;
  out.n = n;
  out.p = p;
  out.reps = reps;
  out.sizes = sizes;
  out.methods = methods;

  // f[method][size][rep], g likewise
  std::vector<std::vector<std::vector<double>>> f(
      methods.size(), std::vector<std::vector<double>>(
                          sizes.size(), std::vector<double>(static_cast<std::size_t>(reps))));
  auto g = f;

  parallel_for(reps, threads, [&](int rep) {
    SimDesignSpec spec;
    spec.n = n;
    spec.p = p;
    spec.scenario = scenario;
    spec.seed = Rng::derive_seed(seed, static_cast<std::uint64_t>(rep));
    const SimDataset data = generate(spec);
    const GroupedDesign mains = encode(data.schema, data.raw);
    const PairSet& truth = data.truth.true_interaction_pairs;

    for (std::size_t m = 0; m < methods.size(); ++m) {
      if (methods[m] == Method::Vibim) {
        VibimConfig cfg = config;
        cfg.rng_seed = spec.seed;
        const VibimReport report = run_vibim(mains, data.response, cfg);
        for (std::size_t s = 0; s < sizes.size(); ++s) {
          const PairSet selected =
              report.augmented.predictor_pairs(report.top_groups(sizes[s]));
          const InteractionScore score = fg_measure(selected, truth);
          f[m][s][static_cast<std::size_t>(rep)] = score.f;
          g[m][s][static_cast<std::size_t>(rep)] = score.g;
        }
      } else {
        const TwoStageFit ts = two_stage_select(
            mains, data.response, penalty_for(methods[m], config.n_lambda),
            TuneRule::CrossValidation, 10, Rng::derive_seed(spec.seed, 77 + m));
        for (std::size_t s = 0; s < sizes.size(); ++s) {
          const std::vector<int> groups = path_model_of_size(ts.stage2_path, sizes[s]);
          const PairSet selected = ts.stage2.predictor_pairs(groups);
          const InteractionScore score = fg_measure(selected, truth);
          f[m][s][static_cast<std::size_t>(rep)] = score.f;
          g[m][s][static_cast<std::size_t>(rep)] = score.g;
        }
      }
    }
  });

  out.cells.resize(methods.size());
  for (std::size_t m = 0; m < methods.size(); ++m) {
    out.cells[m].resize(sizes.size());
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      FgCell cell;
      std::tie(cell.mean_f, cell.se_f) = detail::mean_se(f[m][s]);
      std::tie(cell.mean_g, cell.se_g) = detail::mean_se(g[m][s]);
      out.cells[m][s] = cell;
    }
  }
  return out;
}

/// Builds a Selector from its textual spec:
///   vibim:s=<k>   top-k variables of the importance ranking
///   vibim         variables of the BIC-minimizing nested model
///   glasso | gscad | gmcp   two-stage CV-tuned selection
///   const:<i+j+..>  fixed main-effect ids (testing aid)
inline Selector make_selector(const std::string& text, const VibimConfig& config = {}) {
  if (text.rfind("const:", 0) == 0) {
    std::vector<long long> fixed;
    std::string rest = text.substr(6);
    std::size_t pos = 0;
    while (pos < rest.size()) {
      std::size_t next = rest.find('+', pos);
      if (next == std::string::npos) next = rest.size();
      fixed.push_back(std::stoll(rest.substr(pos, next - pos)));
      pos = next + 1;
    }
    std::sort(fixed.begin(), fixed.end());
    return [fixed](const GroupedDesign&, const Vector&, std::uint64_t) { return fixed; };
  }
  if (text == "vibim" || text.rfind("vibim:s=", 0) == 0) {
    int top_s = -1;  // -1: use the BIC window edge
    if (text.rfind("vibim:s=", 0) == 0) top_s = std::stoi(text.substr(8));
    return [config, top_s](const GroupedDesign& design, const Vector& y, std::uint64_t seed) {
      VibimConfig cfg = config;
      cfg.rng_seed = seed;
      const VibimReport report = run_vibim(design, y, cfg);
      const int s = top_s > 0 ? top_s : report.window_lo;
      return canonical_selection(report.augmented, report.top_groups(s));
    };
  }
  Method m;
  if (parse_method(text, m) && m != Method::Vibim) {
    return [m, config](const GroupedDesign& design, const Vector& y, std::uint64_t seed) {
      const TwoStageFit ts = two_stage_select(design, y, penalty_for(m, config.n_lambda),
                                              TuneRule::CrossValidation, 10, seed);
      return canonical_selection(ts.stage2, ts.selected_groups);
    };
  }
  throw DataError("unknown selector spec '" + text + "'");
}

struct StabilityRow {
  std::string selector;
  std::vector<StabilityScore> pivs_scores;  // one per tau
  std::vector<StabilityScore> sivs_scores;  // one per removal fraction
};

struct StabilityTable {
  std::vector<double> taus;
  std::vector<double> fractions;
  std::vector<StabilityRow> rows;
};

inline StabilityTable run_stability_experiment(
    const GroupedDesign& design, const Vector& response,
    const std::vector<std::string>& selector_specs, const std::vector<double>& taus,
    const std::vector<double>& fractions, int reps, std::uint64_t seed, int threads,
    const VibimConfig& config = {}) {
  if (reps < 1) throw DataError("need at least one replication");
  StabilityTable table;
  table.taus = taus;
  table.fractions = fractions;
  table.rows.resize(selector_specs.size());

  struct Task {
    std::size_t row;
    bool is_pivs;
    std::size_t param_index;
  };
  std::vector<Task> tasks;
  for (std::size_t r = 0; r < selector_specs.size(); ++r) {
    table.rows[r].selector = selector_specs[r];
    table.rows[r].pivs_scores.resize(taus.size());
    table.rows[r].sivs_scores.resize(fractions.size());
    for (std::size_t t = 0; t < taus.size(); ++t) tasks.push_back({r, true, t});
    for (std::size_t u = 0; u < fractions.size(); ++u) tasks.push_back({r, false, u});
  }

  parallel_for(static_cast<int>(tasks.size()), threads, [&](int idx) {
    const Task& task = tasks[static_cast<std::size_t>(idx)];
    const Selector selector = make_selector(selector_specs[task.row], config);
    const std::uint64_t task_seed = Rng::derive_seed(seed, task.row);
    if (task.is_pivs) {
      table.rows[task.row].pivs_scores[task.param_index] =
          pivs(selector, design, response, taus[task.param_index], reps, task_seed);
    } else {
      table.rows[task.row].sivs_scores[task.param_index] =
          sivs(selector, design, response, fractions[task.param_index], reps, task_seed);
    }
  });
  return table;
}

struct GuidedSimResult {
  int reps = 0;
  int joint_count = 0;     // designated variables all included and significant
  int included_count = 0;  // designated variables all included (any p-value)
  double sigma_hat = 0.0;
};

/// Guided simulation: resamples the response from a fitted linear model
/// (given as groups of `gen_design`) plus Gaussian noise at its estimated
/// residual scale, reruns the interaction-modeling procedure on the main
/// effects, and counts replications where every designated variable is in
/// the top-s ranking with a coefficient significant at `alpha`.
inline GuidedSimResult run_guided_sim(const GroupedDesign& mains,
                                      const GroupedDesign& gen_design,
                                      const std::vector<int>& model_groups,
                                      const std::vector<long long>& designated, int top_s,
                                      int reps, std::uint64_t seed, int threads,
                                      const Vector& response,
                                      const VibimConfig& config = {}, double alpha = 0.05) {
  if (reps < 1) throw DataError("need at least one replication");
  if (top_s < 1) throw DataError("top_s must be positive");

  const std::vector<int> cols = gen_design.columns_of_groups(model_groups);
  const OlsFit fit = fit_ols(gen_design, cols, response);
  const double sigma_hat =
      fit.degenerate ? 0.0 : std::sqrt(std::max(0.0, fit.sigma2_hat));
  Vector mu = Vector::Constant(gen_design.matrix.rows(), fit.intercept);
  for (const auto& [c, b] : fit.coefficients) mu += b * gen_design.matrix.col(c);

  std::vector<int> joint(static_cast<std::size_t>(reps), 0);
  std::vector<int> included(static_cast<std::size_t>(reps), 0);
  parallel_for(reps, threads, [&](int rep) {
    Rng rng(Rng::derive_seed(seed, static_cast<std::uint64_t>(rep)));
    Vector y = mu;
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += sigma_hat * rng.normal();

    VibimConfig cfg = config;
    cfg.rng_seed = Rng::derive_seed(seed, 50000 + static_cast<std::uint64_t>(rep));
    const VibimReport report = run_vibim(mains, y, cfg);
    const std::vector<int> top = report.top_groups(top_s);
    const std::vector<long long> ids = canonical_selection(report.augmented, top);

    bool all_in = true;
    for (long long d : designated)
      all_in = all_in && std::binary_search(ids.begin(), ids.end(), d);
    if (!all_in) return;
    included[static_cast<std::size_t>(rep)] = 1;

    std::vector<int> sorted = top;
    std::sort(sorted.begin(), sorted.end());
    const std::vector<int> top_cols = report.augmented.columns_of_groups(sorted);
    const OlsFit top_fit = fit_ols(report.augmented, top_cols, y);
    const auto inference = ols_inference(report.augmented, top_cols, y, top_fit);

    bool all_sig = true;
    for (long long d : designated) {
      // Locate the designated variable's group, then its best column p-value.
      double best_p = std::numeric_limits<double>::infinity();
      for (int g : top) {
        const std::vector<long long> one =
            canonical_selection(report.augmented, std::vector<int>{g});
        if (one.size() == 1 && one[0] == d) {
          for (int c : report.augmented.columns_of(g))
            for (const auto& ci : inference)
              if (ci.column == c && std::isfinite(ci.p_value))
                best_p = std::min(best_p, ci.p_value);
        }
      }
      all_sig = all_sig && best_p < alpha;
    }
    if (all_sig) joint[static_cast<std::size_t>(rep)] = 1;
  });

  GuidedSimResult out;
  out.reps = reps;
  out.sigma_hat = sigma_hat;
  for (int v : joint) out.joint_count += v;
  for (int v : included) out.included_count += v;
  return out;
}

/// Resolves "Name" or "NameA*NameB" to a group of the given design.
inline int resolve_group(const GroupedDesign& design, const PredictorSchema& schema,
                         const std::string& text) {
  const auto predictor_index = [&](const std::string& name) {
    for (std::size_t i = 0; i < schema.size(); ++i)
      if (schema.at(i).name == name) return static_cast<int>(i);
    throw DataError("unknown predictor '" + name + "'");
  };
  const std::size_t star = text.find('*');
  if (star == std::string::npos) {
    const int pred = predictor_index(text);
    for (int g = 0; g < design.n_groups(); ++g) {
      const GroupSource& s = design.groups[static_cast<std::size_t>(g)].source;
      if (s.kind == GroupKind::Main && s.i == pred) return g;
    }
    throw DataError("predictor '" + text + "' has no group in this design");
  }
  const int a = predictor_index(text.substr(0, star));
  const int b = predictor_index(text.substr(star + 1));
  for (int g = 0; g < design.n_groups(); ++g) {
    const GroupSource& s = design.groups[static_cast<std::size_t>(g)].source;
    if (s.kind != GroupKind::Interaction) continue;
    const int i = design.groups[static_cast<std::size_t>(s.i)].source.i;
    const int j = design.groups[static_cast<std::size_t>(s.j)].source.i;
    if ((i == a && j == b) || (i == b && j == a)) return g;
  }
  throw DataError("interaction '" + text + "' has no group in this design");
}

}  // namespace vibim
