#pragma once

#include <string>
#include <vector>

#include "vibim/evaluation.hpp"
#include "vibim/experiments.hpp"
#include "vibim/io.hpp"
#include "vibim/regression.hpp"
#include "vibim/solvers.hpp"
#include "vibim/vibim.hpp"

namespace vibim {

/// One coefficient table per nested model in the plausible window.
struct CoefficientTable {
  int model_size = 0;
  std::vector<CoefficientInference> terms;
};

inline std::vector<CoefficientTable> window_coefficient_tables(const VibimReport& report,
                                                               const Vector& response) {
  std::vector<CoefficientTable> out;
  for (const NestedModel& nm : report.nested_models) {
    if (nm.size_s < report.window_lo || nm.size_s > report.window_hi) continue;
    std::vector<int> groups = nm.groups;
    std::sort(groups.begin(), groups.end());
    const std::vector<int> cols = report.augmented.columns_of_groups(groups);
    CoefficientTable table;
    table.model_size = nm.size_s;
    table.terms = ols_inference(report.augmented, cols, response, nm.fit);
    out.push_back(std::move(table));
  }
  return out;
}

inline JsonValue importance_json(const GroupedDesign& design, const ImportanceVector& iv) {
  JsonValue arr = JsonValue::array();
  std::vector<int> order(iv.scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (iv.scores[static_cast<std::size_t>(a)] != iv.scores[static_cast<std::size_t>(b)])
      return iv.scores[static_cast<std::size_t>(a)] > iv.scores[static_cast<std::size_t>(b)];
    return a < b;
  });
  for (int g : order) {
    JsonValue row = JsonValue::object();
    row.set("group", JsonValue::integer(g));
    row.set("label", JsonValue::string(design.groups[static_cast<std::size_t>(g)].label));
    row.set("score", JsonValue::number(iv.scores[static_cast<std::size_t>(g)]));
    arr.push_back(std::move(row));
  }
  return arr;
}

inline TsvTable importance_tsv(const GroupedDesign& design, const ImportanceVector& iv) {
  TsvTable t;
  t.header = {"rank", "group", "label", "score"};
  std::vector<int> order(iv.scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (iv.scores[static_cast<std::size_t>(a)] != iv.scores[static_cast<std::size_t>(b)])
      return iv.scores[static_cast<std::size_t>(a)] > iv.scores[static_cast<std::size_t>(b)];
    return a < b;
  });
  int rank = 1;
  for (int g : order) {
    t.rows.push_back({std::to_string(rank++), std::to_string(g),
                      design.groups[static_cast<std::size_t>(g)].label,
                      format_double(iv.scores[static_cast<std::size_t>(g)])});
  }
  return t;
}

inline JsonValue vibim_report_json(const VibimReport& report, const Vector& response) {
  JsonValue root = JsonValue::object();
  root.set("kind", JsonValue::string("vibim_report"));
  root.set("n", JsonValue::integer(report.augmented.n_rows()));
  root.set("psi", JsonValue::number(report.stage2_importance.psi));
  root.set("high_dim_criteria", JsonValue::boolean(report.high_dim_criteria_used));

  // Main-effects view of stage 1: scores are indexed by the original groups.
  {
    JsonValue arr = JsonValue::array();
    for (std::size_t g = 0; g < report.stage1_importance.scores.size(); ++g) {
      JsonValue row = JsonValue::object();
      row.set("group", JsonValue::integer(static_cast<long long>(g)));
      row.set("label",
              JsonValue::string(report.augmented.groups[g].label));
      row.set("score", JsonValue::number(report.stage1_importance.scores[g]));
      arr.push_back(std::move(row));
    }
    root.set("stage1_importance", std::move(arr));
  }
  {
    JsonValue arr = JsonValue::array();
    for (int g : report.screened_set)
      arr.push_back(JsonValue::string(
          report.augmented.groups[static_cast<std::size_t>(g)].label));
    root.set("screened", std::move(arr));
  }
  root.set("stage2_importance", importance_json(report.augmented, report.stage2_importance));
  {
    JsonValue arr = JsonValue::array();
    for (int g : report.ranking)
      arr.push_back(JsonValue::string(
          report.augmented.groups[static_cast<std::size_t>(g)].label));
    root.set("ranking", std::move(arr));
  }
  {
    JsonValue arr = JsonValue::array();
    for (const NestedModel& nm : report.nested_models) {
      JsonValue row = JsonValue::object();
      row.set("size", JsonValue::integer(nm.size_s));
      JsonValue groups = JsonValue::array();
      for (int g : nm.groups)
        groups.push_back(JsonValue::string(
            report.augmented.groups[static_cast<std::size_t>(g)].label));
      row.set("groups", std::move(groups));
      row.set("rss", JsonValue::number(nm.fit.rss));
      row.set("bic", JsonValue::number(nm.criterion.bic));
      row.set("aic", JsonValue::number(nm.criterion.aic));
      row.set("bic_p", JsonValue::number(nm.criterion.bic_p));
      row.set("aic_p", JsonValue::number(nm.criterion.aic_p));
      row.set("in_window",
              JsonValue::boolean(nm.size_s >= report.window_lo && nm.size_s <= report.window_hi));
      arr.push_back(std::move(row));
    }
    root.set("nested_models", std::move(arr));
  }
  {
    JsonValue window = JsonValue::object();
    window.set("lo", JsonValue::integer(report.window_lo));
    window.set("hi", JsonValue::integer(report.window_hi));
    root.set("window", std::move(window));
  }
  {
    JsonValue arr = JsonValue::array();
    for (const CoefficientTable& table : window_coefficient_tables(report, response)) {
      JsonValue entry = JsonValue::object();
      entry.set("model_size", JsonValue::integer(table.model_size));
      JsonValue terms = JsonValue::array();
      for (const CoefficientInference& ci : table.terms) {
        JsonValue term = JsonValue::object();
        term.set("label", JsonValue::string(ci.label));
        term.set("estimate", JsonValue::number(ci.estimate));
        term.set("std_error", JsonValue::number(ci.std_error));
        term.set("t_value", JsonValue::number(ci.t_value));
        term.set("p_value", JsonValue::number(ci.p_value));
        terms.push_back(std::move(term));
      }
      entry.set("terms", std::move(terms));
      arr.push_back(std::move(entry));
    }
    root.set("coefficients", std::move(arr));
  }
  return root;
}

inline TsvTable nested_models_tsv(const VibimReport& report) {
  TsvTable t;
  t.header = {"size", "groups", "bic", "aic", "bic_p", "aic_p", "in_window"};
  for (const auto& row : nested_model_table(report)) {
    std::string labels;
    for (std::size_t k = 0; k < row.labels.size(); ++k) {
      if (k) labels += ",";
      labels += row.labels[k];
    }
    const NestedModel& nm = report.nested_models[static_cast<std::size_t>(row.size_s - 1)];
    t.rows.push_back({std::to_string(row.size_s), labels, format_double(row.bic),
                      format_double(row.aic), format_double(nm.criterion.bic_p),
                      format_double(nm.criterion.aic_p), row.in_window ? "1" : "0"});
  }
  return t;
}

inline TsvTable coefficients_tsv(const VibimReport& report, const Vector& response) {
  TsvTable t;
  t.header = {"model_size", "term", "estimate", "std_error", "t_value", "p_value"};
  for (const CoefficientTable& table : window_coefficient_tables(report, response)) {
    for (const CoefficientInference& ci : table.terms) {
      t.rows.push_back({std::to_string(table.model_size), ci.label,
                        format_double(ci.estimate), format_double(ci.std_error),
                        format_double(ci.t_value), format_double(ci.p_value)});
    }
  }
  return t;
}

inline JsonValue solver_path_json(const GroupedDesign& design, const SolverPath& path) {
  JsonValue root = JsonValue::object();
  root.set("kind", JsonValue::string("solver_path"));
  JsonValue steps = JsonValue::array();
  for (const PathStep& s : path.steps) {
    JsonValue row = JsonValue::object();
    row.set("lambda", JsonValue::number(s.lambda));
    row.set("intercept", JsonValue::number(s.intercept));
    row.set("iterations", JsonValue::integer(s.iterations));
    row.set("converged", JsonValue::boolean(s.converged));
    JsonValue actives = JsonValue::array();
    for (int g : s.active_groups)
      actives.push_back(JsonValue::string(design.groups[static_cast<std::size_t>(g)].label));
    row.set("active_groups", std::move(actives));
    JsonValue coefs = JsonValue::array();
    for (int g : s.active_groups) {
      const Group& grp = design.groups[static_cast<std::size_t>(g)];
      for (int k = 0; k < grp.size; ++k) {
        JsonValue c = JsonValue::object();
        c.set("column", JsonValue::string(design.column_labels[static_cast<std::size_t>(grp.start + k)]));
        c.set("value", JsonValue::number(s.beta(grp.start + k)));
        coefs.push_back(std::move(c));
      }
    }
    row.set("coefficients", std::move(coefs));
    steps.push_back(std::move(row));
  }
  root.set("steps", std::move(steps));
  return root;
}

inline TsvTable solver_path_tsv(const GroupedDesign& design, const SolverPath& path) {
  TsvTable t;
  t.header = {"step", "lambda", "n_active", "active_groups", "iterations", "converged"};
  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    const PathStep& s = path.steps[i];
    std::string labels;
    for (std::size_t k = 0; k < s.active_groups.size(); ++k) {
      if (k) labels += ",";
      labels += design.groups[static_cast<std::size_t>(s.active_groups[k])].label;
    }
    t.rows.push_back({std::to_string(i), format_double(s.lambda),
                      std::to_string(s.active_groups.size()), labels,
                      std::to_string(s.iterations), s.converged ? "1" : "0"});
  }
  return t;
}

inline JsonValue simulation_summary_json(const SimulationSummary& summary) {
  JsonValue root = JsonValue::object();
  root.set("kind", JsonValue::string("simulation_summary"));
  root.set("scenario", JsonValue::string(scenario_name(summary.scenario)));
  root.set("n", JsonValue::integer(summary.n));
  root.set("p", JsonValue::integer(summary.p));
  root.set("reps", JsonValue::integer(summary.reps));
  JsonValue methods = JsonValue::array();
  for (std::size_t m = 0; m < summary.methods.size(); ++m) {
    JsonValue entry = JsonValue::object();
    entry.set("method", JsonValue::string(method_name(summary.methods[m])));
    JsonValue cells = JsonValue::array();
    for (std::size_t s = 0; s < summary.sizes.size(); ++s) {
      JsonValue cell = JsonValue::object();
      cell.set("size", JsonValue::integer(summary.sizes[s]));
      cell.set("mean_f", JsonValue::number(summary.cells[m][s].mean_f));
      cell.set("se_f", JsonValue::number(summary.cells[m][s].se_f));
      cell.set("mean_g", JsonValue::number(summary.cells[m][s].mean_g));
      cell.set("se_g", JsonValue::number(summary.cells[m][s].se_g));
      cells.push_back(std::move(cell));
    }
    entry.set("cells", std::move(cells));
    methods.push_back(std::move(entry));
  }
  root.set("methods", std::move(methods));
  return root;
}

/// Benchmark summary table: one row per method, a mean(se) column pair per
/// model size. The standard-error cell is blank when reps == 1.
inline TsvTable simulation_summary_tsv(const SimulationSummary& summary) {
  TsvTable t;
  t.header = {"method"};
  for (int s : summary.sizes) {
    t.header.push_back("F@" + std::to_string(s));
    t.header.push_back("G@" + std::to_string(s));
  }
  for (std::size_t m = 0; m < summary.methods.size(); ++m) {
    std::vector<std::string> row = {method_name(summary.methods[m])};
    for (std::size_t s = 0; s < summary.sizes.size(); ++s) {
      const FgCell& c = summary.cells[m][s];
      if (summary.reps > 1) {
        row.push_back(format_double(c.mean_f, 6) + " (" + format_double(c.se_f, 3) + ")");
        row.push_back(format_double(c.mean_g, 6) + " (" + format_double(c.se_g, 3) + ")");
      } else {
        row.push_back(format_double(c.mean_f, 6));
        row.push_back(format_double(c.mean_g, 6));
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline JsonValue stability_table_json(const StabilityTable& table) {
  JsonValue root = JsonValue::object();
  root.set("kind", JsonValue::string("stability_table"));
  JsonValue rows = JsonValue::array();
  for (const StabilityRow& r : table.rows) {
    JsonValue row = JsonValue::object();
    row.set("selector", JsonValue::string(r.selector));
    JsonValue pv = JsonValue::array();
    for (std::size_t i = 0; i < table.taus.size(); ++i) {
      JsonValue cell = JsonValue::object();
      cell.set("tau", JsonValue::number(table.taus[i]));
      cell.set("pivs", JsonValue::number(r.pivs_scores[i].pivs));
      cell.set("failures", JsonValue::integer(r.pivs_scores[i].failures));
      pv.push_back(std::move(cell));
    }
    row.set("pivs", std::move(pv));
    JsonValue sv = JsonValue::array();
    for (std::size_t i = 0; i < table.fractions.size(); ++i) {
      JsonValue cell = JsonValue::object();
      cell.set("fraction", JsonValue::number(table.fractions[i]));
      cell.set("sivs", JsonValue::number(r.sivs_scores[i].sivs));
      cell.set("failures", JsonValue::integer(r.sivs_scores[i].failures));
      sv.push_back(std::move(cell));
    }
    row.set("sivs", std::move(sv));
    rows.push_back(std::move(row));
  }
  root.set("rows", std::move(rows));
  return root;
}

inline TsvTable stability_table_tsv(const StabilityTable& table) {
  TsvTable t;
  t.header = {"selector"};
  for (double tau : table.taus) t.header.push_back("pivs_tau=" + format_double(tau, 6));
  for (double f : table.fractions) t.header.push_back("sivs_frac=" + format_double(f, 6));
  for (const StabilityRow& r : table.rows) {
    std::vector<std::string> row = {r.selector};
    for (const StabilityScore& s : r.pivs_scores) row.push_back(format_double(s.pivs, 6));
    for (const StabilityScore& s : r.sivs_scores) row.push_back(format_double(s.sivs, 6));
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline JsonValue guided_sim_json(const GuidedSimResult& result) {
  JsonValue root = JsonValue::object();
  root.set("kind", JsonValue::string("guided_sim"));
  root.set("reps", JsonValue::integer(result.reps));
  root.set("joint_inclusion_and_significance", JsonValue::integer(result.joint_count));
  root.set("joint_inclusion", JsonValue::integer(result.included_count));
  root.set("sigma_hat", JsonValue::number(result.sigma_hat));
  return root;
}

}  // namespace vibim
