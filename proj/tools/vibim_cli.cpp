// Command-line driver: variable-importance interaction modeling, benchmark
// simulations, stability measurement, and guided simulation, all seeded and
// byte-reproducible.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vibim/encoding.hpp"
#include "vibim/evaluation.hpp"
#include "vibim/experiments.hpp"
#include "vibim/io.hpp"
#include "vibim/report.hpp"
#include "vibim/simgen.hpp"
#include "vibim/solvers.hpp"
#include "vibim/vibim.hpp"

namespace fs = std::filesystem;
using namespace vibim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

struct CommonOptions {
  std::string data_path;
  std::string schema_path;
  std::string config_path;
  std::string out_dir = ".";
  std::string format = "both";
  std::uint64_t seed = 0;
  int threads = 0;  // 0: all available cores
};

VibimConfig load_config(const std::string& path) {
  VibimConfig cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw DataError("config file '" + path + "' is not valid JSON: " + std::string(e.what()));
  }
  cfg.psi = j.value("psi", cfg.psi);
  cfg.threshold_c = j.value("threshold_c", cfg.threshold_c);
  cfg.max_rank_K = j.value("max_rank_K", cfg.max_rank_K);
  cfg.high_dim_criteria = j.value("high_dim_criteria", cfg.high_dim_criteria);
  cfg.n_lambda = j.value("n_lambda", cfg.n_lambda);
  cfg.validate();
  return cfg;
}

LoadedDataset load(const CommonOptions& opt) {
  const DataSchemaFile schema = load_schema(opt.schema_path);
  return load_dataset(opt.data_path, schema);
}

void emit(const CommonOptions& opt, const std::string& stem, const JsonValue* json_doc,
          const TsvTable* tsv_doc) {
  fs::create_directories(opt.out_dir);
  if (json_doc && (opt.format == "json" || opt.format == "both"))
    write_text_file((fs::path(opt.out_dir) / (stem + ".json")).string(), json_doc->dump());
  if (tsv_doc && (opt.format == "tsv" || opt.format == "both"))
    write_text_file((fs::path(opt.out_dir) / (stem + ".tsv")).string(), tsv_doc->dump());
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    if (next > pos) out.push_back(text.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

int run_vibim_command(const CommonOptions& opt) {
  const LoadedDataset data = load(opt);
  const GroupedDesign design = encode(data.schema, data.raw);
  VibimConfig cfg = load_config(opt.config_path);
  cfg.rng_seed = opt.seed;
  const VibimReport report = run_vibim(design, data.response, cfg);

  const JsonValue root = vibim_report_json(report, data.response);
  emit(opt, "report", &root, nullptr);

  // Stage-1 scores live on the main-effect groups of the augmented design.
  ImportanceVector stage1 = report.stage1_importance;
  stage1.scores.resize(static_cast<std::size_t>(design.n_groups()));
  const TsvTable s1 = importance_tsv(design, stage1);
  const JsonValue s1j = importance_json(design, stage1);
  emit(opt, "stage1_importance", &s1j, &s1);

  const TsvTable s2 = importance_tsv(report.augmented, report.stage2_importance);
  const JsonValue s2j = importance_json(report.augmented, report.stage2_importance);
  emit(opt, "stage2_importance", &s2j, &s2);

  const TsvTable nested = nested_models_tsv(report);
  emit(opt, "nested_models", nullptr, &nested);
  const TsvTable coefs = coefficients_tsv(report, data.response);
  emit(opt, "coefficients", nullptr, &coefs);
  std::cout << "wrote report for " << data.raw.n_rows << " rows, "
            << design.n_groups() << " predictors, window [" << report.window_lo
            << ", " << report.window_hi << "]\n";
  return kExitOk;
}

int run_simulate_command(const CommonOptions& opt, const std::string& scenario_text,
                         int n, int p, int reps, const std::string& methods_text,
                         const std::string& sizes_text) {
  Scenario scenario;
  if (!parse_scenario(scenario_text, scenario))
    throw CLI::ValidationError("--scenario", "unknown scenario '" + scenario_text + "'");
  std::vector<Method> methods;
  for (const std::string& m : split_list(methods_text)) {
    Method method;
    if (!parse_method(m, method))
      throw CLI::ValidationError("--methods", "unknown method '" + m + "'");
    methods.push_back(method);
  }
  std::vector<int> sizes;
  for (const std::string& s : split_list(sizes_text)) sizes.push_back(std::stoi(s));

  const VibimConfig cfg = load_config(opt.config_path);
  const SimulationSummary summary = run_simulation_experiment(
      scenario, n, p, reps, methods, sizes, opt.seed, opt.threads, cfg);
  const JsonValue j = simulation_summary_json(summary);
  const TsvTable t = simulation_summary_tsv(summary);
  emit(opt, "fg_summary", &j, &t);
  std::cout << t.dump();
  return kExitOk;
}

int run_stability_command(const CommonOptions& opt, const std::string& selectors_text,
                          const std::string& tau_text, const std::string& fraction_text,
                          int reps) {
  const LoadedDataset data = load(opt);
  const GroupedDesign design = encode(data.schema, data.raw);
  const VibimConfig cfg = load_config(opt.config_path);

  std::vector<double> taus, fractions;
  for (const std::string& t : split_list(tau_text)) taus.push_back(std::stod(t));
  for (const std::string& f : split_list(fraction_text)) fractions.push_back(std::stod(f));
  const std::vector<std::string> selectors = split_list(selectors_text);
  if (selectors.empty())
    throw CLI::ValidationError("--selectors", "need at least one selector");

  const StabilityTable table = run_stability_experiment(
      design, data.response, selectors, taus, fractions, reps, opt.seed, opt.threads, cfg);
  const JsonValue j = stability_table_json(table);
  const TsvTable t = stability_table_tsv(table);
  emit(opt, "stability", &j, &t);
  std::cout << t.dump();
  return kExitOk;
}

int run_guided_sim_command(const CommonOptions& opt, const std::string& model_text,
                           const std::string& designated_text, int top_s, int reps) {
  const LoadedDataset data = load(opt);
  const GroupedDesign mains = encode(data.schema, data.raw);
  const VibimConfig cfg = load_config(opt.config_path);

  // The generator model may reference interactions; augment as needed.
  const std::vector<std::string> model_terms = split_list(model_text);
  std::set<std::pair<int, int>> pairs;
  const auto predictor_index = [&](const std::string& name) {
    for (std::size_t i = 0; i < data.schema.size(); ++i)
      if (data.schema.at(i).name == name) return static_cast<int>(i);
    throw DataError("unknown predictor '" + name + "'");
  };
  for (const std::string& term : model_terms) {
    const std::size_t star = term.find('*');
    if (star != std::string::npos) {
      const int a = predictor_index(term.substr(0, star));
      const int b = predictor_index(term.substr(star + 1));
      pairs.insert({std::min(a, b), std::max(a, b)});
    }
  }
  const GroupedDesign gen_design = augment_interactions(mains, pairs);

  std::vector<int> model_groups;
  for (const std::string& term : model_terms)
    model_groups.push_back(resolve_group(gen_design, data.schema, term));

  std::vector<long long> designated;
  for (const std::string& term : split_list(designated_text)) {
    const int g = resolve_group(gen_design, data.schema, term);
    const std::vector<long long> one = canonical_selection(gen_design, {g});
    designated.push_back(one.front());
  }

  const GuidedSimResult result =
      run_guided_sim(mains, gen_design, model_groups, designated, top_s, reps, opt.seed,
                     opt.threads, data.response, cfg);
  const JsonValue j = guided_sim_json(result);
  emit(opt, "guided_sim", &j, nullptr);
  std::cout << "joint inclusion+significance: " << result.joint_count << "/" << result.reps
            << " (inclusion only: " << result.included_count << ")\n";
  return kExitOk;
}

int run_fit_path_command(const CommonOptions& opt, const std::string& family_text,
                         int n_lambda) {
  const LoadedDataset data = load(opt);
  const GroupedDesign design = encode(data.schema, data.raw);
  PenaltySpec spec;
  if (family_text == "glasso") spec.family = PenaltyFamily::GroupLasso;
  else if (family_text == "gscad") spec.family = PenaltyFamily::GroupScad;
  else if (family_text == "gmcp") spec.family = PenaltyFamily::GroupMcp;
  else throw CLI::ValidationError("--family", "unknown family '" + family_text + "'");
  spec.n_lambda = n_lambda;

  const SolverPath path = fit_path(design, data.response, spec);
  const JsonValue j = solver_path_json(design, path);
  const TsvTable t = solver_path_tsv(design, path);
  emit(opt, "path", &j, &t);
  std::cout << "path with " << path.steps.size() << " steps written\n";
  return kExitOk;
}

int run_soil_command(const CommonOptions& opt, double psi) {
  const LoadedDataset data = load(opt);
  const GroupedDesign design = encode(data.schema, data.raw);
  VibimConfig cfg = load_config(opt.config_path);
  cfg.psi = psi;
  const auto specs = cfg.penalty_specs();
  const ModelSet models =
      bicp_weights(assemble_candidates(design, data.response, specs, psi), psi);
  const ImportanceVector iv = soil(design, models);
  const JsonValue j = importance_json(design, iv);
  const TsvTable t = importance_tsv(design, iv);
  emit(opt, "importance", &j, &t);
  std::cout << t.dump();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variable-importance based interaction modeling for linear models"};
  app.require_subcommand(1);

  CommonOptions opt;

  const auto add_common = [&](CLI::App* sub, bool needs_data, bool needs_seed) {
    if (needs_data) {
      sub->add_option("--data", opt.data_path, "CSV dataset")->required();
      sub->add_option("--schema", opt.schema_path, "dataset schema (JSON)")->required();
    }
    sub->add_option("--config", opt.config_path, "procedure configuration (JSON)");
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"json", "tsv", "both"}));
    auto* seed = sub->add_option("--seed", opt.seed, "random seed");
    if (needs_seed) seed->required();
    sub->add_option("--threads", opt.threads, "worker threads (0 = all cores)");
  };

  auto* cmd_vibim = app.add_subcommand("vibim", "run the interaction-modeling procedure");
  add_common(cmd_vibim, true, true);

  auto* cmd_simulate = app.add_subcommand("simulate", "benchmark scenarios, F/G summary");
  std::string scenario = "ex1-i";
  int sim_n = 200, sim_p = 1000, sim_reps = 100;
  std::string methods = "vibim,glasso,gscad,gmcp";
  std::string sizes = "5,6,7,8,9,10";
  cmd_simulate->add_option("--scenario", scenario, "scenario name (ex1-i .. ex2-iv)")
      ->required();
  cmd_simulate->add_option("--n", sim_n, "observations")->check(CLI::PositiveNumber);
  cmd_simulate->add_option("--p", sim_p, "predictors")->check(CLI::PositiveNumber);
  cmd_simulate->add_option("--reps", sim_reps, "replications")->check(CLI::PositiveNumber);
  cmd_simulate->add_option("--methods", methods, "comma list: vibim,glasso,gscad,gmcp");
  cmd_simulate->add_option("--sizes", sizes, "comma list of model sizes");
  add_common(cmd_simulate, false, true);

  auto* cmd_stability = app.add_subcommand("stability", "PIVS/SIVS instability table");
  std::string selectors = "vibim,glasso,gscad,gmcp";
  std::string taus = "0.1,0.2";
  std::string fractions = "0.05,0.1";
  int stab_reps = 100;
  cmd_stability->add_option("--selectors", selectors,
                            "comma list (vibim, vibim:s=K, glasso, gscad, gmcp, const:i+j+..)");
  cmd_stability->add_option("--tau", taus, "comma list of perturbation sizes");
  cmd_stability->add_option("--fraction", fractions, "comma list of removal fractions");
  cmd_stability->add_option("--reps", stab_reps, "replications")->check(CLI::PositiveNumber);
  add_common(cmd_stability, true, true);

  auto* cmd_guided = app.add_subcommand("guided-sim", "guided simulation counts");
  std::string model_terms, designated_terms;
  int top_s = 8, guided_reps = 1000;
  cmd_guided->add_option("--model", model_terms, "generator model terms (comma list)")
      ->required();
  cmd_guided->add_option("--designated", designated_terms, "designated terms (comma list)")
      ->required();
  cmd_guided->add_option("--top-s", top_s, "ranking prefix checked for inclusion")
      ->check(CLI::PositiveNumber);
  cmd_guided->add_option("--reps", guided_reps, "replications")->check(CLI::PositiveNumber);
  add_common(cmd_guided, true, true);

  auto* cmd_path = app.add_subcommand("fit-path", "dump one solver path");
  std::string family = "glasso";
  int n_lambda = 100;
  cmd_path->add_option("--family", family, "glasso | gscad | gmcp");
  cmd_path->add_option("--n-lambda", n_lambda, "grid size")->check(CLI::PositiveNumber);
  add_common(cmd_path, true, false);

  auto* cmd_soil = app.add_subcommand("soil", "importance scores only");
  double psi = 1.0;
  cmd_soil->add_option("--psi", psi, "weighting constant")->check(CLI::PositiveNumber);
  add_common(cmd_soil, true, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (cmd_vibim->parsed()) return run_vibim_command(opt);
    if (cmd_simulate->parsed())
      return run_simulate_command(opt, scenario, sim_n, sim_p, sim_reps, methods, sizes);
    if (cmd_stability->parsed())
      return run_stability_command(opt, selectors, taus, fractions, stab_reps);
    if (cmd_guided->parsed())
      return run_guided_sim_command(opt, model_terms, designated_terms, top_s, guided_reps);
    if (cmd_path->parsed()) return run_fit_path_command(opt, family, n_lambda);
    if (cmd_soil->parsed()) return run_soil_command(opt, psi);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
