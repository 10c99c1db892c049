#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vibim/common.hpp"
#include "vibim/rng.hpp"
#include "vibim/schema.hpp"

namespace vibim {

/// Benchmark response mechanisms: Ex1 scenarios obey strong heredity (both
/// parents of every interaction are active mains), Ex2 scenarios break it.
enum class Scenario {
  Ex1_I, Ex1_II, Ex1_III, Ex1_IV, Ex1_V, Ex1_VI,
  Ex2_I, Ex2_II, Ex2_III, Ex2_IV,
};

inline const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::Ex1_I: return "ex1-i";
    case Scenario::Ex1_II: return "ex1-ii";
    case Scenario::Ex1_III: return "ex1-iii";
    case Scenario::Ex1_IV: return "ex1-iv";
    case Scenario::Ex1_V: return "ex1-v";
    case Scenario::Ex1_VI: return "ex1-vi";
    case Scenario::Ex2_I: return "ex2-i";
    case Scenario::Ex2_II: return "ex2-ii";
    case Scenario::Ex2_III: return "ex2-iii";
    case Scenario::Ex2_IV: return "ex2-iv";
  }
  return "?";
}

inline bool parse_scenario(const std::string& text, Scenario& out) {
  for (Scenario s : {Scenario::Ex1_I, Scenario::Ex1_II, Scenario::Ex1_III,
                     Scenario::Ex1_IV, Scenario::Ex1_V, Scenario::Ex1_VI,
                     Scenario::Ex2_I, Scenario::Ex2_II, Scenario::Ex2_III,
                     Scenario::Ex2_IV}) {
    if (text == scenario_name(s)) {
      out = s;
      return true;
    }
  }
  return false;
}

/// Simulated design request: latent AR(1) Gaussians, the first six cut into
/// categoricals with level counts (2,2,2,2,6,6), the rest kept continuous.
struct SimDesignSpec {
  int n = 200;
  int p = 1000;
  double rho = 0.5;
  double sigma = 1.0;
  double beta0 = 1.0;
  Scenario scenario = Scenario::Ex1_I;
  std::uint64_t seed = 0;

  static constexpr int q = 6;
  static constexpr std::array<int, 6> J = {2, 2, 2, 2, 6, 6};

  void validate() const {
    if (p < 9) throw DataError("scenarios reference predictors up to index 9; need p >= 9");
    if (n < 1) throw DataError("need n >= 1");
    if (!(std::fabs(rho) < 1.0)) throw DataError("|rho| must be below 1");
    if (!(sigma >= 0.0)) throw DataError("sigma must be nonnegative");
  }
};

/// What the generator actually planted: active main-effect predictors,
/// interaction pairs, and the coefficient blocks for both (0-based
/// predictor indices; coefficient vectors follow dummy/product order).
struct TruthRecord {
  std::set<int> true_main_groups;
  std::set<std::pair<int, int>> true_interaction_pairs;
  std::map<int, std::vector<double>> main_coefficients;
  std::map<std::pair<int, int>, std::vector<double>> interaction_coefficients;
  double beta0 = 1.0;
};

struct SimDataset {
  PredictorSchema schema;
  RawTable raw;
  Vector response;
  TruthRecord truth;
};

namespace detail {

inline TruthRecord scenario_truth(Scenario scenario, double beta0) {
  // Shared coefficient pool (predictors are 0-based: paper-style X1 is 0).
  const std::vector<double> b1 = {2.0};
  const std::vector<double> b3 = {3.0};
  const std::vector<double> b5 = {-2.0, -3.0, -4.0, -5.0, 0.0};
  const std::vector<double> b7 = {2.0};
  const std::vector<double> b8 = {3.0};
  const std::vector<double> b9 = {-2.0};
  const std::vector<double> g79 = {1.5};  // X7*X9
  const std::vector<double> g18 = {1.5};  // X_I1*X8
  const std::vector<double> g13 = {2.0};  // X_I1*X_I3

  TruthRecord t;
  t.beta0 = beta0;
  const auto main = [&](int pred_1based, const std::vector<double>& coef) {
    t.true_main_groups.insert(pred_1based - 1);
    t.main_coefficients[pred_1based - 1] = coef;
  };
  const auto inter = [&](int a_1based, int b_1based, const std::vector<double>& coef) {
    const std::pair<int, int> key{std::min(a_1based, b_1based) - 1,
                                  std::max(a_1based, b_1based) - 1};
    t.true_interaction_pairs.insert(key);
    t.interaction_coefficients[key] = coef;
  };

  switch (scenario) {
    case Scenario::Ex1_I:
      main(1, b1); main(3, b3); main(5, b5); main(7, b7); main(8, b8); main(9, b9);
      inter(7, 9, g79);
      break;
    case Scenario::Ex1_II:
      main(1, b1); main(3, b3); main(5, b5); main(7, b7); main(8, b8); main(9, b9);
      inter(1, 8, g18);
      break;
    case Scenario::Ex1_III:
      main(1, b1); main(3, b3); main(5, b5); main(7, b7); main(8, b8); main(9, b9);
      inter(1, 3, g13);
      break;
    case Scenario::Ex1_IV:
      main(1, b1); main(3, b3); main(5, b5); main(7, b7); main(8, b8); main(9, b9);
      inter(7, 9, g79); inter(1, 8, g18);
      break;
    case Scenario::Ex1_V:
      main(1, b1); main(3, b3); main(5, b5); main(7, b7); main(8, b8); main(9, b9);
      inter(7, 9, g79); inter(1, 3, g13);
      break;
    case Scenario::Ex1_VI:
      main(1, b1); main(3, b3); main(5, b5); main(7, b7); main(8, b8); main(9, b9);
      inter(7, 9, g79); inter(1, 8, g18); inter(1, 3, g13);
      break;
    case Scenario::Ex2_I:  // interaction parent X9 has no main effect
      main(1, b1); main(3, b3); main(5, b5); main(7, b7); main(8, b8);
      inter(7, 9, g79);
      break;
    case Scenario::Ex2_II:  // parent X8 absent
      main(1, b1); main(3, b3); main(5, b5); main(7, b7); main(9, b9);
      inter(1, 8, g18);
      break;
    case Scenario::Ex2_III:  // parent X_I1 absent
      main(3, b3); main(5, b5); main(7, b7); main(8, b8); main(9, b9);
      inter(1, 8, g18);
      break;
    case Scenario::Ex2_IV:  // parent X_I3 absent
      main(1, b1); main(5, b5); main(7, b7); main(8, b8); main(9, b9);
      inter(1, 3, g13);
      break;
  }
  return t;
}

}  // namespace detail

/// Dummy values of predictor `pred` for one row, given the raw cell. The
/// j-th dummy of a categorical indicates level j; the last level carries
/// no dummy. Continuous predictors pass through as a single value.
inline std::vector<double> dummy_values(const PredictorSpec& spec, const RawColumn& col,
                                        std::size_t row) {
  if (spec.kind == PredictorKind::Continuous)
    return {std::get<std::vector<double>>(col).at(row)};
  const int level = std::get<std::vector<int>>(col).at(row);
  std::vector<double> out(spec.n_levels() - 1, 0.0);
  if (level >= 0 && level < static_cast<int>(out.size())) out[static_cast<std::size_t>(level)] = 1.0;
  return out;
}

/// Draws the benchmark dataset: latent AR(1) Gaussians (exact recursion, no
/// p x p factorization), quantile-cut categoricals, and the scenario's
/// response with N(0, sigma^2) noise. Bit-identical under a fixed seed.
inline SimDataset generate(const SimDesignSpec& spec) {
  spec.validate();
  SimDataset out;
  out.truth = detail::scenario_truth(spec.scenario, spec.beta0);

  std::vector<PredictorSpec> entries;
  entries.reserve(static_cast<std::size_t>(spec.p));
  for (int i = 0; i < spec.p; ++i) {
    PredictorSpec e;
    e.name = "X" + std::to_string(i + 1);
    if (i < SimDesignSpec::q) {
      e.kind = PredictorKind::Categorical;
      const int J = SimDesignSpec::J[static_cast<std::size_t>(i)];
      for (int l = 1; l <= J; ++l) e.levels.push_back(std::to_string(l));
    }
    entries.push_back(std::move(e));
  }
  out.schema = PredictorSchema(std::move(entries));

  // Level cut points: level j (1-based) covers (Phi^{-1}((j-1)/J), Phi^{-1}(j/J)].
  std::vector<std::vector<double>> cuts(SimDesignSpec::q);
  for (int i = 0; i < SimDesignSpec::q; ++i) {
    const int J = SimDesignSpec::J[static_cast<std::size_t>(i)];
    for (int j = 1; j < J; ++j)
      cuts[static_cast<std::size_t>(i)].push_back(
          normal_quantile(static_cast<double>(j) / J));
  }

  out.raw.n_rows = static_cast<std::size_t>(spec.n);
  out.raw.columns.resize(static_cast<std::size_t>(spec.p));
  for (int i = 0; i < spec.p; ++i) {
    if (i < SimDesignSpec::q)
      out.raw.columns[static_cast<std::size_t>(i)] =
          std::vector<int>(static_cast<std::size_t>(spec.n));
    else
      out.raw.columns[static_cast<std::size_t>(i)] =
          std::vector<double>(static_cast<std::size_t>(spec.n));
  }

  Rng rng(spec.seed);
  const double carry = std::sqrt(1.0 - spec.rho * spec.rho);
  out.response.resize(spec.n);
  for (int r = 0; r < spec.n; ++r) {
    double z_prev = 0.0;
    double y = out.truth.beta0;
    for (int i = 0; i < spec.p; ++i) {
      const double z = i == 0 ? rng.normal() : spec.rho * z_prev + carry * rng.normal();
      z_prev = z;
      if (i < SimDesignSpec::q) {
        const auto& c = cuts[static_cast<std::size_t>(i)];
        int level = 0;
        while (level < static_cast<int>(c.size()) && z > c[static_cast<std::size_t>(level)])
          ++level;
        std::get<std::vector<int>>(out.raw.columns[static_cast<std::size_t>(i)])[static_cast<std::size_t>(r)] = level;
      } else {
        std::get<std::vector<double>>(out.raw.columns[static_cast<std::size_t>(i)])[static_cast<std::size_t>(r)] = z;
      }
    }
    for (const auto& [pred, coef] : out.truth.main_coefficients) {
      const std::vector<double> x =
          dummy_values(out.schema.at(static_cast<std::size_t>(pred)),
                       out.raw.columns[static_cast<std::size_t>(pred)], static_cast<std::size_t>(r));
      for (std::size_t k = 0; k < coef.size(); ++k) y += coef[k] * x[k];
    }
    for (const auto& [pair, coef] : out.truth.interaction_coefficients) {
      const std::vector<double> xi =
          dummy_values(out.schema.at(static_cast<std::size_t>(pair.first)),
                       out.raw.columns[static_cast<std::size_t>(pair.first)], static_cast<std::size_t>(r));
      const std::vector<double> xj =
          dummy_values(out.schema.at(static_cast<std::size_t>(pair.second)),
                       out.raw.columns[static_cast<std::size_t>(pair.second)], static_cast<std::size_t>(r));
      std::size_t k = 0;
      for (double a : xi)
        for (double b : xj) y += coef.at(k++) * a * b;
    }
    out.response[r] = y;
  }
  // Noise drawn after all rows so the design is unchanged under sigma sweeps.
  for (int r = 0; r < spec.n; ++r) out.response[r] += spec.sigma * rng.normal();
  return out;
}

}  // namespace vibim
