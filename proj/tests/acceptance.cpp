// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Heavy Monte-Carlo criteria default to the reduced CI
// dimensions; set VIBIM_ACCEPT_FULL=1 for the full-size benchmark runs.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "vibim/encoding.hpp"
#include "vibim/evaluation.hpp"
#include "vibim/experiments.hpp"
#include "vibim/importance.hpp"
#include "vibim/io.hpp"
#include "vibim/parallel.hpp"
#include "vibim/regression.hpp"
#include "vibim/rng.hpp"
#include "vibim/simgen.hpp"
#include "vibim/solvers.hpp"
#include "vibim/vibim.hpp"

namespace fs = std::filesystem;
using namespace vibim;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& text) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", id, text.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

bool full_mode() { return std::getenv("VIBIM_ACCEPT_FULL") != nullptr; }

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, args);
  va_end(args);
  return buf;
}

// ---------------------------------------------------------------- C1 + C2
void criterion_1_and_2() {
  const bool full = full_mode();
  const int n = 200;
  const int p = full ? 1000 : 200;
  const int reps = full ? 100 : 30;
  const std::vector<Method> methods = {Method::Vibim, Method::TwoStageGroupLasso,
                                       Method::TwoStageGroupScad, Method::TwoStageGroupMcp};
  const SimulationSummary summary = run_simulation_experiment(
      Scenario::Ex1_I, n, p, reps, methods, {7}, 20260201, 0);

  const FgCell& vib = summary.cells[0][0];
  const bool c1 = vib.mean_f >= 0.95 && vib.mean_g >= 0.95;
  report(1, c1,
         fmt("benchmark reproduction at the true size, (n,p)=(%d,%d), %d reps: "
             "mean F=%.4f, mean G=%.4f (need both >= 0.95)",
             n, p, reps, vib.mean_f, vib.mean_g));

  bool c2 = true;
  std::string detail;
  for (std::size_t m = 1; m < methods.size(); ++m) {
    const FgCell& base = summary.cells[m][0];
    c2 = c2 && vib.mean_f > base.mean_f;
    detail += fmt(" %s=%.4f", method_name(methods[m]), base.mean_f);
  }
  report(2, c2,
         fmt("comparative ordering at size 7: vibim=%.4f strictly above%s",
             vib.mean_f, detail.c_str()));
}

// --------------------------------------------------------------------- C3
void criterion_3() {
  const bool full = full_mode();
  const int n = 200;
  const int p = full ? 1000 : 200;
  const int reps = full ? 100 : 30;
  const std::vector<Method> methods = {Method::Vibim, Method::TwoStageGroupLasso,
                                       Method::TwoStageGroupScad, Method::TwoStageGroupMcp};

  const SimulationSummary two = run_simulation_experiment(
      Scenario::Ex2_II, n, p, reps, {Method::Vibim}, {6}, 20260202, 0);
  const double f2 = two.cells[0][0].mean_f;

  const SimulationSummary three = run_simulation_experiment(
      Scenario::Ex2_III, n, p, reps, methods, {5, 6, 7, 8, 9}, 20260203, 0);
  double worst = 0.0;
  for (const auto& row : three.cells)
    for (const FgCell& cell : row) worst = std::max(worst, cell.mean_f);

  const bool pass = f2 >= 0.9 && worst <= 0.1;
  report(3, pass,
         fmt("weak heredity: detectable scenario mean F=%.4f (need >= 0.9), "
             "undetectable scenario max mean F over methods/sizes=%.4f (need <= 0.1)",
             f2, worst));
}

// --------------------------------------------------------------------- C4
// Full pipeline with an all-subsets candidate set against an independent
// long-double enumeration of the weighting and scoring formulas.
long double ld_ols_rss(const Matrix& x, const Vector& y) {
  const int n = static_cast<int>(x.rows());
  const int k = static_cast<int>(x.cols()) + 1;
  std::vector<std::vector<long double>> a(static_cast<std::size_t>(k),
                                          std::vector<long double>(static_cast<std::size_t>(k), 0.0L));
  std::vector<long double> b(static_cast<std::size_t>(k), 0.0L);
  const auto cell = [&](int r, int c) -> long double {
    return c == 0 ? 1.0L : static_cast<long double>(x(r, c - 1));
  };
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j)
      for (int r = 0; r < n; ++r) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += cell(r, i) * cell(r, j);
    for (int r = 0; r < n; ++r) b[static_cast<std::size_t>(i)] += cell(r, i) * static_cast<long double>(y(r));
  }
  for (int col = 0; col < k; ++col) {
    int pivot = col;
    for (int r = col + 1; r < k; ++r)
      if (fabsl(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) >
          fabsl(a[static_cast<std::size_t>(pivot)][static_cast<std::size_t>(col)]))
        pivot = r;
    std::swap(a[static_cast<std::size_t>(col)], a[static_cast<std::size_t>(pivot)]);
    std::swap(b[static_cast<std::size_t>(col)], b[static_cast<std::size_t>(pivot)]);
    for (int r = col + 1; r < k; ++r) {
      const long double f = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] /
                            a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
      for (int c = col; c < k; ++c)
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
            f * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)];
      b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
    }
  }
  std::vector<long double> beta(static_cast<std::size_t>(k), 0.0L);
  for (int r = k - 1; r >= 0; --r) {
    long double acc = b[static_cast<std::size_t>(r)];
    for (int c = r + 1; c < k; ++c)
      acc -= a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] * beta[static_cast<std::size_t>(c)];
    beta[static_cast<std::size_t>(r)] = acc / a[static_cast<std::size_t>(r)][static_cast<std::size_t>(r)];
  }
  long double rss = 0.0L;
  for (int r = 0; r < n; ++r) {
    long double pred = beta[0];
    for (int c = 1; c < k; ++c) pred += beta[static_cast<std::size_t>(c)] * cell(r, c);
    rss += (static_cast<long double>(y(r)) - pred) * (static_cast<long double>(y(r)) - pred);
  }
  return rss;
}

GroupedDesign random_mixed_design(Rng& rng, int n, const std::vector<int>& sizes) {
  int total = 0;
  for (int s : sizes) total += s;
  Matrix m(n, total);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < total; ++c) m(r, c) = rng.normal();
  GroupedDesign d;
  d.matrix = m;
  int col = 0;
  for (std::size_t g = 0; g < sizes.size(); ++g) {
    Group grp;
    grp.label = "g" + std::to_string(g);
    grp.source = GroupSource{GroupKind::Main, static_cast<int>(g), -1};
    grp.start = col;
    grp.size = sizes[g];
    col += sizes[g];
    d.groups.push_back(grp);
    for (int k = 0; k < grp.size; ++k) d.column_labels.push_back(grp.label);
  }
  d.constant_col.assign(static_cast<std::size_t>(total), false);
  return d;
}

void criterion_4() {
  const int instances = 200;
  std::vector<double> max_err(instances, 0.0);
  parallel_for(instances, 0, [&](int inst) {
    Rng rng(Rng::derive_seed(8800, static_cast<std::uint64_t>(inst)));
    const int n = 20 + static_cast<int>(rng.below(21));  // 20..40
    const std::vector<std::vector<int>> shapes = {{1, 2, 1, 1, 3}, {1, 1, 1, 1, 1, 1, 1, 1},
                                                  {2, 2, 4}, {1, 3, 1, 2}};
    const GroupedDesign d = random_mixed_design(rng, n, shapes[static_cast<std::size_t>(inst) % shapes.size()]);
    Vector y(n);
    for (int i = 0; i < n; ++i)
      y(i) = 1.5 * d.matrix(i, 0) - d.matrix(i, d.cols() - 1) + rng.normal();

    const int G = d.n_groups();
    std::vector<std::vector<int>> subsets;
    for (int mask = 0; mask < (1 << G); ++mask) {
      std::vector<int> gs;
      for (int g = 0; g < G; ++g)
        if (mask & (1 << g)) gs.push_back(g);
      subsets.push_back(gs);
    }
    ModelSet set;
    set.p_star = d.cols();
    for (const auto& gs : subsets) set.models.push_back(make_candidate(d, y, gs));
    set = bicp_weights(set);
    const ImportanceVector iv = soil(d, set);

    long double tss = 0.0L, mean = 0.0L;
    for (int i = 0; i < n; ++i) mean += y(i);
    mean /= n;
    for (int i = 0; i < n; ++i) tss += (y(i) - mean) * (y(i) - mean);

    std::vector<long double> expo(subsets.size());
    long double mx = -1e30L;
    for (std::size_t s = 0; s < subsets.size(); ++s) {
      const auto cols = d.columns_of_groups(subsets[s]);
      Matrix x(n, static_cast<int>(cols.size()));
      for (std::size_t c = 0; c < cols.size(); ++c) x.col(static_cast<Eigen::Index>(c)) = d.matrix.col(cols[c]);
      long double rss = ld_ols_rss(x, y);
      if (rss < 1e-12L * tss) rss = 1e-12L * tss;
      const int mcols = static_cast<int>(cols.size());
      const long double bic = n * logl(rss / n) + (mcols + 1) * logl(static_cast<long double>(n));
      const long double cm = mcols == 0
                                 ? 2.0L * logl(2.0L)
                                 : mcols * logl(expl(1.0L) * d.cols() / static_cast<long double>(mcols)) +
                                       2.0L * logl(static_cast<long double>(mcols) + 2.0L);
      expo[s] = -0.5L * bic - cm;
      mx = std::max(mx, expo[s]);
    }
    long double total = 0.0L;
    for (auto& e : expo) {
      e = expl(e - mx);
      total += e;
    }
    double worst = 0.0;
    for (int g = 0; g < G; ++g) {
      long double score = 0.0L;
      for (std::size_t s = 0; s < subsets.size(); ++s)
        if (std::find(subsets[s].begin(), subsets[s].end(), g) != subsets[s].end())
          score += expo[s] / total;
      worst = std::max(worst,
                       std::fabs(iv.scores[static_cast<std::size_t>(g)] - static_cast<double>(score)));
    }
    max_err[static_cast<std::size_t>(inst)] = worst;
  });
  const double worst = *std::max_element(max_err.begin(), max_err.end());
  report(4, worst <= 1e-12,
         fmt("all-subsets pipeline vs direct enumeration over %d instances: "
             "max |diff| = %.3e (need <= 1e-12)",
             instances, worst));
}

// --------------------------------------------------------------------- C5
void criterion_5() {
  // Independent stationarity check, written against the centered design.
  const auto kkt_check = [](const GroupedDesign& d, const Vector& y, const PathStep& step,
                            double* active_resid, double* inactive_ratio) {
    const Eigen::Index n = d.matrix.rows();
    const double dn = static_cast<double>(n);
    Vector fitted = Vector::Constant(n, step.intercept);
    fitted += d.matrix * step.beta;
    const Vector resid = y - fitted;
    for (int g = 0; g < d.n_groups(); ++g) {
      const Group& grp = d.groups[static_cast<std::size_t>(g)];
      Matrix block = d.matrix.middleCols(grp.start, grp.size);
      block.rowwise() -= block.colwise().mean().eval();
      Eigen::JacobiSVD<Matrix> svd(block, Eigen::ComputeThinU);
      const auto& sv = svd.singularValues();
      int rank = 0;
      const double tol = std::max<double>(dn, grp.size) *
                         std::numeric_limits<double>::epsilon() * (sv.size() ? sv[0] : 0.0);
      for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv[k] > tol) ++rank;
      if (rank == 0) continue;
      const Matrix z = svd.matrixU().leftCols(rank) * std::sqrt(dn);
      const Vector grad = -(z.transpose() * resid) / dn;
      const double mult = std::sqrt(static_cast<double>(grp.size));
      const bool active =
          std::binary_search(step.active_groups.begin(), step.active_groups.end(), g);
      if (active) {
        const Vector beta_z =
            z.transpose() * (block * step.beta.segment(grp.start, grp.size)) / dn;
        const double norm = beta_z.norm();
        if (norm == 0.0) continue;
        *active_resid = std::max(*active_resid,
                                 (grad + step.lambda * mult * beta_z / norm).norm());
      } else if (step.lambda > 0.0) {
        *inactive_ratio = std::max(*inactive_ratio, grad.norm() / (step.lambda * mult));
      }
    }
  };

  const int instances = 50;
  std::vector<double> worst_active(instances, 0.0), worst_inactive(instances, 0.0);
  std::vector<double> worst_ols(instances, 0.0), worst_obj(instances, 0.0);
  parallel_for(instances, 0, [&](int inst) {
    Rng rng(Rng::derive_seed(9900, static_cast<std::uint64_t>(inst)));
    const int n = 60 + static_cast<int>(rng.below(41));
    const std::vector<std::vector<int>> shapes = {{1, 2, 5, 1, 3, 1}, {1, 1, 1, 1, 1, 1, 1},
                                                  {3, 3, 2, 1}, {1, 4, 1, 2, 1}};
    const GroupedDesign d =
        random_mixed_design(rng, n, shapes[static_cast<std::size_t>(inst) % shapes.size()]);
    Vector y(n);
    for (int i = 0; i < n; ++i)
      y(i) = 1.2 * d.matrix(i, 0) - 2.0 * d.matrix(i, d.cols() / 2) + rng.normal();

    // Group-lasso stationarity at every step of the default path.
    PenaltySpec lasso;
    lasso.n_lambda = 40;
    const SolverPath path = fit_path(d, y, lasso);
    for (const PathStep& step : path.steps)
      kkt_check(d, y, step, &worst_active[static_cast<std::size_t>(inst)],
                &worst_inactive[static_cast<std::size_t>(inst)]);

    // Unpenalized end of the path agrees with least squares.
    std::vector<int> all_cols(static_cast<std::size_t>(d.cols()));
    std::iota(all_cols.begin(), all_cols.end(), 0);
    const OlsFit ols = fit_ols(d, all_cols, y);
    for (PenaltyFamily fam : {PenaltyFamily::GroupLasso, PenaltyFamily::GroupScad,
                              PenaltyFamily::GroupMcp}) {
      PenaltySpec spec;
      spec.family = fam;
      spec.lambda_grid = {1.0, 0.0};
      const SolverPath zp = fit_path(d, y, spec);
      const PathStep& last = zp.steps.back();
      for (int c = 0; c < d.cols(); ++c) {
        const double ref = ols.coef(c);
        worst_ols[static_cast<std::size_t>(inst)] =
            std::max(worst_ols[static_cast<std::size_t>(inst)],
                     std::fabs(last.beta(c) - ref) / std::max(1.0, std::fabs(ref)));
      }

      // Per-sweep objective monotonicity across a few grid values.
      for (double lambda : lambda_grid(d, y, 5)) {
        PenaltySpec one;
        one.family = fam;
        one.lambda_grid = {lambda};
        std::vector<double> objectives;
        fit_path(d, y, one, [&](double obj) { objectives.push_back(obj); });
        for (std::size_t k = 1; k < objectives.size(); ++k) {
          const double slack = objectives[k] - objectives[k - 1] -
                               1e-10 * std::max(1.0, std::fabs(objectives[k - 1]));
          worst_obj[static_cast<std::size_t>(inst)] =
              std::max(worst_obj[static_cast<std::size_t>(inst)], slack);
        }
      }
    }
  });
  const double a = *std::max_element(worst_active.begin(), worst_active.end());
  const double i = *std::max_element(worst_inactive.begin(), worst_inactive.end());
  const double o = *std::max_element(worst_ols.begin(), worst_ols.end());
  const double j = *std::max_element(worst_obj.begin(), worst_obj.end());
  const bool pass = a <= 1e-5 && i <= 1.0 + 1e-5 && o <= 1e-6 && j <= 0.0;
  report(5, pass,
         fmt("solver checks over %d instances: max active KKT residual=%.2e (<=1e-5), "
             "max inactive ratio=%.8f (<=1+1e-5), max lambda=0 OLS rel err=%.2e (<=1e-6), "
             "objective increase slack=%.2e (<=0)",
             instances, a, i, o, j));
}

// --------------------------------------------------------------------- C6
void criterion_6() {
  bool pass = true;
  std::string detail;

  // Weight normalization and score bounds on assembled candidates.
  Rng rng(6600);
  const GroupedDesign d = random_mixed_design(rng, 80, {1, 2, 1, 1, 3, 1});
  Vector y(80);
  for (int i = 0; i < 80; ++i) y(i) = 2.0 * d.matrix(i, 0) + rng.normal();
  PenaltySpec lasso, scad, mcp;
  scad.family = PenaltyFamily::GroupScad;
  mcp.family = PenaltyFamily::GroupMcp;
  const std::vector<PenaltySpec> specs = {lasso, scad, mcp};
  ModelSet set = bicp_weights(assemble_candidates(d, y, specs));
  double sum = 0.0;
  for (double w : set.weights) {
    sum += w;
    pass = pass && w >= 0.0 && std::isfinite(w);
  }
  pass = pass && std::fabs(sum - 1.0) <= 1e-12;
  detail += fmt("sum(w)-1=%.2e", sum - 1.0);

  const ImportanceVector iv = soil(d, set);
  for (double s : iv.scores) pass = pass && s >= 0.0 && s <= 1.0;

  // Softmax shift invariance with synthetic criterion magnitudes up to 1e6.
  ModelSet a, b;
  const std::vector<double> bics = {1e6, 1e6 - 37.0, 999950.0, 2.0};
  const std::vector<double> cms = {1.0, 16.0, 4.0, 250.0};
  for (std::size_t i = 0; i < bics.size(); ++i) {
    CandidateModel m;
    m.group_set = {static_cast<int>(i)};
    m.column_set = {static_cast<int>(i)};
    m.criterion.bic = bics[i];
    m.criterion.c_m = cms[i];
    a.models.push_back(m);
    m.criterion.bic = bics[i] - 777777.0;
    b.models.push_back(m);
  }
  a = bicp_weights(a);
  b = bicp_weights(b);
  double shift_err = 0.0;
  for (std::size_t i = 0; i < a.weights.size(); ++i)
    shift_err = std::max(shift_err, std::fabs(a.weights[i] - b.weights[i]));
  pass = pass && shift_err <= 1e-12;
  detail += fmt(", shift err=%.2e", shift_err);

  // BIC ranking invariance under response rescaling.
  const std::vector<std::vector<int>> models = {{}, {0}, {0, 1}, {0, 1, 2}, {3}, {0, 3}};
  std::size_t ref_argmin = 0;
  bool rescale_ok = true;
  for (double k : {1.0, 12.5, 3e-3}) {
    std::vector<double> bvals;
    for (const auto& gs : models) {
      const auto cols = d.columns_of_groups(gs);
      const OlsFit fit = fit_ols(d, cols, k * y);
      bvals.push_back(criteria(fit, static_cast<int>(cols.size()), d.cols()).bic);
    }
    const std::size_t argmin = static_cast<std::size_t>(
        std::min_element(bvals.begin(), bvals.end()) - bvals.begin());
    if (k == 1.0) ref_argmin = argmin;
    rescale_ok = rescale_ok && argmin == ref_argmin;
  }
  pass = pass && rescale_ok;
  detail += rescale_ok ? ", rescale argmin stable" : ", rescale argmin moved";

  report(6, pass, "weight/score invariants: " + detail);
}

// --------------------------------------------------------------------- C7
void criterion_7() {
  const int comparisons = 50;
  const int inner_reps = 3;
  std::vector<int> pivs_win(comparisons, 0), sivs_win(comparisons, 0);
  parallel_for(comparisons, 0, [&](int cmp) {
    SimDesignSpec spec;
    spec.n = 150;
    spec.p = 30;
    spec.scenario = Scenario::Ex1_I;
    spec.seed = Rng::derive_seed(7700, static_cast<std::uint64_t>(cmp));
    const SimDataset data = generate(spec);
    const GroupedDesign mains = encode(data.schema, data.raw);

    const Selector vib = make_selector("vibim:s=7");
    const Selector gscad = make_selector("gscad");
    const std::uint64_t seed = Rng::derive_seed(7701, static_cast<std::uint64_t>(cmp));

    const StabilityScore pv = pivs(vib, mains, data.response, 0.1, inner_reps, seed);
    const StabilityScore pg = pivs(gscad, mains, data.response, 0.1, inner_reps, seed);
    const StabilityScore sv = sivs(vib, mains, data.response, 0.05, inner_reps, seed);
    const StabilityScore sg = sivs(gscad, mains, data.response, 0.05, inner_reps, seed);
    pivs_win[static_cast<std::size_t>(cmp)] = pv.pivs < pg.pivs ? 1 : 0;
    sivs_win[static_cast<std::size_t>(cmp)] = sv.sivs < sg.sivs ? 1 : 0;
  });
  int pw = 0, sw = 0;
  for (int v : pivs_win) pw += v;
  for (int v : sivs_win) sw += v;
  const bool pass = pw >= comparisons * 8 / 10 && sw >= comparisons * 8 / 10;
  report(7, pass,
         fmt("stability direction over %d comparisons: fixed-size importance ranking "
             "beats two-stage group SCAD on PIVS %d/%d and on SIVS %d/%d (need >= 40 each)",
             comparisons, pw, comparisons, sw, comparisons));
}

// --------------------------------------------------------------------- C8
void criterion_8() {
  SimDesignSpec spec;
  spec.n = 300;
  spec.p = 16;
  spec.scenario = Scenario::Ex1_I;
  spec.seed = 20260405;
  const SimDataset data = generate(spec);
  const GroupedDesign mains = encode(data.schema, data.raw);
  const GroupedDesign gen = augment_interactions(mains, {{6, 8}});

  // True mains are predictors 1,3,5,7,8,9 (0-based 0,2,4,6,8) plus the pair.
  std::vector<int> with_pair = {0, 2, 4, 6, 7, 8, gen.n_groups() - 1};
  std::vector<int> without_pair = {0, 2, 4, 6, 7, 8};
  const std::vector<long long> designated = {main_variable_id(6), main_variable_id(8),
                                             pair_variable_id(6, 8)};

  const int reps = 200;
  const GuidedSimResult with_result = run_guided_sim(
      mains, gen, with_pair, designated, 7, reps, 20260406, 0, data.response);
  const GuidedSimResult without_result = run_guided_sim(
      mains, gen, without_pair, designated, 7, reps, 20260407, 0, data.response);

  const int a = with_result.joint_count;
  const int b = without_result.joint_count;
  const bool pass = b == 0 ? a >= 5 : a >= 5 * b;
  report(8, pass,
         fmt("guided simulation over %d reps: joint inclusion+significance %d with the "
             "interaction in the generator vs %d without (need a factor >= 5)",
             reps, a, b));
}

// --------------------------------------------------------------------- C9
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

bool dirs_equal(const fs::path& a, const fs::path& b) {
  std::set<std::string> names;
  for (const auto& e : fs::directory_iterator(a)) names.insert(e.path().filename().string());
  std::set<std::string> names_b;
  for (const auto& e : fs::directory_iterator(b)) names_b.insert(e.path().filename().string());
  if (names != names_b || names.empty()) return false;
  for (const std::string& name : names)
    if (slurp(a / name) != slurp(b / name)) return false;
  return true;
}

void criterion_9() {
  const std::string cli = VIBIM_CLI_PATH;
  const std::string data = std::string(VIBIM_DATA_DIR) + "/toy_covid.csv";
  const std::string schema = std::string(VIBIM_DATA_DIR) + "/covid_schema.json";
  const fs::path base = fs::temp_directory_path() / ("vibim_accept_" + std::to_string(::getpid()));
  fs::remove_all(base);
  fs::create_directories(base);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"vibim", "vibim --data " + data + " --schema " + schema + " --seed 41"},
      {"simulate",
       "simulate --scenario ex1-i --n 60 --p 12 --reps 2 --methods vibim --sizes 7 --seed 42 "
       "--threads 2"},
      {"stability",
       "stability --data " + data + " --schema " + schema +
           " --selectors vibim:s=5,const:1+2 --tau 0.1 --fraction 0.1 --reps 2 --seed 43 "
           "--threads 2"},
      {"guided-sim",
       "guided-sim --data " + data + " --schema " + schema +
           " --model Dis.WH,Total.Flow,Pop.2018,Dis.WH*Total.Flow --designated "
           "Dis.WH,Total.Flow,Dis.WH*Total.Flow --top-s 6 --reps 2 --seed 44 --threads 2"},
      {"fit-path", "fit-path --data " + data + " --schema " + schema + " --family gscad "
                   "--n-lambda 20 --seed 45"},
      {"soil", "soil --data " + data + " --schema " + schema + " --seed 46"},
  };

  bool pass = true;
  std::string detail;
  for (const auto& [name, args] : commands) {
    const fs::path dir_a = base / (name + "_a");
    const fs::path dir_b = base / (name + "_b");
    const std::string run_a = cli + " " + args + " --out " + dir_a.string() + " > /dev/null 2>&1";
    const std::string run_b = cli + " " + args + " --out " + dir_b.string() + " > /dev/null 2>&1";
    const bool ok = std::system(run_a.c_str()) == 0 && std::system(run_b.c_str()) == 0 &&
                    dirs_equal(dir_a, dir_b);
    pass = pass && ok;
    detail += (detail.empty() ? "" : ", ") + name + (ok ? "=identical" : "=DIFFER");
  }
  fs::remove_all(base);
  report(9, pass, "CLI determinism: " + detail);
}

}  // namespace

int main() {
  std::printf("acceptance mode: %s\n", full_mode() ? "full benchmark dimensions"
                                                   : "reduced CI dimensions");
  criterion_1_and_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (g_failures) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
