#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "vibim/common.hpp"
#include "vibim/encoding.hpp"

namespace vibim {

/// Least-squares fit of the response on a column subset plus intercept.
/// Rank-deficient subsets get the minimum-norm solution; `degenerate` is set
/// when there is no residual degree of freedom left for estimating sigma^2.
struct OlsFit {
  double intercept = 0.0;
  std::vector<std::pair<int, double>> coefficients;  // (column, value), sorted
  double rss = 0.0;
  double tss = 0.0;  // sum of squares around the response mean
  int n = 0;
  int df = 0;    // fitted columns + 1 intercept (rank-adjusted)
  int rank = 0;  // rank of [1 X_S]
  double sigma2_hat = std::numeric_limits<double>::quiet_NaN();
  bool degenerate = false;

  double coef(int column) const {
    for (const auto& [c, v] : coefficients)
      if (c == column) return v;
    return 0.0;
  }
};

struct CriterionValue {
  double aic = 0.0;
  double bic = 0.0;
  double c_m = 0.0;
  double aic_p = 0.0;
  double bic_p = 0.0;
};

inline OlsFit fit_ols(const GroupedDesign& design, const std::vector<int>& columns,
                      const Vector& response) {
  const Eigen::Index n = design.matrix.rows();
  if (n < 2) throw DataError("need at least 2 observations for a fit");
  if (response.size() != n)
    throw DataError("response length does not match design rows");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!std::isfinite(response[i]))
      throw NonFiniteValueError(static_cast<std::size_t>(i), "response");

  const int k = static_cast<int>(columns.size());
  Matrix a(n, k + 1);
  a.col(0).setOnes();
  for (int c = 0; c < k; ++c) a.col(c + 1) = design.matrix.col(columns[static_cast<std::size_t>(c)]);

  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
  const Vector sol = cod.solve(response);
  const Vector resid = response - a * sol;

  OlsFit fit;
  fit.intercept = sol[0];
  fit.coefficients.reserve(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c)
    fit.coefficients.emplace_back(columns[static_cast<std::size_t>(c)], sol[c + 1]);
  fit.rss = resid.squaredNorm();
  const double ybar = response.mean();
  fit.tss = (response.array() - ybar).matrix().squaredNorm();
  fit.n = static_cast<int>(n);
  fit.rank = static_cast<int>(cod.rank());
  fit.df = fit.rank;  // intercept is part of the decomposition
  if (fit.n > fit.df) {
    fit.sigma2_hat = fit.rss / static_cast<double>(fit.n - fit.df);
  } else {
    fit.degenerate = true;
  }
  return fit;
}

/// Complexity term guarding against overfitting in wide designs:
/// |M| log(e p*/|M|) + 2 log(|M|+2), with the |M|=0 limit 2 log 2.
inline double complexity_term(int model_columns, int p_star) {
  if (model_columns == 0) return 2.0 * std::log(2.0);
  const double m = static_cast<double>(model_columns);
  return m * std::log(std::exp(1.0) * static_cast<double>(p_star) / m) +
         2.0 * std::log(m + 2.0);
}

/// Profile-likelihood Gaussian information criteria for an OLS fit.
/// The residual sum of squares is floored at 1e-12 * tss so a saturated fit
/// stays finite; aic_p/bic_p add the 2*psi*C_M complexity correction.
inline CriterionValue criteria(const OlsFit& fit, int model_columns, int p_star,
                               double psi = 1.0) {
  if (psi <= 0.0) throw DataError("psi must be positive");
  if (model_columns < 0 || p_star < model_columns)
    throw DataError("criteria needs 0 <= |M| <= p*");
  const double n = static_cast<double>(fit.n);
  double floor = 1e-12 * fit.tss;
  if (!(floor > 0.0)) floor = n * 1e-300;
  const double rss = std::max(fit.rss, floor);
  CriterionValue out;
  out.c_m = complexity_term(model_columns, p_star);
  const double base = n * std::log(rss / n);
  out.bic = base + static_cast<double>(fit.df) * std::log(n);
  out.aic = base + 2.0 * static_cast<double>(fit.df);
  out.bic_p = out.bic + 2.0 * psi * out.c_m;
  out.aic_p = out.aic + 2.0 * psi * out.c_m;
  return out;
}

struct CoefficientInference {
  int column = -1;               // -1 for the intercept
  std::string label;
  double estimate = 0.0;
  double std_error = std::numeric_limits<double>::quiet_NaN();
  double t_value = std::numeric_limits<double>::quiet_NaN();
  double p_value = std::numeric_limits<double>::quiet_NaN();
};

/// Classical OLS t-statistics for each fitted column (plus intercept).
/// Undefined (NaN) when the fit is degenerate or the column is in the
/// null space of the design subset.
inline std::vector<CoefficientInference> ols_inference(
    const GroupedDesign& design, const std::vector<int>& columns,
    const Vector& response, const OlsFit& fit) {
  const Eigen::Index n = design.matrix.rows();
  const int k = static_cast<int>(columns.size());
  Matrix a(n, k + 1);
  a.col(0).setOnes();
  for (int c = 0; c < k; ++c) a.col(c + 1) = design.matrix.col(columns[static_cast<std::size_t>(c)]);

  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
  const Matrix pinv = cod.pseudoInverse();  // (k+1) x n

  std::vector<CoefficientInference> out(static_cast<std::size_t>(k) + 1);
  const int resid_df = fit.n - fit.df;
  boost::math::students_t tdist(resid_df > 0 ? static_cast<double>(resid_df) : 1.0);
  for (int c = 0; c <= k; ++c) {
    CoefficientInference& ci = out[static_cast<std::size_t>(c)];
    if (c == 0) {
      ci.column = -1;
      ci.label = "(Intercept)";
      ci.estimate = fit.intercept;
    } else {
      ci.column = columns[static_cast<std::size_t>(c - 1)];
      ci.label = design.column_labels[static_cast<std::size_t>(ci.column)];
      ci.estimate = fit.coef(ci.column);
    }
    if (fit.degenerate || resid_df <= 0) continue;
    const double var = fit.sigma2_hat * pinv.row(c).squaredNorm();
    if (!(var > 0.0)) continue;
    ci.std_error = std::sqrt(var);
    ci.t_value = ci.estimate / ci.std_error;
    ci.p_value = 2.0 * boost::math::cdf(boost::math::complement(tdist, std::fabs(ci.t_value)));
  }
  return out;
}

}  // namespace vibim
