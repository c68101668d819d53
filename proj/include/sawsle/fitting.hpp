#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "sawsle/conformal.hpp"
#include "sawsle/estimators.hpp"

namespace sawsle {

struct DesignRow {
  std::vector<double> predictors;
  double response = 0.0;
  double sigma = 1.0;
};

struct FitResult {
  Eigen::VectorXd coefficients;
  Eigen::MatrixXd covariance;
  double rss = 0.0;  // sum of squared standardised residuals
  std::size_t used = 0;
  std::size_t excluded = 0;
};

/// Minimises sum(((response - predictors . beta) / sigma)^2). The covariance
/// is the inverse of the weighted normal matrix. Throws
/// std::invalid_argument for ragged rows, non-positive sigma or too few rows,
/// and SingularMatrixError for a rank-deficient design.
FitResult wls(std::span<const DesignRow> rows);

struct ExponentFitOptions {
  /// Adds a free constant term (third coefficient); diagnostic only.
  bool intercept = false;
  double min_ecdf = 1e-6;
  double min_effective_count = 10.0;
  std::size_t min_rows = 100;
};

/// Fits log ECDF(w) = b log d0(w) + bbar log di(w) over every grid point of
/// every statistic that survives the exclusion rules (ECDF <= min_ecdf, zero
/// or undefined error, ECDF * effective_samples < min_effective_count, or a
/// threshold on the domain edge). Coefficients are (b, bbar[, intercept]).
/// Throws InsufficientDataError when fewer than min_rows rows remain.
FitResult fit_b_bbar(std::span<const CdfEstimate> cdfs, std::span<const FactorTable> tables,
                     double effective_samples, const ExponentFitOptions& options = {});

struct AngularFitOptions {
  double min_effective_count = 10.0;
  std::size_t min_bins = 50;
};

/// Fits log(expectation) = c + slope * log(sin(bin midpoint)) over bins that
/// survive the exclusion rules. Coefficients are (c, slope).
/// Throws InsufficientDataError when fewer than min_bins bins remain.
FitResult fit_angular_slope(const AngularEstimate& angular, double effective_samples,
                            const AngularFitOptions& options = {});

/// (log sin(mid), log expectation) for the bins fit_angular_slope would use.
std::vector<std::pair<double, double>> angular_fit_points(const AngularEstimate& angular,
                                                          double effective_samples,
                                                          const AngularFitOptions& options = {});

}  // namespace sawsle
