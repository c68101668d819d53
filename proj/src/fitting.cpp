#include "sawsle/fitting.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sawsle/errors.hpp"

namespace sawsle {

FitResult wls(std::span<const DesignRow> rows) {
  if (rows.empty()) throw std::invalid_argument("wls: no rows");
  const std::size_t k = rows.front().predictors.size();
  if (k == 0) throw std::invalid_argument("wls: no predictors");
  if (rows.size() < k) throw std::invalid_argument("wls: fewer rows than coefficients");

  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto m = static_cast<Eigen::Index>(k);
  Eigen::MatrixXd design(n, m);
  Eigen::VectorXd response(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const DesignRow& r = rows[static_cast<std::size_t>(i)];
    if (r.predictors.size() != k) throw std::invalid_argument("wls: ragged design rows");
    if (!(r.sigma > 0.0) || !std::isfinite(r.sigma)) throw std::invalid_argument("wls: sigma must be positive");
    for (Eigen::Index j = 0; j < m; ++j) design(i, j) = r.predictors[static_cast<std::size_t>(j)] / r.sigma;
    response(i) = r.response / r.sigma;
  }
  if (!design.allFinite() || !response.allFinite()) throw std::invalid_argument("wls: non-finite input");

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < m) throw SingularMatrixError("wls: normal matrix is singular");

  FitResult out;
  out.coefficients = qr.solve(response);
  out.covariance = (design.transpose() * design).inverse();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
  out.rss = (response - design * out.coefficients).squaredNorm();
  out.used = rows.size();
  return out;
}

FitResult fit_b_bbar(std::span<const CdfEstimate> cdfs, std::span<const FactorTable> tables,
                     double effective_samples, const ExponentFitOptions& options) {
  std::vector<DesignRow> rows;
  std::size_t offered = 0;
  for (const CdfEstimate& cdf : cdfs) {
    const FactorTable* table = nullptr;
    for (const FactorTable& t : tables) {
      if (t.stat == cdf.stat) table = &t;
    }
    if (!table || table->thresholds != cdf.thresholds) {
      throw std::invalid_argument("fit_b_bbar: no factor table matching the grid of " +
                                  std::string(name(cdf.stat)));
    }
    for (std::size_t k = 0; k < cdf.thresholds.size(); ++k) {
      ++offered;
      const double p = cdf.ecdf[k];
      const double se = cdf.std_error[k];
      const SleCdfFactors f = table->factors[k];
      const bool usable = std::isfinite(f.d0) && std::isfinite(f.di) && f.d0 > 0.0 && f.di > 0.0 &&
                          p > options.min_ecdf && se > 0.0 && std::isfinite(se) &&
                          p * effective_samples >= options.min_effective_count;
      if (!usable) continue;
      DesignRow row;
      row.predictors = {std::log(f.d0), std::log(f.di)};
      if (options.intercept) row.predictors.push_back(1.0);
      row.response = std::log(p);
      row.sigma = se / p;
      rows.push_back(std::move(row));
    }
  }
  if (rows.size() < options.min_rows) {
    throw InsufficientDataError("fit_b_bbar: only " + std::to_string(rows.size()) + " usable rows (need " +
                                std::to_string(options.min_rows) + ")");
  }
  FitResult out = wls(rows);
  out.excluded = offered - out.used;
  return out;
}

namespace {

bool usable_bin(const AngularEstimate& a, std::size_t k, double effective_samples,
                const AngularFitOptions& options) {
  const double e = a.expectation[k];
  const double se = a.std_error[k];
  return e > 0.0 && se > 0.0 && std::isfinite(se) && e * effective_samples >= options.min_effective_count &&
         std::sin(a.mid[k]) > 0.0;
}

}  // namespace

FitResult fit_angular_slope(const AngularEstimate& angular, double effective_samples,
                            const AngularFitOptions& options) {
  std::vector<DesignRow> rows;
  const std::size_t offered = angular.expectation.size();
  for (std::size_t k = 0; k < offered; ++k) {
    if (!usable_bin(angular, k, effective_samples, options)) continue;
    const double e = angular.expectation[k];
    rows.push_back({{1.0, std::log(std::sin(angular.mid[k]))}, std::log(e), angular.std_error[k] / e});
  }
  if (rows.size() < options.min_bins) {
    throw InsufficientDataError("fit_angular_slope: only " + std::to_string(rows.size()) +
                                " usable bins (need " + std::to_string(options.min_bins) + ")");
  }
  FitResult out = wls(rows);
  out.excluded = offered - out.used;
  return out;
}

std::vector<std::pair<double, double>> angular_fit_points(const AngularEstimate& angular,
                                                          double effective_samples,
                                                          const AngularFitOptions& options) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t k = 0; k < angular.expectation.size(); ++k) {
    if (!usable_bin(angular, k, effective_samples, options)) continue;
    out.emplace_back(std::log(std::sin(angular.mid[k])), std::log(angular.expectation[k]));
  }
  return out;
}

}  // namespace sawsle
