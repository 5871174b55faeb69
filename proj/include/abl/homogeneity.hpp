#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "abl/detail/util.hpp"
#include "abl/nets.hpp"
#include "abl/slog.hpp"

namespace abl {

// Least-squares estimate of the (alpha, beta)-corrected homogeneity exponent:
//   log N_upper(r, rho) ~ logM + s log(r/rho) + beta log slog(r) + alpha log slog(rho)
// with alpha, beta fixed. s_hat estimates d_A^{alpha,beta}; with a local
// cutoff it estimates the Bouligand variant d_B^{alpha,beta}.
struct HomogeneityFit {
  double alpha = 0.0;
  double beta = 0.0;
  double s_hat = 0.0;
  double logM_hat = 0.0;
  double residual_rms = 0.0;
  int pairs_used = 0;
  bool local = false;
  double local_cutoff = 0.0;
  CoveringProfile profile;  // the (r, rho, N_lower, N_upper) rows used
};

inline HomogeneityFit homogeneity_fit(const FiniteMetricSpace& X, const ScaleGrid& grid, double alpha,
                                      double beta, std::optional<double> local_cutoff = std::nullopt) {
  std::vector<double> xs, ys;
  HomogeneityFit fit;
  fit.alpha = alpha;
  fit.beta = beta;
  fit.local = local_cutoff.has_value();
  fit.local_cutoff = local_cutoff.value_or(0.0);

  // Balanced design: every span j - i = 2..d_max uses the same window of
  // coarse scales i, which keeps the slog correction terms (functions of i
  // alone) orthogonal to the abscissa log(r/rho). A triangular pair set would
  // leak the correction into the fitted slope.
  const int span = grid.j_max - grid.j_min;
  const int d_max = std::max(3, (span + 2) / 2);
  for (int d = 2; d <= d_max; ++d)
    for (int i = grid.j_min; i + d_max <= grid.j_max; ++i) {
      const double r = grid.radius(i);
      if (local_cutoff && !(r < *local_cutoff)) continue;
      const double rho = grid.radius(i + d);
      const auto b = covering_number_bounds(X, r, rho);
      fit.profile.rows.push_back({r, rho, b.n_lower, b.n_upper});
      xs.push_back(std::log(r / rho));
      ys.push_back(std::log(static_cast<double>(b.n_upper)) - beta * std::log(slog(r)) -
                   alpha * std::log(slog(rho)));
    }
  if (xs.size() < 6)
    throw std::invalid_argument("homogeneity_fit: need at least 6 dyadic (r, rho) pairs, got " +
                                std::to_string(xs.size()));
  const auto line = detail::fit_line(xs, ys);
  fit.s_hat = line.slope;
  fit.logM_hat = line.intercept;
  fit.residual_rms = line.residual_rms;
  fit.pairs_used = line.points;
  return fit;
}

struct BoxDimensionEstimate {
  double estimate = 0.0;
  double residual_rms = 0.0;
  int scales_used = 0;
  std::vector<std::pair<int, int>> counts;  // (j, net size) over the fitted scales
};

// Slope of log N(X, 2^{-j}) against j log 2 over the middle half of the
// canonical scale grid.
inline BoxDimensionEstimate box_dimension_estimate(const FiniteMetricSpace& X) {
  BoxDimensionEstimate out;
  if (X.size() == 1 || !(X.diam() > 0.0)) return out;  // a point has dimension 0
  if (X.size() < 8) throw std::invalid_argument("box_dimension_estimate: need at least 8 points");
  const ScaleGrid grid = ScaleGrid::for_space(X);
  const int span = grid.j_max - grid.j_min;
  const int lo = grid.j_min + span / 4;
  const int hi = grid.j_max - span / 4;
  if (hi - lo < 1) throw std::invalid_argument("box_dimension_estimate: degenerate scale range");
  std::vector<double> xs, ys;
  for (int j = lo; j <= hi; ++j) {
    const int count = farthest_point_net(X, grid.radius(j)).size();
    out.counts.emplace_back(j, count);
    xs.push_back(j * std::log(2.0));
    ys.push_back(std::log(static_cast<double>(count)));
  }
  const auto line = detail::fit_line(xs, ys);
  out.estimate = line.slope;
  out.residual_rms = line.residual_rms;
  out.scales_used = line.points;
  return out;
}

// Compares homogeneity fits of a space and its image under a (purportedly)
// gamma-almost bi-Lipschitz map: the image is fitted with the beta exponent
// raised by gamma, and the ordering property is probed by refitting the
// source with both exponents raised.
struct ImageHomogeneityReport {
  HomogeneityFit source;
  HomogeneityFit image;
  HomogeneityFit source_raised;
  double slack = 0.25;
  double difference = 0.0;  // s_hat(image) - s_hat(source)
  bool image_within_slack = false;
  bool ordered_within_slack = false;
};

inline ImageHomogeneityReport image_homogeneity_audit(const FiniteMetricSpace& X,
                                                      const FiniteMetricSpace& mapped, double alpha,
                                                      double beta, double gamma, double slack = 0.25) {
  if (X.size() != mapped.size())
    throw std::invalid_argument("image_homogeneity_audit: point count mismatch");
  ImageHomogeneityReport rep;
  rep.slack = slack;
  rep.source = homogeneity_fit(X, ScaleGrid::for_space(X), alpha, beta);
  rep.image = homogeneity_fit(mapped, ScaleGrid::for_space(mapped), alpha, beta + gamma);
  rep.source_raised = homogeneity_fit(X, ScaleGrid::for_space(X), alpha + gamma, beta + gamma);
  rep.difference = rep.image.s_hat - rep.source.s_hat;
  rep.image_within_slack = rep.difference <= slack;
  rep.ordered_within_slack = rep.source_raised.s_hat <= rep.source.s_hat + slack;
  return rep;
}

}  // namespace abl
