#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "abl/detail/util.hpp"
#include "abl/metric_space.hpp"

namespace abl {

struct ThicknessRow {
  double epsilon = 0.0;
  int dim_bound = 0;  // upper bound on d(X, epsilon)
};

struct ThicknessTable {
  std::vector<ThicknessRow> rows;
  double tau_fit = 0.0;              // slope of log d(eps) vs -log eps
  bool tau_valid = false;
  double polylog_exponent = 0.0;     // slope of log d(eps) vs log log(e + 1/eps)
  bool polylog_valid = false;
};

// Upper bounds on d(X, eps) via the singular value decomposition of the
// coordinate matrix: the best rank-k subspace in the mean-square sense is
// scored by its worst point-to-subspace distance. d(X, eps) is the smallest
// k whose subspace leaves every point within eps.
inline ThicknessTable thickness_estimate(const PointSet& X, const std::vector<double>& epsilons) {
  if (X.norm_kind() != NormKind::euclidean)
    throw std::invalid_argument("thickness_estimate: euclidean point set required");
  ThicknessTable out;
  if (epsilons.empty()) return out;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X.coords(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::MatrixXd us = svd.matrixU() * svd.singularValues().asDiagonal();
  const int rmax = static_cast<int>(svd.singularValues().size());

  // worst_residual[k] = max over points of the distance to the rank-k
  // subspace: suffix sums of squared (U Sigma) entries.
  std::vector<double> worst(rmax + 1, 0.0);
  Eigen::VectorXd suffix = Eigen::VectorXd::Zero(X.size());
  for (int k = rmax; k >= 0; --k) {
    worst[k] = std::sqrt(suffix.maxCoeff());
    if (k > 0) suffix += us.col(k - 1).cwiseAbs2();
  }
  worst[0] = std::sqrt(suffix.maxCoeff());

  std::vector<double> t_xs, t_ys, p_xs, p_ys;
  for (double eps : epsilons) {
    if (!(eps > 0.0)) throw std::invalid_argument("thickness_estimate: epsilons must be positive");
    int k = rmax;
    while (k > 0 && worst[k - 1] <= eps) --k;
    out.rows.push_back({eps, k});
    if (k >= 1) {
      t_xs.push_back(-std::log(eps));
      t_ys.push_back(std::log(static_cast<double>(k)));
      p_xs.push_back(std::log(std::log(std::exp(1.0) + 1.0 / eps)));
      p_ys.push_back(std::log(static_cast<double>(k)));
    }
  }
  if (t_xs.size() >= 2) {
    try {
      out.tau_fit = detail::fit_line(t_xs, t_ys).slope;
      out.tau_valid = true;
      out.polylog_exponent = detail::fit_line(p_xs, p_ys).slope;
      out.polylog_valid = true;
    } catch (const std::invalid_argument&) {
    }
  }
  return out;
}

}  // namespace abl
