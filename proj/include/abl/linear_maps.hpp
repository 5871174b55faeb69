#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "abl/metric_space.hpp"

namespace abl {

// L = M P with P the orthogonal projection onto (ker L)^perp and M the
// invertible restriction of L to that row space. Rank-deficient targets are
// pruned to the row space first.
struct LinearDecomposition {
  Eigen::MatrixXd projection;   // ambient x ambient, P
  Eigen::MatrixXd row_basis;    // ambient x rank, orthonormal columns spanning U
  Eigen::MatrixXd factor;       // (pruned) target x rank, M in the U basis
  Eigen::MatrixXd pruned_map;   // the map actually decomposed (target pruned if needed)
  int rank = 0;
  bool pruned = false;
  double reconstruction_error = 0.0;  // max-abs of pruned_map - factor * basis^T
  double min_singular = 0.0;
  double max_singular = 0.0;
};

inline LinearDecomposition decompose_linear(const Eigen::MatrixXd& L) {
  if (L.size() == 0 || L.cwiseAbs().maxCoeff() == 0.0)
    throw std::invalid_argument("decompose_linear: zero map");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(L, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv[0];
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-12 * smax) ++rank;

  LinearDecomposition out;
  out.rank = rank;
  out.max_singular = smax;
  out.min_singular = sv[rank - 1];
  out.row_basis = svd.matrixV().leftCols(rank);
  out.projection = out.row_basis * out.row_basis.transpose();
  out.pruned = rank < L.rows();
  out.pruned_map = out.pruned ? Eigen::MatrixXd(svd.matrixU().leftCols(rank).transpose() * L) : L;
  out.factor = out.pruned_map * out.row_basis;

  const Eigen::MatrixXd recon = out.factor * out.row_basis.transpose();
  out.reconstruction_error = (out.pruned_map - recon).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, out.pruned_map.cwiseAbs().maxCoeff());
  if (out.reconstruction_error > 1e-10 * scale)
    throw ConstructionError("decompose_linear: reconstruction error " +
                            std::to_string(out.reconstruction_error));
  if (!(out.min_singular > 1e-12 * out.max_singular))
    throw ConstructionError("decompose_linear: factor not invertible on the row space");
  return out;
}

// Audit of the trace obstruction: if X - X contains an orthonormal family
// {e_m} (scaled by alpha_m) then any linear map L = MP into R^k has
// sum_m ||P e_m||^2 <= k, so the measured distortion ||M|| / min_m |L e_m|
// is at least sqrt(n / k).
struct ImpossibilityCandidateAudit {
  double projection_mass = 0.0;     // sum_m ||P e_m||^2
  double min_direction_norm = 0.0;  // min_m |L e_m|
  double factor_norm = 0.0;         // ||M||
  double distortion = 0.0;          // factor_norm / min_direction_norm
  bool trace_ok = false;
  bool distortion_ok = false;
};

struct ImpossibilityCertificate {
  int n_directions = 0;
  int target_dim = 0;
  double bound = 0.0;        // sqrt(n / k)
  double slack = 0.05;
  std::vector<ImpossibilityCandidateAudit> candidates;
  bool all_pass = false;
};

inline ImpossibilityCertificate linear_impossibility_certificate(
    const Eigen::MatrixXd& directions,  // n x ambient, rows orthonormal
    int k, const std::vector<Eigen::MatrixXd>& candidates, double slack = 0.05) {
  const int n = static_cast<int>(directions.rows());
  if (n < 1) throw std::invalid_argument("impossibility: need at least one direction");
  const Eigen::MatrixXd gram = directions * directions.transpose();
  const double err = (gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (err > 1e-9)
    throw std::invalid_argument("impossibility: direction family not orthonormal (gram error " +
                                std::to_string(err) + ")");

  ImpossibilityCertificate cert;
  cert.n_directions = n;
  cert.target_dim = k;
  cert.bound = std::sqrt(static_cast<double>(n) / static_cast<double>(k));
  cert.slack = slack;
  cert.all_pass = true;

  for (const auto& L : candidates) {
    if (L.cols() != directions.cols())
      throw std::invalid_argument("impossibility: candidate ambient dimension mismatch");
    const auto dec = decompose_linear(L);
    ImpossibilityCandidateAudit audit;
    audit.projection_mass = (directions * dec.row_basis).squaredNorm();
    audit.trace_ok = audit.projection_mass <= k + 1e-6;

    audit.min_direction_norm = std::numeric_limits<double>::infinity();
    for (int m = 0; m < n; ++m)
      audit.min_direction_norm =
          std::min(audit.min_direction_norm, (L * directions.row(m).transpose()).norm());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(dec.factor);
    audit.factor_norm = svd.singularValues()[0];
    audit.distortion = audit.min_direction_norm > 0.0
                           ? audit.factor_norm / audit.min_direction_norm
                           : std::numeric_limits<double>::infinity();
    audit.distortion_ok = audit.distortion >= cert.bound * (1.0 - slack);
    cert.all_pass = cert.all_pass && audit.trace_ok && audit.distortion_ok;
    cert.candidates.push_back(audit);
  }
  return cert;
}

}  // namespace abl
