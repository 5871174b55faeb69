#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "abl/detail/util.hpp"

namespace abl {

// Thrown when a postcondition audit fails during construction; the message
// carries the witness.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NormKind { euclidean, sup };

inline const char* norm_kind_name(NormKind k) {
  return k == NormKind::euclidean ? "euclidean" : "sup";
}

// Relative tolerances used by metric validation and point dedup. Lengths are
// dimensionless, so all tolerances are taken relative to the diameter.
constexpr double kMetricRelTol = 1e-9;
constexpr double kDedupRelTol = 1e-12;

// A finite metric space given by a validated symmetric distance matrix.
class FiniteMetricSpace {
 public:
  static FiniteMetricSpace from_matrix(Eigen::MatrixXd dist,
                                       std::vector<std::string> labels = {}) {
    return FiniteMetricSpace(std::move(dist), std::move(labels), /*validate=*/true);
  }

  // For matrices produced by a norm (triangle inequality holds by
  // construction); symmetry and the zero diagonal are still enforced exactly.
  static FiniteMetricSpace from_induced(Eigen::MatrixXd dist) {
    return FiniteMetricSpace(std::move(dist), {}, /*validate=*/false);
  }

  int size() const { return static_cast<int>(dist_.rows()); }
  double operator()(int i, int j) const { return dist_(i, j); }
  const Eigen::MatrixXd& matrix() const { return dist_; }
  const std::vector<std::string>& labels() const { return labels_; }
  double diam() const { return diam_; }
  double sep_min() const { return sep_min_; }
  int merged_duplicates() const { return merged_; }

  // Full invariant audit (used by tests and by generators on demand).
  void validate() const {
    const int n = size();
    const double tol = kMetricRelTol * std::max(diam_, 1e-300);
    for (int i = 0; i < n; ++i) {
      if (dist_(i, i) != 0.0) throw ConstructionError("metric: nonzero diagonal at " + std::to_string(i));
      for (int j = i + 1; j < n; ++j) {
        if (!(dist_(i, j) >= 0.0))
          throw ConstructionError("metric: negative or NaN entry at (" + std::to_string(i) + "," +
                                  std::to_string(j) + ")");
        if (dist_(i, j) != dist_(j, i))
          throw ConstructionError("metric: asymmetry at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          if (dist_(i, k) > dist_(i, j) + dist_(j, k) + tol) {
            std::ostringstream os;
            os << "metric: triangle violation d(" << i << "," << k << ")=" << dist_(i, k) << " > d(" << i
               << "," << j << ")+d(" << j << "," << k << ")=" << dist_(i, j) + dist_(j, k);
            throw ConstructionError(os.str());
          }
  }

 private:
  FiniteMetricSpace(Eigen::MatrixXd dist, std::vector<std::string> labels, bool validate_full)
      : dist_(std::move(dist)), labels_(std::move(labels)) {
    const int n = static_cast<int>(dist_.rows());
    if (n < 1 || dist_.cols() != n) throw std::invalid_argument("metric: matrix must be square and nonempty");
    if (!labels_.empty() && static_cast<int>(labels_.size()) != n)
      throw std::invalid_argument("metric: label count mismatch");

    double dmax = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (!std::isfinite(dist_(i, j)) || dist_(i, j) < 0.0)
          throw std::invalid_argument("metric: entries must be finite and nonnegative");
        dmax = std::max(dmax, dist_(i, j));
      }

    const double tol = kMetricRelTol * dmax;
    for (int i = 0; i < n; ++i) {
      if (std::abs(dist_(i, i)) > tol)
        throw std::invalid_argument("metric: nonzero diagonal entry at index " + std::to_string(i));
      dist_(i, i) = 0.0;
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (std::abs(dist_(i, j) - dist_(j, i)) > tol)
          throw std::invalid_argument("metric: symmetry violation at (" + std::to_string(i) + "," +
                                      std::to_string(j) + ")");
        const double v = 0.5 * (dist_(i, j) + dist_(j, i));
        dist_(i, j) = v;
        dist_(j, i) = v;
      }

    // Merge duplicate points at load time so sep_min stays positive. Induced
    // metrics skip this: a zero off-diagonal there is a finding (a
    // non-injective image), not an input artifact.
    if (validate_full) {
      const double dup_tol = kDedupRelTol * dmax;
      std::vector<int> keep;
      keep.reserve(n);
      std::vector<char> dropped(n, 0);
      for (int i = 0; i < n; ++i) {
        if (dropped[i]) continue;
        keep.push_back(i);
        for (int j = i + 1; j < n; ++j)
          if (!dropped[j] && dist_(i, j) <= dup_tol) dropped[j] = 1;
      }
      merged_ = n - static_cast<int>(keep.size());
      if (merged_ > 0) {
        Eigen::MatrixXd nd(keep.size(), keep.size());
        std::vector<std::string> nl;
        for (std::size_t a = 0; a < keep.size(); ++a) {
          if (!labels_.empty()) nl.push_back(labels_[keep[a]]);
          for (std::size_t b = 0; b < keep.size(); ++b) nd(a, b) = dist_(keep[a], keep[b]);
        }
        dist_ = std::move(nd);
        labels_ = std::move(nl);
      }
    }

    const int m = size();
    diam_ = 0.0;
    sep_min_ = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        diam_ = std::max(diam_, dist_(i, j));
        sep_min_ = std::min(sep_min_, dist_(i, j));
      }

    if (validate_full && m >= 2) {
      const double ttol = kMetricRelTol * diam_;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k)
            if (dist_(i, k) > dist_(i, j) + dist_(j, k) + ttol) {
              std::ostringstream os;
              os << "metric: triangle violation d(" << i << "," << k << ") > d(" << i << "," << j << ")+d("
                 << j << "," << k << ") by " << dist_(i, k) - dist_(i, j) - dist_(j, k);
              throw std::invalid_argument(os.str());
            }
    }
  }

  Eigen::MatrixXd dist_;
  std::vector<std::string> labels_;
  double diam_ = 0.0;
  double sep_min_ = std::numeric_limits<double>::infinity();
  int merged_ = 0;
};

// Norm of a coordinate vector, guarded against underflow of squared terms.
inline double vector_norm(const Eigen::VectorXd& v, NormKind kind) {
  if (kind == NormKind::sup) return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
  const double s = v.squaredNorm();
  if (s > 1e-280 && std::isfinite(s)) return std::sqrt(s);
  const double amax = v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
  if (amax == 0.0) return 0.0;
  return amax * (v / amax).norm();
}

// An embedded point set: n points in R^dim under the euclidean or sup norm.
class PointSet {
 public:
  PointSet(Eigen::MatrixXd coords, NormKind kind) : coords_(std::move(coords)), kind_(kind) {
    if (coords_.rows() < 1) throw std::invalid_argument("point set: need at least one point");
  }

  int size() const { return static_cast<int>(coords_.rows()); }
  int dim() const { return static_cast<int>(coords_.cols()); }
  NormKind norm_kind() const { return kind_; }
  const Eigen::MatrixXd& coords() const { return coords_; }
  Eigen::VectorXd point(int i) const { return coords_.row(i).transpose(); }

  double norm_of(int i) const { return vector_norm(coords_.row(i).transpose(), kind_); }

  double distance(int i, int j) const {
    return vector_norm((coords_.row(i) - coords_.row(j)).transpose(), kind_);
  }

  double diam() const {
    double d = 0.0;
    for (int i = 0; i < size(); ++i)
      for (int j = i + 1; j < size(); ++j) d = std::max(d, distance(i, j));
    return d;
  }

  FiniteMetricSpace induced_metric() const {
    const int n = size();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double v = distance(i, j);
        d(i, j) = v;
        d(j, i) = v;
      }
    return FiniteMetricSpace::from_induced(std::move(d));
  }

 private:
  Eigen::MatrixXd coords_;
  NormKind kind_;
};

}  // namespace abl
