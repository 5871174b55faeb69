#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "abl/detail/util.hpp"
#include "abl/metric_space.hpp"

namespace abl {

// Kuratowski embedding x -> d(x, .) - d(x0, .), sampled on X itself. The
// sup distance between rows equals the original metric exactly: the sup is
// attained at the other point of the pair.
inline PointSet kuratowski_embed(const FiniteMetricSpace& X, int base_idx) {
  const int n = X.size();
  if (base_idx < 0 || base_idx >= n) throw std::out_of_range("kuratowski_embed: base index out of range");
  Eigen::MatrixXd rows(n, n);
  for (int i = 0; i < n; ++i)
    for (int y = 0; y < n; ++y) rows(i, y) = X(i, y) - X(base_idx, y);
  return PointSet(std::move(rows), NormKind::sup);
}

// All n^2 differences x_i - x_j in the ambient norm of X. Duplicates within
// 1e-12 * diam are merged (first occurrence kept); the zero vector survives
// exactly once.
inline PointSet difference_set(const PointSet& X) {
  const int n = X.size();
  const int dim = X.dim();
  const double diam = X.diam();
  const double tol = std::max(kDedupRelTol * diam, 1e-300);

  // Quantized hashing: coordinates are keyed on round(x / tol) after shifting
  // by the per-column minimum, which keeps keys inside int64 range.
  Eigen::VectorXd shift =
      X.coords().colwise().minCoeff().transpose() - X.coords().colwise().maxCoeff().transpose();

  std::unordered_map<std::uint64_t, std::vector<int>> buckets;
  std::vector<Eigen::VectorXd> kept;
  std::vector<std::vector<std::int64_t>> kept_keys;
  kept.reserve(2 * n);

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd z = (X.coords().row(i) - X.coords().row(j)).transpose();
      std::vector<std::int64_t> key(dim);
      std::uint64_t h = 1469598103934665603ULL;
      for (int c = 0; c < dim; ++c) {
        key[c] = static_cast<std::int64_t>(std::llround((z[c] - shift[c]) / tol));
        h = detail::hash_combine(h, static_cast<std::uint64_t>(key[c]));
      }
      auto& bucket = buckets[h];
      bool dup = false;
      for (int idx : bucket)
        if (kept_keys[idx] == key) {
          dup = true;
          break;
        }
      if (!dup) {
        bucket.push_back(static_cast<int>(kept.size()));
        kept.push_back(std::move(z));
        kept_keys.push_back(std::move(key));
      }
    }

  Eigen::MatrixXd out(kept.size(), dim);
  for (std::size_t r = 0; r < kept.size(); ++r) out.row(r) = kept[r].transpose();
  return PointSet(std::move(out), X.norm_kind());
}

}  // namespace abl
