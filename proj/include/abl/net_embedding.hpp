#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "abl/coloring.hpp"
#include "abl/detail/util.hpp"
#include "abl/nets.hpp"

namespace abl {

// Block range for the truncated series: j runs over
// [floor(-log2 diam) - 1, ceil(-log2 sep_min) + 3]; block j reads tent
// features at scale j + 3.
inline std::pair<int, int> embedding_block_range(const FiniteMetricSpace& X) {
  if (X.size() < 2 || !(X.diam() > 0.0))
    throw std::invalid_argument("embedding_block_range: need two distinct points");
  const int lo = static_cast<int>(std::floor(-std::log2(X.diam()))) - 1;
  const int hi = static_cast<int>(std::ceil(-std::log2(X.sep_min()))) + 3;
  return {lo, hi};
}

inline ScaleGrid atlas_grid_for_embedding(const FiniteMetricSpace& X) {
  const auto [lo, hi] = embedding_block_range(X);
  return ScaleGrid(lo + 3, hi + 3);
}

// The assembled weighted block embedding. Block j occupies a coordinate range
// of width M_{j+3} and holds (tent_{j+3}(x) - tent_{j+3}(a)) scaled by
// 2^{-j} / ((1+|j|)^delta M_{j+3}).
struct NetEmbedding {
  int base_index = 0;
  double delta = 1.0;
  int j_lo = 0;
  int j_hi = 0;
  std::vector<int> block_offset;   // per block, start coordinate
  std::vector<int> block_width;    // per block, M_{j+3}
  std::vector<double> block_coeff; // per block, series weight
  int dimension = 0;

  // Sparse coordinates: per point, (coordinate, value) pairs.
  std::vector<std::vector<std::pair<int, double>>> sparse;

  double b_emp = 0.0;       // audited per-block Lipschitz constant
  double tail_bound = 0.0;  // recorded truncation error of the series

  int block_count() const { return j_hi - j_lo + 1; }

  Eigen::MatrixXd to_dense() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(sparse.size(), dimension);
    for (std::size_t i = 0; i < sparse.size(); ++i)
      for (const auto& [c, v] : sparse[i]) m(i, c) = v;
    return m;
  }

  PointSet to_point_set() const { return PointSet(to_dense(), NormKind::euclidean); }
};

// Report for the (a1)/(a2) block properties:
//   (a1) pairs at their dyadic scale l have block-l distance >= A = 1;
//   (a2) every block distance is <= B M_{j+3} min(1, 2^j d).
struct BlockPropertyReport {
  double a_constant = 1.0;
  double a_worst = 0.0;   // smallest block-l distance seen at the pair scale
  double b_emp = 0.0;     // smallest feasible B
  bool a1_pass = false;
  long pairs_checked = 0;
  int scales_checked = 0;
};

namespace detail_embed {

inline double block_distance(const std::vector<double>& u, const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t c = 0; c < u.size(); ++c) s += (u[c] - v[c]) * (u[c] - v[c]);
  return std::sqrt(s);
}

}  // namespace detail_embed

inline BlockPropertyReport verify_block_properties(const ColoringAtlas& atlas, const FiniteMetricSpace& X) {
  const auto [j_lo, j_hi] = embedding_block_range(X);
  BlockPropertyReport rep;
  rep.a_worst = std::numeric_limits<double>::infinity();
  rep.a1_pass = true;

  const int n = X.size();
  // Tent features per (scale, point), computed once.
  std::vector<std::vector<std::vector<double>>> feats(j_hi - j_lo + 1);
  for (int j = j_lo; j <= j_hi; ++j) {
    feats[j - j_lo].resize(n);
    for (int x = 0; x < n; ++x) feats[j - j_lo][x] = tent_features(X, atlas, j + 3, x);
  }

  for (int x1 = 0; x1 < n; ++x1)
    for (int x2 = x1 + 1; x2 < n; ++x2) {
      const double d = X(x1, x2);
      if (!(d > 0.0)) continue;
      const int l = detail::dyadic_scale(d);
      ++rep.pairs_checked;
      for (int j = j_lo; j <= j_hi; ++j) {
        const double dist =
            detail_embed::block_distance(feats[j - j_lo][x1], feats[j - j_lo][x2]);
        const int mj = atlas.at(j + 3).color_count;
        const double cap = mj * std::min(1.0, std::ldexp(1.0, j) * d);
        if (cap > 0.0) rep.b_emp = std::max(rep.b_emp, dist / cap);
        if (j == l) {
          rep.a_worst = std::min(rep.a_worst, dist);
          if (dist < rep.a_constant * (1.0 - 1e-9)) rep.a1_pass = false;
        }
      }
    }
  rep.scales_checked = j_hi - j_lo + 1;
  return rep;
}

// Assembles the truncated series embedding. The base point maps to the zero
// vector exactly; delta must exceed 1/2 for the series constant to converge.
inline NetEmbedding assemble_embedding(const FiniteMetricSpace& X, const ColoringAtlas& atlas,
                                       double delta, int base_idx) {
  if (!(delta > 0.5)) throw std::invalid_argument("assemble_embedding: delta must exceed 1/2");
  if (base_idx < 0 || base_idx >= X.size())
    throw std::out_of_range("assemble_embedding: base index out of range");
  const auto [j_lo, j_hi] = embedding_block_range(X);
  for (int j = j_lo; j <= j_hi; ++j)
    if (!atlas.grid.contains(j + 3))
      throw std::invalid_argument("assemble_embedding: atlas must cover scale " + std::to_string(j + 3));

  NetEmbedding emb;
  emb.base_index = base_idx;
  emb.delta = delta;
  emb.j_lo = j_lo;
  emb.j_hi = j_hi;

  int offset = 0;
  for (int j = j_lo; j <= j_hi; ++j) {
    const int width = atlas.at(j + 3).color_count;
    const double coeff =
        std::ldexp(1.0, -j) / (std::pow(1.0 + std::abs(j), delta) * width);
    emb.block_offset.push_back(offset);
    emb.block_width.push_back(width);
    emb.block_coeff.push_back(coeff);
    offset += width;
  }
  emb.dimension = offset;

  const int n = X.size();
  emb.sparse.resize(n);
  std::vector<std::vector<double>> base_feats(emb.block_count());
  for (int j = j_lo; j <= j_hi; ++j) base_feats[j - j_lo] = tent_features(X, atlas, j + 3, base_idx);

  for (int x = 0; x < n; ++x) {
    for (int j = j_lo; j <= j_hi; ++j) {
      const int b = j - j_lo;
      const auto fx = tent_features(X, atlas, j + 3, x);
      for (int c = 0; c < emb.block_width[b]; ++c) {
        const double v = emb.block_coeff[b] * (fx[c] - base_feats[b][c]);
        if (v != 0.0) emb.sparse[x].emplace_back(emb.block_offset[b] + c, v);
      }
    }
  }

  // Tail of the series beyond j_hi, using the audited per-block constant:
  // sum_{j > j_hi} B_emp 2^{-j} / (1+|j|)^delta.
  const auto block_rep = verify_block_properties(atlas, X);
  emb.b_emp = block_rep.b_emp;
  double tail = 0.0;
  for (int j = j_hi + 1; j <= j_hi + 200; ++j)
    tail += std::ldexp(1.0, -j) / std::pow(1.0 + std::abs(j), delta);
  emb.tail_bound = block_rep.b_emp * tail;
  return emb;
}

}  // namespace abl
