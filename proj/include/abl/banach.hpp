#pragma once

#include <Eigen/Dense>
#include <climits>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "abl/detail/util.hpp"
#include "abl/metric_space.hpp"
#include "abl/nets.hpp"

namespace abl {

// Sup-norm analogue of the shell chain: U_n is spanned by 2^{-(n+3)} shell
// net centers (nets taken in the sup norm), and dist(z, U_n) <= ||z||/4 for
// every ||z|| >= 2^{-n} is certified through the nearest-center upper bound.
struct BanachQuarterReport {
  struct LevelRow {
    int shell_j = 0;
    int centers = 0;           // cumulative center count through this level
    int dim = 0;               // rank of the center span through this level
    double worst_ratio = 0.0;  // max over qualifying z of dist bound / ||z||
  };
  std::vector<LevelRow> levels;
  bool pass = false;
  double worst_ratio = 0.0;
  int witness = -1;
};

inline BanachQuarterReport banach_quarter_check(const PointSet& Z,
                                                std::optional<ScaleGrid> grid = std::nullopt) {
  if (Z.norm_kind() != NormKind::sup)
    throw std::invalid_argument("banach_quarter_check: expected sup-norm difference vectors");
  const int m = Z.size();

  std::vector<double> norms(m);
  double max_norm = 0.0, min_norm = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    norms[i] = Z.norm_of(i);
    if (norms[i] < 1e-300) continue;
    max_norm = std::max(max_norm, norms[i]);
    min_norm = std::min(min_norm, norms[i]);
  }
  if (!(max_norm > 0.0)) throw std::invalid_argument("banach_quarter_check: no nonzero vectors");

  const ScaleGrid g = grid.value_or(ScaleGrid(static_cast<int>(std::floor(-std::log2(max_norm))),
                                              std::max(static_cast<int>(std::floor(-std::log2(max_norm))),
                                                       static_cast<int>(std::ceil(-std::log2(min_norm))))));

  std::vector<int> shell(m, INT_MIN);
  for (int i = 0; i < m; ++i)
    if (norms[i] >= 1e-300) shell[i] = std::max(detail::dyadic_scale(norms[i]), g.j_min);

  BanachQuarterReport rep;
  rep.pass = true;

  // Distance of every vector to the accumulated center set, maintained
  // incrementally as centers are added.
  std::vector<double> to_centers(m, std::numeric_limits<double>::infinity());
  int center_count = 0;
  Eigen::MatrixXd gs(Z.dim(), std::min(m, Z.dim()));  // rank bookkeeping
  int rank = 0;

  auto add_center = [&](int idx) {
    ++center_count;
    for (int i = 0; i < m; ++i) to_centers[i] = std::min(to_centers[i], Z.distance(idx, i));
    if (rank < gs.cols()) {
      Eigen::VectorXd v = Z.point(idx);
      for (int pass = 0; pass < 2; ++pass)
        if (rank > 0) v -= gs.leftCols(rank) * (gs.leftCols(rank).transpose() * v);
      const double vn = v.norm();
      if (vn > 1e-12 * norms[idx]) {
        gs.col(rank) = v / vn;
        ++rank;
      }
    }
  };

  for (int j = g.j_min; j <= g.j_max; ++j) {
    std::vector<int> members;
    for (int i = 0; i < m; ++i)
      if (shell[i] == j) members.push_back(i);

    if (!members.empty()) {
      // Greedy farthest-point 2^{-(j+3)}-net inside the shell.
      const double rad = std::ldexp(1.0, -(j + 3));
      std::vector<double> dist(members.size(), std::numeric_limits<double>::infinity());
      while (true) {
        int best = -1;
        double best_d = rad;
        for (std::size_t t = 0; t < members.size(); ++t)
          if (dist[t] > best_d) {
            best_d = dist[t];
            best = static_cast<int>(t);
          }
        if (best < 0) break;
        const int idx = members[best];
        for (std::size_t t = 0; t < members.size(); ++t)
          dist[t] = std::min(dist[t], Z.distance(idx, members[t]));
        add_center(idx);
      }
    }

    // Quarter bound for every z with ||z|| >= 2^{-j}.
    BanachQuarterReport::LevelRow row;
    row.shell_j = j;
    row.centers = center_count;
    row.dim = rank;
    for (int i = 0; i < m; ++i) {
      if (shell[i] == INT_MIN || !(norms[i] >= std::ldexp(1.0, -j) * (1.0 - 1e-12))) continue;
      const double ratio = to_centers[i] / norms[i];
      row.worst_ratio = std::max(row.worst_ratio, ratio);
      if (ratio > 0.25 * (1.0 + 1e-9)) {
        rep.pass = false;
        rep.witness = i;
      }
    }
    rep.worst_ratio = std::max(rep.worst_ratio, row.worst_ratio);
    rep.levels.push_back(row);
  }
  if (!rep.pass) {
    std::ostringstream os;
    os << "banach_quarter_check: dist(z, U_n) > ||z||/4 for row " << rep.witness << " (ratio "
       << rep.worst_ratio << ")";
    throw ConstructionError(os.str());
  }
  return rep;
}

}  // namespace abl
