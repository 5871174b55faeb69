#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "abl/metric_space.hpp"

namespace abl {

// Dyadic scale range j_min..j_max with radii 2^{-j}. The canonical grid for a
// space spans from (at least) half the diameter down to (at most) sep_min;
// callers may widen it.
struct ScaleGrid {
  int j_min = 0;
  int j_max = 0;

  ScaleGrid() = default;
  ScaleGrid(int lo, int hi) : j_min(lo), j_max(hi) {
    if (lo > hi) throw std::invalid_argument("scale grid: j_min > j_max");
  }

  static ScaleGrid for_space(const FiniteMetricSpace& X) {
    if (X.size() < 2 || !(X.diam() > 0.0))
      throw std::invalid_argument("scale grid: space needs at least two distinct points");
    const int lo = static_cast<int>(std::floor(-std::log2(X.diam())));
    const int hi = static_cast<int>(std::ceil(-std::log2(X.sep_min())));
    return ScaleGrid(lo, std::max(lo, hi));
  }

  double radius(int j) const { return std::ldexp(1.0, -j); }
  bool contains(int j) const { return j >= j_min && j <= j_max; }
  int count() const { return j_max - j_min + 1; }
  ScaleGrid widened(int below, int above) const { return ScaleGrid(j_min - below, j_max + above); }
};

// Maximal epsilon-net: centers pairwise more than epsilon apart, every point
// within epsilon of a center.
struct Net {
  int scale_j = 0;  // meaningful when the net was built for a dyadic scale
  double radius = 0.0;
  std::vector<int> centers;

  int size() const { return static_cast<int>(centers.size()); }
};

namespace detail {

// Greedy farthest-point traversal over a subset of X, starting from the first
// listed index; ties go to the lowest index (scan order).
inline Net greedy_net_subset(const FiniteMetricSpace& X, const std::vector<int>& subset, double epsilon) {
  Net net;
  net.radius = epsilon;
  if (subset.empty()) return net;
  const int m = static_cast<int>(subset.size());
  std::vector<double> dist(m);
  net.centers.push_back(subset[0]);
  for (int t = 0; t < m; ++t) dist[t] = X(subset[0], subset[t]);
  while (true) {
    int best = -1;
    double best_d = epsilon;
    for (int t = 0; t < m; ++t)
      if (dist[t] > best_d) {
        best_d = dist[t];
        best = t;
      }
    if (best < 0) break;
    net.centers.push_back(subset[best]);
    for (int t = 0; t < m; ++t) dist[t] = std::min(dist[t], X(subset[best], subset[t]));
  }
  return net;
}

}  // namespace detail

inline void verify_net(const FiniteMetricSpace& X, const Net& net);

inline Net farthest_point_net(const FiniteMetricSpace& X, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("farthest_point_net: epsilon must be positive");
  std::vector<int> all(X.size());
  for (int i = 0; i < X.size(); ++i) all[i] = i;
  Net net = detail::greedy_net_subset(X, all, epsilon);
  verify_net(X, net);
  return net;
}

// Exhaustive check of the net invariants (separation and maximality).
inline void verify_net(const FiniteMetricSpace& X, const Net& net) {
  for (std::size_t a = 0; a < net.centers.size(); ++a)
    for (std::size_t b = a + 1; b < net.centers.size(); ++b)
      if (!(X(net.centers[a], net.centers[b]) > net.radius))
        throw ConstructionError("net: separation violated between centers " + std::to_string(net.centers[a]) +
                                " and " + std::to_string(net.centers[b]));
  for (int i = 0; i < X.size(); ++i) {
    double d = std::numeric_limits<double>::infinity();
    for (int c : net.centers) d = std::min(d, X(i, c));
    if (!(d <= net.radius))
      throw ConstructionError("net: point " + std::to_string(i) + " uncovered at radius " +
                              std::to_string(net.radius));
  }
}

struct CoveringBounds {
  int n_lower = 0;  // size of a greedy (2 rho)-separated packing, worst ball
  int n_upper = 0;  // size of a greedy rho-net, worst ball
};

// Interval [N_lower, N_upper] bracketing N_X(r, rho) over balls centered at
// data points. The greedy rho-net of a ball is a rho-cover; any rho-cover
// needs at least as many balls as a (2 rho)-separated packing.
inline CoveringBounds covering_number_bounds(const FiniteMetricSpace& X, double r, double rho) {
  if (!(rho > 0.0) || !(rho < r)) throw std::invalid_argument("covering_number_bounds: need 0 < rho < r");
  CoveringBounds out;
  std::vector<int> ball;
  for (int x = 0; x < X.size(); ++x) {
    ball.clear();
    for (int i = 0; i < X.size(); ++i)
      if (X(x, i) <= r) ball.push_back(i);
    const int up = detail::greedy_net_subset(X, ball, rho).size();
    const int lo = detail::greedy_net_subset(X, ball, 2.0 * rho).size();
    out.n_upper = std::max(out.n_upper, up);
    out.n_lower = std::max(out.n_lower, lo);
  }
  return out;
}

struct CoveringProfileRow {
  double r = 0.0;
  double rho = 0.0;
  int n_lower = 0;
  int n_upper = 0;
};

struct CoveringProfile {
  std::vector<CoveringProfileRow> rows;
};

// Profile over all dyadic pairs (r, rho) = (2^{-i}, 2^{-j}) with j >= i + 2.
inline CoveringProfile covering_profile(const FiniteMetricSpace& X, const ScaleGrid& grid) {
  CoveringProfile prof;
  for (int i = grid.j_min; i + 2 <= grid.j_max; ++i)
    for (int j = i + 2; j <= grid.j_max; ++j) {
      const auto b = covering_number_bounds(X, grid.radius(i), grid.radius(j));
      prof.rows.push_back({grid.radius(i), grid.radius(j), b.n_lower, b.n_upper});
    }
  return prof;
}

}  // namespace abl
