#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "abl/detail/util.hpp"
#include "abl/nets.hpp"

namespace abl {

// Per-scale coloring: centers of the maximal 2^{-j} net colored so that any
// two centers closer than 12 * 2^{-j} get different colors.
struct ScaleColoring {
  Net net;
  std::vector<int> colors;  // per center, 0-based
  int color_count = 0;
  double conflict_radius = 0.0;
};

struct ColoringAtlas {
  ScaleGrid grid;
  std::vector<ScaleColoring> scales;  // index 0 corresponds to grid.j_min

  const ScaleColoring& at(int j) const {
    if (!grid.contains(j)) throw std::out_of_range("coloring atlas: scale not in grid");
    return scales[j - grid.j_min];
  }
};

inline void verify_coloring_atlas(const FiniteMetricSpace& X, const ColoringAtlas& atlas);

// Greedy first-fit coloring in net-construction order; M_j <= 1 + max degree
// of the conflict graph.
inline ColoringAtlas build_coloring_atlas(const FiniteMetricSpace& X, const ScaleGrid& grid) {
  ColoringAtlas atlas;
  atlas.grid = grid;
  atlas.scales.reserve(grid.count());
  for (int j = grid.j_min; j <= grid.j_max; ++j) {
    ScaleColoring sc;
    sc.net = farthest_point_net(X, grid.radius(j));
    sc.net.scale_j = j;
    sc.conflict_radius = 12.0 * grid.radius(j);
    const int m = sc.net.size();
    sc.colors.assign(m, -1);
    std::vector<char> used;
    for (int a = 0; a < m; ++a) {
      used.assign(m, 0);
      for (int b = 0; b < a; ++b)
        if (X(sc.net.centers[a], sc.net.centers[b]) < sc.conflict_radius) used[sc.colors[b]] = 1;
      int c = 0;
      while (used[c]) ++c;
      sc.colors[a] = c;
      sc.color_count = std::max(sc.color_count, c + 1);
    }
    atlas.scales.push_back(std::move(sc));
  }
  verify_coloring_atlas(X, atlas);
  return atlas;
}

// Exhaustive audit of the defining property: no conflicting pair shares a
// color, and M_j equals the number of distinct colors used.
inline void verify_coloring_atlas(const FiniteMetricSpace& X, const ColoringAtlas& atlas) {
  for (const auto& sc : atlas.scales) {
    std::vector<char> seen(sc.color_count, 0);
    for (std::size_t a = 0; a < sc.net.centers.size(); ++a) {
      seen[sc.colors[a]] = 1;
      for (std::size_t b = a + 1; b < sc.net.centers.size(); ++b)
        if (X(sc.net.centers[a], sc.net.centers[b]) < sc.conflict_radius &&
            sc.colors[a] == sc.colors[b])
          throw ConstructionError("coloring: conflict between centers " +
                                  std::to_string(sc.net.centers[a]) + " and " +
                                  std::to_string(sc.net.centers[b]) + " at scale " +
                                  std::to_string(sc.net.scale_j));
    }
    for (int c = 0; c < sc.color_count; ++c)
      if (!seen[c]) throw ConstructionError("coloring: unused color index");
  }
}

// Tent feature vector at scale j: coordinate per color c,
//   sum over centers a_i with color c of max(2 - 2^j d(x, a_i), 0).
// Support comes only from centers within 2 * 2^{-j}; net maximality puts some
// center within 2^{-j}, so at least one coordinate is >= 1.
inline std::vector<double> tent_features(const FiniteMetricSpace& X, const ColoringAtlas& atlas, int j,
                                         int x) {
  const ScaleColoring& sc = atlas.at(j);
  const double scale = std::ldexp(1.0, j);  // 2^j
  std::vector<double> out(sc.color_count, 0.0);
  for (std::size_t a = 0; a < sc.net.centers.size(); ++a) {
    const double v = 2.0 - scale * X(x, sc.net.centers[a]);
    if (v > 0.0) out[sc.colors[a]] += v;
  }
  return out;
}

}  // namespace abl
