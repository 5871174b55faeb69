#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "abl/coloring.hpp"
#include "abl/metric_space.hpp"

using namespace abl;
using Catch::Approx;

namespace {

FiniteMetricSpace interval_points(int n) {
  Eigen::MatrixXd m(n, 1);
  for (int i = 0; i < n; ++i) m(i, 0) = static_cast<double>(i) / (n - 1);
  return PointSet(std::move(m), NormKind::euclidean).induced_metric();
}

}  // namespace

TEST_CASE("single point atlas has one center and one color per scale") {
  Eigen::MatrixXd one = Eigen::MatrixXd::Zero(1, 1);
  auto X = FiniteMetricSpace::from_matrix(one);
  auto atlas = build_coloring_atlas(X, ScaleGrid(0, 6));
  for (const auto& sc : atlas.scales) {
    CHECK(sc.net.size() == 1);
    CHECK(sc.color_count == 1);
  }
}

TEST_CASE("atlas on 257 equispaced points: color counts bounded by degree") {
  auto X = interval_points(257);
  auto atlas = build_coloring_atlas(X, ScaleGrid(0, 8));
  verify_coloring_atlas(X, atlas);  // zero same-color conflicts, exhaustive

  // At 2^{-j} = 1/32 the conflict radius is 12/32; a 1/32-separated set packs
  // at most 24 further centers in that window, so greedy uses <= 25 colors.
  const auto& sc = atlas.at(5);
  CHECK(sc.color_count <= 25);
  CHECK(sc.color_count >= 2);
}

TEST_CASE("tent features: centers score at least 2, everyone scores at least 1") {
  auto X = interval_points(129);
  auto atlas = build_coloring_atlas(X, ScaleGrid(0, 7));
  for (int j : {2, 4, 6}) {
    const auto& sc = atlas.at(j);
    for (std::size_t a = 0; a < sc.net.centers.size(); ++a) {
      auto f = tent_features(X, atlas, j, sc.net.centers[a]);
      CHECK(f[sc.colors[a]] >= 2.0);
    }
    for (int x = 0; x < X.size(); ++x) {
      auto f = tent_features(X, atlas, j, x);
      CHECK(*std::max_element(f.begin(), f.end()) >= 1.0);
    }
  }
  CHECK_THROWS_AS(tent_features(X, atlas, 99, 0), std::out_of_range);
}

TEST_CASE("tent features of well-separated pairs have disjoint supports") {
  auto X = interval_points(257);
  auto atlas = build_coloring_atlas(X, ScaleGrid(0, 8));
  for (int j : {4, 6, 8}) {
    const double r = std::ldexp(1.0, -j);
    for (int x1 = 0; x1 < X.size(); x1 += 3)
      for (int x2 = x1 + 1; x2 < X.size(); x2 += 5) {
        const double d = X(x1, x2);
        if (!(4.0 * r < d && d <= 8.0 * r)) continue;
        auto f1 = tent_features(X, atlas, j, x1);
        auto f2 = tent_features(X, atlas, j, x2);
        for (std::size_t c = 0; c < f1.size(); ++c) CHECK(f1[c] * f2[c] == 0.0);
      }
  }
}
