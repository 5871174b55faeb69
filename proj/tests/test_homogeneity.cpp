#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>

#include "abl/coloring.hpp"
#include "abl/homogeneity.hpp"
#include "abl/metric_space.hpp"
#include "abl/net_embedding.hpp"

using namespace abl;
using Catch::Approx;

namespace {

FiniteMetricSpace interval_points(int n) {
  Eigen::MatrixXd m(n, 1);
  for (int i = 0; i < n; ++i) m(i, 0) = static_cast<double>(i) / (n - 1);
  return PointSet(std::move(m), NormKind::euclidean).induced_metric();
}

FiniteMetricSpace cantor_points(int depth) {
  const int n = 1 << depth;
  Eigen::MatrixXd m(n, 1);
  for (int i = 0; i < n; ++i) {
    double x = 0.0, w = 1.0 / 3.0;
    for (int b = depth - 1; b >= 0; --b) {
      if ((i >> b) & 1) x += 2.0 * w;
      w /= 3.0;
    }
    m(i, 0) = x;
  }
  return PointSet(std::move(m), NormKind::euclidean).induced_metric();
}

}  // namespace

TEST_CASE("homogeneity fit of the unit interval is near 1") {
  auto X = interval_points(512);
  auto fit = homogeneity_fit(X, ScaleGrid::for_space(X), 0.0, 0.0);
  CHECK(fit.s_hat >= 0.8);
  CHECK(fit.s_hat <= 1.2);
  CHECK(fit.pairs_used >= 6);
  CHECK(fit.residual_rms >= 0.0);
}

TEST_CASE("homogeneity fit of the cantor set tracks log2/log3") {
  auto X = cantor_points(8);
  auto fit = homogeneity_fit(X, ScaleGrid::for_space(X), 0.0, 0.0);
  CHECK(fit.s_hat >= 0.55);
  CHECK(fit.s_hat <= 0.72);
}

TEST_CASE("homogeneity fit needs six pairs") {
  auto X = interval_points(64);
  CHECK_THROWS_AS(homogeneity_fit(X, ScaleGrid(0, 2), 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("single point fits to zero via an explicit grid") {
  Eigen::MatrixXd one = Eigen::MatrixXd::Zero(1, 1);
  auto X = FiniteMetricSpace::from_matrix(one);
  auto fit = homogeneity_fit(X, ScaleGrid(0, 8), 0.0, 0.0);
  CHECK(fit.s_hat == Approx(0.0).margin(1e-12));
  for (const auto& row : fit.profile.rows) CHECK(row.n_upper == 1);
}

TEST_CASE("box dimension of interval and of a point") {
  auto X = interval_points(512);
  auto est = box_dimension_estimate(X);
  CHECK(est.estimate >= 0.85);
  CHECK(est.estimate <= 1.1);

  Eigen::MatrixXd one = Eigen::MatrixXd::Zero(1, 1);
  auto P = FiniteMetricSpace::from_matrix(one);
  CHECK(box_dimension_estimate(P).estimate == 0.0);

  auto tiny = interval_points(4);
  CHECK_THROWS_AS(box_dimension_estimate(tiny), std::invalid_argument);
}

TEST_CASE("image audit: identity and rescaling leave the exponent alone") {
  auto X = interval_points(256);

  auto idrep = image_homogeneity_audit(X, X, 0.0, 0.0, 0.0);
  CHECK(idrep.difference == Approx(0.0).margin(1e-12));
  CHECK(idrep.image_within_slack);

  // d' = 2 d: dimension is invariant under metric rescaling.
  Eigen::MatrixXd scaled = X.matrix() * 2.0;
  auto X2 = FiniteMetricSpace::from_matrix(scaled);
  auto rep = image_homogeneity_audit(X, X2, 0.0, 0.0, 0.0, 0.25);
  CHECK(std::abs(rep.image.s_hat - rep.source.s_hat) <= 0.05);

  Eigen::MatrixXd one = Eigen::MatrixXd::Zero(1, 1);
  auto P = FiniteMetricSpace::from_matrix(one);
  CHECK_THROWS_AS(image_homogeneity_audit(X, P, 0.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("net embedding image keeps the corrected exponent and box dimension") {
  auto X = interval_points(128);
  auto atlas = build_coloring_atlas(X, atlas_grid_for_embedding(X));
  auto emb = assemble_embedding(X, atlas, 1.0, 0);
  auto image = emb.to_point_set().induced_metric();

  // gamma = 1 image audit: s_hat(image) with beta raised by gamma stays
  // within the default slack of s_hat(X).
  auto rep = image_homogeneity_audit(X, image, 0.0, 0.0, 1.0);
  CHECK(rep.image_within_slack);
  CHECK(rep.difference <= 0.25);

  // Box-counting dimension is preserved by almost bi-Lipschitz maps.
  auto bx = box_dimension_estimate(X);
  auto bi = box_dimension_estimate(image);
  CHECK(std::abs(bx.estimate - bi.estimate) <= 0.15);
}
