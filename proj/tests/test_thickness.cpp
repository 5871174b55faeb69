#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>

#include "abl/coloring.hpp"
#include "abl/metric_space.hpp"
#include "abl/net_embedding.hpp"
#include "abl/rng.hpp"
#include "abl/thickness.hpp"

using namespace abl;
using Catch::Approx;

TEST_CASE("points in a 2-plane have thickness bound at most 2") {
  Rng rng(9);
  Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(40, 6);
  for (int i = 0; i < 40; ++i) {
    pts(i, 1) = rng.uniform();
    pts(i, 4) = rng.uniform();
  }
  PointSet X(std::move(pts), NormKind::euclidean);
  auto table = thickness_estimate(X, {0.5, 0.1, 0.01, 1e-6});
  for (const auto& row : table.rows) CHECK(row.dim_bound <= 2);
}

TEST_CASE("orthogonal 2^-m sequence: d(X, 2^-k) is about k") {
  const int n = 20;
  Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(n, n);
  for (int m = 0; m < n; ++m) pts(m, m) = std::ldexp(1.0, -(m + 1));
  PointSet X(std::move(pts), NormKind::euclidean);
  std::vector<double> eps;
  for (int k = 1; k <= 16; ++k) eps.push_back(std::ldexp(1.0, -k));
  auto table = thickness_estimate(X, eps);
  for (std::size_t t = 0; t < eps.size(); ++t) {
    const int k = static_cast<int>(t) + 1;
    // Tail coordinates below eps: at most k + O(1) directions needed.
    CHECK(table.rows[t].dim_bound <= k + 1);
  }
  CHECK(table.tau_valid);
}

TEST_CASE("thickness rejects sup-norm sets and bad epsilons") {
  Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(3, 2);
  CHECK_THROWS_AS(thickness_estimate(PointSet(pts, NormKind::sup), {0.1}), std::invalid_argument);
  CHECK_THROWS_AS(thickness_estimate(PointSet(pts, NormKind::euclidean), {0.0}),
                  std::invalid_argument);
}

TEST_CASE("net embedding images have polylogarithmic thickness growth") {
  Eigen::MatrixXd pts(128, 1);
  for (int i = 0; i < 128; ++i) pts(i, 0) = static_cast<double>(i) / 127.0;
  auto X = PointSet(std::move(pts), NormKind::euclidean).induced_metric();
  auto atlas = build_coloring_atlas(X, atlas_grid_for_embedding(X));
  auto emb = assemble_embedding(X, atlas, 1.0, 0);
  auto image = emb.to_point_set();

  std::vector<double> eps;
  for (int k = 2; k <= 12; ++k) eps.push_back(std::ldexp(1.0, -k));
  auto table = thickness_estimate(image, eps);
  REQUIRE(table.polylog_valid);
  // d(f(X), eps) <= C [log(e + 1/eps)]^{alpha+beta+1} with alpha = beta = 0:
  // the fitted exponent of dim vs log(e + 1/eps) stays near 1, and the
  // explicit constant stays bounded.
  CHECK(table.polylog_exponent <= 2.5);
  double worst_c = 0.0;
  for (const auto& row : table.rows)
    worst_c = std::max(worst_c,
                       row.dim_bound / std::log(std::exp(1.0) + 1.0 / row.epsilon));
  CHECK(worst_c <= 40.0);
}
