#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>

#include "abl/gallery.hpp"
#include "abl/kuratowski.hpp"
#include "abl/probe_map.hpp"
#include "abl/rng.hpp"

using namespace abl;
using Catch::Approx;

namespace {

PointSet orthogonal_sequence_with_origin(int n) {
  Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(n + 1, n);
  for (int m = 0; m < n; ++m) pts(m, m) = std::ldexp(1.0, -(m + 1));
  return PointSet(std::move(pts), NormKind::euclidean);
}

}  // namespace

TEST_CASE("probe map on a one dimensional chain is a bounded scalar map") {
  Eigen::MatrixXd z(2, 1);
  z << 0, 1;
  auto chain = shell_subspaces(PointSet(std::move(z), NormKind::euclidean));
  auto map = sample_probe_map(chain, 1, 1.0, 42);
  CHECK(map.matrix.rows() == 1);
  CHECK(map.matrix.cols() == 1);
  CHECK(std::abs(map.matrix(0, 0)) <= 1.0 + 1e-12);
}

TEST_CASE("probe maps obey the operator bounds and are seed deterministic") {
  auto X = orthogonal_sequence_with_origin(10);
  auto chain = shell_subspaces(difference_set(X));
  auto a = sample_probe_map(chain, 6, 1.0, 7);
  auto b = sample_probe_map(chain, 6, 1.0, 7);
  auto c = sample_probe_map(chain, 6, 1.0, 8);
  CHECK(a.matrix == b.matrix);  // bitwise identical
  CHECK(a.digest() == b.digest());
  CHECK(a.matrix != c.matrix);
  CHECK(a.max_component_norm() <= 1.0 + 1e-12);
  CHECK(a.spectral_norm() <= std::sqrt(6.0) + 1e-9);
  CHECK_THROWS_AS(sample_probe_map(chain, 0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_probe_map(chain, 4, 0.0, 1), std::invalid_argument);
}

TEST_CASE("small ball measure: exact one dimensional case") {
  Eigen::VectorXd x(1);
  x << 1.0;
  auto est = smallball_probability_mc(1, x, 0.0, 0.1, 100000, 3);
  CHECK(std::abs(est.estimate - 0.1) <= 3.0 * est.std_error);
  CHECK(est.bound_ok);
  CHECK_THROWS_AS(smallball_probability_mc(1, x, 0.0, 0.1, 100, 3), std::invalid_argument);
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS(smallball_probability_mc(2, zero, 0.0, 0.1, 20000, 3), std::invalid_argument);
}

TEST_CASE("small ball measure in dimension three matches the analytic integral") {
  Eigen::VectorXd x(3);
  x << 1.0, 0.0, 0.0;
  // (Omega_2/Omega_3) * 2 * int_0^{0.1} (1 - t^2) dt = 1.5 * (0.1 - 0.001/3)
  const double expected = 1.5 * (0.1 - 0.001 / 3.0);
  auto est = smallball_probability_mc(3, x, 0.0, 0.1, 200000, 11);
  CHECK(std::abs(est.estimate - expected) <= 3.0 * est.std_error);
  CHECK(est.bound_ok);
}

TEST_CASE("shifted slabs are no more likely than centered ones") {
  Eigen::VectorXd x(4);
  x << 0.5, 0.5, 0.5, 0.5;
  auto centered = smallball_probability_mc(4, x, 0.0, 0.1, 100000, 21);
  for (double eta : {0.2, 0.5, 0.9}) {
    auto shifted = smallball_probability_mc(4, x, eta, 0.1, 100000, 22);
    CHECK(shifted.estimate <= centered.estimate + 3.0 * (centered.std_error + shifted.std_error));
  }
}

TEST_CASE("embed_and_audit: generic planar points are injective for most seeds") {
  Rng rng(17);
  Eigen::MatrixXd cloud(50, 2);
  for (int i = 0; i < 50; ++i)
    for (int c = 0; c < 2; ++c) cloud(i, c) = rng.uniform();
  PointSet X(std::move(cloud), NormKind::euclidean);
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= 20; ++s) seeds.push_back(s);
  auto res = embed_and_audit(X, 5, 1.0, 1.0, seeds);
  CHECK(res.injectivity_fraction >= 0.9);
  CHECK(res.reports.size() == 20);
}

TEST_CASE("embed_and_audit on the orthogonal sequence with origin") {
  auto X = orthogonal_sequence_with_origin(14);
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  auto res = embed_and_audit(X, 4, 2.0, 1.0, seeds);
  CHECK(res.injectivity_fraction >= 0.8);
  for (const auto& rep : res.reports) {
    CHECK(rep.gamma == 2.0);
    if (rep.injective) CHECK(rep.min_ratio_down > 0.0);
  }
}

TEST_CASE("scaling the input does not change injectivity verdicts") {
  auto X = orthogonal_sequence_with_origin(8);
  PointSet X2(Eigen::MatrixXd(2.0 * X.coords()), NormKind::euclidean);
  std::vector<std::uint64_t> seeds{3, 9};
  auto a = embed_and_audit(X, 4, 1.0, 1.0, seeds);
  auto b = embed_and_audit(X2, 4, 1.0, 1.0, seeds);
  for (std::size_t i = 0; i < seeds.size(); ++i)
    CHECK(a.reports[i].injective == b.reports[i].injective);
}

TEST_CASE("holder exponent of a probe map stays under the (N-s)/(N-2s) surrogate") {
  // 256-point interval sample, N = 8; with s about 1 the bound is 7/6 plus
  // the finite-sample slack 0.5.
  Eigen::MatrixXd pts(256, 1);
  for (int i = 0; i < 256; ++i) pts(i, 0) = static_cast<double>(i) / 255.0;
  PointSet X(std::move(pts), NormKind::euclidean);
  auto res = embed_and_audit(X, 8, 1.0, 1.0, {1, 2, 3});
  REQUIRE(res.injectivity_fraction == 1.0);
  for (auto& rep : res.reports) {
    holder_exponent_fit(rep);
    CHECK(rep.theta_fit <= 7.0 / 6.0 + 0.5);
    CHECK(rep.theta_fit >= 0.5);
  }
}

TEST_CASE("probe map serialization carries the reproducibility fields") {
  Eigen::MatrixXd z(3, 2);
  z << 0, 0, 1, 0, 0, 1;
  auto chain = shell_subspaces(PointSet(std::move(z), NormKind::euclidean));
  auto map = sample_probe_map(chain, 3, 1.0, 99);
  // Serialized form: include/abl/experiment.hpp to_json.
  CHECK(map.seed == 99);
  CHECK(map.chain_digest == chain.digest());
  CHECK(map.k_max >= 1);
  CHECK(map.c_zeta > 0.0);
  CHECK(map.matrix.rows() == 3);
}

TEST_CASE("lower modulus of the dyadic orthogonal pipeline follows the slog-corrected shape") {
  Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(15, 14);
  for (int m = 0; m < 14; ++m) pts(m + 1, m) = std::ldexp(1.0, -(m + 1));
  PointSet X(std::move(pts), NormKind::euclidean);
  auto res = embed_and_audit(X, 4, 2.0, 1.0, {11});
  const auto& rep = res.reports.front();
  // Regress log(min_out) against log(t / slog(t)^2): slope near 1 with a
  // finite residual (no ground-truth constant claimed).
  std::vector<double> xs, ys;
  for (const auto& b : rep.modulus)
    if (b.min_out > 0.0) {
      xs.push_back(std::log(b.d_upper / std::pow(slog(b.d_upper), 2.0)));
      ys.push_back(std::log(b.min_out));
    }
  REQUIRE(xs.size() >= 6);
  const auto fit = abl::detail::fit_line(xs, ys);
  CHECK(fit.slope >= 0.6);
  CHECK(fit.slope <= 1.4);
  CHECK(std::isfinite(fit.residual_rms));
}

TEST_CASE("metric pipeline stays injective on further gallery kinds") {
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  for (auto kind : {GalleryKind::xstar, GalleryKind::product_example}) {
    GallerySpec s;
    s.kind = kind;
    s.n = 8;
    s.depth = 4;
    auto X = generate(s).induced_metric();
    auto res = embed_and_audit(kuratowski_embed(X, 0), 8, 1.0, 1.0, seeds);
    CHECK(res.injectivity_fraction >= 0.9);
  }
}
