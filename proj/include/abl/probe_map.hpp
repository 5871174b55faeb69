#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "abl/distortion.hpp"
#include "abl/kuratowski.hpp"
#include "abl/metric_space.hpp"
#include "abl/rng.hpp"
#include "abl/subspace_chain.hpp"

namespace abl {

// A sampled linear map H -> R^N whose component functionals live in the probe
// set: phi_n = C_zeta sum_k k^{-1-zeta} phi_nk with phi_nk uniform in the unit
// ball of U_k. Every component has norm <= 1, so the map is sqrt(N)-Lipschitz.
struct ProbeMap {
  int target_dim = 0;
  double zeta = 1.0;
  int k_max = 0;
  double c_zeta = 1.0;
  std::uint64_t seed = 0;
  std::string chain_digest;
  Eigen::MatrixXd matrix;  // target_dim x ambient

  Eigen::MatrixXd apply(const Eigen::MatrixXd& points_rows) const {
    return points_rows * matrix.transpose();
  }

  double max_component_norm() const {
    double w = 0.0;
    for (int r = 0; r < matrix.rows(); ++r) w = std::max(w, matrix.row(r).norm());
    return w;
  }

  double spectral_norm() const {
    if (matrix.size() == 0) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix);
    return svd.singularValues()[0];
  }

  std::string digest() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (int r = 0; r < matrix.rows(); ++r)
      for (int c = 0; c < matrix.cols(); ++c) {
        std::uint64_t bits;
        const double v = matrix(r, c);
        std::memcpy(&bits, &v, sizeof bits);
        h = detail::hash_combine(h, bits);
      }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
  }
};

// Draws one probe map. phi_nk is sampled uniformly from the unit ball of U_k
// (gaussian direction times u^{1/d_k}); the draw order is fixed so a seed
// pins the map bit-for-bit.
inline ProbeMap sample_probe_map(const SubspaceChain& chain, int N, double zeta, std::uint64_t seed) {
  if (N < 1) throw std::invalid_argument("sample_probe_map: target dimension must be >= 1");
  if (!(zeta > 0.0)) throw std::invalid_argument("sample_probe_map: zeta must be positive");
  if (chain.level_count() == 0 || chain.rank() == 0)
    throw std::invalid_argument("sample_probe_map: empty chain");

  // Levels with a nonempty subspace, in chain order, indexed k = 1..k_max.
  std::vector<int> level_dims;
  for (const auto& lv : chain.levels())
    if (lv.dim > 0) level_dims.push_back(lv.dim);
  const int k_max = static_cast<int>(level_dims.size());

  double weight_sum = 0.0;
  for (int k = 1; k <= k_max; ++k) weight_sum += std::pow(k, -1.0 - zeta);
  const double c_zeta = 1.0 / weight_sum;

  ProbeMap map;
  map.target_dim = N;
  map.zeta = zeta;
  map.k_max = k_max;
  map.c_zeta = c_zeta;
  map.seed = seed;
  map.chain_digest = chain.digest();
  map.matrix = Eigen::MatrixXd::Zero(N, chain.ambient_dim());

  Rng rng(seed);
  for (int n = 0; n < N; ++n) {
    Eigen::VectorXd phi = Eigen::VectorXd::Zero(chain.ambient_dim());
    for (int k = 1; k <= k_max; ++k) {
      const int d_k = level_dims[k - 1];
      const Eigen::VectorXd ball = rng.unit_ball(d_k);
      // Coefficients are with respect to the first d_k basis columns.
      phi += std::pow(k, -1.0 - zeta) * (chain.basis().leftCols(d_k) * ball);
    }
    map.matrix.row(n) = (c_zeta * phi).transpose();
  }

  // Operator bound invariant.
  const double comp = map.max_component_norm();
  if (comp > 1.0 + 1e-9)
    throw ConstructionError("sample_probe_map: component norm " + std::to_string(comp) + " exceeds 1");
  if (map.spectral_norm() > std::sqrt(static_cast<double>(N)) + 1e-9)
    throw ConstructionError("sample_probe_map: Lipschitz bound sqrt(N) violated");
  return map;
}

struct SmallBallEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  double bound = 0.0;  // 2 sqrt(j) epsilon / |x|
  bool bound_ok = false;
  int trials = 0;
};

// Monte-Carlo estimate of lambda_j{ w in B_j : |eta + (w . x)| < eps } and a
// check against the small-ball bound c j^{1/2} eps |x|^{-1} with c = 2 (the
// volume-ratio route: Omega_{j-1}/Omega_j <= sqrt(j)).
inline SmallBallEstimate smallball_probability_mc(int j, const Eigen::VectorXd& x, double eta,
                                                  double epsilon, int trials, std::uint64_t seed) {
  if (j < 1 || x.size() != j) throw std::invalid_argument("smallball: x must live in R^j");
  if (trials < 10000) throw std::invalid_argument("smallball: need at least 1e4 trials");
  const double xn = x.norm();
  if (!(xn > 0.0)) throw std::invalid_argument("smallball: zero vector");

  Rng rng(seed);
  long hits = 0;
  for (int t = 0; t < trials; ++t) {
    const Eigen::VectorXd w = rng.unit_ball(j);
    if (std::abs(eta + w.dot(x)) < epsilon) ++hits;
  }
  SmallBallEstimate out;
  out.trials = trials;
  out.estimate = static_cast<double>(hits) / trials;
  out.std_error = std::sqrt(std::max(out.estimate * (1.0 - out.estimate), 1e-12) / trials);
  out.bound = 2.0 * std::sqrt(static_cast<double>(j)) * epsilon / xn;
  out.bound_ok = out.estimate <= out.bound + 3.0 * out.std_error;
  return out;
}

// End-to-end sampling audit of the prevalence statement: difference set ->
// shell chain -> one probe map per seed -> distortion report against the
// input metric. The injectivity fraction is the sampling surrogate for
// "prevalent".
struct EmbedAuditResult {
  std::vector<DistortionReport> reports;
  double injectivity_fraction = 0.0;
  int chain_rank = 0;
  int difference_count = 0;
};

inline EmbedAuditResult embed_and_audit(const PointSet& X, int N, double gamma, double zeta,
                                        const std::vector<std::uint64_t>& seeds) {
  if (N < 1) throw std::invalid_argument("embed_and_audit: target dimension must be >= 1");
  if (seeds.empty()) throw std::invalid_argument("embed_and_audit: need at least one seed");

  const PointSet diffs_native = difference_set(X);
  // The chain machinery is euclidean; sup-norm inputs keep their coordinates
  // and the audit below still compares against the native metric.
  const PointSet diffs(diffs_native.coords(), NormKind::euclidean);
  const SubspaceChain chain = shell_subspaces(diffs);
  const FiniteMetricSpace reference = X.induced_metric();

  EmbedAuditResult out;
  out.chain_rank = chain.rank();
  out.difference_count = diffs.size();
  int good = 0;
  for (const auto seed : seeds) {
    const ProbeMap map = sample_probe_map(chain, N, zeta, seed);
    PointSet image(map.apply(X.coords()), NormKind::euclidean);
    DistortionReport rep = audit_distortion(image.induced_metric(), reference, gamma);
    rep.seed = seed;
    rep.map_digest = map.digest();
    if (rep.injective && rep.finite_l()) ++good;
    out.reports.push_back(std::move(rep));
  }
  out.injectivity_fraction = static_cast<double>(good) / static_cast<double>(seeds.size());
  return out;
}

}  // namespace abl
