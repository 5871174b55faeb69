#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "abl/detail/util.hpp"
#include "abl/metric_space.hpp"
#include "abl/nets.hpp"
#include "abl/subspace_chain.hpp"

namespace abl {

// Graph approximation of X at level k: phi_k(P_k x) = (I - P_k) x on a
// 2^{-k} net, extended off the net by coordinatewise McShane extension. The
// net values are m-Lipschitz thanks to the shell chain's projection bound.
struct LipGraphApprox {
  int level_k = 0;
  int subspace_dim = 0;
  double m = 8.0;
  std::vector<int> net;       // indices into X
  Eigen::MatrixXd net_proj;   // net rows, P_k x
  Eigen::MatrixXd net_perp;   // net rows, (I - P_k) x
  double lipschitz_worst = 0.0;    // worst net-pair ratio (must be <= m)
  double eps_k = 0.0;              // achieved max_x dist(x, graph) upper bound
  double fiber_gap_worst = 0.0;          // max_x ||(I-P)x - phi(Px)||
  double extension_factor = 0.0;   // recorded vector Lipschitz bound m sqrt(dim)

  // Coordinatewise McShane extension, midpoint form: the average of the
  // lower envelope sup(value - m dist) and the upper envelope
  // inf(value + m dist). Both agree with the data on the net and are
  // m-Lipschitz, and the midpoint extends all-zero data to zero.
  Eigen::VectorXd evaluate(const Eigen::VectorXd& u) const {
    const int rows = static_cast<int>(net_proj.rows());
    Eigen::VectorXd dists(rows);
    for (int r = 0; r < rows; ++r) dists[r] = (net_proj.row(r).transpose() - u).norm();
    Eigen::VectorXd out(net_perp.cols());
    for (int c = 0; c < net_perp.cols(); ++c) {
      double upper = std::numeric_limits<double>::infinity();
      double lower = -std::numeric_limits<double>::infinity();
      for (int r = 0; r < rows; ++r) {
        upper = std::min(upper, net_perp(r, c) + m * dists[r]);
        lower = std::max(lower, net_perp(r, c) - m * dists[r]);
      }
      out[c] = 0.5 * (lower + upper);
    }
    return out;
  }
};

inline LipGraphApprox lipschitz_graph_approx(const PointSet& X, const SubspaceChain& chain, double m,
                                             int k) {
  if (X.norm_kind() != NormKind::euclidean)
    throw std::invalid_argument("lipschitz_graph_approx: euclidean point set required");
  if (!(m > 0.0)) throw std::invalid_argument("lipschitz_graph_approx: m must be positive");
  if (!chain.has_level(k) && k < chain.shell_min())
    throw std::invalid_argument("lipschitz_graph_approx: level below chain range");

  LipGraphApprox g;
  g.level_k = k;
  g.subspace_dim = chain.dim_at(k);
  g.m = m;
  g.extension_factor = m * std::sqrt(static_cast<double>(X.dim()));

  const double rad = std::ldexp(1.0, -k);
  const FiniteMetricSpace metric = X.induced_metric();
  const Net net = farthest_point_net(metric, rad);
  g.net = net.centers;

  const int nn = net.size();
  g.net_proj.resize(nn, X.dim());
  g.net_perp.resize(nn, X.dim());
  for (int r = 0; r < nn; ++r) {
    const Eigen::VectorXd x = X.point(net.centers[r]);
    const Eigen::VectorXd p = chain.project(k, x);
    g.net_proj.row(r) = p.transpose();
    g.net_perp.row(r) = (x - p).transpose();
  }

  // The m-Lipschitz property on net pairs; net separation > 2^{-k} puts every
  // pair inside the shell chain's guarantee.
  for (int a = 0; a < nn; ++a)
    for (int b = a + 1; b < nn; ++b) {
      const double dp = (g.net_proj.row(a) - g.net_proj.row(b)).norm();
      const double dq = (g.net_perp.row(a) - g.net_perp.row(b)).norm();
      if (dq > m * dp * (1.0 + 1e-9)) {
        std::ostringstream os;
        os << "lipschitz_graph_approx: net pair (" << net.centers[a] << "," << net.centers[b]
           << ") violates the m-Lipschitz bound: ||dperp||=" << dq << " > m ||dproj||=" << m * dp;
        throw ConstructionError(os.str());
      }
      if (dp > 0.0) g.lipschitz_worst = std::max(g.lipschitz_worst, dq / dp);
    }

  // Graph distance: net points sit on the graph exactly, so the nearest net
  // point bounds dist(x, G); the fiber gap at u = P_k x is recorded alongside.
  g.eps_k = 0.0;
  g.fiber_gap_worst = 0.0;
  for (int i = 0; i < X.size(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (int c : net.centers) nearest = std::min(nearest, metric(i, c));
    const Eigen::VectorXd x = X.point(i);
    const Eigen::VectorXd p = chain.project(k, x);
    const double gap = (x - p - g.evaluate(p)).norm();
    g.fiber_gap_worst = std::max(g.fiber_gap_worst, gap);
    g.eps_k = std::max(g.eps_k, std::min(nearest, gap));
  }
  return g;
}

struct ReverseProjectionReport {
  double m = 0.0;
  int n_offset = 0;    // smallest n with 3 l_m <= 2^n
  double c_m = 0.0;    // 1 / (3 sqrt(1 + m^2))
  double worst_ratio = std::numeric_limits<double>::infinity();
  long pairs_checked = 0;
  bool pass = false;
  int witness_a = -1, witness_b = -1;
};

// Reverse direction of the graph approximation: with l_m^2 = 2 max(1, m^2)
// and n the smallest integer
// with 3 l_m <= 2^n, every pair with ||x - y|| >= 2^{-k} must satisfy
// ||P_{k+n}(x - y)|| >= ||x - y|| / (3 sqrt(1 + m^2)).
inline ReverseProjectionReport reverse_projection_check(const PointSet& X,
                                                        const std::vector<LipGraphApprox>& approx_seq,
                                                        const SubspaceChain& chain, double m) {
  if (m < 0.0) throw std::invalid_argument("reverse_projection_check: m must be >= 0");
  if (approx_seq.empty()) throw std::invalid_argument("reverse_projection_check: empty approx sequence");

  ReverseProjectionReport rep;
  rep.m = m;
  const double l_m = std::sqrt(2.0 * std::max(1.0, m * m));
  int n = 0;
  while (std::ldexp(1.0, n) < 3.0 * l_m) ++n;
  rep.n_offset = n;
  rep.c_m = 1.0 / (3.0 * std::sqrt(1.0 + m * m));
  rep.pass = true;

  for (const auto& g : approx_seq) {
    const int k = g.level_k;
    if (k + n > chain.shell_max())
      throw std::invalid_argument("reverse_projection_check: chain has no level k+n = " +
                                  std::to_string(k + n));
    const double thresh = std::ldexp(1.0, -k);
    for (int a = 0; a < X.size(); ++a)
      for (int b = a + 1; b < X.size(); ++b) {
        const Eigen::VectorXd z = X.point(a) - X.point(b);
        const double zn = z.norm();
        if (zn < thresh) continue;
        ++rep.pairs_checked;
        const double pn = chain.project(k + n, z).norm();
        const double ratio = pn / zn;
        if (ratio < rep.worst_ratio) {
          rep.worst_ratio = ratio;
          rep.witness_a = a;
          rep.witness_b = b;
        }
        if (ratio < rep.c_m * (1.0 - 1e-9)) rep.pass = false;
      }
  }
  return rep;
}

// delta_m table: level k against the subspace dimension that achieves the
// 2^{-k} graph approximation; the dev_m estimate is the fitted slope of
// log delta_m(X, 2^{-k}) against k log 2.
struct DeviationTable {
  double m = 8.0;
  std::vector<LipGraphApprox> graphs;
  double dev_fit = 0.0;
  bool fit_valid = false;
};

inline DeviationTable lipschitz_deviation_table(const PointSet& X, const SubspaceChain& chain, double m,
                                                int k_lo, int k_hi) {
  DeviationTable table;
  table.m = m;
  std::vector<double> xs, ys;
  for (int k = k_lo; k <= k_hi; ++k) {
    table.graphs.push_back(lipschitz_graph_approx(X, chain, m, k));
    const int d = table.graphs.back().subspace_dim;
    if (d > 0) {
      xs.push_back(k * std::log(2.0));
      ys.push_back(std::log(static_cast<double>(d)));
    }
  }
  if (xs.size() >= 2) {
    try {
      table.dev_fit = detail::fit_line(xs, ys).slope;
      table.fit_valid = true;
    } catch (const std::invalid_argument&) {
      table.fit_valid = false;
    }
  }
  return table;
}

}  // namespace abl
