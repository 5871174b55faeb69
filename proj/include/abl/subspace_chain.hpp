#pragma once

#include <Eigen/Dense>
#include <climits>
#include <cmath>
#include <cstring>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "abl/detail/util.hpp"
#include "abl/metric_space.hpp"
#include "abl/nets.hpp"

namespace abl {

// Nested subspaces U_n built from shell nets of a difference set:
// shell Delta_j holds the vectors with 2^{-(j+1)} < ||z|| <= 2^{-j}; every
// shell point ends up within 2^{-(j+3)} of U_j, which forces
// ||P_n z|| >= ||z||/8 whenever ||z|| >= 2^{-n}. That bound is verified
// exhaustively on construction.
class SubspaceChain {
 public:
  struct Level {
    int shell_j = 0;       // dyadic shell index
    int centers_added = 0; // new basis directions contributed by this shell
    int dim = 0;           // cumulative subspace dimension
  };

  const Eigen::MatrixXd& basis() const { return basis_; }  // ambient x rank, orthonormal columns
  const std::vector<Level>& levels() const { return levels_; }
  const std::string& source() const { return source_; }
  int ambient_dim() const { return static_cast<int>(basis_.rows()); }
  int rank() const { return static_cast<int>(basis_.cols()); }
  int level_count() const { return static_cast<int>(levels_.size()); }
  int shell_min() const { return levels_.front().shell_j; }
  int shell_max() const { return levels_.back().shell_j; }

  // Subspace dimension at level n; below the built range the chain is {0},
  // above it no shells remain to add.
  int dim_at(int shell_j) const {
    if (levels_.empty()) throw std::logic_error("subspace chain: empty");
    if (shell_j < shell_min()) return 0;
    if (shell_j > shell_max()) return levels_.back().dim;
    return levels_[shell_j - shell_min()].dim;
  }

  bool has_level(int shell_j) const {
    return !levels_.empty() && shell_j >= shell_min() && shell_j <= shell_max();
  }

  // P_n x for the level containing shell_j.
  Eigen::VectorXd project(int shell_j, const Eigen::VectorXd& x) const {
    const int d = dim_at(shell_j);
    if (d == 0) return Eigen::VectorXd::Zero(x.size());
    const auto B = basis_.leftCols(d);
    return B * (B.transpose() * x);
  }

  Eigen::VectorXd project_complement(int shell_j, const Eigen::VectorXd& x) const {
    return x - project(shell_j, x);
  }

  // Coefficients of x in the accumulated orthonormal basis.
  Eigen::VectorXd coefficients(const Eigen::VectorXd& x) const { return basis_.transpose() * x; }

  std::string digest() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (const auto& lv : levels_) {
      h = detail::hash_combine(h, static_cast<std::uint64_t>(lv.shell_j));
      h = detail::hash_combine(h, static_cast<std::uint64_t>(lv.dim));
    }
    for (int c = 0; c < basis_.cols(); ++c)
      for (int r = 0; r < basis_.rows(); ++r) {
        std::uint64_t bits;
        const double v = basis_(r, c);
        static_assert(sizeof bits == sizeof v);
        std::memcpy(&bits, &v, sizeof bits);
        h = detail::hash_combine(h, bits);
      }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
  }

  // Orthonormality and nesting audit (nesting is structural: level bases are
  // prefixes of one accumulated basis; orthonormality is checked to 1e-10).
  void verify_invariants() const {
    if (basis_.cols() == 0) return;
    Eigen::MatrixXd gram = basis_.transpose() * basis_;
    const double err = (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    if (err > 1e-10)
      throw ConstructionError("subspace chain: basis orthonormality off by " + std::to_string(err));
    int prev = 0;
    for (const auto& lv : levels_) {
      if (lv.dim < prev) throw ConstructionError("subspace chain: dimensions decrease");
      prev = lv.dim;
    }
  }

 private:
  friend SubspaceChain shell_subspaces(const PointSet&, std::optional<ScaleGrid>, const std::string&);
  Eigen::MatrixXd basis_;
  std::vector<Level> levels_;
  std::string source_;
};

// Builds the chain from a euclidean difference set Z (zero vectors skipped).
// Per shell, centers are added greedily while some shell point lies farther
// than 2^{-(j+3)} from the accumulated subspace; each center contributes one
// new orthonormal direction, so the rank never exceeds the ambient dimension.
inline SubspaceChain shell_subspaces(const PointSet& Z, std::optional<ScaleGrid> grid = std::nullopt,
                                     const std::string& source = "X-X") {
  if (Z.norm_kind() != NormKind::euclidean)
    throw std::invalid_argument("shell_subspaces: difference set must carry euclidean coordinates");
  const int m = Z.size();
  const int dim = Z.dim();

  std::vector<double> norms(m);
  std::vector<int> shell(m, INT_MIN);
  double max_norm = 0.0, min_norm = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    norms[i] = Z.norm_of(i);
    if (norms[i] < 1e-300) continue;  // the zero vector (and numerical dust)
    max_norm = std::max(max_norm, norms[i]);
    min_norm = std::min(min_norm, norms[i]);
  }
  if (!(max_norm > 0.0)) throw std::invalid_argument("shell_subspaces: no nonzero vectors");

  ScaleGrid g = grid.value_or(ScaleGrid(static_cast<int>(std::floor(-std::log2(max_norm))),
                                        std::max(static_cast<int>(std::floor(-std::log2(max_norm))),
                                                 static_cast<int>(std::ceil(-std::log2(min_norm))))));
  for (int i = 0; i < m; ++i) {
    if (norms[i] < 1e-300) continue;
    // Vectors coarser than the grid fold into the top shell; the projection
    // bound only improves for them.
    shell[i] = std::max(detail::dyadic_scale(norms[i]), g.j_min);
  }

  SubspaceChain chain;
  chain.source_ = source;
  chain.basis_ = Eigen::MatrixXd(dim, 0);
  Eigen::MatrixXd basis(dim, std::min(m, dim));
  int rank = 0;

  for (int j = g.j_min; j <= g.j_max; ++j) {
    std::vector<int> members;
    for (int i = 0; i < m; ++i)
      if (shell[i] == j) members.push_back(i);

    int added = 0;
    if (!members.empty()) {
      const double rad = std::ldexp(1.0, -(j + 3));
      // Residual distance of each member to the accumulated subspace.
      Eigen::MatrixXd pts(members.size(), dim);
      for (std::size_t t = 0; t < members.size(); ++t) pts.row(t) = Z.coords().row(members[t]);
      Eigen::VectorXd res2 = pts.rowwise().squaredNorm();
      if (rank > 0) res2 -= (pts * basis.leftCols(rank)).rowwise().squaredNorm();
      res2 = res2.cwiseMax(0.0);

      while (true) {
        int best = -1;
        double best_r2 = rad * rad;
        for (std::size_t t = 0; t < members.size(); ++t)
          if (res2[t] > best_r2) {
            best_r2 = res2[t];
            best = static_cast<int>(t);
          }
        if (best < 0 || rank >= basis.cols()) break;
        // Orthonormalize the winner against the basis (twice, for stability).
        Eigen::VectorXd v = pts.row(best).transpose();
        for (int pass = 0; pass < 2; ++pass)
          if (rank > 0) v -= basis.leftCols(rank) * (basis.leftCols(rank).transpose() * v);
        const double vn = v.norm();
        if (vn <= 1e-14 * norms[members[best]]) {
          res2[best] = 0.0;  // numerically dependent; nothing new to add
          continue;
        }
        v /= vn;
        basis.col(rank) = v;
        ++rank;
        ++added;
        res2 -= (pts * v).cwiseAbs2();
        res2 = res2.cwiseMax(0.0);
      }
    }
    chain.levels_.push_back({j, added, rank});
  }
  chain.basis_ = basis.leftCols(rank);
  chain.verify_invariants();

  // Exhaustive projection audit: every z with ||z|| >= 2^{-n} satisfies
  // ||P_n z|| >= ||z|| / 8, for every level n. Failures are construction bugs.
  Eigen::MatrixXd coef = Z.coords() * chain.basis_;  // m x rank
  for (int i = 0; i < m; ++i) {
    if (shell[i] == INT_MIN) continue;
    double acc = 0.0;
    int col = 0;
    for (const auto& lv : chain.levels_) {
      while (col < lv.dim) {
        acc += coef(i, col) * coef(i, col);
        ++col;
      }
      if (norms[i] >= std::ldexp(1.0, -lv.shell_j) * (1.0 - 1e-12)) {
        const double proj = std::sqrt(acc);
        if (proj < norms[i] / 8.0 * (1.0 - 1e-9)) {
          std::ostringstream os;
          os << "shell_subspaces: projection bound failed at level n=" << lv.shell_j << " for row " << i
             << ": ||z||=" << norms[i] << ", ||P_n z||=" << proj;
          throw ConstructionError(os.str());
        }
      }
    }
  }
  return chain;
}

}  // namespace abl
