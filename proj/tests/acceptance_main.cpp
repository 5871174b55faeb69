// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exit status is nonzero if any
// criterion fails.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "abl/banach.hpp"
#include "abl/coloring.hpp"
#include "abl/distortion.hpp"
#include "abl/experiment.hpp"
#include "abl/gallery.hpp"
#include "abl/homogeneity.hpp"
#include "abl/kuratowski.hpp"
#include "abl/linear_maps.hpp"
#include "abl/lipschitz_graph.hpp"
#include "abl/net_embedding.hpp"
#include "abl/probe_map.hpp"
#include "abl/rng.hpp"
#include "abl/slog.hpp"
#include "abl/subspace_chain.hpp"

using namespace abl;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

struct Criterion {
  int id;
  std::string name;
  Clock::time_point start = Clock::now();
  bool ok = true;
  double budget_s = 0.0;
  std::string detail;

  Criterion(int id_, std::string name_, double budget) : id(id_), name(std::move(name_)), budget_s(budget) {}

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }

  void finish() {
    const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    if (budget_s > 0.0 && elapsed > budget_s) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += "over time budget";
    }
    std::printf("[%s] criterion %d: %s (%.2fs of %.0fs budget)%s%s\n", ok ? "PASS" : "FAIL", id,
                name.c_str(), elapsed, budget_s, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

FiniteMetricSpace random_metric(int n, int dim, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m(n, dim);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < dim; ++c) m(i, c) = rng.uniform();
  return PointSet(std::move(m), NormKind::euclidean).induced_metric();
}

FiniteMetricSpace interval_metric(int n) {
  GallerySpec s;
  s.kind = GalleryKind::interval;
  s.n = n;
  return generate(s).induced_metric();
}

// --------------------------------------------------------------------------
// 1. slog suite: p1..p4 on a 2000-point log grid over [1e-9, 1e9].
void criterion1() {
  Criterion c(1, "slog properties p1-p4 on the 2000-point log grid", 1.0);
  const auto grid = log_grid(1e-9, 1e9, 2000);

  const auto p1 = slog_property_audit(SlogProperty::p1, {}, grid);
  c.require(p1.pass, "p1 sandwich violated");
  for (double L : {0.5, 3.0}) {
    const auto p2 = slog_property_audit(SlogProperty::p2, {.L = L}, grid);
    c.require(p2.pass && p2.lower > 0.0 && std::isfinite(p2.upper),
              "p2 quotient degenerate at L=" + std::to_string(L));
  }
  for (double g : {1.0, 2.0}) {
    const auto p3 = slog_property_audit(SlogProperty::p3, {.gamma = g}, grid);
    c.require(p3.pass && p3.lower > 0.0 && std::isfinite(p3.upper),
              "p3 quotient degenerate at gamma=" + std::to_string(g));
  }
  // p4 with sigma = 1/(4 log 2) exactly, at every grid point.
  const double sigma = 1.0 / (4.0 * std::log(2.0));
  const auto p4 = slog_property_audit(SlogProperty::p4, {}, grid);
  c.require(p4.pass, "p4 audit failed");
  c.require(p4.lower >= sigma * (1.0 - 1e-12), "p4 quotient dips below sigma");
  c.finish();
}

// --------------------------------------------------------------------------
// 2. Kuratowski isometry on 10 random 64-point metric spaces.
void criterion2() {
  Criterion c(2, "Kuratowski isometry exact on 10 random 64-point spaces", 1.0);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto X = random_metric(64, 6, seed);
    const auto emb = kuratowski_embed(X, 0);
    double worst = 0.0;
    for (int i = 0; i < X.size(); ++i)
      for (int j = i + 1; j < X.size(); ++j)
        worst = std::max(worst, std::abs(emb.distance(i, j) - X(i, j)));
    c.require(worst <= 1e-12 * X.diam(), "deviation " + std::to_string(worst) + " at seed " +
                                             std::to_string(seed));
  }
  c.finish();
}

// --------------------------------------------------------------------------
// 3. Net embedding: (a1) with A = 1 and (a2) exhaustively; L stable in n.
void criterion3() {
  Criterion c(3, "net embedding block properties and stable L on [0,1]", 60.0);
  const double kA2Cap = 16.0;  // analytic bound for the (a2) form

  auto run_once = [&](int n) {
    const auto X = interval_metric(n);
    const auto atlas = build_coloring_atlas(X, atlas_grid_for_embedding(X));
    const auto blocks = verify_block_properties(atlas, X);
    c.require(blocks.a1_pass, "(a1) failed at n=" + std::to_string(n));
    c.require(blocks.a_worst >= 1.0, "(a1) constant below 1 at n=" + std::to_string(n));
    c.require(blocks.b_emp <= kA2Cap, "(a2) constant above cap at n=" + std::to_string(n));
    const auto emb = assemble_embedding(X, atlas, 1.0, 0);
    const auto rep = audit_distortion(emb.to_point_set().induced_metric(), X, 1.0);
    c.require(rep.injective && rep.finite_l(), "distortion not finite at n=" + std::to_string(n));
    return rep.l_fit;
  };
  const double l256 = run_once(256);
  const double l512 = run_once(512);
  c.require(std::abs(l512 / l256 - 1.0) <= 0.10,
            "L_fit drifts " + std::to_string(l512 / l256) + " between n=256 and n=512");
  c.finish();
}

// --------------------------------------------------------------------------
// 4. Shell chain projection bound on gallery and random data.
void criterion4() {
  Criterion c(4, "shell chain projection bound ||P_n z|| >= ||z||/8", 30.0);
  try {
    GallerySpec s;
    s.kind = GalleryKind::orthogonal_sequence;
    s.n = 14;
    const auto Z = difference_set(generate(s));
    const auto chain = shell_subspaces(Z);  // throws on any violation
    // Explicit recheck over every level and difference vector.
    for (int n = chain.shell_min(); n <= chain.shell_max(); ++n)
      for (int i = 0; i < Z.size(); ++i) {
        const double zn = Z.norm_of(i);
        if (zn < std::ldexp(1.0, -n) || zn < 1e-300) continue;
        c.require(chain.project(n, Z.point(i)).norm() >= zn / 8.0 * (1.0 - 1e-9),
                  "orthogonal-sequence violation at level " + std::to_string(n));
      }
  } catch (const ConstructionError& e) {
    c.require(false, e.what());
  }
  try {
    Rng rng(404);
    Eigen::MatrixXd cloud(64, 8);
    for (int i = 0; i < 64; ++i)
      for (int k = 0; k < 8; ++k) cloud(i, k) = rng.uniform();
    const auto Z = difference_set(PointSet(std::move(cloud), NormKind::euclidean));
    const auto chain = shell_subspaces(Z);
    for (int n = chain.shell_min(); n <= chain.shell_max(); ++n)
      for (int i = 0; i < Z.size(); ++i) {
        const double zn = Z.norm_of(i);
        if (zn < std::ldexp(1.0, -n) || zn < 1e-300) continue;
        c.require(chain.project(n, Z.point(i)).norm() >= zn / 8.0 * (1.0 - 1e-9),
                  "random-cloud violation at level " + std::to_string(n));
      }
  } catch (const ConstructionError& e) {
    c.require(false, e.what());
  }
  c.finish();
}

// --------------------------------------------------------------------------
// 5. Small-ball Monte Carlo against the 2 sqrt(j) eps/|x| bound.
void criterion5() {
  Criterion c(5, "small-ball Monte Carlo within the volume-ratio bound", 30.0);
  std::uint64_t seed = 1000;
  for (int j : {1, 3, 8, 16}) {
    for (double eps : {0.02, 0.1, 0.3}) {
      Eigen::VectorXd x = Eigen::VectorXd::Zero(j);
      x[0] = 1.0;
      const auto est = smallball_probability_mc(j, x, 0.0, eps, 100000, seed++);
      c.require(est.bound_ok, "bound exceeded at j=" + std::to_string(j) +
                                  " eps=" + std::to_string(eps));
      if (j == 1)
        c.require(std::abs(est.estimate - eps) <= 3.0 * est.std_error,
                  "1-d exact value missed at eps=" + std::to_string(eps));
    }
  }
  c.finish();
}

// --------------------------------------------------------------------------
// 6. Prevalence surrogate: metric-pipeline on five gallery spaces.
void criterion6() {
  Criterion c(6, "metric-pipeline injectivity and monotone lower moduli", 300.0);
  std::vector<std::pair<std::string, FiniteMetricSpace>> spaces;
  {
    GallerySpec s;
    s.kind = GalleryKind::interval;
    s.n = 129;
    spaces.emplace_back("interval129", generate(s).induced_metric());
    s.n = 255;
    spaces.emplace_back("interval255", generate(s).induced_metric());
    s.kind = GalleryKind::cantor;
    s.depth = 6;
    spaces.emplace_back("cantor6", generate(s).induced_metric());
    s.depth = 7;
    spaces.emplace_back("cantor7", generate(s).induced_metric());
    s.depth = 8;
    spaces.emplace_back("cantor8", generate(s).induced_metric());
  }
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= 20; ++s) seeds.push_back(s);

  for (const auto& [name, X] : spaces) {
    const auto kur = kuratowski_embed(X, 0);
    const auto res = embed_and_audit(kur, 8, 1.0, 1.0, seeds);
    c.require(res.injectivity_fraction >= 0.9,
              name + " injectivity " + std::to_string(res.injectivity_fraction));
    for (const auto& rep : res.reports) {
      double prev = -1.0;
      for (const auto& bin : rep.modulus) {  // ordered by increasing distance
        if (prev >= 0.0)
          c.require(bin.min_out >= prev * (1.0 - 1e-12),
                    name + " modulus dips at seed " + std::to_string(rep.seed));
        prev = bin.min_out;
      }
    }
  }
  c.finish();
}

// --------------------------------------------------------------------------
// 7. Lipschitz deviation: graphs at k = 4..8 for the orthogonal sequence.
void criterion7() {
  Criterion c(7, "Lipschitz graphs within budget and reverse projection bound", 30.0);
  GallerySpec s;
  s.kind = GalleryKind::orthogonal_sequence;
  s.n = 12;
  const auto X = generate(s);
  const auto chain = shell_subspaces(difference_set(X), ScaleGrid(0, 14));
  std::vector<LipGraphApprox> seq;
  for (int k = 4; k <= 8; ++k) {
    try {
      seq.push_back(lipschitz_graph_approx(X, chain, 8.0, k));
    } catch (const ConstructionError& e) {
      c.require(false, e.what());
      continue;
    }
    const auto& g = seq.back();
    c.require(g.lipschitz_worst <= 8.0 * (1.0 + 1e-12), "net Lipschitz above 8 at k=" + std::to_string(k));
    c.require(g.eps_k <= std::ldexp(1.0, -k) * (1.0 + 1e-12),
              "graph farther than 2^-k at k=" + std::to_string(k));
  }
  const auto rev = reverse_projection_check(X, seq, chain, 8.0);
  c.require(rev.n_offset == 6, "offset n != 6");
  c.require(std::abs(rev.c_m - 1.0 / (3.0 * std::sqrt(65.0))) <= 1e-15, "c_m != 1/(3 sqrt(65))");
  c.require(rev.pass, "reverse projection bound failed");
  c.finish();
}

// --------------------------------------------------------------------------
// 8. Pathology claims.
void criterion8() {
  Criterion c(8, "pathology gallery claims", 120.0);
  {
    GallerySpec s;  // algebraic-decay packing lower bounds
    s.kind = GalleryKind::orthogonal_sequence;
    s.decay = "algebraic";
    s.decay_exponent = 3.0;
    s.n = 48;
    const auto X = generate(s).induced_metric();
    for (int nc : {8, 16, 24}) {
      const double r = std::pow(nc / 2.0, -3.0);
      const double rho = std::pow(4.0 * nc, -3.0);
      const auto b = covering_number_bounds(X, r, rho);
      c.require(b.n_lower >= nc, "algebraic packing below n at n=" + std::to_string(nc));
    }
  }
  {
    GallerySpec s;  // rho sequence: global growth, local flatness
    s.kind = GalleryKind::rho_sequence;
    s.n = 128;
    const auto rep = verify_claim(s);
    c.require(rep.all_pass, "rho_sequence claim failed");
    bool saw_global = false, saw_local = false;
    for (const auto& chk : rep.checks) {
      if (chk.name.rfind("global_packing", 0) == 0) saw_global = true;
      if (chk.name == "local_s_hat") {
        saw_local = true;
        c.require(chk.value <= 0.5, "local fit above 0.5");
      }
    }
    c.require(saw_global && saw_local, "rho_sequence checks incomplete");
  }
  {
    GallerySpec s;  // product example
    s.kind = GalleryKind::product_example;
    s.n = 16;
    const auto rep = verify_claim(s);
    c.require(rep.all_pass, "product_example claim failed");
  }
  {
    GallerySpec s;  // orthogonal sequence difference bound
    s.kind = GalleryKind::orthogonal_sequence;
    s.n = 14;
    const auto rep = verify_claim(s);
    c.require(rep.all_pass, "orthogonal-sequence difference bound failed");
  }
  c.finish();
}

// --------------------------------------------------------------------------
// 9. Linear impossibility: 36 directions into R^4.
void criterion9() {
  Criterion c(9, "linear impossibility bound sqrt(n/k) on 50 sampled maps", 30.0);
  const int n = 36, k = 4;
  Eigen::MatrixXd dirs = Eigen::MatrixXd::Identity(n, n);
  Rng rng(2026);
  std::vector<Eigen::MatrixXd> cands;
  for (int t = 0; t < 50; ++t) {
    Eigen::MatrixXd L(k, n);
    for (int r = 0; r < k; ++r)
      for (int col = 0; col < n; ++col) L(r, col) = rng.gaussian();
    cands.push_back(std::move(L));
  }
  const auto cert = linear_impossibility_certificate(dirs, k, cands);
  c.require(std::abs(cert.bound - 3.0) <= 1e-12, "bound != 3");
  int idx = 0;
  for (const auto& audit : cert.candidates) {
    c.require(audit.trace_ok, "trace bound failed at map " + std::to_string(idx));
    c.require(audit.distortion >= 2.85, "distortion below 2.85 at map " + std::to_string(idx));
    ++idx;
  }

  // Nonlinear comparator phi(2^-m e_m) = 2^-m achieves distortion <= 4.
  double min_ratio = 1e300, max_ratio = 0.0;
  for (int m = 0; m <= n; ++m)
    for (int l = m + 1; l <= n; ++l) {
      const double pm = m == 0 ? 0.0 : std::ldexp(1.0, -m);
      const double pl = std::ldexp(1.0, -l);
      const double ratio = std::abs(pm - pl) / std::sqrt(pm * pm + pl * pl);
      min_ratio = std::min(min_ratio, ratio);
      max_ratio = std::max(max_ratio, ratio);
    }
  c.require(max_ratio / min_ratio <= 4.0 + 1e-12, "comparator distortion above 4");
  c.finish();
}

// --------------------------------------------------------------------------
// 10. Determinism: seeded commands produce byte-identical reports.
void criterion10() {
  Criterion c(10, "seeded commands are byte-identical across runs", 60.0);
  const std::string dir = ".";

  {
    ExperimentConfig cfg;  // seeded gallery + claim
    cfg.command = "gallery";
    cfg.gallery.kind = GalleryKind::orthogonal_sequence;
    cfg.gallery.n = 12;
    const std::string a = run(cfg).report.dump(2);
    const std::string b = run(cfg).report.dump(2);
    c.require(a == b, "gallery reports differ");
  }
  {
    const auto X = interval_metric(65);
    const std::string path = dir + "/acceptance_interval65.csv";
    std::string csv;
    for (int i = 0; i < X.size(); ++i) {
      for (int j = 0; j < X.size(); ++j) csv += (j ? "," : "") + format_double(X(i, j));
      csv += "\n";
    }
    write_text_file(path, csv);
    ExperimentConfig cfg;
    cfg.command = "metric-pipeline";
    cfg.input_path = path;
    cfg.target_dim = 6;
    cfg.seeds = {1, 2, 3};
    const std::string a = run(cfg).report.dump(2);
    const std::string b = run(cfg).report.dump(2);
    c.require(a == b, "metric-pipeline reports differ");
    std::remove(path.c_str());
  }
  {
    GallerySpec s;
    s.kind = GalleryKind::interval;
    s.n = 33;
    const PointSet pts = generate(s);
    const std::string path = dir + "/acceptance_points33.csv";
    write_points_csv(path, pts);
    ExperimentConfig cfg;
    cfg.command = "embed-linear";
    cfg.input_path = path;
    cfg.target_dim = 4;
    cfg.seeds = {5, 6};
    const std::string a = run(cfg).report.dump(2);
    const std::string b = run(cfg).report.dump(2);
    c.require(a == b, "embed-linear reports differ");
    std::remove(path.c_str());
  }
  c.finish();
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
