#pragma once

#include <cmath>
#include <ctime>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "abl/banach.hpp"
#include "abl/coloring.hpp"
#include "abl/distortion.hpp"
#include "abl/gallery.hpp"
#include "abl/homogeneity.hpp"
#include "abl/io.hpp"
#include "abl/kuratowski.hpp"
#include "abl/lipschitz_graph.hpp"
#include "abl/net_embedding.hpp"
#include "abl/probe_map.hpp"
#include "abl/subspace_chain.hpp"
#include "abl/thickness.hpp"

namespace abl {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Report serialization. JSON is the canonical format; doubles that may be
// infinite are emitted as null.

inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(); }

inline json to_json(const CoveringProfile& p) {
  json rows = json::array();
  for (const auto& r : p.rows)
    rows.push_back({{"r", r.r}, {"rho", r.rho}, {"n_lower", r.n_lower}, {"n_upper", r.n_upper}});
  return rows;
}

inline json to_json(const HomogeneityFit& f, bool include_profile = true) {
  json j{{"alpha", f.alpha},
         {"beta", f.beta},
         {"s_hat", f.s_hat},
         {"logM_hat", f.logM_hat},
         {"residual_rms", f.residual_rms},
         {"pairs_used", f.pairs_used},
         {"estimator", "ols_log_counts_dyadic"}};
  if (f.local) j["local_cutoff"] = f.local_cutoff;
  if (include_profile) j["profile"] = to_json(f.profile);
  return j;
}

inline json to_json(const BoxDimensionEstimate& e) {
  json counts = json::array();
  for (auto [j, n] : e.counts) counts.push_back({{"j", j}, {"net_size", n}});
  return json{{"estimate", e.estimate},
              {"residual_rms", e.residual_rms},
              {"scales_used", e.scales_used},
              {"counts", counts}};
}

inline json to_json(const DistortionReport& r) {
  json bins = json::array();
  for (const auto& b : r.modulus)
    bins.push_back({{"bin", b.bin},
                    {"d_upper", b.d_upper},
                    {"min_out", b.min_out},
                    {"max_out", b.max_out},
                    {"pairs", b.pairs}});
  json j{{"gamma", r.gamma},
         {"max_ratio_up", finite_or_null(r.max_ratio_up)},
         {"min_ratio_up", finite_or_null(r.min_ratio_up)},
         {"min_ratio_down", finite_or_null(r.min_ratio_down)},
         {"max_ratio_down", finite_or_null(r.max_ratio_down)},
         {"l_fit", finite_or_null(r.l_fit)},
         {"c_fit", finite_or_null(r.c_fit)},
         {"injective", r.injective},
         {"modulus", bins}};
  j["theta_fit"] = std::isnan(r.theta_fit) ? json() : json(r.theta_fit);
  if (!r.map_digest.empty()) {
    j["seed"] = r.seed;
    j["map_digest"] = r.map_digest;
  }
  return j;
}

inline json to_json(const ColoringAtlas& atlas) {
  json rows = json::array();
  for (const auto& sc : atlas.scales)
    rows.push_back({{"j", sc.net.scale_j},
                    {"net_size", sc.net.size()},
                    {"colors", sc.color_count},
                    {"conflict_radius", sc.conflict_radius}});
  return rows;
}

inline json to_json(const BlockPropertyReport& r) {
  return json{{"a_constant", r.a_constant}, {"a_worst", finite_or_null(r.a_worst)},
              {"b_emp", r.b_emp},           {"a1_pass", r.a1_pass},
              {"pairs_checked", r.pairs_checked}, {"scales_checked", r.scales_checked}};
}

inline json to_json(const SubspaceChain& chain) {
  json levels = json::array();
  for (const auto& lv : chain.levels())
    levels.push_back({{"shell_j", lv.shell_j}, {"centers_added", lv.centers_added}, {"dim", lv.dim}});
  return json{{"source", chain.source()},
              {"ambient_dim", chain.ambient_dim()},
              {"rank", chain.rank()},
              {"digest", chain.digest()},
              {"levels", levels}};
}

inline json to_json(const ProbeMap& m) {
  json matrix = json::array();
  for (int r = 0; r < m.matrix.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.matrix.cols(); ++c) row.push_back(m.matrix(r, c));
    matrix.push_back(std::move(row));
  }
  return json{{"seed", m.seed},       {"zeta", m.zeta},
              {"target_dim", m.target_dim}, {"k_max", m.k_max},
              {"c_zeta", m.c_zeta},   {"chain_digest", m.chain_digest},
              {"matrix", std::move(matrix)}};
}

inline json to_json(const ThicknessTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) rows.push_back({{"epsilon", r.epsilon}, {"dim_bound", r.dim_bound}});
  json j{{"rows", rows}};
  j["tau_fit"] = t.tau_valid ? json(t.tau_fit) : json();
  j["polylog_exponent"] = t.polylog_valid ? json(t.polylog_exponent) : json();
  return j;
}

inline json to_json(const DeviationTable& t) {
  json rows = json::array();
  for (const auto& g : t.graphs)
    rows.push_back({{"k", g.level_k},
                    {"subspace_dim", g.subspace_dim},
                    {"eps_k", g.eps_k},
                    {"lipschitz_worst", g.lipschitz_worst},
                    {"fiber_gap_worst", g.fiber_gap_worst},
                    {"extension_factor", g.extension_factor}});
  json j{{"m", t.m}, {"graphs", rows}};
  j["dev_fit"] = t.fit_valid ? json(t.dev_fit) : json();
  return j;
}

inline json to_json(const ReverseProjectionReport& r) {
  return json{{"m", r.m},
              {"n_offset", r.n_offset},
              {"c_m", r.c_m},
              {"worst_ratio", finite_or_null(r.worst_ratio)},
              {"pairs_checked", r.pairs_checked},
              {"pass", r.pass}};
}

inline json to_json(const BanachQuarterReport& r) {
  json rows = json::array();
  for (const auto& lv : r.levels)
    rows.push_back({{"shell_j", lv.shell_j},
                    {"centers", lv.centers},
                    {"dim", lv.dim},
                    {"worst_ratio", lv.worst_ratio}});
  return json{{"pass", r.pass}, {"worst_ratio", r.worst_ratio}, {"levels", rows}};
}

inline json to_json(const ClaimReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"relation", c.relation},
                      {"threshold", c.threshold},
                      {"pass", c.pass}});
  return json{{"kind", r.kind}, {"trivial", r.trivial}, {"all_pass", r.all_pass}, {"checks", checks}};
}

// ---------------------------------------------------------------------------
// Experiment configuration and dispatch.

struct ExperimentConfig {
  std::string command;
  std::string input_path;
  InputKind input_kind = InputKind::automatic;
  std::string format = "json";  // json | csv (csv adds table sidecars)
  std::string out_path;

  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 1.0;
  double delta = 1.0;
  double zeta = 1.0;
  int target_dim = 8;
  std::vector<std::uint64_t> seeds;
  std::optional<int> grid_min;
  std::optional<int> grid_max;
  std::optional<double> local_cutoff;
  double lipschitz_m = 8.0;
  int base_index = 0;

  GallerySpec gallery;

  std::vector<std::uint64_t> seeds_or_default() const {
    if (!seeds.empty()) return seeds;
    std::vector<std::uint64_t> out;
    for (std::uint64_t s = 1; s <= 20; ++s) out.push_back(s);
    return out;
  }
};

struct RunResult {
  int exit_code = 0;
  json report;
  std::vector<std::string> files_written;
};

namespace detail_experiment {

inline void validate(const ExperimentConfig& cfg) {
  auto fail = [](const std::string& m) { throw std::invalid_argument("config: " + m); };
  if (cfg.format != "json" && cfg.format != "csv") fail("format must be json or csv");
  if (cfg.command == "embed-net" && !(cfg.delta > 0.5)) fail("embed-net needs delta > 1/2");
  if (cfg.command == "embed-linear" || cfg.command == "metric-pipeline") {
    if (cfg.target_dim < 1) fail("target dimension must be >= 1");
    if (!(cfg.zeta > 0.0)) fail("zeta must be positive");
  }
  if (cfg.gamma < 0.0) fail("gamma must be >= 0");
  if (cfg.alpha < 0.0 || cfg.beta < 0.0) fail("alpha and beta must be >= 0");
  if (cfg.grid_min && cfg.grid_max && *cfg.grid_min > *cfg.grid_max)
    fail("grid-min must not exceed grid-max");
  if (!(cfg.lipschitz_m > 0.0)) fail("lipschitz budget m must be positive");
}

inline ScaleGrid grid_for(const FiniteMetricSpace& X, const ExperimentConfig& cfg) {
  const ScaleGrid base = ScaleGrid::for_space(X);
  return ScaleGrid(cfg.grid_min.value_or(base.j_min), cfg.grid_max.value_or(base.j_max));
}

inline std::string stem_of(const std::string& path) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
  return path.substr(0, dot);
}

inline void write_modulus_csv(const std::string& path, const DistortionReport& rep,
                              std::vector<std::string>& files) {
  std::ostringstream os;
  os << "bin,d_upper,min_out,max_out,pairs\n";
  for (const auto& b : rep.modulus)
    os << b.bin << ',' << format_double(b.d_upper) << ',' << format_double(b.min_out) << ','
       << format_double(b.max_out) << ',' << b.pairs << '\n';
  write_text_file(path, os.str());
  files.push_back(path);
}

}  // namespace detail_experiment

inline RunResult run(const ExperimentConfig& cfg) {
  using detail_experiment::grid_for;
  using detail_experiment::stem_of;
  detail_experiment::validate(cfg);

  RunResult res;
  json& rep = res.report;
  rep["command"] = cfg.command;
  bool audits_ok = true;

  if (cfg.command == "dim-estimate") {
    const auto input = load_input(cfg.input_path, cfg.input_kind);
    const FiniteMetricSpace X = input.as_metric();
    const ScaleGrid grid = grid_for(X, cfg);
    rep["points"] = X.size();
    rep["grid"] = {{"j_min", grid.j_min}, {"j_max", grid.j_max}};
    rep["homogeneity"] = to_json(homogeneity_fit(X, grid, cfg.alpha, cfg.beta));
    rep["box_dimension"] = to_json(box_dimension_estimate(X));
    if (cfg.local_cutoff)
      rep["local"] = to_json(homogeneity_fit(X, grid, cfg.alpha, cfg.beta, cfg.local_cutoff));
    if (cfg.format == "csv" && !cfg.out_path.empty()) {
      std::ostringstream os;
      os << "r,rho,n_lower,n_upper\n";
      for (const auto& row : homogeneity_fit(X, grid, cfg.alpha, cfg.beta).profile.rows)
        os << format_double(row.r) << ',' << format_double(row.rho) << ',' << row.n_lower << ','
           << row.n_upper << '\n';
      write_text_file(stem_of(cfg.out_path) + "_profile.csv", os.str());
      res.files_written.push_back(stem_of(cfg.out_path) + "_profile.csv");
    }
  } else if (cfg.command == "embed-net") {
    const auto input = load_input(cfg.input_path, cfg.input_kind);
    const FiniteMetricSpace X = input.as_metric();
    const auto atlas = build_coloring_atlas(X, atlas_grid_for_embedding(X));
    const auto blocks = verify_block_properties(atlas, X);
    audits_ok = audits_ok && blocks.a1_pass;
    const auto emb = assemble_embedding(X, atlas, cfg.delta, cfg.base_index);
    auto out_points = emb.to_point_set();
    DistortionReport dist = audit_distortion(out_points.induced_metric(), X, cfg.gamma);
    try {
      holder_exponent_fit(dist);
    } catch (const std::invalid_argument&) {
    }
    rep["points"] = X.size();
    rep["delta"] = cfg.delta;
    rep["base_index"] = cfg.base_index;
    rep["atlas"] = to_json(atlas);
    rep["blocks"] = to_json(blocks);
    rep["dimension"] = emb.dimension;
    rep["tail_bound"] = emb.tail_bound;
    rep["b_emp"] = emb.b_emp;
    rep["distortion"] = to_json(dist);
    if (!cfg.out_path.empty()) {
      const std::string pts_path = stem_of(cfg.out_path) +
                                   (cfg.format == "csv" ? "_embedding.csv" : "_embedding.json");
      if (cfg.format == "csv")
        write_points_csv(pts_path, out_points);
      else
        write_text_file(pts_path, points_to_json(out_points).dump(2) + "\n");
      res.files_written.push_back(pts_path);
      if (cfg.format == "csv")
        detail_experiment::write_modulus_csv(stem_of(cfg.out_path) + "_modulus.csv", dist,
                                             res.files_written);
    }
  } else if (cfg.command == "embed-linear") {
    const auto input = load_input(cfg.input_path, cfg.input_kind);
    if (!input.has_points())
      throw std::invalid_argument(
          "embed-linear needs a point cloud input; use metric-pipeline for distance matrices");
    const auto result =
        embed_and_audit(*input.points, cfg.target_dim, cfg.gamma, cfg.zeta, cfg.seeds_or_default());
    rep["points"] = input.points->size();
    rep["target_dim"] = cfg.target_dim;
    rep["zeta"] = cfg.zeta;
    rep["difference_count"] = result.difference_count;
    rep["chain_rank"] = result.chain_rank;
    rep["injectivity_fraction"] = result.injectivity_fraction;
    json reports = json::array();
    for (const auto& r : result.reports) reports.push_back(to_json(r));
    rep["reports"] = std::move(reports);
    // The sampled maps themselves, reproducible from (seed, zeta, chain).
    {
      const PointSet diffs(difference_set(*input.points).coords(), NormKind::euclidean);
      const SubspaceChain chain = shell_subspaces(diffs);
      json maps = json::array();
      for (const auto seed : cfg.seeds_or_default())
        maps.push_back(to_json(sample_probe_map(chain, cfg.target_dim, cfg.zeta, seed)));
      rep["probe_maps"] = std::move(maps);
    }
    if (cfg.format == "csv" && !cfg.out_path.empty() && !result.reports.empty())
      detail_experiment::write_modulus_csv(stem_of(cfg.out_path) + "_modulus.csv",
                                           result.reports.front(), res.files_written);
  } else if (cfg.command == "deviation") {
    const auto input = load_input(cfg.input_path, cfg.input_kind);
    if (!input.has_points()) throw std::invalid_argument("deviation needs a point cloud input");
    const PointSet& X = *input.points;
    const PointSet diffs(X.coords(), NormKind::euclidean);
    const auto chain = shell_subspaces(difference_set(diffs));
    std::vector<double> eps;
    const int k_lo = cfg.grid_min.value_or(chain.shell_min());
    const int k_hi = cfg.grid_max.value_or(chain.shell_max());
    for (int k = k_lo; k <= k_hi; ++k) eps.push_back(std::ldexp(1.0, -k));
    rep["thickness"] = to_json(thickness_estimate(diffs, eps));
    const auto table = lipschitz_deviation_table(diffs, chain, cfg.lipschitz_m, k_lo, k_hi);
    rep["deviation"] = to_json(table);
    rep["chain"] = to_json(chain);
    // Reverse check on the prefix of levels whose k + n stays inside the chain.
    const double l_m = std::sqrt(2.0 * std::max(1.0, cfg.lipschitz_m * cfg.lipschitz_m));
    int n_off = 0;
    while (std::ldexp(1.0, n_off) < 3.0 * l_m) ++n_off;
    std::vector<LipGraphApprox> prefix;
    for (const auto& g : table.graphs)
      if (g.level_k + n_off <= chain.shell_max()) prefix.push_back(g);
    if (!prefix.empty()) {
      const auto reverse = reverse_projection_check(diffs, prefix, chain, cfg.lipschitz_m);
      audits_ok = audits_ok && reverse.pass;
      rep["reverse"] = to_json(reverse);
    }
  } else if (cfg.command == "gallery") {
    const PointSet X = generate(cfg.gallery);
    const ClaimReport claim = verify_claim(cfg.gallery);
    audits_ok = audits_ok && (claim.trivial || claim.all_pass);
    rep["spec"] = {{"kind", gallery_kind_name(cfg.gallery.kind)},
                   {"n", cfg.gallery.n},
                   {"decay", cfg.gallery.decay},
                   {"decay_epsilon", cfg.gallery.decay_epsilon},
                   {"decay_exponent", cfg.gallery.decay_exponent},
                   {"depth", cfg.gallery.depth},
                   {"R", cfg.gallery.R},
                   {"include_origin", cfg.gallery.include_origin}};
    rep["points"] = X.size();
    rep["dim"] = X.dim();
    rep["claim"] = to_json(claim);
    if (!cfg.out_path.empty()) {
      const std::string pts_path =
          stem_of(cfg.out_path) + (cfg.format == "csv" ? "_points.csv" : "_points.json");
      if (cfg.format == "csv")
        write_points_csv(pts_path, X);
      else
        write_text_file(pts_path, points_to_json(X).dump(2) + "\n");
      res.files_written.push_back(pts_path);
    }
  } else if (cfg.command == "metric-pipeline") {
    const auto input = load_input(cfg.input_path, cfg.input_kind);
    const FiniteMetricSpace X = input.as_metric();
    const PointSet kur = kuratowski_embed(X, cfg.base_index);
    const auto result =
        embed_and_audit(kur, cfg.target_dim, cfg.gamma, cfg.zeta, cfg.seeds_or_default());
    rep["points"] = X.size();
    rep["base_index"] = cfg.base_index;
    rep["kuratowski_dim"] = kur.dim();
    rep["target_dim"] = cfg.target_dim;
    rep["difference_count"] = result.difference_count;
    rep["chain_rank"] = result.chain_rank;
    rep["injectivity_fraction"] = result.injectivity_fraction;
    json reports = json::array();
    for (const auto& r : result.reports) reports.push_back(to_json(r));
    rep["reports"] = std::move(reports);
  } else {
    throw std::invalid_argument("unknown command: " + cfg.command);
  }

  rep["audits_pass"] = audits_ok;
  res.exit_code = audits_ok ? 0 : 1;

  if (!cfg.out_path.empty()) {
    write_text_file(cfg.out_path, rep.dump(2) + "\n");
    res.files_written.push_back(cfg.out_path);
    // Timestamps live in a sidecar so reports stay byte-comparable.
    write_text_file(cfg.out_path + ".meta.json",
                    json{{"written_at_unix", static_cast<long>(std::time(nullptr))}}.dump(2) + "\n");
  }
  return res;
}

}  // namespace abl
