// Batch front end: dataset ingestion, experiment orchestration, JSON/CSV
// report emission. One experiment per invocation; see README for the
// subcommand reference.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <string>

#include "abl/experiment.hpp"

namespace {

// --seeds accepts either a comma-separated list ("3,5,8") or a single count
// N meaning seeds 1..N.
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  if (text.empty()) return out;
  if (text.find(',') == std::string::npos) {
    const std::uint64_t count = std::stoull(text);
    for (std::uint64_t s = 1; s <= count; ++s) out.push_back(s);
    return out;
  }
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(std::stoull(cell));
  return out;
}

void load_config_file(const std::string& path, abl::ExperimentConfig& cfg, std::string& seeds_text) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  auto get = [&](const char* key, auto& slot) {
    if (j.contains(key)) slot = j[key].get<std::decay_t<decltype(slot)>>();
  };
  get("input", cfg.input_path);
  get("format", cfg.format);
  get("out", cfg.out_path);
  get("alpha", cfg.alpha);
  get("beta", cfg.beta);
  get("gamma", cfg.gamma);
  get("delta", cfg.delta);
  get("zeta", cfg.zeta);
  get("target_dim", cfg.target_dim);
  get("lipschitz_m", cfg.lipschitz_m);
  get("base_index", cfg.base_index);
  if (j.contains("seeds")) {
    if (j["seeds"].is_array())
      cfg.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    else
      seeds_text = j["seeds"].is_string() ? j["seeds"].get<std::string>()
                                          : std::to_string(j["seeds"].get<std::uint64_t>());
  }
  if (j.contains("grid_min")) cfg.grid_min = j["grid_min"].get<int>();
  if (j.contains("grid_max")) cfg.grid_max = j["grid_max"].get<int>();
  if (j.contains("local_cutoff")) cfg.local_cutoff = j["local_cutoff"].get<double>();
  if (j.contains("input_kind")) {
    const std::string k = j["input_kind"].get<std::string>();
    cfg.input_kind = k == "matrix"   ? abl::InputKind::matrix
                     : k == "points" ? abl::InputKind::points
                                     : abl::InputKind::automatic;
  }
  if (j.contains("gallery")) {
    const auto& g = j["gallery"];
    if (g.contains("kind")) cfg.gallery.kind = abl::gallery_kind_from_name(g["kind"].get<std::string>());
    if (g.contains("n")) cfg.gallery.n = g["n"].get<int>();
    if (g.contains("decay")) cfg.gallery.decay = g["decay"].get<std::string>();
    if (g.contains("decay_epsilon")) cfg.gallery.decay_epsilon = g["decay_epsilon"].get<double>();
    if (g.contains("decay_exponent")) cfg.gallery.decay_exponent = g["decay_exponent"].get<double>();
    if (g.contains("depth")) cfg.gallery.depth = g["depth"].get<int>();
    if (g.contains("R")) cfg.gallery.R = g["R"].get<double>();
    if (g.contains("include_origin")) cfg.gallery.include_origin = g["include_origin"].get<bool>();
  }
}

}  // namespace

int main(int argc, char** argv) {
  abl::ExperimentConfig cfg;
  std::string seeds_text;
  std::string config_path;
  std::string input_kind_text = "auto";
  std::string gallery_kind_text;
  int grid_min = 0, grid_max = 0;
  double local_cutoff = 0.0;

  // Config file first; command-line flags win.
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
  if (!config_path.empty()) {
    try {
      load_config_file(config_path, cfg, seeds_text);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }

  CLI::App app{"net-and-coloring embeddings, linear reductions, and dimension audits"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub, bool takes_input) {
    sub->add_option("--config", config_path, "JSON config file mirroring the flags");
    if (takes_input) sub->add_option("--input", cfg.input_path, "distance matrix or point cloud");
    sub->add_option("--input-kind", input_kind_text, "auto|matrix|points")
        ->check(CLI::IsMember({"auto", "matrix", "points"}));
    sub->add_option("--format", cfg.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", cfg.out_path, "report path (stdout if omitted)");
    sub->add_option("--alpha", cfg.alpha, "slog correction exponent for rho");
    sub->add_option("--beta", cfg.beta, "slog correction exponent for r");
    sub->add_option("--gamma", cfg.gamma, "almost bi-Lipschitz exponent");
    sub->add_option("--delta", cfg.delta, "series weight exponent (> 1/2)");
    sub->add_option("--zeta", cfg.zeta, "probe weight exponent (> 0)");
    sub->add_option("--target-dim", cfg.target_dim, "linear reduction target dimension");
    sub->add_option("--seeds", seeds_text, "comma-separated seed list, or a count N for 1..N");
    sub->add_option("--grid-min", grid_min, "coarsest dyadic scale index");
    sub->add_option("--grid-max", grid_max, "finest dyadic scale index");
    sub->add_option("--local-cutoff", local_cutoff, "restrict fits to r below this length");
    sub->add_option("--lipschitz-m", cfg.lipschitz_m, "Lipschitz budget for graph approximations");
    sub->add_option("--base-index", cfg.base_index, "distinguished base point index");
  };

  CLI::App* dim = app.add_subcommand("dim-estimate", "covering fits, box dimension, local variant");
  add_common(dim, true);
  CLI::App* enet = app.add_subcommand("embed-net", "coloring atlas, tent embedding, distortion audit");
  add_common(enet, true);
  CLI::App* elin = app.add_subcommand("embed-linear", "shell chain, probe maps, distortion audits");
  add_common(elin, true);
  CLI::App* dev = app.add_subcommand("deviation", "thickness, delta_m and dev_m tables");
  add_common(dev, true);
  CLI::App* gal = app.add_subcommand("gallery", "generate an example set and verify its claim");
  add_common(gal, false);
  gal->add_option("--kind", gallery_kind_text,
                  "orthogonal_sequence|xstar|rho_sequence|product_example|cantor|interval|nasty_curve");
  gal->add_option("--n", cfg.gallery.n, "points / directions");
  gal->add_option("--decay", cfg.gallery.decay, "geometric|algebraic");
  gal->add_option("--decay-epsilon", cfg.gallery.decay_epsilon, "algebraic decay scale");
  gal->add_option("--decay-exponent", cfg.gallery.decay_exponent, "algebraic decay exponent");
  gal->add_option("--depth", cfg.gallery.depth, "xstar blocks / cantor depth / nasty levels");
  gal->add_option("--R", cfg.gallery.R, "nasty seed-ball scale");
  gal->add_flag("--include-origin", cfg.gallery.include_origin, "append the origin point");
  CLI::App* pipe = app.add_subcommand("metric-pipeline",
                                      "Kuratowski embedding, differences, linear reduction audit");
  add_common(pipe, true);

  CLI11_PARSE(app, argc, argv);

  CLI::App* sub = app.get_subcommands().front();
  cfg.command = sub->get_name();
  if (sub->count("--grid-min")) cfg.grid_min = grid_min;
  if (sub->count("--grid-max")) cfg.grid_max = grid_max;
  if (sub->count("--local-cutoff")) cfg.local_cutoff = local_cutoff;
  if (sub->count("--input-kind"))
    cfg.input_kind = input_kind_text == "matrix"   ? abl::InputKind::matrix
                     : input_kind_text == "points" ? abl::InputKind::points
                                                   : abl::InputKind::automatic;
  if (!gallery_kind_text.empty()) {
    try {
      cfg.gallery.kind = abl::gallery_kind_from_name(gallery_kind_text);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  if (!seeds_text.empty()) {
    try {
      cfg.seeds = parse_seeds(seeds_text);
    } catch (const std::exception&) {
      std::cerr << "error: cannot parse --seeds '" << seeds_text << "'\n";
      return 2;
    }
  }

  try {
    const abl::RunResult result = abl::run(cfg);
    if (cfg.out_path.empty()) std::cout << result.report.dump(2) << "\n";
    if (result.exit_code != 0) std::cerr << "audit failures reported; see the report\n";
    return result.exit_code;
  } catch (const abl::ConstructionError& e) {
    std::cerr << "audit failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
