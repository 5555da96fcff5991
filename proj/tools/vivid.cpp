/*
 * Copyright 2026 The vivid Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// vivid command-line tool.
//
//   vivid compute  --data d.csv --response y --predictor builtin:bagged-trees --out vivi.json
//   vivid reorder  --matrix a.json,b.json --out order.json --apply-to a.json,b.json
//   vivid average  --matrix a.json,b.json --out avg.json
//   vivid plot heatmap|network|pdp-vars|pdp-pairs|pdp-zen ... --out plot.svg
//   vivid zpath    --matrix vivi.json --cutoff-quantile 0.9 --out zpath.json
//   vivid pd       --data d.csv --response y --predictor ... --vars a,b --pairs --out pd.json
//   vivid table    --matrix vivi.json --out long.csv
//   vivid import   --importance imp.csv [--interaction int.csv] --out vivi.json
//   vivid bench    --data d.csv --response y --predictor p1 --predictor p2 --reps 5
//
// Every flag may also come from a flat JSON file given by --config, keyed by
// the flag name without dashes. Flags on the command line win. The seed
// falls back to the VIVID_SEED environment variable.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vivid/vivid.hpp"

namespace {

using vivid::Error;

std::vector<std::string> split(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_number(const std::string& s, const std::string& flag) {
  const auto v = vivid::parse_finite(s);
  if (!v) throw Error("--" + flag + ": '" + s + "' is not a finite number");
  return *v;
}

vivid::Limits parse_lims(const std::string& s, const std::string& flag) {
  if (s.empty()) return std::nullopt;
  const auto parts = split(s);
  if (parts.size() != 2) throw Error("--" + flag + " expects lo,hi");
  const double lo = parse_number(parts[0], flag), hi = parse_number(parts[1], flag);
  if (lo > hi) throw Error("--" + flag + ": lo exceeds hi");
  return std::make_pair(lo, hi);
}

// ---------------------------------------------------------------------------
// Option groups shared by several subcommands

struct RunOptions {
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string config;
};

struct ModelOptions {
  std::string data;
  std::string response;
  std::string predictor = "builtin:bagged-trees";
  std::string positive_class;
  std::size_t knn_k = 5;
  std::size_t n_trees = vivid::TreeParams{}.n_trees;
  std::size_t max_depth = vivid::TreeParams{}.max_depth;
  std::size_t min_leaf = vivid::TreeParams{}.min_leaf;
  std::optional<std::uint64_t> tree_seed;
  std::size_t pool = 1;
  double eps = vivid::kDefaultEps;
};

struct PdCliOptions {
  std::size_t grid_size = vivid::kDefaultGridSize;
  std::size_t nmax = vivid::kDefaultNmax;
  std::size_t n_ice = vivid::kDefaultNIce;
  bool convex_hull = false;
};

struct PlotCliOptions {
  std::string out;
  double width = 800;
  double height = 800;
  double angle = 0;
  std::string title;
};

void add_run(CLI::App* app, RunOptions& o) {
  app->add_option("--seed", o.seed, "Random seed (falls back to VIVID_SEED, then 0)");
  app->add_option("--workers", o.workers, "Worker threads; results do not depend on this");
  app->add_option("--config", o.config, "Flat JSON file of flag values");
}

void add_model(CLI::App* app, ModelOptions& o, bool with_predictor = true) {
  app->add_option("--data", o.data, "CSV dataset");
  app->add_option("--response", o.response, "Response column");
  if (with_predictor)
    app->add_option("--predictor", o.predictor,
                    "builtin:linear | builtin:knn | builtin:bagged-trees | external:<command>");
  app->add_option("--class", o.positive_class, "Positive class for a binary response (default: first level)");
  app->add_option("--knn-k", o.knn_k, "Neighbours for builtin:knn");
  app->add_option("--n-trees", o.n_trees, "Trees for builtin:bagged-trees");
  app->add_option("--max-depth", o.max_depth, "Tree depth for builtin:bagged-trees");
  app->add_option("--min-leaf", o.min_leaf, "Minimum leaf size for builtin:bagged-trees");
  app->add_option("--tree-seed", o.tree_seed, "Bootstrap seed (default: --seed)");
  app->add_option("--pool", o.pool, "External predictor processes");
  app->add_option("--eps", o.eps, "Probability clamp for the logit scale");
}

void add_pd(CLI::App* app, PdCliOptions& o, bool with_hull) {
  app->add_option("--grid-size", o.grid_size, "Grid points per numeric variable");
  app->add_option("--nmax", o.nmax, "Maximum data rows used");
  app->add_option("--n-ice", o.n_ice, "ICE curves per univariate panel");
  if (with_hull) app->add_flag("--convex-hull,!--no-convex-hull", o.convex_hull, "Mask extrapolated cells");
}

void add_plot(CLI::App* app, PlotCliOptions& o) {
  app->add_option("--out", o.out, "Output SVG");
  app->add_option("--width", o.width, "Canvas width");
  app->add_option("--height", o.height, "Canvas height");
  app->add_option("--angle", o.angle, "x-label rotation in degrees");
  app->add_option("--title", o.title, "Plot title");
}

vivid::PlotSpec plot_spec(const PlotCliOptions& o) { return {o.width, o.height, o.angle, o.title}; }

void require(const std::string& value, const std::string& flag) {
  if (value.empty()) throw Error("missing --" + flag);
}

// ---------------------------------------------------------------------------
// Config file and seed fallback

std::string config_value(const nlohmann::json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return v.dump();
  if (v.is_array()) {
    std::string out;
    for (const auto& e : v) {
      if (!out.empty()) out += ',';
      out += config_value(e, key);
    }
    return out;
  }
  throw Error("config key '" + key + "' has an unsupported value");
}

bool known_anywhere(const CLI::App* app, const std::string& flag) {
  if (app->get_option_no_throw(flag)) return true;
  for (const auto* sub : app->get_subcommands([](const CLI::App*) { return true; }))
    if (known_anywhere(sub, flag)) return true;
  return false;
}

void apply_config(CLI::App& root, CLI::App* leaf, const std::string& path) {
  const auto text = vivid::io::read_text(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed config '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw Error("config '" + path + "' must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    const std::string flag = "--" + key;
    if (key == "config") continue;
    if (!known_anywhere(&root, flag)) throw Error("config '" + path + "': unknown key '" + key + "'");
    CLI::Option* opt = leaf->get_option_no_throw(flag);
    if (!opt || opt->count() > 0) continue;
    opt->add_result(config_value(value, key));
    opt->run_callback();
  }
}

void apply_seed_env(CLI::App* leaf) {
  CLI::Option* opt = leaf->get_option_no_throw("--seed");
  if (!opt || opt->count() > 0) return;
  if (const char* env = std::getenv("VIVID_SEED"); env && *env) {
    opt->add_result(env);
    opt->run_callback();
  }
}

// ---------------------------------------------------------------------------
// Data and predictor

vivid::Dataset load_data(const ModelOptions& m) {
  require(m.data, "data");
  require(m.response, "response");
  return vivid::load_csv(m.data, m.response);
}

bool is_binary(const vivid::Dataset& d) {
  return d.column(d.response()).kind == vivid::ColumnKind::categorical;
}

vivid::PredictorPtr make_predictor(const std::string& spec, const ModelOptions& m, const vivid::Dataset& d,
                                   std::uint64_t seed) {
  const bool binary = is_binary(d);
  vivid::PredictorPtr inner;
  if (spec.rfind("builtin:", 0) == 0) {
    const std::string kind = spec.substr(8);
    vivid::FitOptions fit;
    fit.knn_k = m.knn_k;
    fit.trees.n_trees = m.n_trees;
    fit.trees.max_depth = m.max_depth;
    fit.trees.min_leaf = m.min_leaf;
    fit.trees.seed = m.tree_seed.value_or(seed);
    fit.positive_class = m.positive_class;
    if (kind == "linear")
      inner = vivid::fit_builtin(vivid::BuiltinKind::linear, d, fit);
    else if (kind == "knn")
      inner = vivid::fit_builtin(vivid::BuiltinKind::knn, d, fit);
    else if (kind == "bagged-trees" || kind == "bagged_trees")
      inner = vivid::fit_builtin(vivid::BuiltinKind::bagged_trees, d, fit);
    else
      throw Error("unknown builtin predictor '" + kind + "'");
  } else if (spec.rfind("external:", 0) == 0) {
    const std::string command = spec.substr(9);
    if (command.empty()) throw Error("external predictor needs a command");
    inner = std::make_shared<const vivid::SubprocessPredictor>(command, d.features().schema, m.pool);
  } else {
    throw Error("predictor spec must start with 'builtin:' or 'external:', got '" + spec + "'");
  }
  if (!binary) return inner;
  return vivid::wrap_class(inner, vivid::Task::binary_classification, d, m.positive_class, m.eps);
}

std::vector<std::string> resolve_vars(const std::string& flag_value, const vivid::Dataset& d) {
  auto vars = split(flag_value);
  if (vars.empty()) vars = d.predictor_names();
  for (const auto& v : vars) (void)d.predictor_index(v);
  return vars;
}

vivid::PdOptions pd_options(const PdCliOptions& o, const RunOptions& r) {
  if (o.grid_size < 1) throw Error("gridSize must be at least 1");
  if (o.nmax < 1) throw Error("nmax must be at least 1");
  vivid::PdOptions p;
  p.grid_size = o.grid_size;
  p.nmax = o.nmax;
  p.seed = r.seed;
  p.n_ice = o.n_ice;
  p.convex_hull = o.convex_hull;
  p.workers = r.workers;
  return p;
}

// ---------------------------------------------------------------------------
// Summary table

void print_summary(const vivid::ViviMatrix& v) {
  const std::size_t m = v.size();
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return v.importance(a) > v.importance(b); });
  std::printf("Top importance (%s)\n", v.importance_type.c_str());
  for (std::size_t k = 0; k < std::min<std::size_t>(5, m); ++k)
    std::printf("  %-16s %12.6g\n", v.vars[idx[k]].c_str(), v.importance(idx[k]));

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
  std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
    return v.interaction(a.first, a.second) > v.interaction(b.first, b.second);
  });
  std::printf("Top interaction (%s H)\n", v.normalized ? "normalized" : "unnormalized");
  for (std::size_t k = 0; k < std::min<std::size_t>(5, pairs.size()); ++k) {
    const auto [i, j] = pairs[k];
    const std::string label = v.vars[i] + ":" + v.vars[j];
    std::printf("  %-24s %12.6g\n", label.c_str(), v.interaction(i, j));
  }
}

// ---------------------------------------------------------------------------
// zpath construction shared by `zpath` and `plot pdp-zen`

struct ZPathCliOptions {
  std::string matrix;
  std::optional<double> cutoff;
  std::optional<double> cutoff_quantile;
  std::string method = "greedy.weighted";
  bool connect = true;
};

void add_zpath(CLI::App* app, ZPathCliOptions& o) {
  app->add_option("--cutoff", o.cutoff, "Absolute interaction cutoff");
  app->add_option("--cutoff-quantile", o.cutoff_quantile, "Cutoff as a quantile of the interactions (default 0.9)");
  app->add_option("--zpath-method,--method", o.method, "greedy.weighted | strictly.weighted");
  app->add_flag("--connect,!--no-connect", o.connect, "Join sequences into one path (default: on)");
}

vivid::ZPath make_zpath(const vivid::ViviMatrix& v, const ZPathCliOptions& o) {
  if (o.cutoff && o.cutoff_quantile) throw Error("give --cutoff or --cutoff-quantile, not both");
  const double cutoff = o.cutoff ? *o.cutoff : vivid::interaction_quantile(v, o.cutoff_quantile.value_or(0.9));
  const auto g = vivid::build_graph(v, cutoff);
  const auto method = vivid::parse_zpath_method(o.method);
  if (method == vivid::ZPathMethod::strictly_weighted) return vivid::zpath_strict(g, o.connect);
  auto zp = vivid::zpath_greedy(g);
  if (o.connect && zp.sequences.size() > 1) {
    std::vector<std::string> joined;
    for (const auto& s : zp.sequences) joined.insert(joined.end(), s.begin(), s.end());
    zp.sequences = {std::move(joined)};
  }
  zp.connected = zp.sequences.size() == 1;
  return zp;
}

std::filesystem::path applied_path(const std::string& input) {
  std::filesystem::path p(input);
  return p.parent_path() / (p.stem().string() + ".reordered" + p.extension().string());
}

std::vector<vivid::ViviMatrix> load_matrices(const std::string& list) {
  std::vector<vivid::ViviMatrix> out;
  for (const auto& path : split(list)) out.push_back(vivid::io::load_vivi(path));
  if (out.empty()) throw Error("missing --matrix");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variable importance and interaction (VIVI) summaries and displays"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for all subcommands");
  app.option_defaults()->always_capture_default();

  RunOptions run;
  ModelOptions model;
  PdCliOptions pd;
  PlotCliOptions plot;
  ZPathCliOptions zopt;
  std::string out, long_out, matrix, apply_to, apply_out, vars_flag, fitlims, imp_lims, int_lims;
  std::string importance_file, interaction_file, cluster_file, coords_file, zpath_file, layout = "circle";
  std::string importance_type = "agnostic";
  std::vector<std::string> bench_predictors;
  std::size_t num_perm = vivid::kDefaultNumPerm, reps = 5, top = 0;
  bool normalized = false, do_reorder = false, pairs = false, remove_node = false;
  std::optional<double> int_threshold, int_quantile;

  // compute
  auto* compute = app.add_subcommand("compute", "Compute a VIVI matrix");
  add_run(compute, run);
  add_model(compute, model);
  add_pd(compute, pd, false);
  compute->add_option("--num-perm", num_perm, "Permutation replicates");
  compute->add_flag("--normalized,!--unnormalized", normalized, "Normalized H-statistic (default: unnormalized)");
  compute->add_option("--importance-type", importance_type, "agnostic | impurity");
  compute->add_flag("--reorder,!--no-reorder", do_reorder, "Seriate the matrix (default: off)");
  compute->add_option("--out", out, "Output matrix JSON");
  compute->add_option("--long-out", long_out, "Also write the long table CSV");

  // reorder / average
  auto* reorder_cmd = app.add_subcommand("reorder", "Average the given matrices and seriate the result");
  add_run(reorder_cmd, run);
  reorder_cmd->add_option("--matrix", matrix, "Comma-separated matrix JSON files");
  reorder_cmd->add_option("--out", out, "Output matrix JSON");
  reorder_cmd->add_option("--apply-to", apply_to, "Matrices to put in the resulting order");
  reorder_cmd->add_option("--apply-out", apply_out, "Outputs for --apply-to (default <name>.reordered.json)");

  auto* average = app.add_subcommand("average", "Elementwise mean of matrices aligned by name");
  add_run(average, run);
  average->add_option("--matrix", matrix, "Comma-separated matrix JSON files");
  average->add_option("--out", out, "Output matrix JSON");

  // plot
  auto* plot_cmd = app.add_subcommand("plot", "Render an SVG display");
  plot_cmd->require_subcommand(1);
  auto* heatmap = plot_cmd->add_subcommand("heatmap", "VIVI heatmap");
  auto* network = plot_cmd->add_subcommand("network", "VIVI network");
  auto* pdp_vars = plot_cmd->add_subcommand("pdp-vars", "Univariate PDPs with ICE curves");
  auto* pdp_pairs = plot_cmd->add_subcommand("pdp-pairs", "Generalized pairs PDP");
  auto* pdp_zen = plot_cmd->add_subcommand("pdp-zen", "Zen PDP");
  for (auto* sub : {heatmap, network, pdp_vars, pdp_pairs, pdp_zen}) {
    add_run(sub, run);
    add_plot(sub, plot);
  }
  for (auto* sub : {heatmap, network}) {
    sub->add_option("--matrix", matrix, "Matrix JSON");
    sub->add_option("--imp-lims", imp_lims, "Importance color limits lo,hi");
    sub->add_option("--int-lims", int_lims, "Interaction color limits lo,hi");
  }
  network->add_option("--int-threshold", int_threshold, "Drop edges with interaction <= threshold");
  network->add_option("--int-quantile", int_quantile, "Threshold as a quantile of the interactions");
  network->add_flag("--remove-node,!--keep-node", remove_node, "Drop nodes left without edges");
  network->add_option("--cluster", cluster_file, "JSON object mapping variable to group id");
  network->add_option("--layout", layout, "circle | star | custom");
  network->add_option("--coords", coords_file, "JSON array of [x, y] per variable (custom layout)");
  for (auto* sub : {pdp_vars, pdp_pairs, pdp_zen}) {
    add_model(sub, model);
    add_pd(sub, pd, sub != pdp_vars);
  }
  pdp_vars->add_option("--vars", vars_flag, "Variables to plot (default: all predictors)");
  pdp_vars->add_option("--matrix", matrix, "Take the variable order from this matrix");
  pdp_vars->add_option("--top", top, "Plot only the first N variables");
  pdp_vars->add_option("--fitlims", fitlims, "Prediction color limits lo,hi");
  pdp_pairs->add_option("--vars", vars_flag, "Variables to plot (default: all predictors)");
  pdp_pairs->add_option("--matrix", matrix, "Take the variable order from this matrix");
  pdp_pairs->add_option("--top", top, "Plot only the first N variables");
  pdp_pairs->add_option("--fitlims", fitlims, "pdp | all");
  pdp_zen->add_option("--matrix", matrix, "Matrix JSON used to build the zpath");
  pdp_zen->add_option("--zpath", zpath_file, "Precomputed zpath JSON");
  pdp_zen->add_option("--fitlims", fitlims, "Prediction color limits lo,hi");
  add_zpath(pdp_zen, zopt);

  // zpath
  auto* zpath_cmd = app.add_subcommand("zpath", "Zen-path from an interaction matrix");
  add_run(zpath_cmd, run);
  zpath_cmd->add_option("--matrix", matrix, "Matrix JSON");
  zpath_cmd->add_option("--out", out, "Output zpath JSON");
  add_zpath(zpath_cmd, zopt);

  // pd
  auto* pd_cmd = app.add_subcommand("pd", "Partial dependence surfaces as JSON");
  add_run(pd_cmd, run);
  add_model(pd_cmd, model);
  add_pd(pd_cmd, pd, true);
  pd_cmd->add_option("--vars", vars_flag, "Variables (default: all predictors)");
  pd_cmd->add_flag("--pairs", pairs, "Also compute every bivariate surface");
  pd_cmd->add_option("--out", out, "Output JSON");

  // table / import
  auto* table = app.add_subcommand("table", "Long table CSV of a matrix");
  add_run(table, run);
  table->add_option("--matrix", matrix, "Matrix JSON");
  table->add_option("--out", out, "Output CSV");

  auto* import_cmd = app.add_subcommand("import", "Build a matrix from external importance and interaction values");
  add_run(import_cmd, run);
  import_cmd->add_option("--importance", importance_file, "CSV with header Variable,Importance");
  import_cmd->add_option("--interaction", interaction_file, "CSV with header Variable_1,Variable_2,Interaction");
  import_cmd->add_option("--out", out, "Output matrix JSON");

  // bench
  auto* bench = app.add_subcommand("bench", "Mean compute time per predictor");
  add_run(bench, run);
  add_model(bench, model, false);
  add_pd(bench, pd, false);
  bench->add_option("--num-perm", num_perm, "Permutation replicates");
  bench->add_option("--predictor", bench_predictors, "Predictor spec (repeatable)");
  bench->add_option("--reps", reps, "Runs per predictor");
  bench->add_option("--out", out, "Output CSV (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "vivid: error: " << e.what() << "\n";
    return 1;
  }

  try {
    CLI::App* leaf = &app;
    while (!leaf->get_subcommands().empty()) leaf = leaf->get_subcommands().front();
    if (!run.config.empty()) apply_config(app, leaf, run.config);
    apply_seed_env(leaf);
    if (run.workers < 1) throw Error("workers must be at least 1");
    const vivid::PlotSpec spec = plot_spec(plot);

    if (leaf == compute) {
      require(out, "out");
      const auto d = load_data(model);
      vivid::ViviOptions o;
      o.grid_size = pd.grid_size;
      o.nmax = pd.nmax;
      o.num_perm = num_perm;
      o.normalized = normalized;
      o.importance_type = importance_type;
      o.seed = run.seed;
      o.reorder = do_reorder;
      o.workers = run.workers;
      vivid::validate(o);
      const auto p = make_predictor(model.predictor, model, d, run.seed);
      const auto v = vivid::compute(*p, d, o);
      vivid::io::save_vivi(out, v);
      if (!long_out.empty()) vivid::io::write_text(long_out, vivid::io::long_table_csv(v));
      print_summary(v);
    } else if (leaf == reorder_cmd) {
      require(out, "out");
      const auto mats = load_matrices(matrix);
      const auto base = mats.size() == 1 ? mats[0] : vivid::average_matrices(mats);
      const auto ordered = vivid::reorder(base);
      vivid::io::save_vivi(out, ordered);
      const auto targets = split(apply_to);
      const auto outs = split(apply_out);
      if (!outs.empty() && outs.size() != targets.size())
        throw Error("--apply-out needs one path per --apply-to file");
      for (std::size_t k = 0; k < targets.size(); ++k) {
        const auto v = vivid::apply_order(vivid::io::load_vivi(targets[k]), ordered.vars);
        vivid::io::save_vivi(outs.empty() ? applied_path(targets[k]) : std::filesystem::path(outs[k]), v);
      }
    } else if (leaf == average) {
      require(out, "out");
      vivid::io::save_vivi(out, vivid::average_matrices(load_matrices(matrix)));
    } else if (leaf == heatmap) {
      require(plot.out, "out");
      require(matrix, "matrix");
      const auto v = vivid::io::load_vivi(matrix);
      vivid::svg::write_file(plot.out, vivid::render_heatmap(v, parse_lims(imp_lims, "imp-lims"),
                                                        parse_lims(int_lims, "int-lims"), spec));
    } else if (leaf == network) {
      require(plot.out, "out");
      require(matrix, "matrix");
      const auto v = vivid::io::load_vivi(matrix);
      vivid::NetworkOptions o;
      if (int_threshold && int_quantile) throw Error("give --int-threshold or --int-quantile, not both");
      o.int_threshold = int_threshold;
      if (int_quantile) o.int_threshold = vivid::interaction_quantile(v, *int_quantile);
      o.remove_node = remove_node;
      o.imp_lims = parse_lims(imp_lims, "imp-lims");
      o.int_lims = parse_lims(int_lims, "int-lims");
      if (layout == "circle")
        o.layout = vivid::LayoutKind::circle;
      else if (layout == "star")
        o.layout = vivid::LayoutKind::star;
      else if (layout == "custom")
        o.layout = vivid::LayoutKind::custom;
      else
        throw Error("--layout must be circle, star or custom");
      if (!cluster_file.empty()) {
        const auto j = vivid::io::parse_json(vivid::io::read_text(cluster_file), "cluster");
        if (!j.is_object()) throw Error("cluster file must map variable names to group ids");
        std::map<std::string, int> groups;
        for (const auto& [k, g] : j.items()) {
          if (!g.is_number_integer()) throw Error("cluster group for '" + k + "' must be an integer");
          groups[k] = g.get<int>();
        }
        o.cluster = std::move(groups);
      }
      if (o.layout == vivid::LayoutKind::custom) {
        require(coords_file, "coords");
        const auto j = vivid::io::parse_json(vivid::io::read_text(coords_file), "coords");
        for (const auto& xy : j) {
          if (!xy.is_array() || xy.size() != 2) throw Error("coords must be [x, y] pairs");
          o.coords.push_back({xy[0].get<double>(), xy[1].get<double>()});
        }
      }
      vivid::svg::write_file(plot.out, vivid::render_network(v, o, spec));
    } else if (leaf == pdp_vars || leaf == pdp_pairs) {
      require(plot.out, "out");
      const auto d = load_data(model);
      auto vars = matrix.empty() || !vars_flag.empty() ? resolve_vars(vars_flag, d)
                                                      : vivid::io::load_vivi(matrix).vars;
      for (const auto& v : vars) (void)d.predictor_index(v);
      if (top > 0 && top < vars.size()) vars.resize(top);
      const auto p = make_predictor(model.predictor, model, d, run.seed);
      const auto opts = pd_options(pd, run);
      std::vector<vivid::PDSurface> uni;
      for (const auto& v : vars) uni.push_back(vivid::pd_1d(*p, d, v, opts));
      if (leaf == pdp_vars) {
        vivid::svg::write_file(plot.out, vivid::render_pdp_vars(uni, spec, parse_lims(fitlims, "fitlims")));
      } else {
        vivid::FitLims lims = vivid::FitLims::pdp;
        if (fitlims == "all")
          lims = vivid::FitLims::all;
        else if (!fitlims.empty() && fitlims != "pdp")
          throw Error("--fitlims must be pdp or all");
        std::vector<vivid::PDSurface> bi;
        for (std::size_t a = 0; a < vars.size(); ++a)
          for (std::size_t b = a + 1; b < vars.size(); ++b) bi.push_back(vivid::pd_2d(*p, d, vars[a], vars[b], opts));
        const auto fitted = p->predict(d.features());
        vivid::svg::write_file(plot.out, vivid::render_pdp_pairs(d, vars, uni, bi, fitted, lims, spec));
      }
    } else if (leaf == pdp_zen) {
      require(plot.out, "out");
      const auto d = load_data(model);
      vivid::ZPath zp;
      if (!zpath_file.empty()) {
        zp = vivid::io::parse_zpath(vivid::io::read_text(zpath_file));
      } else {
        require(matrix, "matrix (or --zpath)");
        zp = make_zpath(vivid::io::load_vivi(matrix), zopt);
      }
      const auto p = make_predictor(model.predictor, model, d, run.seed);
      const auto opts = pd_options(pd, run);
      std::vector<vivid::PDSurface> bi;
      for (const auto& [a, b] : vivid::zpath_pairs(zp))
        if (!vivid::detail::find_2d(bi, a, b)) bi.push_back(vivid::pd_2d(*p, d, a, b, opts));
      vivid::svg::write_file(plot.out, vivid::render_pdp_zen(d, zp, bi, spec, parse_lims(fitlims, "fitlims")));
    } else if (leaf == zpath_cmd) {
      require(out, "out");
      require(matrix, "matrix");
      vivid::io::write_text(out, vivid::io::dump_zpath(make_zpath(vivid::io::load_vivi(matrix), zopt)));
    } else if (leaf == pd_cmd) {
      require(out, "out");
      const auto d = load_data(model);
      const auto vars = resolve_vars(vars_flag, d);
      const auto p = make_predictor(model.predictor, model, d, run.seed);
      const auto opts = pd_options(pd, run);
      std::vector<vivid::PDSurface> surfaces;
      for (const auto& v : vars) surfaces.push_back(vivid::pd_1d(*p, d, v, opts));
      if (pairs)
        for (std::size_t a = 0; a < vars.size(); ++a)
          for (std::size_t b = a + 1; b < vars.size(); ++b)
            surfaces.push_back(vivid::pd_2d(*p, d, vars[a], vars[b], opts));
      vivid::io::write_text(out, vivid::io::dump_surfaces(surfaces));
    } else if (leaf == table) {
      require(out, "out");
      require(matrix, "matrix");
      vivid::io::write_text(out, vivid::io::long_table_csv(vivid::io::load_vivi(matrix)));
    } else if (leaf == import_cmd) {
      require(out, "out");
      require(importance_file, "importance");
      std::vector<std::pair<std::string, double>> imp;
      const auto imp_rows = vivid::csv::parse(vivid::io::read_text(importance_file));
      if (imp_rows.empty() || imp_rows[0] != vivid::csv::Record{"Variable", "Importance"})
        throw Error("importance CSV must have header Variable,Importance");
      for (std::size_t k = 1; k < imp_rows.size(); ++k) {
        if (imp_rows[k].size() != 2) throw Error("importance CSV row " + std::to_string(k) + " needs 2 fields");
        imp.emplace_back(imp_rows[k][0], parse_number(imp_rows[k][1], "importance"));
      }
      std::vector<std::tuple<std::string, std::string, double>> inter;
      if (!interaction_file.empty()) {
        const auto rows = vivid::csv::parse(vivid::io::read_text(interaction_file));
        if (rows.empty() || rows[0] != vivid::csv::Record{"Variable_1", "Variable_2", "Interaction"})
          throw Error("interaction CSV must have header Variable_1,Variable_2,Interaction");
        for (std::size_t k = 1; k < rows.size(); ++k) {
          if (rows[k].size() != 3) throw Error("interaction CSV row " + std::to_string(k) + " needs 3 fields");
          inter.emplace_back(rows[k][0], rows[k][1], parse_number(rows[k][2], "interaction"));
        }
      }
      vivid::io::save_vivi(out, vivid::import_external(imp, inter));
    } else if (leaf == bench) {
      if (reps < 1) throw Error("--reps must be at least 1");
      const auto d = load_data(model);
      const auto specs = bench_predictors;
      if (specs.empty()) throw Error("missing --predictor");
      vivid::ViviOptions o;
      o.grid_size = pd.grid_size;
      o.nmax = pd.nmax;
      o.num_perm = num_perm;
      o.seed = run.seed;
      o.workers = run.workers;
      vivid::validate(o);
      std::string csv_out = "predictor,mean_seconds\n";
      for (const auto& s : specs) {
        const auto p = make_predictor(s, model, d, run.seed);
        double total = 0.0;
        for (std::size_t r = 0; r < reps; ++r) {
          const auto t0 = std::chrono::steady_clock::now();
          (void)vivid::compute(*p, d, o);
          total += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.3f", total / static_cast<double>(reps));
        csv_out += vivid::csv::join({s, buf}) + "\n";
      }
      if (out.empty())
        std::cout << csv_out;
      else
        vivid::io::write_text(out, csv_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "vivid: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
