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


// Acceptance runner. Prints one PASS/FAIL line per criterion with its
// wall time and exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>

#include "render_fixtures.hpp"
#include "test_support.hpp"

namespace {

namespace ts = testing_support;
namespace oracle = testing_support::oracle;

struct Check {
  bool ok = true;
  std::size_t checks = 0;
  std::string detail;  // first failure
  void expect(bool cond, const std::string& what) {
    ++checks;
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

int failures = 0;

void criterion(const char* name, double limit_s, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (c.ok && limit_s > 0 && secs > limit_s) {
    c.ok = false;
    c.detail = "over the time limit";
  }
  char limit[32] = "none";
  if (limit_s > 0) std::snprintf(limit, sizeof(limit), "%gs", limit_s);
  std::printf("%s  %-28s %8.2fs  limit %-5s  %zu checks%s%s\n", c.ok ? "PASS" : "FAIL", name, secs, limit, c.checks,
              c.ok ? "" : "  ", c.detail.c_str());
  std::fflush(stdout);
  if (!c.ok) ++failures;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string cli(const std::string& args) { return std::string(VIVID_CLI) + " " + args; }

// ---------------------------------------------------------------------------

void additive_null(Check& c) {
  const ts::RowFn f = [](const auto& x) { return x[0] + x[1]; };
  const auto d = ts::uniform_dataset(50, 2, 11, f);
  const auto p = ts::predictor_for(d, f);
  for (bool normalized : {false, true}) {
    vivid::ViviOptions o;
    o.normalized = normalized;
    const auto v = vivid::compute(*p, d, o);
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j)
        if (i != j)
          c.expect(v.values[i][j] <= 1e-9, "H(" + v.vars[i] + "," + v.vars[j] + ") = " + num(v.values[i][j]) +
                                               (normalized ? " normalized" : " unnormalized"));
  }
}

void unused_variable(Check& c) {
  const ts::RowFn f = [](const auto& x) { return x[0] * x[1] + x[2] * x[2]; };  // ignores x4
  const auto d = ts::uniform_dataset(40, 4, 5, f);
  const auto p = ts::predictor_for(d, f);
  for (bool normalized : {false, true}) {
    vivid::ViviOptions o;
    o.grid_size = 20;
    o.normalized = normalized;
    o.seed = 9;
    const auto v = vivid::compute(*p, d, o);
    const std::size_t j = v.index_of("x4");
    c.expect(v.importance(j) == 0.0, "importance(x4) = " + num(v.importance(j)));
    for (std::size_t k = 0; k < v.size(); ++k)
      if (k != j) {
        c.expect(v.values[j][k] == 0.0, "H(x4," + v.vars[k] + ") = " + num(v.values[j][k]));
        c.expect(v.values[k][j] == 0.0, "H(" + v.vars[k] + ",x4) = " + num(v.values[k][j]));
      }
  }
}

struct Fixture {
  std::string name;
  std::size_t n_rows;
  std::size_t m;
  ts::RowFn f;
};

void oracle_equivalence(Check& c) {
  const std::vector<Fixture> fixtures = {
      {"product+sin", 6, 2, [](const auto& x) { return x[0] * x[1] + std::sin(3 * x[0]); }},
      {"square-times", 10, 3, [](const auto& x) { return x[0] * x[0] * x[2] + std::exp(x[1]) / (1 + x[2]); }},
      {"max-minus", 8, 3, [](const auto& x) { return std::max(x[0], x[1]) - x[2] * x[0]; }},
      {"additive", 7, 3, [](const auto& x) { return 2 * x[0] - x[1] + 0.5 * x[2]; }},
      {"tiny", 3, 2, [](const auto& x) { return x[0] / (1 + x[1] * x[1]); }},
  };
  auto close = [&](double a, double b, const std::string& what) {
    c.expect(ts::rel_close(a, b, 1e-12), what + ": " + num(a) + " vs " + num(b));
  };
  std::uint64_t seed = 100;
  for (const auto& fx : fixtures) {
    // Response with noise so the permutation baseline is not zero.
    vivid::Rng noise(seed);
    std::normal_distribution<double> eps(0.0, 0.1);
    const auto d = ts::uniform_dataset(fx.n_rows, fx.m, seed++, [&](const auto& x) { return fx.f(x) + eps(noise); },
                                       -1.0, 2.0);
    const auto p = ts::predictor_for(d, fx.f);
    const auto rows = ts::feature_rows(d);
    const auto names = d.predictor_names();
    const auto yr = d.response_values();
    const std::vector<double> y(yr.begin(), yr.end());
    for (std::size_t g = 1; g <= 5; ++g) {
      std::vector<std::vector<double>> grids;
      for (std::size_t j = 0; j < fx.m; ++j) {
        double lo = rows[0][j], hi = rows[0][j];
        for (const auto& r : rows) {
          lo = std::min(lo, r[j]);
          hi = std::max(hi, r[j]);
        }
        grids.push_back(oracle::grid(lo, hi, g));
      }
      const std::string tag = fx.name + " g=" + std::to_string(g);
      vivid::PdOptions po;
      po.grid_size = g;
      po.n_ice = std::size_t{0};
      for (std::size_t j = 0; j < fx.m; ++j) {
        const auto s = vivid::pd_1d(*p, d, names[j], po);
        const auto want = oracle::pd1(fx.f, rows, j, grids[j]);
        c.expect(s.values.size() == want.size(), tag + " pd_1d size");
        for (std::size_t k = 0; k < std::min(want.size(), s.values.size()); ++k) {
          close(s.grids[0].points[k], grids[j][k], tag + " grid " + names[j]);
          close(s.values[k], want[k], tag + " pd_1d " + names[j]);
        }
      }
      for (std::size_t a = 0; a < fx.m; ++a)
        for (std::size_t b = a + 1; b < fx.m; ++b) {
          const auto s = vivid::pd_2d(*p, d, names[a], names[b], po);
          const auto want = oracle::pd2(fx.f, rows, a, grids[a], b, grids[b]);
          c.expect(s.values.size() == want.size(), tag + " pd_2d size");
          for (std::size_t k = 0; k < std::min(want.size(), s.values.size()); ++k)
            close(s.values[k], want[k], tag + " pd_2d " + names[a] + ":" + names[b]);
          for (bool normalized : {false, true}) {
            vivid::HOptions ho;
            ho.grid_size = g;
            ho.normalized = normalized;
            const double h = vivid::h_statistic(*p, d, names[a], names[b], ho);
            close(h, oracle::h(fx.f, rows, a, grids[a], b, grids[b], normalized), tag + " H " + names[a] + ":" + names[b]);
            const double h_rev = vivid::h_statistic(*p, d, names[b], names[a], ho);
            c.expect(h == h_rev, tag + " H symmetry");
          }
        }
    }
    const std::size_t num_perm = 3;
    const std::uint64_t perm_seed = 77;
    const auto pi = vivid::permutation_importance(*p, d, num_perm, perm_seed);
    for (std::size_t j = 0; j < fx.m; ++j) {
      double acc = 0.0;
      for (std::size_t r = 0; r < num_perm; ++r) {
        vivid::Rng rng(vivid::derive_seed(perm_seed, {0x7065726dULL, j, r}));
        const double inc = oracle::permuted_increase(fx.f, rows, y, j, vivid::random_permutation(rows.size(), rng));
        close(pi.replicates[j][r], inc, fx.name + " permutation replicate " + names[j]);
        acc += inc;
      }
      close(pi.importance[j], acc / num_perm, fx.name + " permutation importance " + names[j]);
    }
  }
}

vivid::ViviMatrix random_matrix(std::size_t m, vivid::Rng& rng, double diag_scale = 5.0) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < m; ++i) names.push_back("v" + std::string(1, static_cast<char>('a' + i)));
  auto v = vivid::ViviMatrix::zeros(names);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    v.values[i][i] = diag_scale * u(rng);
    for (std::size_t j = i + 1; j < m; ++j) v.values[i][j] = v.values[j][i] = u(rng);
  }
  return v;
}

void seriation(Check& c) {
  vivid::Rng rng(2024);
  for (int t = 0; t < 50; ++t) {
    const auto v = random_matrix(2 + t % 9, rng);
    const auto r = vivid::reorder(v);
    std::vector<double> d0, d1, o0, o1;
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) {
        (i == j ? d0 : o0).push_back(v.values[i][j]);
        (i == j ? d1 : o1).push_back(r.values[i][j]);
      }
    std::sort(d0.begin(), d0.end());
    std::sort(d1.begin(), d1.end());
    std::sort(o0.begin(), o0.end());
    std::sort(o1.begin(), o1.end());
    c.expect(d0 == d1, "diagonal multiset changed");
    c.expect(o0 == o1, "off-diagonal multiset changed");
    c.expect(vivid::apply_order(v, r.vars) == r, "reorder differs from apply_order");
  }

  // m = 4 fixtures where one variable dominates both importance and interaction.
  std::vector<std::pair<vivid::ViviMatrix, std::string>> fixtures = {
      {vivid::import_external({{"a", 1}, {"b", 2}, {"q", 9}, {"d", 0.5}},
                              {{"a", "q", 0.9}, {"b", "q", 0.8}, {"d", "q", 0.7}, {"a", "b", 0.1}}),
       "q"},
      {vivid::import_external({{"w", 3}, {"x", 3}, {"y", 3.5}, {"z", 1}},
                              {{"w", "y", 2}, {"x", "y", 1}, {"w", "x", 0.3}, {"x", "z", 0.2}}),
       "y"},
      {vivid::import_external({{"lstat", 5}, {"rm", 4.7}, {"dis", 1}, {"crim", 0.5}},
                              {{"crim", "lstat", 1.5}, {"dis", "lstat", 1.0}, {"lstat", "rm", 0.97}, {"dis", "rm", 0.2}}),
       "lstat"},
  };
  for (int t = 0; t < 30; ++t) {
    auto v = random_matrix(4, rng);
    const std::size_t q = static_cast<std::size_t>(t % 4);
    v.values[q][q] = 6.0;
    for (std::size_t j = 0; j < 4; ++j)
      if (j != q) v.values[q][j] = v.values[j][q] = 1.0 + 0.1 * static_cast<double>(j);
    fixtures.emplace_back(v, v.vars[q]);
  }
  for (const auto& [v, dominant] : fixtures) {
    const auto w = vivid::seriation_weights(v);
    const auto mins = oracle::ordering_minimizers(w);
    const std::size_t q = v.index_of(dominant);
    for (const auto& perm : mins) c.expect(perm[0] == q, "exhaustive search does not put " + dominant + " first");
    c.expect(vivid::reorder(v).vars[0] == dominant, "reorder does not put " + dominant + " first");
  }
}

using Pair = std::pair<std::string, std::string>;

Pair norm(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return {a, b};
}

std::multiset<Pair> consecutive(const vivid::ZPath& zp) {
  std::multiset<Pair> out;
  for (const auto& [a, b] : vivid::zpath_pairs(zp)) out.insert(norm(a, b));
  return out;
}

void zenpath(Check& c) {
  vivid::Rng rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const auto v = random_matrix(3 + t % 8, rng);
    double top = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = i + 1; j < v.size(); ++j) top = std::max(top, v.values[i][j]);
    const double cutoff = top * u(rng);
    std::multiset<Pair> want;
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = i + 1; j < v.size(); ++j)
        if (v.values[i][j] > cutoff) want.insert(norm(v.vars[i], v.vars[j]));
    const auto g = vivid::build_graph(v, cutoff);
    c.expect(consecutive(vivid::zpath_strict(g, false)) == want, "strict path does not reproduce the edge set");
    const auto greedy = consecutive(vivid::zpath_greedy(g));
    for (const auto& e : want) c.expect(greedy.count(e) >= 1, "greedy misses " + e.first + ":" + e.second);
  }
  // 13 variables: the 0.9 quantile of 78 distinct interactions leaves 8 edges, hence 8 panels.
  const auto v = random_matrix(13, rng);
  const auto g = vivid::build_graph(v, vivid::interaction_quantile(v, 0.9));
  c.expect(g.edges.size() == 8, "expected 8 edges above the 0.9 quantile, got " + std::to_string(g.edges.size()));
  c.expect(vivid::zpath_pairs(vivid::zpath_strict(g, false)).size() == 8, "expected 8 zen panels");
}

void boston(Check& c) {
  const auto d = vivid::load_csv(std::string(VIVID_SOURCE_DIR) + "/data/boston.csv", "medv");
  vivid::FitOptions fit;
  fit.trees.seed = 1701;
  const auto p = vivid::fit_builtin(vivid::BuiltinKind::bagged_trees, d, fit);
  vivid::ViviOptions o;
  o.seed = 1701;
  c.expect(o.grid_size == 50 && o.nmax == 500 && o.num_perm == 4, "library defaults changed");
  const auto v = vivid::compute(*p, d, o);
  c.expect(v.size() == 13, "expected 13 predictors");
  std::vector<std::size_t> idx(v.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v.importance(a) > v.importance(b); });
  c.expect(v.vars[idx[0]] == "lstat", "top importance is " + v.vars[idx[0]]);
  c.expect(v.vars[idx[0]] == "rm" || v.vars[idx[1]] == "rm", "rm is not in the top two");
  std::size_t bi = 0, bj = 1;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (v.interaction(i, j) > v.interaction(bi, bj)) bi = i, bj = j;
  c.expect(v.vars[bi] == "lstat" || v.vars[bj] == "lstat",
           "maximal interaction pair is " + v.vars[bi] + ":" + v.vars[bj]);
}

void determinism(Check& c) {
  ts::TempDir dir;
  const std::string data = std::string(VIVID_SOURCE_DIR) + "/data/boston.csv";
  const std::string model = "--data " + data + " --response medv --seed 1701";
  auto run = [&](const std::string& args) {
    const auto r = ts::run_command(cli(args));
    c.expect(r.exit_code == 0, args + ": " + r.output);
  };
  for (const char* w : {"1", "8"}) {
    const std::string sfx = std::string("-w") + w;
    const std::string workers = std::string(" --workers ") + w;
    run("compute " + model + workers + " --out " + dir.file("m" + sfx + ".json"));
    const std::string m = " --matrix " + dir.file("m" + sfx + ".json");
    run("plot heatmap" + m + workers + " --out " + dir.file("heatmap" + sfx + ".svg"));
    run("plot network" + m + workers + " --int-quantile 0.8 --out " + dir.file("network" + sfx + ".svg"));
    run("plot pdp-vars " + model + m + workers + " --top 4 --out " + dir.file("vars" + sfx + ".svg"));
    run("plot pdp-pairs " + model + m + workers + " --top 3 --grid-size 20 --out " + dir.file("pairs" + sfx + ".svg"));
    run("plot pdp-zen " + model + m + workers + " --grid-size 20 --out " + dir.file("zen" + sfx + ".svg"));
  }
  for (const char* f : {"m%s.json", "heatmap%s.svg", "network%s.svg", "vars%s.svg", "pairs%s.svg", "zen%s.svg"}) {
    char a[64], b[64];
    std::snprintf(a, sizeof(a), f, "-w1");
    std::snprintf(b, sizeof(b), f, "-w8");
    const auto ta = ts::read_file(dir.file(a)), tb = ts::read_file(dir.file(b));
    c.expect(!ta.empty() && ta == tb, std::string(a) + " and " + b + " differ");
  }
}

void svg_structure(Check& c) {
  std::set<std::string> kinds;
  for (const auto& k : render_fixtures::cases()) {
    const auto golden = ts::read_file(render_fixtures::golden_path(k.name));
    c.expect(k.svg == golden, k.name + " differs from its golden file");
    c.expect(render_fixtures::xml_well_formed(k.svg), k.name + " is not well-formed");
    kinds.insert(k.name.substr(0, k.name.find('_')));
  }
  c.expect(kinds == std::set<std::string>{"heatmap", "network", "pdp"}, "missing plot kinds");
  // Squished colors: the legend reports the forced limits and out-of-range cells take the end colors.
  for (const auto& k : render_fixtures::cases()) {
    if (k.name != "heatmap_3_squish") continue;
    c.expect(k.svg.find("id=\"legend-importance\" data-lo=\"0\" data-hi=\"8\"") != std::string::npos,
             "importance legend limits");
    c.expect(k.svg.find("id=\"legend-interaction\" data-lo=\"0\" data-hi=\"1\"") != std::string::npos,
             "interaction legend limits");
  }
}

void defaults_audit(Check& c) {
  const auto help = ts::run_command(cli("compute --help"));
  for (const char* s : {"--grid-size", "[50]", "--nmax", "[500]", "--num-perm", "[4]", "unnormalized"})
    c.expect(help.output.find(s) != std::string::npos, std::string("compute help lacks ") + s);
  const auto vars_help = ts::run_command(cli("plot pdp-vars --help"));
  c.expect(vars_help.output.find("[30]") != std::string::npos, "pdp-vars help lacks [30]");

  ts::TempDir dir;
  std::string text = "x1,x2,y\n";
  for (int i = 0; i < 12; ++i) text += std::to_string(i) + "," + std::to_string((i * 7) % 5) + "," + std::to_string(i * i) + "\n";
  vivid::io::write_text(dir.file("d.csv"), text);
  const auto r = ts::run_command(cli("compute --data " + dir.file("d.csv") + " --response y --predictor builtin:linear --out " +
                                     dir.file("m.json")));
  c.expect(r.exit_code == 0, r.output);
  const auto j = vivid::io::Json::parse(ts::read_file(dir.file("m.json")));
  c.expect(j["meta"]["gridSize"] == 50, "meta gridSize");
  c.expect(j["meta"]["nmax"] == 500, "meta nmax");
  c.expect(j["meta"]["numPerm"] == 4, "meta numPerm");
  c.expect(j["normalized"] == false, "normalized default");

  const auto pd = ts::run_command(cli("pd --data " + dir.file("d.csv") + " --response y --predictor builtin:linear --vars x1 --out " +
                                      dir.file("pd.json")));
  c.expect(pd.exit_code == 0, pd.output);
  const auto s = vivid::io::parse_surfaces(ts::read_file(dir.file("pd.json")));
  c.expect(s.size() == 1 && s[0].ice && s[0].ice->rows.size() == 12, "nIce default caps at the row count");
  c.expect(s.size() == 1 && s[0].grids[0].size() == 50, "gridSize default in pd");

  vivid::PdOptions po;
  c.expect(std::get<std::size_t>(po.n_ice) == 30, "library nIce default");
}

}  // namespace

int main() {
  criterion("additive-null-h", 1, additive_null);
  criterion("unused-variable-zero", 1, unused_variable);
  criterion("oracle-equivalence", 10, oracle_equivalence);
  criterion("seriation", 5, seriation);
  criterion("zenpath-coverage", 5, zenpath);
  criterion("boston-qualitative", 60, boston);
  criterion("workers-determinism", 0, determinism);
  criterion("svg-structure", 0, svg_structure);
  criterion("defaults-audit", 0, defaults_audit);
  std::printf("%s: %d failing\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
