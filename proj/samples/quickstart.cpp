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

// Fit a model with an x1*x2 interaction, compute its VIVI matrix and draw a
// heatmap and a zen PDP.
//
//   quickstart [out_dir]

#include <cstdio>
#include <filesystem>
#include <string>

#include "vivid/vivid.hpp"

int main(int argc, char** argv) {
  const std::filesystem::path out = argc > 1 ? argv[1] : ".";
  try {
    vivid::Rng rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::string text = "x1,x2,x3,x4,y\n";
    for (int i = 0; i < 200; ++i) {
      const double x1 = u(rng), x2 = u(rng), x3 = u(rng), x4 = u(rng);
      const double y = 2 * x1 + x2 + 3 * x1 * x2 + 0.5 * x3;
      text += vivid::format_number(x1) + "," + vivid::format_number(x2) + "," + vivid::format_number(x3) +
              "," + vivid::format_number(x4) + "," + vivid::format_number(y) + "\n";
    }
    const auto d = vivid::parse_dataset(text, "y");
    const auto model = vivid::fit_builtin(vivid::BuiltinKind::bagged_trees, d);

    vivid::ViviOptions opts;
    opts.grid_size = 20;
    opts.seed = 7;
    const auto v = vivid::compute(*model, d, opts);
    for (std::size_t i = 0; i < v.size(); ++i)
      std::printf("%-3s importance %.4f\n", v.vars[i].c_str(), v.importance(i));
    std::printf("H(x1, x2) = %.4f\n", v.interaction(0, 1));

    vivid::io::save_vivi(out / "quickstart_vivi.json", v);
    vivid::svg::write_file(out / "quickstart_heatmap.svg",
                           vivid::render_heatmap(vivid::reorder(v), std::nullopt, std::nullopt));

    const auto g = vivid::build_graph(v, vivid::interaction_quantile(v, 0.5));
    const auto zp = vivid::zpath_strict(g, false);
    std::vector<vivid::PDSurface> bi;
    vivid::PdOptions pd;
    pd.grid_size = 20;
    for (const auto& [a, b] : vivid::zpath_pairs(zp)) bi.push_back(vivid::pd_2d(*model, d, a, b, pd));
    vivid::svg::write_file(out / "quickstart_zen.svg", vivid::render_pdp_zen(d, zp, bi));
  } catch (const std::exception& e) {
    std::fprintf(stderr, "quickstart: %s\n", e.what());
    return 1;
  }
  return 0;
}
