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


#include <gtest/gtest.h>

#include "test_support.hpp"

namespace {

namespace io = vivid::io;

vivid::ViviMatrix sample_matrix() {
  auto v = vivid::import_external({{"lstat", 4.8097023712345}, {"nox", 1.2}, {"rm", 0.1 + 0.2}},
                                  {{"lstat", "nox", 0.06}, {"nox", "rm", 1.0 / 3.0}});
  v.importance_type = "agnostic";
  v.meta.grid_size = 50;
  v.meta.nmax = 500;
  v.meta.num_perm = 4;
  v.meta.seed = 1701;
  v.meta.perm_replicates = {{1, 2, 3, 4}, {0.5, 0.5, 0.5, 0.5}, {0, 0, 0, 0}};
  return v;
}

TEST(ViviJson, SchemaKeysInOrder) {
  const auto text = io::dump_vivi(sample_matrix());
  const auto j = io::Json::parse(text);
  std::vector<std::string> keys;
  for (const auto& [k, _] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"vars", "matrix", "importance_type", "normalized", "meta"}));
  EXPECT_EQ(j["meta"]["gridSize"], 50);
  EXPECT_EQ(j["meta"]["nmax"], 500);
  EXPECT_EQ(j["meta"]["numPerm"], 4);
  EXPECT_EQ(j["meta"]["seed"], 1701);
  EXPECT_EQ(j["normalized"], false);
  EXPECT_EQ(text.back(), '\n');
}

TEST(ViviJson, RoundTripIsExact) {
  const auto v = sample_matrix();
  EXPECT_EQ(io::parse_vivi(io::dump_vivi(v)), v);
  EXPECT_EQ(io::dump_vivi(io::parse_vivi(io::dump_vivi(v))), io::dump_vivi(v));
  testing_support::TempDir dir;
  io::save_vivi(dir.file("m.json"), v);
  EXPECT_EQ(io::load_vivi(dir.file("m.json")), v);
}

TEST(ViviJson, MetaIsOptional) {
  const auto v = io::parse_vivi(R"({"vars":["a"],"matrix":[[2]],"importance_type":"external","normalized":false})");
  EXPECT_EQ(v.values[0][0], 2.0);
  EXPECT_EQ(v.meta, vivid::ViviMeta{});
}

TEST(ViviJson, Errors) {
  EXPECT_THROW(io::parse_vivi("{"), vivid::Error);
  EXPECT_THROW(io::parse_vivi(R"({"vars":["a"],"importance_type":"x","normalized":false})"), vivid::Error);
  EXPECT_THROW(io::parse_vivi(R"({"vars":"a","matrix":[[1]],"importance_type":"x","normalized":false})"),
               vivid::Error);
  EXPECT_THROW(io::parse_vivi(R"({"vars":["a","b"],"matrix":[[1,2],[3,4]],"importance_type":"x","normalized":false})"),
               vivid::Error);
  EXPECT_THROW(io::parse_vivi(R"({"vars":["a","b"],"matrix":[[1,2]],"importance_type":"x","normalized":false})"),
               vivid::Error);
  EXPECT_THROW(io::load_vivi("/nonexistent/m.json"), vivid::Error);
}

TEST(LongTableCsv, HeaderAndRows) {
  auto v = vivid::ViviMatrix::zeros({"lstat", "nox"});
  v.values = {{4.8, 0.06}, {0.06, 1.2}};
  const auto csv = io::long_table_csv(v);
  EXPECT_EQ(csv,
            "Variable_1,Variable_2,Value,Measure,Row,Col\n"
            "lstat,lstat,4.8,Vimp,1,1\n"
            "nox,lstat,0.06,Vint,2,1\n"
            "lstat,nox,0.06,Vint,1,2\n"
            "nox,nox,1.2,Vimp,2,2\n");
  EXPECT_EQ(io::parse_long_table(csv), vivid::as_long_table(v));
}

TEST(LongTableCsv, QuotedNamesAndExactValues) {
  const auto v = vivid::import_external({{"a,b", 1.0 / 7.0}, {"say \"hi\"", 2}}, {{"a,b", "say \"hi\"", 0.1}});
  const auto back = vivid::from_long_table(io::parse_long_table(io::long_table_csv(v)));
  EXPECT_EQ(back.vars, v.vars);
  EXPECT_EQ(back.values, v.values);
}

TEST(LongTableCsv, Errors) {
  EXPECT_THROW(io::parse_long_table("a,b\n"), vivid::Error);
  const std::string h = "Variable_1,Variable_2,Value,Measure,Row,Col\n";
  EXPECT_THROW(io::parse_long_table(h + "a,a,1,Vimp,1\n"), vivid::Error);
  EXPECT_THROW(io::parse_long_table(h + "a,a,x,Vimp,1,1\n"), vivid::Error);
  EXPECT_THROW(io::parse_long_table(h + "a,a,1,Both,1,1\n"), vivid::Error);
  EXPECT_THROW(io::parse_long_table(h + "a,a,1,Vimp,0,1\n"), vivid::Error);
}

TEST(SurfaceJson, OneDimensionalWithIce) {
  const auto d = testing_support::uniform_dataset(10, 2, 3, [](const auto& x) { return x[0]; });
  const auto p = testing_support::predictor_for(d, [](const auto& x) { return x[0] * x[1]; });
  vivid::PdOptions o;
  o.grid_size = 4;
  o.n_ice = std::size_t{3};
  const auto s = vivid::pd_1d(*p, d, "x1", o);
  const auto j = io::to_json(s);
  std::vector<std::string> keys;
  for (const auto& [k, _] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"vars", "grid", "values", "mask", "ice", "center"}));
  EXPECT_TRUE(j["mask"].is_null());
  const auto back = io::parse_surfaces(io::dump_surfaces({s}));
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].grids, s.grids);
  EXPECT_EQ(back[0].values, s.values);
  EXPECT_EQ(back[0].ice->rows, s.ice->rows);
  EXPECT_EQ(back[0].ice->curves, s.ice->curves);
}

TEST(SurfaceJson, TwoDimensionalWithMaskAndCategories) {
  const auto d = vivid::parse_dataset("x,c,y\n0,lo,1\n1,hi,2\n0.5,lo,3\n", "y");
  const auto p = testing_support::predictor_for(d, [](const auto& x) { return x[0] + 2 * x[1]; });
  const auto s = vivid::pd_2d(*p, d, "x", "c", {.grid_size = 3, .convex_hull = true});
  const auto j = io::to_json(s);
  EXPECT_EQ(j["grid"][1], (io::Json{"hi", "lo"}));
  EXPECT_EQ(j["values"].size(), 3u);
  EXPECT_EQ(j["values"][0].size(), 2u);
  EXPECT_TRUE(j["ice"].is_null());
  const auto back = io::parse_surfaces(j.dump());
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].grids, s.grids);
  EXPECT_EQ(back[0].values, s.values);
  EXPECT_EQ(back[0].mask, s.mask);
}

TEST(SurfaceJson, Errors) {
  EXPECT_THROW(io::parse_surfaces(R"({"vars":[],"grid":[],"values":[]})"), vivid::Error);
  EXPECT_THROW(io::parse_surfaces(R"({"vars":["a"],"grid":[[1,2]],"values":[1]})"), vivid::Error);
  EXPECT_THROW(io::parse_surfaces(R"({"vars":["a","b"],"grid":[[1],[1,2]],"values":[[1]]})"), vivid::Error);
  EXPECT_THROW(io::parse_surfaces(R"({"vars":["a"],"grid":[[1]],"values":[1],"mask":[[0]]})"), vivid::Error);
  EXPECT_THROW(io::parse_surfaces(R"({"vars":["a"],"grid":[[1]],"values":[1],"ice":{"rows":[0],"curves":[]}})"),
               vivid::Error);
  EXPECT_THROW(io::parse_surfaces(R"({"vars":["a"],"grid":[[1]],"values":"x"})"), vivid::Error);
}

TEST(ZPathJson, SchemaAndRoundTrip) {
  vivid::ZPath zp;
  zp.method = vivid::ZPathMethod::strictly_weighted;
  zp.connected = false;
  zp.sequences = {{"a", "b", "c"}, {"d", "e"}};
  const auto text = io::dump_zpath(zp);
  const auto j = io::Json::parse(text);
  std::vector<std::string> keys;
  for (const auto& [k, _] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"method", "connected", "sequences"}));
  EXPECT_EQ(j["method"], "strictly.weighted");
  EXPECT_EQ(io::parse_zpath(text), zp);
  EXPECT_THROW(io::parse_zpath(R"({"method":"x","connected":true,"sequences":[]})"), vivid::Error);
  EXPECT_THROW(io::parse_zpath(R"({"method":"greedy.weighted","connected":true,"sequences":[["a"]]})"),
               vivid::Error);
  EXPECT_THROW(io::parse_zpath(R"({"method":"greedy.weighted","sequences":[]})"), vivid::Error);
}

}  // namespace
