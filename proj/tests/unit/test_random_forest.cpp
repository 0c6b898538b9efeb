/*
 * Copyright 2026 The Hotspot Authors.
 *
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

#include <doctest.h>

#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "hotspot/error.hpp"
#include "hotspot/random_forest.hpp"
#include "hotspot/rng.hpp"
#include "oracles.hpp"

using namespace hotspot;

namespace {

struct Data {
  TrainingData train;
  std::vector<std::vector<double>> rows;
  std::vector<std::uint8_t> y;
};

Data make(std::size_t n, std::size_t p, Rng& rng, auto&& value, auto&& label) {
  Data d{TrainingData(n, p), {}, {}};
  d.rows.assign(n, std::vector<double>(p));
  d.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) d.train.value(i, j) = d.rows[i][j] = value(i, j, rng);
    d.y[i] = label(i, d.rows[i], rng);
    d.train.set_label(i, d.y[i]);
  }
  return d;
}

// Feature 0 separates the classes (x0 > 0 iff high); the rest are noise.
Data separable(std::size_t n, std::size_t p, std::uint64_t seed) {
  Rng rng(seed);
  return make(
      n, p, rng,
      [](std::size_t i, std::size_t j, Rng& r) {
        if (j == 0) return (i % 2 ? 1.0 : -1.0) * r.uniform(0.1, 2.0);
        return r.normal();
      },
      [](std::size_t i, const std::vector<double>&, Rng&) { return std::uint8_t(i % 2); });
}

std::vector<std::string> names(std::size_t p) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < p; ++j) out.push_back("x" + std::to_string(j));
  return out;
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::kIo;
}

ForestModel stub_forest(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& leaves) {
  ForestModel m;
  m.params.n_trees = leaves.size();
  m.feature_names = {"x0"};
  m.n_train = 1;
  for (const auto& [low, high] : leaves) {
    TreeNode leaf;
    leaf.low = low;
    leaf.high = high;
    m.trees.emplace_back(std::vector<TreeNode>{leaf});
    m.in_bag.push_back({1});
  }
  return m;
}

double accuracy(const ForestModel& m, const Data& d) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < d.rows.size(); ++i)
    ok += static_cast<std::uint8_t>(m.predict(d.rows[i]).cls) == d.y[i];
  return static_cast<double>(ok) / static_cast<double>(d.rows.size());
}

}  // namespace

TEST_SUITE("random_forest") {

TEST_CASE("gini impurity") {
  CHECK(gini_impurity({10, 10}) == 0.5);
  CHECK(gini_impurity({7, 0}) == 0.0);
  CHECK(gini_impurity({3, 1}) == 0.375);
  CHECK(kind_of([] { gini_impurity({0, 0}); }) == ErrorKind::kUndefined);
}

TEST_CASE("best split examples") {
  TrainingData d(4, 1);
  const double x[] = {1, 2, 9, 10};
  for (std::size_t i = 0; i < 4; ++i) {
    d.value(i, 0) = x[i];
    d.set_label(i, i >= 2);
  }
  const std::vector<std::size_t> all{0, 1, 2, 3}, f0{0};
  const auto s = best_split(d, all, f0);
  REQUIRE(s);
  CHECK(s->feature == 0);
  CHECK(s->threshold == 5.5);
  CHECK(s->decrease == 0.5);

  const std::vector<std::size_t> pure{0, 1};
  CHECK_FALSE(best_split(d, pure, f0));

  TrainingData twins(2, 1);
  twins.value(0, 0) = twins.value(1, 0) = 3.0;
  twins.set_label(1, 1);
  const std::vector<std::size_t> both{0, 1};
  CHECK_FALSE(best_split(twins, both, f0));
}

TEST_CASE("best split equals brute-force enumeration on 200 random instances") {
  Rng rng(2024);
  std::size_t mismatches = 0, none = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng.below(49);
    const std::size_t p = 1 + rng.below(5);
    const bool coarse = rng.uniform() < 0.5;  // many tied values
    const Data d = make(
        n, p, rng,
        [&](std::size_t, std::size_t, Rng& r) {
          return coarse ? static_cast<double>(r.below(4)) : r.normal();
        },
        [](std::size_t, const std::vector<double>& row, Rng& r) {
          return std::uint8_t(row[0] + r.normal() > 0.5);
        });
    std::vector<std::size_t> samples;
    for (std::size_t i = 0; i < n; ++i)
      if (rng.uniform() < 0.8) samples.push_back(i);
    std::vector<std::size_t> features;
    for (std::size_t j = 0; j < p; ++j)
      if (rng.uniform() < 0.7) features.push_back(p - 1 - j);
    const std::size_t min_leaf = 1 + rng.below(3);
    const auto got = best_split(d.train, samples, features, min_leaf);
    const auto want =
        oracle::brute_force_split(d.rows, d.y, samples, features, min_leaf, kSplitTieTolerance);
    if (!want) ++none;
    if (got.has_value() != want.has_value()) {
      ++mismatches;
      continue;
    }
    if (!got) continue;
    if (got->feature != want->feature || got->threshold != want->threshold ||
        got->decrease != want->decrease)
      ++mismatches;
  }
  CHECK(mismatches == 0);
  CHECK(none < 200);
}

TEST_CASE("grow tree") {
  Rng rng(1);
  const Data d = separable(80, 4, 3);
  std::vector<std::size_t> all(80);
  std::iota(all.begin(), all.end(), 0);
  ForestParams params;
  const DecisionTree tree = grow_tree(d.train, all, params, rng);
  for (std::size_t i = 0; i < 80; ++i)
    CHECK(tree.vote([&](std::size_t f) { return d.rows[i][f]; }) == d.y[i]);
  // Node counts: children partition their parent.
  for (const auto& node : tree.nodes())
    if (!node.is_leaf()) {
      const auto& l = tree.nodes()[node.left];
      const auto& r = tree.nodes()[node.right];
      CHECK(l.low + r.low == node.low);
      CHECK(l.high + r.high == node.high);
    }
  CHECK(tree.nodes()[0].low + tree.nodes()[0].high == 80);

  TrainingData one(5, 2);
  std::vector<std::size_t> five{0, 1, 2, 3, 4};
  CHECK(grow_tree(one, five, params, rng).nodes().size() == 1);

  params.max_depth = 1;
  const auto stump = grow_tree(d.train, all, params, rng);
  CHECK(stump.nodes().size() <= 3);
  CHECK(stump.depth() <= 1);
}

TEST_CASE("parameters") {
  ForestParams p;
  CHECK(p.resolved_mtry(2312) == 48);
  CHECK(p.resolved_mtry(3) == 1);
  CHECK(p.subsample_size(100) == 64);
  CHECK(p.subsample_size(1000) == 632);
  p.mtry = 5;
  CHECK(kind_of([&] { p.validate(4); }) == ErrorKind::kConfig);
  p = {};
  p.subsample_fraction = 0.0;
  CHECK(kind_of([&] { p.validate(4); }) == ErrorKind::kConfig);
  p = {};
  p.n_trees = 0;
  CHECK(kind_of([&] { p.validate(4); }) == ErrorKind::kConfig);
}

TEST_CASE("training is deterministic and thread independent") {
  const Data d = separable(120, 6, 5);
  ForestParams params;
  params.n_trees = 50;
  params.seed = 9;
  const auto a = train(d.train, names(6), params, 1);
  const auto b = train(d.train, names(6), params, 4);
  CHECK(a == b);
  CHECK(structural_hash(a) == structural_hash(b));
  params.seed = 10;
  CHECK(structural_hash(train(d.train, names(6), params)) != structural_hash(a));
  CHECK(a.trees.size() == 50);
  for (const auto& bag : a.in_bag)
    CHECK(std::accumulate(bag.begin(), bag.end(), 0u) == params.subsample_size(120));
}

TEST_CASE("single tree and single class") {
  const Data d = separable(60, 3, 8);
  ForestParams params;
  params.n_trees = 1;
  const auto m = train(d.train, names(3), params);
  for (std::size_t i = 0; i < 60; ++i)
    if (m.in_bag[0][i]) CHECK(static_cast<std::uint8_t>(m.predict(d.rows[i]).cls) == d.y[i]);
  const auto oob = oob_error(m, d.train);
  CHECK(oob.evaluated == 60 - params.subsample_size(60));
  CHECK(oob.skipped == params.subsample_size(60));

  TrainingData flat(10, 2);
  CHECK(kind_of([&] { train(flat, names(2), params); }) == ErrorKind::kTraining);
}

TEST_CASE("prediction votes and the tie rule") {
  const std::vector<double> row{0.0};
  auto p = stub_forest({{0, 3}, {1, 2}, {0, 1}}).predict(row);
  CHECK(p.cls == CrimeClass::kHigh);
  CHECK(p.score == 1.0);
  p = stub_forest({{3, 0}, {2, 2}}).predict(row);
  CHECK(p.cls == CrimeClass::kLow);
  CHECK(p.score == 0.0);
  p = stub_forest({{0, 1}, {1, 0}, {0, 4}, {4, 0}}).predict(row);
  CHECK(p.cls == CrimeClass::kLow);
  CHECK(p.score == 0.5);
  CHECK(kind_of([&] { stub_forest({{0, 1}}).predict(std::vector<double>{1, 2}); }) ==
        ErrorKind::kSchema);

  const Data d = separable(50, 3, 1);
  ForestParams params;
  params.n_trees = 7;
  const auto m = train(d.train, names(3), params);
  for (const auto& r : d.rows) {
    const double k = m.predict(r).score * 7.0;
    CHECK(std::abs(k - std::round(k)) < 1e-12);
  }
}

TEST_CASE("out-of-bag error") {
  const Data d = separable(200, 5, 4);
  ForestParams params;
  params.n_trees = 150;
  const auto m = train(d.train, names(5), params);
  CHECK(oob_error(m, d.train).error <= 0.05);

  Rng rng(77);
  const Data noise = make(
      400, 5, rng, [](std::size_t, std::size_t, Rng& r) { return r.normal(); },
      [](std::size_t, const std::vector<double>&, Rng& r) { return std::uint8_t(r.below(2)); });
  const auto nm = train(noise.train, names(5), params);
  const double e = oob_error(nm, noise.train).error;
  CHECK(e >= 0.4);
  CHECK(e <= 0.6);
}

TEST_CASE("gini importance") {
  // Stump splitting (10,10) into (10,0) and (0,10).
  ForestModel m;
  m.feature_names = {"a", "b"};
  m.params.n_trees = 1;
  std::vector<TreeNode> nodes(3);
  nodes[0] = {0, 0.5, 1, 2, 10, 10};
  nodes[1].low = 10;
  nodes[2].high = 10;
  m.trees.emplace_back(nodes);
  const auto g = importance_gini(m);
  CHECK(g[0] == 0.5);
  CHECK(g[1] == 0.0);

  Rng rng(6);
  const Data noise = make(
      100, 6, rng, [](std::size_t, std::size_t, Rng& r) { return r.normal(); },
      [](std::size_t, const std::vector<double>&, Rng& r) { return std::uint8_t(r.below(2)); });
  ForestParams params;
  params.n_trees = 30;
  for (double v : importance_gini(train(noise.train, names(6), params))) CHECK(v >= 0.0);
}

TEST_CASE("permutation importance") {
  Data d = separable(300, 4, 12);
  // Column 3 is constant, so no tree can use it.
  for (std::size_t i = 0; i < 300; ++i) d.train.value(i, 3) = d.rows[i][3] = 1.0;
  ForestParams params;
  params.n_trees = 100;
  params.mtry = 4;
  const auto m = train(d.train, names(4), params);
  const auto imp = importance_permutation(m, d.train, 5);
  CHECK(imp.overall[3] == 0.0);
  CHECK(imp.overall[0] >= 0.3);

  std::size_t n_high = 0;
  for (auto y : d.y) n_high += y;
  const double w_high = static_cast<double>(n_high) / 300.0;
  for (std::size_t f = 0; f < 4; ++f) {
    const double blended = (1 - w_high) * imp.low[f] + w_high * imp.high[f];
    CHECK(std::abs(blended - imp.overall[f]) <= 0.02);
  }
  const auto again = importance_permutation(m, d.train, 5, 3);
  CHECK(again.overall == imp.overall);
  CHECK(again.low == imp.low);
  CHECK(again.high == imp.high);
}

TEST_CASE("monotone transforms keep the tree structure and predictions") {
  const Data d = separable(150, 4, 21);
  Data t = d;
  for (std::size_t i = 0; i < 150; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      t.train.value(i, j) = t.rows[i][j] = std::exp(d.rows[i][j]) * 3.0 + 1.0;
  ForestParams params;
  params.n_trees = 40;
  const auto a = train(d.train, names(4), params);
  const auto b = train(t.train, names(4), params);
  for (std::size_t k = 0; k < a.trees.size(); ++k) {
    const auto& na = a.trees[k].nodes();
    const auto& nb = b.trees[k].nodes();
    REQUIRE(na.size() == nb.size());
    for (std::size_t i = 0; i < na.size(); ++i) {
      CHECK(na[i].feature == nb[i].feature);
      CHECK(na[i].low == nb[i].low);
      CHECK(na[i].high == nb[i].high);
    }
  }
  // Midpoints do not commute with the transform, so only rows that were
  // present when the thresholds were chosen are guaranteed to route alike.
  // With every tree seeing every row, that is all of them.
  params.subsample_fraction = 1.0;
  const auto fa = train(d.train, names(4), params);
  const auto fb = train(t.train, names(4), params);
  for (std::size_t i = 0; i < 150; ++i)
    CHECK(fa.predict(d.rows[i]).score == fb.predict(t.rows[i]).score);
}

TEST_CASE("duplicating a feature barely moves test accuracy") {
  Rng rng(40);
  auto value = [](std::size_t, std::size_t, Rng& r) { return r.normal(); };
  auto label = [](std::size_t, const std::vector<double>& x, Rng& r) {
    return std::uint8_t(x[0] + 0.5 * x[1] + 0.6 * r.normal() > 0);
  };
  const Data tr = make(400, 6, rng, value, label);
  const Data te = make(2000, 6, rng, value, label);
  auto widen = [](const Data& d) {
    Data w{TrainingData(d.rows.size(), 7), d.rows, d.y};
    for (std::size_t i = 0; i < d.rows.size(); ++i) {
      w.rows[i].push_back(d.rows[i][0]);
      for (std::size_t j = 0; j < 7; ++j) w.train.value(i, j) = w.rows[i][j];
      w.train.set_label(i, d.y[i]);
    }
    return w;
  };
  ForestParams params;
  params.n_trees = 500;
  const double base = accuracy(train(tr.train, names(6), params), te);
  const double dup = accuracy(train(widen(tr).train, names(7), params), widen(te));
  INFO("base " << base << " duplicated " << dup);
  CHECK(std::abs(base - dup) <= 0.02);
}

TEST_CASE("model text round trip") {
  fixture::TempDir dir("model");
  const Data d = separable(90, 5, 2);
  ForestParams params;
  params.n_trees = 20;
  params.max_depth = 4;
  params.sample_with_replacement = true;
  const auto m = train(d.train, names(5), params);
  const auto path = dir.file("m.hsf");
  save_model(m, path);
  const auto back = load_model(path);
  CHECK(back == m);
  CHECK(structural_hash(back) == structural_hash(m));
  for (const auto& r : d.rows) CHECK(back.predict(r).score == m.predict(r).score);

  auto text = model_to_text(m);
  CHECK(text.starts_with("hotspot-forest 1\n"));
  CHECK(kind_of([&] { model_from_text(text.substr(0, text.size() / 2)); }) == ErrorKind::kSchema);
}

}
