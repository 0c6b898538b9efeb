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

#include <atomic>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "hotspot/parallel.hpp"
#include "hotspot/rng.hpp"

using namespace hotspot;

TEST_SUITE("rng") {

TEST_CASE("streams are reproducible and distinct") {
  Rng a = Rng::stream(5, 1);
  Rng b = Rng::stream(5, 1);
  Rng c = Rng::stream(5, 2);
  int same = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    same += x == c.next();
  }
  CHECK(same == 0);
}

TEST_CASE("below is in range and roughly uniform") {
  Rng rng(1);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = rng.below(7);
    REQUIRE(v < 7);
    ++hist[v];
  }
  for (int h : hist) CHECK(std::abs(h - 10000) < 500);
}

TEST_CASE("uniform and normal moments") {
  Rng rng(2);
  double s = 0, s2 = 0, n1 = 0, n2 = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    s += u;
    s2 += u * u;
    const double z = rng.normal();
    n1 += z;
    n2 += z * z;
  }
  CHECK(std::abs(s / n - 0.5) < 0.01);
  CHECK(std::abs(s2 / n - 1.0 / 3.0) < 0.01);
  CHECK(std::abs(n1 / n) < 0.02);
  CHECK(std::abs(n2 / n - 1.0) < 0.02);
}

TEST_CASE("poisson mean") {
  Rng rng(3);
  for (double mean : {0.5, 4.0, 75.0}) {
    double s = 0;
    for (int i = 0; i < 20000; ++i) s += static_cast<double>(rng.poisson(mean));
    CHECK(std::abs(s / 20000 - mean) < 0.05 * mean + 0.02);
  }
}

TEST_CASE("partial shuffle draws a subset without repeats") {
  Rng rng(4);
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  rng.partial_shuffle(std::span<int>(v), 20);
  std::set<int> seen(v.begin(), v.end());
  CHECK(seen.size() == 50);
}

TEST_CASE("parallel_for visits every index once and rethrows") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(1000, 4, [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(100, 4,
                               [](std::size_t i) {
                                 if (i == 37) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}

}
