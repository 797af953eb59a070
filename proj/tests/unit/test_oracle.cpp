// Copyright 2026 The echotrace Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "echotrace/oracle.h"

using namespace echotrace;

TEST_SUITE_BEGIN("oracle");

TEST_CASE("direct arrival is the euclidean distance over c") {
  Shoebox box = Shoebox::Uniform({4, 3, 2.5}, 0.2, {1, 1, 1}, {3, 2, 1.5});
  const auto arrivals = ImageSourceArrivals(box, 0);
  REQUIRE(arrivals.size() == 1);
  CHECK(arrivals[0].delay_s ==
        doctest::Approx(std::sqrt(5.25) / 343.0).epsilon(1e-12));
  CHECK(arrivals[0].energy ==
        doctest::Approx(1.0 / (4.0 * kPi * 5.25)).epsilon(1e-12));
}

TEST_CASE("order one gives exactly six images, floor image placed by mirror") {
  Shoebox box = Shoebox::Uniform({4, 3, 2.5}, 0.2, {1, 1, 1}, {3, 2, 1.5});
  const auto arrivals = ImageSourceArrivals(box, 1);
  int order1 = 0;
  bool found_floor = false;
  for (const auto& a : arrivals) {
    if (a.order != 1) continue;
    ++order1;
    if ((a.image_position - Vec3(1, 1, -1)).norm() < 1e-12) {
      found_floor = true;
      CHECK(a.delay_s ==
            doctest::Approx(std::sqrt(11.25) / 343.0).epsilon(1e-12));
      CHECK(a.energy ==
            doctest::Approx(0.8 / (4.0 * kPi * 11.25)).epsilon(1e-12));
    }
  }
  CHECK(order1 == 6);
  CHECK(found_floor);
}

TEST_CASE("image counts match the combinatorial enumeration") {
  Shoebox box = Shoebox::Uniform({4, 3, 2.5}, 0.2, {1.3, 0.7, 1.1},
                                 {2.9, 2.2, 1.9});
  const auto arrivals = ImageSourceArrivals(box, 6);
  std::map<int, long> by_order;
  for (const auto& a : arrivals) ++by_order[a.order];
  for (int k = 0; k <= 6; ++k) CHECK(by_order[k] == ImageCountOfOrder(k));
  // All image positions distinct.
  std::set<std::array<long long, 3>> seen;
  for (const auto& a : arrivals)
    seen.insert({llround(a.image_position.x() * 1e9),
                 llround(a.image_position.y() * 1e9),
                 llround(a.image_position.z() * 1e9)});
  CHECK(seen.size() == arrivals.size());
}

TEST_CASE("sabine formula") {
  // 10x8x3 room, uniform alpha 0.2: V=240, S=268, T = 0.161*240/53.6.
  Shoebox box = Shoebox::Uniform({10, 8, 3}, 0.2, {1, 1, 1}, {2, 2, 2});
  CHECK(SabineRt60(box) == doctest::Approx(0.161 * 240.0 / 53.6).epsilon(1e-9));
  Shoebox doubled = Shoebox::Uniform({10, 8, 3}, 0.4, {1, 1, 1}, {2, 2, 2});
  CHECK(SabineRt60(doubled) ==
        doctest::Approx(0.5 * SabineRt60(box)).epsilon(1e-9));
  // alpha = 1: the formula still evaluates (outside Sabine validity).
  Shoebox dead = Shoebox::Uniform({10, 8, 3}, 1.0, {1, 1, 1}, {2, 2, 2});
  CHECK(SabineRt60(dead) == doctest::Approx(0.161 * 240.0 / 268.0));
  CHECK_THROWS_AS(
      SabineRt60(Shoebox::Uniform({10, 8, 3}, 0.0, {1, 1, 1}, {2, 2, 2})),
      ConfigError);
}

TEST_CASE("eyring formula and its relation to sabine") {
  Shoebox box = Shoebox::Uniform({10, 8, 3}, 0.2, {1, 1, 1}, {2, 2, 2});
  CHECK(EyringRt60(box) ==
        doctest::Approx(0.161 * 240.0 / (268.0 * -std::log(0.8)))
            .epsilon(1e-9));
  // Low-absorption limit: Eyring approaches Sabine.
  Shoebox low = Shoebox::Uniform({10, 8, 3}, 0.02, {1, 1, 1}, {2, 2, 2});
  CHECK(EyringRt60(low) / SabineRt60(low) == doctest::Approx(1.0).epsilon(0.011));
  // Eyring <= Sabine for all alpha in (0,1).
  for (double alpha = 0.05; alpha < 1.0; alpha += 0.05) {
    Shoebox b = Shoebox::Uniform({10, 8, 3}, alpha, {1, 1, 1}, {2, 2, 2});
    CHECK(EyringRt60(b) <= SabineRt60(b) + 1e-12);
  }
  CHECK_THROWS_AS(
      EyringRt60(Shoebox::Uniform({10, 8, 3}, 1.0, {1, 1, 1}, {2, 2, 2})),
      ConfigError);
}

TEST_CASE("oracle drr splits direct window from tail") {
  Shoebox box = Shoebox::Uniform({4, 3, 2.5}, 0.2, {1.2, 1.1, 1.3},
                                 {2.6, 1.9, 1.2});
  const auto arrivals = ImageSourceArrivals(box, 10);
  const double drr = OracleDrr(arrivals, 0.0025);
  // Direct energy over everything else, computed independently.
  double direct = 0.0, tail = 0.0;
  for (const auto& a : arrivals) (a.order == 0 ? direct : tail) += a.energy;
  CHECK(drr == doctest::Approx(10.0 * std::log10(direct / tail)).epsilon(1e-9));
}

TEST_SUITE_END();
