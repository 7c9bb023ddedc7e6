// Copyright 2026 The stochprobe Authors
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

#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <string>

#include "stochprobe/errors.hpp"
#include "stochprobe/gap.hpp"
#include "stochprobe/generators.hpp"
#include "stochprobe/instance_io.hpp"

using namespace stochprobe;

namespace {

// Field and message of the validation error raised by parsing `text`.
std::string parse_error(const std::string& text) {
  try {
    parse_instance_text(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

void check_round_trip(const Instance& inst) {
  const std::string once = emit_instance(inst);
  const Instance back = parse_instance_text(once);
  CHECK(back.index() == inst.index());
  CHECK(emit_instance(back) == once);
}

}  // namespace

TEST_CASE("minimal weighted completion time file") {
  const auto inst = parse_instance_text(R"({
    "objective": "wct", "budget": 1,
    "items": [{"dist": [[2, 0.5], [4, 0.5]], "cost": 1}]
  })");
  REQUIRE(std::holds_alternative<WctInstance>(inst));
  const auto& w = std::get<WctInstance>(inst);
  CHECK(w.jobs.size() == 1);
  CHECK(w.jobs[0].weight == 1.0);
  CHECK(expectation(w.jobs[0].size) == 3.0);
  CHECK(objective_name(inst) == "wct");
}

TEST_CASE("probability sums near one are rescaled") {
  const auto inst = parse_instance_text(R"({
    "objective": "wct", "budget": 1,
    "items": [{"dist": [[0, 0.499999999999], [1, 0.5]], "cost": 1}]
  })");
  const auto& d = std::get<WctInstance>(inst).jobs[0].size;
  CHECK(std::abs(d.prob(0) + d.prob(1) - 1.0) <= 1e-12);

  const auto off = parse_instance_text(R"({
    "objective": "wct", "budget": 1,
    "items": [{"dist": [[0, 0.2499999999], [1, 0.75]], "cost": 1}]
  })");
  const auto& e = std::get<WctInstance>(off).jobs[0].size;
  CHECK(std::abs(e.prob(0) + e.prob(1) - 1.0) <= 1e-15);
  CHECK(e.prob(1) > 0.75);

  const auto msg = parse_error(R"({
    "objective": "wct", "budget": 1,
    "items": [{"dist": [[0, 0.4], [1, 0.5]], "cost": 1}]
  })");
  CHECK(msg.find("items[0].dist") != std::string::npos);
  CHECK(msg.find("line 3") != std::string::npos);
}

TEST_CASE("diagnostics name the field and line") {
  const std::string budget = "{\n\"objective\": \"wct\",\n\"budget\": 0.5,\n\"items\": [\n"
                             "{\"dist\": [[1, 1]], \"cost\": 1}\n]\n}";
  const auto m1 = parse_error(budget);
  CHECK(m1.rfind("budget: line 3:", 0) == 0);

  const std::string neg = "{\"objective\": \"makespan\", \"budget\": 1, \"machines\": 2,\n"
                          "\"items\": [\n{\"dist\": [[1, 1]], \"cost\": 1},\n"
                          "{\"dist\": [[1, 1]], \"cost\": -1}\n]}";
  const auto m2 = parse_error(neg);
  CHECK(m2.rfind("items[1].cost: line 4:", 0) == 0);

  const std::string dangling = R"({"objective": "steiner", "budget": 1,
    "items": [{"dist": [[0, 1]], "cost": 1}, {"dist": [[7, 1]], "cost": 1}],
    "metric": {"points": [[0, 0], [1, 1]]}})";
  const auto m3 = parse_error(dangling);
  CHECK(m3.find("items[1].dist") != std::string::npos);
  CHECK(m3.find("line 2") != std::string::npos);

  CHECK(parse_error(R"({"objective": "tsp", "budget": 1, "items": []})").rfind("objective", 0) == 0);
  CHECK(parse_error(R"({"objective": "wct", "budget": 1, "items": [], "extra": 1})")
            .rfind("extra", 0) == 0);
  CHECK(parse_error("{\"objective\": \"wct\",\n\"budget\": 1,\n").find("line 3") !=
        std::string::npos);
  CHECK(parse_error(R"({"objective": "kmedian", "budget": 1, "K": 1,
    "items": [{"dist": [[0, 1]], "cost": 1}],
    "metric": {"matrix": [[0, 1], [2, 0]]}})")
            .rfind("metric.matrix", 0) == 0);
  CHECK(parse_error(R"({"objective": "wct", "budget": 1,
    "items": [{"dist": [[-1, 1]], "cost": 1}]})")
            .rfind("items[0].dist[0][0]", 0) == 0);
}

TEST_CASE("round trip on generated instances") {
  Rng rng({131, 0});
  for (int trial = 0; trial < 10; ++trial) {
    check_round_trip(random_wct_instance(rng, 5, 3));
    check_round_trip(random_makespan_instance(rng, 5, 3, 3));
    check_round_trip(random_kmedian_instance(rng, 5, 4, 3, 2));
    check_round_trip(random_steiner_instance(rng, 5, 4, 3));
  }
  check_round_trip(gen_benefit_instance(7));
  check_round_trip(gen_gap_instance({1, 4, 6}).inst);
}

TEST_CASE("golden files round trip") {
  int seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(STOCHPROBE_DATA_DIR)) {
    if (entry.path().extension() != ".json") continue;
    ++seen;
    CAPTURE(entry.path().string());
    const auto inst = parse_instance(entry.path().string());
    check_round_trip(inst);
  }
  CHECK(seen >= 5);
}

TEST_CASE("matrix metrics keep their form") {
  const auto inst = parse_instance(std::string(STOCHPROBE_DATA_DIR) + "/kmedian_matrix.json");
  const auto& k = std::get<KMedianInstance>(inst);
  CHECK_FALSE(k.points.has_coordinates());
  CHECK(k.arbitrary_centers);
  CHECK(k.centers.size() == 3);
  CHECK(emit_instance(inst).find("\"matrix\"") != std::string::npos);
}
