// tests/test_sched.cc

// Copyright 2026  CASR Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "casr/audio/frontend.h"
#include "casr/sched/batch_plan.h"
#include "casr/sched/manifest.h"
#include "casr/util/error.h"
#include "doctest.h"

namespace casr {
namespace {

ManifestEntry entry(const std::string& id, double duration_s) {
  ManifestEntry e;
  e.id = id;
  e.audio = id + ".wav";
  e.text = "text for " + id;
  e.duration_s = duration_s;
  return e;
}

Manifest manifest_of(const std::vector<double>& durations) {
  Manifest m;
  for (size_t i = 0; i < durations.size(); ++i) {
    char id[16];
    std::snprintf(id, sizeof(id), "u%03zu", i);
    m.entries.push_back(entry(id, durations[i]));
  }
  return m;
}

// 20 one-second clips and 4 ten-second clips, interleaved so the planner has
// to sort. 1 s is 98 frames, 10 s is 998.
Manifest bimodal_manifest() {
  Manifest m;
  for (int i = 0; i < 20; ++i) {
    char id[16];
    std::snprintf(id, sizeof(id), "s%02d", i);
    m.entries.push_back(entry(id, 1.0));
    if (i < 4) {
      std::snprintf(id, sizeof(id), "l%02d", i);
      m.entries.push_back(entry(id, 10.0));
    }
  }
  return m;
}

std::vector<size_t> concatenated(const BatchPlan& plan) {
  std::vector<size_t> flat;
  for (const auto& b : plan.batches) flat.insert(flat.end(), b.begin(), b.end());
  return flat;
}

std::vector<int64_t> batch_sizes(const BatchPlan& plan) {
  std::vector<int64_t> sizes;
  for (const auto& st : plan.stats) sizes.push_back(st.size);
  return sizes;
}

TEST_SUITE("sched") {

TEST_CASE("manifest parse fills fields in input order") {
  std::string text =
      "{\"id\":\"a1\",\"audio\":\"x/a1.wav\",\"text\":\"Hello There\",\"duration\":1.5}\n"
      "\n"
      "{\"id\":\"a2\",\"audio\":\"x/a2.wav\",\"text\":\"bye\",\"duration\":0.25}\n";
  Manifest m = parse_manifest(text);
  REQUIRE(m.size() == 2);
  CHECK(m.entries[0].id == "a1");
  CHECK(m.entries[0].audio == "x/a1.wav");
  CHECK(m.entries[0].text == "Hello There");
  CHECK(m.entries[0].duration_s == 1.5);
  CHECK(m.entries[1].id == "a2");
  CHECK(m.entries[1].duration_s == 0.25);
  CHECK(m.excluded_count == 0);
  CHECK(m.exclusion_fraction() == 0.0);
}

TEST_CASE("manifest parse errors carry one-based line numbers") {
  const std::string good =
      "{\"id\":\"a1\",\"audio\":\"a.wav\",\"text\":\"x\",\"duration\":1.0}\n";

  SUBCASE("bad json") {
    try {
      parse_manifest(good + "not json\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(std::string(e.what()).find("(line 2)") != std::string::npos);
    }
  }
  SUBCASE("non-object json") {
    CHECK_THROWS_AS(parse_manifest("[1,2,3]\n"), ParseError);
  }
  SUBCASE("blank lines still count toward numbering") {
    try {
      parse_manifest(good + "\n   \n{\"bad\":1}\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 4);
    }
  }
  SUBCASE("missing field") {
    try {
      parse_manifest("{\"id\":\"a\",\"audio\":\"a.wav\",\"duration\":1.0}\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 1);
      CHECK(std::string(e.what()).find("text") != std::string::npos);
    }
  }
  SUBCASE("wrong field type") {
    CHECK_THROWS_AS(
        parse_manifest(
            "{\"id\":\"a\",\"audio\":\"a.wav\",\"text\":\"x\",\"duration\":\"1.0\"}\n"),
        ParseError);
  }
  SUBCASE("non-positive duration") {
    CHECK_THROWS_AS(
        parse_manifest("{\"id\":\"a\",\"audio\":\"a.wav\",\"text\":\"x\",\"duration\":0}\n"),
        ParseError);
    CHECK_THROWS_AS(
        parse_manifest(
            "{\"id\":\"a\",\"audio\":\"a.wav\",\"text\":\"x\",\"duration\":-2.5}\n"),
        ParseError);
  }
  SUBCASE("duplicate id") {
    try {
      parse_manifest(good + good);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(std::string(e.what()).find("a1") != std::string::npos);
    }
  }
}

TEST_CASE("manifest duration cap excludes and counts") {
  std::string text =
      "{\"id\":\"ok1\",\"audio\":\"a.wav\",\"text\":\"x\",\"duration\":20.999}\n"
      "{\"id\":\"ok2\",\"audio\":\"b.wav\",\"text\":\"x\",\"duration\":21.0}\n"
      "{\"id\":\"long\",\"audio\":\"c.wav\",\"text\":\"x\",\"duration\":21.001}\n";

  SUBCASE("default cap keeps entries at exactly the limit") {
    Manifest m = parse_manifest(text);
    REQUIRE(m.size() == 2);
    CHECK(m.entries[0].id == "ok1");
    CHECK(m.entries[1].id == "ok2");
    CHECK(m.excluded_count == 1);
    CHECK(m.exclusion_fraction() == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("caller-supplied cap") {
    Manifest m = parse_manifest(text, 5.0);
    CHECK(m.size() == 0);
    CHECK(m.excluded_count == 3);
    CHECK(m.exclusion_fraction() == 1.0);
  }
  SUBCASE("empty content") {
    Manifest m = parse_manifest("");
    CHECK(m.size() == 0);
    CHECK(m.excluded_count == 0);
    CHECK(m.exclusion_fraction() == 0.0);
  }
}

TEST_CASE("manifest save load round trip") {
  namespace fs = std::filesystem;
  Manifest m;
  m.entries.push_back(entry("r1", 1.375));
  m.entries.push_back(entry("r2", 0.03125));
  m.entries.push_back(entry("r3", 2.5));

  fs::path dir = fs::temp_directory_path() / "casr_sched_test";
  fs::create_directories(dir);
  std::string path = (dir / "roundtrip.jsonl").string();
  save_manifest(m, path);
  Manifest back = load_manifest(path);

  REQUIRE(back.size() == m.size());
  for (size_t i = 0; i < m.size(); ++i) {
    CHECK(back.entries[i].id == m.entries[i].id);
    CHECK(back.entries[i].audio == m.entries[i].audio);
    CHECK(back.entries[i].text == m.entries[i].text);
    CHECK(back.entries[i].duration_s == m.entries[i].duration_s);
  }
  CHECK(back.excluded_count == 0);
}

TEST_CASE("manifest frames follow the frontend frame formula") {
  CHECK(manifest_frames(entry("a", 1.0)) == 98);
  CHECK(manifest_frames(entry("b", 10.0)) == 998);
  for (double d : {0.025, 0.1, 0.5, 1.02, 2.52, 7.75, 20.5}) {
    CHECK(manifest_frames(entry("x", d)) == frame_count(d, FrontendConfig{}));
  }
}

TEST_CASE("sorted fixed plan orders by frames then id") {
  // Frames by entry index: 50, 30, 50, 10, 30. Ties break on id, so the
  // sorted order is 3, 4, 1, 2, 0.
  Manifest m;
  m.entries.push_back(entry("u_z", 0.525));
  m.entries.push_back(entry("u_b", 0.325));
  m.entries.push_back(entry("u_a", 0.525));
  m.entries.push_back(entry("u_t", 0.125));
  m.entries.push_back(entry("u_aa", 0.325));
  REQUIRE(manifest_frames(m.entries[0]) == 50);
  REQUIRE(manifest_frames(m.entries[1]) == 30);
  REQUIRE(manifest_frames(m.entries[3]) == 10);

  BatchPlan plan = plan_sorted_fixed(m, 2);
  CHECK(plan.policy == BatchPolicy::kFixed);
  CHECK(plan.base_batch == 2);
  REQUIRE(plan.batches.size() == 3);
  CHECK(plan.batches[0] == std::vector<size_t>{3, 4});
  CHECK(plan.batches[1] == std::vector<size_t>{1, 2});
  CHECK(plan.batches[2] == std::vector<size_t>{0});

  REQUIRE(plan.stats.size() == 3);
  CHECK(plan.stats[0].size == 2);
  CHECK(plan.stats[0].max_frames == 30);
  CHECK(plan.stats[0].useful_cells == 40);
  CHECK(plan.stats[0].padded_cells == 20);
  CHECK(plan.stats[1].max_frames == 50);
  CHECK(plan.stats[1].padded_cells == 20);
  CHECK(plan.stats[2].size == 1);
  CHECK(plan.stats[2].padded_cells == 0);
  for (const auto& st : plan.stats) {
    CHECK(st.padded_cells + st.useful_cells == st.size * st.max_frames);
  }
}

TEST_CASE("sorted fixed plan never pads more than shuffled orders") {
  std::mt19937_64 gen(20260821);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> durations;
    for (int i = 0; i < 30; ++i) {
      durations.push_back(0.125 + 0.01 * static_cast<double>(gen() % 300));
    }
    Manifest m = manifest_of(durations);
    PaddingReport sorted = padding_report(plan_sorted_fixed(m, 4));

    std::vector<size_t> order(m.size());
    std::iota(order.begin(), order.end(), 0);
    for (uint64_t seed = 0; seed < 100; ++seed) {
      std::mt19937_64 rng(seed);
      std::shuffle(order.begin(), order.end(), rng);
      PaddingReport shuffled = padding_report(plan_fixed_order(m, 4, order));
      CHECK(sorted.padded_cells <= shuffled.padded_cells);
      CHECK(sorted.useful_cells == shuffled.useful_cells);
    }
  }
}

TEST_CASE("fixed order plan follows the given order and validates") {
  Manifest m = manifest_of({0.5, 1.5, 1.0, 2.0});
  std::vector<size_t> reversed = {3, 2, 1, 0};
  BatchPlan plan = plan_fixed_order(m, 3, reversed);
  REQUIRE(plan.batches.size() == 2);
  CHECK(plan.batches[0] == std::vector<size_t>{3, 2, 1});
  CHECK(plan.batches[1] == std::vector<size_t>{0});

  CHECK_THROWS_AS(plan_fixed_order(m, 0, reversed), ConfigError);
  CHECK_THROWS_AS(plan_fixed_order(m, 2, {0, 1}), ConfigError);
  CHECK_THROWS_AS(plan_sorted_fixed(m, 0), ConfigError);
  CHECK_THROWS_AS(plan_sorted_fixed(m, -4), ConfigError);
}

TEST_CASE("varied plan on a bimodal manifest") {
  Manifest m = bimodal_manifest();
  BatchPlan varied = plan_varied(m, 2, 5);
  CHECK(varied.policy == BatchPolicy::kVaried);
  CHECK(varied.base_batch == 2);
  CHECK(varied.cap_ratio == 5);

  REQUIRE(batch_sizes(varied) == std::vector<int64_t>{10, 10, 2, 2});
  CHECK(varied.stats[0].max_frames == 98);
  CHECK(varied.stats[1].max_frames == 98);
  CHECK(varied.stats[2].max_frames == 998);
  CHECK(varied.stats[3].max_frames == 998);
  // The short buckets hit the cap exactly: the ideal size 2 * 998 / 98 would
  // be above cap_ratio * base_k = 10.
  CHECK(varied.stats[0].size == int64_t{5} * 2);

  // All entries inside a bucket share a length, so neither policy pads here;
  // the win is in sequential step count.
  PaddingReport vr = padding_report(varied);
  PaddingReport fr = padding_report(plan_sorted_fixed(m, 2));
  CHECK(vr.padded_cells == 0);
  CHECK(fr.padded_cells == 0);
  CHECK(vr.total_cells == 5952);
  CHECK(fr.total_cells == 5952);
  CHECK(vr.estimated_epoch_cost == 2192);
  CHECK(fr.estimated_epoch_cost == 2976);
  double reduction = static_cast<double>(fr.estimated_epoch_cost - vr.estimated_epoch_cost) /
                     static_cast<double>(fr.estimated_epoch_cost);
  CHECK(reduction >= 0.15);

  // Both plans walk the same ascending order.
  CHECK(concatenated(varied) == concatenated(plan_sorted_fixed(m, 2)));
}

TEST_CASE("varied plan rounds bucket sizes half down") {
  // Four 100-frame clips and one 250-frame clip with base_k = 1: the short
  // bucket's ideal size is 250 / 100 = 2.5, which must round to 2, not 3.
  Manifest m = manifest_of({1.02, 1.02, 1.02, 1.02, 2.52});
  REQUIRE(manifest_frames(m.entries[0]) == 100);
  REQUIRE(manifest_frames(m.entries[4]) == 250);

  BatchPlan plan = plan_varied(m, 1, 5);
  CHECK(batch_sizes(plan) == std::vector<int64_t>{2, 2, 1});
  CHECK(plan.stats[2].max_frames == 250);
}

TEST_CASE("varied plan folds short remainders") {
  SUBCASE("too few entries to split: one bucket up to 2k - 1") {
    Manifest m = manifest_of({1.02, 1.02, 1.02});
    BatchPlan plan = plan_varied(m, 2, 5);
    REQUIRE(plan.batches.size() == 1);
    CHECK(plan.stats[0].size == 3);
  }
  SUBCASE("shrink so the tail comes out at exactly base_k") {
    // Six 100-frame clips and one 150-frame clip, base_k = 2: the ideal
    // short-bucket size is 3, which would strand a single entry. The middle
    // bucket shrinks to 2 instead.
    Manifest m = manifest_of({1.02, 1.02, 1.02, 1.02, 1.02, 1.02, 1.52});
    REQUIRE(manifest_frames(m.entries[6]) == 150);
    BatchPlan plan = plan_varied(m, 2, 5);
    CHECK(batch_sizes(plan) == std::vector<int64_t>{3, 2, 2});
    CHECK(plan.stats[2].max_frames == 150);
    CHECK(plan.stats[2].padded_cells == 50);
  }
}

TEST_CASE("varied plan memory budget") {
  Manifest m = bimodal_manifest();
  // Construction bounds every bucket at 2 * base_k * f_max cells, so that is
  // the smallest honourable budget: 2 * 2 * 998.
  CHECK_THROWS_AS(plan_varied(m, 2, 5, 3991), ConfigError);

  BatchPlan def = plan_varied(m, 2, 5, 0);
  BatchPlan at_min = plan_varied(m, 2, 5, 3992);
  BatchPlan roomy = plan_varied(m, 2, 5, int64_t{1} << 40);
  CHECK(at_min.batches == def.batches);
  CHECK(roomy.batches == def.batches);
  for (const auto& st : def.stats) {
    CHECK(st.size * st.max_frames <= 3992);
  }
}

TEST_CASE("varied plan with cap ratio one matches the fixed plan") {
  std::mt19937_64 gen(7);
  std::vector<double> durations;
  for (int i = 0; i < 20; ++i) {
    durations.push_back(0.1 + 0.001 * static_cast<double>(gen() % 2500));
  }
  Manifest m = manifest_of(durations);

  BatchPlan varied = plan_varied(m, 3, 1);
  BatchPlan fixed = plan_sorted_fixed(m, 3);
  CHECK(varied.batches == fixed.batches);
  CHECK(varied.policy == BatchPolicy::kVaried);
  CHECK(varied.cap_ratio == 1);
  CHECK(fixed.policy == BatchPolicy::kFixed);
}

TEST_CASE("varied plan validates and handles empty manifests") {
  Manifest m = manifest_of({1.0, 2.0});
  CHECK_THROWS_AS(plan_varied(m, 0, 5), ConfigError);
  CHECK_THROWS_AS(plan_varied(m, 2, 0), ConfigError);

  Manifest empty;
  BatchPlan plan = plan_varied(empty, 2, 5);
  CHECK(plan.batches.empty());
  CHECK(plan.policy == BatchPolicy::kVaried);
  PaddingReport report = padding_report(plan);
  CHECK(report.total_cells == 0);
  CHECK(report.padded_cells == 0);
  CHECK(report.waste_fraction == 0.0);
  CHECK(report.estimated_epoch_cost == 0);
}

TEST_CASE("varied plan invariants across random manifests") {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 20; ++trial) {
    size_t n = 1 + gen() % 40;
    std::vector<double> durations;
    for (size_t i = 0; i < n; ++i) {
      durations.push_back(0.03 + 0.001 * static_cast<double>(gen() % 3000));
    }
    Manifest m = manifest_of(durations);
    const int base_k = 2;
    const int cap_ratio = 5;
    BatchPlan plan = plan_varied(m, base_k, cap_ratio);

    // Concatenated batches are exactly the ascending (frames, id) order.
    std::vector<size_t> flat = concatenated(plan);
    REQUIRE(flat.size() == n);
    std::vector<size_t> sorted_flat = flat;
    std::sort(sorted_flat.begin(), sorted_flat.end());
    for (size_t i = 0; i < n; ++i) CHECK(sorted_flat[i] == i);
    for (size_t i = 1; i < n; ++i) {
      int64_t prev = manifest_frames(m.entries[flat[i - 1]]);
      int64_t cur = manifest_frames(m.entries[flat[i]]);
      CHECK(prev <= cur);
      if (prev == cur) CHECK(m.entries[flat[i - 1]].id < m.entries[flat[i]].id);
    }

    int64_t f_max = manifest_frames(m.entries[flat.back()]);
    for (const auto& st : plan.stats) {
      CHECK(st.size <= int64_t{cap_ratio} * base_k);
      if (n >= static_cast<size_t>(base_k)) CHECK(st.size >= base_k);
      CHECK(st.size * st.max_frames <= 2 * int64_t{base_k} * f_max);
      CHECK(st.padded_cells + st.useful_cells == st.size * st.max_frames);
    }
    for (size_t b = 1; b < plan.stats.size(); ++b) {
      CHECK(plan.stats[b - 1].max_frames <= plan.stats[b].max_frames);
    }
  }
}

TEST_CASE("padding report totals") {
  Manifest m;
  m.entries.push_back(entry("u_z", 0.525));
  m.entries.push_back(entry("u_b", 0.325));
  m.entries.push_back(entry("u_a", 0.525));
  m.entries.push_back(entry("u_t", 0.125));
  m.entries.push_back(entry("u_aa", 0.325));
  PaddingReport report = padding_report(plan_sorted_fixed(m, 2));
  CHECK(report.total_cells == 210);
  CHECK(report.useful_cells == 170);
  CHECK(report.padded_cells == 40);
  CHECK(report.waste_fraction == 40.0 / 210.0);
  CHECK(report.estimated_epoch_cost == 130);
}

TEST_CASE("shuffled batch order is a seeded permutation") {
  std::mt19937_64 rng(42);
  std::vector<size_t> order = shuffled_batch_order(10, rng);
  REQUIRE(order.size() == 10);
  std::vector<size_t> identity(10);
  std::iota(identity.begin(), identity.end(), 0);
  CHECK(std::is_permutation(order.begin(), order.end(), identity.begin()));

  std::mt19937_64 replay(42);
  std::vector<size_t> expected = identity;
  for (size_t i = 10; i > 1; --i) {
    size_t j = static_cast<size_t>(replay() % i);
    std::swap(expected[i - 1], expected[j]);
  }
  CHECK(order == expected);

  std::mt19937_64 same(42);
  CHECK(shuffled_batch_order(10, same) == order);
  std::mt19937_64 other(43);
  CHECK(shuffled_batch_order(10, other) != order);

  std::mt19937_64 tiny(1);
  CHECK(shuffled_batch_order(0, tiny).empty());
  CHECK(shuffled_batch_order(1, tiny) == std::vector<size_t>{0});
}

}  // TEST_SUITE

}  // namespace
}  // namespace casr
