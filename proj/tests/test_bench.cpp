// Copyright 2026 The xsdmin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "xsdmin/bench.hpp"

#include <doctest.h>

#include "support.hpp"
#include "xsdmin/errors.hpp"
#include "xsdmin/gzip.hpp"

using namespace xsdmin;

namespace {

bench::BenchConfig tiny_config() {
  bench::BenchConfig config;
  config.iterations = 3;
  config.warmup = 1;
  config.enable_xmill = false;
  return config;
}

}  // namespace

TEST_CASE("run_bench rejects degenerate configs") {
  bench::BenchConfig config = tiny_config();
  config.iterations = 0;
  CHECK_THROWS_AS(bench::run_bench({}, test::IdmefFixture::instance().codec,
                                   config),
                  Error);
}

TEST_CASE("summarize: order statistics") {
  bench::TimingStats stats = bench::summarize({5, 1, 3, 2, 4});
  CHECK(stats.min_us == 1);
  CHECK(stats.max_us == 5);
  CHECK(stats.mean_us == 3);
  CHECK(stats.median_us == 3);
  bench::TimingStats even = bench::summarize({1, 2, 3, 4});
  CHECK(even.median_us == 2.5);
  CHECK(even.min_us <= even.median_us);
  CHECK(even.median_us <= even.max_us);
}

TEST_CASE("run_bench: sizes equal actually produced payloads") {
  const auto& fixture = test::IdmefFixture::instance();
  auto corpus = test::corpus_messages();
  corpus.resize(2);
  bench::BenchReport report =
      bench::run_bench(corpus, fixture.codec, tiny_config());
  REQUIRE(report.messages.size() == 2);
  for (const auto& m : report.messages) {
    const auto& bytes =
        m.name == corpus[0].first ? corpus[0].second : corpus[1].second;
    auto tree = fixture.codec.parse_instance(bytes);
    CHECK(m.sizes.at("xml") == fixture.codec.to_xml(tree).size());
    CHECK(m.sizes.at("min_json") == fixture.codec.to_min_json(tree).size());
    CHECK(m.sizes.at("gzip_min_json") ==
          gzip::compress(fixture.codec.to_min_json(tree), 6).size());
    for (const auto& [label, stats] : m.timings) {
      CHECK(stats.min_us <= stats.median_us);
      CHECK(stats.median_us <= stats.max_us);
    }
    // one row per operation label
    REQUIRE(m.timings.size() == 8);
    CHECK(m.timings[0].first == "XML");
    CHECK(m.timings[4].first == "Min JSON");
    CHECK(m.timings[7].first == "De GZip Min JSON");
  }
}

TEST_CASE("render_report: empty corpus gives a header-only CSV") {
  bench::BenchReport report;
  report.config = tiny_config();
  std::string csv = bench::render_report(report, bench::ReportFormat::csv);
  CHECK(csv.find("name,xml_bytes,nodes") == 0);
  CHECK(csv.find('\n') == csv.size() - 1);
}

TEST_CASE("render_report: one data row per corpus message") {
  const auto& fixture = test::IdmefFixture::instance();
  bench::BenchReport report =
      bench::run_bench(test::corpus_messages(), fixture.codec, tiny_config());
  std::string csv = bench::render_report(report, bench::ReportFormat::csv);
  std::size_t rows = 0;
  for (char c : csv) rows += (c == '\n');
  CHECK(rows == 15);  // header + 14 messages

  std::string markdown =
      bench::render_report(report, bench::ReportFormat::markdown);
  CHECK(markdown.find("## Message structure") != std::string::npos);
  CHECK(markdown.find("Reduction %") != std::string::npos);

  // rendering is deterministic for a fixed report
  CHECK(bench::render_report(report, bench::ReportFormat::json) ==
        bench::render_report(report, bench::ReportFormat::json));
  CHECK(bench::render_report(report, bench::ReportFormat::csv) == csv);
}

TEST_CASE("size entries reproduce across runs") {
  const auto& fixture = test::IdmefFixture::instance();
  auto corpus = test::corpus_messages();
  auto a = bench::run_bench(corpus, fixture.codec, tiny_config());
  auto b = bench::run_bench(corpus, fixture.codec, tiny_config());
  REQUIRE(a.messages.size() == b.messages.size());
  for (std::size_t i = 0; i < a.messages.size(); ++i) {
    CHECK(a.messages[i].sizes == b.messages[i].sizes);
    CHECK(a.messages[i].metrics == b.messages[i].metrics);
  }
}
