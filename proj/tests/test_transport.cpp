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

#include "xsdmin/transport.hpp"

#define CPPHTTPLIB_ZLIB_SUPPORT
#include <doctest.h>
#include <httplib.h>

#include "support.hpp"
#include "xsdmin/errors.hpp"
#include "xsdmin/gzip.hpp"

using namespace xsdmin;
using codec::Compression;
using codec::Encoding;

namespace {

struct RunningReceiver {
  transport::Receiver receiver;
  int port;

  explicit RunningReceiver(const codec::Codec& codec)
      : receiver(codec), port(receiver.start("127.0.0.1", 0)) {}
  std::string endpoint() const {
    return "http://127.0.0.1:" + std::to_string(port);
  }
};

}  // namespace

TEST_CASE("receiver: happy path and stats") {
  const auto& fixture = test::IdmefFixture::instance();
  RunningReceiver server(fixture.codec);
  httplib::Client client(server.endpoint());

  auto tree = fixture.codec.parse_instance(
      test::corpus_messages().back().second);  // heartbeat
  std::string payload = fixture.codec.to_min_json(tree);
  httplib::Headers headers{{"X-Min-Encoding", "min_json"}};
  for (int i = 0; i < 3; ++i) {
    auto res = client.Post("/ingest", headers, payload, "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);
    std::string body = res->body;
    if (!body.empty() && body.back() == '\n') body.pop_back();
    CHECK(body == transport::content_digest(fixture.codec, tree));
  }

  auto stats_res = client.Get("/stats");
  REQUIRE(stats_res);
  transport::IngestStats stats = transport::stats_from_json(stats_res->body);
  CHECK(stats.per_encoding.at("min_json").received == 3);
  CHECK(stats.per_encoding.at("min_json").decode_failures == 0);
  CHECK(stats.per_encoding.at("min_json").payload_bytes ==
        payload.size() * 3);
  CHECK(stats.total_received() == 3);
}

TEST_CASE("receiver: bad payload counts as a decode failure") {
  const auto& fixture = test::IdmefFixture::instance();
  RunningReceiver server(fixture.codec);
  httplib::Client client(server.endpoint());

  httplib::Headers headers{{"X-Min-Encoding", "min_json"}};
  auto res = client.Post("/ingest", headers, "{\"zz\":{}}",
                         "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);
  CHECK(server.receiver.stats().per_encoding.at("min_json").decode_failures ==
        1);
}

TEST_CASE("receiver: unknown encoding headers give 415") {
  const auto& fixture = test::IdmefFixture::instance();
  RunningReceiver server(fixture.codec);
  httplib::Client client(server.endpoint());

  auto res = client.Post("/ingest", "x", "text/csv");
  REQUIRE(res);
  CHECK(res->status == 415);
  httplib::Headers headers{{"X-Min-Encoding", "sideways"}};
  auto res2 = client.Post("/ingest", headers, "x", "application/json");
  REQUIRE(res2);
  CHECK(res2->status == 415);
  CHECK(server.receiver.stats().total_received() == 0);
}

TEST_CASE("send_burst: conservation across encodings") {
  const auto& fixture = test::IdmefFixture::instance();
  RunningReceiver server(fixture.codec);

  auto corpus = test::corpus_messages();
  corpus.resize(3);
  for (Encoding enc : {Encoding::xml, Encoding::min_xml, Encoding::json,
                       Encoding::min_json}) {
    transport::BurstResult result = transport::send_burst(
        server.endpoint(), corpus, enc, Compression::none, 4, fixture.codec);
    CHECK(result.sent == 12);
    CHECK(result.ok == 12);
    CHECK(result.failed == 0);
    CHECK(result.rtt_us.size() == 12);
    for (double rtt : result.rtt_us) CHECK(rtt > 0);
  }
  transport::IngestStats stats = server.receiver.stats();
  CHECK(stats.total_received() == 48);
  CHECK(stats.total_failures() == 0);
}

TEST_CASE("send_burst: gzip bodies arrive intact") {
  const auto& fixture = test::IdmefFixture::instance();
  RunningReceiver server(fixture.codec);

  auto corpus = test::corpus_messages();
  corpus.resize(2);
  transport::BurstResult result =
      transport::send_burst(server.endpoint(), corpus, Encoding::min_json,
                            Compression::gzip, 2, fixture.codec);
  CHECK(result.sent == 4);
  CHECK(result.ok == 4);
  transport::IngestStats stats = server.receiver.stats();
  CHECK(stats.per_encoding.at("min_json").received == 4);
  // wire accounting counts compressed bytes, which are smaller
  auto tree0 = fixture.codec.parse_instance(corpus[0].second);
  auto tree1 = fixture.codec.parse_instance(corpus[1].second);
  std::size_t uncompressed =
      2 * (fixture.codec.to_min_json(tree0).size() +
           fixture.codec.to_min_json(tree1).size());
  CHECK(stats.per_encoding.at("min_json").payload_bytes < uncompressed);
}

TEST_CASE("send_burst: unreachable endpoint raises ConnectionFailure") {
  const auto& fixture = test::IdmefFixture::instance();
  auto corpus = test::corpus_messages();
  corpus.resize(1);
  CHECK_THROWS_AS(
      transport::send_burst("http://127.0.0.1:1", corpus, Encoding::xml,
                            Compression::none, 1, fixture.codec),
      ConnectionFailure);
}

TEST_CASE("receiver: graceful stop drains and can restart on a new port") {
  const auto& fixture = test::IdmefFixture::instance();
  auto receiver = std::make_unique<transport::Receiver>(fixture.codec);
  int port = receiver->start("127.0.0.1", 0);
  CHECK(port > 0);
  receiver->stop();
  // port is free again for a fresh receiver
  transport::Receiver second(fixture.codec);
  int port2 = second.start("127.0.0.1", port);
  CHECK(port2 == port);
  second.stop();
}
