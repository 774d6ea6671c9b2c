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

#include <chrono>
#include <cstdlib>
#include <mutex>
#include <thread>

#define CPPHTTPLIB_ZLIB_SUPPORT
#include <httplib.h>
#include <json.hpp>

#include "xsdmin/digest.hpp"
#include "xsdmin/errors.hpp"
#include "xsdmin/gzip.hpp"

namespace xsdmin::transport {

using json = nlohmann::ordered_json;

std::size_t IngestStats::total_received() const {
  std::size_t n = 0;
  for (const auto& [name, s] : per_encoding) n += s.received;
  return n;
}

std::size_t IngestStats::total_failures() const {
  std::size_t n = 0;
  for (const auto& [name, s] : per_encoding) n += s.decode_failures;
  return n;
}

std::string stats_to_json(const IngestStats& stats) {
  json j = json::object();
  for (const auto& [name, s] : stats.per_encoding) {
    j[name] = {{"received", s.received},
               {"decode_failures", s.decode_failures},
               {"payload_bytes", s.payload_bytes}};
  }
  return j.dump(1) + "\n";
}

IngestStats stats_from_json(std::string_view bytes) {
  IngestStats stats;
  json j;
  try {
    j = json::parse(bytes);
  } catch (const nlohmann::json::exception& e) {
    throw JsonSyntax(e.what());
  }
  for (const auto& [name, s] : j.items()) {
    EncodingStats e;
    e.received = s.at("received").get<std::size_t>();
    e.decode_failures = s.at("decode_failures").get<std::size_t>();
    e.payload_bytes = s.at("payload_bytes").get<std::size_t>();
    stats.per_encoding[name] = e;
  }
  return stats;
}

namespace {

// Maps request headers onto one of the four wire encodings.
std::optional<codec::Encoding> encoding_from_headers(
    const httplib::Request& req) {
  std::string content_type = req.get_header_value("Content-Type");
  auto semi = content_type.find(';');
  if (semi != std::string::npos) content_type = content_type.substr(0, semi);
  std::string min_encoding = req.get_header_value("X-Min-Encoding");

  if (!min_encoding.empty()) {
    if (min_encoding == "min_xml") return codec::Encoding::min_xml;
    if (min_encoding == "min_json") return codec::Encoding::min_json;
    return std::nullopt;
  }
  if (content_type == "application/xml") return codec::Encoding::xml;
  if (content_type == "application/json") return codec::Encoding::json;
  return std::nullopt;
}

std::string content_type_for(codec::Encoding encoding) {
  switch (encoding) {
    case codec::Encoding::xml:
    case codec::Encoding::min_xml:
      return "application/xml";
    case codec::Encoding::json:
    case codec::Encoding::min_json:
      return "application/json";
  }
  return "application/octet-stream";
}

}  // namespace

struct Receiver::Impl {
  const codec::Codec& codec;
  httplib::Server server;
  std::thread thread;
  mutable std::mutex mutex;
  IngestStats stats;

  explicit Impl(const codec::Codec& c) : codec(c) {
    // Small request/response pairs on persistent connections stall badly
    // under Nagle + delayed ACK; burst senders rely on these settings.
    server.set_tcp_nodelay(true);
    server.set_keep_alive_max_count(1 << 20);
    server.Post("/ingest", [this](const httplib::Request& req,
                                  httplib::Response& res) {
      handle_ingest(req, res);
    });
    server.Get("/stats", [this](const httplib::Request&,
                                httplib::Response& res) {
      res.set_content(stats_to_json(stats_snapshot()), "application/json");
    });
  }

  IngestStats stats_snapshot() const {
    std::lock_guard<std::mutex> lock(mutex);
    return stats;
  }

  void handle_ingest(const httplib::Request& req, httplib::Response& res) {
    auto encoding = encoding_from_headers(req);
    if (!encoding) {
      res.status = 415;
      res.set_content("unknown encoding headers\n", "text/plain");
      return;
    }
    std::string key(codec::encoding_name(*encoding));
    // The HTTP layer already un-gzipped Content-Encoding bodies; count the
    // wire bytes from Content-Length when present.
    std::size_t wire_bytes = req.body.size();
    if (req.has_header("Content-Length")) {
      wire_bytes = static_cast<std::size_t>(
          std::strtoull(req.get_header_value("Content-Length").c_str(),
                        nullptr, 10));
    }
    try {
      codec::InstanceTree tree = codec.decode(req.body, *encoding);
      std::string digest = content_digest(codec, tree);
      {
        std::lock_guard<std::mutex> lock(mutex);
        EncodingStats& s = stats.per_encoding[key];
        s.received += 1;
        s.payload_bytes += wire_bytes;
      }
      res.set_content(digest + "\n", "text/plain");
    } catch (const Error& e) {
      {
        std::lock_guard<std::mutex> lock(mutex);
        stats.per_encoding[key].decode_failures += 1;
      }
      res.status = 400;
      res.set_content(std::string(e.what()) + "\n", "text/plain");
    }
  }
};

Receiver::Receiver(const codec::Codec& codec)
    : impl_(std::make_unique<Impl>(codec)) {}

Receiver::~Receiver() { stop(); }

int Receiver::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw ConnectionFailure("cannot bind to " + host);
  } else {
    if (!impl_->server.bind_to_port(host, port)) {
      throw ConnectionFailure("cannot bind to " + host + ":" +
                              std::to_string(port));
    }
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void Receiver::stop() {
  if (impl_ && impl_->thread.joinable()) {
    impl_->server.stop();
    impl_->thread.join();
  }
}

IngestStats Receiver::stats() const { return impl_->stats_snapshot(); }

std::string content_digest(const codec::Codec& codec,
                           const codec::InstanceTree& tree) {
  return sha256_hex(codec.to_xml(tree));
}

BurstResult send_burst(
    const std::string& endpoint,
    const std::vector<std::pair<std::string, std::string>>& corpus,
    codec::Encoding encoding, codec::Compression compression, int n,
    const codec::Codec& codec, int gzip_level) {
  httplib::Client client(endpoint);
  client.set_connection_timeout(5, 0);
  client.set_read_timeout(30, 0);
  client.set_tcp_nodelay(true);
  client.set_keep_alive(true);  // one connection per burst

  struct Prepared {
    codec::WireMessage message;
    std::string digest;
  };
  std::vector<Prepared> prepared;
  for (const auto& [name, xml_bytes] : corpus) {
    codec::InstanceTree tree = codec.parse_instance(xml_bytes);
    prepared.push_back({codec::to_wire(codec, tree, encoding, compression,
                                       gzip_level),
                        content_digest(codec, tree)});
  }

  httplib::Headers base_headers;
  if (encoding == codec::Encoding::min_xml) {
    base_headers.emplace("X-Min-Encoding", "min_xml");
  } else if (encoding == codec::Encoding::min_json) {
    base_headers.emplace("X-Min-Encoding", "min_json");
  }
  if (compression == codec::Compression::gzip) {
    base_headers.emplace("Content-Encoding", "gzip");
  }
  std::string content_type = content_type_for(encoding);

  BurstResult result;
  using clock = std::chrono::steady_clock;
  for (const Prepared& p : prepared) {
    for (int i = 0; i < n; ++i) {
      auto begin = clock::now();
      httplib::Result res = client.Post("/ingest", base_headers,
                                        p.message.payload, content_type);
      auto end = clock::now();
      if (!res) {
        throw ConnectionFailure(
            "POST " + endpoint + "/ingest failed (" +
            httplib::to_string(res.error()) + ") after " +
            std::to_string(result.sent) + " requests");
      }
      result.sent += 1;
      result.rtt_us.push_back(
          std::chrono::duration<double, std::micro>(end - begin).count());
      std::string body = res->body;
      if (!body.empty() && body.back() == '\n') body.pop_back();
      if (res->status == 200 && body == p.digest) {
        result.ok += 1;
      } else {
        result.failed += 1;
      }
    }
  }
  return result;
}

}  // namespace xsdmin::transport
