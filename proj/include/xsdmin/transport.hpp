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

#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "xsdmin/codec.hpp"

namespace xsdmin::transport {

/// Per-encoding ingest counters kept by the receiver.
struct EncodingStats {
  std::size_t received = 0;
  std::size_t decode_failures = 0;
  std::size_t payload_bytes = 0;  // on-the-wire body bytes
};

struct IngestStats {
  std::map<std::string, EncodingStats> per_encoding;

  std::size_t total_received() const;
  std::size_t total_failures() const;
};

std::string stats_to_json(const IngestStats& stats);
IngestStats stats_from_json(std::string_view bytes);

/// Loopback event collector: POST /ingest decodes one message per the
/// Content-Type / X-Min-Encoding / Content-Encoding headers and answers
/// with a digest of the decoded content; GET /stats reports IngestStats.
class Receiver {
 public:
  explicit Receiver(const codec::Codec& codec);
  ~Receiver();
  Receiver(const Receiver&) = delete;
  Receiver& operator=(const Receiver&) = delete;

  /// Bind and serve on a background thread. Port 0 picks a free port.
  /// Returns the bound port.
  int start(const std::string& host, int port);

  /// Drain in-flight requests and stop the server thread.
  void stop();

  IngestStats stats() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct BurstResult {
  int sent = 0;
  int ok = 0;
  int failed = 0;            // non-2xx responses or digest mismatches
  std::vector<double> rtt_us;  // one sample per request, send order
};

/// POST each corpus message `n` times, sequentially, to `endpoint`
/// (e.g. "http://127.0.0.1:8080"), timing each round trip on a monotonic
/// clock. The receiver's digest answer is verified against the sender's.
/// Throws ConnectionFailure when the endpoint cannot be reached; the
/// message reports how many requests completed first.
BurstResult send_burst(
    const std::string& endpoint,
    const std::vector<std::pair<std::string, std::string>>& corpus,
    codec::Encoding encoding, codec::Compression compression, int n,
    const codec::Codec& codec, int gzip_level = 6);

/// Digest the receiver echoes back: SHA-256 hex of the canonical XML
/// rendering of the decoded tree.
std::string content_digest(const codec::Codec& codec,
                           const codec::InstanceTree& tree);

}  // namespace xsdmin::transport
