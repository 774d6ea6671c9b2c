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

#include "xsdmin/gzip.hpp"

#include <zlib.h>

#include <limits>

#include "xsdmin/errors.hpp"

namespace xsdmin::gzip {

namespace {
// windowBits 15 + 16 selects the gzip container (header + CRC-32 trailer).
constexpr int kGzipWindowBits = 15 + 16;
}  // namespace

std::string compress(std::string_view payload, int level) {
  if (level < 1 || level > 9) {
    throw Error("gzip level must be within 1..9, got " +
                std::to_string(level));
  }
  z_stream stream{};
  if (deflateInit2(&stream, level, Z_DEFLATED, kGzipWindowBits, 8,
                   Z_DEFAULT_STRATEGY) != Z_OK) {
    throw Error("deflateInit2 failed");
  }
  std::string out;
  out.resize(deflateBound(&stream, static_cast<uLong>(payload.size())) + 18);
  stream.next_in =
      reinterpret_cast<Bytef*>(const_cast<char*>(payload.data()));
  stream.avail_in = static_cast<uInt>(payload.size());
  stream.next_out = reinterpret_cast<Bytef*>(out.data());
  stream.avail_out = static_cast<uInt>(out.size());
  int rc = deflate(&stream, Z_FINISH);
  deflateEnd(&stream);
  if (rc != Z_STREAM_END) {
    throw Error("deflate failed with code " + std::to_string(rc));
  }
  out.resize(stream.total_out);
  return out;
}

std::string decompress(std::string_view bytes) {
  z_stream stream{};
  if (inflateInit2(&stream, kGzipWindowBits) != Z_OK) {
    throw Error("inflateInit2 failed");
  }
  stream.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(bytes.data()));
  stream.avail_in = static_cast<uInt>(bytes.size());

  std::string out;
  char buffer[16384];
  int rc = Z_OK;
  do {
    stream.next_out = reinterpret_cast<Bytef*>(buffer);
    stream.avail_out = sizeof(buffer);
    rc = inflate(&stream, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      std::string msg = stream.msg ? stream.msg : "inflate error";
      inflateEnd(&stream);
      throw CorruptStream(msg + " (code " + std::to_string(rc) + ")");
    }
    out.append(buffer, sizeof(buffer) - stream.avail_out);
  } while (rc != Z_STREAM_END);
  bool trailing_garbage = stream.avail_in != 0;
  inflateEnd(&stream);
  if (trailing_garbage) {
    throw CorruptStream("trailing bytes after gzip member");
  }
  return out;
}

}  // namespace xsdmin::gzip
