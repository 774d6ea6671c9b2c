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
#include <string>
#include <utility>
#include <vector>

#include "xsdmin/codec.hpp"

namespace xsdmin::bench {

struct TimingStats {
  double min_us = 0;
  double max_us = 0;
  double mean_us = 0;
  double median_us = 0;
  double stddev_us = 0;
};

TimingStats summarize(std::vector<double> samples_us);

struct MessageBench {
  std::string name;
  codec::StructureMetrics metrics;  // of the canonical XML form
  // size keys: xml, min_xml, json, min_json, gzip_xml, gzip_min_xml,
  // gzip_json, gzip_min_json (+ xmill when the external binary is found)
  std::map<std::string, std::size_t> sizes;
  std::vector<std::pair<std::string, TimingStats>> timings;
};

struct BenchConfig {
  int iterations = 500;
  int warmup = 50;
  int gzip_level = 6;
  std::string host_description;
  bool enable_xmill = true;  // probed; rows appear only if a binary exists
};

struct BenchReport {
  BenchConfig config;
  std::string xmill_binary;  // empty when not found
  std::vector<MessageBench> messages;
};

/// Measure sizes and encode/decode timings for each corpus message.
/// Timed operation labels: XML, De XML, GZip XML, De GZip XML, Min JSON,
/// De Min JSON, GZip Min JSON, De GZip Min JSON, and XMill/De XMill when
/// an external xmill binary is on PATH. Sizes are recorded once per
/// encoding and are byte lengths of actually produced payloads.
BenchReport run_bench(
    const std::vector<std::pair<std::string, std::string>>& corpus,
    const codec::Codec& codec, const BenchConfig& config);

enum class ReportFormat { json, csv, markdown };

/// Deterministic rendering of a report. CSV columns:
/// message,metric,value with one row per size/metric entry, and
/// message,operation,min_us,max_us,mean_us,median_us,stddev_us for
/// timings. Markdown mirrors the structure/size/timing table layout.
std::string render_report(const BenchReport& report, ReportFormat format);

/// Locate an executable on PATH; empty string when absent.
std::string find_executable(const std::string& name);

}  // namespace xsdmin::bench
