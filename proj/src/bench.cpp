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

#include <sys/utsname.h>
#include <unistd.h>

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "xsdmin/errors.hpp"
#include "xsdmin/gzip.hpp"

namespace xsdmin::bench {

using json = nlohmann::ordered_json;

TimingStats summarize(std::vector<double> samples_us) {
  TimingStats stats;
  if (samples_us.empty()) return stats;
  std::sort(samples_us.begin(), samples_us.end());
  stats.min_us = samples_us.front();
  stats.max_us = samples_us.back();
  std::size_t n = samples_us.size();
  stats.median_us = (n % 2 == 1)
                        ? samples_us[n / 2]
                        : (samples_us[n / 2 - 1] + samples_us[n / 2]) / 2.0;
  double sum = 0;
  for (double s : samples_us) sum += s;
  stats.mean_us = sum / static_cast<double>(n);
  double var = 0;
  for (double s : samples_us) {
    var += (s - stats.mean_us) * (s - stats.mean_us);
  }
  stats.stddev_us = std::sqrt(var / static_cast<double>(n));
  return stats;
}

namespace {

template <typename F>
TimingStats time_operation(F&& op, int warmup, int iterations) {
  using clock = std::chrono::steady_clock;
  for (int i = 0; i < warmup; ++i) op();
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(iterations));
  for (int i = 0; i < iterations; ++i) {
    auto begin = clock::now();
    op();
    auto end = clock::now();
    auto ns =
        std::chrono::duration_cast<std::chrono::nanoseconds>(end - begin)
            .count();
    assert(ns >= 0 && "monotonic clock went backwards");
    samples.push_back(static_cast<double>(ns) / 1000.0);
  }
  return summarize(std::move(samples));
}

struct XmillRuns {
  std::size_t size = 0;
  double compress_us = 0;
  double decompress_us = 0;
  bool ok = false;
};

XmillRuns run_xmill(const std::string& binary, const std::string& xml,
                    const std::string& tag) {
  namespace fs = std::filesystem;
  XmillRuns result;
  fs::path dir = fs::temp_directory_path() / ("xsdmin-xmill-" + tag);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) return result;
  fs::path input = dir / "m.xml";
  fs::path packed = dir / "m.xmi";
  {
    std::ofstream out(input, std::ios::binary);
    out << xml;
  }
  using clock = std::chrono::steady_clock;
  auto quiet = " >/dev/null 2>&1";
  auto t0 = clock::now();
  int rc = std::system(
      (binary + " -f \"" + input.string() + "\"" + quiet).c_str());
  auto t1 = clock::now();
  if (rc != 0 || !fs::exists(packed)) {
    fs::remove_all(dir, ec);
    return result;
  }
  result.size = static_cast<std::size_t>(fs::file_size(packed));
  result.compress_us =
      std::chrono::duration<double, std::micro>(t1 - t0).count();
  std::string debinary = binary;
  if (auto pos = debinary.rfind("xmill"); pos != std::string::npos) {
    debinary.replace(pos, 5, "xdemill");
  }
  fs::remove(input, ec);
  auto t2 = clock::now();
  rc = std::system(
      (debinary + " -f \"" + packed.string() + "\"" + quiet).c_str());
  auto t3 = clock::now();
  if (rc == 0) {
    result.decompress_us =
        std::chrono::duration<double, std::micro>(t3 - t2).count();
  }
  result.ok = true;
  fs::remove_all(dir, ec);
  return result;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

std::string format_us(double us) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", us);
  return buf;
}

std::string format_pct(double pct) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", pct);
  return buf;
}

double reduction_pct(std::size_t xml, std::size_t other) {
  if (xml == 0) return 0;
  return (static_cast<double>(xml) - static_cast<double>(other)) * 100.0 /
         static_cast<double>(xml);
}

const TimingStats* find_timing(const MessageBench& m, const std::string& key) {
  for (const auto& [label, stats] : m.timings) {
    if (label == key) return &stats;
  }
  return nullptr;
}

}  // namespace

std::string find_executable(const std::string& name) {
  const char* path = std::getenv("PATH");
  if (!path) return "";
  std::string paths = path;
  std::size_t pos = 0;
  while (pos <= paths.size()) {
    std::size_t colon = paths.find(':', pos);
    std::string dir = paths.substr(
        pos, colon == std::string::npos ? std::string::npos : colon - pos);
    if (!dir.empty()) {
      std::filesystem::path candidate = std::filesystem::path(dir) / name;
      std::error_code ec;
      if (std::filesystem::is_regular_file(candidate, ec) &&
          ::access(candidate.c_str(), X_OK) == 0) {
        return candidate.string();
      }
    }
    if (colon == std::string::npos) break;
    pos = colon + 1;
  }
  return "";
}

BenchReport run_bench(
    const std::vector<std::pair<std::string, std::string>>& corpus,
    const codec::Codec& codec, const BenchConfig& config) {
  if (config.iterations <= 0) {
    throw Error("bench requires a positive iteration count");
  }
  if (config.warmup < 0) {
    throw Error("bench requires a non-negative warmup count");
  }
  BenchReport report;
  report.config = config;
  if (report.config.host_description.empty()) {
    utsname uts{};
    if (uname(&uts) == 0) {
      report.config.host_description = std::string(uts.sysname) + " " +
                                       uts.release + " " + uts.machine;
    }
  }
  if (config.enable_xmill) report.xmill_binary = find_executable("xmill");

  for (const auto& [name, xml_bytes] : corpus) {
    MessageBench bench;
    bench.name = name;

    codec::InstanceTree tree;
    try {
      tree = codec.parse_instance(xml_bytes);
    } catch (const Error& e) {
      throw Error("corpus message '" + name + "': " + e.what());
    }

    std::string xml = codec.to_xml(tree);
    std::string min_xml = codec.to_min_xml(tree);
    std::string plain_json = codec.to_json(tree);
    std::string min_json = codec.to_min_json(tree);
    bench.metrics = codec::analyze_structure(tree, xml);

    bench.sizes["xml"] = xml.size();
    bench.sizes["min_xml"] = min_xml.size();
    bench.sizes["json"] = plain_json.size();
    bench.sizes["min_json"] = min_json.size();
    bench.sizes["gzip_xml"] = gzip::compress(xml, config.gzip_level).size();
    bench.sizes["gzip_min_xml"] =
        gzip::compress(min_xml, config.gzip_level).size();
    bench.sizes["gzip_json"] =
        gzip::compress(plain_json, config.gzip_level).size();
    bench.sizes["gzip_min_json"] =
        gzip::compress(min_json, config.gzip_level).size();

    int warm = config.warmup;
    int iters = config.iterations;
    std::string gzip_xml_payload = gzip::compress(xml, config.gzip_level);
    std::string gzip_min_json_payload =
        gzip::compress(min_json, config.gzip_level);

    bench.timings.emplace_back(
        "XML", time_operation([&] { codec.to_xml(tree); }, warm, iters));
    bench.timings.emplace_back(
        "De XML",
        time_operation([&] { codec.parse_instance(xml); }, warm, iters));
    bench.timings.emplace_back(
        "GZip XML",
        time_operation([&] { gzip::compress(xml, config.gzip_level); }, warm,
                       iters));
    bench.timings.emplace_back(
        "De GZip XML",
        time_operation([&] { gzip::decompress(gzip_xml_payload); }, warm,
                       iters));
    bench.timings.emplace_back(
        "Min JSON",
        time_operation([&] { codec.to_min_json(tree); }, warm, iters));
    bench.timings.emplace_back(
        "De Min JSON",
        time_operation([&] { codec.from_min_json(min_json); }, warm, iters));
    bench.timings.emplace_back(
        "GZip Min JSON",
        time_operation([&] { gzip::compress(min_json, config.gzip_level); },
                       warm, iters));
    bench.timings.emplace_back(
        "De GZip Min JSON",
        time_operation([&] { gzip::decompress(gzip_min_json_payload); }, warm,
                       iters));

    if (!report.xmill_binary.empty()) {
      XmillRuns xmill = run_xmill(report.xmill_binary, xml, name);
      if (xmill.ok) {
        bench.sizes["xmill"] = xmill.size;
        TimingStats c;
        c.min_us = c.max_us = c.mean_us = c.median_us = xmill.compress_us;
        TimingStats d;
        d.min_us = d.max_us = d.mean_us = d.median_us = xmill.decompress_us;
        bench.timings.emplace_back("XMill", c);
        bench.timings.emplace_back("De XMill", d);
      }
    }

    report.messages.push_back(std::move(bench));
  }
  return report;
}

std::string render_report(const BenchReport& report, ReportFormat format) {
  if (format == ReportFormat::json) {
    json j = json::object();
    j["config"] = {{"iterations", report.config.iterations},
                   {"warmup", report.config.warmup},
                   {"gzip_level", report.config.gzip_level},
                   {"host", report.config.host_description}};
    if (!report.xmill_binary.empty()) j["xmill_binary"] = report.xmill_binary;
    j["messages"] = json::array();
    for (const MessageBench& m : report.messages) {
      json jm = json::object();
      jm["name"] = m.name;
      jm["structure"] = {{"byte_size", m.metrics.byte_size},
                         {"node_count", m.metrics.node_count},
                         {"attribute_count", m.metrics.attribute_count},
                         {"depth", m.metrics.depth}};
      jm["sizes"] = json::object();
      for (const auto& [key, value] : m.sizes) jm["sizes"][key] = value;
      jm["reduction_min_json_pct"] =
          reduction_pct(m.sizes.at("xml"), m.sizes.at("min_json"));
      jm["timings_us"] = json::object();
      for (const auto& [label, stats] : m.timings) {
        jm["timings_us"][label] = {{"min", stats.min_us},
                                   {"max", stats.max_us},
                                   {"mean", stats.mean_us},
                                   {"median", stats.median_us},
                                   {"stddev", stats.stddev_us}};
      }
      j["messages"].push_back(std::move(jm));
    }
    return j.dump(1) + "\n";
  }

  if (format == ReportFormat::csv) {
    static const char* kTimingLabels[] = {
        "XML",           "De XML",        "GZip XML",      "De GZip XML",
        "Min JSON",      "De Min JSON",   "GZip Min JSON", "De GZip Min JSON"};
    std::string out =
        "name,xml_bytes,nodes,attributes,depth,"
        "size_xml,size_min_xml,size_json,size_min_json,"
        "size_gzip_xml,size_gzip_min_xml,size_gzip_json,size_gzip_min_json,"
        "reduction_min_json_pct,"
        "xml_us,de_xml_us,gzip_xml_us,de_gzip_xml_us,"
        "min_json_us,de_min_json_us,gzip_min_json_us,de_gzip_min_json_us\n";
    for (const MessageBench& m : report.messages) {
      out += csv_escape(m.name);
      out += ',' + std::to_string(m.metrics.byte_size);
      out += ',' + std::to_string(m.metrics.node_count);
      out += ',' + std::to_string(m.metrics.attribute_count);
      out += ',' + std::to_string(m.metrics.depth);
      for (const char* key : {"xml", "min_xml", "json", "min_json",
                              "gzip_xml", "gzip_min_xml", "gzip_json",
                              "gzip_min_json"}) {
        out += ',' + std::to_string(m.sizes.at(key));
      }
      out += ',' +
             format_pct(reduction_pct(m.sizes.at("xml"),
                                      m.sizes.at("min_json")));
      for (const char* label : kTimingLabels) {
        const TimingStats* stats = find_timing(m, label);
        out += ',' + (stats ? format_us(stats->mean_us) : std::string());
      }
      out += '\n';
    }
    return out;
  }

  // markdown
  std::string out;
  out += "## Message structure\n\n";
  out += "| Message Type | XML Message Size (Bytes) | Total Nodes Count | "
         "Total Attributes Count | Levels |\n";
  out += "|---|---|---|---|---|\n";
  for (const MessageBench& m : report.messages) {
    out += "| " + m.name + " | " + std::to_string(m.metrics.byte_size) +
           " | " + std::to_string(m.metrics.node_count) + " | " +
           std::to_string(m.metrics.attribute_count) + " | " +
           std::to_string(m.metrics.depth) + " |\n";
  }
  out += "\n## Message sizes\n\n";
  out += "| Message Type | XML | Minified JSON | Reduction % |\n";
  out += "|---|---|---|---|\n";
  for (const MessageBench& m : report.messages) {
    out += "| " + m.name + " | " + std::to_string(m.sizes.at("xml")) + " | " +
           std::to_string(m.sizes.at("min_json")) + " | " +
           format_pct(reduction_pct(m.sizes.at("xml"),
                                    m.sizes.at("min_json"))) +
           " |\n";
  }
  out += "\n## Compressed sizes\n\n";
  bool xmill = !report.xmill_binary.empty();
  out += xmill ? "| Message Type | GZipMinJSON | GZipXML | XMill | MinJSON | "
                 "XML |\n|---|---|---|---|---|---|\n"
               : "| Message Type | GZipMinJSON | GZipXML | MinJSON | XML "
                 "|\n|---|---|---|---|---|\n";
  for (const MessageBench& m : report.messages) {
    out += "| " + m.name + " | " + std::to_string(m.sizes.at("gzip_min_json")) +
           " | " + std::to_string(m.sizes.at("gzip_xml")) + " | ";
    if (xmill) {
      out += (m.sizes.contains("xmill") ? std::to_string(m.sizes.at("xmill"))
                                        : std::string("-")) +
             " | ";
    }
    out += std::to_string(m.sizes.at("min_json")) + " | " +
           std::to_string(m.sizes.at("xml")) + " |\n";
  }
  out += "\n## Mean execution time (microseconds)\n\n";
  out += "| Message Type |";
  std::vector<std::string> labels;
  if (!report.messages.empty()) {
    for (const auto& [label, stats] : report.messages.front().timings) {
      labels.push_back(label);
      out += " " + label + " |";
    }
  }
  out += "\n|---|";
  for (std::size_t i = 0; i < labels.size(); ++i) out += "---|";
  out += "\n";
  for (const MessageBench& m : report.messages) {
    out += "| " + m.name + " |";
    for (const std::string& label : labels) {
      const TimingStats* stats = find_timing(m, label);
      out += stats ? " " + format_us(stats->mean_us) + " |" : " - |";
    }
    out += "\n";
  }
  return out;
}

}  // namespace xsdmin::bench
