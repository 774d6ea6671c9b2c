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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "xsdmin/bench.hpp"
#include "xsdmin/binding.hpp"
#include "xsdmin/codec.hpp"
#include "xsdmin/digest.hpp"
#include "xsdmin/errors.hpp"
#include "xsdmin/gzip.hpp"
#include "xsdmin/minify.hpp"
#include "xsdmin/schema.hpp"
#include "xsdmin/transport.hpp"

namespace fs = std::filesystem;
using namespace xsdmin;

namespace {

constexpr const char* kVersion = "xsdmin 0.1.0";

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadFailure(path.string(), "cannot open for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, std::string_view bytes) {
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadFailure(path.string(), "cannot open for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

schema::Loader file_loader(const fs::path& base_dir) {
  return [base_dir](const std::string& location) {
    fs::path path(location);
    if (path.is_relative()) path = base_dir / path;
    return read_file(path);
  };
}

minify::MinificationResult minify_file(const fs::path& schema_path) {
  std::string bytes = read_file(schema_path);
  schema::SchemaDocument root =
      schema::parse_schema(bytes, schema_path.filename().string());
  return minify::minify(root, file_loader(schema_path.parent_path()));
}

bool is_gzip(std::string_view bytes) {
  return bytes.size() >= 2 && static_cast<unsigned char>(bytes[0]) == 0x1f &&
         static_cast<unsigned char>(bytes[1]) == 0x8b;
}

codec::Codec load_codec(const fs::path& schema_path,
                        const fs::path& manifest_path) {
  std::string bytes = read_file(schema_path);
  schema::SchemaDocument root =
      schema::parse_schema(bytes, schema_path.filename().string());
  auto docs =
      schema::resolve_references(root, file_loader(schema_path.parent_path()));
  binding::BindingManifest manifest =
      binding::parse_manifest(read_file(manifest_path));
  return codec::Codec(std::move(docs), std::move(manifest));
}

std::vector<std::pair<std::string, std::string>> load_corpus(
    const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> corpus;
  if (!fs::is_directory(dir)) {
    throw LoadFailure(dir.string(), "not a directory");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".xml") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const fs::path& file : files) {
    corpus.emplace_back(file.stem().string(), read_file(file));
  }
  if (corpus.empty()) {
    throw LoadFailure(dir.string(), "no .xml files found");
  }
  return corpus;
}

// The minification products are regenerated only when the schema or any
// of its transitively referenced schemas is newer than an existing output.
bool outputs_current(const fs::path& schema_path, const fs::path& out_dir) {
  fs::path min_path = out_dir / minify::minified_filename(schema_path.string());
  fs::path dic_path =
      out_dir / minify::dictionary_filename(schema_path.string());
  std::error_code ec;
  auto out_time = fs::last_write_time(min_path, ec);
  if (ec) return false;
  auto dic_time = fs::last_write_time(dic_path, ec);
  if (ec) return false;
  auto oldest_output = std::min(out_time, dic_time);

  std::vector<fs::path> inputs{schema_path};
  try {
    std::string bytes = read_file(schema_path);
    schema::SchemaDocument root =
        schema::parse_schema(bytes, schema_path.filename().string());
    for (const auto& doc : schema::resolve_references(
             root, file_loader(schema_path.parent_path()))) {
      fs::path path(doc.location);
      if (path.is_relative()) path = schema_path.parent_path() / path;
      inputs.push_back(path);
    }
  } catch (const Error&) {
    return false;  // unparseable input: let the real run report it
  }
  for (const fs::path& input : inputs) {
    auto in_time = fs::last_write_time(input, ec);
    if (ec || in_time > oldest_output) return false;
  }
  return true;
}

int run(int argc, char** argv) {
  CLI::App app{"XML-Schema name minification and wire-format transcoding"};
  app.set_version_flag("--version", kVersion);
  bool quiet = false;
  app.add_flag("--quiet", quiet, "suppress progress messages");
  app.require_subcommand(1);

  auto note = [&quiet](const std::string& message) {
    if (!quiet) std::cerr << message << "\n";
  };

  // ---- minify --------------------------------------------------------
  auto* cmd_minify =
      app.add_subcommand("minify", "minify an XSD and emit .min.xsd + .dic");
  std::string minify_in;
  std::string minify_out_dir = ".";
  bool minify_force = false;
  cmd_minify->add_option("schema", minify_in, "input .xsd file")->required();
  cmd_minify->add_option("--out-dir", minify_out_dir, "output directory");
  cmd_minify->add_flag("--force", minify_force,
                       "regenerate even when outputs are newer than inputs");
  cmd_minify->callback([&] {
    fs::path schema_path(minify_in);
    fs::path out_dir(minify_out_dir);
    if (!minify_force && outputs_current(schema_path, out_dir)) {
      note("outputs are up to date; use --force to regenerate");
      return;
    }
    minify::MinificationResult result = minify_file(schema_path);
    for (const auto& [filename, bytes] : minify::write_minified_schema(result)) {
      write_file(out_dir / filename, bytes);
      note("wrote " + (out_dir / filename).string());
    }
    fs::path dic_path =
        out_dir / minify::dictionary_filename(schema_path.string());
    write_file(dic_path, minify::write_dictionary(result.dictionary));
    note("wrote " + dic_path.string());
  });

  // ---- manifest ------------------------------------------------------
  auto* cmd_manifest = app.add_subcommand(
      "manifest", "derive the binding manifest from a schema and its DIC");
  std::string manifest_schema;
  std::string manifest_min_dir;
  std::string manifest_out = "manifest.json";
  cmd_manifest->add_option("--schema", manifest_schema, "original .xsd file")
      ->required();
  cmd_manifest->add_option("--min-dir", manifest_min_dir,
                           "directory holding the .dic file (verified)");
  cmd_manifest->add_option("--out", manifest_out, "output manifest path");
  cmd_manifest->callback([&] {
    fs::path schema_path(manifest_schema);
    minify::MinificationResult result = minify_file(schema_path);
    std::optional<std::string> dic_bytes;
    if (!manifest_min_dir.empty()) {
      fs::path dic_path = fs::path(manifest_min_dir) /
                          minify::dictionary_filename(schema_path.string());
      dic_bytes = read_file(dic_path);
    }
    binding::BindingManifest manifest = binding::build_manifest(
        result, dic_bytes ? std::optional<std::string_view>(*dic_bytes)
                          : std::nullopt);
    write_file(manifest_out, binding::write_manifest(manifest));
    note("wrote " + manifest_out);
  });

  // ---- emit ----------------------------------------------------------
  auto* cmd_emit =
      app.add_subcommand("emit", "expand code templates over a manifest");
  std::string emit_manifest;
  std::string emit_templates;
  std::string emit_out_dir = ".";
  cmd_emit->add_option("--manifest", emit_manifest, "manifest.json path")
      ->required();
  cmd_emit->add_option("--templates", emit_templates,
                       "directory of *.tmpl files")
      ->required();
  cmd_emit->add_option("--out-dir", emit_out_dir, "output directory");
  cmd_emit->callback([&] {
    binding::BindingManifest manifest =
        binding::parse_manifest(read_file(emit_manifest));
    binding::TemplateSet templates;
    for (const auto& entry : fs::directory_iterator(emit_templates)) {
      if (entry.path().extension() == ".tmpl") {
        templates.templates[entry.path().stem().string()] =
            read_file(entry.path());
      }
    }
    for (const auto& [filename, bytes] :
         binding::emit_source(manifest, templates)) {
      write_file(fs::path(emit_out_dir) / filename, bytes);
      note("wrote " + (fs::path(emit_out_dir) / filename).string());
    }
  });

  // ---- transcode -----------------------------------------------------
  auto* cmd_transcode =
      app.add_subcommand("transcode", "re-encode one message");
  std::string tc_in, tc_out, tc_schema, tc_manifest;
  std::string tc_from = "xml", tc_to = "min_json";
  bool tc_gzip = false;
  cmd_transcode->add_option("--in", tc_in, "input message file")->required();
  cmd_transcode->add_option("--out", tc_out,
                            "output file (stdout when omitted)");
  cmd_transcode->add_option("--schema", tc_schema, "original .xsd file")
      ->required();
  cmd_transcode->add_option("--manifest", tc_manifest, "manifest.json path")
      ->required();
  cmd_transcode->add_option("--from", tc_from,
                            "input encoding: xml|min_xml|json|min_json");
  cmd_transcode->add_option("--to", tc_to,
                            "output encoding: xml|min_xml|json|min_json");
  cmd_transcode->add_flag("--gzip", tc_gzip, "gzip the output payload");
  cmd_transcode->callback([&] {
    auto from = codec::encoding_from_name(tc_from);
    auto to = codec::encoding_from_name(tc_to);
    if (!from || !to) {
      throw CLI::ValidationError("--from/--to",
                                 "encoding must be one of "
                                 "xml|min_xml|json|min_json");
    }
    codec::Codec codec = load_codec(tc_schema, tc_manifest);
    std::string input = read_file(tc_in);
    if (is_gzip(input)) input = gzip::decompress(input);
    codec::InstanceTree tree = codec.decode(input, *from);
    std::string output =
        codec::to_wire(codec, tree, *to,
                       tc_gzip ? codec::Compression::gzip
                               : codec::Compression::none)
            .payload;
    if (tc_out.empty()) {
      std::cout.write(output.data(),
                      static_cast<std::streamsize>(output.size()));
    } else {
      write_file(tc_out, output);
      note("wrote " + tc_out);
    }
  });

  // ---- analyze -------------------------------------------------------
  auto* cmd_analyze =
      app.add_subcommand("analyze", "structure metrics of messages");
  std::string an_schema, an_in, an_corpus;
  cmd_analyze->add_option("--schema", an_schema, "original .xsd file")
      ->required();
  cmd_analyze->add_option("--in", an_in, "single message file");
  cmd_analyze->add_option("--corpus", an_corpus, "directory of .xml messages");
  cmd_analyze->callback([&] {
    fs::path schema_path(an_schema);
    std::string bytes = read_file(schema_path);
    schema::SchemaDocument root =
        schema::parse_schema(bytes, schema_path.filename().string());
    auto docs = schema::resolve_references(
        root, file_loader(schema_path.parent_path()));

    std::vector<std::pair<std::string, std::string>> inputs;
    if (!an_in.empty()) {
      inputs.emplace_back(fs::path(an_in).stem().string(), read_file(an_in));
    } else if (!an_corpus.empty()) {
      inputs = load_corpus(an_corpus);
    } else {
      throw CLI::ValidationError("analyze", "need --in or --corpus");
    }
    std::cout << "name,bytes,nodes,attributes,depth\n";
    for (const auto& [name, message] : inputs) {
      codec::InstanceTree tree = codec::parse_instance(message, docs);
      codec::StructureMetrics m = codec::analyze_structure(tree, message);
      std::cout << name << ',' << m.byte_size << ',' << m.node_count << ','
                << m.attribute_count << ',' << m.depth << "\n";
    }
  });

  // ---- bench ---------------------------------------------------------
  auto* cmd_bench = app.add_subcommand("bench", "size and timing measurements");
  std::string bench_corpus, bench_schema, bench_manifest;
  std::string bench_out, bench_format = "json";
  bench::BenchConfig bench_config;
  cmd_bench->add_option("--corpus", bench_corpus, "directory of .xml messages")
      ->required();
  cmd_bench->add_option("--schema", bench_schema, "original .xsd file")
      ->required();
  cmd_bench->add_option("--manifest", bench_manifest, "manifest.json path")
      ->required();
  cmd_bench->add_option("--out", bench_out, "output file (stdout otherwise)");
  cmd_bench->add_option("--gzip-level", bench_config.gzip_level,
                        "gzip level 1..9");
  cmd_bench->add_option("--iterations", bench_config.iterations,
                        "timed iterations per operation");
  cmd_bench->add_option("--warmup", bench_config.warmup,
                        "warmup iterations per operation");
  cmd_bench->add_option("--format", bench_format, "json|csv|markdown");
  cmd_bench->callback([&] {
    bench::ReportFormat format;
    if (bench_format == "json") format = bench::ReportFormat::json;
    else if (bench_format == "csv") format = bench::ReportFormat::csv;
    else if (bench_format == "markdown") format = bench::ReportFormat::markdown;
    else throw CLI::ValidationError("--format", "must be json|csv|markdown");

    codec::Codec codec = load_codec(bench_schema, bench_manifest);
    auto corpus = load_corpus(bench_corpus);
    bench::BenchReport report = bench::run_bench(corpus, codec, bench_config);
    std::string rendered = bench::render_report(report, format);
    if (bench_out.empty()) {
      std::cout << rendered;
    } else {
      write_file(bench_out, rendered);
      note("wrote " + bench_out);
    }
  });

  // ---- serve ---------------------------------------------------------
  auto* cmd_serve = app.add_subcommand("serve", "run the ingest receiver");
  std::string serve_bind = "127.0.0.1:8080";
  std::string serve_schema, serve_manifest;
  cmd_serve->add_option("--bind", serve_bind, "HOST:PORT to listen on");
  cmd_serve->add_option("--schema", serve_schema, "original .xsd file")
      ->required();
  cmd_serve->add_option("--manifest", serve_manifest, "manifest.json path")
      ->required();
  cmd_serve->callback([&] {
    auto colon = serve_bind.rfind(':');
    if (colon == std::string::npos) {
      throw CLI::ValidationError("--bind", "expected HOST:PORT");
    }
    std::string host = serve_bind.substr(0, colon);
    int port = std::stoi(serve_bind.substr(colon + 1));
    codec::Codec codec = load_codec(serve_schema, serve_manifest);
    transport::Receiver receiver(codec);
    int bound = receiver.start(host, port);
    note("listening on " + host + ":" + std::to_string(bound) +
         " (POST /ingest, GET /stats; Ctrl-C stops)");
    static std::atomic<bool> interrupted{false};
    std::signal(SIGINT, [](int) { interrupted.store(true); });
    std::signal(SIGTERM, [](int) { interrupted.store(true); });
    while (!interrupted.load()) {
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
    receiver.stop();
    std::cout << stats_to_json(receiver.stats());
  });

  // ---- send ----------------------------------------------------------
  auto* cmd_send = app.add_subcommand("send", "send a burst of messages");
  std::string send_endpoint, send_corpus;
  std::string send_encoding = "min_json";
  bool send_gzip = false;
  std::string send_schema, send_manifest;
  int send_n = 1;
  cmd_send->add_option("--endpoint", send_endpoint, "receiver base URL")
      ->required();
  cmd_send->add_option("--corpus", send_corpus, "directory of .xml messages")
      ->required();
  cmd_send->add_option("--encoding", send_encoding,
                       "xml|min_xml|json|min_json");
  cmd_send->add_flag("--gzip", send_gzip, "gzip payloads");
  cmd_send->add_option("-n", send_n, "copies of each message");
  cmd_send->add_option("--schema", send_schema, "original .xsd file")
      ->required();
  cmd_send->add_option("--manifest", send_manifest, "manifest.json path")
      ->required();
  cmd_send->callback([&] {
    auto encoding = codec::encoding_from_name(send_encoding);
    if (!encoding) {
      throw CLI::ValidationError("--encoding",
                                 "must be xml|min_xml|json|min_json");
    }
    codec::Codec codec = load_codec(send_schema, send_manifest);
    auto corpus = load_corpus(send_corpus);
    transport::BurstResult result = transport::send_burst(
        send_endpoint, corpus, *encoding,
        send_gzip ? codec::Compression::gzip : codec::Compression::none,
        send_n, codec);
    bench::TimingStats stats = bench::summarize(result.rtt_us);
    std::cout << "sent " << result.sent << ", ok " << result.ok << ", failed "
              << result.failed << "\n";
    std::cout << "round-trip us: min " << stats.min_us << ", mean "
              << stats.mean_us << ", median " << stats.median_us << ", max "
              << stats.max_us << "\n";
  });

  // global flags (--quiet) are accepted after the subcommand too
  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) {
         return true;
       })) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // usage problems (including bare `xsdmin`) exit 1; --help/--version 0
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const xsdmin::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
