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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "xsdmin/binding.hpp"
#include "xsdmin/codec.hpp"
#include "xsdmin/minify.hpp"
#include "xsdmin/schema.hpp"

#ifndef XSDMIN_CORPUS_DIR
#error "XSDMIN_CORPUS_DIR must be defined by the build"
#endif

namespace xsdmin::test {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline std::filesystem::path corpus_dir() {
  return std::filesystem::path(XSDMIN_CORPUS_DIR);
}

inline std::string idmef_xsd() {
  return read_file(corpus_dir() / "idmef.xsd");
}

// Corpus messages as (stem, bytes), filename order.
inline std::vector<std::pair<std::string, std::string>> corpus_messages() {
  std::vector<std::filesystem::path> files;
  for (const auto& entry :
       std::filesystem::directory_iterator(corpus_dir() / "messages")) {
    if (entry.path().extension() == ".xml") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : files) out.emplace_back(f.stem().string(), read_file(f));
  return out;
}

// Loader over an in-memory schema set.
inline schema::Loader memory_loader(std::map<std::string, std::string> files) {
  return [files = std::move(files)](const std::string& location) {
    auto it = files.find(location);
    if (it == files.end()) {
      throw std::runtime_error("no such schema: " + location);
    }
    return it->second;
  };
}

inline schema::Loader empty_loader() { return memory_loader({}); }

struct IdmefFixture {
  schema::SchemaDocument root;
  std::vector<schema::SchemaDocument> docs;
  minify::MinificationResult minified;
  binding::BindingManifest manifest;
  codec::Codec codec;

  static const IdmefFixture& instance() {
    static IdmefFixture fixture = make();
    return fixture;
  }

 private:
  static IdmefFixture make() {
    schema::SchemaDocument root =
        schema::parse_schema(idmef_xsd(), "idmef.xsd");
    auto docs = schema::resolve_references(root, empty_loader());
    auto minified = minify::minify(root, empty_loader());
    auto manifest = binding::build_manifest(minified);
    codec::Codec codec(docs, manifest);
    return IdmefFixture{std::move(root), std::move(docs), std::move(minified),
                        std::move(manifest), std::move(codec)};
  }
};

// Deterministic generator of random schema-valid IDMEF instances, used by
// the round-trip property suites. Walks the schema structure directly so
// it stays independent of the codec under test.
class InstanceGenerator {
 public:
  InstanceGenerator(const std::vector<schema::SchemaDocument>& docs,
                    std::uint32_t seed)
      : docs_(docs), rng_(seed) {}

  codec::InstanceTree generate() {
    const schema::SchemaDocument& root_doc = docs_.back();
    const schema::SchemaComponent* root = nullptr;
    for (const auto& comp : root_doc.components) {
      if (comp.kind == schema::ComponentKind::element) {
        root = &comp;
        break;
      }
    }
    if (!root) throw std::runtime_error("schema has no global element");
    return element(*root, root_doc.target_namespace, 1);
  }

 private:
  using Component = schema::SchemaComponent;

  bool chance(double p) {
    return std::uniform_real_distribution<double>(0, 1)(rng_) < p;
  }

  int pick(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }

  std::string random_text() {
    static const char* kPool[] = {
        "dns",      "192.0.2.7",   "a b c",     "x<y&z>\"q'",
        "62.5",     "monitor",     "th\xC3\xA9 caf\xC3\xA9", "0",
        "line\nbr", "  spaced  ",  "tab\tsep",  "31337",
    };
    std::string value = kPool[pick(0, 11)];
    if (chance(0.3)) value += "-" + std::to_string(pick(0, 9999));
    // leading/trailing whitespace never survives parsing; trim here
    std::size_t b = value.find_first_not_of(" \t\n");
    std::size_t e = value.find_last_not_of(" \t\n");
    return value.substr(b, e - b + 1);
  }

  const Component* type_of(const Component& member) {
    if (member.type_ref) {
      if (member.type_ref->is_xsd_builtin()) return nullptr;
      return schema::find_type(docs_, *member.type_ref);
    }
    for (const Component& child : member.children) {
      if (child.is_type()) return &child;
    }
    return nullptr;
  }

  codec::InstanceTree element(const Component& decl, const std::string& ns,
                              int depth) {
    codec::InstanceTree tree;
    tree.element = {ns, decl.name_or_value};
    const Component* type = type_of(decl);
    if (!type) {
      if (chance(0.8)) tree.text = non_empty(random_text());
      return tree;
    }
    if (type->kind == schema::ComponentKind::simple_type) {
      if (!type->children.empty()) {
        tree.text = type->children[pick(0, static_cast<int>(
                                               type->children.size()) -
                                               1)]
                        .name_or_value;
      } else if (chance(0.8)) {
        tree.text = non_empty(random_text());
      }
      return tree;
    }

    std::vector<const Component*> attrs;
    std::vector<const Component*> elems;
    for (const Component& child : type->children) {
      (child.kind == schema::ComponentKind::attribute ? attrs : elems)
          .push_back(&child);
    }
    for (const Component* attr : attrs) {
      if (!attr->required && !chance(0.6)) continue;
      const Component* attr_type = type_of(*attr);
      std::string value;
      if (attr_type && !attr_type->children.empty()) {
        value = attr_type
                    ->children[pick(
                        0, static_cast<int>(attr_type->children.size()) - 1)]
                    .name_or_value;
      } else {
        value = non_empty(random_text());
      }
      tree.attributes.emplace_back(attr->name_or_value, value);
    }
    if (type->has_text && chance(0.85)) {
      tree.text = non_empty(random_text());
    }
    if (type->compositor == schema::Compositor::choice && !elems.empty()) {
      const Component* choice = elems[pick(0, static_cast<int>(elems.size()) - 1)];
      tree.children.push_back(element(*choice, ns, depth + 1));
      return tree;
    }
    for (const Component* elem : elems) {
      int count;
      if (elem->occurs.unbounded) {
        count = pick(elem->occurs.min, std::max(elem->occurs.min, 2));
      } else {
        count = pick(elem->occurs.min, elem->occurs.max);
      }
      if (depth > 4) count = elem->occurs.min;  // keep trees small
      for (int i = 0; i < count; ++i) {
        tree.children.push_back(element(*elem, ns, depth + 1));
      }
    }
    return tree;
  }

  static std::string non_empty(std::string s) {
    return s.empty() ? "x" : s;
  }

  const std::vector<schema::SchemaDocument>& docs_;
  std::mt19937 rng_;
};

}  // namespace xsdmin::test
