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

#include "xsdmin/minify.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <set>

#include "xsdmin/errors.hpp"

namespace xsdmin::minify {

using schema::ComponentKind;
using schema::ComponentPath;
using schema::QualifiedName;
using schema::SchemaComponent;
using schema::SchemaDocument;

std::string short_name(std::size_t index) {
  std::string out;
  // Bijective base-26: subtract one per digit so there is no zero digit.
  for (;;) {
    out.insert(out.begin(), static_cast<char>('a' + index % 26));
    if (index < 26) break;
    index = index / 26 - 1;
  }
  return out;
}

ScopeOrder scope_order(const SchemaComponent& type) {
  ScopeOrder order;
  for (const SchemaComponent& child : type.children) {
    if (child.kind == ComponentKind::attribute) {
      order.attributes.push_back(&child);
    } else if (child.kind == ComponentKind::element) {
      order.elements.push_back(&child);
    }
  }
  order.has_text_slot = type.has_text;
  return order;
}

namespace {

// Hands out short names for one scope and asserts they never repeat.
class ScopeCounter {
 public:
  explicit ScopeCounter(std::string scope) : scope_(std::move(scope)) {}

  std::string next() {
    std::string name = short_name(index_++);
    if (!issued_.insert(name).second) {
      throw InternalCollision("'" + name + "' issued twice in scope " +
                              scope_);
    }
    return name;
  }

 private:
  std::string scope_;
  std::size_t index_ = 0;
  std::set<std::string> issued_;
};

class Minifier {
 public:
  MinificationResult run(const SchemaDocument& root,
                         const schema::Loader& loader) {
    MinificationResult result;
    result.original_schemas = schema::resolve_references(root, loader);

    for (const SchemaDocument& doc : result.original_schemas) {
      if (!result.namespace_map.contains(doc.target_namespace)) {
        result.namespace_map[doc.target_namespace] =
            doc.target_namespace + std::string(kNamespaceSuffix);
      }
    }
    namespace_map_ = &result.namespace_map;

    check_path_uniqueness(result.original_schemas);

    // Pass 1: assign every short name, walking documents in dependency
    // order so referenced schemas are named before their consumers.
    for (const SchemaDocument& doc : result.original_schemas) {
      assign_document(doc);
    }
    // Pass 2: rewrite each document with the assigned names.
    for (const SchemaDocument& doc : result.original_schemas) {
      result.minified_schemas.push_back(rewrite_document(doc));
    }
    result.dictionary = std::move(dictionary_);
    return result;
  }

 private:
  void check_path_uniqueness(const std::vector<SchemaDocument>& docs) {
    std::set<std::string> seen;
    for (const SchemaDocument& doc : docs) {
      std::function<void(const SchemaComponent&)> walk =
          [&](const SchemaComponent& comp) {
            if (!seen.insert(comp.path.render()).second) {
              throw DuplicateName("components in different documents render "
                                  "the same path: " +
                                  comp.path.render());
            }
            for (const SchemaComponent& child : comp.children) walk(child);
          };
      for (const SchemaComponent& c : doc.components) walk(c);
    }
  }

  void record(const std::string& short_name, const ComponentPath& path) {
    dictionary_.entries.push_back({short_name, path});
    renames_[path.render()] = short_name;
  }

  void assign_document(const SchemaDocument& doc) {
    ScopeCounter global_names("top-level names of " + doc.target_namespace);
    ScopeCounter global_types("top-level types of " + doc.target_namespace);
    // Counters are shared across included documents of one namespace.
    auto [names_it, n_fresh] = top_level_names_.try_emplace(
        doc.target_namespace, std::move(global_names));
    auto [types_it, t_fresh] = top_level_types_.try_emplace(
        doc.target_namespace, std::move(global_types));

    for (const SchemaComponent& comp : doc.components) {
      switch (comp.kind) {
        case ComponentKind::element:
        case ComponentKind::attribute: {
          record(names_it->second.next(), comp.path);
          for (const SchemaComponent& child : comp.children) {
            if (child.is_type()) assign_type(child);
          }
          break;
        }
        case ComponentKind::complex_type:
        case ComponentKind::simple_type: {
          std::string name = types_it->second.next();
          record(name, comp.path);
          type_renames_[{doc.target_namespace, comp.name_or_value}] = name;
          assign_type(comp);
          break;
        }
        case ComponentKind::enumeration:
          assert(false && "enumeration at top level");
      }
    }
  }

  void assign_type(const SchemaComponent& type) {
    if (type.kind == ComponentKind::simple_type) {
      std::size_t value = 0;
      for (const SchemaComponent& ev : type.children) {
        record(std::to_string(value++), ev.path);
      }
      return;
    }
    ScopeCounter counter("members of " + type.path.render());
    ScopeOrder order = scope_order(type);
    for (const SchemaComponent* attr : order.attributes) {
      record(counter.next(), attr->path);
      for (const SchemaComponent& child : attr->children) {
        if (child.is_type()) assign_type(child);
      }
    }
    if (order.has_text_slot) {
      counter.next();  // reserved for the text-content member; no entry
    }
    for (const SchemaComponent* elem : order.elements) {
      record(counter.next(), elem->path);
      for (const SchemaComponent& child : elem->children) {
        if (child.is_type()) assign_type(child);
      }
    }
  }

  std::string renamed(const ComponentPath& path) const {
    auto it = renames_.find(path.render());
    assert(it != renames_.end() && "component missed by assignment pass");
    return it->second;
  }

  QualifiedName rewrite_type_ref(const QualifiedName& ref) const {
    if (ref.is_xsd_builtin()) return ref;
    auto rename = type_renames_.find({ref.ns, ref.local});
    if (rename == type_renames_.end()) {
      throw UnsupportedConstruct(
          "unresolved type reference '" + ref.local + "' in namespace '" +
              ref.ns + "'",
          0);
    }
    auto ns = namespace_map_->find(ref.ns);
    assert(ns != namespace_map_->end());
    return {ns->second, rename->second};
  }

  SchemaDocument rewrite_document(const SchemaDocument& doc) {
    SchemaDocument out;
    out.location = minified_filename(doc.location);
    out.target_namespace = namespace_map_->at(doc.target_namespace);
    out.preferred_prefix = doc.preferred_prefix;
    out.qualified_elements = doc.qualified_elements;
    for (const schema::SchemaReference& ref : doc.references) {
      schema::SchemaReference min_ref = ref;
      min_ref.schema_location = minified_filename(ref.schema_location);
      if (ref.kind == schema::SchemaReference::Kind::import) {
        min_ref.ns = namespace_map_->at(ref.ns);
      }
      out.references.push_back(std::move(min_ref));
    }
    ComponentPath top;
    for (const SchemaComponent& comp : doc.components) {
      out.components.push_back(rewrite_component(comp, top));
    }
    return out;
  }

  SchemaComponent rewrite_component(const SchemaComponent& comp,
                                    const ComponentPath& parent_path) {
    SchemaComponent out = comp;
    out.children.clear();
    if (!comp.name_or_value.empty()) {
      out.name_or_value = renamed(comp.path);
    }
    if (comp.type_ref) out.type_ref = rewrite_type_ref(*comp.type_ref);
    if (comp.content_base && !comp.content_base->is_xsd_builtin()) {
      out.content_base = rewrite_type_ref(*comp.content_base);
    }
    out.path = parent_path.child(comp.kind, out.name_or_value);
    for (const SchemaComponent& child : comp.children) {
      out.children.push_back(rewrite_component(child, out.path));
    }
    return out;
  }

  NameDictionary dictionary_;
  std::map<std::string, std::string> renames_;  // original path -> short
  std::map<std::pair<std::string, std::string>, std::string> type_renames_;
  std::map<std::string, ScopeCounter> top_level_names_;
  std::map<std::string, ScopeCounter> top_level_types_;
  const std::map<std::string, std::string>* namespace_map_ = nullptr;
};

}  // namespace

MinificationResult minify(const SchemaDocument& root,
                          const schema::Loader& loader) {
  return Minifier().run(root, loader);
}

std::string write_dictionary(const NameDictionary& dict) {
  std::string out;
  for (const DictionaryEntry& e : dict.entries) {
    out += e.short_name;
    out += ',';
    out += e.path.render();
    out += '\n';
  }
  return out;
}

NameDictionary parse_dictionary(std::string_view bytes) {
  NameDictionary dict;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    ++line_no;
    std::size_t eol = bytes.find('\n', pos);
    if (eol == std::string_view::npos) {
      throw DicSyntaxError("missing trailing newline", line_no);
    }
    std::string_view line = bytes.substr(pos, eol - pos);
    pos = eol + 1;
    std::size_t comma = line.find(',');
    if (comma == std::string_view::npos) {
      throw DicSyntaxError("missing ',' separator", line_no);
    }
    std::string_view name = line.substr(0, comma);
    std::string_view path = line.substr(comma + 1);
    if (name.empty()) throw DicSyntaxError("empty short name", line_no);
    bool letters = std::all_of(name.begin(), name.end(), [](char c) {
      return c >= 'a' && c <= 'z';
    });
    bool digits = std::all_of(name.begin(), name.end(), [](char c) {
      return c >= '0' && c <= '9';
    });
    if (!letters && !digits) {
      throw DicSyntaxError(
          "short name '" + std::string(name) + "' is neither a letter series "
          "nor a decimal number", line_no);
    }
    DictionaryEntry entry;
    entry.short_name = std::string(name);
    try {
      entry.path = ComponentPath::parse(path);
    } catch (const DicSyntaxError& e) {
      throw DicSyntaxError(e.what(), line_no);
    }
    dict.entries.push_back(std::move(entry));
  }
  return dict;
}

std::string minified_filename(const std::string& location) {
  std::string name = location;
  auto slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  auto dot = name.find_last_of('.');
  if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  return name + ".min.xsd";
}

std::string dictionary_filename(const std::string& location) {
  std::string name = minified_filename(location);
  return name.substr(0, name.size() - 8) + ".dic";
}

std::vector<std::pair<std::string, std::string>> write_minified_schema(
    const MinificationResult& result) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const SchemaDocument& doc : result.minified_schemas) {
    out.emplace_back(doc.location, schema::write_schema(doc));
  }
  return out;
}

}  // namespace xsdmin::minify
