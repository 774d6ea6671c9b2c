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

#include "xsdmin/binding.hpp"

#include <cassert>
#include <cctype>
#include <functional>
#include <set>

#include <json.hpp>

#include "xsdmin/digest.hpp"
#include "xsdmin/errors.hpp"

namespace xsdmin::binding {

using json = nlohmann::ordered_json;
using schema::ComponentKind;
using schema::SchemaComponent;
using schema::SchemaDocument;

std::string_view member_kind_name(MemberKind kind) {
  switch (kind) {
    case MemberKind::attribute: return "attribute";
    case MemberKind::text_content: return "text";
    case MemberKind::child_element: return "element";
  }
  return "";
}

namespace {

MemberKind member_kind_from_name(const std::string& name) {
  if (name == "attribute") return MemberKind::attribute;
  if (name == "text") return MemberKind::text_content;
  if (name == "element") return MemberKind::child_element;
  throw JsonSyntax("unknown member kind '" + name + "' in manifest");
}

class ManifestBuilder {
 public:
  BindingManifest build(const minify::MinificationResult& result) {
    for (const auto& entry : result.dictionary.entries) {
      wire_by_path_[entry.path.render()] = entry.short_name;
    }
    BindingManifest manifest;
    manifest.dictionary_checksum =
        sha256_hex(minify::write_dictionary(result.dictionary));

    const SchemaDocument& root = result.original_schemas.back();
    manifest.schema_namespace = root.target_namespace;
    manifest.minified_namespace =
        result.namespace_map.at(root.target_namespace);
    manifest.xml_prefix = root.preferred_prefix;

    for (const SchemaDocument& doc : result.original_schemas) {
      for (const SchemaComponent& comp : doc.components) {
        collect_top_level(comp, manifest);
      }
    }
    return manifest;
  }

 private:
  std::string wire_of(const SchemaComponent& comp) const {
    auto it = wire_by_path_.find(comp.path.render());
    assert(it != wire_by_path_.end() && "dictionary misses a component");
    return it->second;
  }

  std::string type_ref_string(const SchemaComponent& member) const {
    if (member.type_ref) {
      if (member.type_ref->is_xsd_builtin()) {
        return "xsd:" + member.type_ref->local;
      }
      return member.type_ref->local;
    }
    for (const SchemaComponent& child : member.children) {
      if (child.is_type()) return child.path.render();  // anonymous
    }
    return "xsd:string";
  }

  void collect_top_level(const SchemaComponent& comp,
                         BindingManifest& manifest) {
    if (comp.kind == ComponentKind::element ||
        comp.kind == ComponentKind::attribute) {
      BoundMember global;
      global.readable = comp.name_or_value;
      global.wire = wire_of(comp);
      global.kind = comp.kind == ComponentKind::attribute
                        ? MemberKind::attribute
                        : MemberKind::child_element;
      global.type_ref = type_ref_string(comp);
      global.occurs = comp.occurs;
      manifest.globals.push_back(std::move(global));
      for (const SchemaComponent& child : comp.children) {
        if (child.is_type()) collect_type(child, manifest);
      }
    } else if (comp.is_type()) {
      collect_type(comp, manifest);
    }
  }

  void collect_type(const SchemaComponent& type, BindingManifest& manifest) {
    BoundType bound;
    bound.readable = type.name_or_value;
    bound.wire = type.anonymous ? "" : wire_of(type);
    bound.path = type.path.render();
    bound.compositor = type.compositor;
    bound.has_wildcard = type.has_wildcard;

    if (type.kind == ComponentKind::simple_type) {
      bound.is_enum = !type.children.empty();
      for (const SchemaComponent& ev : type.children) {
        bound.enum_values.emplace_back(ev.name_or_value, wire_of(ev));
      }
      manifest.types.push_back(std::move(bound));
      return;
    }

    minify::ScopeOrder order = minify::scope_order(type);
    auto add_member = [&](const SchemaComponent& comp, MemberKind kind) {
      BoundMember member;
      member.readable = comp.name_or_value;
      member.wire = wire_of(comp);
      member.kind = kind;
      member.type_ref = type_ref_string(comp);
      member.occurs = comp.occurs;
      bound.members.push_back(std::move(member));
    };
    for (const SchemaComponent* attr : order.attributes) {
      add_member(*attr, MemberKind::attribute);
    }
    if (order.has_text_slot) {
      BoundMember text;
      text.readable = "value";
      text.wire = minify::short_name(order.text_slot());
      text.kind = MemberKind::text_content;
      text.type_ref = type.content_base
                          ? (type.content_base->is_xsd_builtin()
                                 ? "xsd:" + type.content_base->local
                                 : type.content_base->local)
                          : "xsd:string";
      text.occurs = {0, 1, false};
      bound.members.push_back(std::move(text));
    }
    for (const SchemaComponent* elem : order.elements) {
      add_member(*elem, MemberKind::child_element);
    }
    manifest.types.push_back(std::move(bound));

    // Nested anonymous types of members come after their owner.
    for (const SchemaComponent& child : type.children) {
      for (const SchemaComponent& grand : child.children) {
        if (grand.is_type()) collect_type(grand, manifest);
      }
    }
  }

  std::map<std::string, std::string> wire_by_path_;
};

json occurs_to_json(const schema::Occurs& occurs) {
  json j = json::object();
  j["min"] = occurs.min;
  j["max"] = occurs.unbounded ? -1 : occurs.max;
  return j;
}

schema::Occurs occurs_from_json(const json& j) {
  schema::Occurs occurs;
  occurs.min = j.at("min").get<int>();
  int max = j.at("max").get<int>();
  if (max < 0) {
    occurs.unbounded = true;
  } else {
    occurs.max = max;
  }
  return occurs;
}

json member_to_json(const BoundMember& m) {
  json j = json::object();
  j["readable"] = m.readable;
  j["wire"] = m.wire;
  j["kind"] = std::string(member_kind_name(m.kind));
  j["type"] = m.type_ref;
  j["occurs"] = occurs_to_json(m.occurs);
  return j;
}

BoundMember member_from_json(const json& j) {
  BoundMember m;
  m.readable = j.at("readable").get<std::string>();
  m.wire = j.at("wire").get<std::string>();
  m.kind = member_kind_from_name(j.at("kind").get<std::string>());
  m.type_ref = j.at("type").get<std::string>();
  m.occurs = occurs_from_json(j.at("occurs"));
  return m;
}

}  // namespace

BindingManifest build_manifest(const minify::MinificationResult& result,
                               std::optional<std::string_view> expected_dic) {
  if (expected_dic) {
    std::string actual = minify::write_dictionary(result.dictionary);
    if (actual != *expected_dic) {
      throw ChecksumMismatch(
          "dictionary file does not match the minified schema set "
          "(expected digest " + sha256_hex(actual) + ", file digest " +
          sha256_hex(*expected_dic) + ")");
    }
  }
  return ManifestBuilder().build(result);
}

std::string write_manifest(const BindingManifest& manifest) {
  json j = json::object();
  j["schema_namespace"] = manifest.schema_namespace;
  j["minified_namespace"] = manifest.minified_namespace;
  j["xml_prefix"] = manifest.xml_prefix;
  j["dictionary_checksum"] = manifest.dictionary_checksum;
  j["globals"] = json::array();
  for (const BoundMember& g : manifest.globals) {
    j["globals"].push_back(member_to_json(g));
  }
  j["types"] = json::array();
  for (const BoundType& t : manifest.types) {
    json jt = json::object();
    jt["readable"] = t.readable;
    jt["wire"] = t.wire;
    jt["path"] = t.path;
    if (t.is_enum) {
      jt["enum"] = json::array();
      for (const auto& [readable, wire] : t.enum_values) {
        jt["enum"].push_back(json::array({readable, wire}));
      }
    } else {
      jt["compositor"] = t.compositor == schema::Compositor::choice
                             ? "choice"
                             : (t.compositor == schema::Compositor::sequence
                                    ? "sequence"
                                    : "none");
      jt["wildcard"] = t.has_wildcard;
      jt["members"] = json::array();
      for (const BoundMember& m : t.members) {
        jt["members"].push_back(member_to_json(m));
      }
    }
    j["types"].push_back(std::move(jt));
  }
  return j.dump(1) + "\n";
}

namespace {

void validate_manifest(const BindingManifest& manifest) {
  for (const BoundType& t : manifest.types) {
    std::set<std::string> readable;
    std::set<std::string> wire;
    for (const BoundMember& m : t.members) {
      if (!readable.insert(m.readable).second ||
          !wire.insert(m.wire).second) {
        throw JsonSyntax("manifest type '" + t.readable +
                         "' has duplicate member names");
      }
    }
    for (std::size_t i = 0; i < t.enum_values.size(); ++i) {
      if (t.enum_values[i].second != std::to_string(i)) {
        throw JsonSyntax("manifest enum '" + t.readable +
                         "' has non-sequential wire values");
      }
    }
  }
}

}  // namespace

BindingManifest parse_manifest(std::string_view bytes) {
  json j;
  try {
    j = json::parse(bytes);
  } catch (const nlohmann::json::exception& e) {
    throw JsonSyntax(e.what());
  }
  try {
    BindingManifest manifest;
    manifest.schema_namespace = j.at("schema_namespace").get<std::string>();
    manifest.minified_namespace =
        j.at("minified_namespace").get<std::string>();
    manifest.xml_prefix = j.at("xml_prefix").get<std::string>();
    manifest.dictionary_checksum =
        j.at("dictionary_checksum").get<std::string>();
    for (const json& g : j.at("globals")) {
      manifest.globals.push_back(member_from_json(g));
    }
    for (const json& jt : j.at("types")) {
      BoundType t;
      t.readable = jt.at("readable").get<std::string>();
      t.wire = jt.at("wire").get<std::string>();
      t.path = jt.at("path").get<std::string>();
      if (jt.contains("enum")) {
        t.is_enum = true;
        for (const json& pair : jt.at("enum")) {
          t.enum_values.emplace_back(pair.at(0).get<std::string>(),
                                     pair.at(1).get<std::string>());
        }
      } else {
        std::string compositor = jt.at("compositor").get<std::string>();
        t.compositor = compositor == "choice"
                           ? schema::Compositor::choice
                           : (compositor == "sequence"
                                  ? schema::Compositor::sequence
                                  : schema::Compositor::none);
        t.has_wildcard = jt.at("wildcard").get<bool>();
        for (const json& m : jt.at("members")) {
          t.members.push_back(member_from_json(m));
        }
      }
      manifest.types.push_back(std::move(t));
    }
    validate_manifest(manifest);
    return manifest;
  } catch (const nlohmann::json::exception& e) {
    throw JsonSyntax(std::string("manifest: ") + e.what());
  }
}

std::string to_identifier(std::string_view readable) {
  std::string out;
  out.reserve(readable.size());
  for (char c : readable) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9');
    out.push_back(ok ? c : '_');
  }
  if (out.empty() || (out[0] >= '0' && out[0] <= '9')) out.insert(0, 1, '_');
  return out;
}

namespace {

std::string expand(const std::string& template_name, const std::string& text,
                   const std::map<std::string, std::string>& values) {
  std::string out;
  std::size_t pos = 0;
  for (;;) {
    std::size_t open = text.find("{{", pos);
    if (open == std::string::npos) {
      out += text.substr(pos);
      return out;
    }
    std::size_t close = text.find("}}", open + 2);
    if (close == std::string::npos) {
      throw TemplateError(template_name, "unterminated '{{'");
    }
    out += text.substr(pos, open - pos);
    std::string key = text.substr(open + 2, close - open - 2);
    auto it = values.find(key);
    if (it == values.end()) {
      throw TemplateError(template_name, "unknown placeholder '" + key + "'");
    }
    out += it->second;
    pos = close + 2;
  }
}

const std::string& require_template(const TemplateSet& set,
                                    const std::string& name) {
  auto it = set.templates.find(name);
  if (it == set.templates.end()) {
    throw TemplateError(name, "missing from template set");
  }
  return it->second;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> emit_source(
    const BindingManifest& manifest, const TemplateSet& templates) {
  const std::string& file_tpl = require_template(templates, "file");
  const std::string& type_tpl = require_template(templates, "type");
  const std::string& member_tpl = require_template(templates, "member");
  const std::string& enum_type_tpl = require_template(templates, "enum_type");
  const std::string& enum_value_tpl =
      require_template(templates, "enum_value");

  auto expand_member = [&](const BoundMember& m) {
    return expand("member", member_tpl,
                  {{"readable", m.readable},
                   {"readable_ident", to_identifier(m.readable)},
                   {"wire", m.wire},
                   {"kind", std::string(member_kind_name(m.kind))},
                   {"type", m.type_ref}});
  };

  std::string globals;
  for (const BoundMember& g : manifest.globals) globals += expand_member(g);

  std::string content;
  for (const BoundType& t : manifest.types) {
    if (t.readable.empty()) continue;  // anonymous
    if (t.is_enum) {
      std::string values;
      std::size_t index = 0;
      for (const auto& [readable, wire] : t.enum_values) {
        values += expand("enum_value", enum_value_tpl,
                         {{"readable", readable},
                          {"readable_ident", to_identifier(readable)},
                          {"wire", wire},
                          {"index", std::to_string(index++)}});
      }
      content += expand("enum_type", enum_type_tpl,
                        {{"readable", t.readable},
                         {"readable_ident", to_identifier(t.readable)},
                         {"wire", t.wire},
                         {"values", values}});
    } else {
      std::string members;
      for (const BoundMember& m : t.members) members += expand_member(m);
      content += expand("type", type_tpl,
                        {{"readable", t.readable},
                         {"readable_ident", to_identifier(t.readable)},
                         {"wire", t.wire},
                         {"members", members}});
    }
  }

  std::string file =
      expand("file", file_tpl,
             {{"namespace", manifest.schema_namespace},
              {"min_namespace", manifest.minified_namespace},
              {"checksum", manifest.dictionary_checksum},
              {"globals", globals},
              {"content", content}});
  return {{templates.output_filename, file}};
}

}  // namespace xsdmin::binding
