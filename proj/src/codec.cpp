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

#include "xsdmin/codec.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <functional>
#include <map>
#include <memory>

#include <json.hpp>

#include "xsdmin/errors.hpp"
#include "xsdmin/gzip.hpp"
#include "xsdmin/minify.hpp"
#include "xsdmin/xml.hpp"

namespace xsdmin::codec {

using json = nlohmann::ordered_json;
using binding::MemberKind;
using schema::ComponentKind;
using schema::SchemaComponent;
using schema::SchemaDocument;

namespace {

// Canonical JSON rendering: LF between members, one space of indentation
// per nesting level, no space after ':'. Sizes reported for JSON wire
// forms are byte lengths of exactly this rendering.
void write_json_value(const nlohmann::ordered_json& value, std::string& out,
                      int depth) {
  using json_t = nlohmann::ordered_json;
  std::string pad(static_cast<std::size_t>(depth), ' ');
  std::string inner_pad(static_cast<std::size_t>(depth) + 1, ' ');
  switch (value.type()) {
    case json_t::value_t::object: {
      if (value.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, item] : value.items()) {
        if (!first) out += ",\n";
        first = false;
        out += inner_pad;
        out += json_t(key).dump();
        out += ':';
        write_json_value(item, out, depth + 1);
      }
      out += '\n';
      out += pad;
      out += '}';
      return;
    }
    case json_t::value_t::array: {
      if (value.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& item : value) {
        if (!first) out += ",\n";
        first = false;
        out += inner_pad;
        write_json_value(item, out, depth + 1);
      }
      out += '\n';
      out += pad;
      out += ']';
      return;
    }
    default:
      out += value.dump();
  }
}

std::string canonical_json(const nlohmann::ordered_json& value) {
  std::string out;
  write_json_value(value, out, 0);
  out += '\n';
  return out;
}

}  // namespace

std::string_view encoding_name(Encoding encoding) {
  switch (encoding) {
    case Encoding::xml: return "xml";
    case Encoding::min_xml: return "min_xml";
    case Encoding::json: return "json";
    case Encoding::min_json: return "min_json";
  }
  return "";
}

std::optional<Encoding> encoding_from_name(std::string_view name) {
  if (name == "xml") return Encoding::xml;
  if (name == "min_xml") return Encoding::min_xml;
  if (name == "json") return Encoding::json;
  if (name == "min_json") return Encoding::min_json;
  return std::nullopt;
}

namespace {

constexpr std::string_view kTextMemberName = "value";

struct TypeInfo;

struct MemberInfo {
  MemberKind kind = MemberKind::child_element;
  std::string readable;  // "value" for the text member
  std::string wire;
  const TypeInfo* type = nullptr;  // null for XSD builtins
  bool required = false;
  schema::Occurs occurs;
};

struct TypeInfo {
  enum class Category { complex, enumeration, alias };

  Category category = Category::complex;
  std::string readable;  // empty for anonymous types
  std::string display;   // readable name or path, for diagnostics
  schema::Compositor compositor = schema::Compositor::none;
  bool has_wildcard = false;
  bool has_text = false;
  std::vector<MemberInfo> members;       // scope order
  std::vector<std::string> enum_values;  // wire value == index

  const MemberInfo* find_member(std::string_view name, bool wire) const {
    for (const MemberInfo& m : members) {
      if ((wire ? m.wire : m.readable) == name) return &m;
    }
    return nullptr;
  }

  std::string expected_members(bool wire) const {
    std::string out;
    for (const MemberInfo& m : members) {
      if (!out.empty()) out += ", ";
      out += wire ? m.wire : m.readable;
    }
    return out.empty() ? "(none)" : out;
  }

  bool is_leaf() const { return category != Category::complex; }
};

// Resolved schema structure joined with wire names from the manifest.
class TypeTable {
 public:
  TypeTable(const std::vector<SchemaDocument>& docs,
            const binding::BindingManifest* manifest)
      : docs_(&docs) {
    if (manifest) {
      for (const binding::BoundType& t : manifest->types) {
        bound_by_path_[t.path] = &t;
      }
    }
    for (const SchemaDocument& doc : docs) {
      for (const SchemaComponent& comp : doc.components) {
        if (comp.is_type()) build_type(comp);
      }
    }
    for (const SchemaDocument& doc : docs) {
      for (const SchemaComponent& comp : doc.components) {
        if (comp.kind != ComponentKind::element) continue;
        GlobalInfo info;
        info.readable = comp.name_or_value;
        info.ns = doc.target_namespace;
        info.type = resolve_member_type(comp);
        info.wire = info.readable;
        if (manifest) {
          for (const binding::BoundMember& g : manifest->globals) {
            if (g.readable == comp.name_or_value) info.wire = g.wire;
          }
        }
        globals_.push_back(std::move(info));
      }
    }
  }

  struct GlobalInfo {
    std::string readable;
    std::string wire;
    std::string ns;
    const TypeInfo* type = nullptr;
  };

  const GlobalInfo* find_global(std::string_view name, bool wire) const {
    for (const GlobalInfo& g : globals_) {
      if ((wire ? g.wire : g.readable) == name) return &g;
    }
    return nullptr;
  }

  std::string global_names(bool wire) const {
    std::string out;
    for (const GlobalInfo& g : globals_) {
      if (!out.empty()) out += ", ";
      out += wire ? g.wire : g.readable;
    }
    return out.empty() ? "(none)" : out;
  }

 private:
  const TypeInfo* build_type(const SchemaComponent& comp) {
    std::string path = comp.path.render();
    if (auto it = types_by_path_.find(path); it != types_by_path_.end()) {
      return it->second;
    }
    auto owned = std::make_unique<TypeInfo>();
    TypeInfo* info = owned.get();
    types_by_path_[path] = info;
    storage_.push_back(std::move(owned));

    info->readable = comp.name_or_value;
    info->display = comp.name_or_value.empty() ? path : comp.name_or_value;
    const binding::BoundType* bound = nullptr;
    if (auto it = bound_by_path_.find(path); it != bound_by_path_.end()) {
      bound = it->second;
    }

    if (comp.kind == ComponentKind::simple_type) {
      if (comp.children.empty()) {
        info->category = TypeInfo::Category::alias;
      } else {
        info->category = TypeInfo::Category::enumeration;
        for (const SchemaComponent& ev : comp.children) {
          info->enum_values.push_back(ev.name_or_value);
        }
      }
      return info;
    }

    info->category = TypeInfo::Category::complex;
    info->compositor = comp.compositor;
    info->has_wildcard = comp.has_wildcard;
    info->has_text = comp.has_text;

    minify::ScopeOrder order = minify::scope_order(comp);
    std::size_t slot = 0;
    auto wire_for = [&](std::size_t slot_index, const std::string& readable,
                        MemberKind kind) -> std::string {
      if (bound) {
        for (const binding::BoundMember& m : bound->members) {
          if (m.readable == readable && m.kind == kind) return m.wire;
        }
      }
      return minify::short_name(slot_index);
    };
    for (const SchemaComponent* attr : order.attributes) {
      MemberInfo m;
      m.kind = MemberKind::attribute;
      m.readable = attr->name_or_value;
      m.wire = wire_for(slot++, m.readable, m.kind);
      m.required = attr->required;
      m.occurs = attr->occurs;
      m.type = resolve_member_type(*attr);
      info->members.push_back(std::move(m));
    }
    if (order.has_text_slot) {
      MemberInfo m;
      m.kind = MemberKind::text_content;
      m.readable = std::string(kTextMemberName);
      m.wire = wire_for(slot++, m.readable, m.kind);
      m.occurs = {0, 1, false};
      if (comp.content_base && !comp.content_base->is_xsd_builtin()) {
        m.type = find_named(*comp.content_base);
      }
      info->members.push_back(std::move(m));
    }
    for (const SchemaComponent* elem : order.elements) {
      MemberInfo m;
      m.kind = MemberKind::child_element;
      m.readable = elem->name_or_value;
      m.wire = wire_for(slot++, m.readable, m.kind);
      m.occurs = elem->occurs;
      m.type = resolve_member_type(*elem);
      info->members.push_back(std::move(m));
    }
    return info;
  }

  const TypeInfo* find_named(const schema::QualifiedName& name) {
    const SchemaComponent* comp = schema::find_type(*docs_, name);
    if (!comp) {
      throw SchemaViolation("unresolved type reference '" + name.local +
                            "' in namespace '" + name.ns + "'");
    }
    return build_type(*comp);
  }

  const TypeInfo* resolve_member_type(const SchemaComponent& member) {
    if (member.type_ref) {
      if (member.type_ref->is_xsd_builtin()) return nullptr;
      return find_named(*member.type_ref);
    }
    for (const SchemaComponent& child : member.children) {
      if (child.is_type()) return build_type(child);
    }
    return nullptr;
  }

  std::deque<std::unique_ptr<TypeInfo>> storage_;
  std::map<std::string, const TypeInfo*> types_by_path_;
  std::map<std::string, const binding::BoundType*> bound_by_path_;
  std::vector<GlobalInfo> globals_;
  const std::vector<SchemaDocument>* docs_ = nullptr;
};

std::pair<std::string, std::string> split_prefix(const std::string& name) {
  auto colon = name.find(':');
  if (colon == std::string::npos) return {"", name};
  return {name.substr(0, colon), name.substr(colon + 1)};
}

bool is_xmlns(const std::string& name) {
  return name == "xmlns" || name.starts_with("xmlns:");
}

struct NsScope {
  const NsScope* parent = nullptr;
  std::vector<std::pair<std::string, std::string>> bindings;

  const std::string* resolve(const std::string& prefix) const {
    for (const auto& [p, uri] : bindings) {
      if (p == prefix) return &uri;
    }
    return parent ? parent->resolve(prefix) : nullptr;
  }
};

NsScope scope_for(const NsScope* parent, const xml::Node& node) {
  NsScope scope;
  scope.parent = parent;
  for (const xml::Attr& a : node.attrs) {
    if (a.name == "xmlns") {
      scope.bindings.emplace_back("", a.value);
    } else if (a.name.starts_with("xmlns:")) {
      scope.bindings.emplace_back(a.name.substr(6), a.value);
    }
  }
  return scope;
}

std::string trimmed(std::string_view s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  auto ws = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
  };
  while (begin < end && ws(s[begin])) ++begin;
  while (end > begin && ws(s[end - 1])) --end;
  return std::string(s.substr(begin, end - begin));
}

// Shared instance walk for readable and wire XML decoding.
class XmlInstanceReader {
 public:
  XmlInstanceReader(const TypeTable& table, std::string expected_ns, bool wire)
      : table_(table), expected_ns_(std::move(expected_ns)), wire_(wire) {}

  InstanceTree read(std::string_view bytes) const {
    xml::Document doc = xml::parse(bytes);
    NsScope root_scope = scope_for(nullptr, doc.root);
    std::string local = element_local(doc.root, root_scope);
    const TypeTable::GlobalInfo* global = table_.find_global(local, wire_);
    if (!global) {
      throw SchemaViolation("unknown root element '" + local +
                            "'; expected one of: " +
                            table_.global_names(wire_));
    }
    InstanceTree tree =
        read_element(doc.root, root_scope, global->type, global->readable,
                     global->ns);
    return tree;
  }

 private:
  // Resolves the element name and checks its namespace.
  std::string element_local(const xml::Node& node,
                            const NsScope& scope) const {
    auto [prefix, local] = split_prefix(node.name);
    const std::string* uri = scope.resolve(prefix);
    static const std::string kNoNamespace;
    if (!uri) {
      if (!prefix.empty()) {
        throw SchemaViolation("element '" + node.name +
                              "' uses an undeclared namespace prefix");
      }
      uri = &kNoNamespace;  // unprefixed, no default binding
    }
    if (*uri != expected_ns_) {
      throw SchemaViolation("element '" + node.name + "' is in namespace '" +
                            *uri + "', expected '" + expected_ns_ + "'");
    }
    return local;
  }

  InstanceTree read_element(const xml::Node& node, const NsScope& scope,
                            const TypeInfo* type,
                            const std::string& readable_name,
                            const std::string& tree_ns) const {
    InstanceTree tree;
    tree.element = {tree_ns, readable_name};

    // Split children into text and elements; reject mixing.
    std::string text;
    std::vector<const xml::Node*> elems;
    for (const xml::Node& child : node.children) {
      if (child.is_text()) {
        text += child.text;
      } else {
        elems.push_back(&child);
      }
    }
    std::string value = trimmed(text);
    if (!value.empty() && !elems.empty()) throw MixedContent(node.name);

    if (!type || type->is_leaf()) {
      // Simple content: no attributes, no children.
      for (const xml::Attr& a : node.attrs) {
        if (!is_xmlns(a.name)) {
          throw SchemaViolation("element '" + node.name +
                                "' of simple type does not allow attribute '" +
                                a.name + "'");
        }
      }
      if (!elems.empty()) {
        throw SchemaViolation("element '" + node.name +
                              "' of simple type cannot have children");
      }
      if (!value.empty()) {
        tree.text = decode_enum_text(type, value, node.name);
      }
      return tree;
    }

    read_attributes(node, type, tree);

    if (!value.empty()) {
      if (!type->has_text) {
        throw SchemaViolation("element '" + node.name +
                              "' of type '" + type->display +
                              "' does not allow text content");
      }
      tree.text = value;
    }

    read_children(node, elems, scope, type, tree);
    return tree;
  }

  std::string decode_enum_text(const TypeInfo* type, const std::string& value,
                               const std::string& context) const {
    if (!type || type->category != TypeInfo::Category::enumeration) {
      return value;
    }
    return decode_enum_value(*type, value, context);
  }

  std::string decode_enum_value(const TypeInfo& type, const std::string& value,
                                const std::string& context) const {
    if (wire_) {
      std::size_t index = type.enum_values.size();
      if (!value.empty() && value.size() <= 6 &&
          std::all_of(value.begin(), value.end(),
                      [](char c) { return c >= '0' && c <= '9'; })) {
        index = std::stoul(value);
      }
      if (index >= type.enum_values.size()) {
        throw EnumOutOfRange(value, type.display);
      }
      return type.enum_values[index];
    }
    auto it = std::find(type.enum_values.begin(), type.enum_values.end(),
                        value);
    if (it == type.enum_values.end()) {
      throw SchemaViolation("value '" + value + "' of '" + context +
                            "' is not one of the '" + type.display +
                            "' enumeration");
    }
    return value;
  }

  void read_attributes(const xml::Node& node, const TypeInfo* type,
                       InstanceTree& tree) const {
    struct Seen {
      const MemberInfo* member;
      std::string value;
    };
    std::vector<Seen> seen;
    for (const xml::Attr& a : node.attrs) {
      if (is_xmlns(a.name)) continue;
      if (a.name.find(':') != std::string::npos) {
        throw SchemaViolation("prefixed attribute '" + a.name +
                              "' on element '" + node.name +
                              "' is not supported");
      }
      const MemberInfo* member = type->find_member(a.name, wire_);
      if (!member || member->kind != MemberKind::attribute) {
        throw_unknown(a.name, *type, "attribute on element '" + node.name +
                                         "'");
      }
      std::string value = a.value;
      if (member->type &&
          member->type->category == TypeInfo::Category::enumeration) {
        value = decode_enum_value(*member->type, value, a.name);
      }
      seen.push_back({member, std::move(value)});
    }
    // Canonical attribute order: declaration order.
    for (const MemberInfo& m : type->members) {
      if (m.kind != MemberKind::attribute) continue;
      bool present = false;
      for (Seen& s : seen) {
        if (s.member == &m) {
          tree.attributes.emplace_back(m.readable, std::move(s.value));
          present = true;
        }
      }
      if (!present && m.required) {
        throw SchemaViolation("required attribute '" +
                              (wire_ ? m.wire : m.readable) +
                              "' missing on element '" + node.name + "'");
      }
    }
  }

  void read_children(const xml::Node& node,
                     const std::vector<const xml::Node*>& elems,
                     const NsScope& scope, const TypeInfo* type,
                     InstanceTree& tree) const {
    std::vector<std::size_t> counts(type->members.size(), 0);
    std::size_t last_index = 0;
    std::size_t matched_children = 0;

    for (const xml::Node* child : elems) {
      NsScope child_scope = scope_for(&scope, *child);
      auto [prefix, local] = split_prefix(child->name);
      const std::string* uri = child_scope.resolve(prefix);
      std::string resolved = uri ? *uri : (prefix.empty() ? "" : "\x01");
      bool in_schema_ns = resolved == expected_ns_;

      const MemberInfo* member =
          in_schema_ns ? type->find_member(local, wire_) : nullptr;
      if (member && member->kind != MemberKind::child_element) member = nullptr;

      if (!member) {
        if (!type->has_wildcard) {
          throw_unknown(child->name, *type,
                        "child of element '" + node.name + "'");
        }
        tree.children.push_back(read_passthrough(*child));
        continue;
      }

      std::size_t index = member - type->members.data();
      if (type->compositor == schema::Compositor::sequence) {
        if (matched_children > 0 && index < last_index) {
          throw SchemaViolation("element '" + child->name +
                                "' out of schema order inside '" + node.name +
                                "'");
        }
        last_index = index;
      }
      ++matched_children;
      if (!member->occurs.unbounded &&
          counts[index] + 1 > static_cast<std::size_t>(member->occurs.max)) {
        throw SchemaViolation("element '" + child->name + "' repeats more " +
                              "than maxOccurs allows inside '" + node.name +
                              "'");
      }
      ++counts[index];
      tree.children.push_back(read_element(*child, child_scope, member->type,
                                           member->readable,
                                           tree.element.ns));
    }

    if (type->compositor == schema::Compositor::choice) {
      if (matched_children != 1) {
        throw SchemaViolation("element '" + node.name + "' must contain " +
                              "exactly one of: " +
                              type->expected_members(wire_));
      }
      return;
    }
    for (std::size_t i = 0; i < type->members.size(); ++i) {
      const MemberInfo& m = type->members[i];
      if (m.kind != MemberKind::child_element) continue;
      if (counts[i] < static_cast<std::size_t>(m.occurs.min)) {
        throw SchemaViolation("required element '" +
                              (wire_ ? m.wire : m.readable) +
                              "' missing inside '" + node.name + "'");
      }
    }
  }

  InstanceTree read_passthrough(const xml::Node& node) const {
    InstanceTree tree;
    tree.element = {"", node.name};  // name kept verbatim, prefix included
    for (const xml::Attr& a : node.attrs) {
      tree.attributes.emplace_back(a.name, a.value);
    }
    std::string text;
    for (const xml::Node& child : node.children) {
      if (child.is_text()) {
        text += child.text;
      } else {
        tree.children.push_back(read_passthrough(child));
      }
    }
    std::string value = trimmed(text);
    if (!value.empty()) {
      if (!tree.children.empty()) throw MixedContent(node.name);
      tree.text = value;
    }
    return tree;
  }

  [[noreturn]] void throw_unknown(const std::string& name,
                                  const TypeInfo& type,
                                  const std::string& context) const {
    if (wire_) {
      throw UnknownWireMember(name, type.display);
    }
    throw SchemaViolation("unknown " + context + ": '" + name +
                          "' is not a member of '" + type.display +
                          "'; expected members: " +
                          type.expected_members(false));
  }

  const TypeTable& table_;
  std::string expected_ns_;
  bool wire_;
};

}  // namespace

struct Codec::Impl {
  std::vector<SchemaDocument> docs;
  binding::BindingManifest manifest;
  std::unique_ptr<TypeTable> table;
  std::string prefix;

  const TypeTable::GlobalInfo& global_for(const InstanceTree& tree) const {
    const TypeTable::GlobalInfo* global =
        table->find_global(tree.element.local, /*wire=*/false);
    if (!global) {
      throw SchemaViolation("unknown root element '" + tree.element.local +
                            "'; expected one of: " +
                            table->global_names(false));
    }
    return *global;
  }

  // ---- XML rendering -------------------------------------------------

  xml::Node tree_to_node(const InstanceTree& tree, const TypeInfo* type,
                         bool wire) const {
    xml::Node node = xml::Node::make_element("");
    if (tree.element.ns.empty()) {
      // passthrough subtree: verbatim, wire names do not apply
      node.name = tree.element.local;
      for (const auto& [name, value] : tree.attributes) {
        node.attrs.push_back({name, value});
      }
      if (tree.text) node.children.push_back(xml::Node::make_text(*tree.text));
      for (const InstanceTree& child : tree.children) {
        node.children.push_back(tree_to_node(child, nullptr, wire));
      }
      return node;
    }

    node.name = prefix + ":" + tree.element.local;
    for (const auto& [name, value] : tree.attributes) {
      node.attrs.push_back({name, value});
    }
    if (tree.text) node.children.push_back(xml::Node::make_text(*tree.text));
    for (const InstanceTree& child : tree.children) {
      const TypeInfo* child_type = nullptr;
      if (type && !child.element.ns.empty()) {
        const MemberInfo* m = type->find_member(child.element.local, false);
        if (m) child_type = m->type;
      }
      node.children.push_back(tree_to_node(child, child_type, wire));
    }
    return node;
  }

  xml::Node tree_to_wire_node(const InstanceTree& tree,
                              const TypeInfo* type) const {
    if (tree.element.ns.empty()) {
      return tree_to_node(tree, nullptr, true);  // passthrough
    }
    xml::Node node = xml::Node::make_element("");
    for (const auto& [name, value] : tree.attributes) {
      const MemberInfo* m = type ? type->find_member(name, false) : nullptr;
      std::string wire_name = m ? m->wire : name;
      std::string wire_value = value;
      if (m && m->type &&
          m->type->category == TypeInfo::Category::enumeration) {
        wire_value = std::to_string(enum_index(*m->type, value));
      }
      node.attrs.push_back({wire_name, wire_value});
    }
    if (tree.text) {
      std::string text = *tree.text;
      if (type && type->category == TypeInfo::Category::enumeration) {
        text = std::to_string(enum_index(*type, text));
      }
      node.children.push_back(xml::Node::make_text(text));
    }
    for (const InstanceTree& child : tree.children) {
      const MemberInfo* m =
          (type && !child.element.ns.empty())
              ? type->find_member(child.element.local, false)
              : nullptr;
      xml::Node child_node =
          tree_to_wire_node(child, m ? m->type : nullptr);
      if (child.element.ns.empty()) {
        // passthrough child keeps its verbatim name
      } else {
        child_node.name = prefix + ":" + (m ? m->wire : child.element.local);
      }
      node.children.push_back(std::move(child_node));
    }
    return node;
  }

  static std::size_t enum_index(const TypeInfo& type,
                                const std::string& readable) {
    auto it = std::find(type.enum_values.begin(), type.enum_values.end(),
                        readable);
    if (it == type.enum_values.end()) {
      throw SchemaViolation("value '" + readable + "' is not one of the '" +
                            type.display + "' enumeration");
    }
    return static_cast<std::size_t>(it - type.enum_values.begin());
  }

  // ---- JSON rendering ------------------------------------------------

  json tree_to_json(const InstanceTree& tree, const TypeInfo* type,
                    bool wire) const {
    if (tree.element.ns.empty()) return passthrough_to_json(tree);

    if (!type || type->is_leaf()) {
      std::string text = tree.text.value_or("");
      if (wire && type && type->category == TypeInfo::Category::enumeration &&
          !text.empty()) {
        return json(std::to_string(enum_index(*type, text)));
      }
      return json(text);
    }

    // Text-only complex content renders as a plain string.
    if (type->has_text && tree.attributes.empty() && tree.children.empty()) {
      return json(tree.text.value_or(""));
    }

    json out = json::object();
    for (const auto& [name, value] : tree.attributes) {
      const MemberInfo* m = type->find_member(name, false);
      std::string key = (wire && m) ? m->wire : name;
      std::string rendered = value;
      if (wire && m && m->type &&
          m->type->category == TypeInfo::Category::enumeration) {
        rendered = std::to_string(enum_index(*m->type, value));
      }
      out[key] = rendered;
    }
    if (tree.text) {
      const MemberInfo* m =
          type->find_member(std::string(kTextMemberName), false);
      std::string key =
          (wire && m) ? m->wire : std::string(kTextMemberName);
      out[key] = *tree.text;
    }
    for (const InstanceTree& child : tree.children) {
      if (child.element.ns.empty()) {
        out[child.element.local] = passthrough_to_json(child);
        continue;
      }
      const MemberInfo* m = type->find_member(child.element.local, false);
      assert(m && "tree child missing from type members");
      std::string key = wire ? m->wire : m->readable;
      json value = tree_to_json(child, m->type, wire);
      if (m->occurs.repeated()) {
        if (!out.contains(key)) out[key] = json::array();
        out[key].push_back(std::move(value));
      } else {
        out[key] = std::move(value);
      }
    }
    return out;
  }

  // Passthrough content uses @name for attributes and #text for text so
  // the XML shape survives the trip through JSON.
  json passthrough_to_json(const InstanceTree& tree) const {
    json out = json::object();
    for (const auto& [name, value] : tree.attributes) {
      out["@" + name] = value;
    }
    if (tree.text) out["#text"] = *tree.text;
    for (const InstanceTree& child : tree.children) {
      out[child.element.local] = passthrough_to_json(child);
    }
    return out;
  }

  InstanceTree passthrough_from_json(const std::string& name,
                                     const json& value) const {
    InstanceTree tree;
    tree.element = {"", name};
    if (value.is_string()) {
      std::string text = value.get<std::string>();
      if (!text.empty()) tree.text = text;
      return tree;
    }
    if (!value.is_object()) {
      throw JsonSyntax("passthrough member '" + name +
                       "' must be an object or string");
    }
    for (const auto& [key, item] : value.items()) {
      if (key.starts_with("@")) {
        tree.attributes.emplace_back(key.substr(1), item.get<std::string>());
      } else if (key == "#text") {
        std::string text = item.get<std::string>();
        if (!text.empty()) tree.text = text;
      } else {
        tree.children.push_back(passthrough_from_json(key, item));
      }
    }
    return tree;
  }

  InstanceTree json_to_tree(const json& value, const TypeInfo* type,
                            const std::string& readable_name,
                            const std::string& ns, bool wire) const {
    InstanceTree tree;
    tree.element = {ns, readable_name};

    if (value.is_string()) {
      std::string text = value.get<std::string>();
      if (type && type->category == TypeInfo::Category::enumeration) {
        if (!text.empty()) tree.text = decode_enum(*type, text, wire);
        return tree;
      }
      if (type && !type->is_leaf() && !type->has_text) {
        throw JsonSyntax("member '" + readable_name +
                         "' of type '" + type->display +
                         "' cannot be a plain string");
      }
      if (!text.empty()) tree.text = text;
      return tree;
    }
    if (!value.is_object()) {
      throw JsonSyntax("member '" + readable_name +
                       "' must be an object or string");
    }
    if (!type || type->is_leaf()) {
      throw JsonSyntax("member '" + readable_name +
                       "' of simple type cannot be an object");
    }

    for (const auto& [key, item] : value.items()) {
      const MemberInfo* member = type->find_member(key, wire);
      if (!member) {
        if (type->has_wildcard) {
          tree.children.push_back(passthrough_from_json(key, item));
          continue;
        }
        if (wire) throw UnknownWireMember(key, type->display);
        throw UnknownMember(key, type->display);
      }
      switch (member->kind) {
        case MemberKind::attribute: {
          if (!item.is_string()) {
            throw JsonSyntax("attribute member '" + key +
                             "' must be a string");
          }
          std::string v = item.get<std::string>();
          if (member->type &&
              member->type->category == TypeInfo::Category::enumeration) {
            v = decode_enum(*member->type, v, wire);
          }
          tree.attributes.emplace_back(member->readable, std::move(v));
          break;
        }
        case MemberKind::text_content: {
          if (!item.is_string()) {
            throw JsonSyntax("text member '" + key + "' must be a string");
          }
          std::string v = item.get<std::string>();
          if (!v.empty()) tree.text = std::move(v);
          break;
        }
        case MemberKind::child_element: {
          if (member->occurs.repeated()) {
            if (!item.is_array()) {
              throw JsonSyntax("member '" + key +
                               "' is repeatable and must be an array");
            }
            for (const json& e : item) {
              tree.children.push_back(json_to_tree(e, member->type,
                                                   member->readable, ns,
                                                   wire));
            }
          } else {
            if (item.is_array()) {
              throw JsonSyntax("member '" + key + "' cannot repeat");
            }
            tree.children.push_back(
                json_to_tree(item, member->type, member->readable, ns, wire));
          }
          break;
        }
      }
    }
    return tree;
  }

  std::string decode_enum(const TypeInfo& type, const std::string& value,
                          bool wire) const {
    if (!wire) {
      enum_index(type, value);  // validates
      return value;
    }
    std::size_t index = type.enum_values.size();
    if (!value.empty() && value.size() <= 6 &&
        std::all_of(value.begin(), value.end(),
                    [](char c) { return c >= '0' && c <= '9'; })) {
      index = std::stoul(value);
    }
    if (index >= type.enum_values.size()) {
      throw EnumOutOfRange(value, type.display);
    }
    return type.enum_values[index];
  }

  json parse_json(std::string_view bytes) const {
    try {
      return json::parse(bytes);
    } catch (const nlohmann::json::exception& e) {
      throw JsonSyntax(e.what());
    }
  }

  InstanceTree json_root_to_tree(std::string_view bytes, bool wire) const {
    json doc = parse_json(bytes);
    if (!doc.is_object() || doc.size() != 1) {
      throw JsonSyntax("document must be an object with exactly one root "
                       "member");
    }
    auto it = doc.begin();
    const std::string& key = it.key();
    const TypeTable::GlobalInfo* global = table->find_global(key, wire);
    if (!global) {
      if (wire) throw UnknownWireMember(key, "(document root)");
      throw UnknownMember(key, "(document root)");
    }
    return json_to_tree(it.value(), global->type, global->readable,
                        global->ns, wire);
  }
};

Codec::Codec(std::vector<SchemaDocument> schemas,
             binding::BindingManifest manifest)
    : impl_(std::make_unique<Impl>()) {
  impl_->docs = std::move(schemas);
  impl_->manifest = std::move(manifest);
  impl_->prefix = impl_->manifest.xml_prefix.empty()
                      ? "ns"
                      : impl_->manifest.xml_prefix;
  impl_->table =
      std::make_unique<TypeTable>(impl_->docs, &impl_->manifest);
}

Codec::~Codec() = default;
Codec::Codec(Codec&&) noexcept = default;
Codec& Codec::operator=(Codec&&) noexcept = default;

const binding::BindingManifest& Codec::manifest() const {
  return impl_->manifest;
}

InstanceTree Codec::parse_instance(std::string_view xml_bytes) const {
  XmlInstanceReader reader(*impl_->table, impl_->manifest.schema_namespace,
                           /*wire=*/false);
  return reader.read(xml_bytes);
}

std::string Codec::to_xml(const InstanceTree& tree) const {
  const TypeTable::GlobalInfo& global = impl_->global_for(tree);
  xml::Node node = impl_->tree_to_node(tree, global.type, false);
  // Instance attributes come first, then the namespace declaration.
  node.attrs.push_back({"xmlns:" + impl_->prefix,
                        impl_->manifest.schema_namespace});
  return xml::serialize_pretty(node);
}

std::string Codec::to_min_xml(const InstanceTree& tree) const {
  const TypeTable::GlobalInfo& global = impl_->global_for(tree);
  xml::Node node = impl_->tree_to_wire_node(tree, global.type);
  node.name = impl_->prefix + ":" + global.wire;
  node.attrs.push_back({"xmlns:" + impl_->prefix,
                        impl_->manifest.minified_namespace});
  return xml::serialize_compact(node);
}

InstanceTree Codec::from_min_xml(std::string_view bytes) const {
  XmlInstanceReader reader(*impl_->table,
                           impl_->manifest.minified_namespace,
                           /*wire=*/true);
  return reader.read(bytes);
}

std::string Codec::to_json(const InstanceTree& tree) const {
  const TypeTable::GlobalInfo& global = impl_->global_for(tree);
  json doc = json::object();
  doc[tree.element.local] =
      impl_->tree_to_json(tree, global.type, /*wire=*/false);
  return canonical_json(doc);
}

InstanceTree Codec::from_json(std::string_view bytes) const {
  return impl_->json_root_to_tree(bytes, /*wire=*/false);
}

std::string Codec::to_min_json(const InstanceTree& tree) const {
  const TypeTable::GlobalInfo& global = impl_->global_for(tree);
  json doc = json::object();
  doc[global.wire] = impl_->tree_to_json(tree, global.type, /*wire=*/true);
  return canonical_json(doc);
}

InstanceTree Codec::from_min_json(std::string_view bytes) const {
  return impl_->json_root_to_tree(bytes, /*wire=*/true);
}

std::string Codec::encode(const InstanceTree& tree, Encoding encoding) const {
  switch (encoding) {
    case Encoding::xml: return to_xml(tree);
    case Encoding::min_xml: return to_min_xml(tree);
    case Encoding::json: return to_json(tree);
    case Encoding::min_json: return to_min_json(tree);
  }
  throw Error("unknown encoding");
}

InstanceTree Codec::decode(std::string_view bytes, Encoding encoding) const {
  switch (encoding) {
    case Encoding::xml: return parse_instance(bytes);
    case Encoding::min_xml: return from_min_xml(bytes);
    case Encoding::json: return from_json(bytes);
    case Encoding::min_json: return from_min_json(bytes);
  }
  throw Error("unknown encoding");
}

InstanceTree parse_instance(std::string_view xml_bytes,
                            const std::vector<SchemaDocument>& docs) {
  TypeTable table(docs, nullptr);
  XmlInstanceReader reader(table, docs.back().target_namespace,
                           /*wire=*/false);
  return reader.read(xml_bytes);
}

WireMessage to_wire(const Codec& codec, const InstanceTree& tree,
                    Encoding encoding, Compression compression,
                    int gzip_level) {
  WireMessage message;
  message.encoding = encoding;
  message.compression = compression;
  message.payload = codec.encode(tree, encoding);
  if (compression == Compression::gzip) {
    message.payload = gzip::compress(message.payload, gzip_level);
  }
  return message;
}

InstanceTree from_wire(const Codec& codec, const WireMessage& message) {
  if (message.compression == Compression::gzip) {
    return codec.decode(gzip::decompress(message.payload), message.encoding);
  }
  return codec.decode(message.payload, message.encoding);
}

StructureMetrics analyze_structure(const InstanceTree& tree,
                                   std::string_view serialized) {
  StructureMetrics metrics;
  metrics.byte_size = serialized.size();
  std::function<void(const InstanceTree&, std::size_t)> walk =
      [&](const InstanceTree& node, std::size_t depth) {
        metrics.node_count += 1;
        metrics.attribute_count += node.attributes.size();
        metrics.depth = std::max(metrics.depth, depth);
        for (const InstanceTree& child : node.children) walk(child, depth + 1);
      };
  walk(tree, 1);
  return metrics;
}

std::string to_min_xml_whitespace(std::string_view xml_bytes) {
  return xml::minify_whitespace(xml_bytes);
}

}  // namespace xsdmin::codec
