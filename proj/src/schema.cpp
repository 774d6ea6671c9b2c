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

#include "xsdmin/schema.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>

#include "xsdmin/errors.hpp"
#include "xsdmin/xml.hpp"

namespace xsdmin::schema {

namespace {

struct NsEnv {
  const NsEnv* parent = nullptr;
  std::vector<std::pair<std::string, std::string>> bindings;

  const std::string* resolve(const std::string& prefix) const {
    for (const auto& [p, uri] : bindings) {
      if (p == prefix) return &uri;
    }
    return parent ? parent->resolve(prefix) : nullptr;
  }
};

NsEnv extend_env(const NsEnv* parent, const xml::Node& node) {
  NsEnv env;
  env.parent = parent;
  for (const xml::Attr& a : node.attrs) {
    if (a.name == "xmlns") {
      env.bindings.emplace_back("", a.value);
    } else if (a.name.starts_with("xmlns:")) {
      env.bindings.emplace_back(a.name.substr(6), a.value);
    }
  }
  return env;
}

bool is_xmlns(const std::string& attr_name) {
  return attr_name == "xmlns" || attr_name.starts_with("xmlns:");
}

// Splits "xsd:element" into prefix and local part.
std::pair<std::string, std::string> split_prefix(const std::string& name) {
  auto colon = name.find(':');
  if (colon == std::string::npos) return {"", name};
  return {name.substr(0, colon), name.substr(colon + 1)};
}

QualifiedName resolve_qname(const std::string& value, const NsEnv& env,
                            int line) {
  auto [prefix, local] = split_prefix(value);
  if (prefix.empty()) {
    const std::string* uri = env.resolve("");
    return {uri ? *uri : "", local};
  }
  const std::string* uri = env.resolve(prefix);
  if (!uri) {
    throw MalformedXml("unknown namespace prefix '" + prefix + "'", line);
  }
  return {*uri, local};
}

// Target namespaces must at least look like URI references.
void check_uri_reference(const std::string& value, const char* what,
                         int line) {
  for (char c : value) {
    if (c == ' ' || c == '<' || c == '>' || c == '"' ||
        static_cast<unsigned char>(c) < 0x20) {
      throw UnsupportedConstruct(
          std::string(what) + " '" + value + "' is not a URI reference",
          line);
    }
  }
}

// Names and enumeration values feed the dictionary path grammar, which
// reserves these characters.
void check_path_safe(const std::string& value, const char* what, int line) {
  if (value.empty()) {
    throw UnsupportedConstruct(std::string("empty ") + what, line);
  }
  for (char c : value) {
    if (c == ',' || c == '[' || c == ']' || c == '/' ||
        static_cast<unsigned char>(c) < 0x20) {
      throw UnsupportedConstruct(
          std::string(what) + " '" + value + "' contains a reserved character",
          line);
    }
  }
}

class SchemaParser {
 public:
  SchemaDocument parse(std::string_view bytes, const std::string& location) {
    xml::Document xdoc = xml::parse(bytes);
    const xml::Node& root = xdoc.root;
    NsEnv env = extend_env(nullptr, root);

    if (xsd_local(root, env) != "schema") {
      throw UnsupportedConstruct("root element '" + root.name + "'",
                                 root.line);
    }

    doc_.location = location;
    for (const xml::Attr& a : root.attrs) {
      if (is_xmlns(a.name)) continue;
      if (a.name == "targetNamespace") {
        check_uri_reference(a.value, "target namespace", root.line);
        doc_.target_namespace = a.value;
      } else if (a.name == "elementFormDefault") {
        doc_.qualified_elements = (a.value == "qualified");
      } else if (a.name == "attributeFormDefault") {
        if (a.value != "unqualified") {
          throw UnsupportedConstruct("attributeFormDefault=\"" + a.value +
                                         "\"",
                                     root.line);
        }
      } else {
        throw UnsupportedConstruct("attribute '" + a.name + "' on xsd:schema",
                                   root.line);
      }
    }
    doc_.preferred_prefix = "ns";
    for (const auto& [prefix, uri] : env.bindings) {
      if (!prefix.empty() && uri == doc_.target_namespace) {
        doc_.preferred_prefix = prefix;
        break;
      }
    }

    bool seen_component = false;
    for (const xml::Node& child : root.children) {
      if (skippable(child)) continue;
      std::string local = xsd_local(child, env);
      ComponentPath top_path;
      if (local == "import" || local == "include") {
        if (seen_component) {
          throw UnsupportedConstruct(
              "xsd:" + local + " after component declarations", child.line);
        }
        parse_reference(child, local == "import");
        continue;
      }
      seen_component = true;
      if (local == "element") {
        doc_.components.push_back(
            parse_element_decl(child, env, top_path, /*top_level=*/true));
      } else if (local == "attribute") {
        doc_.components.push_back(parse_attribute_decl(child, env, top_path));
      } else if (local == "complexType") {
        doc_.components.push_back(
            parse_complex_type(child, env, top_path, /*top_level=*/true));
      } else if (local == "simpleType") {
        doc_.components.push_back(
            parse_simple_type(child, env, top_path, /*top_level=*/true));
      } else {
        throw UnsupportedConstruct(child.name, child.line);
      }
    }

    check_top_level_duplicates();
    return std::move(doc_);
  }

 private:
  // Local name when the node is in the XSD namespace, "" otherwise.
  std::string xsd_local(const xml::Node& node, const NsEnv& parent_env) const {
    NsEnv env = extend_env(&parent_env, node);
    auto [prefix, local] = split_prefix(node.name);
    const std::string* uri = env.resolve(prefix);
    if (!uri || *uri != kXsdNamespace) return "";
    return local;
  }

  static bool skippable(const xml::Node& node) {
    if (node.is_text()) {
      if (xml::is_whitespace(node.text)) return true;
      throw MalformedXml("unexpected text in schema document", node.line);
    }
    return false;
  }

  bool is_annotation(const xml::Node& node, const NsEnv& env) const {
    return xsd_local(node, env) == "annotation";
  }

  void parse_reference(const xml::Node& node, bool is_import) {
    SchemaReference ref;
    ref.kind = is_import ? SchemaReference::Kind::import
                         : SchemaReference::Kind::include;
    ref.line = node.line;
    for (const xml::Attr& a : node.attrs) {
      if (is_xmlns(a.name)) continue;
      if (a.name == "schemaLocation") {
        ref.schema_location = a.value;
      } else if (a.name == "namespace" && is_import) {
        check_uri_reference(a.value, "import namespace", node.line);
        ref.ns = a.value;
      } else {
        throw UnsupportedConstruct(
            "attribute '" + a.name + "' on xsd:" +
                (is_import ? std::string("import") : std::string("include")),
            node.line);
      }
    }
    if (ref.schema_location.empty()) {
      throw UnsupportedConstruct("schema reference without schemaLocation",
                                 node.line);
    }
    if (is_import) {
      if (ref.ns.empty()) {
        throw UnsupportedConstruct("xsd:import without namespace", node.line);
      }
      if (ref.ns == doc_.target_namespace) {
        throw NamespaceMismatch("import of own target namespace '" + ref.ns +
                                "' in " + doc_.location);
      }
    }
    for (const xml::Node& child : node.children) {
      if (skippable(child)) continue;
      throw UnsupportedConstruct("content inside schema reference",
                                 child.line);
    }
    doc_.references.push_back(std::move(ref));
  }

  static Occurs parse_occurs(const xml::Node& node) {
    Occurs occurs;
    auto parse_bound = [&](const std::string& value, int line) {
      int result = 0;
      if (value.empty() ||
          !std::all_of(value.begin(), value.end(),
                       [](char c) { return c >= '0' && c <= '9'; }) ||
          value.size() > 6) {
        throw UnsupportedConstruct("occurrence bound '" + value + "'", line);
      }
      for (char c : value) result = result * 10 + (c - '0');
      return result;
    };
    if (const std::string* v = node.find_attr("minOccurs")) {
      occurs.min = parse_bound(*v, node.line);
    }
    if (const std::string* v = node.find_attr("maxOccurs")) {
      if (*v == "unbounded") {
        occurs.unbounded = true;
      } else {
        occurs.max = parse_bound(*v, node.line);
      }
    }
    if (!occurs.unbounded && occurs.min > occurs.max) {
      throw UnsupportedConstruct("minOccurs greater than maxOccurs",
                                 node.line);
    }
    return occurs;
  }

  SchemaComponent parse_element_decl(const xml::Node& node,
                                     const NsEnv& parent_env,
                                     const ComponentPath& parent_path,
                                     bool top_level) {
    NsEnv env = extend_env(&parent_env, node);
    SchemaComponent comp;
    comp.kind = ComponentKind::element;

    for (const xml::Attr& a : node.attrs) {
      if (is_xmlns(a.name)) continue;
      if (a.name == "name") {
        check_path_safe(a.value, "element name", node.line);
        comp.name_or_value = a.value;
      } else if (a.name == "type") {
        comp.type_ref = resolve_qname(a.value, env, node.line);
      } else if ((a.name == "minOccurs" || a.name == "maxOccurs") &&
                 !top_level) {
        // handled below
      } else {
        throw UnsupportedConstruct("attribute '" + a.name + "' on xsd:element",
                                   node.line);
      }
    }
    if (comp.name_or_value.empty()) {
      throw UnsupportedConstruct("xsd:element without name (ref is not supported)",
                                 node.line);
    }
    if (!top_level) comp.occurs = parse_occurs(node);
    comp.path =
        parent_path.child(ComponentKind::element, comp.name_or_value);

    for (const xml::Node& child : node.children) {
      if (skippable(child) || is_annotation(child, env)) continue;
      std::string local = xsd_local(child, env);
      if (local == "complexType" && !comp.type_ref && comp.children.empty()) {
        comp.children.push_back(
            parse_complex_type(child, env, comp.path, /*top_level=*/false));
      } else if (local == "simpleType" && !comp.type_ref &&
                 comp.children.empty()) {
        comp.children.push_back(
            parse_simple_type(child, env, comp.path, /*top_level=*/false));
      } else {
        throw UnsupportedConstruct(child.name, child.line);
      }
    }
    if (!comp.type_ref && comp.children.empty()) {
      throw UnsupportedConstruct(
          "element '" + comp.name_or_value + "' without a type", node.line);
    }
    return comp;
  }

  SchemaComponent parse_attribute_decl(const xml::Node& node,
                                       const NsEnv& parent_env,
                                       const ComponentPath& parent_path) {
    NsEnv env = extend_env(&parent_env, node);
    SchemaComponent comp;
    comp.kind = ComponentKind::attribute;
    comp.occurs = {0, 1, false};

    for (const xml::Attr& a : node.attrs) {
      if (is_xmlns(a.name)) continue;
      if (a.name == "name") {
        check_path_safe(a.value, "attribute name", node.line);
        comp.name_or_value = a.value;
      } else if (a.name == "type") {
        comp.type_ref = resolve_qname(a.value, env, node.line);
      } else if (a.name == "use") {
        if (a.value == "required") {
          comp.required = true;
          comp.occurs.min = 1;
        } else if (a.value != "optional") {
          throw UnsupportedConstruct("use=\"" + a.value + "\"", node.line);
        }
      } else {
        throw UnsupportedConstruct(
            "attribute '" + a.name + "' on xsd:attribute", node.line);
      }
    }
    if (comp.name_or_value.empty()) {
      throw UnsupportedConstruct(
          "xsd:attribute without name (ref is not supported)", node.line);
    }
    comp.path =
        parent_path.child(ComponentKind::attribute, comp.name_or_value);

    for (const xml::Node& child : node.children) {
      if (skippable(child) || is_annotation(child, env)) continue;
      std::string local = xsd_local(child, env);
      if (local == "simpleType" && !comp.type_ref && comp.children.empty()) {
        comp.children.push_back(
            parse_simple_type(child, env, comp.path, /*top_level=*/false));
      } else {
        throw UnsupportedConstruct(child.name, child.line);
      }
    }
    if (!comp.type_ref && comp.children.empty()) {
      throw UnsupportedConstruct(
          "attribute '" + comp.name_or_value + "' without a type", node.line);
    }
    return comp;
  }

  SchemaComponent parse_complex_type(const xml::Node& node,
                                     const NsEnv& parent_env,
                                     const ComponentPath& parent_path,
                                     bool top_level) {
    NsEnv env = extend_env(&parent_env, node);
    SchemaComponent comp;
    comp.kind = ComponentKind::complex_type;
    comp.anonymous = !top_level;

    for (const xml::Attr& a : node.attrs) {
      if (is_xmlns(a.name)) continue;
      if (a.name == "name" && top_level) {
        check_path_safe(a.value, "type name", node.line);
        comp.name_or_value = a.value;
      } else if (a.name == "mixed" && a.value == "false") {
        // explicit default
      } else {
        throw UnsupportedConstruct(
            "attribute '" + a.name + "' on xsd:complexType", node.line);
      }
    }
    if (top_level && comp.name_or_value.empty()) {
      throw UnsupportedConstruct("top-level xsd:complexType without name",
                                 node.line);
    }
    comp.path = parent_path.child(ComponentKind::complex_type,
                                  comp.name_or_value);

    std::vector<SchemaComponent> attributes;
    std::vector<SchemaComponent> elements;
    bool seen_compositor = false;
    bool seen_simple_content = false;

    for (const xml::Node& child : node.children) {
      if (skippable(child) || is_annotation(child, env)) continue;
      std::string local = xsd_local(child, env);
      if (local == "sequence" || local == "choice") {
        if (seen_compositor || seen_simple_content) {
          throw UnsupportedConstruct("multiple content models in one type",
                                     child.line);
        }
        seen_compositor = true;
        comp.compositor = (local == "sequence") ? Compositor::sequence
                                                : Compositor::choice;
        parse_compositor(child, env, comp, elements);
      } else if (local == "simpleContent") {
        if (seen_compositor || seen_simple_content || !attributes.empty()) {
          throw UnsupportedConstruct("simpleContent mixed with other content",
                                     child.line);
        }
        seen_simple_content = true;
        parse_simple_content(child, env, comp, attributes);
      } else if (local == "attribute") {
        if (seen_simple_content) {
          throw UnsupportedConstruct(
              "attribute outside simpleContent extension", child.line);
        }
        attributes.push_back(parse_attribute_decl(child, env, comp.path));
      } else {
        throw UnsupportedConstruct(child.name, child.line);
      }
    }

    check_member_duplicates(comp, attributes, elements, node.line);
    comp.children = std::move(attributes);
    for (SchemaComponent& e : elements) comp.children.push_back(std::move(e));
    return comp;
  }

  void parse_compositor(const xml::Node& node, const NsEnv& parent_env,
                        SchemaComponent& type,
                        std::vector<SchemaComponent>& elements) {
    NsEnv env = extend_env(&parent_env, node);
    for (const xml::Attr& a : node.attrs) {
      if (is_xmlns(a.name)) continue;
      throw UnsupportedConstruct(
          "attribute '" + a.name + "' on a compositor", node.line);
    }
    for (const xml::Node& child : node.children) {
      if (skippable(child) || is_annotation(child, env)) continue;
      std::string local = xsd_local(child, env);
      if (local == "element") {
        if (type.has_wildcard) {
          throw UnsupportedConstruct(
              "element after xsd:any (wildcard must come last)", child.line);
        }
        elements.push_back(
            parse_element_decl(child, env, type.path, /*top_level=*/false));
      } else if (local == "any") {
        type.has_wildcard = true;
        for (const xml::Attr& a : child.attrs) {
          if (is_xmlns(a.name)) continue;
          if (a.name != "namespace" && a.name != "processContents" &&
              a.name != "minOccurs" && a.name != "maxOccurs") {
            throw UnsupportedConstruct("attribute '" + a.name + "' on xsd:any",
                                       child.line);
          }
        }
      } else {
        throw UnsupportedConstruct(child.name, child.line);
      }
    }
  }

  void parse_simple_content(const xml::Node& node, const NsEnv& parent_env,
                            SchemaComponent& type,
                            std::vector<SchemaComponent>& attributes) {
    NsEnv env = extend_env(&parent_env, node);
    bool seen_extension = false;
    for (const xml::Node& child : node.children) {
      if (skippable(child) || is_annotation(child, env)) continue;
      if (xsd_local(child, env) != "extension" || seen_extension) {
        throw UnsupportedConstruct(child.name, child.line);
      }
      seen_extension = true;
      NsEnv ext_env = extend_env(&env, child);
      for (const xml::Attr& a : child.attrs) {
        if (is_xmlns(a.name)) continue;
        if (a.name == "base") {
          type.content_base = resolve_qname(a.value, ext_env, child.line);
        } else {
          throw UnsupportedConstruct(
              "attribute '" + a.name + "' on xsd:extension", child.line);
        }
      }
      if (!type.content_base) {
        throw UnsupportedConstruct("xsd:extension without base", child.line);
      }
      type.has_text = true;
      for (const xml::Node& inner : child.children) {
        if (skippable(inner) || is_annotation(inner, ext_env)) continue;
        if (xsd_local(inner, ext_env) == "attribute") {
          attributes.push_back(
              parse_attribute_decl(inner, ext_env, type.path));
        } else {
          throw UnsupportedConstruct(inner.name, inner.line);
        }
      }
    }
    if (!seen_extension) {
      throw UnsupportedConstruct("simpleContent without extension", node.line);
    }
  }

  SchemaComponent parse_simple_type(const xml::Node& node,
                                    const NsEnv& parent_env,
                                    const ComponentPath& parent_path,
                                    bool top_level) {
    NsEnv env = extend_env(&parent_env, node);
    SchemaComponent comp;
    comp.kind = ComponentKind::simple_type;
    comp.anonymous = !top_level;

    for (const xml::Attr& a : node.attrs) {
      if (is_xmlns(a.name)) continue;
      if (a.name == "name" && top_level) {
        check_path_safe(a.value, "type name", node.line);
        comp.name_or_value = a.value;
      } else {
        throw UnsupportedConstruct(
            "attribute '" + a.name + "' on xsd:simpleType", node.line);
      }
    }
    if (top_level && comp.name_or_value.empty()) {
      throw UnsupportedConstruct("top-level xsd:simpleType without name",
                                 node.line);
    }
    comp.path =
        parent_path.child(ComponentKind::simple_type, comp.name_or_value);

    bool seen_restriction = false;
    for (const xml::Node& child : node.children) {
      if (skippable(child) || is_annotation(child, env)) continue;
      if (xsd_local(child, env) != "restriction" || seen_restriction) {
        throw UnsupportedConstruct(child.name, child.line);
      }
      seen_restriction = true;
      NsEnv res_env = extend_env(&env, child);
      for (const xml::Attr& a : child.attrs) {
        if (is_xmlns(a.name)) continue;
        if (a.name == "base") {
          comp.content_base = resolve_qname(a.value, res_env, child.line);
        } else {
          throw UnsupportedConstruct(
              "attribute '" + a.name + "' on xsd:restriction", child.line);
        }
      }
      if (!comp.content_base) {
        throw UnsupportedConstruct("xsd:restriction without base", child.line);
      }
      std::set<std::string> seen_values;
      for (const xml::Node& facet : child.children) {
        if (skippable(facet) || is_annotation(facet, res_env)) continue;
        if (xsd_local(facet, res_env) != "enumeration") {
          throw UnsupportedConstruct(facet.name, facet.line);
        }
        const std::string* value = facet.find_attr("value");
        if (!value) {
          throw UnsupportedConstruct("xsd:enumeration without value",
                                     facet.line);
        }
        check_path_safe(*value, "enumeration value", facet.line);
        if (!seen_values.insert(*value).second) {
          throw DuplicateName("duplicate enumeration value '" + *value +
                              "' in " + comp.path.render());
        }
        if (!facet.children.empty()) {
          for (const xml::Node& fc : facet.children) {
            if (!skippable(fc) && !is_annotation(fc, res_env)) {
              throw UnsupportedConstruct(fc.name, fc.line);
            }
          }
        }
        SchemaComponent ev;
        ev.kind = ComponentKind::enumeration;
        ev.name_or_value = *value;
        ev.path = comp.path.child(ComponentKind::enumeration, *value);
        comp.children.push_back(std::move(ev));
      }
    }
    if (!seen_restriction) {
      throw UnsupportedConstruct("xsd:simpleType without restriction",
                                 node.line);
    }
    return comp;
  }

  void check_member_duplicates(const SchemaComponent& type,
                               const std::vector<SchemaComponent>& attributes,
                               const std::vector<SchemaComponent>& elements,
                               int line) const {
    std::set<std::string> names;
    for (const SchemaComponent& a : attributes) {
      if (!names.insert("@" + a.name_or_value).second) {
        throw DuplicateName("duplicate attribute '" + a.name_or_value +
                            "' in " + type.path.render());
      }
    }
    names.clear();
    for (const SchemaComponent& e : elements) {
      if (!names.insert(e.name_or_value).second) {
        throw DuplicateName("duplicate element '" + e.name_or_value + "' in " +
                            type.path.render());
      }
    }
    (void)line;
  }

  void check_top_level_duplicates() const {
    std::map<std::pair<ComponentKind, std::string>, int> seen;
    for (const SchemaComponent& c : doc_.components) {
      // complex and simple types share one symbol space in XSD
      ComponentKind key_kind = c.is_type() ? ComponentKind::complex_type
                                           : c.kind;
      auto key = std::make_pair(key_kind, c.name_or_value);
      if (++seen[key] > 1) {
        throw DuplicateName("duplicate top-level " +
                            std::string(kind_name(c.kind)) + " '" +
                            c.name_or_value + "' in " + doc_.location);
      }
    }
  }

  SchemaDocument doc_;
};

std::string reference_filename(const std::string& location) {
  auto slash = location.find_last_of('/');
  return slash == std::string::npos ? location : location.substr(slash + 1);
}

}  // namespace

std::string_view kind_name(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::element: return "element";
    case ComponentKind::attribute: return "attribute";
    case ComponentKind::complex_type: return "complexType";
    case ComponentKind::simple_type: return "simpleType";
    case ComponentKind::enumeration: return "enumeration";
  }
  return "";
}

ComponentPath ComponentPath::child(ComponentKind kind, std::string name) const {
  ComponentPath out = *this;
  out.segments.push_back({kind, std::move(name)});
  return out;
}

std::string ComponentPath::render() const {
  std::string out = "xsd:schema";
  for (const PathSegment& seg : segments) {
    out += "/xsd:";
    out += kind_name(seg.kind);
    if (seg.name.empty()) {
      out += "[anon]";
    } else if (seg.kind == ComponentKind::enumeration) {
      out += "[value=" + seg.name + "]";
    } else {
      out += "[name=" + seg.name + "]";
    }
  }
  return out;
}

ComponentPath ComponentPath::parse(std::string_view rendered) {
  auto bad = [&](const std::string& msg) -> DicSyntaxError {
    return DicSyntaxError(msg + " in path '" + std::string(rendered) + "'", 0);
  };
  ComponentPath path;
  std::size_t pos = 0;
  auto next_segment = [&]() -> std::string_view {
    std::size_t slash = rendered.find('/', pos);
    std::string_view seg = (slash == std::string_view::npos)
                               ? rendered.substr(pos)
                               : rendered.substr(pos, slash - pos);
    pos = (slash == std::string_view::npos) ? rendered.size() : slash + 1;
    return seg;
  };
  if (rendered.empty()) throw bad("empty path");
  std::string_view first = next_segment();
  if (first != "xsd:schema") throw bad("path must start with xsd:schema");
  if (rendered.ends_with('/')) throw bad("trailing slash");
  while (pos < rendered.size()) {
    std::string_view seg = next_segment();
    if (!seg.starts_with("xsd:")) throw bad("segment without xsd: prefix");
    seg.remove_prefix(4);
    std::size_t bracket = seg.find('[');
    if (bracket == std::string_view::npos || !seg.ends_with(']')) {
      throw bad("segment without [..] qualifier");
    }
    std::string_view kind_str = seg.substr(0, bracket);
    std::string_view qual = seg.substr(bracket + 1, seg.size() - bracket - 2);
    ComponentKind kind;
    if (kind_str == "element") kind = ComponentKind::element;
    else if (kind_str == "attribute") kind = ComponentKind::attribute;
    else if (kind_str == "complexType") kind = ComponentKind::complex_type;
    else if (kind_str == "simpleType") kind = ComponentKind::simple_type;
    else if (kind_str == "enumeration") kind = ComponentKind::enumeration;
    else throw bad("unknown segment kind '" + std::string(kind_str) + "'");

    PathSegment segment;
    segment.kind = kind;
    if (qual == "anon") {
      if (kind == ComponentKind::enumeration) throw bad("anonymous enumeration");
    } else if (kind == ComponentKind::enumeration) {
      if (!qual.starts_with("value=")) throw bad("enumeration without value=");
      segment.name = std::string(qual.substr(6));
      if (segment.name.empty()) throw bad("empty enumeration value");
    } else {
      if (!qual.starts_with("name=")) throw bad("segment without name=");
      segment.name = std::string(qual.substr(5));
      if (segment.name.empty()) throw bad("empty segment name");
    }
    path.segments.push_back(std::move(segment));
  }
  if (path.segments.empty()) throw bad("path has no component segments");
  return path;
}

const SchemaComponent* SchemaDocument::find_top_level(
    ComponentKind kind, std::string_view name) const {
  for (const SchemaComponent& c : components) {
    if (c.kind == kind && c.name_or_value == name) return &c;
  }
  return nullptr;
}

SchemaDocument parse_schema(std::string_view bytes,
                            const std::string& location) {
  return SchemaParser().parse(bytes, location);
}

std::vector<SchemaDocument> resolve_references(const SchemaDocument& root,
                                               const Loader& loader) {
  std::vector<SchemaDocument> out;
  std::set<std::string> done;
  std::vector<std::string> in_progress;

  // Depth-first, references before referencing document: the pop order of
  // a reference stack.
  std::function<void(const SchemaDocument&)> visit =
      [&](const SchemaDocument& doc) {
        in_progress.push_back(doc.location);
        for (const SchemaReference& ref : doc.references) {
          const std::string& loc = ref.schema_location;
          auto cycle_at = std::find(in_progress.begin(), in_progress.end(), loc);
          if (cycle_at != in_progress.end()) {
            std::string cycle;
            for (auto it = cycle_at; it != in_progress.end(); ++it) {
              cycle += *it + " -> ";
            }
            cycle += loc;
            throw CircularReference(cycle);
          }
          if (done.contains(loc)) continue;
          std::string bytes;
          try {
            bytes = loader(loc);
          } catch (const Error&) {
            throw;
          } catch (const std::exception& e) {
            throw LoadFailure(loc, e.what());
          }
          SchemaDocument child = parse_schema(bytes, loc);
          if (ref.kind == SchemaReference::Kind::include) {
            if (child.target_namespace != doc.target_namespace) {
              throw NamespaceMismatch(
                  "include '" + loc + "' has target namespace '" +
                  child.target_namespace + "', expected '" +
                  doc.target_namespace + "'");
            }
          } else {
            if (child.target_namespace != ref.ns) {
              throw NamespaceMismatch(
                  "import '" + loc + "' declares namespace '" + ref.ns +
                  "' but the document's target namespace is '" +
                  child.target_namespace + "'");
            }
          }
          visit(child);
        }
        in_progress.pop_back();
        if (done.insert(doc.location).second) {
          out.push_back(doc);
        }
      };

  visit(root);
  return out;
}

const SchemaComponent* find_type(const std::vector<SchemaDocument>& docs,
                                 const QualifiedName& name) {
  for (const SchemaDocument& doc : docs) {
    if (doc.target_namespace != name.ns) continue;
    for (const SchemaComponent& c : doc.components) {
      if (c.is_type() && c.name_or_value == name.local) return &c;
    }
  }
  return nullptr;
}

std::string write_schema(const SchemaDocument& doc) {
  using xml::Attr;
  using xml::Node;

  auto type_ref_string = [&](const QualifiedName& q) -> std::string {
    if (q.ns == kXsdNamespace) return "xsd:" + q.local;
    if (q.ns == doc.target_namespace) {
      return doc.preferred_prefix + ":" + q.local;
    }
    // Foreign namespaces get positional prefixes declared below.
    return q.local;  // patched by caller via foreign_prefixes
  };

  // Collect foreign namespaces referenced via imports so their types render
  // with a stable prefix.
  std::vector<std::string> foreign;
  for (const SchemaReference& r : doc.references) {
    if (r.kind == SchemaReference::Kind::import) foreign.push_back(r.ns);
  }
  auto foreign_prefix = [&](const std::string& ns) -> std::string {
    for (std::size_t i = 0; i < foreign.size(); ++i) {
      if (foreign[i] == ns) return "i" + std::to_string(i);
    }
    return "";
  };
  auto render_type_ref = [&](const QualifiedName& q) -> std::string {
    if (q.ns != kXsdNamespace && q.ns != doc.target_namespace &&
        !q.ns.empty()) {
      std::string prefix = foreign_prefix(q.ns);
      if (!prefix.empty()) return prefix + ":" + q.local;
    }
    return type_ref_string(q);
  };

  std::function<Node(const SchemaComponent&)> emit =
      [&](const SchemaComponent& comp) -> Node {
    switch (comp.kind) {
      case ComponentKind::element: {
        Node n = Node::make_element("xsd:element");
        n.attrs.push_back({"name", comp.name_or_value});
        if (comp.type_ref) {
          n.attrs.push_back({"type", render_type_ref(*comp.type_ref)});
        }
        if (comp.occurs.min != 1) {
          n.attrs.push_back({"minOccurs", std::to_string(comp.occurs.min)});
        }
        if (comp.occurs.unbounded) {
          n.attrs.push_back({"maxOccurs", "unbounded"});
        } else if (comp.occurs.max != 1) {
          n.attrs.push_back({"maxOccurs", std::to_string(comp.occurs.max)});
        }
        for (const SchemaComponent& child : comp.children) {
          n.children.push_back(emit(child));
        }
        return n;
      }
      case ComponentKind::attribute: {
        Node n = Node::make_element("xsd:attribute");
        n.attrs.push_back({"name", comp.name_or_value});
        if (comp.type_ref) {
          n.attrs.push_back({"type", render_type_ref(*comp.type_ref)});
        }
        if (comp.required) n.attrs.push_back({"use", "required"});
        for (const SchemaComponent& child : comp.children) {
          n.children.push_back(emit(child));
        }
        return n;
      }
      case ComponentKind::complex_type: {
        Node n = Node::make_element("xsd:complexType");
        if (!comp.anonymous) n.attrs.push_back({"name", comp.name_or_value});
        std::vector<const SchemaComponent*> attrs;
        std::vector<const SchemaComponent*> elems;
        for (const SchemaComponent& child : comp.children) {
          (child.kind == ComponentKind::attribute ? attrs : elems)
              .push_back(&child);
        }
        if (comp.has_text) {
          Node sc = Node::make_element("xsd:simpleContent");
          Node ext = Node::make_element("xsd:extension");
          ext.attrs.push_back(
              {"base", render_type_ref(comp.content_base.value())});
          for (const SchemaComponent* a : attrs) {
            ext.children.push_back(emit(*a));
          }
          sc.children.push_back(std::move(ext));
          n.children.push_back(std::move(sc));
        } else {
          if (comp.compositor != Compositor::none || comp.has_wildcard) {
            Node body = Node::make_element(
                comp.compositor == Compositor::choice ? "xsd:choice"
                                                      : "xsd:sequence");
            for (const SchemaComponent* e : elems) {
              body.children.push_back(emit(*e));
            }
            if (comp.has_wildcard) {
              Node any = Node::make_element("xsd:any");
              any.attrs.push_back({"namespace", "##any"});
              any.attrs.push_back({"processContents", "skip"});
              any.attrs.push_back({"minOccurs", "0"});
              any.attrs.push_back({"maxOccurs", "unbounded"});
              body.children.push_back(std::move(any));
            }
            n.children.push_back(std::move(body));
          }
          for (const SchemaComponent* a : attrs) {
            n.children.push_back(emit(*a));
          }
        }
        return n;
      }
      case ComponentKind::simple_type: {
        Node n = Node::make_element("xsd:simpleType");
        if (!comp.anonymous) n.attrs.push_back({"name", comp.name_or_value});
        Node res = Node::make_element("xsd:restriction");
        res.attrs.push_back(
            {"base", render_type_ref(comp.content_base.value())});
        for (const SchemaComponent& ev : comp.children) {
          Node facet = Node::make_element("xsd:enumeration");
          facet.attrs.push_back({"value", ev.name_or_value});
          res.children.push_back(std::move(facet));
        }
        n.children.push_back(std::move(res));
        return n;
      }
      case ComponentKind::enumeration:
        break;
    }
    assert(false && "enumeration emitted by simple_type");
    return Node::make_element("unreachable");
  };

  Node root = Node::make_element("xsd:schema");
  root.attrs.push_back({"xmlns:xsd", std::string(kXsdNamespace)});
  if (!doc.target_namespace.empty()) {
    root.attrs.push_back({"targetNamespace", doc.target_namespace});
    root.attrs.push_back(
        {"xmlns:" + doc.preferred_prefix, doc.target_namespace});
  }
  for (std::size_t i = 0; i < foreign.size(); ++i) {
    root.attrs.push_back({"xmlns:i" + std::to_string(i), foreign[i]});
  }
  if (doc.qualified_elements) {
    root.attrs.push_back({"elementFormDefault", "qualified"});
  }
  for (const SchemaReference& r : doc.references) {
    Node ref = Node::make_element(r.kind == SchemaReference::Kind::import
                                      ? "xsd:import"
                                      : "xsd:include");
    if (r.kind == SchemaReference::Kind::import) {
      ref.attrs.push_back({"namespace", r.ns});
    }
    ref.attrs.push_back(
        {"schemaLocation", reference_filename(r.schema_location)});
    root.children.push_back(std::move(ref));
  }
  for (const SchemaComponent& c : doc.components) {
    root.children.push_back(emit(c));
  }
  return xml::serialize_compact(root, /*declaration=*/true);
}

}  // namespace xsdmin::schema
