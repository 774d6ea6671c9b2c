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

#include <compare>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace xsdmin::schema {

inline constexpr std::string_view kXsdNamespace =
    "http://www.w3.org/2001/XMLSchema";

/// A namespace-qualified name. The namespace may be empty (no namespace).
struct QualifiedName {
  std::string ns;
  std::string local;

  auto operator<=>(const QualifiedName&) const = default;

  bool is_xsd_builtin() const { return ns == kXsdNamespace; }
};

enum class ComponentKind {
  element,
  attribute,
  complex_type,
  simple_type,
  enumeration,
};

std::string_view kind_name(ComponentKind kind);

/// Occurrence bounds of a particle. `unbounded` overrides `max`.
struct Occurs {
  int min = 1;
  int max = 1;
  bool unbounded = false;

  bool operator==(const Occurs&) const = default;
  bool repeated() const { return unbounded || max > 1; }
};

/// One segment of a component path: the node kind plus the distinguishing
/// name/value. Anonymous inline types use an empty name and render as
/// `xsd:complexType[anon]`.
struct PathSegment {
  ComponentKind kind;
  std::string name;

  bool operator==(const PathSegment&) const = default;
};

/// Identifies a component within a loaded schema set. Renders as
/// `xsd:schema/xsd:element[name=IDMEF-Message]/...`; enumeration segments
/// render with `value=` instead of `name=`.
struct ComponentPath {
  std::vector<PathSegment> segments;

  bool operator==(const ComponentPath&) const = default;

  ComponentPath child(ComponentKind kind, std::string name) const;
  std::string render() const;

  /// Inverse of render(). Throws DicSyntaxError (with line 0) on grammar
  /// violations; callers substitute the real line number.
  static ComponentPath parse(std::string_view rendered);
};

/// How the child elements of a complex type are composed.
enum class Compositor { none, sequence, choice };

/// A node of the parsed schema: element, attribute, type or enumeration
/// facet. Children of a complex type are its attribute components followed
/// by its child-element components, in declaration order; a simple type's
/// children are its enumeration facets.
struct SchemaComponent {
  ComponentKind kind = ComponentKind::element;
  std::string name_or_value;
  std::optional<QualifiedName> type_ref;  // element/attribute type reference
  std::vector<SchemaComponent> children;
  Occurs occurs;
  ComponentPath path;

  // Structure carried for validation and faithful re-serialization.
  Compositor compositor = Compositor::none;     // complex types
  std::optional<QualifiedName> content_base;    // simpleContent / restriction
  bool has_text = false;      // complex type with simple text content
  bool has_wildcard = false;  // complex type containing xsd:any
  bool anonymous = false;     // inline type (renders with [anon] segment)
  bool required = false;      // attribute use="required"

  bool is_type() const {
    return kind == ComponentKind::complex_type ||
           kind == ComponentKind::simple_type;
  }
};

struct SchemaReference {
  enum class Kind { import, include };
  Kind kind;
  std::string schema_location;
  std::string ns;  // import only
  int line = 0;
};

/// One parsed XSD document. Component order equals source order; that
/// order drives short-name assignment downstream.
struct SchemaDocument {
  std::string target_namespace;
  std::string location;
  std::string preferred_prefix;  // prefix bound to the target namespace
  bool qualified_elements = false;
  std::vector<SchemaReference> references;
  std::vector<SchemaComponent> components;

  const SchemaComponent* find_top_level(ComponentKind kind,
                                        std::string_view name) const;
};

/// Parse one XSD document from UTF-8 bytes.
///
/// Supported subset: element, attribute, complexType (single sequence or
/// choice, optional simpleContent extension for text-carrying types,
/// xsd:any wildcard), simpleType (restriction with enumeration facets),
/// import, include, annotation (ignored), minOccurs/maxOccurs. Anything
/// else raises UnsupportedConstruct with the construct name and line.
SchemaDocument parse_schema(std::string_view bytes,
                            const std::string& location);

/// Fetches referenced schema bytes by location. Tests inject in-memory
/// loaders; the CLI uses a filesystem loader.
using Loader = std::function<std::string(const std::string& location)>;

/// Load the transitive closure of `root`'s references, returned in
/// dependency-first order (referenced documents before referencing ones);
/// the root comes last. Each document appears exactly once.
std::vector<SchemaDocument> resolve_references(const SchemaDocument& root,
                                               const Loader& loader);

/// Serialize a schema document back to XSD text (compact form).
std::string write_schema(const SchemaDocument& doc);

/// Find a type by qualified name across a loaded document set.
const SchemaComponent* find_type(const std::vector<SchemaDocument>& docs,
                                 const QualifiedName& name);

}  // namespace xsdmin::schema
