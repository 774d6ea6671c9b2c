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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xsdmin/minify.hpp"
#include "xsdmin/schema.hpp"

namespace xsdmin::binding {

enum class MemberKind { attribute, text_content, child_element };

std::string_view member_kind_name(MemberKind kind);

/// One serializable member of a bound type: the readable accessor name
/// paired with the short name that appears on the wire.
struct BoundMember {
  std::string readable;  // "value" for the text-content member
  std::string wire;
  MemberKind kind = MemberKind::child_element;
  std::string type_ref;  // "xsd:string", a readable type name, or a path
  schema::Occurs occurs;

  bool operator==(const BoundMember&) const = default;
};

struct BoundType {
  std::string readable;  // empty for anonymous inline types
  std::string wire;      // minified type name; never appears on the wire
  std::string path;      // original component path (join key)
  schema::Compositor compositor = schema::Compositor::none;
  bool has_wildcard = false;
  std::vector<BoundMember> members;
  // Enumeration types carry (readable, wire) value pairs; wire values are
  // "0", "1", ... in declaration order with no gaps.
  bool is_enum = false;
  std::vector<std::pair<std::string, std::string>> enum_values;

  bool operator==(const BoundType&) const = default;
};

/// The language-neutral contract generated code is derived from: every
/// dictionary entry appears here exactly once, as a global, a member, a
/// type, or an enumeration value.
struct BindingManifest {
  std::string schema_namespace;
  std::string minified_namespace;
  std::string xml_prefix;
  std::string dictionary_checksum;  // SHA-256 hex of the DIC file bytes
  std::vector<BoundMember> globals;  // top-level elements and attributes
  std::vector<BoundType> types;

  bool operator==(const BindingManifest&) const = default;
};

/// Derive the manifest from a minification result. When `expected_dic`
/// is given, it must be byte-identical to the result's dictionary file;
/// otherwise ChecksumMismatch is thrown.
BindingManifest build_manifest(
    const minify::MinificationResult& result,
    std::optional<std::string_view> expected_dic = std::nullopt);

/// manifest.json serialization: UTF-8, stable key order, 1-space indent.
std::string write_manifest(const BindingManifest& manifest);
BindingManifest parse_manifest(std::string_view bytes);

/// Named text templates with {{placeholder}} substitution. Required names:
/// file, type, member, enum_type, enum_value.
struct TemplateSet {
  std::map<std::string, std::string> templates;
  std::string output_filename = "bindings.hpp";
};

/// Expand the template set over the manifest. Anonymous types are skipped
/// (they have no readable name to generate code for).
std::vector<std::pair<std::string, std::string>> emit_source(
    const BindingManifest& manifest, const TemplateSet& templates);

/// Sanitize a readable name into a source identifier ("os-device" ->
/// "os_device").
std::string to_identifier(std::string_view readable);

}  // namespace xsdmin::binding
