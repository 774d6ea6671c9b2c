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
#include <string_view>
#include <utility>
#include <vector>

#include "xsdmin/schema.hpp"

namespace xsdmin::minify {

/// Bijective base-26 lowercase encoding: 0 -> "a", 25 -> "z", 26 -> "aa".
/// Deterministic and injective; there is no zero digit.
std::string short_name(std::size_t index);

/// Suffix appended to a target namespace to form its minified counterpart.
inline constexpr std::string_view kNamespaceSuffix = "-min";

struct DictionaryEntry {
  std::string short_name;     // letter series, or decimal digits for enums
  schema::ComponentPath path; // the component's path in the ORIGINAL schema

  bool operator==(const DictionaryEntry&) const = default;
};

/// The DIC file contents: one entry per renamed component or enumeration
/// value, in assignment order. Short names repeat across different parent
/// paths; within one scope they are unique.
struct NameDictionary {
  std::vector<DictionaryEntry> entries;

  bool operator==(const NameDictionary&) const = default;
};

struct MinificationResult {
  std::vector<schema::SchemaDocument> original_schemas;  // resolve order
  std::vector<schema::SchemaDocument> minified_schemas;  // same order
  NameDictionary dictionary;
  std::map<std::string, std::string> namespace_map;  // original -> minified
};

/// Minify a schema set rooted at `root`. Referenced schemas are minified
/// first; every named component and enumeration value receives exactly one
/// dictionary entry keyed by its original path.
///
/// Name scopes: each complex type runs one counter over its attributes
/// (declaration order), then its text-content slot if any, then its child
/// elements (declaration order). Top-level elements and attributes share a
/// per-namespace counter; type names use a separate per-namespace counter.
/// Enumeration values become "0", "1", ... in declaration order.
MinificationResult minify(const schema::SchemaDocument& root,
                          const schema::Loader& loader);

/// DIC file serialization: one `short,path` line per entry, UTF-8, LF,
/// no header, no quoting. parse_dictionary is the exact inverse.
std::string write_dictionary(const NameDictionary& dict);
NameDictionary parse_dictionary(std::string_view bytes);

/// Minified file name for a schema location: directory stripped,
/// extension replaced with ".min.xsd".
std::string minified_filename(const std::string& location);
std::string dictionary_filename(const std::string& location);

/// Serialize every minified schema as (filename, bytes), compact XSD.
std::vector<std::pair<std::string, std::string>> write_minified_schema(
    const MinificationResult& result);

/// Scope-ordering helper shared with the binding module: the members of
/// `type` in short-name assignment order. Slot index equals the counter
/// value used for that member; the text-content slot (when present)
/// occupies one index and is reported via `text_slot`.
struct ScopeOrder {
  std::vector<const schema::SchemaComponent*> attributes;
  bool has_text_slot = false;
  std::vector<const schema::SchemaComponent*> elements;

  std::size_t text_slot() const { return attributes.size(); }
  std::size_t element_slot(std::size_t i) const {
    return attributes.size() + (has_text_slot ? 1 : 0) + i;
  }
};
ScopeOrder scope_order(const schema::SchemaComponent& type);

}  // namespace xsdmin::minify
