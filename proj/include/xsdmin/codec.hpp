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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xsdmin/binding.hpp"
#include "xsdmin/schema.hpp"

namespace xsdmin::codec {

/// A schema-valid XML instance. Mixed content is not representable:
/// an element carries either text or child elements, never both.
/// Attribute order is canonicalized to schema declaration order at parse
/// time, so round trips through any encoding compare equal.
struct InstanceTree {
  schema::QualifiedName element;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::optional<std::string> text;  // never the empty string
  std::vector<InstanceTree> children;

  bool operator==(const InstanceTree&) const = default;
};

enum class Encoding { xml, min_xml, json, min_json };
enum class Compression { none, gzip };

std::string_view encoding_name(Encoding encoding);
std::optional<Encoding> encoding_from_name(std::string_view name);

struct WireMessage {
  std::string payload;
  Encoding encoding = Encoding::xml;
  Compression compression = Compression::none;
};

class Codec;

/// Produce a ready-to-transmit message; gzip level applies only when
/// compression is requested.
WireMessage to_wire(const Codec& codec, const InstanceTree& tree,
                    Encoding encoding, Compression compression,
                    int gzip_level = 6);

/// Inverse of to_wire. Throws CorruptStream for bad gzip payloads and the
/// usual decode errors for bad content.
InstanceTree from_wire(const Codec& codec, const WireMessage& message);

/// Table-level structure metrics of one message.
struct StructureMetrics {
  std::size_t byte_size = 0;
  std::size_t node_count = 0;
  std::size_t attribute_count = 0;
  std::size_t depth = 0;

  bool operator==(const StructureMetrics&) const = default;
};

/// Count elements, attributes and nesting depth of `tree`; byte_size is
/// the length of `serialized`, the canonical XML rendering of the tree.
StructureMetrics analyze_structure(const InstanceTree& tree,
                                   std::string_view serialized);

/// Strip comments and insignificant whitespace from XML bytes and collapse
/// empty tags (<y></y> becomes <y/>). Re-parsing the output yields the
/// same instance as re-parsing the input.
std::string to_min_xml_whitespace(std::string_view xml_bytes);

/// Validate an XML instance against a schema set without any wire-name
/// information (used for both original and minified schema sets).
InstanceTree parse_instance(std::string_view xml_bytes,
                            const std::vector<schema::SchemaDocument>& docs);

/// Encoder/decoder for the four wire encodings of one schema. Pure and
/// safe to share across threads once constructed.
///
/// Canonical renderings: XML is pretty-printed (2-space indent, LF,
/// attributes in declaration order, `prefix:` qualified names); minified
/// XML is compact with wire names, the minified namespace and no XML
/// declaration; both JSON forms are LF-separated with 1-space indent and
/// keys in document order.
class Codec {
 public:
  Codec(std::vector<schema::SchemaDocument> schemas,
        binding::BindingManifest manifest);
  ~Codec();
  Codec(Codec&&) noexcept;
  Codec& operator=(Codec&&) noexcept;

  const binding::BindingManifest& manifest() const;

  InstanceTree parse_instance(std::string_view xml_bytes) const;

  std::string to_xml(const InstanceTree& tree) const;
  std::string to_min_xml(const InstanceTree& tree) const;
  InstanceTree from_min_xml(std::string_view bytes) const;
  std::string to_json(const InstanceTree& tree) const;
  InstanceTree from_json(std::string_view bytes) const;
  std::string to_min_json(const InstanceTree& tree) const;
  InstanceTree from_min_json(std::string_view bytes) const;

  std::string encode(const InstanceTree& tree, Encoding encoding) const;
  InstanceTree decode(std::string_view bytes, Encoding encoding) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace xsdmin::codec
