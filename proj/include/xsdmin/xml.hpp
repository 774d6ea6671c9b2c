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

#include <string>
#include <string_view>
#include <vector>

namespace xsdmin::xml {

struct Attr {
  std::string name;   // as written, possibly prefixed ("xmlns:idmef" included)
  std::string value;  // entity-decoded, attribute-whitespace normalized
};

/// One node of a parsed XML document. A tagged struct rather than a class
/// hierarchy: trees are small and traversal code stays flat.
struct Node {
  enum class Kind { element, text };

  Kind kind = Kind::element;
  std::string name;            // element only; as written, possibly prefixed
  std::vector<Attr> attrs;     // element only
  std::vector<Node> children;  // element only; elements and text interleaved
  std::string text;            // text only; entity-decoded
  int line = 1;                // source line of the open tag / text start

  bool is_text() const { return kind == Kind::text; }

  static Node make_text(std::string value, int line = 1) {
    Node n;
    n.kind = Kind::text;
    n.text = std::move(value);
    n.line = line;
    return n;
  }
  static Node make_element(std::string name, int line = 1) {
    Node n;
    n.name = std::move(name);
    n.line = line;
    return n;
  }

  const std::string* find_attr(std::string_view attr_name) const;
};

struct Document {
  bool has_declaration = false;
  Node root;
};

/// Parse a well-formed XML document. Comments and processing instructions
/// are dropped; CDATA becomes text; line endings are normalized to LF.
/// Throws MalformedXml.
Document parse(std::string_view bytes);

/// Escape helpers used by every serializer in the project.
std::string escape_text(std::string_view raw);
std::string escape_attr(std::string_view raw);

/// True if every byte is XML whitespace (space, tab, CR, LF).
bool is_whitespace(std::string_view s);

/// True if `s` is a valid XML name (prefix allowed via one ':').
bool is_valid_name(std::string_view s);

struct PrettyOptions {
  int indent = 2;
  bool declaration = true;
};

/// Canonical pretty rendering: 2-space indent, LF line endings, one element
/// per line, text-only elements inlined, trailing newline.
std::string serialize_pretty(const Node& root, const PrettyOptions& opts = {});

/// Whitespace-minified rendering: comments already dropped by parse,
/// whitespace-only text runs removed, empty tags collapsed to <a/>.
/// Keeps the XML declaration only when `declaration` is set.
std::string serialize_compact(const Node& root, bool declaration = false);

/// Minify XML bytes textually: parse then re-serialize compactly, keeping
/// the declaration if the input had one. Semantics-preserving for
/// element content; whitespace-only text is insignificant here.
std::string minify_whitespace(std::string_view bytes);

}  // namespace xsdmin::xml
