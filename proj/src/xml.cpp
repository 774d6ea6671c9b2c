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

#include "xsdmin/xml.hpp"

#include <algorithm>
#include <cstdint>

#include "xsdmin/errors.hpp"

namespace xsdmin::xml {

namespace {

bool is_ws_char(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n';
}

bool is_name_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
         c >= 0x80;
}

bool is_name_char(unsigned char c) {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

class Parser {
 public:
  explicit Parser(std::string_view input) : in_(normalize_newlines(input)) {}

  Document run() {
    Document doc;
    if (lookahead("\xEF\xBB\xBF")) pos_ += 3;  // UTF-8 byte order mark
    skip_ws();
    if (lookahead("<?xml")) {
      doc.has_declaration = true;
      skip_until("?>", "XML declaration");
    }
    skip_misc();
    if (pos_ >= in_.size() || in_[pos_] != '<') {
      fail("expected root element");
    }
    doc.root = parse_element();
    skip_misc();
    if (pos_ < in_.size()) fail("content after root element");
    return doc;
  }

 private:
  static std::string normalize_newlines(std::string_view input) {
    std::string out;
    out.reserve(input.size());
    for (std::size_t i = 0; i < input.size(); ++i) {
      if (input[i] == '\r') {
        out.push_back('\n');
        if (i + 1 < input.size() && input[i + 1] == '\n') ++i;
      } else {
        out.push_back(input[i]);
      }
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw MalformedXml(msg, line_);
  }

  char advance() {
    char c = in_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  bool lookahead(std::string_view s) const {
    return in_.compare(pos_, s.size(), s) == 0;
  }

  void expect(char c, const std::string& what) {
    if (pos_ >= in_.size() || in_[pos_] != c) fail("expected " + what);
    advance();
  }

  void skip_ws() {
    while (pos_ < in_.size() && is_ws_char(in_[pos_])) advance();
  }

  void skip_until(std::string_view terminator, const std::string& what) {
    std::size_t found = in_.find(terminator, pos_);
    if (found == std::string::npos) fail("unterminated " + what);
    while (pos_ < found + terminator.size()) advance();
  }

  // Skips comments, PIs and a simple DOCTYPE between elements.
  void skip_misc() {
    for (;;) {
      skip_ws();
      if (lookahead("<!--")) {
        skip_until("-->", "comment");
      } else if (lookahead("<?")) {
        skip_until("?>", "processing instruction");
      } else if (lookahead("<!DOCTYPE")) {
        std::size_t bracket = in_.find('[', pos_);
        std::size_t close = in_.find('>', pos_);
        if (close == std::string::npos) fail("unterminated DOCTYPE");
        if (bracket != std::string::npos && bracket < close) {
          fail("DOCTYPE internal subset is not supported");
        }
        skip_until(">", "DOCTYPE");
      } else {
        return;
      }
    }
  }

  std::string parse_name() {
    if (pos_ >= in_.size() ||
        !(is_name_start(static_cast<unsigned char>(in_[pos_])) ||
          in_[pos_] == ':')) {
      fail("expected a name");
    }
    std::size_t start = pos_;
    while (pos_ < in_.size()) {
      unsigned char c = static_cast<unsigned char>(in_[pos_]);
      if (is_name_char(c) || c == ':') {
        advance();
      } else {
        break;
      }
    }
    return std::string(in_.substr(start, pos_ - start));
  }

  // Decodes one entity or character reference starting at '&'.
  void parse_reference(std::string& out) {
    advance();  // '&'
    std::size_t semi = in_.find(';', pos_);
    if (semi == std::string::npos || semi - pos_ > 10) {
      fail("unterminated entity reference");
    }
    std::string name(in_.substr(pos_, semi - pos_));
    while (pos_ <= semi) advance();
    if (name == "lt") {
      out.push_back('<');
    } else if (name == "gt") {
      out.push_back('>');
    } else if (name == "amp") {
      out.push_back('&');
    } else if (name == "apos") {
      out.push_back('\'');
    } else if (name == "quot") {
      out.push_back('"');
    } else if (!name.empty() && name[0] == '#') {
      std::uint32_t cp = 0;
      bool ok = name.size() > 1;
      if (name.size() > 2 && (name[1] == 'x' || name[1] == 'X')) {
        for (std::size_t i = 2; i < name.size() && ok; ++i) {
          char c = name[i];
          std::uint32_t digit;
          if (c >= '0' && c <= '9') digit = c - '0';
          else if (c >= 'a' && c <= 'f') digit = 10 + (c - 'a');
          else if (c >= 'A' && c <= 'F') digit = 10 + (c - 'A');
          else { ok = false; break; }
          cp = cp * 16 + digit;
        }
      } else {
        for (std::size_t i = 1; i < name.size() && ok; ++i) {
          char c = name[i];
          if (c < '0' || c > '9') { ok = false; break; }
          cp = cp * 10 + static_cast<std::uint32_t>(c - '0');
        }
      }
      if (!ok || cp == 0 || cp > 0x10FFFF) fail("bad character reference");
      append_utf8(out, cp);
    } else {
      fail("unknown entity '&" + name + ";'");
    }
  }

  std::string parse_attr_value() {
    if (pos_ >= in_.size() || (in_[pos_] != '"' && in_[pos_] != '\'')) {
      fail("attribute value must be quoted");
    }
    char quote = advance();
    std::string value;
    for (;;) {
      if (pos_ >= in_.size()) fail("unterminated attribute value");
      char c = in_[pos_];
      if (c == quote) {
        advance();
        return value;
      }
      if (c == '<') fail("'<' in attribute value");
      if (c == '&') {
        parse_reference(value);
      } else if (c == '\t' || c == '\n') {
        // attribute-value normalization
        value.push_back(' ');
        advance();
      } else {
        value.push_back(c);
        advance();
      }
    }
  }

  Node parse_element() {
    int open_line = line_;
    expect('<', "'<'");
    Node node = Node::make_element(parse_name(), open_line);
    if (!is_valid_name(node.name)) fail("invalid element name '" + node.name + "'");

    for (;;) {
      bool had_ws = pos_ < in_.size() && is_ws_char(in_[pos_]);
      skip_ws();
      if (pos_ >= in_.size()) fail("unterminated start tag");
      if (in_[pos_] == '>') {
        advance();
        break;
      }
      if (lookahead("/>")) {
        advance();
        advance();
        return node;  // empty element
      }
      if (!had_ws) fail("expected whitespace before attribute");
      Attr attr;
      attr.name = parse_name();
      if (!is_valid_name(attr.name)) {
        fail("invalid attribute name '" + attr.name + "'");
      }
      skip_ws();
      expect('=', "'=' after attribute name");
      skip_ws();
      attr.value = parse_attr_value();
      for (const Attr& existing : node.attrs) {
        if (existing.name == attr.name) {
          fail("duplicate attribute '" + attr.name + "'");
        }
      }
      node.attrs.push_back(std::move(attr));
    }

    // content
    std::string text;
    int text_line = line_;
    auto flush_text = [&] {
      if (!text.empty()) {
        node.children.push_back(Node::make_text(std::move(text), text_line));
        text.clear();
      }
    };
    for (;;) {
      if (pos_ >= in_.size()) fail("unterminated element '" + node.name + "'");
      char c = in_[pos_];
      if (c == '<') {
        if (lookahead("</")) {
          flush_text();
          advance();
          advance();
          std::string close = parse_name();
          if (close != node.name) {
            fail("mismatched close tag '" + close + "' for '" + node.name +
                 "'");
          }
          skip_ws();
          expect('>', "'>' in close tag");
          return node;
        }
        if (lookahead("<!--")) {
          skip_until("-->", "comment");
          continue;
        }
        if (lookahead("<![CDATA[")) {
          for (int i = 0; i < 9; ++i) advance();
          std::size_t end = in_.find("]]>", pos_);
          if (end == std::string::npos) fail("unterminated CDATA section");
          if (text.empty()) text_line = line_;
          while (pos_ < end) text.push_back(advance());
          advance();
          advance();
          advance();
          continue;
        }
        if (lookahead("<?")) {
          skip_until("?>", "processing instruction");
          continue;
        }
        flush_text();
        node.children.push_back(parse_element());
      } else if (c == '&') {
        if (text.empty()) text_line = line_;
        parse_reference(text);
      } else {
        if (text.empty()) text_line = line_;
        text.push_back(advance());
      }
    }
  }

  std::string in_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

void serialize_node(const Node& node, std::string& out, int depth, int indent,
                    bool compact) {
  if (node.is_text()) {
    out += escape_text(node.text);
    return;
  }
  std::string pad = compact ? "" : std::string(depth * indent, ' ');
  out += pad;
  out += '<';
  out += node.name;
  for (const Attr& a : node.attrs) {
    out += ' ';
    out += a.name;
    out += "=\"";
    out += escape_attr(a.value);
    out += '"';
  }

  std::vector<const Node*> kids;
  for (const Node& k : node.children) {
    if (compact && k.is_text() && is_whitespace(k.text)) continue;
    kids.push_back(&k);
  }

  if (kids.empty()) {
    out += "/>";
    if (!compact) out += '\n';
    return;
  }

  bool text_only =
      std::all_of(kids.begin(), kids.end(),
                  [](const Node* k) { return k->is_text(); });
  out += '>';
  if (compact || text_only) {
    for (const Node* k : kids) {
      if (k->is_text()) {
        out += escape_text(k->text);
      } else {
        serialize_node(*k, out, 0, 0, true);
      }
    }
  } else {
    out += '\n';
    for (const Node* k : kids) {
      if (k->is_text()) {
        // Mixed content: emit the text on its own line, verbatim.
        out += std::string((depth + 1) * indent, ' ');
        out += escape_text(k->text);
        out += '\n';
      } else {
        serialize_node(*k, out, depth + 1, indent, false);
      }
    }
    out += pad;
  }
  out += "</";
  out += node.name;
  out += '>';
  if (!compact) out += '\n';
}

}  // namespace

const std::string* Node::find_attr(std::string_view attr_name) const {
  for (const Attr& a : attrs) {
    if (a.name == attr_name) return &a.value;
  }
  return nullptr;
}

Document parse(std::string_view bytes) { return Parser(bytes).run(); }

std::string escape_text(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '\r': out += "&#13;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string escape_attr(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\t': out += "&#9;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

bool is_whitespace(std::string_view s) {
  return std::all_of(s.begin(), s.end(), is_ws_char);
}

bool is_valid_name(std::string_view s) {
  if (s.empty()) return false;
  std::size_t colon = s.find(':');
  if (colon != std::string_view::npos) {
    if (colon == 0 || colon + 1 >= s.size()) return false;
    if (s.find(':', colon + 1) != std::string_view::npos) return false;
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (c == ':') continue;
    if (i == 0 ? !is_name_start(c) : !is_name_char(c)) return false;
  }
  return true;
}

std::string serialize_pretty(const Node& root, const PrettyOptions& opts) {
  std::string out;
  if (opts.declaration) out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  serialize_node(root, out, 0, opts.indent, false);
  return out;
}

std::string serialize_compact(const Node& root, bool declaration) {
  std::string out;
  if (declaration) out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>";
  serialize_node(root, out, 0, 0, true);
  return out;
}

std::string minify_whitespace(std::string_view bytes) {
  Document doc = parse(bytes);
  return serialize_compact(doc.root, doc.has_declaration);
}

}  // namespace xsdmin::xml
