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

#include <doctest.h>

#include "xsdmin/errors.hpp"

using namespace xsdmin;

TEST_CASE("xml parse: elements, attributes, text") {
  xml::Document doc = xml::parse(
      "<?xml version=\"1.0\"?><root a=\"1\" b=\"two\">"
      "<child>hello</child><empty/></root>");
  CHECK(doc.has_declaration);
  CHECK(doc.root.name == "root");
  REQUIRE(doc.root.attrs.size() == 2);
  CHECK(doc.root.attrs[1].value == "two");
  REQUIRE(doc.root.children.size() == 2);
  CHECK(doc.root.children[0].children[0].text == "hello");
  CHECK(doc.root.children[1].children.empty());
}

TEST_CASE("xml parse: entity and character references") {
  xml::Document doc = xml::parse(
      "<a x=\"&lt;&amp;&quot;&#65;\">&gt;&#x2603;</a>");
  CHECK(doc.root.attrs[0].value == "<&\"A");
  CHECK(doc.root.children[0].text == ">\xE2\x98\x83");
}

TEST_CASE("xml parse: comments and CDATA") {
  xml::Document doc = xml::parse("<a><!-- note --><![CDATA[<raw&>]]></a>");
  REQUIRE(doc.root.children.size() == 1);
  CHECK(doc.root.children[0].text == "<raw&>");
}

TEST_CASE("xml parse: attribute whitespace normalization") {
  xml::Document doc = xml::parse("<a x=\"one\ttwo\nthree\"/>");
  CHECK(doc.root.attrs[0].value == "one two three");
}

TEST_CASE("xml parse errors carry line numbers") {
  try {
    xml::parse("<a>\n<b>\n</a>");
    FAIL("expected MalformedXml");
  } catch (const MalformedXml& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(xml::parse("<a x=\"1\" x=\"2\"/>"), MalformedXml);
  CHECK_THROWS_AS(xml::parse("<a>&bogus;</a>"), MalformedXml);
  CHECK_THROWS_AS(xml::parse("<a><b/></a><c/>"), MalformedXml);
  CHECK_THROWS_AS(xml::parse("plain text"), MalformedXml);
}

TEST_CASE("whitespace minification strips indentation") {
  CHECK(xml::minify_whitespace("<a>\n  <b/>\n</a>") == "<a><b/></a>");
}

TEST_CASE("whitespace minification collapses empty tags") {
  CHECK(xml::minify_whitespace("<x><y></y></x>") == "<x><y/></x>");
}

TEST_CASE("whitespace minification drops comments, keeps declaration") {
  CHECK(xml::minify_whitespace(
            "<?xml version=\"1.0\"?>\n<a><!-- gone --><b>t</b></a>") ==
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?><a><b>t</b></a>");
}

TEST_CASE("escaping round-trips control characters") {
  xml::Node root = xml::Node::make_element("a");
  root.attrs.push_back({"k", "tab\there\nand \"quotes\" & <angles>"});
  root.children.push_back(xml::Node::make_text("body <>&\r keep"));
  std::string out = xml::serialize_compact(root);
  xml::Document back = xml::parse(out);
  CHECK(back.root.attrs[0].value == root.attrs[0].value);
  CHECK(back.root.children[0].text == root.children[0].text);
}

TEST_CASE("pretty serialization inlines text-only elements") {
  xml::Node root = xml::Node::make_element("r");
  xml::Node leaf = xml::Node::make_element("leaf");
  leaf.children.push_back(xml::Node::make_text("v"));
  root.children.push_back(std::move(leaf));
  CHECK(xml::serialize_pretty(root) ==
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<r>\n  <leaf>v</leaf>\n</r>\n");
}

TEST_CASE("xml parse: leading byte order mark is tolerated") {
  xml::Document doc = xml::parse("\xEF\xBB\xBF<?xml version=\"1.0\"?><a/>");
  CHECK(doc.root.name == "a");
}

TEST_CASE("name validation") {
  CHECK(xml::is_valid_name("idmef:Heartbeat"));
  CHECK(xml::is_valid_name("create-time"));
  CHECK_FALSE(xml::is_valid_name(""));
  CHECK_FALSE(xml::is_valid_name(":x"));
  CHECK_FALSE(xml::is_valid_name("a:b:c"));
  CHECK_FALSE(xml::is_valid_name("1abc"));
}
