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

#include <stdexcept>
#include <string>

namespace xsdmin {

/// Base class for every error this library raises on bad input.
/// Internal logic errors use assertions instead.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// XML / schema parsing
class MalformedXml : public Error {
 public:
  MalformedXml(const std::string& msg, int line)
      : Error("malformed XML (line " + std::to_string(line) + "): " + msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class UnsupportedConstruct : public Error {
 public:
  UnsupportedConstruct(const std::string& construct, int line)
      : Error("unsupported schema construct '" + construct + "' (line " +
              std::to_string(line) + ")"),
        construct_(construct),
        line_(line) {}
  const std::string& construct() const { return construct_; }
  int line() const { return line_; }

 private:
  std::string construct_;
  int line_;
};

class DuplicateName : public Error {
 public:
  explicit DuplicateName(const std::string& msg) : Error(msg) {}
};

// Schema reference resolution
class CircularReference : public Error {
 public:
  explicit CircularReference(const std::string& cycle)
      : Error("circular schema reference: " + cycle) {}
};

class LoadFailure : public Error {
 public:
  LoadFailure(const std::string& location, const std::string& cause)
      : Error("failed to load '" + location + "': " + cause) {}
};

class NamespaceMismatch : public Error {
 public:
  explicit NamespaceMismatch(const std::string& msg) : Error(msg) {}
};

// Minification
class InternalCollision : public Error {
 public:
  explicit InternalCollision(const std::string& msg)
      : Error("short-name collision within one scope: " + msg) {}
};

class DicSyntaxError : public Error {
 public:
  DicSyntaxError(const std::string& msg, std::size_t line)
      : Error("dictionary syntax error (line " + std::to_string(line) +
              "): " + msg),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Binding
class ChecksumMismatch : public Error {
 public:
  explicit ChecksumMismatch(const std::string& msg) : Error(msg) {}
};

class TemplateError : public Error {
 public:
  TemplateError(const std::string& template_name, const std::string& msg)
      : Error("template '" + template_name + "': " + msg) {}
};

// Instance codec
class SchemaViolation : public Error {
 public:
  explicit SchemaViolation(const std::string& msg) : Error(msg) {}
};

class MixedContent : public Error {
 public:
  explicit MixedContent(const std::string& element)
      : Error("element '" + element +
              "' mixes text and child elements; mixed content is not "
              "supported") {}
};

class JsonSyntax : public Error {
 public:
  explicit JsonSyntax(const std::string& msg)
      : Error("JSON syntax error: " + msg) {}
};

class UnknownMember : public Error {
 public:
  UnknownMember(const std::string& key, const std::string& type)
      : Error("unknown member '" + key + "' in type '" + type + "'") {}
};

class UnknownWireMember : public Error {
 public:
  UnknownWireMember(const std::string& key, const std::string& type)
      : Error("unknown wire member '" + key + "' in type '" + type + "'") {}
};

class EnumOutOfRange : public Error {
 public:
  EnumOutOfRange(const std::string& value, const std::string& type)
      : Error("enumeration value '" + value + "' out of range for type '" +
              type + "'") {}
};

// Compression
class CorruptStream : public Error {
 public:
  explicit CorruptStream(const std::string& msg)
      : Error("corrupt compressed stream: " + msg) {}
};

// Transport
class ConnectionFailure : public Error {
 public:
  explicit ConnectionFailure(const std::string& msg) : Error(msg) {}
};

}  // namespace xsdmin
