#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dramatis {

// Minimal well-formed-XML DOM: elements, attributes, character data,
// comments/PIs/DOCTYPE skipped, CDATA and the standard entities expanded.
// Enough for TEI documents; not a validating parser.
struct XmlNode {
  enum class Kind { element, text };

  Kind kind = Kind::element;
  std::string name;  // element name as written (possibly prefixed)
  std::string text;  // character data for text nodes
  std::vector<std::pair<std::string, std::string>> attrs;
  std::vector<XmlNode> children;

  const std::string* attr(std::string_view attr_name) const;
  // First child element with the given local name (prefix ignored).
  const XmlNode* child(std::string_view local) const;
  // All text beneath this node, in document order, excluding subtrees whose
  // local element name appears in `excluded`.
  std::string collect_text(std::span<const std::string_view> excluded = {}) const;
};

// Local part of a possibly prefixed name ("tei:sp" -> "sp").
std::string_view xml_local_name(std::string_view name);

class XmlParseError : public std::runtime_error {
 public:
  XmlParseError(const std::string& message, size_t line, size_t column);
  size_t line() const { return line_; }
  size_t column() const { return column_; }

 private:
  size_t line_;
  size_t column_;
};

// Parses a document and returns its root element. Throws XmlParseError with
// 1-based line/column on ill-formed input.
XmlNode xml_parse(std::string_view input);

}  // namespace dramatis
