#include "dramatis/xml.hpp"

#include <span>

namespace dramatis {

namespace {

std::string format_position(const std::string& message, size_t line, size_t column) {
  return message + " at line " + std::to_string(line) + ", column " + std::to_string(column);
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

bool is_name_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == ':' ||
         static_cast<unsigned char>(c) >= 0x80;
}

bool is_name_char(char c) {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

void append_codepoint(std::string& out, uint32_t cp) {
  if (cp <= 0x7f) {
    out.push_back(static_cast<char>(cp));
  } else if (cp <= 0x7ff) {
    out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else if (cp <= 0xffff) {
    out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else {
    out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  }
}

class Parser {
 public:
  explicit Parser(std::string_view input) : input_(input) {}

  XmlNode parse_document() {
    skip_misc();
    if (eof()) fail("expected a root element");
    XmlNode root = parse_element();
    skip_misc();
    if (!eof()) fail("content after the root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { fail_at(message, pos_); }

  [[noreturn]] void fail_at(const std::string& message, size_t at) const {
    size_t line = 1, column = 1;
    for (size_t i = 0; i < at && i < input_.size(); ++i) {
      if (input_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw XmlParseError(message, line, column);
  }

  bool eof() const { return pos_ >= input_.size(); }
  char peek() const { return input_[pos_]; }
  bool starts_with(std::string_view s) const { return input_.substr(pos_, s.size()) == s; }

  void expect(char c) {
    if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_space() {
    while (!eof() && is_space(peek())) ++pos_;
  }

  // Whitespace, comments, PIs and DOCTYPE between markup at document level.
  void skip_misc() {
    for (;;) {
      skip_space();
      if (starts_with("<?")) {
        skip_until("?>");
      } else if (starts_with("<!--")) {
        skip_comment();
      } else if (starts_with("<!DOCTYPE")) {
        skip_doctype();
      } else {
        return;
      }
    }
  }

  void skip_until(std::string_view terminator) {
    const size_t at = input_.find(terminator, pos_);
    if (at == std::string_view::npos) fail("unterminated '" + std::string(terminator) + "'");
    pos_ = at + terminator.size();
  }

  void skip_comment() {
    pos_ += 4;
    skip_until("-->");
  }

  void skip_doctype() {
    size_t depth = 0;
    while (!eof()) {
      const char c = input_[pos_++];
      if (c == '[') ++depth;
      else if (c == ']' && depth > 0) --depth;
      else if (c == '>' && depth == 0) return;
    }
    fail("unterminated DOCTYPE");
  }

  std::string parse_name() {
    if (eof() || !is_name_start(peek())) fail("expected a name");
    const size_t start = pos_;
    while (!eof() && is_name_char(peek())) ++pos_;
    return std::string(input_.substr(start, pos_ - start));
  }

  std::string decode_entity() {
    const size_t start = pos_;
    ++pos_;  // '&'
    const size_t end = input_.find(';', pos_);
    if (end == std::string_view::npos || end - pos_ > 32) fail_at("unterminated entity", start);
    const std::string_view body = input_.substr(pos_, end - pos_);
    pos_ = end + 1;
    std::string out;
    if (body == "amp") out = "&";
    else if (body == "lt") out = "<";
    else if (body == "gt") out = ">";
    else if (body == "apos") out = "'";
    else if (body == "quot") out = "\"";
    else if (!body.empty() && body[0] == '#') {
      uint32_t cp = 0;
      bool ok = body.size() > 1;
      if (body.size() > 2 && (body[1] == 'x' || body[1] == 'X')) {
        for (size_t i = 2; i < body.size() && ok; ++i) {
          const char c = body[i];
          cp <<= 4;
          if (c >= '0' && c <= '9') cp |= static_cast<uint32_t>(c - '0');
          else if (c >= 'a' && c <= 'f') cp |= static_cast<uint32_t>(c - 'a' + 10);
          else if (c >= 'A' && c <= 'F') cp |= static_cast<uint32_t>(c - 'A' + 10);
          else ok = false;
        }
      } else {
        for (size_t i = 1; i < body.size() && ok; ++i) {
          const char c = body[i];
          if (c < '0' || c > '9') ok = false;
          else cp = cp * 10 + static_cast<uint32_t>(c - '0');
        }
      }
      if (!ok || cp == 0 || cp > 0x10ffff) fail_at("bad character reference", start);
      append_codepoint(out, cp);
    } else {
      fail_at("unknown entity '&" + std::string(body) + ";'", start);
    }
    return out;
  }

  std::string parse_attr_value() {
    if (eof() || (peek() != '"' && peek() != '\'')) fail("expected a quoted attribute value");
    const char quote = peek();
    ++pos_;
    std::string value;
    while (!eof() && peek() != quote) {
      if (peek() == '&') value += decode_entity();
      else if (peek() == '<') fail("'<' in attribute value");
      else value.push_back(input_[pos_++]);
    }
    expect(quote);
    return value;
  }

  XmlNode parse_element() {
    const size_t open_at = pos_;
    expect('<');
    XmlNode node;
    node.kind = XmlNode::Kind::element;
    node.name = parse_name();
    for (;;) {
      skip_space();
      if (eof()) fail("unterminated start tag");
      if (peek() == '/') {
        ++pos_;
        expect('>');
        return node;  // empty element
      }
      if (peek() == '>') {
        ++pos_;
        break;
      }
      std::string attr_name = parse_name();
      skip_space();
      expect('=');
      skip_space();
      node.attrs.emplace_back(std::move(attr_name), parse_attr_value());
    }
    parse_content(node, open_at);
    return node;
  }

  void parse_content(XmlNode& node, size_t open_at) {
    std::string text;
    auto flush_text = [&] {
      if (text.empty()) return;
      XmlNode t;
      t.kind = XmlNode::Kind::text;
      t.text = std::move(text);
      node.children.push_back(std::move(t));
      text.clear();
    };
    for (;;) {
      if (eof()) fail_at("unterminated element <" + node.name + ">", open_at);
      if (peek() == '<') {
        if (starts_with("</")) {
          flush_text();
          pos_ += 2;
          const size_t name_at = pos_;
          const std::string name = parse_name();
          if (name != node.name)
            fail_at("mismatched end tag </" + name + "> for <" + node.name + ">", name_at);
          skip_space();
          expect('>');
          return;
        }
        if (starts_with("<!--")) {
          skip_comment();
        } else if (starts_with("<![CDATA[")) {
          pos_ += 9;
          const size_t end = input_.find("]]>", pos_);
          if (end == std::string_view::npos) fail("unterminated CDATA section");
          text.append(input_.substr(pos_, end - pos_));
          pos_ = end + 3;
        } else if (starts_with("<?")) {
          skip_until("?>");
        } else {
          flush_text();
          node.children.push_back(parse_element());
        }
      } else if (peek() == '&') {
        text += decode_entity();
      } else {
        text.push_back(input_[pos_++]);
      }
    }
  }

  std::string_view input_;
  size_t pos_ = 0;
};

void collect_text_impl(const XmlNode& node, std::span<const std::string_view> excluded,
                       std::string& out) {
  for (const auto& child : node.children) {
    if (child.kind == XmlNode::Kind::text) {
      out += child.text;
      continue;
    }
    const std::string_view local = xml_local_name(child.name);
    bool skip = false;
    for (const auto& name : excluded)
      if (local == name) {
        skip = true;
        break;
      }
    if (!skip) collect_text_impl(child, excluded, out);
  }
}

}  // namespace

XmlParseError::XmlParseError(const std::string& message, size_t line, size_t column)
    : std::runtime_error(format_position(message, line, column)), line_(line), column_(column) {}

std::string_view xml_local_name(std::string_view name) {
  const size_t colon = name.rfind(':');
  return colon == std::string_view::npos ? name : name.substr(colon + 1);
}

const std::string* XmlNode::attr(std::string_view attr_name) const {
  for (const auto& [name, value] : attrs)
    if (name == attr_name) return &value;
  return nullptr;
}

const XmlNode* XmlNode::child(std::string_view local) const {
  for (const auto& c : children)
    if (c.kind == Kind::element && xml_local_name(c.name) == local) return &c;
  return nullptr;
}

std::string XmlNode::collect_text(std::span<const std::string_view> excluded) const {
  std::string out;
  collect_text_impl(*this, excluded, out);
  return out;
}

XmlNode xml_parse(std::string_view input) {
  Parser parser(input);
  return parser.parse_document();
}

}  // namespace dramatis
