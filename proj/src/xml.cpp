#include "trafficforge/xml.hpp"

#include <cctype>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "trafficforge/error.hpp"

namespace trafficforge::xml {

namespace {

[[noreturn]] void parse_fail(int line, const std::string& message) {
  fail(ErrorCode::parse_error, "line " + std::to_string(line) + ": " + message);
}

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  int line() const { return line_; }

  char take() {
    char c = text_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  bool starts_with(std::string_view prefix) const {
    return text_.substr(pos_, prefix.size()) == prefix;
  }

  void skip(std::size_t n) {
    for (std::size_t i = 0; i < n && !done(); ++i) take();
  }

  void skip_whitespace() {
    while (!done() && std::isspace(static_cast<unsigned char>(peek()))) take();
  }

  // Advances past the first occurrence of the marker.
  void skip_until(std::string_view marker) {
    while (!done() && !starts_with(marker)) take();
    if (done()) parse_fail(line_, "unterminated construct, expected '" + std::string(marker) + "'");
    skip(marker.size());
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
         c == '.' || c == ':';
}

std::string read_name(Cursor& cursor) {
  std::string name;
  while (!cursor.done() && is_name_char(cursor.peek())) name.push_back(cursor.take());
  if (name.empty()) parse_fail(cursor.line(), "expected a name");
  return name;
}

std::string decode_entities(std::string_view raw, int line) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] != '&') {
      out.push_back(raw[i]);
      continue;
    }
    const auto end = raw.find(';', i);
    if (end == std::string_view::npos) parse_fail(line, "unterminated entity");
    const std::string_view entity = raw.substr(i + 1, end - i - 1);
    if (entity == "amp") out.push_back('&');
    else if (entity == "lt") out.push_back('<');
    else if (entity == "gt") out.push_back('>');
    else if (entity == "quot") out.push_back('"');
    else if (entity == "apos") out.push_back('\'');
    else if (!entity.empty() && entity[0] == '#') {
      int code = 0;
      for (char c : entity.substr(1)) {
        if (!std::isdigit(static_cast<unsigned char>(c))) parse_fail(line, "bad character reference");
        code = code * 10 + (c - '0');
      }
      out.push_back(static_cast<char>(code));
    } else {
      parse_fail(line, "unknown entity '&" + std::string(entity) + ";'");
    }
    i = end;
  }
  return out;
}

void skip_misc(Cursor& cursor) {
  for (;;) {
    cursor.skip_whitespace();
    if (cursor.starts_with("<?")) {
      cursor.skip_until("?>");
    } else if (cursor.starts_with("<!--")) {
      cursor.skip_until("-->");
    } else if (cursor.starts_with("<!")) {
      cursor.skip_until(">");
    } else {
      return;
    }
  }
}

Element parse_element(Cursor& cursor) {
  if (cursor.done() || cursor.peek() != '<') parse_fail(cursor.line(), "expected '<'");
  Element element;
  element.line = cursor.line();
  cursor.take();
  element.name = read_name(cursor);

  for (;;) {
    cursor.skip_whitespace();
    if (cursor.done()) parse_fail(cursor.line(), "unterminated element '" + element.name + "'");
    if (cursor.starts_with("/>")) {
      cursor.skip(2);
      return element;
    }
    if (cursor.peek() == '>') {
      cursor.take();
      break;
    }
    std::string key = read_name(cursor);
    cursor.skip_whitespace();
    if (cursor.done() || cursor.peek() != '=') parse_fail(cursor.line(), "expected '=' after attribute '" + key + "'");
    cursor.take();
    cursor.skip_whitespace();
    if (cursor.done() || (cursor.peek() != '"' && cursor.peek() != '\'')) {
      parse_fail(cursor.line(), "expected quoted value for attribute '" + key + "'");
    }
    const char quote = cursor.take();
    std::string raw;
    while (!cursor.done() && cursor.peek() != quote) raw.push_back(cursor.take());
    if (cursor.done()) parse_fail(cursor.line(), "unterminated attribute value");
    cursor.take();
    element.attributes.emplace_back(std::move(key), decode_entities(raw, element.line));
  }

  // Children until the matching close tag.
  for (;;) {
    skip_misc(cursor);
    if (cursor.done()) parse_fail(cursor.line(), "missing close tag for '" + element.name + "'");
    if (cursor.starts_with("</")) {
      cursor.skip(2);
      const std::string closing = read_name(cursor);
      if (closing != element.name) {
        parse_fail(cursor.line(), "close tag '" + closing + "' does not match '" + element.name + "'");
      }
      cursor.skip_whitespace();
      if (cursor.done() || cursor.take() != '>') parse_fail(cursor.line(), "malformed close tag");
      return element;
    }
    if (cursor.peek() == '<') {
      element.children.push_back(parse_element(cursor));
    } else {
      parse_fail(cursor.line(), "unexpected text content inside '" + element.name + "'");
    }
  }
}

void serialize_element(const Element& element, int depth, std::string& out) {
  out.append(static_cast<std::size_t>(depth) * 4, ' ');
  out.push_back('<');
  out.append(element.name);
  for (const auto& [key, value] : element.attributes) {
    out.push_back(' ');
    out.append(key);
    out.append("=\"");
    out.append(escape(value));
    out.push_back('"');
  }
  if (element.children.empty()) {
    out.append("/>\n");
    return;
  }
  out.append(">\n");
  for (const Element& child : element.children) serialize_element(child, depth + 1, out);
  out.append(static_cast<std::size_t>(depth) * 4, ' ');
  out.append("</");
  out.append(element.name);
  out.append(">\n");
}

}  // namespace

const std::string* Element::find_attribute(std::string_view key) const {
  for (const auto& [name_, value] : attributes) {
    if (name_ == key) return &value;
  }
  return nullptr;
}

const std::string& Element::attribute(std::string_view key) const {
  const std::string* value = find_attribute(key);
  if (value == nullptr) {
    parse_fail(line, "element '" + name + "' is missing required attribute '" + std::string(key) + "'");
  }
  return *value;
}

double Element::number_attribute(std::string_view key) const {
  return parse_number(attribute(key), line);
}

long Element::integer_attribute(std::string_view key) const {
  const std::string& text = attribute(key);
  long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    parse_fail(line, "attribute '" + std::string(key) + "' is not an integer: '" + text + "'");
  }
  return value;
}

std::optional<double> Element::optional_number(std::string_view key) const {
  const std::string* value = find_attribute(key);
  if (value == nullptr) return std::nullopt;
  return parse_number(*value, line);
}

Element& Element::set(std::string_view key, std::string_view value) {
  attributes.emplace_back(std::string(key), std::string(value));
  return *this;
}

Element& Element::set(std::string_view key, double value, int decimals) {
  return set(key, format_fixed(value, decimals));
}

Element& Element::set(std::string_view key, long value) {
  return set(key, std::to_string(value));
}

Element& Element::add_child(std::string_view child_name) {
  children.emplace_back();
  children.back().name = child_name;
  return children.back();
}

Element parse(std::string_view text) {
  Cursor cursor(text);
  skip_misc(cursor);
  if (cursor.done()) parse_fail(cursor.line(), "empty document");
  Element root = parse_element(cursor);
  skip_misc(cursor);
  if (!cursor.done()) parse_fail(cursor.line(), "trailing content after root element");
  return root;
}

Element parse_file(const std::string& path) {
  return parse(read_text_file(path));
}

std::string escape(std::string_view value) {
  std::string out;
  out.reserve(value.size());
  for (char c : value) {
    switch (c) {
      case '&': out.append("&amp;"); break;
      case '<': out.append("&lt;"); break;
      case '>': out.append("&gt;"); break;
      case '"': out.append("&quot;"); break;
      case '\'': out.append("&apos;"); break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string serialize(const Element& root) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  serialize_element(root, 0, out);
  return out;
}

void write_file(const Element& root, const std::string& path) {
  write_text_file(path, serialize(root));
}

std::string format_fixed(double value, int decimals) {
  if (!std::isfinite(value)) fail(ErrorCode::value_error, "cannot format non-finite number");
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
  return buffer;
}

double parse_number(std::string_view text, int line) {
  double value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    parse_fail(line, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io_error, "cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) fail(ErrorCode::io_error, "failed writing '" + path + "'");
}

}  // namespace trafficforge::xml
