#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace trafficforge::xml {

// Attribute-only XML subset: elements, attributes, comments and the
// declaration line. Text content other than whitespace is rejected; the
// file formats handled by this project never carry any.
struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Element> children;
  int line = 0;

  const std::string* find_attribute(std::string_view key) const;
  const std::string& attribute(std::string_view key) const;  // throws parse-error when missing
  double number_attribute(std::string_view key) const;
  long integer_attribute(std::string_view key) const;
  std::optional<double> optional_number(std::string_view key) const;

  Element& set(std::string_view key, std::string_view value);
  Element& set(std::string_view key, double value, int decimals = 2);
  Element& set(std::string_view key, long value);
  Element& add_child(std::string_view child_name);
};

Element parse(std::string_view text);
Element parse_file(const std::string& path);

std::string escape(std::string_view value);

// Canonical layout shared by every writer: declaration line, 4-space
// indent, attributes in insertion order, self-closing leaf elements.
std::string serialize(const Element& root);
void write_file(const Element& root, const std::string& path);

// Fixed-point decimal used for all numeric attributes and text formats.
std::string format_fixed(double value, int decimals = 2);

double parse_number(std::string_view text, int line = 0);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace trafficforge::xml
