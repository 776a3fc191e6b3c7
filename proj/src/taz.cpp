#include "trafficforge/taz.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "trafficforge/error.hpp"
#include "trafficforge/xml.hpp"

namespace trafficforge {

namespace {

bool on_segment(double px, double py, double ax, double ay, double bx, double by) {
  const double cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax);
  const double scale = std::max({1.0, std::abs(ax), std::abs(ay), std::abs(bx), std::abs(by)});
  if (std::abs(cross) > 1e-9 * scale) return false;
  return px >= std::min(ax, bx) - 1e-9 && px <= std::max(ax, bx) + 1e-9 &&
         py >= std::min(ay, by) - 1e-9 && py <= std::max(ay, by) + 1e-9;
}

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) tokens.emplace_back(text.substr(start, i - start));
  }
  return tokens;
}

Rgb parse_color(const std::string& text, int line) {
  const auto first = text.find(',');
  const auto second = text.find(',', first == std::string::npos ? first : first + 1);
  if (first == std::string::npos || second == std::string::npos) {
    fail(ErrorCode::parse_error, "line " + std::to_string(line) + ": color must be 'r,g,b'");
  }
  const auto component = [&](std::string_view part) {
    const double value = xml::parse_number(part, line);
    if (value < 0 || value > 255) {
      fail(ErrorCode::parse_error, "line " + std::to_string(line) + ": color component out of range");
    }
    return static_cast<std::uint8_t>(value);
  };
  return {component(std::string_view(text).substr(0, first)),
          component(std::string_view(text).substr(first + 1, second - first - 1)),
          component(std::string_view(text).substr(second + 1))};
}

std::string color_to_string(Rgb color) {
  return std::to_string(color.r) + "," + std::to_string(color.g) + "," + std::to_string(color.b);
}

}  // namespace

double Polygon::area() const {
  double twice = 0;
  for (std::size_t i = 0, j = vertices.size() - 1; i < vertices.size(); j = i++) {
    twice += vertices[j].first * vertices[i].second - vertices[i].first * vertices[j].second;
  }
  return twice / 2;
}

const TazZone* TazSet::find(std::string_view id) const {
  for (const TazZone& zone : zones) {
    if (zone.id == id) return &zone;
  }
  return nullptr;
}

bool point_in_polygon(double x, double y, const Polygon& polygon) {
  const auto& v = polygon.vertices;
  bool inside = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    const auto [xi, yi] = v[i];
    const auto [xj, yj] = v[j];
    if (on_segment(x, y, xi, yi, xj, yj)) return true;
    if ((yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi) {
      inside = !inside;
    }
  }
  return inside;
}

TazSet edges_in_districts(const RoadNetwork& net, std::span<const Polygon> polygons) {
  for (const Polygon& polygon : polygons) ensure_valid_polygon(polygon);
  TazSet tazs;
  tazs.zones.reserve(polygons.size());
  for (const Polygon& polygon : polygons) {
    tazs.zones.push_back({polygon.id, zone_color(polygon.id), {}});
  }
  for (std::size_t e = 0; e < net.edge_count(); ++e) {
    const auto [mx, my] = net.edge_midpoint(e);
    for (std::size_t p = 0; p < polygons.size(); ++p) {
      if (point_in_polygon(mx, my, polygons[p])) {
        tazs.zones[p].edge_ids.push_back(net.edge_at(e).id);
        break;  // first polygon in file order wins
      }
    }
  }
  return tazs;
}

GridDistricts grid_districts(const RoadNetwork& net, double cell_size) {
  if (!(cell_size > 0)) fail(ErrorCode::invalid_parameter, "cell size must be positive");
  if (net.junction_count() == 0) return {};

  const auto box = net.bounding_box();
  const auto cells_along = [&](double extent) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(extent / cell_size - 1e-9)));
  };
  const std::size_t columns = cells_along(box.max_x - box.min_x);
  const std::size_t rows = cells_along(box.max_y - box.min_y);

  std::vector<Polygon> cells;
  cells.reserve(columns * rows);
  for (std::size_t row = 0; row < rows; ++row) {
    for (std::size_t column = 0; column < columns; ++column) {
      const double x0 = box.min_x + column * cell_size;
      const double y0 = box.min_y + row * cell_size;
      Polygon cell;
      cell.id = "taz_" + std::to_string(column) + "_" + std::to_string(row);
      cell.vertices = {{x0, y0}, {x0 + cell_size, y0}, {x0 + cell_size, y0 + cell_size}, {x0, y0 + cell_size}};
      cells.push_back(std::move(cell));
    }
  }

  TazSet assigned = edges_in_districts(net, cells);
  GridDistricts result;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (assigned.zones[i].edge_ids.empty()) continue;
    result.cells.push_back(std::move(cells[i]));
    result.zones.zones.push_back(std::move(assigned.zones[i]));
  }
  return result;
}

Rgb zone_color(std::string_view zone_id) {
  // FNV-1a; stable across runs so TAZ files are reproducible.
  std::uint32_t hash = 2166136261u;
  for (char c : zone_id) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 16777619u;
  }
  return {static_cast<std::uint8_t>(hash & 0xff), static_cast<std::uint8_t>((hash >> 8) & 0xff),
          static_cast<std::uint8_t>((hash >> 16) & 0xff)};
}

std::vector<Violation> validate_taz(const TazSet& tazs, const RoadNetwork& net) {
  std::vector<Violation> violations;
  std::unordered_set<std::string_view> zone_ids;
  std::unordered_map<std::string_view, std::string_view> edge_owner;
  for (const TazZone& zone : tazs.zones) {
    if (!zone_ids.insert(zone.id).second) {
      violations.push_back({zone.id, "duplicate zone id"});
    }
    for (const std::string& edge_id : zone.edge_ids) {
      if (net.find_edge(edge_id) == nullptr) {
        violations.push_back({zone.id, "unknown edge '" + edge_id + "'"});
      }
      const auto [it, inserted] = edge_owner.emplace(edge_id, zone.id);
      if (!inserted && it->second != zone.id) {
        violations.push_back({zone.id, "edge '" + edge_id + "' already belongs to zone '" +
                                           std::string(it->second) + "'"});
      }
    }
  }
  return violations;
}

void ensure_valid_polygon(const Polygon& polygon) {
  if (polygon.vertices.size() < 3) {
    fail(ErrorCode::validation_error, "polygon '" + polygon.id + "' needs at least 3 vertices");
  }
  if (std::abs(polygon.area()) < 1e-12) {
    fail(ErrorCode::validation_error, "polygon '" + polygon.id + "' has zero area");
  }
}

std::vector<Polygon> parse_polygons(std::string_view text) {
  const xml::Element root = xml::parse(text);
  if (root.name != "polygons") {
    fail(ErrorCode::parse_error, "expected <polygons> root element, found <" + root.name + ">");
  }
  std::vector<Polygon> polygons;
  for (const xml::Element& child : root.children) {
    if (child.name != "poly") continue;
    Polygon polygon;
    polygon.id = child.attribute("id");
    for (const std::string& pair : split_whitespace(child.attribute("shape"))) {
      const auto comma = pair.find(',');
      if (comma == std::string::npos) {
        fail(ErrorCode::parse_error,
             "line " + std::to_string(child.line) + ": shape points must be 'x,y'");
      }
      polygon.vertices.emplace_back(xml::parse_number(std::string_view(pair).substr(0, comma), child.line),
                                    xml::parse_number(std::string_view(pair).substr(comma + 1), child.line));
    }
    ensure_valid_polygon(polygon);
    polygons.push_back(std::move(polygon));
  }
  return polygons;
}

std::vector<Polygon> read_polygons(const std::string& path) {
  return parse_polygons(xml::read_text_file(path));
}

std::string serialize_polygons(std::span<const Polygon> polygons) {
  xml::Element root;
  root.name = "polygons";
  for (const Polygon& polygon : polygons) {
    std::string shape;
    for (const auto& [x, y] : polygon.vertices) {
      if (!shape.empty()) shape.push_back(' ');
      shape += xml::format_fixed(x) + "," + xml::format_fixed(y);
    }
    root.add_child("poly").set("id", polygon.id).set("shape", shape);
  }
  return xml::serialize(root);
}

void write_polygons(std::span<const Polygon> polygons, const std::string& path) {
  xml::write_text_file(path, serialize_polygons(polygons));
}

TazSet parse_taz(std::string_view text) {
  const xml::Element root = xml::parse(text);
  if (root.name != "tazs") {
    fail(ErrorCode::parse_error, "expected <tazs> root element, found <" + root.name + ">");
  }
  TazSet tazs;
  for (const xml::Element& child : root.children) {
    if (child.name != "taz") continue;
    TazZone zone;
    zone.id = child.attribute("id");
    if (const std::string* color = child.find_attribute("color")) {
      zone.color = parse_color(*color, child.line);
    } else {
      zone.color = zone_color(zone.id);
    }
    if (const std::string* edges = child.find_attribute("edges")) {
      zone.edge_ids = split_whitespace(*edges);
    }
    tazs.zones.push_back(std::move(zone));
  }
  return tazs;
}

TazSet read_taz(const std::string& path) {
  return parse_taz(xml::read_text_file(path));
}

std::string serialize_taz(const TazSet& tazs) {
  xml::Element root;
  root.name = "tazs";
  for (const TazZone& zone : tazs.zones) {
    std::string edges;
    for (const std::string& edge_id : zone.edge_ids) {
      if (!edges.empty()) edges.push_back(' ');
      edges += edge_id;
    }
    root.add_child("taz").set("id", zone.id).set("color", color_to_string(zone.color)).set("edges", edges);
  }
  return xml::serialize(root);
}

void write_taz(const TazSet& tazs, const std::string& path) {
  xml::write_text_file(path, serialize_taz(tazs));
}

}  // namespace trafficforge
