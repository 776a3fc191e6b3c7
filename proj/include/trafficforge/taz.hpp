#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trafficforge/net.hpp"

namespace trafficforge {

struct Polygon {
  std::string id;
  std::vector<std::pair<double, double>> vertices;  // >= 3, implicitly closed

  double area() const;  // signed shoelace area
};

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
};

struct TazZone {
  std::string id;
  Rgb color;
  std::vector<std::string> edge_ids;  // network edge order, each edge in at most one zone
};

struct TazSet {
  std::vector<TazZone> zones;

  const TazZone* find(std::string_view id) const;
};

// Even-odd (ray crossing) containment; points on the boundary count as inside.
bool point_in_polygon(double x, double y, const Polygon& polygon);

// Assigns every edge whose midpoint lies in a polygon to the first such
// polygon in input order; one zone per polygon, possibly empty.
TazSet edges_in_districts(const RoadNetwork& net, std::span<const Polygon> polygons);

struct GridDistricts {
  std::vector<Polygon> cells;  // only cells that received at least one edge
  TazSet zones;
};

// Square cells tiling the network bounding box; empty cells are dropped.
GridDistricts grid_districts(const RoadNetwork& net, double cell_size);

// Deterministic color derived from the zone id.
Rgb zone_color(std::string_view zone_id);

std::vector<Violation> validate_taz(const TazSet& tazs, const RoadNetwork& net);
void ensure_valid_polygon(const Polygon& polygon);

std::vector<Polygon> parse_polygons(std::string_view text);
std::vector<Polygon> read_polygons(const std::string& path);
std::string serialize_polygons(std::span<const Polygon> polygons);
void write_polygons(std::span<const Polygon> polygons, const std::string& path);

TazSet parse_taz(std::string_view text);
TazSet read_taz(const std::string& path);
std::string serialize_taz(const TazSet& tazs);
void write_taz(const TazSet& tazs, const std::string& path);

}  // namespace trafficforge
