#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trafficforge/routing.hpp"
#include "trafficforge/taz.hpp"
#include "trafficforge/trip.hpp"

namespace trafficforge {

struct TimeWindow {
  double begin = 0;  // s
  double end = 0;    // s, begin < end
};

// O-format matrix: $OR;D2 header, HOUR.MINUTE window, scale factor, then
// FROM TO NUMVEHICLES cells.
struct ODMatrix {
  TimeWindow window;
  double factor = 1.0;
  std::map<std::pair<std::string, std::string>, double> cells;

  double cell_sum() const;
  double total_vehicles() const { return factor * cell_sum(); }
};

// HOUR.MINUTE text; the digits after the dot are minutes (7.30 -> 27000 s).
double parse_hour_minute(std::string_view text, int line = 0);
std::string format_hour_minute(double seconds);

ODMatrix parse_o_format(std::string_view text);
ODMatrix read_o_format(const std::string& path);
std::string write_o_format(const ODMatrix& matrix);
void write_o_format_file(const ODMatrix& matrix, const std::string& path);

// Expands factor-scaled cells into individual trips; fractional counts are
// resolved by a Bernoulli draw on the fractional part.
std::vector<Trip> od_to_trips(const ODMatrix& matrix, const TazSet& tazs, std::uint64_t seed,
                              const std::string& id_prefix);

// Departure plus terminal edges; all route_to_od needs from a route or trip.
struct Journey {
  double depart = 0;
  std::string first_edge;
  std::string last_edge;
};

struct RouteToOdResult {
  std::vector<ODMatrix> matrices;   // one per sub-window, in order
  std::size_t skipped_no_zone = 0;  // terminal edge outside every zone
  std::size_t skipped_out_of_window = 0;

  double total_mass() const;
};

RouteToOdResult route_to_od(std::span<const Journey> journeys, const TazSet& tazs,
                            TimeWindow window, int interval_count = 1);
RouteToOdResult route_to_od(std::span<const Route> routes, const TazSet& tazs,
                            TimeWindow window, int interval_count = 1);

// Reads both <trip> and <vehicle><route> children of a <routes> file.
std::vector<Journey> parse_journeys(std::string_view text);
std::vector<Journey> read_journeys(const std::string& path);

}  // namespace trafficforge
