#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace trafficforge {

struct Trip {
  std::string id;
  double depart = 0;  // s
  std::string from_edge;
  std::string to_edge;
};

// Trips file: <routes> root with <trip id depart from to/> children sorted
// by depart. Shared by the random generator and the OD expansion.
std::vector<Trip> parse_trips(std::string_view text);
std::vector<Trip> read_trips(const std::string& path);
std::string serialize_trips(const std::vector<Trip>& trips);
void write_trips(const std::vector<Trip>& trips, const std::string& path);

}  // namespace trafficforge
