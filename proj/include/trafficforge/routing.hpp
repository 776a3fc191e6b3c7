#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trafficforge/net.hpp"
#include "trafficforge/trip.hpp"

namespace trafficforge {

// Cost per edge index; all entries finite and nonnegative for search.
struct EdgeCosts {
  std::vector<double> values;

  static EdgeCosts free_flow(const RoadNetwork& net);
  double at(std::size_t edge_index) const { return values[edge_index]; }
};

struct Route {
  std::string trip_id;
  double depart = 0;
  std::vector<std::string> edges;  // nonempty, adjacency chain over the network
};

struct RouteResult {
  bool reachable = false;
  Route route;
  double cost = 0;
};

enum class RoutingAlgorithm { dijkstra, a_star };

// Edge-based shortest path: states are edges, transitions go through the
// shared junction, and both the origin and destination edge costs count.
RouteResult dijkstra(const RoadNetwork& net, std::string_view from_edge,
                     std::string_view to_edge, const EdgeCosts& costs);

// Same contract as dijkstra; admissible (and therefore cost-identical)
// when the costs are travel times.
RouteResult a_star(const RoadNetwork& net, std::string_view from_edge,
                   std::string_view to_edge, const EdgeCosts& costs);

bool is_reachable(const RoadNetwork& net, std::string_view from_edge, std::string_view to_edge);

struct RoutingFailure {
  std::string trip_id;
  std::string message;
};

struct RouteTripsResult {
  std::vector<Route> routes;
  std::vector<RoutingFailure> failures;
};

// One route per routable trip, order preserving. With ignore_errors the
// failures are collected; otherwise the first unroutable trip throws.
RouteTripsResult route_trips(const RoadNetwork& net, std::span<const Trip> trips,
                             const EdgeCosts& costs, bool ignore_errors,
                             RoutingAlgorithm algorithm = RoutingAlgorithm::dijkstra);

std::vector<Violation> validate_routes(std::span<const Route> routes, const RoadNetwork& net);

std::vector<Route> parse_routes(std::string_view text);
std::vector<Route> read_routes(const std::string& path);
std::string serialize_routes(std::span<const Route> routes);
void write_routes(std::span<const Route> routes, const std::string& path);

}  // namespace trafficforge
