#include "trafficforge/routing.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <queue>

#include "trafficforge/error.hpp"
#include "trafficforge/xml.hpp"

namespace trafficforge {

namespace {

constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();

std::size_t require_edge(const RoadNetwork& net, std::string_view id) {
  const auto index = net.edge_index(id);
  if (!index) fail(ErrorCode::reference_error, "unknown edge '" + std::string(id) + "'");
  return *index;
}

void check_costs(const RoadNetwork& net, const EdgeCosts& costs) {
  if (costs.values.size() != net.edge_count()) {
    fail(ErrorCode::missing_cost, "cost table does not price every edge");
  }
  for (double value : costs.values) {
    if (!(value >= 0) || !std::isfinite(value)) {
      fail(ErrorCode::invalid_parameter, "edge costs must be finite and nonnegative");
    }
  }
}

struct QueueEntry {
  double priority;          // g for dijkstra, g + h for a_star
  std::uint32_t tie_break;  // lexical rank of the edge id
  std::size_t edge;

  bool operator>(const QueueEntry& other) const {
    if (priority != other.priority) return priority > other.priority;
    return tie_break > other.tie_break;
  }
};

RouteResult search(const RoadNetwork& net, std::string_view from_id, std::string_view to_id,
                   const EdgeCosts& costs, bool use_heuristic) {
  const std::size_t source = require_edge(net, from_id);
  const std::size_t target = require_edge(net, to_id);
  check_costs(net, costs);

  // Straight-line time to the target edge's end junction; zero for dijkstra.
  std::vector<double> heuristic;
  if (use_heuristic) {
    const double max_speed = std::max(net.max_speed_limit(), 1e-9);
    const Junction& goal = net.junction_at(net.edge_to_junction(target));
    heuristic.resize(net.edge_count());
    for (std::size_t e = 0; e < net.edge_count(); ++e) {
      const Junction& end = net.junction_at(net.edge_to_junction(e));
      heuristic[e] = std::hypot(end.x - goal.x, end.y - goal.y) / max_speed;
    }
  }
  const auto h = [&](std::size_t e) { return use_heuristic ? heuristic[e] : 0.0; };

  std::vector<double> best(net.edge_count(), std::numeric_limits<double>::infinity());
  std::vector<std::size_t> parent(net.edge_count(), kUnset);
  std::vector<char> settled(net.edge_count(), 0);
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> open;

  best[source] = costs.at(source);
  open.push({best[source] + h(source), net.edge_lexical_rank(source), source});

  while (!open.empty()) {
    const QueueEntry entry = open.top();
    open.pop();
    if (settled[entry.edge]) continue;
    settled[entry.edge] = 1;
    if (entry.edge == target) break;

    const std::size_t junction = net.edge_to_junction(entry.edge);
    for (const std::size_t next : net.out_edges(junction)) {
      if (settled[next]) continue;
      const double candidate = best[entry.edge] + costs.at(next);
      if (candidate < best[next]) {
        best[next] = candidate;
        parent[next] = entry.edge;
        open.push({candidate + h(next), net.edge_lexical_rank(next), next});
      } else if (candidate == best[next] && parent[next] != kUnset &&
                 net.edge_lexical_rank(entry.edge) < net.edge_lexical_rank(parent[next])) {
        parent[next] = entry.edge;  // equal cost: prefer the lexically smaller predecessor
      }
    }
  }

  if (!settled[target]) return {};

  RouteResult result;
  result.reachable = true;
  result.cost = best[target];
  std::vector<std::size_t> chain;
  for (std::size_t e = target;; e = parent[e]) {
    chain.push_back(e);
    if (e == source && (chain.size() > 1 || source == target)) break;
    if (parent[e] == kUnset) break;
  }
  std::reverse(chain.begin(), chain.end());
  result.route.edges.reserve(chain.size());
  for (const std::size_t e : chain) result.route.edges.push_back(net.edge_at(e).id);
  return result;
}

}  // namespace

EdgeCosts EdgeCosts::free_flow(const RoadNetwork& net) {
  EdgeCosts costs;
  costs.values.reserve(net.edge_count());
  for (const Edge& edge : net.edges()) costs.values.push_back(edge.free_flow_time());
  return costs;
}

RouteResult dijkstra(const RoadNetwork& net, std::string_view from_edge,
                     std::string_view to_edge, const EdgeCosts& costs) {
  return search(net, from_edge, to_edge, costs, false);
}

RouteResult a_star(const RoadNetwork& net, std::string_view from_edge,
                   std::string_view to_edge, const EdgeCosts& costs) {
  return search(net, from_edge, to_edge, costs, true);
}

bool is_reachable(const RoadNetwork& net, std::string_view from_edge, std::string_view to_edge) {
  const std::size_t source = require_edge(net, from_edge);
  const std::size_t target = require_edge(net, to_edge);
  if (source == target) return true;
  std::vector<char> seen(net.edge_count(), 0);
  std::vector<std::size_t> stack{source};
  seen[source] = 1;
  while (!stack.empty()) {
    const std::size_t edge = stack.back();
    stack.pop_back();
    for (const std::size_t next : net.out_edges(net.edge_to_junction(edge))) {
      if (seen[next]) continue;
      if (next == target) return true;
      seen[next] = 1;
      stack.push_back(next);
    }
  }
  return false;
}

RouteTripsResult route_trips(const RoadNetwork& net, std::span<const Trip> trips,
                             const EdgeCosts& costs, bool ignore_errors,
                             RoutingAlgorithm algorithm) {
  RouteTripsResult result;
  result.routes.reserve(trips.size());
  for (const Trip& trip : trips) {
    RouteResult found;
    std::string error;
    try {
      found = algorithm == RoutingAlgorithm::a_star
                  ? a_star(net, trip.from_edge, trip.to_edge, costs)
                  : dijkstra(net, trip.from_edge, trip.to_edge, costs);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::reference_error) throw;
      error = e.what();
    }
    if (found.reachable) {
      found.route.trip_id = trip.id;
      found.route.depart = trip.depart;
      result.routes.push_back(std::move(found.route));
      continue;
    }
    if (error.empty()) {
      error = "no route from '" + trip.from_edge + "' to '" + trip.to_edge + "'";
    }
    if (!ignore_errors) {
      fail(ErrorCode::unroutable, "trip '" + trip.id + "': " + error);
    }
    result.failures.push_back({trip.id, std::move(error)});
  }
  return result;
}

std::vector<Violation> validate_routes(std::span<const Route> routes, const RoadNetwork& net) {
  std::vector<Violation> violations;
  for (const Route& route : routes) {
    if (route.edges.empty()) {
      violations.push_back({route.trip_id, "route has no edges"});
      continue;
    }
    std::size_t previous = kUnset;
    for (const std::string& edge_id : route.edges) {
      const auto index = net.edge_index(edge_id);
      if (!index) {
        violations.push_back({route.trip_id, "unknown edge '" + edge_id + "'"});
        previous = kUnset;
        continue;
      }
      if (previous != kUnset && net.edge_to_junction(previous) != net.edge_from_junction(*index)) {
        violations.push_back({route.trip_id, "edges '" + net.edge_at(previous).id + "' and '" +
                                                 edge_id + "' do not share a junction"});
      }
      previous = *index;
    }
  }
  return violations;
}

std::vector<Route> parse_routes(std::string_view text) {
  const xml::Element root = xml::parse(text);
  if (root.name != "routes") {
    fail(ErrorCode::parse_error, "expected <routes> root element, found <" + root.name + ">");
  }
  std::vector<Route> routes;
  for (const xml::Element& child : root.children) {
    if (child.name != "vehicle") continue;
    Route route;
    route.trip_id = child.attribute("id");
    route.depart = child.number_attribute("depart");
    const xml::Element* inner = nullptr;
    for (const xml::Element& grandchild : child.children) {
      if (grandchild.name == "route") inner = &grandchild;
    }
    if (inner == nullptr) {
      fail(ErrorCode::parse_error, "line " + std::to_string(child.line) +
                                       ": vehicle '" + route.trip_id + "' has no <route> child");
    }
    const std::string& edges = inner->attribute("edges");
    std::size_t i = 0;
    while (i < edges.size()) {
      while (i < edges.size() && std::isspace(static_cast<unsigned char>(edges[i]))) ++i;
      const std::size_t start = i;
      while (i < edges.size() && !std::isspace(static_cast<unsigned char>(edges[i]))) ++i;
      if (i > start) route.edges.push_back(edges.substr(start, i - start));
    }
    if (route.edges.empty()) {
      fail(ErrorCode::parse_error,
           "line " + std::to_string(inner->line) + ": route must list at least one edge");
    }
    routes.push_back(std::move(route));
  }
  return routes;
}

std::vector<Route> read_routes(const std::string& path) {
  return parse_routes(xml::read_text_file(path));
}

std::string serialize_routes(std::span<const Route> routes) {
  xml::Element root;
  root.name = "routes";
  for (const Route& route : routes) {
    xml::Element& vehicle = root.add_child("vehicle");
    vehicle.set("id", route.trip_id).set("depart", route.depart);
    std::string edges;
    for (const std::string& edge_id : route.edges) {
      if (!edges.empty()) edges.push_back(' ');
      edges += edge_id;
    }
    vehicle.add_child("route").set("edges", edges);
  }
  return xml::serialize(root);
}

void write_routes(std::span<const Route> routes, const std::string& path) {
  xml::write_text_file(path, serialize_routes(routes));
}

}  // namespace trafficforge
