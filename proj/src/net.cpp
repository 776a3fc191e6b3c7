#include "trafficforge/net.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <unordered_set>

#include "trafficforge/error.hpp"
#include "trafficforge/xml.hpp"

namespace trafficforge {

namespace {

constexpr std::size_t kNoJunction = std::numeric_limits<std::size_t>::max();

double distance(const Junction& a, const Junction& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// Spreadsheet-style column label: A..Z, AA..AZ, ...
std::string column_label(int column) {
  std::string label;
  int value = column;
  do {
    label.insert(label.begin(), static_cast<char>('A' + value % 26));
    value = value / 26 - 1;
  } while (value >= 0);
  return label;
}

struct NetworkBuilder {
  std::vector<Junction> junctions;
  std::vector<Edge> edges;
  JunctionControl control = JunctionControl::priority;

  void add_junction(std::string id, double x, double y) {
    junctions.push_back({std::move(id), x, y, control});
  }

  void add_edge_pair(const Junction& a, const Junction& b, double length) {
    edges.push_back({a.id + "_" + b.id, a.id, b.id, length, kDefaultLaneCount, kDefaultSpeedLimit});
    edges.push_back({b.id + "_" + a.id, b.id, a.id, length, kDefaultLaneCount, kDefaultSpeedLimit});
  }

  RoadNetwork build() { return RoadNetwork(std::move(junctions), std::move(edges)); }
};

}  // namespace

RoadNetwork::RoadNetwork(std::vector<Junction> junctions, std::vector<Edge> edges)
    : junctions_(std::move(junctions)), edges_(std::move(edges)) {
  junction_by_id_.reserve(junctions_.size());
  for (std::size_t i = 0; i < junctions_.size(); ++i) {
    junction_by_id_.emplace(junctions_[i].id, i);  // duplicates keep the first; validate() reports them
  }
  edge_by_id_.reserve(edges_.size());
  edge_from_.resize(edges_.size(), kNoJunction);
  edge_to_.resize(edges_.size(), kNoJunction);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    edge_by_id_.emplace(edges_[i].id, i);
    if (auto it = junction_by_id_.find(edges_[i].from); it != junction_by_id_.end()) {
      edge_from_[i] = it->second;
    }
    if (auto it = junction_by_id_.find(edges_[i].to); it != junction_by_id_.end()) {
      edge_to_[i] = it->second;
    }
  }

  // CSR adjacency over resolvable endpoints.
  out_offsets_.assign(junctions_.size() + 1, 0);
  in_offsets_.assign(junctions_.size() + 1, 0);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (edge_from_[i] != kNoJunction) ++out_offsets_[edge_from_[i] + 1];
    if (edge_to_[i] != kNoJunction) ++in_offsets_[edge_to_[i] + 1];
  }
  std::partial_sum(out_offsets_.begin(), out_offsets_.end(), out_offsets_.begin());
  std::partial_sum(in_offsets_.begin(), in_offsets_.end(), in_offsets_.begin());
  out_index_.resize(out_offsets_.back());
  in_index_.resize(in_offsets_.back());
  std::vector<std::size_t> out_cursor(out_offsets_.begin(), out_offsets_.end() - 1);
  std::vector<std::size_t> in_cursor(in_offsets_.begin(), in_offsets_.end() - 1);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (edge_from_[i] != kNoJunction) out_index_[out_cursor[edge_from_[i]]++] = i;
    if (edge_to_[i] != kNoJunction) in_index_[in_cursor[edge_to_[i]]++] = i;
  }

  std::vector<std::size_t> order(edges_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
    return edges_[a].id < edges_[b].id;
  });
  lexical_rank_.resize(edges_.size());
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    lexical_rank_[order[rank]] = static_cast<std::uint32_t>(rank);
  }
}

std::optional<std::size_t> RoadNetwork::junction_index(std::string_view id) const {
  const auto it = junction_by_id_.find(std::string(id));
  if (it == junction_by_id_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> RoadNetwork::edge_index(std::string_view id) const {
  const auto it = edge_by_id_.find(std::string(id));
  if (it == edge_by_id_.end()) return std::nullopt;
  return it->second;
}

const Junction* RoadNetwork::find_junction(std::string_view id) const {
  const auto index = junction_index(id);
  return index ? &junctions_[*index] : nullptr;
}

const Edge* RoadNetwork::find_edge(std::string_view id) const {
  const auto index = edge_index(id);
  return index ? &edges_[*index] : nullptr;
}

std::span<const std::size_t> RoadNetwork::out_edges(std::size_t junction_index) const {
  return {out_index_.data() + out_offsets_[junction_index],
          out_offsets_[junction_index + 1] - out_offsets_[junction_index]};
}

std::span<const std::size_t> RoadNetwork::in_edges(std::size_t junction_index) const {
  return {in_index_.data() + in_offsets_[junction_index],
          in_offsets_[junction_index + 1] - in_offsets_[junction_index]};
}

std::pair<double, double> RoadNetwork::edge_midpoint(std::size_t edge_index) const {
  const Junction& a = junctions_[edge_from_[edge_index]];
  const Junction& b = junctions_[edge_to_[edge_index]];
  return {(a.x + b.x) / 2, (a.y + b.y) / 2};
}

double RoadNetwork::total_edge_length() const {
  double total = 0;
  for (const Edge& edge : edges_) total += edge.length;
  return total;
}

double RoadNetwork::max_speed_limit() const {
  double max_speed = 0;
  for (const Edge& edge : edges_) max_speed = std::max(max_speed, edge.speed_limit);
  return max_speed;
}

RoadNetwork::BoundingBox RoadNetwork::bounding_box() const {
  if (junctions_.empty()) return {};
  BoundingBox box{junctions_[0].x, junctions_[0].y, junctions_[0].x, junctions_[0].y};
  for (const Junction& junction : junctions_) {
    box.min_x = std::min(box.min_x, junction.x);
    box.min_y = std::min(box.min_y, junction.y);
    box.max_x = std::max(box.max_x, junction.x);
    box.max_y = std::max(box.max_y, junction.y);
  }
  return box;
}

void RoadNetwork::ensure_valid() const {
  const auto violations = validate(*this);
  if (!violations.empty()) {
    fail(ErrorCode::validation_error,
         "network is invalid: " + violations.front().element_id + ": " +
             violations.front().message + " (" + std::to_string(violations.size()) +
             " violation(s) total)");
  }
}

std::vector<Violation> validate(const RoadNetwork& net) {
  std::vector<Violation> violations;
  std::unordered_set<std::string_view> seen;

  for (const Junction& junction : net.junctions_) {
    if (!seen.insert(junction.id).second) {
      violations.push_back({junction.id, "duplicate junction id"});
    }
    if (!std::isfinite(junction.x) || !std::isfinite(junction.y)) {
      violations.push_back({junction.id, "junction coordinates must be finite"});
    }
  }

  seen.clear();
  for (std::size_t i = 0; i < net.edges_.size(); ++i) {
    const Edge& edge = net.edges_[i];
    if (!seen.insert(edge.id).second) {
      violations.push_back({edge.id, "duplicate edge id"});
    }
    if (net.edge_from_[i] == kNoJunction) {
      violations.push_back({edge.id, "unknown from-junction '" + edge.from + "'"});
    }
    if (net.edge_to_[i] == kNoJunction) {
      violations.push_back({edge.id, "unknown to-junction '" + edge.to + "'"});
    }
    if (edge.from == edge.to) {
      violations.push_back({edge.id, "edge endpoints must differ"});
    }
    if (!(edge.length > 0) || !std::isfinite(edge.length)) {
      violations.push_back({edge.id, "edge length must be positive"});
    }
    if (edge.lane_count < 1) {
      violations.push_back({edge.id, "lane count must be at least 1"});
    }
    if (!(edge.speed_limit > 0) || !std::isfinite(edge.speed_limit)) {
      violations.push_back({edge.id, "speed limit must be positive"});
    }
  }
  return violations;
}

bool is_strongly_connected(const RoadNetwork& net) {
  if (net.junction_count() == 0) return true;
  const auto sweep = [&](bool forward) {
    std::vector<char> seen(net.junction_count(), 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      const std::size_t junction = stack.back();
      stack.pop_back();
      const auto edges = forward ? net.out_edges(junction) : net.in_edges(junction);
      for (const std::size_t edge : edges) {
        const std::size_t next =
            forward ? net.edge_to_junction(edge) : net.edge_from_junction(edge);
        if (!seen[next]) {
          seen[next] = 1;
          ++count;
          stack.push_back(next);
        }
      }
    }
    return count == net.junction_count();
  };
  return sweep(true) && sweep(false);
}

RoadNetwork generate_grid(int n, double segment_length, std::uint64_t seed,
                          const GeneratorOptions& options) {
  (void)seed;  // layout is fully determined by the parameters
  if (n < 2) fail(ErrorCode::invalid_parameter, "grid size must be at least 2");
  if (!(segment_length > 0)) fail(ErrorCode::invalid_parameter, "segment length must be positive");

  NetworkBuilder builder;
  builder.control = options.junction_control;
  for (int col = 0; col < n; ++col) {
    for (int row = 0; row < n; ++row) {
      builder.add_junction(column_label(col) + std::to_string(row), col * segment_length,
                           row * segment_length);
    }
  }
  const auto at = [&](int col, int row) -> const Junction& {
    return builder.junctions[static_cast<std::size_t>(col) * n + row];
  };
  for (int col = 0; col < n; ++col) {
    for (int row = 0; row < n; ++row) {
      if (row + 1 < n) builder.add_edge_pair(at(col, row), at(col, row + 1), segment_length);
      if (col + 1 < n) builder.add_edge_pair(at(col, row), at(col + 1, row), segment_length);
    }
  }
  return builder.build();
}

RoadNetwork generate_spider(int arms, int circles, double radius_step, bool omit_center,
                            std::uint64_t seed, const GeneratorOptions& options) {
  (void)seed;
  if (arms < 3) fail(ErrorCode::invalid_parameter, "spider needs at least 3 arms");
  if (circles < 1) fail(ErrorCode::invalid_parameter, "spider needs at least 1 circle");
  if (!(radius_step > 0)) fail(ErrorCode::invalid_parameter, "radius step must be positive");

  NetworkBuilder builder;
  builder.control = options.junction_control;
  if (!omit_center) builder.add_junction("center", 0, 0);
  const std::size_t ring_base = builder.junctions.size();
  for (int circle = 1; circle <= circles; ++circle) {
    for (int arm = 0; arm < arms; ++arm) {
      const double angle = 2 * std::numbers::pi * arm / arms;
      const double radius = circle * radius_step;
      builder.add_junction("a" + std::to_string(arm) + "c" + std::to_string(circle),
                           radius * std::cos(angle), radius * std::sin(angle));
    }
  }
  const auto ring = [&](int arm, int circle) -> const Junction& {
    return builder.junctions[ring_base + static_cast<std::size_t>(circle - 1) * arms + arm];
  };
  const double chord_factor = 2 * std::sin(std::numbers::pi / arms);
  for (int circle = 1; circle <= circles; ++circle) {
    const double chord = circle * radius_step * chord_factor;
    for (int arm = 0; arm < arms; ++arm) {
      builder.add_edge_pair(ring(arm, circle), ring((arm + 1) % arms, circle), chord);
      if (circle < circles) {
        builder.add_edge_pair(ring(arm, circle), ring(arm, circle + 1), radius_step);
      }
    }
  }
  if (!omit_center) {
    for (int arm = 0; arm < arms; ++arm) {
      builder.add_edge_pair(builder.junctions[0], ring(arm, 1), radius_step);
    }
  }
  return builder.build();
}

RoadNetwork generate_random(int iterations, bool grid_bias, std::uint64_t seed,
                            const GeneratorOptions& options) {
  if (iterations < 1) fail(ErrorCode::invalid_parameter, "iterations must be at least 1");

  constexpr double kMinSegment = 80;
  constexpr double kMaxSegment = 200;
  constexpr double kGridStep = 100;
  constexpr double kMinGap = 40;
  constexpr double kShortcutRadius = 250;
  constexpr double kShortcutProbability = 0.3;
  constexpr int kMaxAttempts = 1000;

  Rng rng(seed);
  NetworkBuilder builder;
  builder.control = options.junction_control;
  builder.add_junction("n0", 0, 0);

  for (int iteration = 1; iteration <= iterations; ++iteration) {
    std::size_t parent = 0;
    double x = 0, y = 0;
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      parent = rng.uniform_index(builder.junctions.size());
      const Junction& origin = builder.junctions[parent];
      if (grid_bias) {
        static constexpr double kDirections[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        const auto& dir = kDirections[rng.uniform_index(4)];
        const double length = kGridStep * static_cast<double>(1 + rng.uniform_index(2));
        x = std::round((origin.x + dir[0] * length) / kGridStep) * kGridStep;
        y = std::round((origin.y + dir[1] * length) / kGridStep) * kGridStep;
      } else {
        const double angle = rng.uniform_real(0, 2 * std::numbers::pi);
        const double length = rng.uniform_real(kMinSegment, kMaxSegment);
        x = origin.x + length * std::cos(angle);
        y = origin.y + length * std::sin(angle);
      }
      placed = true;
      for (const Junction& existing : builder.junctions) {
        if (std::hypot(existing.x - x, existing.y - y) < kMinGap) {
          placed = false;
          break;
        }
      }
    }
    if (!placed) fail(ErrorCode::generation_exhausted, "could not place a new junction");

    builder.add_junction("n" + std::to_string(iteration), x, y);
    const Junction& created = builder.junctions.back();
    builder.add_edge_pair(builder.junctions[parent], created, distance(builder.junctions[parent], created));

    // Shortcut to the nearest other junction inside the radius, sometimes.
    std::size_t nearest = kNoJunction;
    double nearest_distance = kShortcutRadius;
    for (std::size_t i = 0; i + 1 < builder.junctions.size(); ++i) {
      if (i == parent) continue;
      const double d = distance(builder.junctions[i], created);
      if (d < nearest_distance) {
        nearest = i;
        nearest_distance = d;
      }
    }
    if (nearest != kNoJunction && rng.bernoulli(kShortcutProbability)) {
      builder.add_edge_pair(builder.junctions[nearest], created, nearest_distance);
    }
  }
  return builder.build();
}

RoadNetwork parse_network(std::string_view text) {
  const xml::Element root = xml::parse(text);
  if (root.name != "net") {
    fail(ErrorCode::parse_error, "expected <net> root element, found <" + root.name + ">");
  }
  std::vector<Junction> junctions;
  std::vector<Edge> edges;
  for (const xml::Element& child : root.children) {
    if (child.name == "junction") {
      Junction junction;
      junction.id = child.attribute("id");
      junction.x = child.number_attribute("x");
      junction.y = child.number_attribute("y");
      if (const std::string* type = child.find_attribute("type")) {
        if (*type == "traffic_light") {
          junction.control = JunctionControl::traffic_light;
        } else if (*type == "priority") {
          junction.control = JunctionControl::priority;
        } else {
          fail(ErrorCode::parse_error,
               "line " + std::to_string(child.line) + ": unsupported junction type '" + *type + "'");
        }
      }
      junctions.push_back(std::move(junction));
    } else if (child.name == "edge") {
      Edge edge;
      edge.id = child.attribute("id");
      edge.from = child.attribute("from");
      edge.to = child.attribute("to");
      edge.length = child.number_attribute("length");
      edge.lane_count = static_cast<int>(child.integer_attribute("numLanes"));
      edge.speed_limit = child.number_attribute("speed");
      edges.push_back(std::move(edge));
    }
    // Unknown children are ignored; this is a declared subset reader.
  }
  return RoadNetwork(std::move(junctions), std::move(edges));
}

RoadNetwork read_network(const std::string& path) {
  return parse_network(xml::read_text_file(path));
}

std::string serialize_network(const RoadNetwork& net) {
  xml::Element root;
  root.name = "net";
  for (const Junction& junction : net.junctions()) {
    root.add_child("junction")
        .set("id", junction.id)
        .set("x", junction.x)
        .set("y", junction.y)
        .set("type", junction.control == JunctionControl::traffic_light ? "traffic_light"
                                                                        : "priority");
  }
  for (const Edge& edge : net.edges()) {
    root.add_child("edge")
        .set("id", edge.id)
        .set("from", edge.from)
        .set("to", edge.to)
        .set("length", edge.length)
        .set("numLanes", static_cast<long>(edge.lane_count))
        .set("speed", edge.speed_limit);
  }
  return xml::serialize(root);
}

void write_network(const RoadNetwork& net, const std::string& path) {
  xml::write_text_file(path, serialize_network(net));
}

}  // namespace trafficforge
