#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "trafficforge/rng.hpp"

namespace trafficforge {

inline constexpr double kDefaultSpeedLimit = 13.89;  // m/s, 50 km/h
inline constexpr int kDefaultLaneCount = 1;

enum class JunctionControl { priority, traffic_light };

struct Junction {
  std::string id;
  double x = 0;
  double y = 0;
  JunctionControl control = JunctionControl::priority;
};

struct Edge {
  std::string id;
  std::string from;
  std::string to;
  double length = 0;       // m, > 0
  int lane_count = 1;      // >= 1
  double speed_limit = 0;  // m/s, > 0

  double free_flow_time() const { return length / speed_limit; }
};

struct Violation {
  std::string element_id;
  std::string message;
};

// Immutable once built; shared read-only across routing and simulation.
class RoadNetwork {
 public:
  RoadNetwork() = default;
  RoadNetwork(std::vector<Junction> junctions, std::vector<Edge> edges);

  std::size_t junction_count() const { return junctions_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Junction>& junctions() const { return junctions_; }
  const std::vector<Edge>& edges() const { return edges_; }

  const Junction& junction_at(std::size_t index) const { return junctions_[index]; }
  const Edge& edge_at(std::size_t index) const { return edges_[index]; }

  std::optional<std::size_t> junction_index(std::string_view id) const;
  std::optional<std::size_t> edge_index(std::string_view id) const;
  const Junction* find_junction(std::string_view id) const;
  const Edge* find_edge(std::string_view id) const;

  // Requires an edge whose endpoints resolved; guaranteed after ensure_valid().
  std::size_t edge_from_junction(std::size_t edge_index) const { return edge_from_[edge_index]; }
  std::size_t edge_to_junction(std::size_t edge_index) const { return edge_to_[edge_index]; }

  std::span<const std::size_t> out_edges(std::size_t junction_index) const;
  std::span<const std::size_t> in_edges(std::size_t junction_index) const;

  // Rank of each edge in the id-sorted order; routing's deterministic tie-break.
  std::uint32_t edge_lexical_rank(std::size_t edge_index) const { return lexical_rank_[edge_index]; }

  std::pair<double, double> edge_midpoint(std::size_t edge_index) const;
  double total_edge_length() const;
  double max_speed_limit() const;

  struct BoundingBox {
    double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
  };
  BoundingBox bounding_box() const;

  // Throws validation-error when any invariant check fails.
  void ensure_valid() const;

 private:
  std::vector<Junction> junctions_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, std::size_t> junction_by_id_;
  std::unordered_map<std::string, std::size_t> edge_by_id_;
  std::vector<std::size_t> edge_from_;  // junction index, npos when unresolved
  std::vector<std::size_t> edge_to_;
  std::vector<std::size_t> out_offsets_, out_index_;
  std::vector<std::size_t> in_offsets_, in_index_;
  std::vector<std::uint32_t> lexical_rank_;

  friend std::vector<Violation> validate(const RoadNetwork& net);
};

struct GeneratorOptions {
  JunctionControl junction_control = JunctionControl::priority;
};

// n x n lattice, neighbors joined by one directed edge per direction.
RoadNetwork generate_grid(int n, double segment_length, std::uint64_t seed,
                          const GeneratorOptions& options = {});

// Concentric rings crossed by radial arms, optionally joined to a center.
RoadNetwork generate_spider(int arms, int circles, double radius_step, bool omit_center,
                            std::uint64_t seed, const GeneratorOptions& options = {});

// Incremental growth: each iteration attaches one new junction to a uniformly
// chosen existing one, occasionally adding a shortcut to a nearby junction.
RoadNetwork generate_random(int iterations, bool grid_bias, std::uint64_t seed,
                            const GeneratorOptions& options = {});

std::vector<Violation> validate(const RoadNetwork& net);
bool is_strongly_connected(const RoadNetwork& net);

RoadNetwork parse_network(std::string_view text);
RoadNetwork read_network(const std::string& path);
std::string serialize_network(const RoadNetwork& net);
void write_network(const RoadNetwork& net, const std::string& path);

}  // namespace trafficforge
