#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "trafficforge/net.hpp"
#include "trafficforge/taz.hpp"

namespace trafficforge {

// Virtual lane-area sensor spanning [pos, pos + length] on one lane.
struct DetectorSpec {
  std::string id;
  std::string edge;
  int lane = 0;
  double pos = 0;      // m from edge start
  double length = 0;   // m, pos + length <= edge length
  double period = 60;  // s
  std::string file;    // output path written by the simulator
};

std::vector<Violation> validate_detectors(std::span<const DetectorSpec> detectors,
                                          const RoadNetwork& net);

enum class PlacementStrategy { by_lanes, by_weight };

struct PlacementOptions {
  double probability = 1.0;  // per-TAZ chance of receiving a detector
  PlacementStrategy strategy = PlacementStrategy::by_lanes;
  std::string weight_attribute;                // by_weight: attribute in the edgedata file
  std::map<std::string, double> edge_weights;  // by_weight: values per edge id
  double period = 100;
  double max_length = 50;
  std::string file_directory = "lane_output";
  std::uint64_t seed = kDefaultSeed;
};

struct PlacementResult {
  std::vector<DetectorSpec> detectors;
  std::size_t skipped_zones = 0;  // empty or zero-weight TAZs
};

// Per TAZ, with the configured probability, chooses one edge (weighted by
// lane count or by the named edgedata attribute) and spans lane 0 from the
// edge start.
PlacementResult place_random(const RoadNetwork& net, const TazSet& tazs,
                             const PlacementOptions& options);

// Reads the named attribute for every edge of an edgedata file.
std::map<std::string, double> read_edgedata_attribute(const std::string& path,
                                                      const std::string& attribute);

std::vector<DetectorSpec> parse_additional_file(std::string_view text,
                                                const RoadNetwork* net = nullptr);
std::vector<DetectorSpec> read_additional_file(const std::string& path,
                                               const RoadNetwork* net = nullptr);
std::string serialize_additional_file(std::span<const DetectorSpec> detectors);
void write_additional_file(std::span<const DetectorSpec> detectors, const std::string& path);

}  // namespace trafficforge
