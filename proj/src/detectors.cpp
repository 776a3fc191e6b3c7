#include "trafficforge/detectors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "trafficforge/error.hpp"
#include "trafficforge/xml.hpp"

namespace trafficforge {

namespace {

// Lane attribute format is "<edge id>_<lane index>"; edge ids may themselves
// contain underscores, so split at the last one.
std::pair<std::string, int> split_lane(const std::string& lane, int line) {
  const auto underscore = lane.rfind('_');
  if (underscore == std::string::npos || underscore + 1 >= lane.size()) {
    fail(ErrorCode::parse_error,
         "line " + std::to_string(line) + ": lane must be '<edge>_<index>', got '" + lane + "'");
  }
  const std::string index_part = lane.substr(underscore + 1);
  for (char c : index_part) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      fail(ErrorCode::parse_error,
           "line " + std::to_string(line) + ": lane index must be numeric in '" + lane + "'");
    }
  }
  return {lane.substr(0, underscore), std::stoi(index_part)};
}

}  // namespace

std::vector<Violation> validate_detectors(std::span<const DetectorSpec> detectors,
                                          const RoadNetwork& net) {
  std::vector<Violation> violations;
  for (const DetectorSpec& detector : detectors) {
    const Edge* edge = net.find_edge(detector.edge);
    if (edge == nullptr) {
      violations.push_back({detector.id, "unknown edge '" + detector.edge + "'"});
      continue;
    }
    if (detector.lane < 0 || detector.lane >= edge->lane_count) {
      violations.push_back({detector.id, "lane index out of range"});
    }
    if (detector.pos < 0 || detector.pos + detector.length > edge->length + 1e-9) {
      violations.push_back({detector.id, "detector does not fit on edge '" + detector.edge + "'"});
    }
    if (!(detector.length > 0)) {
      violations.push_back({detector.id, "detector length must be positive"});
    }
    if (!(detector.period > 0)) {
      violations.push_back({detector.id, "period must be positive"});
    }
  }
  return violations;
}

PlacementResult place_random(const RoadNetwork& net, const TazSet& tazs,
                             const PlacementOptions& options) {
  if (options.probability < 0 || options.probability > 1) {
    fail(ErrorCode::invalid_parameter, "probability must be in [0, 1]");
  }
  if (options.strategy == PlacementStrategy::by_weight && options.edge_weights.empty()) {
    fail(ErrorCode::config_error, "by-weight placement needs edgedata values");
  }

  Rng rng(options.seed);
  PlacementResult result;
  std::size_t index = 0;
  for (const TazZone& zone : tazs.zones) {
    if (zone.edge_ids.empty()) {
      ++result.skipped_zones;
      continue;
    }
    if (!rng.bernoulli(options.probability)) continue;

    std::vector<double> weights;
    weights.reserve(zone.edge_ids.size());
    bool any_positive = false;
    for (const std::string& edge_id : zone.edge_ids) {
      const Edge* edge = net.find_edge(edge_id);
      if (edge == nullptr) fail(ErrorCode::reference_error, "TAZ references unknown edge '" + edge_id + "'");
      double weight = 0;
      if (options.strategy == PlacementStrategy::by_lanes) {
        weight = edge->lane_count;
      } else {
        const auto it = options.edge_weights.find(edge_id);
        weight = it == options.edge_weights.end() ? 0.0 : it->second;
      }
      any_positive = any_positive || weight > 0;
      weights.push_back(weight);
    }
    if (!any_positive) {
      ++result.skipped_zones;
      continue;
    }

    const std::string& edge_id = zone.edge_ids[rng.weighted_index(weights)];
    const Edge& edge = *net.find_edge(edge_id);
    DetectorSpec detector;
    detector.id = "e2_" + std::to_string(index);
    detector.edge = edge_id;
    detector.lane = 0;
    detector.pos = 0;
    detector.length = std::min(edge.length, options.max_length);
    detector.period = options.period;
    detector.file = options.file_directory + "/e2_" + std::to_string(index) + ".xml";
    result.detectors.push_back(std::move(detector));
    ++index;
  }
  return result;
}

std::map<std::string, double> read_edgedata_attribute(const std::string& path,
                                                      const std::string& attribute) {
  const xml::Element root = xml::parse_file(path);
  if (root.name != "meandata" && root.name != "edgedata") {
    fail(ErrorCode::parse_error, "expected <meandata> root element, found <" + root.name + ">");
  }
  std::map<std::string, double> values;
  bool attribute_seen = false;
  const auto collect = [&](const xml::Element& parent) {
    for (const xml::Element& child : parent.children) {
      if (child.name != "edge") continue;
      if (const auto value = child.optional_number(attribute)) {
        values[child.attribute("id")] = *value;
        attribute_seen = true;
      }
    }
  };
  collect(root);
  for (const xml::Element& child : root.children) {
    if (child.name == "interval") collect(child);
  }
  if (!attribute_seen) {
    fail(ErrorCode::config_error,
         "attribute '" + attribute + "' not found in edgedata file '" + path + "'");
  }
  return values;
}

std::vector<DetectorSpec> parse_additional_file(std::string_view text, const RoadNetwork* net) {
  const xml::Element root = xml::parse(text);
  if (root.name != "additional") {
    fail(ErrorCode::parse_error, "expected <additional> root element, found <" + root.name + ">");
  }
  std::vector<DetectorSpec> detectors;
  for (const xml::Element& child : root.children) {
    if (child.name != "laneAreaDetector") continue;
    DetectorSpec detector;
    detector.id = child.attribute("id");
    const auto [edge, lane] = split_lane(child.attribute("lane"), child.line);
    detector.edge = edge;
    detector.lane = lane;
    detector.pos = child.number_attribute("pos");
    detector.length = child.number_attribute("length");
    detector.period = child.number_attribute("period");
    detector.file = child.attribute("file");
    detectors.push_back(std::move(detector));
  }
  if (net != nullptr) {
    const auto violations = validate_detectors(detectors, *net);
    if (!violations.empty()) {
      fail(ErrorCode::validation_error, "detector '" + violations.front().element_id +
                                            "': " + violations.front().message);
    }
  }
  return detectors;
}

std::vector<DetectorSpec> read_additional_file(const std::string& path, const RoadNetwork* net) {
  return parse_additional_file(xml::read_text_file(path), net);
}

std::string serialize_additional_file(std::span<const DetectorSpec> detectors) {
  xml::Element root;
  root.name = "additional";
  for (const DetectorSpec& detector : detectors) {
    root.add_child("laneAreaDetector")
        .set("id", detector.id)
        .set("lane", detector.edge + "_" + std::to_string(detector.lane))
        .set("pos", detector.pos)
        .set("length", detector.length)
        .set("period", detector.period)
        .set("file", detector.file);
  }
  return xml::serialize(root);
}

void write_additional_file(std::span<const DetectorSpec> detectors, const std::string& path) {
  xml::write_text_file(path, serialize_additional_file(detectors));
}

}  // namespace trafficforge
