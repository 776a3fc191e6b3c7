#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trafficforge/detectors.hpp"
#include "trafficforge/net.hpp"
#include "trafficforge/routing.hpp"

namespace trafficforge {

struct SimConfig {
  double begin = 0;
  double end = 3600;
  double step = 1.0;
  double default_capacity_per_lane = 0.5;       // veh/s leaving an edge, per lane
  double traffic_light_capacity_factor = 0.5;   // applied when the exit junction is signalized
};

struct VehicleRecord {
  std::string id;
  double depart = 0;
  bool inserted = false;
  bool arrived = false;
  double finish = 0;          // arrival time when arrived
  double traversal_time = 0;  // finish - depart; horizon-censored when unfinished
};

struct EdgeAggregate {
  std::string edge_id;
  double begin = 0;
  double end = 0;
  double sampled_seconds = 0;
  double mean_travel_time = 0;  // >= free-flow time of the edge
  long entered = 0;
};

struct DetectorRecord {
  double begin = 0;
  double end = 0;
  double mean_speed = 0;        // m/s over per-step samples; 0 when no samples
  double mean_time_loss = 0;    // s per observed vehicle
  double mean_occupancy = 0;    // %
  double max_occupancy = 0;     // %
  long max_vehicle_number = 0;  // max simultaneous vehicles on the area
  long n_veh_seen = 0;
};

struct DetectorOutput {
  DetectorSpec spec;
  std::vector<DetectorRecord> records;  // contiguous periods covering [begin, end)
};

struct StepStat {
  double time = 0;
  long departed = 0;  // cumulative insertions
  long arrived = 0;   // cumulative arrivals
  long running = 0;   // on the network after this step
};

struct SimOutput {
  std::vector<VehicleRecord> vehicles;
  std::vector<EdgeAggregate> edge_aggregates;  // whole horizon, traversed edges only
  std::vector<DetectorOutput> detector_outputs;
  std::vector<StepStat> step_stats;
  long unfinished = 0;

  // Feedback for iterative assignment, indexed by edge.
  std::vector<double> edge_mean_travel_time;  // mean of completed traversals
  std::vector<long> edge_traversal_count;

  double mean_travel_time() const;  // over inserted vehicles, horizon-censored
};

// Deterministic point-queue model: vehicles traverse an edge at free flow,
// then leave it FIFO with a minimum headway of 1/capacity seconds.
SimOutput simulate(const RoadNetwork& net, std::span<const Route> routes, const SimConfig& config,
                   std::span<const DetectorSpec> detectors = {});

std::string serialize_edgedata(const SimOutput& output);
void write_edgedata(const SimOutput& output, const std::string& path);

std::string serialize_detector_records(const DetectorOutput& output);
// One file per detector, at the path named in its spec.
void write_detector_files(const SimOutput& output);

}  // namespace trafficforge
