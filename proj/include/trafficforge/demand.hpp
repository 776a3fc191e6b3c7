#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trafficforge/net.hpp"
#include "trafficforge/rng.hpp"
#include "trafficforge/trip.hpp"

namespace trafficforge {

struct ArrivalModel {
  enum class Kind { period, insertion_rate, insertion_density, binomial };

  Kind kind = Kind::period;
  std::vector<double> periods{1.0};   // seconds; several split the window evenly
  double rate_per_hour = 0;           // veh/h
  double density_per_hour_km = 0;     // veh/h/km of road
  int binomial_max = 0;               // max simultaneous arrivals per second
  double binomial_period = 1.0;       // expected arrival rate is 1/period
  bool random_depart = false;         // redraw departs uniformly over the window

  static ArrivalModel with_periods(std::vector<double> periods);
  static ArrivalModel with_rate(double vehicles_per_hour);
  static ArrivalModel with_density(double vehicles_per_hour_km);
  static ArrivalModel with_binomial(int max_simultaneous, double period);
};

// Sampling weights per edge id; edges absent from a table weigh zero.
struct EdgeWeightTable {
  std::map<std::string, double> src;
  std::map<std::string, double> dst;
  std::map<std::string, double> via;  // parsed for compatibility, not sampled from
};

struct TripGenerationOptions {
  double begin = 0;
  double end = 3600;
  ArrivalModel model;
  std::optional<EdgeWeightTable> weights;
  std::uint64_t seed = kDefaultSeed;
  bool validate = false;  // discard and resample trips with no route
  std::string id_prefix;
  int max_retries = 100;  // endpoint resampling budget per trip
};

std::vector<Trip> generate_trips(const RoadNetwork& net, const TripGenerationOptions& options);

// Edge id drawn with probability weight/total; total must be positive.
const std::string& sample_edge(std::span<const std::pair<std::string, double>> table, Rng& rng);

// Loads <prefix>.src.xml / .dst.xml / .via.xml when present.
EdgeWeightTable load_weight_table(const std::string& prefix);
std::map<std::string, double> parse_edge_values(std::string_view text);
void write_edge_values(const std::map<std::string, double>& values, const std::string& path);

}  // namespace trafficforge
