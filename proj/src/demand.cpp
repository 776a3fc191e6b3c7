#include "trafficforge/demand.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <unordered_map>

#include "trafficforge/error.hpp"
#include "trafficforge/xml.hpp"

namespace trafficforge {

namespace {

void check_window(double begin, double end) {
  if (!(begin < end)) fail(ErrorCode::invalid_parameter, "begin must be before end");
}

std::vector<double> departs_for_periods(double begin, double end, std::span<const double> periods) {
  for (const double period : periods) {
    if (!(period > 0)) fail(ErrorCode::invalid_parameter, "period must be positive");
  }
  std::vector<double> departs;
  const double slice = (end - begin) / static_cast<double>(periods.size());
  for (std::size_t part = 0; part < periods.size(); ++part) {
    const double slice_begin = begin + slice * static_cast<double>(part);
    const double slice_end = slice_begin + slice;
    for (std::size_t i = 0;; ++i) {
      const double depart = slice_begin + static_cast<double>(i) * periods[part];
      if (depart >= slice_end) break;
      departs.push_back(depart);
    }
  }
  return departs;
}

std::vector<double> departs_for_binomial(double begin, double end, int max_simultaneous,
                                         double period, Rng& rng) {
  if (max_simultaneous < 1) fail(ErrorCode::invalid_parameter, "binomial n must be at least 1");
  if (!(period > 0)) fail(ErrorCode::invalid_parameter, "period must be positive");
  const double success = 1.0 / (max_simultaneous * period);
  if (success > 1.0) {
    fail(ErrorCode::invalid_parameter,
         "binomial per-second success probability exceeds 1; increase n or period");
  }
  std::vector<double> departs;
  for (double second = begin; second < end; second += 1.0) {
    const int arrivals = rng.binomial(max_simultaneous, success);
    for (int i = 0; i < arrivals; ++i) departs.push_back(second);
  }
  return departs;
}

// Cumulative sampler over the network's edge order.
class EdgeSampler {
 public:
  EdgeSampler(const RoadNetwork& net, const std::map<std::string, double>* weights) {
    weights_.reserve(net.edge_count());
    for (const Edge& edge : net.edges()) {
      double w = 1.0;
      if (weights != nullptr) {
        const auto it = weights->find(edge.id);
        w = it == weights->end() ? 0.0 : it->second;
        if (w < 0) fail(ErrorCode::invalid_weights, "negative weight for edge '" + edge.id + "'");
      }
      weights_.push_back(w);
    }
  }

  std::size_t draw(Rng& rng) const { return rng.weighted_index(weights_); }

 private:
  std::vector<double> weights_;
};

// Memoized edge-to-edge reachability used by --validate.
class ReachabilityOracle {
 public:
  explicit ReachabilityOracle(const RoadNetwork& net) : net_(net) {}

  bool reachable(std::size_t from, std::size_t to) {
    if (from == to) return true;
    auto [it, inserted] = cache_.try_emplace(from);
    if (inserted) {
      std::vector<char> seen(net_.edge_count(), 0);
      std::vector<std::size_t> stack{from};
      seen[from] = 1;
      while (!stack.empty()) {
        const std::size_t edge = stack.back();
        stack.pop_back();
        for (const std::size_t next : net_.out_edges(net_.edge_to_junction(edge))) {
          if (!seen[next]) {
            seen[next] = 1;
            stack.push_back(next);
          }
        }
      }
      it->second = std::move(seen);
    }
    return it->second[to] != 0;
  }

 private:
  const RoadNetwork& net_;
  std::unordered_map<std::size_t, std::vector<char>> cache_;
};

}  // namespace

ArrivalModel ArrivalModel::with_periods(std::vector<double> periods) {
  ArrivalModel model;
  model.kind = Kind::period;
  model.periods = std::move(periods);
  if (model.periods.empty()) fail(ErrorCode::invalid_parameter, "at least one period required");
  return model;
}

ArrivalModel ArrivalModel::with_rate(double vehicles_per_hour) {
  ArrivalModel model;
  model.kind = Kind::insertion_rate;
  model.rate_per_hour = vehicles_per_hour;
  return model;
}

ArrivalModel ArrivalModel::with_density(double vehicles_per_hour_km) {
  ArrivalModel model;
  model.kind = Kind::insertion_density;
  model.density_per_hour_km = vehicles_per_hour_km;
  return model;
}

ArrivalModel ArrivalModel::with_binomial(int max_simultaneous, double period) {
  ArrivalModel model;
  model.kind = Kind::binomial;
  model.binomial_max = max_simultaneous;
  model.binomial_period = period;
  return model;
}

std::vector<Trip> generate_trips(const RoadNetwork& net, const TripGenerationOptions& options) {
  check_window(options.begin, options.end);
  net.ensure_valid();
  if (net.edge_count() < 2) {
    fail(ErrorCode::invalid_parameter, "need at least two edges to draw distinct endpoints");
  }

  Rng rng(options.seed);
  std::vector<double> departs;
  switch (options.model.kind) {
    case ArrivalModel::Kind::period:
      departs = departs_for_periods(options.begin, options.end, options.model.periods);
      break;
    case ArrivalModel::Kind::insertion_rate: {
      if (!(options.model.rate_per_hour > 0)) {
        fail(ErrorCode::invalid_parameter, "insertion rate must be positive");
      }
      const double period = 3600.0 / options.model.rate_per_hour;
      departs = departs_for_periods(options.begin, options.end, std::span(&period, 1));
      break;
    }
    case ArrivalModel::Kind::insertion_density: {
      if (!(options.model.density_per_hour_km > 0)) {
        fail(ErrorCode::invalid_parameter, "insertion density must be positive");
      }
      const double rate = options.model.density_per_hour_km * net.total_edge_length() / 1000.0;
      if (!(rate > 0)) fail(ErrorCode::invalid_parameter, "network has no road length");
      const double period = 3600.0 / rate;
      departs = departs_for_periods(options.begin, options.end, std::span(&period, 1));
      break;
    }
    case ArrivalModel::Kind::binomial:
      departs = departs_for_binomial(options.begin, options.end, options.model.binomial_max,
                                     options.model.binomial_period, rng);
      break;
  }

  if (options.model.random_depart) {
    for (double& depart : departs) depart = rng.uniform_real(options.begin, options.end);
    std::sort(departs.begin(), departs.end());
  }

  // A weight table counts only when it has entries; otherwise sampling is uniform.
  const auto table_or_null = [&](const std::map<std::string, double>& table) {
    return options.weights && !table.empty() ? &table : nullptr;
  };
  const EdgeSampler source_sampler(net, options.weights ? table_or_null(options.weights->src) : nullptr);
  const EdgeSampler sink_sampler(net, options.weights ? table_or_null(options.weights->dst) : nullptr);
  ReachabilityOracle oracle(net);

  std::vector<Trip> trips;
  trips.reserve(departs.size());
  for (std::size_t i = 0; i < departs.size(); ++i) {
    std::size_t from = 0, to = 0;
    bool found = false;
    for (int attempt = 0; attempt < options.max_retries; ++attempt) {
      from = source_sampler.draw(rng);
      to = sink_sampler.draw(rng);
      if (from == to) continue;
      if (options.validate && !oracle.reachable(from, to)) continue;
      found = true;
      break;
    }
    if (!found) {
      fail(ErrorCode::generation_exhausted,
           "no routable edge pair found within " + std::to_string(options.max_retries) + " retries");
    }
    trips.push_back({options.id_prefix + std::to_string(i), departs[i], net.edge_at(from).id,
                     net.edge_at(to).id});
  }
  return trips;
}

const std::string& sample_edge(std::span<const std::pair<std::string, double>> table, Rng& rng) {
  std::vector<double> weights;
  weights.reserve(table.size());
  for (const auto& [id, weight] : table) weights.push_back(weight);
  return table[rng.weighted_index(weights)].first;
}

std::map<std::string, double> parse_edge_values(std::string_view text) {
  const xml::Element root = xml::parse(text);
  if (root.name != "edgedata" && root.name != "meandata") {
    fail(ErrorCode::parse_error, "expected <edgedata> root element, found <" + root.name + ">");
  }
  std::map<std::string, double> values;
  const auto collect = [&](const xml::Element& parent) {
    for (const xml::Element& child : parent.children) {
      if (child.name != "edge") continue;
      values[child.attribute("id")] = child.number_attribute("value");
    }
  };
  collect(root);
  for (const xml::Element& child : root.children) {
    if (child.name == "interval") collect(child);
  }
  return values;
}

void write_edge_values(const std::map<std::string, double>& values, const std::string& path) {
  xml::Element root;
  root.name = "edgedata";
  xml::Element& interval = root.add_child("interval");
  interval.set("begin", 0.0).set("end", 3600.0);
  for (const auto& [id, value] : values) {
    interval.add_child("edge").set("id", id).set("value", value);
  }
  xml::write_file(root, path);
}

EdgeWeightTable load_weight_table(const std::string& prefix) {
  EdgeWeightTable table;
  bool any = false;
  const auto load = [&](const char* suffix, std::map<std::string, double>& target) {
    const std::string path = prefix + suffix;
    if (!std::filesystem::exists(path)) return;
    target = parse_edge_values(xml::read_text_file(path));
    any = true;
  };
  load(".src.xml", table.src);
  load(".dst.xml", table.dst);
  load(".via.xml", table.via);
  if (!any) {
    fail(ErrorCode::config_error,
         "no weight files found for prefix '" + prefix + "' (.src.xml/.dst.xml/.via.xml)");
  }
  return table;
}

}  // namespace trafficforge
