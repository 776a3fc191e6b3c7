#include "trafficforge/odmatrix.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "trafficforge/error.hpp"
#include "trafficforge/rng.hpp"
#include "trafficforge/xml.hpp"

namespace trafficforge {

namespace {

constexpr std::string_view kOFormatHeader = "$OR;D2";

std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.emplace_back(line.substr(start, i - start));
  }
  return tokens;
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  return text;
}

[[noreturn]] void line_fail(ErrorCode code, int line, const std::string& message) {
  fail(code, "line " + std::to_string(line) + ": " + message);
}

}  // namespace

double ODMatrix::cell_sum() const {
  double sum = 0;
  for (const auto& [key, value] : cells) sum += value;
  return sum;
}

double parse_hour_minute(std::string_view text, int line) {
  const auto dot = text.find('.');
  const std::string_view hour_part = dot == std::string_view::npos ? text : text.substr(0, dot);
  const std::string_view minute_part =
      dot == std::string_view::npos ? std::string_view() : text.substr(dot + 1);
  const auto digits_only = [](std::string_view part) {
    if (part.empty()) return false;
    return std::all_of(part.begin(), part.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  };
  if (!digits_only(hour_part) || (dot != std::string_view::npos && !digits_only(minute_part))) {
    line_fail(ErrorCode::parse_error, line, "malformed HOUR.MINUTE value '" + std::string(text) + "'");
  }
  long hours = 0, minutes = 0;
  for (char c : hour_part) hours = hours * 10 + (c - '0');
  for (char c : minute_part) minutes = minutes * 10 + (c - '0');
  if (minutes >= 60) {
    line_fail(ErrorCode::parse_error, line, "minutes out of range in '" + std::string(text) + "'");
  }
  return static_cast<double>(hours) * 3600 + static_cast<double>(minutes) * 60;
}

std::string format_hour_minute(double seconds) {
  const long total = std::lround(seconds);
  if (total < 0 || std::abs(seconds - static_cast<double>(total)) > 1e-6 || total % 60 != 0) {
    fail(ErrorCode::value_error,
         "time " + xml::format_fixed(seconds) + " s is not a nonnegative whole minute");
  }
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%ld.%02ld", total / 3600, (total % 3600) / 60);
  return buffer;
}

ODMatrix parse_o_format(std::string_view text) {
  ODMatrix matrix;
  enum class Stage { header, window, factor, cells };
  Stage stage = Stage::header;

  int line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto newline = text.find('\n', pos);
    std::string_view raw = text.substr(pos, newline == std::string_view::npos ? std::string_view::npos
                                                                              : newline - pos);
    pos = newline == std::string_view::npos ? text.size() + 1 : newline + 1;
    ++line_number;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '*') continue;  // comments allowed anywhere

    switch (stage) {
      case Stage::header:
        if (line != kOFormatHeader) {
          line_fail(ErrorCode::format_error, line_number,
                    "expected O-format header '" + std::string(kOFormatHeader) + "'");
        }
        stage = Stage::window;
        break;
      case Stage::window: {
        const auto tokens = tokenize(line);
        if (tokens.size() != 2) {
          line_fail(ErrorCode::parse_error, line_number, "expected 'FROM-TIME TO-TIME'");
        }
        matrix.window.begin = parse_hour_minute(tokens[0], line_number);
        matrix.window.end = parse_hour_minute(tokens[1], line_number);
        if (!(matrix.window.begin < matrix.window.end)) {
          line_fail(ErrorCode::window_error, line_number, "time window must have begin < end");
        }
        stage = Stage::factor;
        break;
      }
      case Stage::factor: {
        const auto tokens = tokenize(line);
        if (tokens.size() != 1) line_fail(ErrorCode::parse_error, line_number, "expected a single factor");
        matrix.factor = xml::parse_number(tokens[0], line_number);
        if (matrix.factor < 0) {
          line_fail(ErrorCode::value_error, line_number, "factor must be nonnegative");
        }
        stage = Stage::cells;
        break;
      }
      case Stage::cells: {
        const auto tokens = tokenize(line);
        if (tokens.size() != 3) {
          line_fail(ErrorCode::parse_error, line_number, "expected 'FROM TO NUMVEHICLES'");
        }
        const double vehicles = xml::parse_number(tokens[2], line_number);
        if (vehicles < 0) {
          line_fail(ErrorCode::value_error, line_number, "vehicle count must be nonnegative");
        }
        matrix.cells[{tokens[0], tokens[1]}] += vehicles;
        break;
      }
    }
  }
  if (stage == Stage::header) fail(ErrorCode::format_error, "missing O-format header");
  if (stage != Stage::cells) fail(ErrorCode::parse_error, "truncated O-format matrix");
  return matrix;
}

ODMatrix read_o_format(const std::string& path) {
  return parse_o_format(xml::read_text_file(path));
}

std::string write_o_format(const ODMatrix& matrix) {
  if (!(matrix.window.begin < matrix.window.end)) {
    fail(ErrorCode::window_error, "time window must have begin < end");
  }
  std::string out;
  out += kOFormatHeader;
  out += "\n* From-Time  To-Time\n";
  out += format_hour_minute(matrix.window.begin) + " " + format_hour_minute(matrix.window.end) + "\n";
  out += "* Factor\n";
  out += xml::format_fixed(matrix.factor) + "\n";
  char buffer[128];
  for (const auto& [key, vehicles] : matrix.cells) {
    std::snprintf(buffer, sizeof(buffer), "%10s %10s %10s\n", key.first.c_str(),
                  key.second.c_str(), xml::format_fixed(vehicles).c_str());
    out += buffer;
  }
  return out;
}

void write_o_format_file(const ODMatrix& matrix, const std::string& path) {
  xml::write_text_file(path, write_o_format(matrix));
}

std::vector<Trip> od_to_trips(const ODMatrix& matrix, const TazSet& tazs, std::uint64_t seed,
                              const std::string& id_prefix) {
  Rng rng(seed);
  std::vector<Trip> trips;
  for (const auto& [key, value] : matrix.cells) {
    const TazZone* origin = tazs.find(key.first);
    const TazZone* destination = tazs.find(key.second);
    if (origin == nullptr || destination == nullptr) {
      fail(ErrorCode::reference_error,
           "cell references unknown TAZ '" + (origin == nullptr ? key.first : key.second) + "'");
    }
    if (origin->edge_ids.empty() || destination->edge_ids.empty()) {
      fail(ErrorCode::empty_zone, "TAZ '" +
                                      (origin->edge_ids.empty() ? origin->id : destination->id) +
                                      "' has no edges");
    }
    const double vehicles = matrix.factor * value;
    auto count = static_cast<long>(std::floor(vehicles + 1e-9));
    const double fraction = vehicles - static_cast<double>(count);
    if (fraction > 1e-9 && rng.bernoulli(fraction)) ++count;
    for (long i = 0; i < count; ++i) {
      Trip trip;
      trip.depart = rng.uniform_real(matrix.window.begin, matrix.window.end);
      trip.from_edge = origin->edge_ids[rng.uniform_index(origin->edge_ids.size())];
      trip.to_edge = destination->edge_ids[rng.uniform_index(destination->edge_ids.size())];
      trips.push_back(std::move(trip));
    }
  }
  std::stable_sort(trips.begin(), trips.end(),
                   [](const Trip& a, const Trip& b) { return a.depart < b.depart; });
  for (std::size_t i = 0; i < trips.size(); ++i) trips[i].id = id_prefix + std::to_string(i);
  return trips;
}

RouteToOdResult route_to_od(std::span<const Journey> journeys, const TazSet& tazs,
                            TimeWindow window, int interval_count) {
  if (!(window.begin < window.end)) fail(ErrorCode::window_error, "window must have begin < end");
  if (interval_count < 1) fail(ErrorCode::invalid_parameter, "interval count must be at least 1");

  std::map<std::string, const TazZone*, std::less<>> zone_of_edge;
  for (const TazZone& zone : tazs.zones) {
    for (const std::string& edge_id : zone.edge_ids) zone_of_edge.emplace(edge_id, &zone);
  }

  RouteToOdResult result;
  const double slice = (window.end - window.begin) / interval_count;
  result.matrices.resize(interval_count);
  for (int i = 0; i < interval_count; ++i) {
    result.matrices[i].window = {window.begin + slice * i, window.begin + slice * (i + 1)};
    result.matrices[i].factor = 1.0;
  }

  for (const Journey& journey : journeys) {
    if (journey.first_edge.empty() || journey.last_edge.empty()) {
      fail(ErrorCode::invalid_parameter, "journey without edges");
    }
    if (journey.depart < window.begin || journey.depart >= window.end) {
      ++result.skipped_out_of_window;
      continue;
    }
    const auto origin = zone_of_edge.find(journey.first_edge);
    const auto destination = zone_of_edge.find(journey.last_edge);
    if (origin == zone_of_edge.end() || destination == zone_of_edge.end()) {
      ++result.skipped_no_zone;
      continue;
    }
    auto index = static_cast<int>((journey.depart - window.begin) / slice);
    index = std::clamp(index, 0, interval_count - 1);
    result.matrices[index].cells[{origin->second->id, destination->second->id}] += 1.0;
  }
  return result;
}

RouteToOdResult route_to_od(std::span<const Route> routes, const TazSet& tazs,
                            TimeWindow window, int interval_count) {
  std::vector<Journey> journeys;
  journeys.reserve(routes.size());
  for (const Route& route : routes) {
    if (route.edges.empty()) fail(ErrorCode::invalid_parameter, "route without edges");
    journeys.push_back({route.depart, route.edges.front(), route.edges.back()});
  }
  return route_to_od(std::span<const Journey>(journeys), tazs, window, interval_count);
}

double RouteToOdResult::total_mass() const {
  double mass = 0;
  for (const ODMatrix& matrix : matrices) mass += matrix.cell_sum();
  return mass;
}

std::vector<Journey> parse_journeys(std::string_view text) {
  const xml::Element root = xml::parse(text);
  if (root.name != "routes") {
    fail(ErrorCode::parse_error, "expected <routes> root element, found <" + root.name + ">");
  }
  std::vector<Journey> journeys;
  for (const xml::Element& child : root.children) {
    if (child.name == "trip") {
      journeys.push_back({child.number_attribute("depart"), child.attribute("from"),
                          child.attribute("to")});
    } else if (child.name == "vehicle") {
      for (const xml::Element& inner : child.children) {
        if (inner.name != "route") continue;
        const auto edges = tokenize(inner.attribute("edges"));
        if (edges.empty()) {
          fail(ErrorCode::parse_error,
               "line " + std::to_string(inner.line) + ": route must list at least one edge");
        }
        journeys.push_back({child.number_attribute("depart"), edges.front(), edges.back()});
        break;
      }
    }
  }
  return journeys;
}

std::vector<Journey> read_journeys(const std::string& path) {
  return parse_journeys(xml::read_text_file(path));
}

}  // namespace trafficforge
