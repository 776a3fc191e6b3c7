#include "trafficforge/trip.hpp"

#include "trafficforge/error.hpp"
#include "trafficforge/xml.hpp"

namespace trafficforge {

std::vector<Trip> parse_trips(std::string_view text) {
  const xml::Element root = xml::parse(text);
  if (root.name != "routes") {
    fail(ErrorCode::parse_error, "expected <routes> root element, found <" + root.name + ">");
  }
  std::vector<Trip> trips;
  for (const xml::Element& child : root.children) {
    if (child.name != "trip") continue;
    Trip trip;
    trip.id = child.attribute("id");
    trip.depart = child.number_attribute("depart");
    trip.from_edge = child.attribute("from");
    trip.to_edge = child.attribute("to");
    trips.push_back(std::move(trip));
  }
  return trips;
}

std::vector<Trip> read_trips(const std::string& path) {
  return parse_trips(xml::read_text_file(path));
}

std::string serialize_trips(const std::vector<Trip>& trips) {
  xml::Element root;
  root.name = "routes";
  for (const Trip& trip : trips) {
    root.add_child("trip")
        .set("id", trip.id)
        .set("depart", trip.depart)
        .set("from", trip.from_edge)
        .set("to", trip.to_edge);
  }
  return xml::serialize(root);
}

void write_trips(const std::vector<Trip>& trips, const std::string& path) {
  xml::write_text_file(path, serialize_trips(trips));
}

}  // namespace trafficforge
