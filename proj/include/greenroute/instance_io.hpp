#pragma once

// JSON instance files. Routers nest cards, cards nest ports; each edge
// entry expands to a forward link (port_a -> port_b) followed by its reverse.
// Numeric fields accept JSON numbers or decimal strings.

#include "greenroute/model.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace greenroute {

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline Rational json_number(const nlohmann::json& value, std::string_view field) {
  try {
    if (value.is_number_integer()) {
      if (value.is_number_unsigned()) return Rational(value.get<std::uint64_t>());
      return Rational(value.get<std::int64_t>());
    }
    if (value.is_number_float()) return rational_from_double(value.get<double>());
    if (value.is_string()) return parse_rational(value.get<std::string>());
  } catch (const NumberFormatError& e) {
    throw SchemaError(std::string(field) + ": " + e.what());
  }
  throw SchemaError(std::string(field) + ": expected a number or decimal string");
}

inline const nlohmann::json& json_field(const nlohmann::json& obj, const char* key,
                                        std::string_view where) {
  if (!obj.is_object()) throw SchemaError(std::string(where) + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end())
    throw SchemaError(std::string(where) + ": missing field '" + key + "'");
  return *it;
}

inline const nlohmann::json& json_array(const nlohmann::json& obj, const char* key,
                                        std::string_view where) {
  const auto& value = json_field(obj, key, where);
  if (!value.is_array())
    throw SchemaError(std::string(where) + ": field '" + key + "' must be an array");
  return value;
}

inline std::string json_id(const nlohmann::json& obj, std::string_view where) {
  const auto& value = json_field(obj, "id", where);
  if (!value.is_string()) throw SchemaError(std::string(where) + ": id must be a string");
  return value.get<std::string>();
}

inline nlohmann::json number_to_json(const Rational& value) {
  if (boost::multiprecision::denominator(value) == 1) {
    const Integer n = boost::multiprecision::numerator(value);
    if (n >= 0 && n <= Integer(std::numeric_limits<std::int64_t>::max()))
      return n.convert_to<std::int64_t>();
  }
  return to_string(value);
}

}  // namespace detail

inline InstanceSpec instance_spec_from_json(const nlohmann::json& doc) {
  using detail::json_array;
  using detail::json_field;
  using detail::json_number;
  InstanceSpec spec;
  std::map<std::string, std::size_t> router_index, port_index;

  if (!doc.is_object()) throw SchemaError("instance: top level must be an object");
  for (const auto& router : json_array(doc, "routers", "instance")) {
    auto rid = detail::json_id(router, "router");
    if (!router_index.emplace(rid, spec.router_power.size()).second)
      throw SchemaError("duplicate router id '" + rid + "'");
    const std::size_t r = spec.router_power.size();
    spec.router_names.push_back(rid);
    spec.router_power.push_back(json_number(json_field(router, "power_T", rid), rid + ".power_T"));
    for (const auto& card : json_array(router, "cards", rid)) {
      auto cid = detail::json_id(card, rid + " card");
      if (std::find(spec.card_names.begin(), spec.card_names.end(), cid) != spec.card_names.end())
        throw SchemaError("duplicate card id '" + cid + "'");
      const std::size_t c = spec.card_power.size();
      spec.card_names.push_back(cid);
      spec.card_router.push_back(r);
      spec.card_power.push_back(json_number(json_field(card, "power_W", cid), cid + ".power_W"));
      for (const auto& port : json_array(card, "ports", cid)) {
        auto pid = detail::json_id(port, cid + " port");
        if (!port_index.emplace(pid, spec.port_card.size()).second)
          throw SchemaError("duplicate port id '" + pid + "'");
        spec.port_names.push_back(pid);
        spec.port_card.push_back(c);
      }
    }
  }

  auto lookup = [](const std::map<std::string, std::size_t>& index, const nlohmann::json& ref,
                   std::string_view what) -> std::size_t {
    if (!ref.is_string()) throw SchemaError(std::string(what) + " reference must be a string id");
    auto it = index.find(ref.get<std::string>());
    if (it == index.end())
      throw InstanceError(InstanceErrorCode::DanglingReference,
                          std::string(what) + " '" + ref.get<std::string>() + "' does not exist");
    return it->second;
  };

  std::optional<std::size_t> declared_states;
  if (auto it = doc.find("state_count"); it != doc.end()) {
    if (!it->is_number_unsigned()) throw SchemaError("state_count must be a positive integer");
    declared_states = it->get<std::size_t>();
  }

  const auto& edges = doc.contains("edges") ? json_array(doc, "edges", "instance")
                                            : nlohmann::json::array();
  std::size_t edge_number = 0;
  for (const auto& edge : edges) {
    const std::string where = "edge " + std::to_string(edge_number++);
    const auto a = lookup(port_index, json_field(edge, "port_a", where), "port");
    const auto b = lookup(port_index, json_field(edge, "port_b", where), "port");
    LinkSpec forward{a, b, {}}, reverse{b, a, {}};
    for (const auto& st : json_array(edge, "states", where)) {
      forward.states.push_back(
          StateSpec{json_number(json_field(st, "capacity_fwd", where), where + ".capacity_fwd"),
                    json_number(json_field(st, "power_fwd", where), where + ".power_fwd")});
      reverse.states.push_back(
          StateSpec{json_number(json_field(st, "capacity_rev", where), where + ".capacity_rev"),
                    json_number(json_field(st, "power_rev", where), where + ".power_rev")});
    }
    spec.links.push_back(std::move(forward));
    spec.links.push_back(std::move(reverse));
  }

  if (declared_states)
    spec.state_count = *declared_states;
  else if (!spec.links.empty())
    spec.state_count = spec.links.front().states.size();
  else
    spec.state_count = 1;

  if (doc.contains("demands")) {
    std::size_t d = 0;
    for (const auto& dem : json_array(doc, "demands", "instance")) {
      const std::string where = "demand " + std::to_string(d++);
      spec.demands.push_back(
          DemandSpec{lookup(router_index, json_field(dem, "source_router", where), "router"),
                     lookup(router_index, json_field(dem, "target_router", where), "router"),
                     json_number(json_field(dem, "volume", where), where + ".volume")});
    }
  }
  return spec;
}

/// Serializes a spec whose links come in consecutive (forward, reverse)
/// pairs, which is the shape instance_spec_from_json produces.
inline nlohmann::json instance_spec_to_json(const InstanceSpec& spec) {
  using nlohmann::json;
  auto name = [](const std::vector<std::string>& names, std::size_t i, char prefix) {
    return names.empty() ? prefix + std::to_string(i) : names.at(i);
  };
  json doc;
  doc["state_count"] = spec.state_count;
  json routers = json::array();
  for (std::size_t r = 0; r < spec.router_power.size(); ++r) {
    json cards = json::array();
    for (std::size_t c = 0; c < spec.card_power.size(); ++c) {
      if (spec.card_router.at(c) != r) continue;
      json ports = json::array();
      for (std::size_t p = 0; p < spec.port_card.size(); ++p)
        if (spec.port_card[p] == c) ports.push_back({{"id", name(spec.port_names, p, 'p')}});
      cards.push_back({{"id", name(spec.card_names, c, 'c')},
                       {"power_W", detail::number_to_json(spec.card_power[c])},
                       {"ports", ports}});
    }
    routers.push_back({{"id", name(spec.router_names, r, 'r')},
                       {"power_T", detail::number_to_json(spec.router_power[r])},
                       {"cards", cards}});
  }
  doc["routers"] = routers;

  if (spec.links.size() % 2 != 0)
    throw SchemaError("links must come in forward/reverse pairs to serialize as edges");
  json edges = json::array();
  for (std::size_t e = 0; e < spec.links.size(); e += 2) {
    const auto& fwd = spec.links[e];
    const auto& rev = spec.links[e + 1];
    if (fwd.source_port != rev.target_port || fwd.target_port != rev.source_port ||
        fwd.states.size() != rev.states.size())
      throw SchemaError("links " + std::to_string(e) + " and " + std::to_string(e + 1) +
                        " are not opposite");
    json states = json::array();
    for (std::size_t k = 0; k < fwd.states.size(); ++k)
      states.push_back({{"capacity_fwd", detail::number_to_json(fwd.states[k].capacity)},
                        {"capacity_rev", detail::number_to_json(rev.states[k].capacity)},
                        {"power_fwd", detail::number_to_json(fwd.states[k].power)},
                        {"power_rev", detail::number_to_json(rev.states[k].power)}});
    edges.push_back({{"port_a", name(spec.port_names, fwd.source_port, 'p')},
                     {"port_b", name(spec.port_names, fwd.target_port, 'p')},
                     {"states", states}});
  }
  doc["edges"] = edges;

  json demands = json::array();
  for (const auto& d : spec.demands)
    demands.push_back({{"source_router", name(spec.router_names, d.source_router, 'r')},
                       {"target_router", name(spec.router_names, d.target_router, 'r')},
                       {"volume", detail::number_to_json(d.volume)}});
  doc["demands"] = demands;
  return doc;
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

inline Instance load_instance(const std::filesystem::path& path) {
  return build_instance(instance_spec_from_json(read_json_file(path)));
}

}  // namespace greenroute
