#include <json.hpp>

#include "tenseq/errors.hpp"
#include "tenseq/graph.hpp"

namespace tenseq {

using nlohmann::json;

std::string write_network_json(const TensorNetwork& net, int indent) {
  json j;
  j["vertices"] = json::array();
  for (int v = 0; v < net.vertex_count(); ++v) {
    const auto& s = net.vertex(v);
    json jv = {{"id", v}, {"role", to_string(s.role)}};
    if (s.rank) jv["rank"] = *s.rank;
    if (!s.label.empty()) jv["label"] = s.label;
    if (!s.qubits.empty()) jv["qubits"] = s.qubits;
    if (s.layer >= 0) jv["layer"] = s.layer;
    if (!s.entries.empty()) {
      jv["legs"] = s.legs;
      json e = json::array();
      for (auto c : s.entries) e.push_back({c.real(), c.imag()});
      jv["entries"] = std::move(e);
    }
    j["vertices"].push_back(std::move(jv));
  }
  j["wires"] = json::array();
  for (const auto& w : net.wires()) j["wires"].push_back({{"id", w.id}, {"u", w.u}, {"v", w.v}, {"dim", w.dim}});
  j["open_legs"] = json::array();
  for (const auto& l : net.open_legs())
    j["open_legs"].push_back({{"vertex", l.vertex}, {"id", l.id}, {"dim", l.dim}});
  if (net.allow_self_loops()) j["allow_self_loops"] = true;
  return j.dump(indent);
}

TensorNetwork read_network_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(0, std::string("network JSON: ") + e.what());
  }
  try {
    TensorNetwork net(j.value("allow_self_loops", false));
    const auto& verts = j.at("vertices");
    for (std::size_t i = 0; i < verts.size(); ++i) {
      const auto& jv = verts[i];
      if (jv.at("id").get<int>() != static_cast<int>(i))
        throw ParseError(0, "vertex ids must be 0..n-1 in order");
      TensorSlot s;
      s.role = role_from_string(jv.value("role", std::string("generic")));
      if (jv.contains("rank")) s.rank = jv.at("rank").get<int>();
      s.label = jv.value("label", std::string());
      if (jv.contains("qubits")) s.qubits = jv.at("qubits").get<std::vector<int>>();
      s.layer = jv.value("layer", -1);
      if (jv.contains("entries")) {
        s.legs = jv.at("legs").get<std::vector<int>>();
        for (const auto& e : jv.at("entries")) s.entries.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
      }
      net.add_vertex(std::move(s));
    }
    for (const auto& jw : j.at("wires"))
      net.add_wire_with_id(jw.at("id").get<int>(), jw.at("u").get<int>(), jw.at("v").get<int>(), jw.value("dim", 2));
    if (j.contains("open_legs"))
      for (const auto& jl : j.at("open_legs"))
        net.add_open_leg_with_id(jl.at("id").get<int>(), jl.at("vertex").get<int>(), jl.value("dim", 2));
    net.validate();
    return net;
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("network JSON: ") + e.what());
  } catch (const ContractViolation& e) {
    throw ParseError(0, std::string("network JSON: ") + e.what());
  }
}

}  // namespace tenseq
