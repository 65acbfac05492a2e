#include <json.hpp>

#include <limits>

#include "sumnet/network.hpp"

namespace sumnet {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + ": missing field '" + key + "'");
  return *it;
}

const std::string& require_string(const json& obj, const char* key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_string()) throw ParseError(path + "/" + key + ": expected a string");
  return v.get_ref<const std::string&>();
}

std::uint64_t require_uint(const json& v, const std::string& path) {
  if (!v.is_number_unsigned()) throw ParseError(path + ": expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

const json& require_array(const json& obj, const char* key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_array()) throw ParseError(path + "/" + key + ": expected an array");
  return v;
}

NodeId lookup(const SumNetwork& net, const std::string& label, const std::string& path) {
  if (auto id = net.find(label)) return *id;
  throw ParseError(path + ": unknown node '" + label + "'");
}

}  // namespace

std::string serialize(const SumNetwork& net) {
  json doc;
  doc["version"] = kFormatVersion;
  if (net.field_hint) doc["field_hint"] = *net.field_hint;

  json nodes = json::array();
  for (const Node& n : net.nodes()) nodes.push_back({{"label", n.label}, {"role", std::string(to_string(n.role))}});
  doc["nodes"] = std::move(nodes);

  json edges = json::array();
  for (const Edge& e : net.edges()) {
    edges.push_back({{"tail", net.node(e.tail).label}, {"head", net.node(e.head).label}, {"par", e.par}});
  }
  doc["edges"] = std::move(edges);

  json in_order = json::object();
  for (std::size_t i = 0; i < net.node_count(); ++i) {
    json list = json::array();
    for (EdgeId e : net.in_edges(NodeId{i})) list.push_back(e.index);
    in_order[net.node(NodeId{i}).label] = std::move(list);
  }
  doc["in_order"] = std::move(in_order);

  json sources = json::array();
  for (NodeId s : net.sources()) sources.push_back(net.node(s).label);
  doc["source_order"] = std::move(sources);

  return doc.dump() + "\n";
}

SumNetwork deserialize(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError("/: expected an object");
  const json& version = require(doc, "version", "");
  if (require_uint(version, "/version") != kFormatVersion) {
    throw ParseError("/version: unsupported version " + version.dump());
  }

  SumNetwork net;
  if (doc.contains("field_hint")) net.field_hint = require_uint(doc["field_hint"], "/field_hint");

  const json& nodes = require_array(doc, "nodes", "");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string path = "/nodes/" + std::to_string(i);
    const std::string& label = require_string(nodes[i], "label", path);
    const std::string& role_text = require_string(nodes[i], "role", path);
    const auto role = parse_role(role_text);
    if (!role) throw ParseError(path + "/role: unknown role '" + role_text + "'");
    if (net.find(label)) throw ParseError(path + "/label: duplicate label '" + label + "'");
    net.add_node(label, *role);
  }

  const json& edges = require_array(doc, "edges", "");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string path = "/edges/" + std::to_string(i);
    const NodeId tail = lookup(net, require_string(edges[i], "tail", path), path + "/tail");
    const NodeId head = lookup(net, require_string(edges[i], "head", path), path + "/head");
    const std::uint64_t par = require_uint(require(edges[i], "par", path), path + "/par");
    if (par == 0 || par > std::numeric_limits<std::uint32_t>::max()) {
      throw ParseError(path + "/par: parallel index out of range");
    }
    if (net.find_edge(tail, head, static_cast<std::uint32_t>(par))) {
      throw ParseError(path + ": duplicate edge");
    }
    net.add_edge(tail, head, static_cast<std::uint32_t>(par));
  }

  const json& in_order = require(doc, "in_order", "");
  if (!in_order.is_object()) throw ParseError("/in_order: expected an object");
  for (const auto& [label, list] : in_order.items()) {
    const std::string path = "/in_order/" + label;
    const NodeId node = lookup(net, label, path);
    if (!list.is_array()) throw ParseError(path + ": expected an array");
    std::vector<EdgeId> order;
    for (std::size_t j = 0; j < list.size(); ++j) {
      const std::uint64_t idx = require_uint(list[j], path + "/" + std::to_string(j));
      if (idx >= net.edge_count()) throw ParseError(path + "/" + std::to_string(j) + ": edge index out of range");
      order.push_back(EdgeId{idx});
    }
    try {
      net.set_in_order(node, std::move(order));
    } catch (const std::invalid_argument& e) {
      throw ParseError(path + ": " + e.what());
    }
  }

  const json& sources = require_array(doc, "source_order", "");
  std::vector<NodeId> order;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const std::string path = "/source_order/" + std::to_string(i);
    if (!sources[i].is_string()) throw ParseError(path + ": expected a string");
    order.push_back(lookup(net, sources[i].get<std::string>(), path));
  }
  try {
    net.set_source_order(std::move(order));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("/source_order: ") + e.what());
  }
  return net;
}

}  // namespace sumnet
