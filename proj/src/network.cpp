#include "sumnet/network.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <sstream>

namespace sumnet {

namespace {
constexpr std::size_t kNotSource = std::numeric_limits<std::size_t>::max();
}

std::string_view to_string(Role role) {
  switch (role) {
    case Role::Source:
      return "source";
    case Role::Intermediate:
      return "intermediate";
    case Role::Terminal:
      return "terminal";
  }
  return "?";
}

std::optional<Role> parse_role(std::string_view text) {
  if (text == "source") return Role::Source;
  if (text == "intermediate") return Role::Intermediate;
  if (text == "terminal") return Role::Terminal;
  return std::nullopt;
}

NodeId SumNetwork::add_node(std::string label, Role role) {
  if (by_label_.contains(label)) throw std::invalid_argument("duplicate node label '" + label + "'");
  const NodeId id{nodes_.size()};
  by_label_.emplace(label, id);
  nodes_.push_back(Node{std::move(label), role});
  in_.emplace_back();
  out_.emplace_back();
  if (role == Role::Source) {
    source_pos_.push_back(source_order_.size());
    source_order_.push_back(id);
  } else {
    source_pos_.push_back(kNotSource);
  }
  return id;
}

EdgeId SumNetwork::add_edge(NodeId tail, NodeId head, std::optional<std::uint32_t> par) {
  if (tail.index >= nodes_.size() || head.index >= nodes_.size()) {
    throw std::out_of_range("edge endpoint out of range");
  }
  std::uint32_t index = 1;
  if (par) {
    index = *par;
    if (index == 0) throw std::invalid_argument("parallel index must be >= 1");
  } else {
    while (by_endpoints_.contains({tail.index, head.index, index})) ++index;
  }
  const auto key = std::make_tuple(tail.index, head.index, index);
  if (by_endpoints_.contains(key)) {
    throw std::invalid_argument("duplicate edge " + nodes_[tail.index].label + "->" + nodes_[head.index].label +
                                "#" + std::to_string(index));
  }
  const EdgeId id{edges_.size()};
  edges_.push_back(Edge{tail, head, index});
  by_endpoints_.emplace(key, id);
  in_[head.index].push_back(id);
  out_[tail.index].push_back(id);
  return id;
}

void SumNetwork::set_in_order(NodeId node, std::vector<EdgeId> order) {
  std::vector<EdgeId> want = in_.at(node.index);
  std::vector<EdgeId> got = order;
  std::sort(want.begin(), want.end());
  std::sort(got.begin(), got.end());
  if (want != got) {
    throw std::invalid_argument("in-edge order of '" + nodes_[node.index].label +
                                "' is not a permutation of its in-edges");
  }
  in_[node.index] = std::move(order);
}

void SumNetwork::set_source_order(std::vector<NodeId> order) {
  std::vector<NodeId> want = source_order_;
  std::vector<NodeId> got = order;
  std::sort(want.begin(), want.end());
  std::sort(got.begin(), got.end());
  if (want != got) throw std::invalid_argument("source order is not a permutation of the sources");
  source_order_ = std::move(order);
  for (std::size_t i = 0; i < source_order_.size(); ++i) source_pos_[source_order_[i].index] = i;
}

std::size_t SumNetwork::source_position(NodeId source) const {
  const std::size_t pos = source_pos_.at(source.index);
  if (pos == kNotSource) throw std::invalid_argument("'" + nodes_[source.index].label + "' is not a source");
  return pos;
}

std::vector<NodeId> SumNetwork::terminals() const {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].role == Role::Terminal) out.push_back(NodeId{i});
  }
  return out;
}

std::optional<NodeId> SumNetwork::find(std::string_view label) const {
  const auto it = by_label_.find(std::string(label));
  if (it == by_label_.end()) return std::nullopt;
  return it->second;
}

NodeId SumNetwork::at(std::string_view label) const {
  if (auto id = find(label)) return *id;
  throw std::out_of_range("unknown node label '" + std::string(label) + "'");
}

std::optional<EdgeId> SumNetwork::find_edge(NodeId tail, NodeId head, std::uint32_t par) const {
  const auto it = by_endpoints_.find({tail.index, head.index, par});
  if (it == by_endpoints_.end()) return std::nullopt;
  return it->second;
}

std::string SumNetwork::edge_label(EdgeId id) const {
  const Edge& e = edges_.at(id.index);
  return nodes_[e.tail.index].label + "->" + nodes_[e.head.index].label + "#" + std::to_string(e.par);
}

bool operator==(const SumNetwork& a, const SumNetwork& b) {
  if (a.nodes_.size() != b.nodes_.size() || a.edges_.size() != b.edges_.size()) return false;
  for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
    if (a.nodes_[i].label != b.nodes_[i].label || a.nodes_[i].role != b.nodes_[i].role) return false;
  }
  for (std::size_t i = 0; i < a.edges_.size(); ++i) {
    const Edge& x = a.edges_[i];
    const Edge& y = b.edges_[i];
    if (x.tail != y.tail || x.head != y.head || x.par != y.par) return false;
  }
  return a.in_ == b.in_ && a.source_order_ == b.source_order_ && a.field_hint == b.field_hint;
}

std::vector<std::string> validate(const SumNetwork& net) {
  std::vector<std::string> problems;
  for (std::size_t i = 0; i < net.node_count(); ++i) {
    const NodeId id{i};
    const Node& n = net.node(id);
    if (n.role == Role::Source && !net.in_edges(id).empty()) {
      problems.push_back("source has in-edge: " + n.label);
    }
    if (n.role == Role::Terminal && !net.out_edges(id).empty()) {
      problems.push_back("terminal has out-edge: " + n.label);
    }
  }
  for (std::size_t i = 0; i < net.edge_count(); ++i) {
    const Edge& e = net.edge(EdgeId{i});
    if (e.tail == e.head) problems.push_back("self-loop on " + net.node(e.tail).label);
  }
  try {
    (void)topo_order(net);
  } catch (const CycleError&) {
    problems.emplace_back("cycle detected");
  }
  return problems;
}

std::vector<EdgeId> topo_order(const SumNetwork& net) {
  // Kahn's algorithm on edges: an edge becomes ready once every in-edge of
  // its tail has been emitted.
  std::vector<std::size_t> pending(net.node_count());
  for (std::size_t i = 0; i < net.node_count(); ++i) pending[i] = net.in_edges(NodeId{i}).size();

  std::priority_queue<EdgeId, std::vector<EdgeId>, std::greater<>> ready;
  for (std::size_t i = 0; i < net.node_count(); ++i) {
    if (pending[i] == 0) {
      for (EdgeId e : net.out_edges(NodeId{i})) ready.push(e);
    }
  }
  std::vector<EdgeId> order;
  order.reserve(net.edge_count());
  while (!ready.empty()) {
    const EdgeId e = ready.top();
    ready.pop();
    order.push_back(e);
    const NodeId head = net.edge(e).head;
    if (--pending[head.index] == 0) {
      for (EdgeId next : net.out_edges(head)) ready.push(next);
    }
  }
  if (order.size() != net.edge_count()) throw CycleError("cycle detected");
  return order;
}

std::string to_dot(const SumNetwork& net) {
  std::ostringstream os;
  os << "digraph {\n";
  for (const Node& n : net.nodes()) {
    os << "  \"" << n.label << '"';
    if (n.role == Role::Source) os << " [shape=box]";
    if (n.role == Role::Terminal) os << " [shape=doublecircle]";
    os << ";\n";
  }
  for (std::size_t i = 0; i < net.edge_count(); ++i) {
    const Edge& e = net.edge(EdgeId{i});
    const Node& tail = net.node(e.tail);
    const Node& head = net.node(e.head);
    os << "  \"" << tail.label << "\" -> \"" << head.label << '"';
    if (tail.role == Role::Intermediate && head.role == Role::Intermediate) {
      os << " [color=red, penwidth=2.5]";
    }
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace sumnet
