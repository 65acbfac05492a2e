// Sum-network data model.
//
// Edge direction convention: an edge runs from its `tail` (origin) to its
// `head` (destination). In-edge lists are stored explicitly per node because
// local encoding and decoding matrices are positional over them.
#ifndef SUMNET_NETWORK_HPP
#define SUMNET_NETWORK_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace sumnet {

enum class Role { Source, Intermediate, Terminal };

std::string_view to_string(Role role);
std::optional<Role> parse_role(std::string_view text);

struct NodeId {
  std::size_t index = 0;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

struct EdgeId {
  std::size_t index = 0;
  friend auto operator<=>(const EdgeId&, const EdgeId&) = default;
};

struct Node {
  std::string label;
  Role role;
};

/// `par` is the 1-based index among the edges sharing (tail, head).
struct Edge {
  NodeId tail;
  NodeId head;
  std::uint32_t par = 1;
};

class CycleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SumNetwork {
 public:
  /// Throws std::invalid_argument on a duplicate label. Sources are appended to
  /// the source order as they are added.
  NodeId add_node(std::string label, Role role);
  /// Appends the edge to the in-edge list of `head`. Without `par`, the next
  /// free parallel index for (tail, head) is used.
  EdgeId add_edge(NodeId tail, NodeId head, std::optional<std::uint32_t> par = std::nullopt);

  /// Replaces the in-edge order of a node; must be a permutation of its in-edges.
  void set_in_order(NodeId node, std::vector<EdgeId> order);
  /// Replaces the source order; must be a permutation of the source nodes.
  void set_source_order(std::vector<NodeId> order);

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Node& node(NodeId id) const { return nodes_.at(id.index); }
  const Edge& edge(EdgeId id) const { return edges_.at(id.index); }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::span<const EdgeId> in_edges(NodeId id) const { return in_.at(id.index); }
  std::span<const EdgeId> out_edges(NodeId id) const { return out_.at(id.index); }

  /// Global source order; X is the concatenation of per-source blocks in this order.
  const std::vector<NodeId>& sources() const noexcept { return source_order_; }
  /// Position of a source within sources().
  std::size_t source_position(NodeId source) const;
  std::vector<NodeId> terminals() const;

  std::optional<NodeId> find(std::string_view label) const;
  /// Throws std::out_of_range for unknown labels.
  NodeId at(std::string_view label) const;
  std::optional<EdgeId> find_edge(NodeId tail, NodeId head, std::uint32_t par = 1) const;

  /// "tail->head#par"
  std::string edge_label(EdgeId id) const;

  std::optional<std::uint64_t> field_hint;

  friend bool operator==(const SumNetwork& a, const SumNetwork& b);

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> in_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<NodeId> source_order_;
  std::vector<std::size_t> source_pos_;  // per node; npos for non-sources
  std::unordered_map<std::string, NodeId> by_label_;
  std::map<std::tuple<std::size_t, std::size_t, std::uint32_t>, EdgeId> by_endpoints_;
};

/// Structural violations; empty when the network is well formed.
std::vector<std::string> validate(const SumNetwork& net);

/// Every edge appears after all in-edges of its tail node; ties go to the
/// smallest edge id. Throws CycleError if the network is cyclic.
std::vector<EdgeId> topo_order(const SumNetwork& net);

/// Canonical JSON (sorted keys, newline-terminated).
std::string serialize(const SumNetwork& net);
/// Throws ParseError naming the offending location.
SumNetwork deserialize(std::string_view text);

/// Graphviz rendering: sources as boxes, terminals as double circles,
/// intermediate-to-intermediate (middle) edges highlighted.
std::string to_dot(const SumNetwork& net);

}  // namespace sumnet

#endif  // SUMNET_NETWORK_HPP
