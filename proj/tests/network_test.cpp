#include <doctest.h>

#include <algorithm>
#include <random>

#include "sumnet/constructions.hpp"
#include "sumnet/network.hpp"

using namespace sumnet;

namespace {

SumNetwork path_net() {
  SumNetwork net;
  const NodeId s = net.add_node("s", Role::Source);
  const NodeId u = net.add_node("u", Role::Intermediate);
  const NodeId t = net.add_node("t", Role::Terminal);
  net.add_edge(u, t);
  net.add_edge(s, u);
  return net;
}

bool contains(const std::vector<std::string>& v, const std::string& needle) {
  return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

// Edge e must come after every in-edge of its tail.
bool respects_precedence(const SumNetwork& net, const std::vector<EdgeId>& order) {
  std::vector<std::size_t> pos(net.edge_count());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i].index] = i;
  for (std::size_t i = 0; i < net.edge_count(); ++i)
    for (EdgeId in : net.in_edges(net.edge(EdgeId{i}).tail))
      if (pos[in.index] >= pos[i]) return false;
  return true;
}

// A random layered DAG with parallel edges, built from a seed.
SumNetwork random_dag(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SumNetwork net;
  std::vector<NodeId> sources, mids, terms;
  const int ns = 1 + static_cast<int>(rng() % 4), nm = static_cast<int>(rng() % 6), nt = 1 + static_cast<int>(rng() % 4);
  for (int i = 0; i < ns; ++i) sources.push_back(net.add_node("s" + std::to_string(i), Role::Source));
  for (int i = 0; i < nm; ++i) mids.push_back(net.add_node("m" + std::to_string(i), Role::Intermediate));
  for (int i = 0; i < nt; ++i) terms.push_back(net.add_node("t" + std::to_string(i), Role::Terminal));
  const int edges = 1 + static_cast<int>(rng() % 25);
  for (int e = 0; e < edges; ++e) {
    // tails: sources or intermediates; heads: later intermediates or terminals
    const std::size_t tail_pick = rng() % (sources.size() + mids.size());
    const bool tail_is_mid = tail_pick >= sources.size();
    const std::size_t tail_mid = tail_pick - sources.size();
    const NodeId tail = tail_is_mid ? mids[tail_mid] : sources[tail_pick];
    std::vector<NodeId> heads(terms);
    for (std::size_t j = tail_is_mid ? tail_mid + 1 : 0; j < mids.size(); ++j) heads.push_back(mids[j]);
    net.add_edge(tail, heads[rng() % heads.size()]);
  }
  return net;
}

}  // namespace

TEST_CASE("validate accepts built networks") {
  CHECK(validate(build_n1({2, 2})).empty());
  CHECK(validate(build_n2({3, 2})).empty());
  CHECK(validate(build_bottleneck2()).empty());
  CHECK(validate(path_net()).empty());
}

TEST_CASE("validate reports structural violations") {
  SumNetwork net;
  const NodeId s = net.add_node("s", Role::Source);
  const NodeId a = net.add_node("a", Role::Intermediate);
  const NodeId b = net.add_node("b", Role::Intermediate);
  const NodeId t = net.add_node("t", Role::Terminal);
  net.add_edge(a, s);
  net.add_edge(a, b);
  net.add_edge(b, a);
  net.add_edge(t, b);
  const auto problems = validate(net);
  CHECK(contains(problems, "source has in-edge"));
  CHECK(contains(problems, "terminal has out-edge"));
  CHECK(contains(problems, "cycle detected"));
}

TEST_CASE("topo_order examples") {
  SumNetwork single;
  single.add_edge(single.add_node("s", Role::Source), single.add_node("t", Role::Terminal));
  CHECK(topo_order(single) == std::vector<EdgeId>{EdgeId{0}});

  const SumNetwork path = path_net();
  CHECK(topo_order(path) == std::vector<EdgeId>{EdgeId{1}, EdgeId{0}});

  const SumNetwork n1 = build_n1({2, 2});
  const auto order = topo_order(n1);
  CHECK(respects_precedence(n1, order));
  std::vector<std::size_t> pos(n1.edge_count());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i].index] = i;
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 3; ++j) {
      const EdgeId mid = middle_edge(n1, i, j);
      for (EdgeId in : n1.in_edges(n1.at(labels::u(i, j)))) CHECK(pos[in.index] < pos[mid.index]);
      for (EdgeId out : n1.out_edges(n1.at(labels::v(i, j)))) CHECK(pos[mid.index] < pos[out.index]);
    }
}

TEST_CASE("topo_order throws on cycles") {
  SumNetwork net;
  const NodeId a = net.add_node("a", Role::Intermediate);
  const NodeId b = net.add_node("b", Role::Intermediate);
  net.add_edge(a, b);
  net.add_edge(b, a);
  CHECK_THROWS_AS(topo_order(net), CycleError);
}

TEST_CASE("topo_order is a deterministic permutation respecting precedence on random DAGs") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const SumNetwork net = random_dag(seed);
    const auto order = topo_order(net);
    REQUIRE(order.size() == net.edge_count());
    std::vector<EdgeId> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) CHECK(sorted[i] == EdgeId{i});
    CHECK(respects_precedence(net, order));
    CHECK(topo_order(net) == order);
  }
}

TEST_CASE("parallel edges get consecutive indices and distinct labels") {
  SumNetwork net;
  const NodeId s = net.add_node("s", Role::Source);
  const NodeId t = net.add_node("t", Role::Terminal);
  const EdgeId e1 = net.add_edge(s, t);
  const EdgeId e2 = net.add_edge(s, t);
  CHECK(net.edge(e1).par == 1);
  CHECK(net.edge(e2).par == 2);
  CHECK(net.edge_label(e1) == "s->t#1");
  CHECK(net.edge_label(e2) == "s->t#2");
  CHECK(net.find_edge(s, t, 2) == e2);
  CHECK_THROWS(net.add_edge(s, t, 2));
}

TEST_CASE("duplicate labels are rejected") {
  SumNetwork net;
  net.add_node("x", Role::Source);
  CHECK_THROWS(net.add_node("x", Role::Terminal));
}

TEST_CASE("serialization round trips") {
  for (const SumNetwork& net : {build_n1({2, 2}), build_n2({2, 3}), build_bottleneck2(), k_copy_merge(build_n1({2, 2}), 2)}) {
    const std::string text = serialize(net);
    const SumNetwork back = deserialize(text);
    CHECK(back == net);
    CHECK(serialize(back) == text);
    CHECK(text.back() == '\n');
  }
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    SumNetwork net = random_dag(seed);
    if (seed % 2) net.field_hint = 7;
    const std::string text = serialize(net);
    CHECK(serialize(deserialize(text)) == text);
    CHECK(deserialize(text) == net);
  }
}

TEST_CASE("custom in-edge and source orders survive serialization") {
  SumNetwork net;
  const NodeId s1 = net.add_node("s1", Role::Source);
  const NodeId s2 = net.add_node("s2", Role::Source);
  const NodeId t = net.add_node("t", Role::Terminal);
  const EdgeId a = net.add_edge(s1, t);
  const EdgeId b = net.add_edge(s2, t);
  net.set_in_order(t, {b, a});
  net.set_source_order({s2, s1});
  const SumNetwork back = deserialize(serialize(net));
  CHECK(back.in_edges(back.at("t"))[0] == b);
  CHECK(back.sources().front() == back.at("s2"));
  CHECK_THROWS(net.set_in_order(t, {a, a}));
}

TEST_CASE("deserialize reports malformed input with a location") {
  const std::string good = serialize(path_net());
  auto message = [](const std::string& text) {
    try {
      (void)deserialize(text);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message(good.substr(0, good.size() / 2)).find("byte") != std::string::npos);
  std::string bad_role = good;
  bad_role.replace(bad_role.find("\"intermediate\""), 14, "\"router\"");
  const std::string msg = message(bad_role);
  CHECK(msg.find("role") != std::string::npos);
  CHECK(msg.find("router") != std::string::npos);
  CHECK(message("{}").find("no error") == std::string::npos);
  CHECK(message("[]").find("no error") == std::string::npos);
}

TEST_CASE("DOT export") {
  const std::string empty = to_dot(SumNetwork{});
  CHECK(empty == "digraph {\n}\n");

  SumNetwork single;
  single.add_edge(single.add_node("s", Role::Source), single.add_node("t", Role::Terminal));
  const std::string one = to_dot(single);
  CHECK(std::count(one.begin(), one.end(), '>') == 1);
  CHECK(one.find("\"s\" [shape=box]") != std::string::npos);
  CHECK(one.find("\"t\" [shape=doublecircle]") != std::string::npos);

  const std::string n1 = to_dot(build_n1({2, 2}));
  std::size_t highlighted = 0;
  for (std::size_t pos = n1.find("color=red"); pos != std::string::npos; pos = n1.find("color=red", pos + 1)) ++highlighted;
  CHECK(highlighted == 6);
}
