#include "sumnet/constructions.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "sumnet/analysis.hpp"
#include "sumnet/galois.hpp"

namespace sumnet {

std::string_view to_string(Family family) {
  switch (family) {
    case Family::N1:
      return "n1";
    case Family::N2:
      return "n2";
    case Family::Bottleneck2:
      return "bottleneck2";
  }
  return "?";
}

std::optional<Family> parse_family(std::string_view text) {
  if (text == "n1") return Family::N1;
  if (text == "n2") return Family::N2;
  if (text == "bottleneck2") return Family::Bottleneck2;
  return std::nullopt;
}

std::string_view to_string(PrimeMode mode) { return mode == PrimeMode::InSet ? "in-set" : "not-in-set"; }

std::optional<PrimeMode> parse_prime_mode(std::string_view text) {
  if (text == "in-set") return PrimeMode::InSet;
  if (text == "not-in-set") return PrimeMode::NotInSet;
  return std::nullopt;
}

namespace labels {
std::string source(int i) { return "s_" + std::to_string(i); }
std::string source(int i, int j) { return source(i) + "_" + std::to_string(j); }
std::string source(int i, int x, int j) { return source(i, x) + "_" + std::to_string(j); }
std::string terminal(int i) { return "t_" + std::to_string(i); }
std::string terminal(int i, int j) { return terminal(i) + "_" + std::to_string(j); }
std::string terminal(int i, int x, int j) { return terminal(i, x) + "_" + std::to_string(j); }
std::string terminal_primed(int i, int x) { return "tp_" + std::to_string(i) + "_" + std::to_string(x); }
std::string u(int i, int j) { return "u_" + std::to_string(i) + "_" + std::to_string(j); }
std::string v(int i, int j) { return "v_" + std::to_string(i) + "_" + std::to_string(j); }
std::string copy(std::string_view label, int c) { return std::string(label) + "_c" + std::to_string(c); }
}  // namespace labels

namespace {

void check_params(int m, std::int64_t q) {
  if (m < 1) throw std::invalid_argument("m must be >= 1, got " + std::to_string(m));
  if (q < 2) throw std::invalid_argument("q must be >= 2, got " + std::to_string(q));
}

// Sources feeding the tail of each middle edge, indexed [i][j] (1-based).
using ReachTable = std::vector<std::vector<std::vector<bool>>>;

ReachTable reach_table(const SumNetwork& net, int m, int width) {
  ReachTable table(static_cast<std::size_t>(m + 1),
                   std::vector<std::vector<bool>>(static_cast<std::size_t>(width + 1)));
  for (int i = 1; i <= m; ++i) {
    for (int j = 1; j <= width; ++j) {
      std::vector<bool> mark(net.node_count(), false);
      for (EdgeId e : net.in_edges(net.at(labels::u(i, j)))) mark[net.edge(e).tail.index] = true;
      table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = std::move(mark);
    }
  }
  return table;
}

// Direct edge from every source not covered by any of the given middle edges.
void add_direct_edges(SumNetwork& net, NodeId terminal, const ReachTable& reach,
                      const std::vector<std::pair<int, int>>& taps) {
  for (NodeId s : std::vector<NodeId>(net.sources())) {
    const bool covered = std::any_of(taps.begin(), taps.end(), [&](const auto& ij) {
      return reach[static_cast<std::size_t>(ij.first)][static_cast<std::size_t>(ij.second)][s.index];
    });
    if (!covered) net.add_edge(s, terminal);
  }
}

void add_layer_nodes(SumNetwork& net, int m, int width) {
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= width; ++j) net.add_node(labels::u(i, j), Role::Intermediate);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= width; ++j) net.add_node(labels::v(i, j), Role::Intermediate);
}

}  // namespace

SumNetwork build_n1(const N1Params& params) {
  check_params(params.m, params.q);
  const int m = params.m;
  const int w = static_cast<int>(params.q + 1);
  SumNetwork net;
  for (int i = 1; i <= m; ++i) net.add_node(labels::source(i), Role::Source);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= w; ++j) net.add_node(labels::source(i, j), Role::Source);
  for (int i = 1; i < m; ++i)
    for (int x = i + 1; x <= m; ++x)
      for (int j = 1; j <= w; ++j) net.add_node(labels::source(i, x, j), Role::Source);
  add_layer_nodes(net, m, w);
  for (int i = 1; i <= m; ++i) net.add_node(labels::terminal(i), Role::Terminal);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= w; ++j) net.add_node(labels::terminal(i, j), Role::Terminal);
  for (int i = 1; i < m; ++i)
    for (int x = i + 1; x <= m; ++x)
      for (int j = 1; j <= w; ++j) net.add_node(labels::terminal(i, x, j), Role::Terminal);

  auto edge = [&net](const std::string& a, const std::string& b) { net.add_edge(net.at(a), net.at(b)); };

  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= w; ++j) edge(labels::u(i, j), labels::v(i, j));
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= w; ++j) edge(labels::source(i), labels::u(i, j));
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= w; ++j) edge(labels::source(i, j), labels::u(i, j));
  for (int i = 1; i < m; ++i)
    for (int x = i + 1; x <= m; ++x)
      for (int j = 1; j <= w; ++j) {
        edge(labels::source(i, x, j), labels::u(i, j));
        edge(labels::source(i, x, j), labels::u(x, j));
      }
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= w; ++j) edge(labels::v(i, j), labels::terminal(i));
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= w; ++j) edge(labels::v(i, j), labels::terminal(i, j));
  for (int i = 1; i < m; ++i)
    for (int x = i + 1; x <= m; ++x)
      for (int j = 1; j <= w; ++j) {
        edge(labels::v(i, j), labels::terminal(i, x, j));
        edge(labels::v(x, j), labels::terminal(i, x, j));
      }

  const ReachTable reach = reach_table(net, m, w);
  for (int i = 1; i <= m; ++i) {
    std::vector<std::pair<int, int>> taps;
    for (int j = 1; j <= w; ++j) taps.emplace_back(i, j);
    add_direct_edges(net, net.at(labels::terminal(i)), reach, taps);
  }
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= w; ++j) add_direct_edges(net, net.at(labels::terminal(i, j)), reach, {{i, j}});
  for (int i = 1; i < m; ++i)
    for (int x = i + 1; x <= m; ++x)
      for (int j = 1; j <= w; ++j)
        add_direct_edges(net, net.at(labels::terminal(i, x, j)), reach, {{i, j}, {x, j}});
  return net;
}

SumNetwork build_n2(const N2Params& params) {
  check_params(params.m, params.q);
  const int m = params.m;
  const int w = static_cast<int>(params.q + 1);
  SumNetwork net;
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= w; ++j) net.add_node(labels::source(i, j), Role::Source);
  for (int i = 1; i < m; ++i)
    for (int x = i + 1; x <= m; ++x)
      for (int j = 1; j <= w; ++j) net.add_node(labels::source(i, x, j), Role::Source);
  add_layer_nodes(net, m, w);
  for (int i = 1; i <= m; ++i) net.add_node(labels::terminal(i), Role::Terminal);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= w; ++j) net.add_node(labels::terminal(i, j), Role::Terminal);
  for (int i = 1; i < m; ++i)
    for (int x = i + 1; x <= m; ++x)
      for (int j = 1; j <= w; ++j) net.add_node(labels::terminal(i, x, j), Role::Terminal);
  for (int i = 1; i < m; ++i)
    for (int x = i + 1; x <= m; ++x) net.add_node(labels::terminal_primed(i, x), Role::Terminal);

  auto edge = [&net](const std::string& a, const std::string& b) { net.add_edge(net.at(a), net.at(b)); };

  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= w; ++j) edge(labels::u(i, j), labels::v(i, j));
  // s_i_j feeds every middle edge of group i except e_i_j.
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= w; ++j)
      for (int x = 1; x <= w; ++x)
        if (x != j) edge(labels::source(i, j), labels::u(i, x));
  // s_i_x_j feeds every middle edge of groups i and x except e_i_j and e_x_j.
  for (int i = 1; i < m; ++i)
    for (int x = i + 1; x <= m; ++x)
      for (int j = 1; j <= w; ++j)
        for (int y = 1; y <= w; ++y)
          if (y != j) {
            edge(labels::source(i, x, j), labels::u(i, y));
            edge(labels::source(i, x, j), labels::u(x, y));
          }
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= w; ++j) edge(labels::v(i, j), labels::terminal(i));
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= w; ++j) edge(labels::v(i, j), labels::terminal(i, j));
  for (int i = 1; i < m; ++i)
    for (int x = i + 1; x <= m; ++x)
      for (int j = 1; j <= w; ++j) {
        edge(labels::v(i, j), labels::terminal(i, x, j));
        edge(labels::v(x, j), labels::terminal(i, x, j));
      }
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= w; ++j) {
      for (int x = 1; x < i; ++x) edge(labels::v(i, j), labels::terminal_primed(x, i));
      for (int y = i + 1; y <= m; ++y) edge(labels::v(i, j), labels::terminal_primed(i, y));
    }

  const ReachTable reach = reach_table(net, m, w);
  for (int i = 1; i <= m; ++i) {
    std::vector<std::pair<int, int>> taps;
    for (int j = 1; j <= w; ++j) taps.emplace_back(i, j);
    add_direct_edges(net, net.at(labels::terminal(i)), reach, taps);
  }
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= w; ++j) add_direct_edges(net, net.at(labels::terminal(i, j)), reach, {{i, j}});
  for (int i = 1; i < m; ++i)
    for (int x = i + 1; x <= m; ++x)
      for (int j = 1; j <= w; ++j)
        add_direct_edges(net, net.at(labels::terminal(i, x, j)), reach, {{i, j}, {x, j}});
  for (int i = 1; i < m; ++i)
    for (int x = i + 1; x <= m; ++x) {
      std::vector<std::pair<int, int>> taps;
      for (int j = 1; j <= w; ++j) {
        taps.emplace_back(i, j);
        taps.emplace_back(x, j);
      }
      add_direct_edges(net, net.at(labels::terminal_primed(i, x)), reach, taps);
    }
  return net;
}

SumNetwork build_bottleneck2() {
  SumNetwork net;
  const NodeId s1 = net.add_node(labels::source(1), Role::Source);
  const NodeId s2 = net.add_node(labels::source(2), Role::Source);
  const NodeId u = net.add_node(labels::u(1, 1), Role::Intermediate);
  const NodeId v = net.add_node(labels::v(1, 1), Role::Intermediate);
  const NodeId t1 = net.add_node(labels::terminal(1), Role::Terminal);
  const NodeId t2 = net.add_node(labels::terminal(2), Role::Terminal);
  net.add_edge(u, v);
  net.add_edge(s1, u);
  net.add_edge(s2, u);
  net.add_edge(v, t1);
  net.add_edge(v, t2);
  return net;
}

SumNetwork k_copy_merge(const SumNetwork& base, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1, got " + std::to_string(k));
  if (k == 1) return base;
  const std::size_t nodes = base.node_count();
  // image[c][n] = node of copy c standing for base node n.
  std::vector<std::vector<NodeId>> image(static_cast<std::size_t>(k), std::vector<NodeId>(nodes));
  SumNetwork merged;
  merged.field_hint = base.field_hint;
  for (std::size_t n = 0; n < nodes; ++n) {
    const Node& node = base.node(NodeId{n});
    if (node.role == Role::Intermediate) continue;
    const NodeId id = merged.add_node(node.label, node.role);
    for (auto& per_copy : image) per_copy[n] = id;
  }
  for (int c = 0; c < k; ++c) {
    for (std::size_t n = 0; n < nodes; ++n) {
      const Node& node = base.node(NodeId{n});
      if (node.role != Role::Intermediate) continue;
      image[static_cast<std::size_t>(c)][n] = merged.add_node(labels::copy(node.label, c + 1), node.role);
    }
  }
  const std::size_t edges = base.edge_count();
  for (int c = 0; c < k; ++c) {
    const auto& map = image[static_cast<std::size_t>(c)];
    for (std::size_t e = 0; e < edges; ++e) {
      const Edge& edge = base.edge(EdgeId{e});
      merged.add_edge(map[edge.tail.index], map[edge.head.index]);
    }
  }
  auto copy_of = [edges](std::size_t c, EdgeId e) { return EdgeId{c * edges + e.index}; };
  for (std::size_t n = 0; n < nodes; ++n) {
    const auto base_in = base.in_edges(NodeId{n});
    if (base.node(NodeId{n}).role != Role::Intermediate) {
      std::vector<EdgeId> order;
      for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c)
        for (EdgeId e : base_in) order.push_back(copy_of(c, e));
      merged.set_in_order(image[0][n], std::move(order));
    } else {
      for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
        std::vector<EdgeId> order;
        for (EdgeId e : base_in) order.push_back(copy_of(c, e));
        merged.set_in_order(image[c][n], std::move(order));
      }
    }
  }
  std::vector<NodeId> sources;
  for (NodeId s : base.sources()) sources.push_back(image[0][s.index]);
  merged.set_source_order(std::move(sources));
  return merged;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

BuiltNetwork build_family(Family family, int m, std::int64_t q, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1, got " + std::to_string(k));
  BuiltNetwork out;
  Manifest& mf = out.manifest;
  mf.family = family;
  mf.k = k;
  mf.capacity = capacity(family, m, q, k);
  SumNetwork base;
  switch (family) {
    case Family::N1:
      base = build_n1({m, q});
      mf.primes = prime_factors(static_cast<std::uint64_t>(q));
      mf.mode = PrimeMode::InSet;
      break;
    case Family::N2:
      base = build_n2({m, q});
      mf.primes = prime_factors(static_cast<std::uint64_t>(q));
      mf.mode = PrimeMode::NotInSet;
      break;
    case Family::Bottleneck2:
      base = build_bottleneck2();
      break;
  }
  if (family != Family::Bottleneck2) {
    mf.m = m;
    mf.q = q;
  }
  out.net = k_copy_merge(base, k);
  return out;
}

BuiltNetwork build_for_rate(const RateTarget& target) {
  if (target.k < 1 || target.n < 1) throw std::invalid_argument("rate k/n needs positive k and n");
  if (target.primes.empty()) throw std::invalid_argument("prime set is empty");
  std::set<std::uint64_t> distinct(target.primes.begin(), target.primes.end());
  if (distinct.size() != target.primes.size()) throw std::invalid_argument("primes must be distinct");
  std::uint64_t q = 1;
  for (std::uint64_t p : distinct) {
    if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
    if (p >= PrimeField::kMaxModulus || q >= PrimeField::kMaxModulus / p) {
      throw std::overflow_error("product of primes exceeds the field ceiling 2^31");
    }
    q *= p;
  }
  const std::int64_t m = 2 * target.n - 1;
  if (m > std::numeric_limits<int>::max() || target.k > std::numeric_limits<int>::max()) {
    throw std::overflow_error("rate parameters too large");
  }
  const Family family = target.mode == PrimeMode::InSet ? Family::N1 : Family::N2;
  BuiltNetwork out = build_family(family, static_cast<int>(m), static_cast<std::int64_t>(q), static_cast<int>(target.k));
  out.manifest.primes.assign(distinct.begin(), distinct.end());
  out.manifest.mode = target.mode;
  return out;
}

std::string manifest_to_json(const Manifest& mf) {
  nlohmann::json doc;
  doc["family"] = std::string(to_string(mf.family));
  doc["m"] = mf.m;
  doc["q"] = mf.q;
  doc["k"] = mf.k;
  doc["capacity_num"] = mf.capacity.numerator();
  doc["capacity_den"] = mf.capacity.denominator();
  doc["primes"] = mf.primes;
  doc["mode"] = mf.mode ? nlohmann::json(std::string(to_string(*mf.mode))) : nlohmann::json(nullptr);
  return doc.dump(2) + "\n";
}

Manifest manifest_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("manifest: parse error at byte " + std::to_string(e.byte));
  }
  Manifest mf;
  try {
    const auto family = parse_family(doc.at("family").get<std::string>());
    if (!family) throw ParseError("manifest/family: unknown family");
    mf.family = *family;
    mf.m = doc.at("m").get<int>();
    mf.q = doc.at("q").get<std::int64_t>();
    mf.k = doc.at("k").get<int>();
    mf.capacity = Rational(doc.at("capacity_num").get<std::int64_t>(), doc.at("capacity_den").get<std::int64_t>());
    mf.primes = doc.at("primes").get<std::vector<std::uint64_t>>();
    if (!doc.at("mode").is_null()) {
      mf.mode = parse_prime_mode(doc.at("mode").get<std::string>());
      if (!mf.mode) throw ParseError("manifest/mode: unknown mode");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  } catch (const boost::bad_rational&) {
    throw ParseError("manifest: zero capacity denominator");
  }
  return mf;
}

EdgeId middle_edge(const SumNetwork& net, int i, int j, std::optional<int> copy) {
  std::string u = labels::u(i, j);
  std::string v = labels::v(i, j);
  if (copy) {
    u = labels::copy(u, *copy);
    v = labels::copy(v, *copy);
  }
  const auto edge = net.find_edge(net.at(u), net.at(v));
  if (!edge) throw std::out_of_range("no middle edge " + u + "->" + v);
  return *edge;
}

}  // namespace sumnet
