// Explicit capacity-achieving codes, the k-copy embedding, unrolling, and the
// routing baseline.
#include <algorithm>

#include "sumnet/coding.hpp"

namespace sumnet {

namespace {

// Message layout on middle edge e_i_j of N1/N2 with l = m + 1 (0-based rows):
// rows 0-1 carry the 2-symbol partial sum; row 1 + (x - i) carries a first
// symbol tied to partner x > i; row 1 + (m - i) + x carries a second symbol
// tied to partner x < i.
int upper_slot(int i, int x) { return 1 + (x - i); }
int lower_slot(int m, int i, int x) { return 1 + (m - i) + x; }

Mat& source_map(FracLinCode& code, const SumNetwork& net, const std::string& src, const std::string& u) {
  const auto e = net.find_edge(net.at(src), net.at(u));
  return code.edge_maps.at(e->index).front();
}

// Decoder of terminal t for its in-edge coming from node v.
Mat& decoder_from(FracLinCode& code, const SumNetwork& net, const std::string& t, const std::string& v) {
  const NodeId term = net.at(t);
  const auto e = net.find_edge(net.at(v), term);
  const auto in = net.in_edges(term);
  const auto pos = std::find(in.begin(), in.end(), *e) - in.begin();
  return code.decoders.at(term.index).at(static_cast<std::size_t>(pos));
}

}  // namespace

FracLinCode scheme_n1(int m, std::int64_t q, std::uint64_t p) {
  const PrimeField field(p);
  if (!field.divides(q)) {
    throw SchemeRefused("N1 scheme: characteristic must divide q (p=" + std::to_string(p) +
                        ", q=" + std::to_string(q) + ")");
  }
  const SumNetwork net = build_n1({m, q});
  const int w = static_cast<int>(q + 1);
  // Defaults already give: rows 0-1 of every middle edge = sum over its
  // reach, direct edges forwarding, and every decoder reading rows 0-1.
  FracLinCode code = forwarding_code(net, 2, m + 1, field);

  for (int i = 1; i < m; ++i)
    for (int x = i + 1; x <= m; ++x)
      for (int j = 1; j <= w; ++j) {
        const std::string s = labels::source(i, x, j);
        source_map(code, net, s, labels::u(i, j)).set(upper_slot(i, x), 0, 1);
        source_map(code, net, s, labels::u(x, j)).set(lower_slot(m, x, i), 1, 1);
      }

  // t_i: sums of rows 0-1 over j count s_i (q+1) times, which is 1 when p | q.
  // t_i_x_j: subtract the reassembled X_ixj once.
  for (int i = 1; i < m; ++i)
    for (int x = i + 1; x <= m; ++x)
      for (int j = 1; j <= w; ++j) {
        const std::string t = labels::terminal(i, x, j);
        decoder_from(code, net, t, labels::v(i, j)).set(0, upper_slot(i, x), -1);
        decoder_from(code, net, t, labels::v(x, j)).set(1, lower_slot(m, x, i), -1);
      }
  return code;
}

FracLinCode scheme_n2(int m, std::int64_t q, std::uint64_t p) {
  const PrimeField field(p);
  if (field.divides(q)) {
    throw SchemeRefused("N2 scheme: characteristic must not divide q (p=" + std::to_string(p) +
                        ", q=" + std::to_string(q) + ")");
  }
  const SumNetwork net = build_n2({m, q});
  const int w = static_cast<int>(q + 1);
  const Residue q_inv = field.inv(q);
  FracLinCode code = forwarding_code(net, 2, m + 1, field);

  // s_i_x_y reaches e_i_j and e_x_j for j != y; its slots accumulate
  // W_ixj = sum_{y != j} X_ixy.
  for (int i = 1; i < m; ++i)
    for (int x = i + 1; x <= m; ++x)
      for (int y = 1; y <= w; ++y)
        for (int j = 1; j <= w; ++j) {
          if (j == y) continue;
          const std::string s = labels::source(i, x, y);
          source_map(code, net, s, labels::u(i, j)).set(upper_slot(i, x), 0, 1);
          source_map(code, net, s, labels::u(x, j)).set(lower_slot(m, x, i), 1, 1);
        }

  auto scaled_sum = [&](Mat& d) {
    d.set(0, 0, q_inv);
    d.set(1, 1, q_inv);
  };
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= w; ++j) scaled_sum(decoder_from(code, net, labels::terminal(i), labels::v(i, j)));

  for (int i = 1; i < m; ++i)
    for (int x = i + 1; x <= m; ++x) {
      for (int j = 1; j <= w; ++j) {
        const std::string t = labels::terminal(i, x, j);
        decoder_from(code, net, t, labels::v(i, j)).set(0, upper_slot(i, x), -1);
        decoder_from(code, net, t, labels::v(x, j)).set(1, lower_slot(m, x, i), -1);
      }
      // tp_i_x: q^-1 (sum_j Y'_ij + sum_j Y'_xj - sum_j W_ixj).
      const std::string tp = labels::terminal_primed(i, x);
      for (int j = 1; j <= w; ++j) {
        Mat& from_i = decoder_from(code, net, tp, labels::v(i, j));
        scaled_sum(from_i);
        from_i.set(0, upper_slot(i, x), -q_inv);
        Mat& from_x = decoder_from(code, net, tp, labels::v(x, j));
        scaled_sum(from_x);
        from_x.set(1, lower_slot(m, x, i), -q_inv);
      }
    }
  return code;
}

FracLinCode scheme_merged(Family family, int m, std::int64_t q, std::uint64_t p, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  FracLinCode base_code = [&] {
    switch (family) {
      case Family::N1:
        return scheme_n1(m, q, p);
      case Family::N2:
        return scheme_n2(m, q, p);
      case Family::Bottleneck2:
        break;
    }
    throw std::invalid_argument("merged schemes exist for n1 and n2 only");
  }();
  if (k == 1) return base_code;

  const SumNetwork base = build_family(family, m, q, 1).net;
  const SumNetwork merged = k_copy_merge(base, k);
  const int r = 2 * k;
  const int l = base_code.l;
  const std::size_t edges = base.edge_count();
  FracLinCode code{r, l, base_code.field, {}, {}};
  code.edge_maps.resize(merged.edge_count());
  code.decoders.resize(merged.node_count());

  for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
    for (std::size_t e = 0; e < edges; ++e) {
      const auto& src = base_code.edge_maps[e];
      auto& dst = code.edge_maps[c * edges + e];
      if (base.node(base.edge(EdgeId{e}).tail).role == Role::Source) {
        Mat a(code.field, l, r);
        a.set_block(0, static_cast<Index>(2 * c), src.front());
        dst.push_back(std::move(a));
      } else {
        dst = src;
      }
    }
  }
  for (NodeId t : base.terminals()) {
    const NodeId mt = merged.at(base.node(t).label);
    auto& decs = code.decoders[mt.index];
    for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
      for (const Mat& d : base_code.decoders[t.index]) {
        Mat wide(code.field, r, l);
        wide.set_block(static_cast<Index>(2 * c), 0, d);
        decs.push_back(std::move(wide));
      }
    }
  }
  return code;
}

FracLinCode unroll_lemma1(const SumNetwork& merged, const FracLinCode& merged_code, const SumNetwork& base, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (!(merged == k_copy_merge(base, k))) {
    throw std::invalid_argument("network is not the k-copy merge of the given base");
  }
  if (!verify(merged, merged_code).pass) throw SchemeRefused("unroll: input code does not verify");

  const int r = merged_code.r;
  const int l = merged_code.l;
  const PrimeField field = merged_code.field;
  const std::size_t edges = base.edge_count();
  FracLinCode code{r, l * k, field, {}, {}};
  code.edge_maps.resize(edges);
  code.decoders.resize(base.node_count());

  for (std::size_t e = 0; e < edges; ++e) {
    const Edge& edge = base.edge(EdgeId{e});
    if (base.node(edge.tail).role == Role::Source) {
      std::vector<Mat> parts;
      for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) parts.push_back(merged_code.edge_maps[c * edges + e].front());
      code.edge_maps[e].push_back(vstack(parts));
      continue;
    }
    const std::size_t fan_in = base.in_edges(edge.tail).size();
    for (std::size_t idx = 0; idx < fan_in; ++idx) {
      Mat diag(field, l * k, l * k);
      for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
        const auto at = static_cast<Index>(c) * l;
        diag.set_block(at, at, merged_code.edge_maps[c * edges + e][idx]);
      }
      code.edge_maps[e].push_back(std::move(diag));
    }
  }
  for (NodeId t : base.terminals()) {
    const NodeId mt = merged.at(base.node(t).label);
    const std::size_t deg = base.in_edges(t).size();
    for (std::size_t idx = 0; idx < deg; ++idx) {
      std::vector<Mat> parts;
      for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) parts.push_back(merged_code.decoders[mt.index][c * deg + idx]);
      code.decoders[t.index].push_back(hstack(parts));
    }
  }
  return code;
}

FracLinCode routing_code(const SumNetwork& net, std::uint64_t p) {
  const PrimeField field(p);
  const Layering lay = layer(net);
  std::size_t width = 1;
  for (const auto& mid : lay.middles) width = std::max(width, mid.reach.size());
  const int l = static_cast<int>(width);
  FracLinCode code = forwarding_code(net, 1, l, field);

  for (const auto& mid : lay.middles) {
    for (std::size_t slot = 0; slot < mid.feeders.size(); ++slot) {
      Mat a(field, l, 1);
      a.set(static_cast<Index>(slot), 0, 1);
      code.edge_maps[mid.feeders[slot].index].front() = std::move(a);
    }
  }
  // Each terminal reads every source exactly once: from the first in-edge
  // (tap or direct) that carries it.
  for (NodeId t : net.terminals()) {
    std::vector<bool> taken(net.node_count(), false);
    const auto in = net.in_edges(t);
    for (std::size_t idx = 0; idx < in.size(); ++idx) {
      Mat d(field, 1, l);
      const EdgeId e = in[idx];
      if (lay.kind[e.index] == Layering::Kind::Direct) {
        const NodeId s = net.edge(e).tail;
        if (!taken[s.index]) {
          d.set(0, 0, 1);
          taken[s.index] = true;
        }
      } else {
        const auto& mid = lay.middles[lay.middle_of[e.index]];
        for (std::size_t slot = 0; slot < mid.reach.size(); ++slot) {
          const NodeId s = mid.reach[slot];
          if (taken[s.index]) continue;
          d.set(0, static_cast<Index>(slot), 1);
          taken[s.index] = true;
        }
      }
      code.decoders[t.index][idx] = std::move(d);
    }
  }
  return code;
}

}  // namespace sumnet
