#include "sumnet/coding.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace sumnet {

namespace {

// Position of edge e among the parallel edges sharing its tail and head, and
// how many there are.
std::pair<int, int> parallel_slot(const SumNetwork& net, EdgeId e) {
  const Edge& edge = net.edge(e);
  int index = 0;
  int count = 0;
  for (EdgeId other : net.out_edges(edge.tail)) {
    if (net.edge(other).head != edge.head) continue;
    if (net.edge(other).par < edge.par) ++index;
    ++count;
  }
  return {index, count};
}

}  // namespace

std::pair<int, int> direct_split(int r, int d, int c) {
  const int chunk = (r + d - 1) / d;
  const int begin = std::min(r, c * chunk);
  return {begin, std::min(r, begin + chunk) - begin};
}

FracLinCode forwarding_code(const SumNetwork& net, int r, int l, PrimeField field) {
  if (r < 1 || l < 1) throw std::invalid_argument("code shape needs r, l >= 1");
  FracLinCode code{r, l, field, {}, {}};
  code.edge_maps.resize(net.edge_count());
  code.decoders.resize(net.node_count());
  for (std::size_t i = 0; i < net.edge_count(); ++i) {
    const EdgeId e{i};
    const Edge& edge = net.edge(e);
    auto& maps = code.edge_maps[i];
    if (net.node(edge.tail).role == Role::Source) {
      const auto [slot, count] = parallel_slot(net, e);
      const auto [begin, len] = direct_split(r, count, slot);
      Mat a(field, l, r);
      for (int c = 0; c < len && c < l; ++c) a.set(c, begin + c, 1);
      maps.push_back(std::move(a));
    } else {
      for (std::size_t k = 0; k < net.in_edges(edge.tail).size(); ++k) maps.push_back(Mat::identity(field, l));
    }
  }
  for (NodeId t : net.terminals()) {
    auto& decs = code.decoders[t.index];
    for (EdgeId e : net.in_edges(t)) {
      Mat d(field, r, l);
      if (net.node(net.edge(e).tail).role == Role::Source) {
        const auto [slot, count] = parallel_slot(net, e);
        const auto [begin, len] = direct_split(r, count, slot);
        for (int c = 0; c < len && c < l; ++c) d.set(begin + c, c, 1);
      } else {
        for (int c = 0; c < std::min(r, l); ++c) d.set(c, c, 1);
      }
      decs.push_back(std::move(d));
    }
  }
  return code;
}

void check_shapes(const SumNetwork& net, const FracLinCode& code) {
  if (code.edge_maps.size() != net.edge_count() || code.decoders.size() != net.node_count()) {
    throw ShapeMismatch("code is not bound to this network");
  }
  for (std::size_t i = 0; i < net.edge_count(); ++i) {
    const EdgeId e{i};
    const Edge& edge = net.edge(e);
    const auto& maps = code.edge_maps[i];
    const bool from_source = net.node(edge.tail).role == Role::Source;
    const std::size_t want = from_source ? 1 : net.in_edges(edge.tail).size();
    const Index cols = from_source ? code.r : code.l;
    bool ok = maps.size() == want;
    for (const Mat& a : maps) ok = ok && a.rows() == code.l && a.cols() == cols && a.field() == code.field;
    if (!ok) throw ShapeMismatch("edge " + net.edge_label(e) + ": encoding matrices have the wrong shape");
  }
  for (std::size_t n = 0; n < net.node_count(); ++n) {
    const NodeId id{n};
    const auto& decs = code.decoders[n];
    if (net.node(id).role != Role::Terminal) {
      if (!decs.empty()) throw ShapeMismatch("node " + net.node(id).label + " is not a terminal but has decoders");
      continue;
    }
    bool ok = decs.size() == net.in_edges(id).size();
    for (const Mat& d : decs) ok = ok && d.rows() == code.r && d.cols() == code.l && d.field() == code.field;
    if (!ok) throw ShapeMismatch("terminal " + net.node(id).label + ": decoding matrices have the wrong shape");
  }
}

const Mat* BlockTransfer::block(std::size_t source) const {
  const auto it = blocks_.find(source);
  return it == blocks_.end() ? nullptr : &it->second;
}

void BlockTransfer::add_block(std::size_t source, const Mat& m) {
  if (m.rows() != rows_ || m.cols() != r_) throw ShapeMismatch("transfer block shape");
  if (m.is_zero()) return;
  auto [it, inserted] = blocks_.try_emplace(source, m);
  if (!inserted) {
    it->second.add_block(0, 0, m);
    if (it->second.is_zero()) blocks_.erase(it);
  }
}

void BlockTransfer::accumulate(const Mat& coeff, const BlockTransfer& other) {
  if (coeff.cols() != other.rows_ || coeff.rows() != rows_) throw ShapeMismatch("transfer accumulate shape");
  if (coeff.is_zero()) return;
  for (const auto& [pos, blk] : other.blocks_) add_block(pos, coeff * blk);
}

Mat BlockTransfer::dense() const {
  Mat out(field_, rows_, static_cast<Index>(r_) * static_cast<Index>(sources_));
  for (const auto& [pos, blk] : blocks_) out.set_block(0, static_cast<Index>(pos) * r_, blk);
  return out;
}

TransferMap transfer(const SumNetwork& net, const FracLinCode& code) {
  check_shapes(net, code);
  const std::size_t nsrc = net.sources().size();
  TransferMap out;
  out.edges.assign(net.edge_count(), BlockTransfer(code.field, code.l, code.r, nsrc));
  out.terminals.resize(net.node_count());
  for (EdgeId e : topo_order(net)) {
    const Edge& edge = net.edge(e);
    BlockTransfer& t = out.edges[e.index];
    const auto& maps = code.edge_maps[e.index];
    if (net.node(edge.tail).role == Role::Source) {
      t.add_block(net.source_position(edge.tail), maps.front());
      continue;
    }
    const auto in = net.in_edges(edge.tail);
    for (std::size_t k = 0; k < in.size(); ++k) t.accumulate(maps[k], out.edges[in[k].index]);
  }
  for (NodeId term : net.terminals()) {
    BlockTransfer z(code.field, code.r, code.r, nsrc);
    const auto in = net.in_edges(term);
    const auto& decs = code.decoders[term.index];
    for (std::size_t k = 0; k < in.size(); ++k) z.accumulate(decs[k], out.edges[in[k].index]);
    out.terminals[term.index] = std::move(z);
  }
  return out;
}

VerifyReport verify(const SumNetwork& net, const FracLinCode& code) {
  const TransferMap tm = transfer(net, code);
  const Mat id = Mat::identity(code.field, code.r);
  VerifyReport report;
  report.pass = true;
  for (NodeId term : net.terminals()) {
    Mat residual = tm.terminals[term.index]->dense();
    for (std::size_t s = 0; s < net.sources().size(); ++s) {
      residual.add_block(0, static_cast<Index>(s) * code.r, scale(id, -1));
    }
    const bool ok = residual.is_zero();
    if (!ok && report.pass) {
      report.pass = false;
      report.first_failure = net.node(term).label;
    }
    report.terminals.push_back(TerminalResidual{term, net.node(term).label, std::move(residual)});
  }
  return report;
}

std::size_t VerifyReport::failing_count() const {
  return static_cast<std::size_t>(
      std::count_if(terminals.begin(), terminals.end(), [](const auto& t) { return !t.residual.is_zero(); }));
}

std::string VerifyReport::to_text() const {
  std::ostringstream os;
  if (pass) {
    os << "PASS: all " << terminals.size() << " terminals decode the sum\n";
  } else {
    os << "FAIL: " << failing_count() << " of " << terminals.size()
       << " terminals do not decode the sum; first failing terminal " << *first_failure << "\n";
  }
  return os.str();
}

std::string VerifyReport::to_json(const SumNetwork& net) const {
  nlohmann::json doc;
  doc["pass"] = pass;
  doc["terminals"] = terminals.size();
  doc["first_failure"] = first_failure ? nlohmann::json(*first_failure) : nlohmann::json(nullptr);
  nlohmann::json failing = nlohmann::json::array();
  for (const TerminalResidual& t : terminals) {
    if (t.residual.is_zero()) continue;
    const Index r = t.residual.rows();
    nlohmann::json wrong = nlohmann::json::array();
    for (std::size_t s = 0; s < net.sources().size(); ++s) {
      if (!t.residual.block(0, static_cast<Index>(s) * r, r, r).is_zero()) {
        wrong.push_back(net.node(net.sources()[s]).label);
      }
    }
    failing.push_back({{"terminal", t.label}, {"wrong_source_blocks", std::move(wrong)}});
  }
  doc["failing"] = std::move(failing);
  return doc.dump(2) + "\n";
}

Layering layer(const SumNetwork& net) {
  using Kind = Layering::Kind;
  Layering out;
  out.kind.assign(net.edge_count(), Kind::Direct);
  out.middle_of.assign(net.edge_count(), static_cast<std::size_t>(-1));
  auto fail = [&net](EdgeId e, const std::string& why) {
    throw UnsupportedNetwork("edge " + net.edge_label(e) + ": " + why);
  };
  auto role = [&net](NodeId n) { return net.node(n).role; };

  for (std::size_t i = 0; i < net.edge_count(); ++i) {
    const EdgeId e{i};
    const Edge& edge = net.edge(e);
    if (role(edge.tail) != Role::Intermediate || role(edge.head) != Role::Intermediate) continue;
    if (net.out_edges(edge.tail).size() != 1) fail(e, "middle tail must feed exactly one edge");
    if (net.in_edges(edge.head).size() != 1) fail(e, "middle head must hear exactly one edge");
    Layering::Middle mid{e, {}, {}};
    std::vector<bool> seen(net.node_count(), false);
    for (EdgeId f : net.in_edges(edge.tail)) {
      const NodeId s = net.edge(f).tail;
      if (role(s) != Role::Source) fail(f, "middle tail must be fed by sources only");
      if (seen[s.index]) fail(f, "parallel feeder edges are not supported");
      seen[s.index] = true;
      mid.reach.push_back(s);
      mid.feeders.push_back(f);
      out.kind[f.index] = Kind::Feeder;
      out.middle_of[f.index] = out.middles.size();
    }
    for (EdgeId tap : net.out_edges(edge.head)) {
      if (role(net.edge(tap).head) != Role::Terminal) fail(tap, "middle head must feed terminals only");
      out.kind[tap.index] = Kind::Tap;
      out.middle_of[tap.index] = out.middles.size();
    }
    out.kind[i] = Kind::Middle;
    out.middle_of[i] = out.middles.size();
    out.middles.push_back(std::move(mid));
  }
  for (std::size_t i = 0; i < net.edge_count(); ++i) {
    const EdgeId e{i};
    if (out.middle_of[i] != static_cast<std::size_t>(-1)) continue;
    const Edge& edge = net.edge(e);
    if (role(edge.tail) != Role::Source || role(edge.head) != Role::Terminal) {
      fail(e, "only source->u, u->v, v->terminal and direct source->terminal edges are supported");
    }
  }
  return out;
}

std::string code_to_json(const SumNetwork& net, const FracLinCode& code) {
  check_shapes(net, code);
  using nlohmann::json;
  json doc;
  doc["version"] = 1;
  doc["r"] = code.r;
  doc["l"] = code.l;
  doc["p"] = code.field.modulus();
  json edges = json::object();
  for (std::size_t i = 0; i < net.edge_count(); ++i) {
    const EdgeId e{i};
    const auto& maps = code.edge_maps[i];
    if (net.node(net.edge(e).tail).role == Role::Source) {
      edges[net.edge_label(e)] = maps.front().entries();
    } else {
      json list = json::array();
      for (const Mat& a : maps) list.push_back(a.entries());
      edges[net.edge_label(e)] = std::move(list);
    }
  }
  doc["edge_matrices"] = std::move(edges);
  json terms = json::object();
  for (NodeId t : net.terminals()) {
    json list = json::array();
    for (const Mat& d : code.decoders[t.index]) list.push_back(d.entries());
    terms[net.node(t).label] = std::move(list);
  }
  doc["terminal_matrices"] = std::move(terms);
  return doc.dump() + "\n";
}

namespace {

Mat parse_matrix(const nlohmann::json& v, PrimeField field, Index rows, Index cols, const std::string& path) {
  if (!v.is_array()) throw ParseError(path + ": expected an array of entries");
  std::vector<std::int64_t> entries;
  entries.reserve(v.size());
  for (const auto& x : v) {
    if (!x.is_number_integer()) throw ParseError(path + ": entries must be integers");
    entries.push_back(x.get<std::int64_t>());
  }
  if (static_cast<Index>(entries.size()) != rows * cols) {
    throw ParseError(path + ": expected " + std::to_string(rows * cols) + " entries, got " +
                     std::to_string(entries.size()));
  }
  return Mat::from_entries(field, rows, cols, entries);
}

std::vector<Mat> parse_list(const nlohmann::json& v, PrimeField field, Index rows, Index cols, std::size_t count,
                            const std::string& path) {
  if (!v.is_array() || v.size() != count) {
    throw ParseError(path + ": expected a list of " + std::to_string(count) + " matrices");
  }
  std::vector<Mat> out;
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(parse_matrix(v[k], field, rows, cols, path + "/" + std::to_string(k)));
  }
  return out;
}

}  // namespace

FracLinCode code_from_json(const SumNetwork& net, std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("code: parse error at byte " + std::to_string(e.byte));
  }
  auto get_int = [&doc](const char* key) -> std::int64_t {
    if (!doc.is_object() || !doc.contains(key) || !doc[key].is_number_integer()) {
      throw ParseError(std::string("code/") + key + ": missing or not an integer");
    }
    return doc[key].get<std::int64_t>();
  };
  const std::int64_t r = get_int("r");
  const std::int64_t l = get_int("l");
  const std::int64_t p = get_int("p");
  if (r < 1 || l < 1) throw ParseError("code: r and l must be positive");
  PrimeField field = [p] {
    try {
      return PrimeField(static_cast<std::uint64_t>(p));
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("code/p: ") + e.what());
    }
  }();

  FracLinCode code{static_cast<int>(r), static_cast<int>(l), field, {}, {}};
  code.edge_maps.resize(net.edge_count());
  code.decoders.resize(net.node_count());

  if (!doc.contains("edge_matrices") || !doc["edge_matrices"].is_object()) {
    throw ParseError("code/edge_matrices: missing or not an object");
  }
  const json& edges = doc["edge_matrices"];
  if (edges.size() != net.edge_count()) throw ParseError("code/edge_matrices: edge count does not match the network");
  for (std::size_t i = 0; i < net.edge_count(); ++i) {
    const EdgeId e{i};
    const std::string label = net.edge_label(e);
    const std::string path = "code/edge_matrices/" + label;
    const auto it = edges.find(label);
    if (it == edges.end()) throw ParseError(path + ": missing");
    const Edge& edge = net.edge(e);
    if (net.node(edge.tail).role == Role::Source) {
      code.edge_maps[i].push_back(parse_matrix(*it, field, l, r, path));
    } else {
      code.edge_maps[i] = parse_list(*it, field, l, l, net.in_edges(edge.tail).size(), path);
    }
  }
  if (!doc.contains("terminal_matrices") || !doc["terminal_matrices"].is_object()) {
    throw ParseError("code/terminal_matrices: missing or not an object");
  }
  const json& terms = doc["terminal_matrices"];
  for (NodeId t : net.terminals()) {
    const std::string& label = net.node(t).label;
    const std::string path = "code/terminal_matrices/" + label;
    const auto it = terms.find(label);
    if (it == terms.end()) throw ParseError(path + ": missing");
    code.decoders[t.index] = parse_list(*it, field, r, l, net.in_edges(t).size(), path);
  }
  if (terms.size() != net.terminals().size()) throw ParseError("code/terminal_matrices: unknown terminal labels");
  return code;
}

}  // namespace sumnet
