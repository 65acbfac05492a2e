// Rank-counting certificates. Every claimed bound comes from the same shape of
// argument: some set of rows (middle-edge transfers, plus selector rows for
// Claim1) must span all r|S| source dimensions, so counting rows bounds r/l.
#include <sstream>

#include <json.hpp>

#include "sumnet/analysis.hpp"

namespace sumnet {

std::string_view to_string(BoundMode mode) {
  switch (mode) {
    case BoundMode::N1Claim1:
      return "N1-Claim1";
    case BoundMode::N1Claim2:
      return "N1-Claim2";
    case BoundMode::N2Claim3:
      return "N2-Claim3";
    case BoundMode::N2Claim4:
      return "N2-Claim4";
  }
  return "?";
}

BoundMode applicable_mode(Family family, std::int64_t q, std::uint64_t p) {
  const bool divides = q % static_cast<std::int64_t>(p) == 0;
  switch (family) {
    case Family::N1:
      return divides ? BoundMode::N1Claim1 : BoundMode::N1Claim2;
    case Family::N2:
      return divides ? BoundMode::N2Claim4 : BoundMode::N2Claim3;
    case Family::Bottleneck2:
      break;
  }
  throw std::invalid_argument("bounds are defined for the n1 and n2 families only");
}

namespace {

Mat stack_rows(PrimeField field, Index cols, const std::vector<Mat>& parts) {
  if (parts.empty()) return Mat(field, 0, cols);
  return vstack(parts);
}

}  // namespace

BoundReport bound_check(const SumNetwork& net, const FracLinCode& code, BoundMode mode, const Manifest& manifest) {
  const bool n1_mode = mode == BoundMode::N1Claim1 || mode == BoundMode::N1Claim2;
  if (manifest.family == Family::Bottleneck2) throw std::invalid_argument("bounds are defined for the n1 and n2 families only");
  if (n1_mode != (manifest.family == Family::N1)) {
    throw std::invalid_argument(std::string("mode ") + std::string(to_string(mode)) + " does not apply to family " +
                                std::string(to_string(manifest.family)));
  }
  const VerifyReport vr = verify(net, code);
  if (!vr.pass) throw std::invalid_argument("bound_check needs a verified code; " + vr.to_text());

  const int m = manifest.m;
  const int w = static_cast<int>(manifest.q + 1);
  const int k = manifest.k;
  const Index r = code.r;
  const Index l = code.l;
  const PrimeField field = code.field;
  const std::size_t nsrc = net.sources().size();
  const Index width = r * static_cast<Index>(nsrc);
  const TransferMap tm = transfer(net, code);

  auto middle = [&](int i, int j, int c) {
    return middle_edge(net, i, j, k == 1 ? std::nullopt : std::optional<int>(c));
  };
  std::vector<Mat> group_a;  // j <= q
  std::vector<Mat> group_b;  // j = q + 1
  for (int c = 1; c <= k; ++c)
    for (int i = 1; i <= m; ++i)
      for (int j = 1; j <= w; ++j) (j < w ? group_a : group_b).push_back(tm.edges[middle(i, j, c).index].dense());
  const auto middles = static_cast<std::int64_t>(group_a.size() + group_b.size());
  if (middles != static_cast<std::int64_t>(layer(net).middles.size())) {
    throw std::invalid_argument("network does not match its manifest: unexpected middle edges");
  }

  BoundReport rep;
  rep.mode = mode;
  rep.required_rank = static_cast<std::size_t>(width);
  rep.rate = Rational(code.r, code.l);
  const Mat a = stack_rows(field, width, group_a);
  const Mat b = stack_rows(field, width, group_b);
  Mat stacked = vstack(a, b);

  const auto S = static_cast<std::int64_t>(nsrc);
  const std::int64_t rm = r * m;
  bool extra_ok = true;
  std::ostringstream ineq;
  switch (mode) {
    case BoundMode::N1Claim1: {
      Mat sel(field, rm, width);
      for (int i = 1; i <= m; ++i) {
        const std::size_t sp = net.source_position(net.at(labels::source(i)));
        for (Index c = 0; c < r; ++c) sel.set((i - 1) * r + c, static_cast<Index>(sp) * r + c, 1);
      }
      stacked = vstack(sel, stacked);
      rep.lhs = rm + l * middles;
      rep.rhs = r * S;
      rep.implied_bound = Rational(middles, S - m);
      rep.closed_form = capacity(Family::N1, m, manifest.q, k);
      ineq << "r*m + l*" << middles << " >= r*" << S;
      break;
    }
    case BoundMode::N1Claim2:
    case BoundMode::N2Claim3:
      rep.lhs = l * middles;
      rep.rhs = r * S;
      rep.implied_bound = Rational(middles, S);
      rep.closed_form = mode == BoundMode::N1Claim2 ? wrong_char_bound(m, manifest.q) * k
                                                    : capacity(Family::N2, m, manifest.q, k);
      ineq << "l*" << middles << " >= r*" << S;
      break;
    case BoundMode::N2Claim4: {
      // C_i = sum of the sources reaching e_i_(q+1): decodable from e_i_(q+1)
      // alone and, when p | q, from the j <= q edges of group i.
      const Layering lay = layer(net);
      Mat cf(field, rm, width);
      for (int i = 1; i <= m; ++i) {
        const EdgeId e = middle(i, w, 1);
        const auto& reach = lay.middles[lay.middle_of[e.index]].reach;
        for (NodeId s : reach) {
          const std::size_t sp = net.source_position(s);
          for (Index c = 0; c < r; ++c) cf.set((i - 1) * r + c, static_cast<Index>(sp) * r + c, 1);
        }
      }
      const std::size_t ra = rank(a);
      const std::size_t rb = rank(b);
      rep.rank_a = ra;
      rep.rank_b = rb;
      rep.rank_c = rank(cf);
      rep.c_in_a = rank(vstack(a, cf)) == ra;
      rep.c_in_b = rank(vstack(b, cf)) == rb;
      extra_ok = rep.c_in_a && rep.c_in_b && *rep.rank_c == static_cast<std::size_t>(rm);
      rep.lhs = l * middles - rm;
      rep.rhs = r * S;
      rep.implied_bound = Rational(middles, S + m);
      rep.closed_form = wrong_char_bound(m, manifest.q) * k;
      ineq << "l*" << middles << " - r*m >= r*" << S;
      break;
    }
  }
  rep.stacked_rank = rank(stacked);
  rep.inequality = ineq.str();

  std::vector<std::string> problems;
  if (rep.stacked_rank != rep.required_rank) {
    problems.push_back("stacked rank " + std::to_string(rep.stacked_rank) + " != r|S| = " + std::to_string(rep.required_rank));
  }
  if (!extra_ok) problems.push_back("C functionals are not shared by A and B with full rank r*m");
  if (rep.lhs < rep.rhs) problems.push_back("dimension count fails: " + std::to_string(rep.lhs) + " < " + std::to_string(rep.rhs));
  if (rep.rate > rep.implied_bound) problems.push_back("rate " + to_string(rep.rate) + " exceeds implied bound " + to_string(rep.implied_bound));
  if (rep.implied_bound != rep.closed_form) {
    problems.push_back("implied bound " + to_string(rep.implied_bound) + " != closed form " + to_string(rep.closed_form));
  }
  rep.consistent = problems.empty();
  for (std::size_t i = 0; i < problems.size(); ++i) rep.violation += (i ? "; " : "") + problems[i];
  return rep;
}

std::string BoundReport::to_text() const {
  std::ostringstream os;
  os << "mode: " << to_string(mode) << "\n"
     << "stacked rank: " << stacked_rank << " (required r|S| = " << required_rank << ")\n";
  if (rank_c) {
    os << "rank A: " << *rank_a << ", rank B: " << *rank_b << ", rank C: " << *rank_c
       << ", C in A: " << (c_in_a ? "yes" : "no") << ", C in B: " << (c_in_b ? "yes" : "no") << "\n";
  }
  os << "inequality: " << inequality << " (" << lhs << " >= " << rhs << ")\n"
     << "implied: r/l <= " << sumnet::to_string(implied_bound) << " (closed form " << sumnet::to_string(closed_form)
     << ")\n"
     << "rate: " << sumnet::to_string(rate) << "\n"
     << (consistent ? "CONSISTENT" : "VIOLATION: " + violation) << "\n";
  return os.str();
}

std::string BoundReport::to_json() const {
  nlohmann::json doc;
  doc["mode"] = std::string(to_string(mode));
  doc["stacked_rank"] = stacked_rank;
  doc["required_rank"] = required_rank;
  if (rank_c) {
    doc["rank_a"] = *rank_a;
    doc["rank_b"] = *rank_b;
    doc["rank_c"] = *rank_c;
    doc["c_in_a"] = c_in_a;
    doc["c_in_b"] = c_in_b;
  }
  doc["inequality"] = inequality;
  doc["lhs"] = lhs;
  doc["rhs"] = rhs;
  doc["rate"] = sumnet::to_string(rate);
  doc["implied_bound"] = sumnet::to_string(implied_bound);
  doc["closed_form"] = sumnet::to_string(closed_form);
  doc["consistent"] = consistent;
  doc["violation"] = consistent ? nlohmann::json(nullptr) : nlohmann::json(violation);
  return doc.dump(2) + "\n";
}

}  // namespace sumnet
