#include <doctest.h>

#include <json.hpp>

#include "oracles.hpp"
#include "sumnet/coding.hpp"

using namespace sumnet;

namespace {

std::string parse_message(const SumNetwork& net, const std::string& text) {
  try {
    (void)code_from_json(net, text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "no error";
}

}  // namespace

TEST_CASE("bottleneck2: all-ones code decodes, a zero coefficient breaks it") {
  const SumNetwork net = build_bottleneck2();
  for (std::uint64_t p : {2u, 3u, 5u}) {
    FracLinCode code = forwarding_code(net, 1, 1, PrimeField(p));
    CHECK(verify(net, code).pass);
    CHECK(oracle::simulate(net, code, p));
    const EdgeId mid = *net.find_edge(net.at(labels::u(1, 1)), net.at(labels::v(1, 1)));
    code.edge_maps[mid.index][0] = Mat(code.field, 1, 1);
    const VerifyReport report = verify(net, code);
    CHECK_FALSE(report.pass);
    CHECK(report.failing_count() == 2);
    CHECK_FALSE(oracle::simulate(net, code, p));
  }
}

TEST_CASE("transfer of the forwarding code on a path") {
  SumNetwork net;
  const NodeId s = net.add_node("s", Role::Source);
  const NodeId u = net.add_node("u", Role::Intermediate);
  const NodeId t = net.add_node("t", Role::Terminal);
  const EdgeId su = net.add_edge(s, u);
  net.add_edge(u, t);
  const PrimeField f5(5);
  FracLinCode code = forwarding_code(net, 1, 2, f5);
  code.edge_maps[su.index][0] = Mat::from_rows(f5, {{3}, {1}});
  const TransferMap tm = transfer(net, code);
  CHECK(tm.edges[1].dense() == Mat::from_rows(f5, {{3}, {1}}));
  CHECK(tm.terminals[t.index]->dense() == Mat::from_rows(f5, {{3}}));
  CHECK_FALSE(verify(net, code).pass);
  code.decoders[t.index][0] = Mat::from_rows(f5, {{0, 1}});
  CHECK(verify(net, code).pass);
}

TEST_CASE("capacity schemes verify on the grid and agree with simulation") {
  for (int m : {1, 2, 3})
    for (std::int64_t q : {2, 3, 6}) {
      const SumNetwork n1 = build_n1({m, q});
      const SumNetwork n2 = build_n2({m, q});
      for (std::uint64_t p : {2u, 3u, 5u}) {
        CAPTURE(m);
        CAPTURE(q);
        CAPTURE(p);
        if (q % static_cast<std::int64_t>(p) == 0) {
          const FracLinCode code = scheme_n1(m, q, p);
          CHECK(code.r == 2);
          CHECK(code.l == m + 1);
          CHECK(verify(n1, code).pass);
          CHECK(oracle::simulate(n1, code, 99, 2));
          CHECK_THROWS_AS(scheme_n2(m, q, p), SchemeRefused);
        } else {
          const FracLinCode code = scheme_n2(m, q, p);
          CHECK(verify(n2, code).pass);
          CHECK(oracle::simulate(n2, code, 99, 2));
          CHECK_THROWS_AS(scheme_n1(m, q, p), SchemeRefused);
        }
      }
    }
}

TEST_CASE("scheme examples") {
  CHECK(verify(build_n1({3, 6}), scheme_n1(3, 6, 3)).pass);
  CHECK(verify(build_n2({2, 3}), scheme_n2(2, 3, 2)).pass);
  const FracLinCode merged = scheme_merged(Family::N1, 3, 2, 2, 2);
  CHECK(merged.r == 4);
  CHECK(merged.l == 4);
  CHECK(verify(build_family(Family::N1, 3, 2, 2).net, merged).pass);
  CHECK_THROWS_AS(scheme_merged(Family::N1, 3, 2, 3, 2), SchemeRefused);
}

TEST_CASE("tampering is reported against a named terminal") {
  const SumNetwork net = build_n1({2, 2});
  FracLinCode code = scheme_n1(2, 2, 2);
  const NodeId t = net.at(labels::terminal(1));
  auto& dec = code.decoders[t.index][0];
  dec.set(0, 0, 1 - dec(0, 0));
  const VerifyReport report = verify(net, code);
  CHECK_FALSE(report.pass);
  REQUIRE(report.first_failure.has_value());
  CHECK(*report.first_failure == labels::terminal(1));
  CHECK(report.failing_count() == 1);
  CHECK(report.to_text().find(labels::terminal(1)) != std::string::npos);
  CHECK_FALSE(oracle::simulate(net, code, 5, 6));
}

TEST_CASE("verify agrees with simulation on random perturbations") {
  const SumNetwork net = build_n2({2, 2});
  const FracLinCode good = scheme_n2(2, 2, 3);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    FracLinCode code = good;
    const std::size_t e = rng() % net.edge_count();
    auto& maps = code.edge_maps[e];
    Mat& m = maps[rng() % maps.size()];
    m.set(static_cast<Index>(rng() % m.rows()), static_cast<Index>(rng() % m.cols()), static_cast<std::int64_t>(rng() % 3));
    // A failing code is caught by some input with overwhelming probability over 8 trials.
    CHECK(verify(net, code).pass == oracle::simulate(net, code, rng(), 8));
  }
}

TEST_CASE("routing codes verify in every characteristic") {
  for (std::uint64_t p : {2u, 3u, 5u, 7u}) {
    CAPTURE(p);
    const FracLinCode c1 = routing_code(build_n1({2, 2}), p);
    CHECK(c1.r == 1);
    CHECK(c1.l == 3);
    CHECK(verify(build_n1({2, 2}), c1).pass);
    const FracLinCode c2 = routing_code(build_n2({2, 2}), p);
    CHECK(c2.l == 4);
    CHECK(verify(build_n2({2, 2}), c2).pass);
    CHECK(verify(build_bottleneck2(), routing_code(build_bottleneck2(), p)).pass);
  }
  CHECK(verify(k_copy_merge(build_n1({2, 3}), 2), routing_code(k_copy_merge(build_n1({2, 3}), 2), 5)).pass);
}

TEST_CASE("unrolling a merged solution yields a solution on the base") {
  for (int k : {1, 2, 3}) {
    CAPTURE(k);
    const BuiltNetwork merged = build_family(Family::N1, 2, 2, k);
    const SumNetwork base = build_n1({2, 2});
    const FracLinCode code = scheme_merged(Family::N1, 2, 2, 2, k);
    const FracLinCode flat = unroll_lemma1(merged.net, code, base, k);
    CHECK(flat.r == 2 * k);
    CHECK(flat.l == 3 * k);
    CHECK(verify(base, flat).pass);
    CHECK(oracle::simulate(base, flat, 1, 2));
  }
  const BuiltNetwork m2 = build_family(Family::N2, 2, 3, 2);
  const FracLinCode c2 = scheme_merged(Family::N2, 2, 3, 2, 2);
  CHECK(verify(build_n2({2, 3}), unroll_lemma1(m2.net, c2, build_n2({2, 3}), 2)).pass);

  const BuiltNetwork m1 = build_family(Family::N1, 2, 2, 2);
  FracLinCode broken = scheme_merged(Family::N1, 2, 2, 2, 2);
  for (Mat& d : broken.decoders[m1.net.at(labels::terminal(1)).index]) d = Mat(broken.field, d.rows(), d.cols());
  REQUIRE_FALSE(verify(m1.net, broken).pass);
  CHECK_THROWS_AS(unroll_lemma1(m1.net, broken, build_n1({2, 2}), 2), SchemeRefused);
}

TEST_CASE("direct_split covers the block without overlap") {
  for (int r = 1; r <= 9; ++r)
    for (int d = 1; d <= r + 2; ++d) {
      int next = 0;
      for (int c = 0; c < d; ++c) {
        const auto [begin, len] = direct_split(r, d, c);
        CHECK(len >= 0);
        CHECK(len <= (r + d - 1) / d);
        if (len > 0) {
          CHECK(begin == next);
          next = begin + len;
        }
      }
      CHECK(next == r);
    }
}

TEST_CASE("layering classifies edges") {
  const SumNetwork net = build_n1({2, 2});
  const Layering lay = layer(net);
  CHECK(lay.middles.size() == 6);
  std::size_t direct = 0, middles = 0;
  for (auto k : lay.kind) {
    direct += k == Layering::Kind::Direct;
    middles += k == Layering::Kind::Middle;
  }
  CHECK(middles == 6);
  CHECK(direct > 0);
  for (const auto& mid : lay.middles) CHECK(mid.reach.size() == 3);

  SumNetwork deep;
  const NodeId s = deep.add_node("s", Role::Source);
  const NodeId a = deep.add_node("a", Role::Intermediate);
  const NodeId b = deep.add_node("b", Role::Intermediate);
  const NodeId c = deep.add_node("c", Role::Intermediate);
  const NodeId t = deep.add_node("t", Role::Terminal);
  deep.add_edge(s, a);
  deep.add_edge(a, b);
  deep.add_edge(b, c);
  deep.add_edge(c, t);
  CHECK_THROWS_AS(layer(deep), UnsupportedNetwork);
}

TEST_CASE("code files round trip and reject malformed input") {
  const SumNetwork net = build_n2({2, 2});
  const FracLinCode code = scheme_n2(2, 2, 3);
  const std::string text = code_to_json(net, code);
  const FracLinCode back = code_from_json(net, text);
  CHECK(back == code);
  CHECK(code_to_json(net, back) == text);

  CHECK(parse_message(net, text.substr(0, text.size() / 3)).find("byte") != std::string::npos);
  CHECK(parse_message(net, "{\"r\": 2}").find("code/") != std::string::npos);
  CHECK(parse_message(build_n1({2, 2}), text).find("no error") == std::string::npos);

  auto doc = nlohmann::json::parse(text);
  doc["p"] = 4;
  CHECK(parse_message(net, doc.dump()).find("code/p") != std::string::npos);
}

TEST_CASE("check_shapes names the offending edge") {
  const SumNetwork net = build_bottleneck2();
  FracLinCode code = forwarding_code(net, 1, 1, PrimeField(3));
  code.edge_maps[0][0] = Mat(code.field, 2, 1);
  try {
    check_shapes(net, code);
    FAIL("no throw");
  } catch (const ShapeMismatch& e) {
    CHECK(std::string(e.what()).find(net.edge_label(EdgeId{0})) != std::string::npos);
  }
}
