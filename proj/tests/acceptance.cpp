// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sumnet/analysis.hpp"

using namespace sumnet;

namespace {

struct Criterion {
  std::string name;
  double limit_ms;  // 0: no time limit
  std::function<bool(std::string&)> check;
};

const std::vector<int> kM{1, 2, 3};
const std::vector<std::int64_t> kQ{2, 3, 6};
const std::vector<std::uint64_t> kP{2, 3, 5};

// Exists-and-verifies must match the divisibility rule in all 27 cells.
bool grid(Family family, std::string& detail) {
  int agree = 0;
  for (int m : kM)
    for (std::int64_t q : kQ) {
      const SumNetwork net = family == Family::N1 ? build_n1({m, q}) : build_n2({m, q});
      for (std::uint64_t p : kP) {
        const bool divides = q % static_cast<std::int64_t>(p) == 0;
        const bool expect = family == Family::N1 ? divides : !divides;
        bool got = false;
        try {
          const FracLinCode code = family == Family::N1 ? scheme_n1(m, q, p) : scheme_n2(m, q, p);
          got = verify(net, code).pass;
        } catch (const SchemeRefused&) {
        }
        if (got == expect) ++agree;
      }
    }
  detail = std::to_string(agree) + "/27 cells";
  return agree == 27;
}

struct RateArtifacts {
  BuiltNetwork built;
  FracLinCode code;
  bool ready = false;
};

RateArtifacts& rate_artifacts() {
  static RateArtifacts a;
  return a;
}

bool rate_target(std::string& detail) {
  RateArtifacts& a = rate_artifacts();
  a.built = build_for_rate({3, 5, {2}, PrimeMode::InSet});
  const Manifest& mf = a.built.manifest;
  if (mf.family != Family::N1 || mf.m != 9 || mf.k != 3 || mf.q != 2) {
    detail = "unexpected parameters";
    return false;
  }
  a.code = scheme_merged(Family::N1, 9, 2, 2, 3);
  const bool shape = a.code.r == 6 && a.code.l == 10;
  const bool ok2 = verify(a.built.net, a.code).pass;
  a.ready = shape && ok2;
  bool refused = false;
  try {
    (void)scheme_merged(Family::N1, 9, 2, 3, 3);
  } catch (const SchemeRefused&) {
    refused = true;
  }
  SearchOptions opt;
  opt.samples = 1000;
  opt.seed = 20260101;
  opt.workers = 4;
  const SearchResult res = search(a.built.net, 6, 10, PrimeField(3), opt);
  detail = "(6,10) over GF(2) " + std::string(ok2 ? "verifies" : "fails") + ", GF(3) scheme " +
           (refused ? "refused" : "produced") + ", random search " + std::to_string(res.found) + "/" +
           std::to_string(res.examined);
  return shape && ok2 && refused && res.found == 0 && res.examined == 1000;
}

bool lemma1(std::string& detail) {
  RateArtifacts& a = rate_artifacts();
  if (!a.ready) {
    detail = "merged code unavailable";
    return false;
  }
  const SumNetwork base = build_n1({9, 2});
  const FracLinCode flat = unroll_lemma1(a.built.net, a.code, base, 3);
  const bool ok = flat.r == 6 && flat.l == 30 && verify(base, flat).pass;
  detail = "(" + std::to_string(flat.r) + "," + std::to_string(flat.l) + ") on N1(9,2)";
  return ok;
}

bool certificates(std::string& detail) {
  int checked = 0, bad = 0;
  auto check = [&](const SumNetwork& net, const FracLinCode& code, const Manifest& mf) {
    if (!verify(net, code).pass) return;
    const BoundReport rep = bound_check(net, code, applicable_mode(mf.family, mf.q, code.field.modulus()), mf);
    ++checked;
    if (rep.stacked_rank != rep.required_rank || !(rep.rate <= rep.implied_bound) || !rep.consistent) ++bad;
  };
  for (int m : kM)
    for (std::int64_t q : kQ)
      for (Family fam : {Family::N1, Family::N2}) {
        const BuiltNetwork b = build_family(fam, m, q);
        for (std::uint64_t p : kP) {
          try {
            check(b.net, fam == Family::N1 ? scheme_n1(m, q, p) : scheme_n2(m, q, p), b.manifest);
          } catch (const SchemeRefused&) {
          }
          check(b.net, routing_code(b.net, p), b.manifest);
        }
      }
  for (Family fam : {Family::N1, Family::N2}) {
    const BuiltNetwork b = build_family(fam, 3, 2, 2);
    for (std::uint64_t p : {2u, 3u}) {
      try {
        check(b.net, scheme_merged(fam, 3, 2, p, 2), b.manifest);
      } catch (const SchemeRefused&) {
      }
    }
  }
  if (rate_artifacts().ready) check(rate_artifacts().built.net, rate_artifacts().code, rate_artifacts().built.manifest);

  int closed_bad = 0;
  for (int m = 1; m <= 10; ++m)
    for (std::int64_t q = 2; q <= 30; ++q) {
      if (capacity(Family::N1, m, q) != Rational(2, m + 1)) ++closed_bad;
      if (wrong_char_bound(m, q) != Rational(2) / (Rational(m + 1) + Rational(2, q + 1))) ++closed_bad;
    }
  const bool six_elevenths = wrong_char_bound(2, 2) == Rational(6, 11);
  detail = std::to_string(checked) + " codes certified, " + std::to_string(bad) + " bad; closed forms " +
           (closed_bad == 0 && six_elevenths ? "exact" : "mismatch");
  return checked > 0 && bad == 0 && closed_bad == 0 && six_elevenths;
}

bool oracle_equivalence(std::string& detail) {
  const SumNetwork net = build_bottleneck2();
  SearchOptions opt;
  opt.strategy = SearchOptions::Strategy::Exhaustive;
  bool ok = true;
  detail.clear();
  for (std::int64_t p : {2, 3}) {
    const SearchResult res = search(net, 1, 1, PrimeField(static_cast<std::uint64_t>(p)), opt);
    const std::size_t want = oracle::bottleneck2_solution_composites(p).size();
    const std::size_t expected = p == 2 ? 1 : 2;
    ok = ok && res.found == want && want == expected;
    if (!detail.empty()) detail += ", ";
    detail += "GF(" + std::to_string(p) + ") " + std::to_string(res.found) + " vs oracle " + std::to_string(want);
  }
  return ok;
}

bool strictness(std::string& detail) {
  int cases = 0, held = 0;
  for (int m = 1; m <= 10; ++m)
    for (std::int64_t q = 2; q <= 30; ++q) {
      ++cases;
      if (wrong_char_bound(m, q) < Rational(2, m + 1)) ++held;
    }
  detail = std::to_string(held) + "/" + std::to_string(cases);
  return held == cases;
}

bool structural(std::string& detail) {
  int mismatches = 0, cells = 0;
  auto tally = [&](const SumNetwork& net, const oracle::Counts& want) {
    oracle::Counts got;
    for (const Node& n : net.nodes()) {
      got.sources += n.role == Role::Source;
      got.terminals += n.role == Role::Terminal;
      got.intermediates += n.role == Role::Intermediate;
    }
    for (const Edge& e : net.edges())
      got.middles += net.node(e.tail).role == Role::Intermediate && net.node(e.head).role == Role::Intermediate;
    got.edges = static_cast<std::int64_t>(net.edge_count());
    const bool same = got.sources == want.sources && got.terminals == want.terminals &&
                      got.intermediates == want.intermediates && got.middles == want.middles && got.edges == want.edges;
    const std::string text = serialize(net);
    const bool round_trip = serialize(deserialize(text)) == text;
    ++cells;
    if (!same || !round_trip) ++mismatches;
  };
  for (int m : kM)
    for (std::int64_t q : kQ) {
      tally(build_n1({m, q}), oracle::n1_counts(m, q));
      tally(build_n2({m, q}), oracle::n2_counts(m, q));
    }
  detail = std::to_string(cells - mismatches) + "/" + std::to_string(cells) + " networks";
  return mismatches == 0;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"characteristic grid N1", 10000, [](std::string& d) { return grid(Family::N1, d); }},
      {"characteristic grid N2", 10000, [](std::string& d) { return grid(Family::N2, d); }},
      {"rate target 3/5 over {2}", 60000, rate_target},
      {"k-copy unroll to (6,30)", 0, lemma1},
      {"bound certificates", 0, certificates},
      {"bottleneck2 oracle equivalence", 1000, oracle_equivalence},
      {"strictness of the wrong-characteristic bound", 0, strictness},
      {"structural counts and round trip", 0, structural},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    std::string detail;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
      ok = c.check(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_ms > 0 && ms >= c.limit_ms) {
      ok = false;
      detail += " (over the time limit)";
    }
    if (!ok) ++failed;
    std::printf("%s %s: %s [%.0f ms]\n", ok ? "PASS" : "FAIL", c.name.c_str(), detail.c_str(), ms);
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
