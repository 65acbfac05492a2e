#include "sumnet/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sumnet/analysis.hpp"

namespace sumnet::cli {

namespace {

using nlohmann::json;

// Input that cannot be used at all (missing files, bad parameters).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content)) throw UsageError("cannot write " + path);
}

// net.json -> net.manifest.json
std::string manifest_path_for(const std::string& net_path) {
  const std::string ext = ".json";
  if (net_path.size() > ext.size() && net_path.compare(net_path.size() - ext.size(), ext.size(), ext) == 0) {
    return net_path.substr(0, net_path.size() - ext.size()) + ".manifest.json";
  }
  return net_path + ".manifest.json";
}

struct Run {
  std::vector<std::string> artifacts;
  std::optional<std::uint64_t> seed;
  std::string summary;
  int exit_code = kExitOk;
};

struct Options {
  // build
  std::string family;
  int m = 0;
  std::int64_t q = 0;
  int k = 1;
  std::string rate;
  std::vector<std::uint64_t> primes;
  std::string mode = "in-set";
  std::string dot;
  // shared
  std::string net;
  std::string code;
  std::string manifest;
  std::string out;
  std::uint64_t p = 0;
  bool as_json = false;
  // scheme
  bool routing = false;
  // search
  int r = 0;
  int l = 0;
  bool exhaustive = false;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  bool include_scheme = false;
  std::uint64_t budget = std::uint64_t{1} << 20;
  unsigned workers = 1;
  std::size_t keep = 16;
  // unroll
  std::string base_out;
};

Manifest load_manifest(const Options& o) {
  return manifest_from_json(read_file(o.manifest.empty() ? manifest_path_for(o.net) : o.manifest));
}

// The network must be exactly what its manifest describes.
Manifest checked_manifest(const Options& o, const SumNetwork& net) {
  const Manifest mf = load_manifest(o);
  if (mf.family == Family::Bottleneck2) {
    if (!(build_bottleneck2() == net)) throw UsageError("network file does not match its manifest");
    return mf;
  }
  if (!(build_family(mf.family, mf.m, mf.q, mf.k).net == net)) {
    throw UsageError("network file does not match its manifest");
  }
  return mf;
}

void cmd_build(const Options& o, std::ostream& out, Run& run) {
  BuiltNetwork built = [&] {
    if (!o.rate.empty()) {
      const auto rate = parse_rational(o.rate);
      if (!rate || *rate <= 0) throw UsageError("--rate must be a positive fraction k/n");
      const auto mode = parse_prime_mode(o.mode);
      if (!mode) throw UsageError("--mode must be in-set or not-in-set");
      return build_for_rate(RateTarget{rate->numerator(), rate->denominator(), o.primes, *mode});
    }
    const auto family = parse_family(o.family);
    if (!family) throw UsageError("--family must be n1, n2 or bottleneck2");
    return build_family(*family, o.m, o.q, o.k);
  }();
  write_file(o.out, serialize(built.net));
  const std::string mpath = manifest_path_for(o.out);
  write_file(mpath, manifest_to_json(built.manifest));
  run.artifacts = {o.out, mpath};
  if (!o.dot.empty()) {
    write_file(o.dot, to_dot(built.net));
    run.artifacts.push_back(o.dot);
  }
  std::ostringstream s;
  s << "built " << to_string(built.manifest.family);
  if (built.manifest.family != Family::Bottleneck2) s << " m=" << built.manifest.m << " q=" << built.manifest.q;
  s << " k=" << built.manifest.k << ": " << built.net.sources().size() << " sources, "
    << built.net.terminals().size() << " terminals, " << built.net.node_count() << " nodes, "
    << built.net.edge_count() << " edges; capacity " << to_string(built.manifest.capacity);
  run.summary = s.str();
  out << run.summary << "\n";
}

void cmd_scheme(const Options& o, std::ostream& out, Run& run) {
  const SumNetwork net = deserialize(read_file(o.net));
  FracLinCode code = [&] {
    if (o.routing) return routing_code(net, o.p);
    const Manifest mf = checked_manifest(o, net);
    if (mf.family == Family::Bottleneck2) throw UsageError("bottleneck2 has no family scheme; use --routing");
    return scheme_merged(mf.family, mf.m, mf.q, o.p, mf.k);
  }();
  write_file(o.out, code_to_json(net, code));
  run.artifacts = {o.out};
  run.summary = std::string(o.routing ? "routing" : "scheme") + " code (r, l) = (" + std::to_string(code.r) + ", " +
                std::to_string(code.l) + ") over GF(" + std::to_string(o.p) + ")";
  out << run.summary << " written to " << o.out << "\n";
}

void cmd_verify(const Options& o, std::ostream& out, Run& run) {
  const SumNetwork net = deserialize(read_file(o.net));
  const FracLinCode code = code_from_json(net, read_file(o.code));
  const VerifyReport report = verify(net, code);
  out << (o.as_json ? report.to_json(net) : report.to_text());
  run.summary = report.pass ? "pass" : "fail: " + *report.first_failure;
  run.exit_code = report.pass ? kExitOk : kExitFail;
}

void cmd_search(const Options& o, std::ostream& out, Run& run) {
  const SumNetwork net = deserialize(read_file(o.net));
  const PrimeField field(o.p);
  SearchOptions opts;
  opts.strategy = o.exhaustive ? SearchOptions::Strategy::Exhaustive : SearchOptions::Strategy::Random;
  opts.samples = o.samples;
  opts.seed = o.seed;
  opts.budget = o.budget;
  opts.workers = o.workers;
  opts.keep = o.keep;
  if (!o.exhaustive) run.seed = o.seed;
  std::string note;
  if (o.include_scheme) {
    const Manifest mf = checked_manifest(o, net);
    if (mf.family == Family::Bottleneck2) throw UsageError("bottleneck2 has no family scheme to include");
    try {
      const FracLinCode sc = scheme_merged(mf.family, mf.m, mf.q, o.p, mf.k);
      if (sc.r == o.r && sc.l == o.l) {
        opts.extra.push_back(composites_of(net, sc));
      } else {
        note = "scheme shape differs from (r, l); not included";
      }
    } catch (const SchemeRefused& e) {
      note = std::string("scheme not included: ") + e.what();
    }
  }
  const SearchResult res = search(net, o.r, o.l, field, opts);
  const std::string doc = res.to_json(net, opts);
  if (!o.out.empty()) {
    write_file(o.out, doc);
    run.artifacts = {o.out};
  }
  run.summary = "examined " + std::to_string(res.examined) + " candidates, found " + std::to_string(res.found);
  if (!note.empty()) out << note << "\n";
  out << run.summary << "\n";
  if (o.out.empty()) out << doc;
  run.exit_code = res.found > 0 ? kExitOk : kExitFail;
}

void cmd_bounds(const Options& o, std::ostream& out, Run& run) {
  const SumNetwork net = deserialize(read_file(o.net));
  const Manifest mf = checked_manifest(o, net);
  if (mf.family == Family::Bottleneck2) throw UsageError("bounds are defined for the n1 and n2 families only");
  const Rational cap = capacity(mf.family, mf.m, mf.q, mf.k);
  const Rational wrong = wrong_char_bound(mf.m, mf.q) * mf.k;
  std::optional<BoundReport> rep;
  if (!o.code.empty()) {
    const FracLinCode code = code_from_json(net, read_file(o.code));
    rep = bound_check(net, code, applicable_mode(mf.family, mf.q, code.field.modulus()), mf);
  }
  if (o.as_json) {
    json doc;
    doc["family"] = std::string(to_string(mf.family));
    doc["capacity"] = to_string(cap);
    doc["wrong_char_bound"] = to_string(wrong);
    doc["certificate"] = rep ? json::parse(rep->to_json()) : json(nullptr);
    out << doc.dump(2) << "\n";
  } else {
    out << "capacity: " << to_string(cap) << "\n"
        << "wrong-characteristic bound: " << to_string(wrong) << "\n";
    if (rep) out << rep->to_text();
  }
  run.summary = "capacity " + to_string(cap) + ", wrong-characteristic bound " + to_string(wrong);
  if (rep) run.summary += rep->consistent ? ", certificate consistent" : ", certificate violated";
  run.exit_code = !rep || rep->consistent ? kExitOk : kExitFail;
}

void cmd_unroll(const Options& o, std::ostream& out, Run& run) {
  const SumNetwork merged = deserialize(read_file(o.net));
  const Manifest mf = checked_manifest(o, merged);
  if (mf.family == Family::Bottleneck2) throw UsageError("unroll needs an n1 or n2 merge");
  const FracLinCode code = code_from_json(merged, read_file(o.code));
  const SumNetwork base = build_family(mf.family, mf.m, mf.q, 1).net;
  const FracLinCode unrolled = unroll_lemma1(merged, code, base, mf.k);
  write_file(o.out, code_to_json(base, unrolled));
  run.artifacts = {o.out};
  if (!o.base_out.empty()) {
    write_file(o.base_out, serialize(base));
    run.artifacts.push_back(o.base_out);
  }
  run.summary = "unrolled to (r, l) = (" + std::to_string(unrolled.r) + ", " + std::to_string(unrolled.l) + ")";
  out << run.summary << " written to " << o.out << "\n";
}

json parameters_of(const CLI::App& sub) {
  json params = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->count() == 0 || opt->get_lnames().empty()) continue;
    const auto& results = opt->results();
    const std::string name = opt->get_lnames().front();
    if (results.size() == 1) {
      params[name] = results.front();
    } else {
      params[name] = results;
    }
  }
  return params;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  Options o;
  std::string run_manifest;

  CLI::App app{"Sum-network constructions, codes, verification, search and bounds", "sumnet"};
  app.require_subcommand(1);
  app.add_option("--run-manifest", run_manifest, "Write the run manifest here instead of stderr");

  CLI::App* build = app.add_subcommand("build", "Build a family network and its manifest");
  auto* fam = build->add_option("--family", o.family, "n1, n2 or bottleneck2");
  build->add_option("--m", o.m, "Number of groups")->check(CLI::PositiveNumber);
  build->add_option("--q", o.q, "Middle-edge multiplicity parameter")->check(CLI::Range(std::int64_t{2}, std::int64_t{1} << 31));
  build->add_option("--k", o.k, "Number of merged copies")->check(CLI::PositiveNumber);
  auto* rate = build->add_option("--rate", o.rate, "Target rate k/n");
  build->add_option("--primes", o.primes, "Comma-separated prime set")->delimiter(',');
  build->add_option("--mode", o.mode, "in-set or not-in-set");
  build->add_option("--out", o.out, "Network file")->required();
  build->add_option("--dot", o.dot, "Also write Graphviz DOT here");
  fam->excludes(rate);
  rate->excludes(fam);

  CLI::App* scheme = app.add_subcommand("scheme", "Write the family's capacity-achieving code");
  scheme->add_option("--net", o.net, "Network file")->required();
  scheme->add_option("--p", o.p, "Field characteristic")->required();
  scheme->add_option("--out", o.out, "Code file")->required();
  scheme->add_option("--manifest", o.manifest, "Manifest (default: <net>.manifest.json)");
  scheme->add_flag("--routing", o.routing, "Write the r = 1 routing code instead");

  CLI::App* ver = app.add_subcommand("verify", "Check that every terminal decodes the sum");
  ver->add_option("--net", o.net, "Network file")->required();
  ver->add_option("--code", o.code, "Code file")->required();
  ver->add_flag("--json", o.as_json, "JSON report");

  CLI::App* srch = app.add_subcommand("search", "Search middle-edge composites for solutions");
  srch->add_option("--net", o.net, "Network file")->required();
  srch->add_option("--r", o.r, "Source block length")->required()->check(CLI::PositiveNumber);
  srch->add_option("--l", o.l, "Edge block length")->required()->check(CLI::PositiveNumber);
  srch->add_option("--p", o.p, "Field characteristic")->required();
  auto* exh = srch->add_flag("--exhaustive", o.exhaustive, "Enumerate every composite");
  auto* rnd = srch->add_option("--random", o.samples, "Number of random candidates");
  exh->excludes(rnd);
  rnd->excludes(exh);
  auto* seed = srch->add_option("--seed", o.seed, "Random seed (required with --random)");
  rnd->needs(seed);
  srch->add_flag("--include-scheme", o.include_scheme, "Also try the family scheme's composites");
  srch->add_option("--manifest", o.manifest, "Manifest (default: <net>.manifest.json)");
  srch->add_option("--budget", o.budget, "Largest exhaustive space");
  srch->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
  srch->add_option("--keep", o.keep, "Found codes to write out");
  srch->add_option("--out", o.out, "Results file");

  CLI::App* bnd = app.add_subcommand("bounds", "Closed-form bounds and, with a code, a rank certificate");
  bnd->add_option("--net", o.net, "Network file")->required();
  bnd->add_option("--code", o.code, "Verified code file");
  bnd->add_option("--manifest", o.manifest, "Manifest (default: <net>.manifest.json)");
  bnd->add_flag("--json", o.as_json, "JSON report");

  CLI::App* unr = app.add_subcommand("unroll", "Turn a code on a k-copy merge into one on the base network");
  unr->add_option("--net", o.net, "Merged network file")->required();
  unr->add_option("--code", o.code, "Code on the merged network")->required();
  unr->add_option("--manifest", o.manifest, "Manifest (default: <net>.manifest.json)");
  unr->add_option("--out", o.out, "Code file for the base network")->required();
  unr->add_option("--base-out", o.base_out, "Also write the base network here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (sub == srch && !o.exhaustive && rnd->count() == 0) {
    err << "error: search needs --exhaustive or --random N\n";
    return kExitUsage;
  }
  if (sub == build && o.rate.empty() && o.family.empty()) {
    err << "error: build needs --family or --rate\n";
    return kExitUsage;
  }

  Run record;
  try {
    if (sub == build) cmd_build(o, out, record);
    if (sub == scheme) cmd_scheme(o, out, record);
    if (sub == ver) cmd_verify(o, out, record);
    if (sub == srch) cmd_search(o, out, record);
    if (sub == bnd) cmd_bounds(o, out, record);
    if (sub == unr) cmd_unroll(o, out, record);
  } catch (const SchemeRefused& e) {
    err << "refused: " << e.what() << "\n";
    record.exit_code = kExitFail;
    record.summary = std::string("refused: ") + e.what();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    record.exit_code = kExitUsage;
    record.summary = std::string("error: ") + e.what();
  }

  const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started);
  json manifest;
  manifest["command"] = sub->get_name();
  manifest["parameters"] = parameters_of(*sub);
  manifest["seed"] = record.seed ? json(*record.seed) : json(nullptr);
  manifest["artifacts"] = record.artifacts;
  manifest["pass"] = record.exit_code == kExitOk;
  manifest["summary"] = record.summary;
  manifest["exit_code"] = record.exit_code;
  manifest["wall_time_ms"] = elapsed.count();
  if (run_manifest.empty()) {
    err << manifest.dump() << "\n";
  } else {
    try {
      write_file(run_manifest, manifest.dump() + "\n");
    } catch (const UsageError& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }
  }
  return record.exit_code;
}

}  // namespace sumnet::cli
