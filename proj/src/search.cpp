#include <algorithm>
#include <random>
#include <thread>

#include <json.hpp>

#include "sumnet/analysis.hpp"

namespace sumnet {

namespace {

template <class Fill>
CompositeEncoding make_composites(const DecoderSynthesizer& synth, int r, int l, PrimeField field, Fill&& fill) {
  CompositeEncoding out;
  for (const auto& mid : synth.layering().middles) {
    Mat c(field, l, static_cast<Index>(r) * static_cast<Index>(mid.reach.size()));
    for (Index i = 0; i < c.rows(); ++i)
      for (Index j = 0; j < c.cols(); ++j) c.set(i, j, fill());
    out.maps.push_back(std::move(c));
  }
  return out;
}

// Candidate `index` of an exhaustive search: its base-p digits, least
// significant first, in row-major entry order across the middle edges.
CompositeEncoding enumerated_composites(const DecoderSynthesizer& synth, int r, int l, PrimeField field,
                                        std::uint64_t index) {
  const std::uint64_t p = field.modulus();
  return make_composites(synth, r, l, field, [&] {
    const auto digit = static_cast<Residue>(index % p);
    index /= p;
    return digit;
  });
}

}  // namespace

CompositeEncoding random_composites(const DecoderSynthesizer& synth, int r, int l, PrimeField field,
                                    std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<Residue> dist(0, static_cast<Residue>(field.modulus()) - 1);
  return make_composites(synth, r, l, field, [&] { return dist(rng); });
}

SearchResult search(const SumNetwork& net, int r, int l, PrimeField field, const SearchOptions& options) {
  const DecoderSynthesizer synth(net, r, l, field);

  std::uint64_t generated = 0;
  if (options.strategy == SearchOptions::Strategy::Exhaustive) {
    const std::size_t entries = synth.composite_entries();
    std::uint64_t space = 1;
    for (std::size_t i = 0; i < entries; ++i) {
      if (space > options.budget / field.modulus()) {
        throw BudgetExceeded("exhaustive search space p^" + std::to_string(entries) + " exceeds the budget of " +
                             std::to_string(options.budget) + " candidates");
      }
      space *= field.modulus();
    }
    generated = space;
  } else {
    generated = options.samples;
  }

  const std::uint64_t extra = options.extra.size();
  const std::uint64_t total = extra + generated;
  auto candidate = [&](std::uint64_t i) {
    if (i < extra) return options.extra[i];
    if (options.strategy == SearchOptions::Strategy::Exhaustive) return enumerated_composites(synth, r, l, field, i - extra);
    return random_composites(synth, r, l, field, options.seed, i - extra);
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(std::max<std::uint64_t>(total, 1))));
  std::vector<std::vector<std::uint64_t>> hits(workers);
  auto run = [&](unsigned w) {
    const std::uint64_t begin = total * w / workers;
    const std::uint64_t end = total * (w + 1) / workers;
    for (std::uint64_t i = begin; i < end; ++i)
      if (synth.feasible(candidate(i))) hits[w].push_back(i);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }

  SearchResult result;
  result.examined = total;
  for (const auto& h : hits) result.found_indices.insert(result.found_indices.end(), h.begin(), h.end());
  result.found = result.found_indices.size();
  for (std::size_t k = 0; k < result.found_indices.size() && k < options.keep; ++k) {
    Feasibility f = synth.solve(candidate(result.found_indices[k]));
    result.codes.push_back(std::move(*f.code));
  }
  return result;
}

std::string SearchResult::to_json(const SumNetwork& net, const SearchOptions& options) const {
  nlohmann::json doc;
  doc["strategy"] = options.strategy == SearchOptions::Strategy::Exhaustive ? "exhaustive" : "random";
  if (options.strategy == SearchOptions::Strategy::Random) doc["seed"] = options.seed;
  doc["extra_candidates"] = options.extra.size();
  doc["examined"] = examined;
  doc["found"] = found;
  doc["found_indices"] = found_indices;
  nlohmann::json codes_json = nlohmann::json::array();
  for (const FracLinCode& c : codes) codes_json.push_back(nlohmann::json::parse(code_to_json(net, c)));
  doc["codes"] = std::move(codes_json);
  return doc.dump(2) + "\n";
}

}  // namespace sumnet
