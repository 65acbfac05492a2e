// Decoder synthesis, code search, rank-counting bound certificates and the
// closed-form capacity expressions.
#ifndef SUMNET_ANALYSIS_HPP
#define SUMNET_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sumnet/constructions.hpp"
#include "sumnet/rational.hpp"

namespace sumnet {

struct FracLinCode;
class SumNetwork;

/// 2k/(m+1) for N1 and N2; k for bottleneck2.
Rational capacity(Family family, int m, std::int64_t q, int k = 1);
/// 2/(m + 1 + 2/(q+1)): the linear-coding ceiling when the characteristic
/// falls on the wrong side of q.
Rational wrong_char_bound(int m, std::int64_t q);

}  // namespace sumnet

#include "sumnet/coding.hpp"

namespace sumnet {

/// End-to-end map from the reaching sources to each middle edge's message,
/// aligned with Layering::middles: an l x (r * |reach|) matrix per middle edge.
struct CompositeEncoding {
  std::vector<Mat> maps;

  friend bool operator==(const CompositeEncoding&, const CompositeEncoding&) = default;
};

/// Reads the composites off a code's transfer matrices.
CompositeEncoding composites_of(const SumNetwork& net, const FracLinCode& code);

struct Feasibility {
  std::optional<FracLinCode> code;
  /// Label of the first terminal without decoders (when infeasible).
  std::string unsatisfiable;

  bool feasible() const noexcept { return code.has_value(); }
};

/// Synthesizes decoders for fixed composites. Tap decoders solve for identity
/// on every source block that has no direct edge into the terminal; direct
/// decoders absorb whatever residual is left on the remaining blocks.
class DecoderSynthesizer {
 public:
  /// Throws UnsupportedNetwork when the network is not layered or direct
  /// edges cannot carry a full r-block.
  DecoderSynthesizer(const SumNetwork& net, int r, int l, PrimeField field);

  const Layering& layering() const noexcept { return layering_; }
  /// Number of field entries in one CompositeEncoding.
  std::size_t composite_entries() const;

  /// Cheap check without assembling a code.
  bool feasible(const CompositeEncoding& composites, std::string* failing = nullptr) const;
  Feasibility solve(const CompositeEncoding& composites) const;

 private:
  struct Tap {
    std::size_t in_pos;
    std::size_t middle;
    /// Slot of each required block within the middle's reach, or -1.
    std::vector<std::ptrdiff_t> slot_of_required;
  };
  struct DirectGroup {
    std::size_t source_pos;
    NodeId source;
    std::vector<std::size_t> in_pos;  // parallel edges in par order
  };
  struct TerminalPlan {
    NodeId terminal;
    std::vector<Tap> taps;
    std::vector<DirectGroup> direct;
    std::vector<std::size_t> required;  // source positions without direct edges
  };

  std::optional<Mat> tap_decoders(const TerminalPlan& plan, const CompositeEncoding& composites) const;
  void check_composites(const CompositeEncoding& composites) const;

  const SumNetwork* net_;
  int r_;
  int l_;
  PrimeField field_;
  Layering layering_;
  std::vector<TerminalPlan> plans_;
};

Feasibility feasible_decoders(const SumNetwork& net, const CompositeEncoding& composites, int r, int l,
                              PrimeField field);

struct SearchOptions {
  enum class Strategy { Exhaustive, Random };
  Strategy strategy = Strategy::Random;
  std::uint64_t samples = 1000;
  std::uint64_t seed = 0;
  /// Largest composite space enumerated exhaustively.
  std::uint64_t budget = std::uint64_t{1} << 20;
  unsigned workers = 1;
  /// How many found codes to keep (all are counted).
  std::size_t keep = 16;
  /// Candidates examined before the enumerated or sampled ones.
  std::vector<CompositeEncoding> extra;
};

class BudgetExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct SearchResult {
  std::uint64_t examined = 0;
  std::uint64_t found = 0;
  /// Candidate index of every hit: extra candidates first, then generated ones.
  std::vector<std::uint64_t> found_indices;
  std::vector<FracLinCode> codes;

  std::string to_json(const SumNetwork& net, const SearchOptions& options) const;
};

/// Candidate i of a random search depends only on (seed, i), so results do
/// not depend on the worker count.
SearchResult search(const SumNetwork& net, int r, int l, PrimeField field, const SearchOptions& options);

/// Composite for candidate `index` of a random search.
CompositeEncoding random_composites(const DecoderSynthesizer& synth, int r, int l, PrimeField field,
                                    std::uint64_t seed, std::uint64_t index);

enum class BoundMode { N1Claim1, N1Claim2, N2Claim3, N2Claim4 };

std::string_view to_string(BoundMode mode);
/// N1: Claim1 when p | q, else Claim2. N2: Claim3 when p does not divide q, else Claim4.
BoundMode applicable_mode(Family family, std::int64_t q, std::uint64_t p);

struct BoundReport {
  BoundMode mode = BoundMode::N1Claim1;
  std::size_t stacked_rank = 0;
  std::size_t required_rank = 0;  // r * |S|
  /// Only in N2Claim4: ranks behind rank(A+B) <= rank(A) + rank(B) - rank(C).
  std::optional<std::size_t> rank_a, rank_b, rank_c;
  bool c_in_a = true;
  bool c_in_b = true;
  /// Dimension count the certificate implies: lhs >= rhs.
  std::int64_t lhs = 0;
  std::int64_t rhs = 0;
  std::string inequality;
  Rational rate;
  Rational implied_bound;
  Rational closed_form;
  /// The certificate holds and the code's rate respects it.
  bool consistent = false;
  std::string violation;

  std::string to_text() const;
  std::string to_json() const;
};

/// Throws std::invalid_argument if the code does not verify or the manifest
/// does not describe an n1/n2 family network.
BoundReport bound_check(const SumNetwork& net, const FracLinCode& code, BoundMode mode, const Manifest& manifest);

}  // namespace sumnet

#endif  // SUMNET_ANALYSIS_HPP
