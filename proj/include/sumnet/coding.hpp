// Fractional linear network codes and their verification.
//
// An (r, l) code assigns every edge out of a source an l x r matrix, every
// other edge one l x l matrix per in-edge of its tail (in declared in-edge
// order), and every terminal one r x l decoding matrix per in-edge. A code is
// a solution when each terminal's end-to-end map equals [I_r | I_r | ... | I_r]
// over the global source vector, i.e. it outputs the sum of all sources.
#ifndef SUMNET_CODING_HPP
#define SUMNET_CODING_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sumnet/constructions.hpp"
#include "sumnet/galois.hpp"
#include "sumnet/matrix.hpp"
#include "sumnet/network.hpp"

namespace sumnet {

/// A scheme is only claimed for certain characteristics; asking for it
/// elsewhere is refused rather than answered with a non-solution.
class SchemeRefused : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The network does not have the source -> u -> v -> terminal shape (plus
/// direct source -> terminal edges) that an operation requires.
class UnsupportedNetwork : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct FracLinCode {
  int r = 1;
  int l = 1;
  PrimeField field{2};
  /// Indexed by edge id.
  std::vector<std::vector<Mat>> edge_maps;
  /// Indexed by node id; empty for non-terminals.
  std::vector<std::vector<Mat>> decoders;

  friend bool operator==(const FracLinCode&, const FracLinCode&) = default;
};

/// Components [begin, begin + len) of an r-block travel on the c-th (0-based)
/// of d parallel edges from one source to one head.
std::pair<int, int> direct_split(int r, int d, int c);

/// Every source edge forwards its block into the leading components, every
/// other edge carries identity maps, and every decoder reads the leading r
/// components of each in-edge. Requires l >= r.
FracLinCode forwarding_code(const SumNetwork& net, int r, int l, PrimeField field);

/// Throws ShapeMismatch naming the first edge or terminal whose matrices do
/// not match the network and (r, l).
void check_shapes(const SumNetwork& net, const FracLinCode& code);

/// A linear map from the global source vector, stored as the nonzero r-wide
/// column blocks keyed by source position.
class BlockTransfer {
 public:
  BlockTransfer(PrimeField field, Index rows, int r, std::size_t sources)
      : field_(field), rows_(rows), r_(r), sources_(sources) {}

  Index rows() const noexcept { return rows_; }
  const std::map<std::size_t, Mat>& blocks() const noexcept { return blocks_; }
  /// Block of a source position, or nullopt if that block is zero.
  const Mat* block(std::size_t source) const;

  void add_block(std::size_t source, const Mat& m);
  /// this += coeff * other
  void accumulate(const Mat& coeff, const BlockTransfer& other);

  /// rows x (r * sources) dense form.
  Mat dense() const;

 private:
  PrimeField field_;
  Index rows_;
  int r_;
  std::size_t sources_;
  std::map<std::size_t, Mat> blocks_;
};

struct TransferMap {
  /// Indexed by edge id.
  std::vector<BlockTransfer> edges;
  /// Indexed by node id; set for terminals only.
  std::vector<std::optional<BlockTransfer>> terminals;
};

TransferMap transfer(const SumNetwork& net, const FracLinCode& code);

struct TerminalResidual {
  NodeId terminal;
  std::string label;
  /// Terminal map minus [I_r | ... | I_r]; zero iff the terminal decodes the sum.
  Mat residual;
};

struct VerifyReport {
  bool pass = false;
  std::vector<TerminalResidual> terminals;
  std::optional<std::string> first_failure;

  std::size_t failing_count() const;
  std::string to_text() const;
  std::string to_json(const SumNetwork& net) const;
};

VerifyReport verify(const SumNetwork& net, const FracLinCode& code);

/// (2, m+1) code on build_n1({m, q}); refused unless p divides q.
FracLinCode scheme_n1(int m, std::int64_t q, std::uint64_t p);
/// (2, m+1) code on build_n2({m, q}); refused when p divides q.
FracLinCode scheme_n2(int m, std::int64_t q, std::uint64_t p);
/// (2k, m+1) code on build_family(family, m, q, k): copy c carries source
/// components 2c-1 and 2c through the base scheme.
FracLinCode scheme_merged(Family family, int m, std::int64_t q, std::uint64_t p, int k);

/// Turns a solution on k_copy_merge(base, k) into an (r, l*k) solution on
/// base: each base edge carries the stacked messages of its k images.
/// Refuses codes that do not verify.
FracLinCode unroll_lemma1(const SumNetwork& merged, const FracLinCode& merged_code, const SumNetwork& base, int k);

/// r = 1 baseline: every middle edge forwards each source that reaches it in
/// its own component, so decoding never depends on the characteristic.
FracLinCode routing_code(const SumNetwork& net, std::uint64_t p);

/// Edge classification for networks of the form
/// source -> u -> v -> terminal plus direct source -> terminal edges, where
/// each u feeds exactly one middle edge u -> v and each v hears only it.
struct Layering {
  enum class Kind { Feeder, Middle, Tap, Direct };

  struct Middle {
    EdgeId edge;
    /// Sources reaching the middle edge, in the tail's in-edge order.
    std::vector<NodeId> reach;
    /// Source edges into the tail, aligned with `reach`.
    std::vector<EdgeId> feeders;
  };

  std::vector<Middle> middles;
  std::vector<Kind> kind;
  /// For Feeder, Middle and Tap edges: index into `middles`.
  std::vector<std::size_t> middle_of;
};

/// Throws UnsupportedNetwork if the shape does not match.
Layering layer(const SumNetwork& net);

/// Code file (JSON) keyed by edge and terminal labels.
std::string code_to_json(const SumNetwork& net, const FracLinCode& code);
/// Throws ParseError; the result is shape-checked against net.
FracLinCode code_from_json(const SumNetwork& net, std::string_view text);

}  // namespace sumnet

#endif  // SUMNET_CODING_HPP
