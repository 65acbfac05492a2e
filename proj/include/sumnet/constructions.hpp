// Builders for the parametric sum-network families.
//
// Node labels follow one fixed scheme so that files are reproducible:
//   sources      s_i, s_i_j, s_i_x_j
//   intermediate u_i_j, v_i_j            (middle edge u_i_j -> v_i_j)
//   terminals    t_i, t_i_j, t_i_x_j, tp_i_x (the primed terminals of N2)
// k-copy merges suffix intermediates with _c<copy>, copies numbered from 1.
#ifndef SUMNET_CONSTRUCTIONS_HPP
#define SUMNET_CONSTRUCTIONS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sumnet/network.hpp"
#include "sumnet/rational.hpp"

namespace sumnet {

enum class Family { N1, N2, Bottleneck2 };

std::string_view to_string(Family family);
std::optional<Family> parse_family(std::string_view text);

/// Whether the capacity-achieving scheme needs the characteristic inside the
/// chosen prime set (N1) or outside it (N2).
enum class PrimeMode { InSet, NotInSet };

std::string_view to_string(PrimeMode mode);
std::optional<PrimeMode> parse_prime_mode(std::string_view text);

struct N1Params {
  int m = 1;
  std::int64_t q = 2;
};

struct N2Params {
  int m = 1;
  std::int64_t q = 2;
};

struct RateTarget {
  std::int64_t k = 1;
  std::int64_t n = 1;
  std::vector<std::uint64_t> primes;
  PrimeMode mode = PrimeMode::InSet;
};

/// Describes how a network file was produced; written next to it.
struct Manifest {
  Family family = Family::N1;
  int m = 0;
  std::int64_t q = 0;
  int k = 1;
  std::vector<std::uint64_t> primes;
  std::optional<PrimeMode> mode;
  Rational capacity{1};

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

struct BuiltNetwork {
  SumNetwork net;
  Manifest manifest;
};

/// Throws std::invalid_argument for m < 1 or q < 2.
SumNetwork build_n1(const N1Params& params);
SumNetwork build_n2(const N2Params& params);
/// Two sources share one middle edge that feeds two terminals.
SumNetwork build_bottleneck2();

/// k disjoint copies with same-labeled sources and terminals identified.
/// Edge c*E + e of the result (c zero-based, E = base edge count) is copy c+1
/// of base edge e. In-edge lists are copy-major, then base order. k = 1
/// returns the base unchanged.
SumNetwork k_copy_merge(const SumNetwork& base, int k);

/// Family network with its manifest; k > 1 merges k copies.
BuiltNetwork build_family(Family family, int m, std::int64_t q, int k = 1);

/// q = product of the primes, m = 2n - 1, base N1 (InSet) or N2 (NotInSet),
/// merged k times. Throws std::invalid_argument on bad targets and
/// std::overflow_error if q reaches the field ceiling.
BuiltNetwork build_for_rate(const RateTarget& target);

/// Distinct prime factors of n in increasing order.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

std::string manifest_to_json(const Manifest& manifest);
/// Throws ParseError.
Manifest manifest_from_json(std::string_view text);

namespace labels {
std::string source(int i);
std::string source(int i, int j);
std::string source(int i, int x, int j);
std::string terminal(int i);
std::string terminal(int i, int j);
std::string terminal(int i, int x, int j);
std::string terminal_primed(int i, int x);
std::string u(int i, int j);
std::string v(int i, int j);
/// Appends the copy suffix used by k_copy_merge.
std::string copy(std::string_view label, int c);
}  // namespace labels

/// The middle edge u_i_j -> v_i_j, optionally inside merge copy c (1-based).
EdgeId middle_edge(const SumNetwork& net, int i, int j, std::optional<int> copy = std::nullopt);

}  // namespace sumnet

#endif  // SUMNET_CONSTRUCTIONS_HPP
