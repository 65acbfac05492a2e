// Exact rationals for rates and bounds.
#ifndef SUMNET_RATIONAL_HPP
#define SUMNET_RATIONAL_HPP

#include <boost/rational.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace sumnet {

using Rational = boost::rational<std::int64_t>;

/// "n/d", or "n" when the denominator is 1.
std::string to_string(const Rational& r);
/// Accepts "k/n" or "k"; rejects zero denominators and malformed text.
std::optional<Rational> parse_rational(std::string_view text);

}  // namespace sumnet

#endif  // SUMNET_RATIONAL_HPP
