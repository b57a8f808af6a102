#pragma once

// Numeric codes shared by every other module: the Cantor-style pairing
// bijection, right-nested tuples and length-prefixed finite sequences.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace cmr {

using Nat = boost::multiprecision::cpp_int;

namespace coding {

/// <m, n> = (m + n)(m + n + 1)/2 + m.
Nat pair(const Nat& m, const Nat& n);

/// Inverse of pair; total on N.
std::pair<Nat, Nat> unpair(const Nat& k);

/// Right-nested pairing: tuple({a}) = a, tuple({a, b, ...}) = pair(a, tuple({b, ...})).
/// Throws std::invalid_argument on an empty list.
Nat tuple(const std::vector<Nat>& xs);

/// Splits a code into `arity` components, inverting tuple() for that arity.
std::vector<Nat> untuple(const Nat& code, std::size_t arity);

/// Longest sequence seq_decode will materialise; longer length prefixes are
/// truncated to this many elements.
inline constexpr std::size_t kMaxSeqLength = 1u << 16;

/// seq_encode(xs) = pair(len(xs), body) with body = tuple(xs), and body = 0
/// for the empty sequence.
Nat seq_encode(const std::vector<Nat>& xs);

/// Total decoder. Codes with length 0 decode to the empty sequence whatever
/// their body; length prefixes above kMaxSeqLength keep only that prefix.
std::vector<Nat> seq_decode(const Nat& code);

Nat parse_nat(const std::string& digits);
std::string to_string(const Nat& n);

}  // namespace coding
}  // namespace cmr
