#include "cmr/coding.hpp"

#include <stdexcept>

namespace cmr::coding {

Nat pair(const Nat& m, const Nat& n) {
  Nat s = m + n;
  return s * (s + 1) / 2 + m;
}

std::pair<Nat, Nat> unpair(const Nat& k) {
  // Diagonal index s is the largest with s(s+1)/2 <= k.
  Nat s = (boost::multiprecision::sqrt(Nat(8 * k + 1)) - 1) / 2;
  Nat base = s * (s + 1) / 2;
  Nat m = k - base;
  return {m, s - m};
}

Nat tuple(const std::vector<Nat>& xs) {
  if (xs.empty()) throw std::invalid_argument("tuple: empty list has no code");
  Nat acc = xs.back();
  for (std::size_t i = xs.size() - 1; i-- > 0;) acc = pair(xs[i], acc);
  return acc;
}

std::vector<Nat> untuple(const Nat& code, std::size_t arity) {
  std::vector<Nat> out;
  if (arity == 0) return out;
  out.reserve(arity);
  Nat rest = code;
  for (std::size_t i = 0; i + 1 < arity; ++i) {
    auto [head, tail] = unpair(rest);
    out.push_back(std::move(head));
    rest = std::move(tail);
  }
  out.push_back(std::move(rest));
  return out;
}

Nat seq_encode(const std::vector<Nat>& xs) {
  if (xs.empty()) return pair(0, 0);
  return pair(Nat(xs.size()), tuple(xs));
}

std::vector<Nat> seq_decode(const Nat& code) {
  auto [len, body] = unpair(code);
  if (len == 0) return {};
  std::size_t n = len > kMaxSeqLength ? kMaxSeqLength : static_cast<std::size_t>(len);
  if (n == static_cast<std::size_t>(len)) return untuple(body, n);
  // Over-long prefix: keep the first n components of the full decoding.
  std::vector<Nat> out;
  Nat rest = body;
  for (std::size_t i = 0; i < n; ++i) {
    auto [head, tail] = unpair(rest);
    out.push_back(std::move(head));
    rest = std::move(tail);
  }
  return out;
}

Nat parse_nat(const std::string& digits) {
  if (digits.empty()) throw std::invalid_argument("empty numeral");
  for (char c : digits)
    if (c < '0' || c > '9') throw std::invalid_argument("not a numeral: " + digits);
  return Nat(digits);
}

std::string to_string(const Nat& n) { return n.str(); }

}  // namespace cmr::coding
