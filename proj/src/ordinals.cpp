#include "cmr/ordinals.hpp"

#include <algorithm>
#include <charconv>

#include "cmr/sexpr.hpp"

namespace cmr::ordinals {

namespace {

OrdPtr share(const Ord& x) { return std::make_shared<const Ord>(x); }

Ord single(const OrdPtr& a, const OrdPtr& b, std::uint64_t count = 1) {
  Ord o;
  o.terms.push_back({a, b, count});
  return o;
}

Cmp flip(Cmp c) { return c == Cmp::Less ? Cmp::Greater : c == Cmp::Greater ? Cmp::Less : Cmp::Equal; }

Cmp cmp(const Ord& x, const Ord& y);

// phi_a(b) against phi_c(d), both normal.
Cmp cmp_head(const VTerm& s, const VTerm& t) {
  switch (cmp(*s.a, *t.a)) {
    case Cmp::Less: return cmp(*s.b, single(t.a, t.b));
    case Cmp::Equal: return cmp(*s.b, *t.b);
    case Cmp::Greater: return flip(cmp(*t.b, single(s.a, s.b)));
  }
  return Cmp::Equal;
}

Cmp cmp(const Ord& x, const Ord& y) {
  const size_t n = std::min(x.terms.size(), y.terms.size());
  for (size_t i = 0; i < n; ++i) {
    Cmp c = cmp_head(x.terms[i], y.terms[i]);
    if (c != Cmp::Equal) return c;
    if (x.terms[i].count != y.terms[i].count)
      return x.terms[i].count < y.terms[i].count ? Cmp::Less : Cmp::Greater;
  }
  if (x.terms.size() == y.terms.size()) return Cmp::Equal;
  return x.terms.size() < y.terms.size() ? Cmp::Less : Cmp::Greater;
}

// b = phi_c(d) with c > a, so phi_a(b) = b.
bool absorbed(const Ord& a, const Ord& b) {
  return b.terms.size() == 1 && b.terms[0].count == 1 && cmp(*b.terms[0].a, a) == Cmp::Greater;
}

}  // namespace

Ord zero() { return {}; }

Ord phi(const Ord& a, const Ord& b, std::uint64_t count) { return single(share(a), share(b), count); }

Ord finite(std::uint64_t k) {
  if (k == 0) return zero();
  return phi(zero(), zero(), k);
}

Ord add(const Ord& x, const Ord& y) {
  if (y.is_zero()) return x;
  Ord out = x;
  const VTerm& h = y.terms.front();
  while (!out.terms.empty() && cmp_head(out.terms.back(), h) == Cmp::Less) out.terms.pop_back();
  size_t from = 0;
  if (!out.terms.empty() && cmp_head(out.terms.back(), h) == Cmp::Equal) {
    out.terms.back().count += h.count;
    from = 1;
  }
  out.terms.insert(out.terms.end(), y.terms.begin() + static_cast<long>(from), y.terms.end());
  return out;
}

char cmp_symbol(Cmp c) { return c == Cmp::Less ? '<' : c == Cmp::Equal ? '=' : '>'; }

bool is_normal(const Ord& x) {
  for (size_t i = 0; i < x.terms.size(); ++i) {
    const auto& t = x.terms[i];
    if (t.count == 0 || !is_normal(*t.a) || !is_normal(*t.b)) return false;
    if (absorbed(*t.a, *t.b)) return false;
    if (i > 0 && cmp_head(x.terms[i - 1], t) != Cmp::Greater) return false;
  }
  return true;
}

Cmp ord_cmp(const Ord& x, const Ord& y) {
  if (!is_normal(x) || !is_normal(y)) throw NotNormal("ordinal notation is not in normal form");
  return cmp(x, y);
}

Ord normalize(const Ord& raw) {
  Ord out;
  for (const auto& t : raw.terms) {
    if (t.count == 0) continue;
    Ord a = normalize(*t.a);
    Ord b = normalize(*t.b);
    Ord head = absorbed(a, b) ? b : phi(a, b);
    head.terms[0].count = t.count;
    out = add(out, head);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t parse_count(const sexpr::Sexp& s) {
  if (!s.atom) sexpr::fail(s, ParseError::Kind::Structure, "expected a natural number");
  std::uint64_t k = 0;
  auto [p, ec] = std::from_chars(s.text.data(), s.text.data() + s.text.size(), k);
  if (ec != std::errc() || p != s.text.data() + s.text.size())
    sexpr::fail(s, ParseError::Kind::Lexical, "expected a natural number, got " + s.text);
  return k;
}

Ord from_sexp(const sexpr::Sexp& s) {
  if (s.atom) return finite(parse_count(s));
  const auto h = s.head();
  if (h == "n") {
    sexpr::expect_size(s, 2);
    return finite(parse_count(s[1]));
  }
  if (h == "phi") {
    sexpr::expect_size(s, 3);
    return phi(from_sexp(s[1]), from_sexp(s[2]));
  }
  if (h == "sum") {
    Ord out;
    for (size_t i = 1; i < s.size(); ++i) {
      auto part = from_sexp(s[i]);
      out.terms.insert(out.terms.end(), part.terms.begin(), part.terms.end());
    }
    return out;
  }
  sexpr::fail(s, ParseError::Kind::UnknownHead, "unknown ordinal form");
}

}  // namespace

Ord parse(std::string_view text) { return from_sexp(sexpr::read_one(text)); }

std::string print(const Ord& x) {
  std::vector<std::string> items;
  for (const auto& t : x.terms) {
    if (t.a->is_zero() && t.b->is_zero()) {
      items.push_back(std::to_string(t.count));
      continue;
    }
    const std::string one = "(phi " + print(*t.a) + " " + print(*t.b) + ")";
    for (std::uint64_t i = 0; i < t.count; ++i) items.push_back(one);
  }
  if (items.empty()) return "0";
  if (items.size() == 1) return items[0];
  std::string out = "(sum";
  for (const auto& i : items) out += " " + i;
  return out + ")";
}

// ---------------------------------------------------------------------------

bool is_tree(const FinTree& t) {
  if (t.empty()) return true;
  for (const auto& s : t)
    if (!s.empty() && !t.count(Seq(s.begin(), s.end() - 1))) return false;
  return true;
}

bool kb_less(const Seq& sigma, const Seq& tau) {
  const size_t n = std::min(sigma.size(), tau.size());
  for (size_t i = 0; i < n; ++i)
    if (sigma[i] != tau[i]) return sigma[i] < tau[i];
  return sigma.size() > tau.size();
}

std::vector<Seq> kb_sort(const FinTree& t) {
  std::vector<Seq> out(t.begin(), t.end());
  std::sort(out.begin(), out.end(), kb_less);
  return out;
}

FinTree parse_tree(std::string_view text) {
  auto s = sexpr::read_one(text);
  if (s.atom) sexpr::fail(s, ParseError::Kind::Structure, "expected a list of nodes");
  FinTree t;
  for (const auto& node : s.items) {
    if (node.atom) sexpr::fail(node, ParseError::Kind::Structure, "a node is a list of labels");
    Seq q;
    for (const auto& l : node.items) q.push_back(parse_count(l));
    t.insert(q);
  }
  if (!is_tree(t)) sexpr::fail(s, ParseError::Kind::Structure, "node set is not prefix closed");
  return t;
}

std::string print_seq(const Seq& s) {
  std::string out = "(";
  for (size_t i = 0; i < s.size(); ++i) out += (i ? " " : "") + std::to_string(s[i]);
  return out + ")";
}

// ---------------------------------------------------------------------------

bool validate_index(const FinOrderIndex& ix) {
  if (!ix.field.count(ix.point)) return false;
  for (const auto& [x, y] : ix.rel)
    if (x == y || !ix.field.count(x) || !ix.field.count(y)) return false;
  for (auto x : ix.field)
    for (auto y : ix.field) {
      if (x == y) continue;
      if (ix.rel.count({x, y}) == ix.rel.count({y, x})) return false;  // neither or both
      for (auto z : ix.field)
        if (ix.rel.count({x, y}) && ix.rel.count({y, z}) && !ix.rel.count({x, z})) return false;
    }
  return true;
}

bool index_less(const FinOrderIndex& ix, const FinOrderIndex& jx) {
  return ix.field == jx.field && ix.rel == jx.rel && ix.rel.count({ix.point, jx.point}) > 0;
}

FinOrderIndex append_omega(const FinOrderIndex& ix, std::uint64_t k) {
  std::vector<std::uint64_t> below;
  for (auto b : ix.field)
    if (ix.rel.count({b, ix.point})) below.push_back(b);
  // the new order as a list, first element least
  std::sort(below.begin(), below.end(), [&](auto x, auto y) { return ix.rel.count({x, y}) > 0; });
  std::vector<std::uint64_t> seq;
  for (auto b : below) seq.push_back(2 * b + 2);
  for (std::uint64_t i = 0; i < k; ++i) seq.push_back(2 * i + 1);
  seq.push_back(0);
  FinOrderIndex out;
  out.field.insert(seq.begin(), seq.end());
  for (size_t i = 0; i < seq.size(); ++i)
    for (size_t j = i + 1; j < seq.size(); ++j) out.rel.insert({seq[i], seq[j]});
  out.point = 0;
  return out;
}

}  // namespace cmr::ordinals
