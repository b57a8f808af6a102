#pragma once

// Two-argument Veblen notations, Kleene-Brouwer orderings of finite trees
// and finite explicit ordinal indices.

#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cmr::ordinals {

struct Ord;
using OrdPtr = std::shared_ptr<const Ord>;

/// count copies of phi_a(b).
struct VTerm {
  OrdPtr a;
  OrdPtr b;
  std::uint64_t count = 1;
};

/// Zero is the empty sum. Normal form: terms strictly decreasing (equal
/// neighbours are merged into counts) and b < phi_a(b) for every term.
struct Ord {
  std::vector<VTerm> terms;
  bool is_zero() const { return terms.empty(); }
};

Ord zero();
Ord phi(const Ord& a, const Ord& b, std::uint64_t count = 1);
/// k = phi(0,0) * k.
Ord finite(std::uint64_t k);
/// Ordinal sum, normal inputs give a normal output.
Ord add(const Ord& x, const Ord& y);

enum class Cmp { Less, Equal, Greater };
char cmp_symbol(Cmp c);

struct NotNormal : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

bool is_normal(const Ord& x);
/// Throws NotNormal unless both sides are normal.
Cmp ord_cmp(const Ord& x, const Ord& y);
Ord normalize(const Ord& raw);

/// "0", "k", "(n k)", "(phi a b)", "(sum t ...)". Throws cmr::ParseError.
Ord parse(std::string_view text);
std::string print(const Ord& x);

// ---------------------------------------------------------------------------

using Seq = std::vector<std::uint64_t>;
using FinTree = std::set<Seq>;

/// Prefix closed, and non-empty trees contain the root.
bool is_tree(const FinTree& t);
/// sigma properly extends tau, or is smaller at the first difference.
bool kb_less(const Seq& sigma, const Seq& tau);
std::vector<Seq> kb_sort(const FinTree& t);
/// "((), (0), (0 1))"-style list of nodes; throws cmr::ParseError.
FinTree parse_tree(std::string_view text);
std::string print_seq(const Seq& s);

// ---------------------------------------------------------------------------

struct FinOrderIndex {
  std::set<std::uint64_t> field;
  std::set<std::pair<std::uint64_t, std::uint64_t>> rel;  // (x, y): x before y
  std::uint64_t point = 0;
};

/// rel is a strict linear order on field and point lies in field.
bool validate_index(const FinOrderIndex& ix);
/// Same underlying order and ix.point before jx.point.
bool index_less(const FinOrderIndex& ix, const FinOrderIndex& jx);

/// The order {2b+2 : b before ix.point} followed by 1, 3, ..., 2k-1 and
/// then 0; the point is 0. With k steps of the appended sequence the
/// segment before 0 has |{b before ix.point}| + k elements.
FinOrderIndex append_omega(const FinOrderIndex& ix, std::uint64_t k);

}  // namespace cmr::ordinals
