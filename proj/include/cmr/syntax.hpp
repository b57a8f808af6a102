#pragma once

// Abstract syntax of the three-sorted language: first-order (number) terms,
// second-order set terms and formulas, together with the surface sugar that
// `expand` eliminates.

#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cmr::syntax {

enum class Sort { First, Second, Third };

/// "num", "set" or "class"; the spelling used by declarations.
std::string_view sort_keyword(Sort s);
std::optional<Sort> sort_from_keyword(std::string_view kw);

struct Binder {
  std::string name;
  Sort sort;
  friend bool operator==(const Binder&, const Binder&) = default;
  friend auto operator<=>(const Binder&, const Binder&) = default;
};

struct SortError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// First-order terms. Pair is the primitive-recursive pairing function; it is
// pinned down by the pa-pair number axiom.

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Var, Zero, Succ, Add, Mul, Pair };
  Kind kind;
  std::string name;
  TermPtr lhs;
  TermPtr rhs;
};

TermPtr var(std::string name);
TermPtr zero();
TermPtr succ(TermPtr t);
TermPtr add(TermPtr a, TermPtr b);
TermPtr mul(TermPtr a, TermPtr b);
TermPtr pair_term(TermPtr a, TermPtr b);
TermPtr numeral(unsigned long k);

/// k when t is s(...s(0)...), nullopt otherwise.
std::optional<unsigned long> numeral_value(const Term& t);

// ---------------------------------------------------------------------------
// Formulas and second-order set terms.

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct SetTerm;
using SetTermPtr = std::shared_ptr<const SetTerm>;

/// A second-order position. Only Var is core; the others are sugar:
/// (Z)_n, [X]_n and {x : phi(x)}.
struct SetTerm {
  enum class Kind { Var, Slice, Bracket, Builder };
  Kind kind;
  std::string name;  // variable, base set of a slice/bracket, or builder binder
  TermPtr index;     // slice/bracket index
  FormulaPtr body;   // builder body
};

SetTermPtr set_var(std::string name);
SetTermPtr slice(std::string base, TermPtr index);
SetTermPtr bracket(std::string base, TermPtr index);
SetTermPtr builder(std::string bound, FormulaPtr body);

struct Formula {
  enum class Kind {
    // core
    Eq, In1, In2, Prec, And, Or, Not, Implies, ForAll, Exists,
    // surface only
    Bot, Iff, Eq2, Eq3, InStar, SubStar, EqStar, BoundedAll, BoundedEx,
  };
  /// Relation bounding a BoundedAll/BoundedEx quantifier.
  enum class Bound { Prec, InStar };

  Kind kind;
  TermPtr t1, t2;       // Eq sides; In1 element
  SetTermPtr s1, s2;    // In1 set; In2 element; Prec, Eq2, InStar, SubStar, EqStar operands
  std::string c1, c2;   // class variables: In2 class, Eq3 operands, SubStar class target
  FormulaPtr a, b;      // connective operands, quantifier body in a
  Binder bound{};       // quantifier binder
  Bound bound_rel = Bound::Prec;
};

FormulaPtr eq(TermPtr a, TermPtr b);
FormulaPtr in1(TermPtr t, SetTermPtr s);
FormulaPtr in1(TermPtr t, std::string set);
FormulaPtr in2(SetTermPtr s, std::string cls);
FormulaPtr in2(std::string set, std::string cls);
FormulaPtr prec(SetTermPtr a, SetTermPtr b);
FormulaPtr prec(std::string a, std::string b);
FormulaPtr conj(FormulaPtr a, FormulaPtr b);
FormulaPtr disj(FormulaPtr a, FormulaPtr b);
FormulaPtr neg(FormulaPtr a);
FormulaPtr implies(FormulaPtr a, FormulaPtr b);
FormulaPtr forall(Sort s, std::string v, FormulaPtr body);
FormulaPtr exists(Sort s, std::string v, FormulaPtr body);
FormulaPtr bot();
FormulaPtr iff(FormulaPtr a, FormulaPtr b);
FormulaPtr eq2(SetTermPtr a, SetTermPtr b);
FormulaPtr eq3(std::string a, std::string b);
FormulaPtr in_star(SetTermPtr y, SetTermPtr x);
FormulaPtr sub_star(SetTermPtr x, SetTermPtr y);
FormulaPtr sub_star_class(SetTermPtr x, std::string cls);
FormulaPtr eq_star(SetTermPtr x, SetTermPtr y);
FormulaPtr bounded_all(Formula::Bound rel, std::string v, SetTermPtr over, FormulaPtr body);
FormulaPtr bounded_ex(Formula::Bound rel, std::string v, SetTermPtr over, FormulaPtr body);

bool is_quantifier(const Formula& f);

// ---------------------------------------------------------------------------
// Printing (s-expressions; inverse of the parser).

std::string print(const Term& t);
std::string print(const SetTerm& s);
std::string print(const Formula& f);
inline std::string print(const TermPtr& t) { return print(*t); }
inline std::string print(const FormulaPtr& f) { return print(*f); }

// ---------------------------------------------------------------------------
// Variables.

/// Free variables in first-occurrence (pre-order, left to right) order.
std::vector<Binder> free_vars(const Formula& f);
std::vector<std::string> free_vars(const Term& t);
bool occurs_free(const Formula& f, const std::string& name);

/// Every name occurring anywhere, free or bound.
std::set<std::string> all_names(const Formula& f);
void collect_names(const Term& t, std::set<std::string>& out);

/// Produces names absent from a growing set of used names.
class NameSupply {
 public:
  NameSupply() = default;
  explicit NameSupply(std::set<std::string> used) : used_(std::move(used)) {}
  void reserve(const std::string& name) { used_.insert(name); }
  void reserve(const Formula& f);
  std::string fresh(const std::string& base);

 private:
  std::set<std::string> used_;
};

// ---------------------------------------------------------------------------
// Substitution. First-order variables take terms; second- and third-order
// variables take variables of the same sort.

using Replacement = std::variant<TermPtr, std::string>;

/// Capture-avoiding substitution of `r` for the free variable `v`.
/// Throws SortError if `r` does not fit `v`'s sort.
FormulaPtr substitute(const FormulaPtr& f, const Binder& v, const Replacement& r);
TermPtr substitute(const TermPtr& t, const std::string& v, const TermPtr& r);

/// A formula with designated holes, e.g. phi(n) in the induction scheme.
struct Abstraction {
  std::vector<Binder> holes;
  FormulaPtr body;
};

/// Simultaneous capture-avoiding substitution of args for the holes.
FormulaPtr instantiate(const Abstraction& abs, const std::vector<Replacement>& args);

bool alpha_equal(const Formula& a, const Formula& b);
bool alpha_equal(const FormulaPtr& a, const FormulaPtr& b);
bool term_equal(const Term& a, const Term& b);

// ---------------------------------------------------------------------------
// Sugar and syntactic classes.

bool is_core(const Formula& f);

/// Eliminates all surface sugar. Identity on core formulas.
FormulaPtr expand(const FormulaPtr& f);

/// No second- or third-order quantifier (after expansion).
bool is_arithmetic(const FormulaPtr& f);

/// Built from PA atoms and t in1 X by and, or, -> (X not left of ->),
/// negation of X-free formulas and first-order quantifiers.
bool is_strictly_positive(const FormulaPtr& f, const std::string& set_var);

/// Replaces every `t in1 X` by theta(t), renaming binders of `f` that would
/// capture free variables of theta. Throws std::invalid_argument unless `f`
/// is strictly positive in X.
FormulaPtr positive_substitute(const FormulaPtr& f, const std::string& set_var,
                               const Abstraction& theta);

}  // namespace cmr::syntax
