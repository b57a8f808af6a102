#pragma once

// Bounded checking of the realisability relation d ||- phi.
//
// Unbounded clauses are truncated: first-sort quantifiers range over n < N,
// set and class quantifiers over a fixed sample pool, and an implication
// is tested on a canonical realiser of its antecedent. No is reported only
// when the refutation does not depend on the truncation.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cmr/extractor.hpp"
#include "cmr/kernel.hpp"
#include "cmr/pca.hpp"

namespace cmr::realcheck {

using pca::CombPtr;
using syntax::Formula;
using syntax::FormulaPtr;

struct Env {
  std::map<std::string, Nat> numbers;          // first-sort variables
  std::map<std::string, CombPtr> assignments;  // set and class variables
  CombPtr prec_interp;                         // realises the order relation; default K 0
  Env();
};

/// Default set samples: empty, all, {0}, {1}, {0,1}.
std::vector<CombPtr> default_set_samples();
/// Default class samples: empty, all, {X : 0 in X}.
std::vector<CombPtr> default_class_samples();

struct Bounds {
  std::uint64_t N = 50;
  std::uint64_t fuel = 1000000;  // per evaluation
  std::vector<CombPtr> set_samples = default_set_samples();
  std::vector<CombPtr> class_samples = default_class_samples();
  bool parallel = true;  // sweep the outermost quantifier with OpenMP
};

struct Verdict3 {
  enum class Kind { Yes, No, Unknown };
  Kind kind = Kind::Unknown;
  std::string reason;  // empty for Yes

  bool yes() const { return kind == Kind::Yes; }
  bool no() const { return kind == Kind::No; }
  bool unknown() const { return kind == Kind::Unknown; }
  friend bool operator==(const Verdict3&, const Verdict3&) = default;
};

std::string_view verdict_name(Verdict3::Kind k);

/// Three-valued classical truth under the same truncation.
struct Truth {
  enum class Value { True, False, Unknown };
  Value value = Value::Unknown;
  bool exact = false;  // independent of N and the sample pool
};

Truth truth(const FormulaPtr& f, const Env& env, const Bounds& b);

/// Value of a first-sort term; throws std::invalid_argument on an unbound
/// variable.
Nat eval_term(const syntax::Term& t, const std::map<std::string, Nat>& numbers);

/// Canonical realiser of a formula that is true under the truncation, or
/// nothing when none can be built without case analysis on a bound
/// variable.
std::optional<CombPtr> canonical_realiser(const FormulaPtr& f, const Env& env, const Bounds& b);

Verdict3 realizes(const CombPtr& d, const FormulaPtr& f, const Env& env, const Bounds& b);

/// Same, also reporting the fuel spent.
Verdict3 realizes(const CombPtr& d, const FormulaPtr& f, const Env& env, const Bounds& b,
                  std::uint64_t& fuel_used);

struct WitnessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// First component of a realiser of an existential formula: a numeral for
/// a first-sort quantifier, a value otherwise.
std::variant<Nat, CombPtr> witness(const CombPtr& d, const FormulaPtr& f, const Bounds& b);

struct WitnessRecord {
  std::string path;  // "/" for the whole formula, then /and0, /and1, /or, /ex per step
  std::string kind;  // "exists" or "or"
  std::string value;
};

struct Report {
  Verdict3 verdict;
  std::vector<WitnessRecord> witnesses;
  std::uint64_t fuel_used = 0;
  std::uint64_t N = 0;
  std::uint64_t fuel = 0;
  std::vector<std::string> notes;

  /// {"schema":1,"verdict":...,"reason":...,"witnesses":[...],"fuel_used":...,
  ///  "bounds":{"N":...,"fuel":...},"notes":[...]}
  std::string to_json() const;
};

/// Extracts a realiser from an accepted proof and checks it against the
/// last line for every tested assignment of the line's free variables.
/// Throws extractor::ExtractError on a rejected proof.
Report check_theorem(const kernel::Proof& p, kernel::Theory th, const Env& env, const Bounds& b);

}  // namespace cmr::realcheck
