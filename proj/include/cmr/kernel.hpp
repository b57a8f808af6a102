#pragma once

// Hilbert-style proof checking for CM and CM+GWO.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cmr/parse.hpp"
#include "cmr/syntax.hpp"

namespace cmr::kernel {

using syntax::Abstraction;
using syntax::FormulaPtr;
using syntax::Sort;
using syntax::TermPtr;

enum class Theory { CM, CM_GWO };
std::string_view theory_name(Theory t);
std::optional<Theory> theory_from_name(std::string_view s);

enum class SchemeId {
  // logical
  ImpK, ImpS, AndIntro, AndElimL, AndElimR, OrIntroL, OrIntroR, OrElim, NegIntro,
  ExFalso, ExistsIntro, ForallElim, EqRefl, EqSubst,
  // number axioms (universal closures)
  PaSuccNonzero, PaSuccInj, PaAddZero, PaAddSucc, PaMulZero, PaMulSucc, PaPair,
  // non-logical
  Induction, Recursion, CompSet, CompClass, DecEq, DecIn1, DecIn2, Lpo, DecPrec,
  ExtClass, ExtPrec,
  // global well-ordering
  W1Irrefl, W1Trans, W1Total, W2, W2Prime, W3,
};

enum class ParamKind {
  Formula,
  Term,
  SetVar,
  ClassVar,
  Hole,     // abstraction whose holes have the sorts in ParamSpec::holes
  AnyHole,  // abstraction with one hole of any sort
  Witness,  // term or variable matching the sort of the preceding AnyHole
};

struct ParamSpec {
  ParamKind kind;
  std::vector<Sort> holes;
};

enum class Family { Logical, Number, NonLogical, Gwo };

struct SchemeInfo {
  SchemeId id;
  std::string_view name;
  Family family;
  std::vector<ParamSpec> params;
  /// Logical axiom outside the paper's list, added for intuitionistic logic.
  bool supplement = false;
};

const std::vector<SchemeInfo>& scheme_table();
const SchemeInfo& scheme_info(SchemeId id);
std::optional<SchemeId> scheme_by_name(std::string_view name);
bool scheme_enabled(SchemeId id, Theory th);

using Param = std::variant<FormulaPtr, TermPtr, std::string, Abstraction>;

/// Instantiation failure; `code` is a verdict reason code.
struct SchemeError : std::runtime_error {
  SchemeError(std::string code, const std::string& msg)
      : std::runtime_error(msg), code(std::move(code)) {}
  std::string code;
};

/// Core (sugar-free) axiom instance. Throws SchemeError on arity or sort
/// mismatch.
FormulaPtr instantiate_axiom(SchemeId id, const std::vector<Param>& params);

// ---------------------------------------------------------------------------

struct Justification {
  enum class Kind { Axiom, MP, AllGen, ExGen };
  Kind kind = Kind::Axiom;
  std::optional<SchemeId> scheme;
  std::vector<Param> params;
  long i = -1;  // MP: line proving phi; Gen: premise
  long j = -1;  // MP: line proving phi -> psi
  std::string var;
  /// Problem found while reading the justification, reported as a rejection
  /// when the checker reaches this line.
  std::optional<std::pair<std::string, std::string>> deferred;
};

struct Line {
  FormulaPtr formula;
  Justification just;
  int src_line = 0;
};

struct Proof {
  syntax::Declarations decls;
  std::vector<Line> lines;
  std::optional<Theory> theory;
};

/// (declare ...)* (theory cm|cm-gwo)? (proof (line FM JUST)*)
/// JUST := (axiom ID ARG*) | (mp i j) | (gen-all i x) | (gen-ex i x)
/// Throws ParseError on malformed input.
Proof parse_proof(std::string_view text);

struct Verdict {
  bool accepted = false;
  long bad_line = -1;
  std::string reason_code;
  std::string reason;

  std::string to_json() const;
};

Verdict check_proof(const Proof& p, Theory th);

/// Last line's formula. Throws std::logic_error unless the proof is
/// accepted under CM_GWO.
FormulaPtr theorem_of(const Proof& p);

/// Expanded formula of each line (cached by callers that need it).
FormulaPtr core_formula(const Line& l);

}  // namespace cmr::kernel
