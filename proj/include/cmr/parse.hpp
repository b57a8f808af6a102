#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cmr/sexpr.hpp"
#include "cmr/syntax.hpp"

namespace cmr::syntax {

using Declarations = std::map<std::string, Sort>;

/// Parses formulas, terms and abstractions against a shared set of
/// declarations. Free variables keep one sort across every call on the same
/// parser, so a proof's lines agree on their free variables.
///
/// Sort of a name: enclosing binder, then declaration, then the sort fixed by
/// an earlier free use, then the lexical default (lowercase initial: number;
/// otherwise the sort demanded by the position).
class FormulaParser {
 public:
  explicit FormulaParser(Declarations decls = {});

  /// Names to avoid when renaming shadowing binders.
  void reserve(const sexpr::Sexp& whole_document);

  FormulaPtr formula(const sexpr::Sexp& s);
  TermPtr term(const sexpr::Sexp& s);
  /// A bare variable of the given higher sort.
  std::string variable(const sexpr::Sexp& s, Sort sort);
  /// (abs-n v fm) | (abs-s V fm) | (abs-t V fm) | (abs ((v num) (V set) ...) fm)
  Abstraction abstraction(const sexpr::Sexp& s);

  const Declarations& free_sorts() const { return free_; }

 private:
  struct Scope {
    std::string source;
    std::string internal;
    Sort sort;
  };

  std::string resolve(const sexpr::Sexp& at, const std::string& name, Sort wanted);
  std::optional<Sort> known_sort(const std::string& name) const;
  SetTermPtr set_term(const sexpr::Sexp& s);
  std::string class_var(const sexpr::Sexp& s);
  std::string bind(const sexpr::Sexp& at, Sort sort);
  void unbind() { scope_.pop_back(); }
  FormulaPtr quantifier(const sexpr::Sexp& s, bool universal, Sort sort);
  FormulaPtr bounded_quantifier(const sexpr::Sexp& s, bool universal, Formula::Bound rel);

  Declarations decls_;
  Declarations free_;
  std::vector<Scope> scope_;
  NameSupply supply_;
};

/// One formula from text; leading (declare v sort) forms are honoured.
FormulaPtr parse_formula(std::string_view text, const Declarations& decls = {});
TermPtr parse_term(std::string_view text);

/// Collects (declare v sort) forms; returns the index of the first other form.
size_t read_declarations(const std::vector<sexpr::Sexp>& forms, Declarations& out);

bool is_identifier(std::string_view s);

}  // namespace cmr::syntax
