#include "cmr/parse.hpp"

#include <algorithm>
#include <cctype>

namespace cmr::syntax {

using sexpr::Sexp;
using sexpr::expect_size;
using sexpr::fail;
using PK = ParseError::Kind;

bool is_identifier(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  });
}

namespace {
bool is_decimal(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}
constexpr unsigned long kMaxLiteral = 100000;
}  // namespace

FormulaParser::FormulaParser(Declarations decls) : decls_(std::move(decls)) {
  for (const auto& [n, s] : decls_) supply_.reserve(n);
}

void FormulaParser::reserve(const Sexp& doc) {
  std::vector<std::string> atoms;
  sexpr::collect_atoms(doc, atoms);
  for (auto& a : atoms) supply_.reserve(a);
}

std::optional<Sort> FormulaParser::known_sort(const std::string& name) const {
  if (auto it = decls_.find(name); it != decls_.end()) return it->second;
  if (auto it = free_.find(name); it != free_.end()) return it->second;
  return std::nullopt;
}

std::string FormulaParser::resolve(const Sexp& at, const std::string& name, Sort wanted) {
  if (!is_identifier(name)) fail(at, PK::Lexical, "bad variable name '" + name + "'");
  auto mismatch = [&](Sort have) {
    fail(at, PK::Sort,
         "'" + name + "' has sort " + std::string(sort_keyword(have)) + " but position needs " +
             std::string(sort_keyword(wanted)));
  };
  for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
    if (it->source == name) {
      if (it->sort != wanted) mismatch(it->sort);
      return it->internal;
    }
  }
  if (auto k = known_sort(name)) {
    if (*k != wanted) mismatch(*k);
    return name;
  }
  const bool lower = std::islower(static_cast<unsigned char>(name[0]));
  if (lower && wanted != Sort::First) mismatch(Sort::First);
  if (!lower && wanted == Sort::First)
    fail(at, PK::Sort, "'" + name + "' is not a number variable (declare it as num)");
  free_[name] = wanted;
  supply_.reserve(name);
  return name;
}

std::string FormulaParser::bind(const Sexp& at, Sort sort) {
  if (!at.atom || !is_identifier(at.text)) fail(at, PK::Structure, "binder must be a variable name");
  std::string internal = at.text;
  bool shadows = std::any_of(scope_.begin(), scope_.end(),
                             [&](const Scope& s) { return s.source == at.text; });
  if (shadows) internal = supply_.fresh(at.text);
  supply_.reserve(internal);
  scope_.push_back({at.text, internal, sort});
  return internal;
}

TermPtr FormulaParser::term(const Sexp& s) {
  if (s.atom) {
    if (is_decimal(s.text)) {
      if (s.text.size() > 6 || std::stoul(s.text) > kMaxLiteral)
        fail(s, PK::Lexical, "numeral literal too large");
      return numeral(std::stoul(s.text));
    }
    return var(resolve(s, s.text, Sort::First));
  }
  auto h = s.head();
  if (h == "s") {
    expect_size(s, 2);
    return succ(term(s[1]));
  }
  if (h == "+" || h == "*" || h == "pair") {
    expect_size(s, 3);
    auto a = term(s[1]);
    auto b = term(s[2]);
    if (h == "+") return add(a, b);
    if (h == "*") return mul(a, b);
    return pair_term(a, b);
  }
  if (h.empty()) fail(s, PK::Structure, "expected a term");
  fail(s, PK::UnknownHead, "unknown term head '" + std::string(h) + "'");
}

std::string FormulaParser::variable(const Sexp& s, Sort sort) {
  if (!s.atom) fail(s, PK::Structure, "expected a variable");
  return resolve(s, s.text, sort);
}

std::string FormulaParser::class_var(const Sexp& s) { return variable(s, Sort::Third); }

SetTermPtr FormulaParser::set_term(const Sexp& s) {
  if (s.atom) return set_var(resolve(s, s.text, Sort::Second));
  auto h = s.head();
  if (h == "slice" || h == "bracket") {
    expect_size(s, 3);
    auto base = variable(s[1], Sort::Second);
    auto idx = term(s[2]);
    return h == "slice" ? slice(base, idx) : bracket(base, idx);
  }
  if (h == "set") {
    expect_size(s, 3);
    auto b = bind(s[1], Sort::First);
    auto body = formula(s[2]);
    unbind();
    return builder(b, body);
  }
  if (h.empty()) fail(s, PK::Structure, "expected a set term");
  fail(s, PK::UnknownHead, "unknown set-term head '" + std::string(h) + "'");
}

FormulaPtr FormulaParser::quantifier(const Sexp& s, bool universal, Sort sort) {
  expect_size(s, 3);
  auto b = bind(s[1], sort);
  auto body = formula(s[2]);
  unbind();
  return universal ? forall(sort, b, body) : exists(sort, b, body);
}

FormulaPtr FormulaParser::bounded_quantifier(const Sexp& s, bool universal, Formula::Bound rel) {
  expect_size(s, 4);
  auto over = set_term(s[2]);
  if (over->kind != SetTerm::Kind::Var && rel == Formula::Bound::InStar)
    fail(s[2], PK::Structure, "in* bound must be a set variable");
  auto b = bind(s[1], Sort::Second);
  auto body = formula(s[3]);
  unbind();
  return universal ? bounded_all(rel, b, over, body) : bounded_ex(rel, b, over, body);
}

FormulaPtr FormulaParser::formula(const Sexp& s) {
  if (s.atom) {
    if (s.text == "bot") return bot();
    fail(s, PK::Structure, "expected a formula, found atom '" + s.text + "'");
  }
  auto h = s.head();
  if (h.empty()) fail(s, PK::Structure, "expected a formula");

  if (h == "=") {
    expect_size(s, 3);
    auto a = term(s[1]);
    return eq(a, term(s[2]));
  }
  if (h == "in1") {
    expect_size(s, 3);
    auto t = term(s[1]);
    return in1(t, set_term(s[2]));
  }
  if (h == "in2") {
    expect_size(s, 3);
    auto x = set_term(s[1]);
    return in2(x, class_var(s[2]));
  }
  if (h == "prec") {
    expect_size(s, 3);
    auto x = set_term(s[1]);
    return prec(x, set_term(s[2]));
  }
  if (h == "and" || h == "or") {
    if (s.size() < 3) fail(s, PK::Arity, "'" + std::string(h) + "' expects at least 2 arguments");
    std::vector<FormulaPtr> parts;
    for (size_t i = 1; i + 1 < s.size(); ++i) parts.push_back(formula(s[i]));
    FormulaPtr acc = formula(s[s.size() - 1]);
    for (auto it = parts.rbegin(); it != parts.rend(); ++it)
      acc = h == "and" ? conj(*it, acc) : disj(*it, acc);
    return acc;
  }
  if (h == "not") {
    expect_size(s, 2);
    return neg(formula(s[1]));
  }
  if (h == "->" || h == "iff") {
    expect_size(s, 3);
    auto a = formula(s[1]);
    auto b = formula(s[2]);
    return h == "->" ? implies(a, b) : iff(a, b);
  }
  if (h == "bot") {
    expect_size(s, 1);
    return bot();
  }
  if (h == "forall-n") return quantifier(s, true, Sort::First);
  if (h == "exists-n") return quantifier(s, false, Sort::First);
  if (h == "forall-s") return quantifier(s, true, Sort::Second);
  if (h == "exists-s") return quantifier(s, false, Sort::Second);
  if (h == "forall-t") return quantifier(s, true, Sort::Third);
  if (h == "exists-t") return quantifier(s, false, Sort::Third);
  if (h == "forall-prec") return bounded_quantifier(s, true, Formula::Bound::Prec);
  if (h == "exists-prec") return bounded_quantifier(s, false, Formula::Bound::Prec);
  if (h == "forall-in*") return bounded_quantifier(s, true, Formula::Bound::InStar);
  if (h == "exists-in*") return bounded_quantifier(s, false, Formula::Bound::InStar);
  if (h == "eq2" || h == "in*" || h == "eq*") {
    expect_size(s, 3);
    auto a = set_term(s[1]);
    auto b = set_term(s[2]);
    if (h == "eq2") return eq2(a, b);
    if (b->kind != SetTerm::Kind::Var) fail(s[2], PK::Structure, "expected a set variable");
    if (h == "in*") return in_star(a, b);
    if (a->kind != SetTerm::Kind::Var) fail(s[1], PK::Structure, "expected a set variable");
    return eq_star(a, b);
  }
  if (h == "eq3") {
    expect_size(s, 3);
    auto a = class_var(s[1]);
    return eq3(a, class_var(s[2]));
  }
  if (h == "sub*") {
    expect_size(s, 3);
    auto a = set_term(s[1]);
    if (a->kind != SetTerm::Kind::Var) fail(s[1], PK::Structure, "expected a set variable");
    const Sexp& t = s[2];
    if (!t.atom) fail(t, PK::Structure, "expected a set or class variable");
    // target sort: whatever the name already has, else set
    Sort target = Sort::Second;
    bool found = false;
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->source == t.text) {
        target = it->sort;
        found = true;
        break;
      }
    if (!found)
      if (auto k = known_sort(t.text)) target = *k;
    if (target == Sort::Third) return sub_star_class(a, class_var(t));
    return sub_star(a, set_var(variable(t, Sort::Second)));
  }
  fail(s, PK::UnknownHead, "unknown formula head '" + std::string(h) + "'");
}

Abstraction FormulaParser::abstraction(const Sexp& s) {
  auto h = s.head();
  Abstraction a;
  size_t pushed = 0;
  if (h == "abs-n" || h == "abs-s" || h == "abs-t") {
    expect_size(s, 3);
    Sort sort = h == "abs-n" ? Sort::First : h == "abs-s" ? Sort::Second : Sort::Third;
    a.holes.push_back({bind(s[1], sort), sort});
    pushed = 1;
    a.body = formula(s[2]);
  } else if (h == "abs") {
    expect_size(s, 3);
    if (s[1].atom) fail(s[1], PK::Structure, "expected a hole list");
    for (const auto& hole : s[1].items) {
      if (hole.atom || hole.size() != 2 || !hole[1].atom)
        fail(hole, PK::Structure, "hole must be (name sort)");
      auto sort = sort_from_keyword(hole[1].text);
      if (!sort) fail(hole[1], PK::Structure, "unknown sort '" + hole[1].text + "'");
      a.holes.push_back({bind(hole[0], *sort), *sort});
      ++pushed;
    }
    a.body = formula(s[2]);
  } else {
    fail(s, PK::Structure, "expected an abstraction (abs-n, abs-s, abs-t or abs)");
  }
  for (size_t i = 0; i < pushed; ++i) unbind();
  return a;
}

size_t read_declarations(const std::vector<Sexp>& forms, Declarations& out) {
  size_t i = 0;
  for (; i < forms.size() && forms[i].head() == "declare"; ++i) {
    const Sexp& d = forms[i];
    expect_size(d, 3);
    if (!d[1].atom || !is_identifier(d[1].text)) fail(d[1], PK::Structure, "bad declared name");
    if (!d[2].atom) fail(d[2], PK::Structure, "expected a sort");
    auto sort = sort_from_keyword(d[2].text);
    if (!sort) fail(d[2], PK::Structure, "unknown sort '" + d[2].text + "'");
    auto [it, fresh] = out.emplace(d[1].text, *sort);
    if (!fresh && it->second != *sort) fail(d, PK::Sort, "conflicting declaration of " + d[1].text);
  }
  return i;
}

FormulaPtr parse_formula(std::string_view text, const Declarations& decls) {
  auto forms = sexpr::read_all(text);
  Declarations all = decls;
  size_t i = read_declarations(forms, all);
  if (i >= forms.size()) throw ParseError(PK::Structure, 1, 1, "no formula");
  if (i + 1 != forms.size()) fail(forms[i + 1], PK::Structure, "trailing input after formula");
  FormulaParser p(all);
  p.reserve(forms[i]);
  return p.formula(forms[i]);
}

TermPtr parse_term(std::string_view text) {
  auto s = sexpr::read_one(text);
  FormulaParser p;
  return p.term(s);
}

}  // namespace cmr::syntax
