#include "cmr/kernel.hpp"

#include <algorithm>
#include <json.hpp>

namespace cmr::kernel {

using namespace syntax;
using sexpr::Sexp;
using PK = ParseError::Kind;

std::string_view theory_name(Theory t) { return t == Theory::CM ? "cm" : "cm-gwo"; }

std::optional<Theory> theory_from_name(std::string_view s) {
  if (s == "cm" || s == "CM") return Theory::CM;
  if (s == "cm-gwo" || s == "CM_GWO" || s == "gwo") return Theory::CM_GWO;
  return std::nullopt;
}

namespace {

ParamSpec F{ParamKind::Formula, {}};
ParamSpec T{ParamKind::Term, {}};
ParamSpec SV{ParamKind::SetVar, {}};
ParamSpec CV{ParamKind::ClassVar, {}};
ParamSpec AH{ParamKind::AnyHole, {}};
ParamSpec W{ParamKind::Witness, {}};
ParamSpec hole(std::vector<Sort> s) { return {ParamKind::Hole, std::move(s)}; }

std::vector<SchemeInfo> build_table() {
  using S = SchemeId;
  using Fa = Family;
  const auto N = Sort::First;
  const auto Set = Sort::Second;
  return {
      {S::ImpK, "imp-k", Fa::Logical, {F, F}},
      {S::ImpS, "imp-s", Fa::Logical, {F, F, F}},
      {S::AndIntro, "and-intro", Fa::Logical, {F, F}},
      {S::AndElimL, "and-elim-l", Fa::Logical, {F, F}},
      {S::AndElimR, "and-elim-r", Fa::Logical, {F, F}},
      {S::OrIntroL, "or-intro-l", Fa::Logical, {F, F}},
      {S::OrIntroR, "or-intro-r", Fa::Logical, {F, F}},
      {S::OrElim, "or-elim", Fa::Logical, {F, F, F}},
      {S::NegIntro, "neg-intro", Fa::Logical, {F, F}},
      {S::ExFalso, "ex-falso", Fa::Logical, {F, F}, true},
      {S::ExistsIntro, "exists-intro", Fa::Logical, {AH, W}},
      {S::ForallElim, "forall-elim", Fa::Logical, {AH, W}},
      {S::EqRefl, "eq-refl", Fa::Logical, {T}},
      {S::EqSubst, "eq-subst", Fa::Logical, {T, T, hole({N})}},
      {S::PaSuccNonzero, "pa-succ-nonzero", Fa::Number, {}},
      {S::PaSuccInj, "pa-succ-inj", Fa::Number, {}},
      {S::PaAddZero, "pa-add-zero", Fa::Number, {}},
      {S::PaAddSucc, "pa-add-succ", Fa::Number, {}},
      {S::PaMulZero, "pa-mul-zero", Fa::Number, {}},
      {S::PaMulSucc, "pa-mul-succ", Fa::Number, {}},
      {S::PaPair, "pa-pair", Fa::Number, {}},
      {S::Induction, "induction", Fa::NonLogical, {hole({N})}},
      {S::Recursion, "recursion", Fa::NonLogical, {hole({N, Set, Set})}},
      {S::CompSet, "comp-set", Fa::NonLogical, {hole({N})}},
      {S::CompClass, "comp-class", Fa::NonLogical, {hole({Set})}},
      {S::DecEq, "dec-eq", Fa::NonLogical, {T, T}},
      {S::DecIn1, "dec-in1", Fa::NonLogical, {T, SV}},
      {S::DecIn2, "dec-in2", Fa::NonLogical, {SV, CV}},
      {S::Lpo, "lpo", Fa::NonLogical, {hole({N}), hole({N})}},
      {S::DecPrec, "dec-prec", Fa::NonLogical, {}},
      {S::ExtClass, "ext-class", Fa::NonLogical, {SV, SV, CV}},
      {S::ExtPrec, "ext-prec", Fa::NonLogical, {SV, SV, SV, SV}},
      {S::W1Irrefl, "w1-irrefl", Fa::Gwo, {}},
      {S::W1Trans, "w1-trans", Fa::Gwo, {}},
      {S::W1Total, "w1-total", Fa::Gwo, {}},
      {S::W2, "w2", Fa::Gwo, {hole({Set})}},
      {S::W2Prime, "w2-prime", Fa::Gwo, {CV}},
      {S::W3, "w3", Fa::Gwo, {}},
  };
}

}  // namespace

const std::vector<SchemeInfo>& scheme_table() {
  static const std::vector<SchemeInfo> table = build_table();
  return table;
}

const SchemeInfo& scheme_info(SchemeId id) { return scheme_table()[static_cast<size_t>(id)]; }

std::optional<SchemeId> scheme_by_name(std::string_view name) {
  for (const auto& s : scheme_table())
    if (s.name == name) return s.id;
  return std::nullopt;
}

bool scheme_enabled(SchemeId id, Theory th) {
  return th == Theory::CM_GWO || scheme_info(id).family != Family::Gwo;
}

// ---------------------------------------------------------------------------
// instantiation

namespace {

[[noreturn]] void sort_fail(const std::string& msg) { throw SchemeError("sort-mismatch", msg); }

const FormulaPtr& as_formula(const Param& p) {
  if (!std::holds_alternative<FormulaPtr>(p)) sort_fail("expected a formula argument");
  return std::get<FormulaPtr>(p);
}
const TermPtr& as_term(const Param& p) {
  if (!std::holds_alternative<TermPtr>(p)) sort_fail("expected a number term argument");
  return std::get<TermPtr>(p);
}
const std::string& as_var(const Param& p) {
  if (!std::holds_alternative<std::string>(p)) sort_fail("expected a variable argument");
  return std::get<std::string>(p);
}
const Abstraction& as_abs(const Param& p) {
  if (!std::holds_alternative<Abstraction>(p)) sort_fail("expected an abstraction argument");
  return std::get<Abstraction>(p);
}

Replacement witness_of(const Param& p, Sort sort) {
  if (sort == Sort::First) return as_term(p);
  return as_var(p);
}

// Binder name for a quantifier wrapped around instances of the given
// abstractions; prefers `preferred` when no body has it free besides holes.
std::string pick_binder(const std::string& preferred, const std::vector<const Abstraction*>& abs,
                        NameSupply& supply) {
  for (const auto* a : abs) {
    for (const auto& fv : free_vars(*a->body)) {
      bool is_hole = std::any_of(a->holes.begin(), a->holes.end(),
                                 [&](const Binder& h) { return h.name == fv.name; });
      if (!is_hole && fv.name == preferred) return supply.fresh(preferred);
    }
  }
  return preferred;
}

NameSupply supply_for(const std::vector<Param>& params) {
  NameSupply s;
  for (const auto& p : params) {
    if (auto f = std::get_if<FormulaPtr>(&p)) s.reserve(**f);
    if (auto t = std::get_if<TermPtr>(&p)) {
      std::set<std::string> ns;
      collect_names(**t, ns);
      for (auto& n : ns) s.reserve(n);
    }
    if (auto v = std::get_if<std::string>(&p)) s.reserve(*v);
    if (auto a = std::get_if<Abstraction>(&p)) {
      s.reserve(*a->body);
      for (auto& h : a->holes) s.reserve(h.name);
    }
  }
  return s;
}

void check_holes(const Abstraction& a, const std::vector<Sort>& want) {
  if (a.holes.size() != want.size())
    throw SchemeError("axiom-arity", "abstraction needs " + std::to_string(want.size()) + " hole(s)");
  for (size_t i = 0; i < want.size(); ++i)
    if (a.holes[i].sort != want[i])
      sort_fail("hole " + a.holes[i].name + " must have sort " + std::string(sort_keyword(want[i])));
}

FormulaPtr build(SchemeId id, const std::vector<Param>& p) {
  using S = SchemeId;
  const auto N = Sort::First;
  const auto Set = Sort::Second;
  const auto Cls = Sort::Third;
  NameSupply supply = supply_for(p);
  auto fresh = [&](const char* base) { return supply.fresh(base); };
  auto inst = [](const Abstraction& a, std::vector<Replacement> args) { return instantiate(a, args); };

  switch (id) {
    case S::ImpK: {
      auto& a = as_formula(p[0]);
      return implies(a, implies(as_formula(p[1]), a));
    }
    case S::ImpS: {
      auto& a = as_formula(p[0]);
      auto& b = as_formula(p[1]);
      auto& c = as_formula(p[2]);
      return implies(implies(a, b), implies(implies(a, implies(b, c)), implies(a, c)));
    }
    case S::AndIntro: {
      auto& a = as_formula(p[0]);
      auto& b = as_formula(p[1]);
      return implies(a, implies(b, conj(a, b)));
    }
    case S::AndElimL: return implies(conj(as_formula(p[0]), as_formula(p[1])), as_formula(p[0]));
    case S::AndElimR: return implies(conj(as_formula(p[0]), as_formula(p[1])), as_formula(p[1]));
    case S::OrIntroL: return implies(as_formula(p[0]), disj(as_formula(p[0]), as_formula(p[1])));
    case S::OrIntroR: return implies(as_formula(p[1]), disj(as_formula(p[0]), as_formula(p[1])));
    case S::OrElim: {
      auto& a = as_formula(p[0]);
      auto& b = as_formula(p[1]);
      auto& c = as_formula(p[2]);
      return implies(implies(a, c), implies(implies(b, c), implies(disj(a, b), c)));
    }
    case S::NegIntro: {
      auto& a = as_formula(p[0]);
      auto& b = as_formula(p[1]);
      return implies(implies(a, b), implies(implies(a, neg(b)), neg(a)));
    }
    case S::ExFalso: {
      auto& a = as_formula(p[0]);
      return implies(neg(a), implies(a, as_formula(p[1])));
    }
    case S::ExistsIntro:
    case S::ForallElim: {
      auto& a = as_abs(p[0]);
      check_holes(a, {a.holes.empty() ? N : a.holes[0].sort});
      const auto& h = a.holes[0];
      auto at_w = inst(a, {witness_of(p[1], h.sort)});
      if (id == S::ExistsIntro) return implies(at_w, exists(h.sort, h.name, a.body));
      return implies(forall(h.sort, h.name, a.body), at_w);
    }
    case S::EqRefl: return eq(as_term(p[0]), as_term(p[0]));
    case S::EqSubst: {
      auto& t = as_term(p[0]);
      auto& s = as_term(p[1]);
      auto& a = as_abs(p[2]);
      check_holes(a, {N});
      return implies(conj(eq(t, s), inst(a, {t})), inst(a, {s}));
    }
    case S::PaSuccNonzero:
      return forall(N, "n", neg(eq(succ(var("n")), zero())));
    case S::PaSuccInj:
      return forall(N, "n", forall(N, "m", implies(eq(succ(var("n")), succ(var("m"))),
                                                   eq(var("n"), var("m")))));
    case S::PaAddZero: return forall(N, "n", eq(add(var("n"), zero()), var("n")));
    case S::PaAddSucc:
      return forall(N, "n", forall(N, "m", eq(add(var("n"), succ(var("m"))),
                                              succ(add(var("n"), var("m"))))));
    case S::PaMulZero: return forall(N, "n", eq(mul(var("n"), zero()), zero()));
    case S::PaMulSucc:
      return forall(N, "n", forall(N, "m", eq(mul(var("n"), succ(var("m"))),
                                              add(mul(var("n"), var("m")), var("n")))));
    case S::PaPair: {
      auto m = var("m");
      auto n = var("n");
      auto pr = pair_term(m, n);
      auto s = add(m, n);
      return forall(N, "m", forall(N, "n", eq(add(pr, pr), add(add(mul(s, succ(s)), m), m))));
    }
    case S::Induction: {
      auto& a = as_abs(p[0]);
      check_holes(a, {N});
      const auto& n = a.holes[0].name;
      auto step = forall(N, n, implies(a.body, inst(a, {succ(var(n))})));
      return implies(conj(inst(a, {zero()}), step), forall(N, n, a.body));
    }
    case S::Recursion: {
      auto& a = as_abs(p[0]);
      check_holes(a, {N, Set, Set});
      const auto& n = a.holes[0].name;
      const auto& x = a.holes[1].name;
      const auto& y = a.holes[2].name;
      auto z = fresh("Z");
      auto x2 = fresh("X");
      auto y2 = fresh("Y");
      auto ante = forall(N, n, forall(Set, x, exists(Set, y, a.body)));
      auto step = exists(Set, x2, conj(eq2(set_var(x2), slice(z, var(n))),
                                       exists(Set, y2, conj(eq2(set_var(y2), slice(z, succ(var(n)))),
                                                            inst(a, {var(n), x2, y2})))));
      auto concl = forall(Set, x, exists(Set, z, conj(eq2(slice(z, zero()), set_var(x)),
                                                      forall(N, n, step))));
      return implies(ante, concl);
    }
    case S::CompSet: {
      auto& a = as_abs(p[0]);
      check_holes(a, {N});
      const auto& n = a.holes[0].name;
      auto x = fresh("X");
      return implies(forall(N, n, disj(a.body, neg(a.body))),
                     exists(Set, x, forall(N, n, iff(in1(var(n), x), a.body))));
    }
    case S::CompClass: {
      auto& a = as_abs(p[0]);
      check_holes(a, {Set});
      const auto& x = a.holes[0].name;
      auto c = fresh("C");
      return implies(forall(Set, x, disj(a.body, neg(a.body))),
                     exists(Cls, c, forall(Set, x, iff(in2(x, c), a.body))));
    }
    case S::DecEq: {
      auto e = eq(as_term(p[0]), as_term(p[1]));
      return disj(e, neg(e));
    }
    case S::DecIn1: {
      auto e = in1(as_term(p[0]), as_var(p[1]));
      return disj(e, neg(e));
    }
    case S::DecIn2: {
      auto e = in2(as_var(p[0]), as_var(p[1]));
      return disj(e, neg(e));
    }
    case S::Lpo: {
      auto& a = as_abs(p[0]);
      auto& b = as_abs(p[1]);
      check_holes(a, {N});
      check_holes(b, {N});
      auto n = pick_binder("n", {&a, &b}, supply);
      auto fa = inst(a, {var(n)});
      auto fb = inst(b, {var(n)});
      return implies(forall(N, n, disj(fa, fb)), disj(forall(N, n, fa), exists(N, n, fb)));
    }
    case S::DecPrec: {
      auto e = prec("X", "Y");
      return forall(Set, "X", forall(Set, "Y", disj(e, neg(e))));
    }
    case S::ExtClass: {
      auto& x = as_var(p[0]);
      auto& y = as_var(p[1]);
      auto& c = as_var(p[2]);
      return implies(eq2(set_var(x), set_var(y)), iff(in2(x, c), in2(y, c)));
    }
    case S::ExtPrec: {
      auto& x = as_var(p[0]);
      auto& y = as_var(p[1]);
      auto& x2 = as_var(p[2]);
      auto& y2 = as_var(p[3]);
      return implies(conj(eq2(set_var(x), set_var(y)), eq2(set_var(x2), set_var(y2))),
                     iff(prec(x, x2), prec(y, y2)));
    }
    case S::W1Irrefl: return forall(Set, "X", neg(prec("X", "X")));
    case S::W1Trans:
      return forall(Set, "X", forall(Set, "Y", forall(Set, "Z",
                 implies(conj(prec("X", "Y"), prec("Y", "Z")), prec("X", "Z")))));
    case S::W1Total:
      return forall(Set, "X", forall(Set, "Y",
                 disj(prec("X", "Y"), disj(eq2(set_var("X"), set_var("Y")), prec("Y", "X")))));
    case S::W2: {
      auto& a = as_abs(p[0]);
      check_holes(a, {Set});
      const auto& x = a.holes[0].name;
      auto y = pick_binder("Y", {&a}, supply);
      if (y == x) y = fresh("Y");
      auto hyp = forall(Set, x, implies(forall(Set, y, implies(prec(y, x), inst(a, {y}))), a.body));
      return implies(hyp, forall(Set, x, a.body));
    }
    case S::W2Prime: {
      auto& c = as_var(p[0]);
      std::string x = c == "X" ? fresh("X") : "X";
      std::string y = c == "Y" ? fresh("Y") : "Y";
      auto hyp = forall(Set, x, implies(forall(Set, y, implies(prec(y, x), in2(y, c))), in2(x, c)));
      return implies(hyp, forall(Set, x, in2(x, c)));
    }
    case S::W3:
      return forall(Set, "X", exists(Set, "Z", forall(Set, "Y",
                 implies(prec("Y", "X"), exists(N, "n", eq2(set_var("Y"), slice("Z", var("n"))))))));
  }
  throw SchemeError("axiom-unknown", "unknown scheme");
}

}  // namespace

FormulaPtr instantiate_axiom(SchemeId id, const std::vector<Param>& params) {
  const auto& info = scheme_info(id);
  if (params.size() != info.params.size())
    throw SchemeError("axiom-arity", std::string(info.name) + " takes " +
                                         std::to_string(info.params.size()) + " argument(s), got " +
                                         std::to_string(params.size()));
  try {
    return expand(build(id, params));
  } catch (const SortError& e) {
    throw SchemeError("sort-mismatch", e.what());
  }
}

// ---------------------------------------------------------------------------
// proof files

namespace {

long parse_index(const Sexp& s) {
  if (!s.atom) sexpr::fail(s, PK::Structure, "expected a line index");
  try {
    size_t used = 0;
    long v = std::stol(s.text, &used);
    if (used != s.text.size()) throw std::invalid_argument("junk");
    return v;
  } catch (const std::exception&) {
    sexpr::fail(s, PK::Structure, "expected a line index, found '" + s.text + "'");
  }
}

Param parse_param(FormulaParser& fp, const ParamSpec& spec, const Sexp& s,
                  std::optional<Sort>& last_hole) {
  switch (spec.kind) {
    case ParamKind::Formula: return fp.formula(s);
    case ParamKind::Term: return fp.term(s);
    case ParamKind::SetVar: return fp.variable(s, Sort::Second);
    case ParamKind::ClassVar: return fp.variable(s, Sort::Third);
    case ParamKind::Hole:
    case ParamKind::AnyHole: {
      auto a = fp.abstraction(s);
      if (spec.kind == ParamKind::Hole) check_holes(a, spec.holes);
      else if (a.holes.size() != 1) throw SchemeError("axiom-arity", "expected one hole");
      last_hole = a.holes[0].sort;
      return a;
    }
    case ParamKind::Witness: {
      Sort sort = last_hole.value_or(Sort::First);
      if (sort == Sort::First) return fp.term(s);
      return fp.variable(s, sort);
    }
  }
  return FormulaPtr{};
}

Justification parse_justification(FormulaParser& fp, const Sexp& s) {
  Justification j;
  auto h = s.head();
  if (h == "axiom") {
    j.kind = Justification::Kind::Axiom;
    if (s.size() < 2 || !s[1].atom) sexpr::fail(s, PK::Arity, "axiom needs a scheme id");
    j.scheme = scheme_by_name(s[1].text);
    if (!j.scheme) {
      j.deferred = {"axiom-unknown", "unknown axiom scheme '" + s[1].text + "'"};
      return j;
    }
    const auto& info = scheme_info(*j.scheme);
    if (s.size() - 2 != info.params.size()) {
      j.deferred = {"axiom-arity", std::string(info.name) + " takes " +
                                       std::to_string(info.params.size()) + " argument(s), got " +
                                       std::to_string(s.size() - 2)};
      return j;
    }
    std::optional<Sort> last_hole;
    try {
      for (size_t k = 0; k < info.params.size(); ++k)
        j.params.push_back(parse_param(fp, info.params[k], s[k + 2], last_hole));
    } catch (const ParseError& e) {
      if (e.kind() != PK::Sort) throw;
      j.deferred = {"sort-mismatch", e.detail()};
    } catch (const SchemeError& e) {
      j.deferred = {e.code, e.what()};
    }
    return j;
  }
  if (h == "mp") {
    sexpr::expect_size(s, 3);
    j.kind = Justification::Kind::MP;
    j.i = parse_index(s[1]);
    j.j = parse_index(s[2]);
    return j;
  }
  if (h == "gen-all" || h == "gen-ex") {
    sexpr::expect_size(s, 3);
    j.kind = h == "gen-all" ? Justification::Kind::AllGen : Justification::Kind::ExGen;
    j.i = parse_index(s[1]);
    if (!s[2].atom || !is_identifier(s[2].text))
      sexpr::fail(s[2], PK::Structure, "expected a variable name");
    j.var = s[2].text;
    return j;
  }
  if (h.empty()) sexpr::fail(s, PK::Structure, "expected a justification");
  sexpr::fail(s, PK::UnknownHead, "unknown justification '" + std::string(h) + "'");
}

}  // namespace

Proof parse_proof(std::string_view text) {
  auto forms = sexpr::read_all(text);
  Proof p;
  size_t k = read_declarations(forms, p.decls);
  if (k < forms.size() && forms[k].head() == "theory") {
    sexpr::expect_size(forms[k], 2);
    const auto& t = forms[k][1];
    auto th = t.atom ? theory_from_name(t.text) : std::nullopt;
    if (!th) sexpr::fail(t, PK::Structure, "unknown theory");
    p.theory = th;
    ++k;
  }
  if (k >= forms.size()) throw ParseError(PK::Structure, 1, 1, "missing (proof ...) form");
  const Sexp& body = forms[k];
  if (body.head() != "proof") sexpr::fail(body, PK::Structure, "expected (proof ...)");
  if (k + 1 != forms.size()) sexpr::fail(forms[k + 1], PK::Structure, "trailing input after proof");

  FormulaParser fp(p.decls);
  for (const auto& f : forms) fp.reserve(f);
  for (size_t i = 1; i < body.size(); ++i) {
    const Sexp& l = body[i];
    if (l.head() != "line") sexpr::fail(l, PK::Structure, "expected (line FORMULA JUSTIFICATION)");
    sexpr::expect_size(l, 3);
    Line line;
    line.src_line = l.line;
    line.formula = fp.formula(l[1]);
    line.just = parse_justification(fp, l[2]);
    p.lines.push_back(std::move(line));
  }
  return p;
}

// ---------------------------------------------------------------------------
// checking

std::string Verdict::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["status"] = accepted ? "accept" : "reject";
  j["bad_line"] = accepted ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(bad_line);
  j["reason"] = reason;
  j["reason_code"] = reason_code;
  return j.dump();
}

FormulaPtr core_formula(const Line& l) { return expand(l.formula); }

namespace {

Verdict reject(long line, std::string code, std::string reason) {
  Verdict v;
  v.bad_line = line;
  v.reason_code = std::move(code);
  v.reason = std::move(reason);
  return v;
}

std::optional<Sort> free_sort(const Formula& f, const std::string& name) {
  for (const auto& b : free_vars(f))
    if (b.name == name) return b.sort;
  return std::nullopt;
}

}  // namespace

Verdict check_proof(const Proof& p, Theory th) {
  if (p.lines.empty()) return reject(-1, "empty-proof", "proof has no lines");
  std::vector<FormulaPtr> core;
  core.reserve(p.lines.size());
  for (long k = 0; k < static_cast<long>(p.lines.size()); ++k) {
    const Line& line = p.lines[k];
    const Justification& j = line.just;
    FormulaPtr here = core_formula(line);
    auto cite_ok = [&](long c) { return c >= 0 && c < k; };

    if (j.deferred) return reject(k, j.deferred->first, j.deferred->second);

    switch (j.kind) {
      case Justification::Kind::Axiom: {
        if (!j.scheme) return reject(k, "axiom-unknown", "missing scheme");
        if (!scheme_enabled(*j.scheme, th))
          return reject(k, "theory", std::string(scheme_info(*j.scheme).name) +
                                         " is not an axiom of " + std::string(theory_name(th)));
        FormulaPtr inst;
        try {
          inst = instantiate_axiom(*j.scheme, j.params);
        } catch (const SchemeError& e) {
          return reject(k, e.code, e.what());
        }
        if (!alpha_equal(here, inst))
          return reject(k, "axiom-mismatch", "line is not the instance " + print(*inst));
        break;
      }
      case Justification::Kind::MP: {
        if (!cite_ok(j.i) || !cite_ok(j.j))
          return reject(k, "bad-citation", "mp must cite earlier lines");
        const auto& imp = core[j.j];
        if (imp->kind != Formula::Kind::Implies)
          return reject(k, "mp-not-implication", "line " + std::to_string(j.j) + " is not an implication");
        if (!alpha_equal(imp->a, core[j.i]))
          return reject(k, "mp-mismatch", "antecedent of line " + std::to_string(j.j) +
                                              " differs from line " + std::to_string(j.i));
        if (!alpha_equal(imp->b, here))
          return reject(k, "mp-mismatch", "line is not the consequent of line " + std::to_string(j.j));
        break;
      }
      case Justification::Kind::AllGen:
      case Justification::Kind::ExGen: {
        const bool all = j.kind == Justification::Kind::AllGen;
        if (!cite_ok(j.i)) return reject(k, "bad-citation", "premise must be an earlier line");
        const auto& prem = core[j.i];
        if (prem->kind != Formula::Kind::Implies)
          return reject(k, "gen-shape", "premise is not an implication");
        if (here->kind != Formula::Kind::Implies)
          return reject(k, "gen-shape", "conclusion is not an implication");
        const auto& q = all ? here->b : here->a;
        const auto qkind = all ? Formula::Kind::ForAll : Formula::Kind::Exists;
        if (q->kind != qkind)
          return reject(k, "gen-shape", all ? "consequent is not universally quantified"
                                            : "antecedent is not existentially quantified");
        const Sort sort = q->bound.sort;
        if (auto s = free_sort(*prem, j.var); s && *s != sort)
          return reject(k, "sort-mismatch", j.var + " has sort " + std::string(sort_keyword(*s)) +
                                                " but the quantifier binds " +
                                                std::string(sort_keyword(sort)));
        const auto& side = all ? prem->a : prem->b;
        if (occurs_free(*side, j.var))
          return reject(k, "gen-side-condition",
                        j.var + " occurs free in the " + (all ? "antecedent" : "consequent"));
        FormulaPtr want = all ? implies(prem->a, forall(sort, j.var, prem->b))
                              : implies(exists(sort, j.var, prem->a), prem->b);
        if (!alpha_equal(here, want))
          return reject(k, "gen-shape", "line does not follow by generalising " + j.var);
        break;
      }
    }
    core.push_back(here);
  }
  Verdict v;
  v.accepted = true;
  return v;
}

FormulaPtr theorem_of(const Proof& p) {
  if (p.lines.empty()) throw std::logic_error("empty proof has no theorem");
  auto v = check_proof(p, Theory::CM_GWO);
  if (!v.accepted) throw std::logic_error("proof is not accepted: " + v.reason);
  return p.lines.back().formula;
}

}  // namespace cmr::kernel
