#include "cmr/syntax.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace cmr::syntax {

std::string_view sort_keyword(Sort s) {
  switch (s) {
    case Sort::First: return "num";
    case Sort::Second: return "set";
    case Sort::Third: return "class";
  }
  return "?";
}

std::optional<Sort> sort_from_keyword(std::string_view kw) {
  if (kw == "num") return Sort::First;
  if (kw == "set") return Sort::Second;
  if (kw == "class") return Sort::Third;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// constructors

namespace {
TermPtr mk_term(Term::Kind k, std::string name, TermPtr l, TermPtr r) {
  return std::make_shared<const Term>(Term{k, std::move(name), std::move(l), std::move(r)});
}
FormulaPtr mk(Formula f) { return std::make_shared<const Formula>(std::move(f)); }
Formula blank(Formula::Kind k) {
  Formula f;
  f.kind = k;
  return f;
}
}  // namespace

TermPtr var(std::string name) { return mk_term(Term::Kind::Var, std::move(name), nullptr, nullptr); }
TermPtr zero() {
  static const TermPtr z = mk_term(Term::Kind::Zero, "", nullptr, nullptr);
  return z;
}
TermPtr succ(TermPtr t) { return mk_term(Term::Kind::Succ, "", std::move(t), nullptr); }
TermPtr add(TermPtr a, TermPtr b) { return mk_term(Term::Kind::Add, "", std::move(a), std::move(b)); }
TermPtr mul(TermPtr a, TermPtr b) { return mk_term(Term::Kind::Mul, "", std::move(a), std::move(b)); }
TermPtr pair_term(TermPtr a, TermPtr b) {
  return mk_term(Term::Kind::Pair, "", std::move(a), std::move(b));
}
TermPtr numeral(unsigned long k) {
  TermPtr t = zero();
  for (unsigned long i = 0; i < k; ++i) t = succ(t);
  return t;
}

std::optional<unsigned long> numeral_value(const Term& t) {
  unsigned long k = 0;
  const Term* p = &t;
  while (p->kind == Term::Kind::Succ) {
    ++k;
    p = p->lhs.get();
  }
  if (p->kind != Term::Kind::Zero) return std::nullopt;
  return k;
}

SetTermPtr set_var(std::string name) {
  return std::make_shared<const SetTerm>(SetTerm{SetTerm::Kind::Var, std::move(name), nullptr, nullptr});
}
SetTermPtr slice(std::string base, TermPtr index) {
  return std::make_shared<const SetTerm>(
      SetTerm{SetTerm::Kind::Slice, std::move(base), std::move(index), nullptr});
}
SetTermPtr bracket(std::string base, TermPtr index) {
  return std::make_shared<const SetTerm>(
      SetTerm{SetTerm::Kind::Bracket, std::move(base), std::move(index), nullptr});
}
SetTermPtr builder(std::string bound, FormulaPtr body) {
  return std::make_shared<const SetTerm>(
      SetTerm{SetTerm::Kind::Builder, std::move(bound), nullptr, std::move(body)});
}

FormulaPtr eq(TermPtr a, TermPtr b) {
  auto f = blank(Formula::Kind::Eq);
  f.t1 = std::move(a);
  f.t2 = std::move(b);
  return mk(std::move(f));
}
FormulaPtr in1(TermPtr t, SetTermPtr s) {
  auto f = blank(Formula::Kind::In1);
  f.t1 = std::move(t);
  f.s1 = std::move(s);
  return mk(std::move(f));
}
FormulaPtr in1(TermPtr t, std::string set) { return in1(std::move(t), set_var(std::move(set))); }
FormulaPtr in2(SetTermPtr s, std::string cls) {
  auto f = blank(Formula::Kind::In2);
  f.s1 = std::move(s);
  f.c1 = std::move(cls);
  return mk(std::move(f));
}
FormulaPtr in2(std::string set, std::string cls) { return in2(set_var(std::move(set)), std::move(cls)); }
FormulaPtr prec(SetTermPtr a, SetTermPtr b) {
  auto f = blank(Formula::Kind::Prec);
  f.s1 = std::move(a);
  f.s2 = std::move(b);
  return mk(std::move(f));
}
FormulaPtr prec(std::string a, std::string b) {
  return prec(set_var(std::move(a)), set_var(std::move(b)));
}

namespace {
FormulaPtr binary(Formula::Kind k, FormulaPtr a, FormulaPtr b) {
  auto f = blank(k);
  f.a = std::move(a);
  f.b = std::move(b);
  return mk(std::move(f));
}
FormulaPtr quant(Formula::Kind k, Sort s, std::string v, FormulaPtr body) {
  auto f = blank(k);
  f.bound = Binder{std::move(v), s};
  f.a = std::move(body);
  return mk(std::move(f));
}
FormulaPtr two_sets(Formula::Kind k, SetTermPtr a, SetTermPtr b) {
  auto f = blank(k);
  f.s1 = std::move(a);
  f.s2 = std::move(b);
  return mk(std::move(f));
}
FormulaPtr bounded(Formula::Kind k, Formula::Bound rel, std::string v, SetTermPtr over,
                   FormulaPtr body) {
  auto f = blank(k);
  f.bound = Binder{std::move(v), Sort::Second};
  f.bound_rel = rel;
  f.s2 = std::move(over);
  f.a = std::move(body);
  return mk(std::move(f));
}
}  // namespace

FormulaPtr conj(FormulaPtr a, FormulaPtr b) { return binary(Formula::Kind::And, std::move(a), std::move(b)); }
FormulaPtr disj(FormulaPtr a, FormulaPtr b) { return binary(Formula::Kind::Or, std::move(a), std::move(b)); }
FormulaPtr neg(FormulaPtr a) { return binary(Formula::Kind::Not, std::move(a), nullptr); }
FormulaPtr implies(FormulaPtr a, FormulaPtr b) {
  return binary(Formula::Kind::Implies, std::move(a), std::move(b));
}
FormulaPtr forall(Sort s, std::string v, FormulaPtr body) {
  return quant(Formula::Kind::ForAll, s, std::move(v), std::move(body));
}
FormulaPtr exists(Sort s, std::string v, FormulaPtr body) {
  return quant(Formula::Kind::Exists, s, std::move(v), std::move(body));
}
FormulaPtr bot() { return mk(blank(Formula::Kind::Bot)); }
FormulaPtr iff(FormulaPtr a, FormulaPtr b) { return binary(Formula::Kind::Iff, std::move(a), std::move(b)); }
FormulaPtr eq2(SetTermPtr a, SetTermPtr b) { return two_sets(Formula::Kind::Eq2, std::move(a), std::move(b)); }
FormulaPtr eq3(std::string a, std::string b) {
  auto f = blank(Formula::Kind::Eq3);
  f.c1 = std::move(a);
  f.c2 = std::move(b);
  return mk(std::move(f));
}
FormulaPtr in_star(SetTermPtr y, SetTermPtr x) {
  return two_sets(Formula::Kind::InStar, std::move(y), std::move(x));
}
FormulaPtr sub_star(SetTermPtr x, SetTermPtr y) {
  return two_sets(Formula::Kind::SubStar, std::move(x), std::move(y));
}
FormulaPtr sub_star_class(SetTermPtr x, std::string cls) {
  auto f = blank(Formula::Kind::SubStar);
  f.s1 = std::move(x);
  f.c1 = std::move(cls);
  return mk(std::move(f));
}
FormulaPtr eq_star(SetTermPtr x, SetTermPtr y) {
  return two_sets(Formula::Kind::EqStar, std::move(x), std::move(y));
}
FormulaPtr bounded_all(Formula::Bound rel, std::string v, SetTermPtr over, FormulaPtr body) {
  return bounded(Formula::Kind::BoundedAll, rel, std::move(v), std::move(over), std::move(body));
}
FormulaPtr bounded_ex(Formula::Bound rel, std::string v, SetTermPtr over, FormulaPtr body) {
  return bounded(Formula::Kind::BoundedEx, rel, std::move(v), std::move(over), std::move(body));
}

bool is_quantifier(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::ForAll:
    case Formula::Kind::Exists:
    case Formula::Kind::BoundedAll:
    case Formula::Kind::BoundedEx:
      return true;
    default:
      return false;
  }
}

// ---------------------------------------------------------------------------
// printing

std::string print(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Var: return t.name;
    case Term::Kind::Zero: return "0";
    case Term::Kind::Succ:
      if (auto k = numeral_value(t)) return std::to_string(*k);
      return "(s " + print(*t.lhs) + ")";
    case Term::Kind::Add: return "(+ " + print(*t.lhs) + " " + print(*t.rhs) + ")";
    case Term::Kind::Mul: return "(* " + print(*t.lhs) + " " + print(*t.rhs) + ")";
    case Term::Kind::Pair: return "(pair " + print(*t.lhs) + " " + print(*t.rhs) + ")";
  }
  return "?";
}

std::string print(const SetTerm& s) {
  switch (s.kind) {
    case SetTerm::Kind::Var: return s.name;
    case SetTerm::Kind::Slice: return "(slice " + s.name + " " + print(*s.index) + ")";
    case SetTerm::Kind::Bracket: return "(bracket " + s.name + " " + print(*s.index) + ")";
    case SetTerm::Kind::Builder: return "(set " + s.name + " " + print(*s.body) + ")";
  }
  return "?";
}

namespace {
const char* quant_head(Formula::Kind k, Sort s) {
  const bool all = k == Formula::Kind::ForAll;
  switch (s) {
    case Sort::First: return all ? "forall-n" : "exists-n";
    case Sort::Second: return all ? "forall-s" : "exists-s";
    case Sort::Third: return all ? "forall-t" : "exists-t";
  }
  return "?";
}
}  // namespace

std::string print(const Formula& f) {
  using K = Formula::Kind;
  auto bin = [&](const char* head) {
    return std::string("(") + head + " " + print(*f.a) + " " + print(*f.b) + ")";
  };
  auto sets = [&](const char* head) {
    return std::string("(") + head + " " + print(*f.s1) + " " + print(*f.s2) + ")";
  };
  switch (f.kind) {
    case K::Eq: return "(= " + print(*f.t1) + " " + print(*f.t2) + ")";
    case K::In1: return "(in1 " + print(*f.t1) + " " + print(*f.s1) + ")";
    case K::In2: return "(in2 " + print(*f.s1) + " " + f.c1 + ")";
    case K::Prec: return sets("prec");
    case K::And: return bin("and");
    case K::Or: return bin("or");
    case K::Not: return "(not " + print(*f.a) + ")";
    case K::Implies: return bin("->");
    case K::Iff: return bin("iff");
    case K::ForAll:
    case K::Exists:
      return std::string("(") + quant_head(f.kind, f.bound.sort) + " " + f.bound.name + " " +
             print(*f.a) + ")";
    case K::Bot: return "(bot)";
    case K::Eq2: return sets("eq2");
    case K::Eq3: return "(eq3 " + f.c1 + " " + f.c2 + ")";
    case K::InStar: return sets("in*");
    case K::SubStar:
      if (f.s2) return sets("sub*");
      return "(sub* " + print(*f.s1) + " " + f.c1 + ")";
    case K::EqStar: return sets("eq*");
    case K::BoundedAll:
    case K::BoundedEx: {
      std::string head = f.kind == K::BoundedAll ? "forall-" : "exists-";
      head += f.bound_rel == Formula::Bound::Prec ? "prec" : "in*";
      return "(" + head + " " + f.bound.name + " " + print(*f.s2) + " " + print(*f.a) + ")";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// variables

namespace {

void term_free(const Term& t, std::vector<std::string>& out) {
  switch (t.kind) {
    case Term::Kind::Var:
      if (std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
      return;
    case Term::Kind::Zero: return;
    case Term::Kind::Succ: term_free(*t.lhs, out); return;
    default:
      term_free(*t.lhs, out);
      term_free(*t.rhs, out);
  }
}

struct FreeCollector {
  std::vector<Binder> out;
  std::vector<std::string> bound;

  bool is_bound(const std::string& n) const {
    return std::find(bound.begin(), bound.end(), n) != bound.end();
  }
  void note(const std::string& n, Sort s) {
    if (is_bound(n)) return;
    for (const auto& b : out)
      if (b.name == n) return;
    out.push_back({n, s});
  }
  void term(const Term& t) {
    std::vector<std::string> vs;
    term_free(t, vs);
    for (auto& v : vs) note(v, Sort::First);
  }
  void set(const SetTerm& s) {
    switch (s.kind) {
      case SetTerm::Kind::Var: note(s.name, Sort::Second); return;
      case SetTerm::Kind::Slice:
      case SetTerm::Kind::Bracket:
        note(s.name, Sort::Second);
        term(*s.index);
        return;
      case SetTerm::Kind::Builder:
        bound.push_back(s.name);
        formula(*s.body);
        bound.pop_back();
        return;
    }
  }
  void formula(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind) {
      case K::Eq: term(*f.t1); term(*f.t2); return;
      case K::In1: term(*f.t1); set(*f.s1); return;
      case K::In2: set(*f.s1); note(f.c1, Sort::Third); return;
      case K::Prec: case K::Eq2: case K::InStar: case K::EqStar:
        set(*f.s1); set(*f.s2); return;
      case K::SubStar:
        set(*f.s1);
        if (f.s2) set(*f.s2); else note(f.c1, Sort::Third);
        return;
      case K::Eq3: note(f.c1, Sort::Third); note(f.c2, Sort::Third); return;
      case K::Bot: return;
      case K::Not: formula(*f.a); return;
      case K::And: case K::Or: case K::Implies: case K::Iff:
        formula(*f.a); formula(*f.b); return;
      case K::ForAll: case K::Exists:
        bound.push_back(f.bound.name);
        formula(*f.a);
        bound.pop_back();
        return;
      case K::BoundedAll: case K::BoundedEx:
        set(*f.s2);
        bound.push_back(f.bound.name);
        formula(*f.a);
        bound.pop_back();
        return;
    }
  }
};

void set_names(const SetTerm& s, std::set<std::string>& out);
void formula_names(const Formula& f, std::set<std::string>& out);

void set_names(const SetTerm& s, std::set<std::string>& out) {
  out.insert(s.name);
  if (s.index) collect_names(*s.index, out);
  if (s.body) formula_names(*s.body, out);
}

void formula_names(const Formula& f, std::set<std::string>& out) {
  if (f.t1) collect_names(*f.t1, out);
  if (f.t2) collect_names(*f.t2, out);
  if (f.s1) set_names(*f.s1, out);
  if (f.s2) set_names(*f.s2, out);
  if (!f.c1.empty()) out.insert(f.c1);
  if (!f.c2.empty()) out.insert(f.c2);
  if (!f.bound.name.empty()) out.insert(f.bound.name);
  if (f.a) formula_names(*f.a, out);
  if (f.b) formula_names(*f.b, out);
}

}  // namespace

std::vector<Binder> free_vars(const Formula& f) {
  FreeCollector c;
  c.formula(f);
  return std::move(c.out);
}

std::vector<std::string> free_vars(const Term& t) {
  std::vector<std::string> out;
  term_free(t, out);
  return out;
}

bool occurs_free(const Formula& f, const std::string& name) {
  for (const auto& b : free_vars(f))
    if (b.name == name) return true;
  return false;
}

void collect_names(const Term& t, std::set<std::string>& out) {
  if (t.kind == Term::Kind::Var) out.insert(t.name);
  if (t.lhs) collect_names(*t.lhs, out);
  if (t.rhs) collect_names(*t.rhs, out);
}

std::set<std::string> all_names(const Formula& f) {
  std::set<std::string> out;
  formula_names(f, out);
  return out;
}

void NameSupply::reserve(const Formula& f) { formula_names(f, used_); }

std::string NameSupply::fresh(const std::string& base) {
  // strip an existing _k suffix so repeated renaming stays readable
  std::string stem = base;
  if (auto u = stem.rfind('_'); u != std::string::npos && u + 1 < stem.size() &&
                                std::all_of(stem.begin() + u + 1, stem.end(), ::isdigit))
    stem.resize(u);
  if (stem.empty()) stem = "v";
  for (unsigned k = 1;; ++k) {
    std::string cand = stem + "_" + std::to_string(k);
    if (used_.insert(cand).second) return cand;
  }
}

// ---------------------------------------------------------------------------
// substitution

TermPtr substitute(const TermPtr& t, const std::string& v, const TermPtr& r) {
  switch (t->kind) {
    case Term::Kind::Var: return t->name == v ? r : t;
    case Term::Kind::Zero: return t;
    case Term::Kind::Succ: {
      auto l = substitute(t->lhs, v, r);
      return l == t->lhs ? t : succ(l);
    }
    default: {
      auto l = substitute(t->lhs, v, r);
      auto rr = substitute(t->rhs, v, r);
      if (l == t->lhs && rr == t->rhs) return t;
      return mk_term(t->kind, "", l, rr);
    }
  }
}

namespace {

// Simultaneous substitution: first-order names map to terms, higher-order
// names map to names. Binders that would capture a free variable of some
// replacement are renamed.
struct Subst {
  std::map<std::string, TermPtr> terms;
  std::map<std::string, std::string> names;
  std::set<std::string> replacement_frees;
  NameSupply* supply;

  bool empty() const { return terms.empty() && names.empty(); }

  Subst without(const std::string& v) const {
    Subst s = *this;
    s.terms.erase(v);
    s.names.erase(v);
    return s;
  }

  TermPtr term(const TermPtr& t) const {
    switch (t->kind) {
      case Term::Kind::Var: {
        auto it = terms.find(t->name);
        return it == terms.end() ? t : it->second;
      }
      case Term::Kind::Zero: return t;
      case Term::Kind::Succ: {
        auto l = term(t->lhs);
        return l == t->lhs ? t : succ(l);
      }
      default: {
        auto l = term(t->lhs);
        auto r = term(t->rhs);
        if (l == t->lhs && r == t->rhs) return t;
        return mk_term(t->kind, "", l, r);
      }
    }
  }

  std::string name(const std::string& n) const {
    auto it = names.find(n);
    return it == names.end() ? n : it->second;
  }

  // Handles a binder: returns the (possibly renamed) binder name and the
  // substitution to apply to the body.
  std::pair<std::string, Subst> enter(const std::string& b, Sort sort,
                                      const Formula& body) const {
    Subst inner = without(b);
    if (inner.empty()) return {b, inner};
    if (!replacement_frees.count(b)) return {b, inner};
    // only rename when some substituted variable actually occurs in the body
    bool relevant = false;
    for (const auto& fv : free_vars(body))
      if (inner.terms.count(fv.name) || inner.names.count(fv.name)) relevant = true;
    if (!relevant) return {b, inner};
    std::string nb = supply->fresh(b);
    if (sort == Sort::First)
      inner.terms[b] = var(nb);
    else
      inner.names[b] = nb;
    return {nb, inner};
  }

  SetTermPtr set(const SetTermPtr& s) const {
    switch (s->kind) {
      case SetTerm::Kind::Var: {
        auto n = name(s->name);
        return n == s->name ? s : set_var(n);
      }
      case SetTerm::Kind::Slice:
      case SetTerm::Kind::Bracket: {
        auto n = name(s->name);
        auto i = term(s->index);
        if (n == s->name && i == s->index) return s;
        return std::make_shared<const SetTerm>(SetTerm{s->kind, n, i, nullptr});
      }
      case SetTerm::Kind::Builder: {
        auto [b, inner] = enter(s->name, Sort::First, *s->body);
        auto body = inner.formula(s->body);
        if (b == s->name && body == s->body) return s;
        return builder(b, body);
      }
    }
    return s;
  }

  FormulaPtr formula(const FormulaPtr& f) const {
    if (empty()) return f;
    using K = Formula::Kind;
    Formula g = *f;
    switch (f->kind) {
      case K::ForAll:
      case K::Exists:
      case K::BoundedAll:
      case K::BoundedEx: {
        if (g.s2) g.s2 = set(g.s2);
        auto [b, inner] = enter(f->bound.name, f->bound.sort, *f->a);
        g.bound.name = b;
        g.a = inner.formula(f->a);
        return mk(std::move(g));
      }
      default:
        break;
    }
    if (g.t1) g.t1 = term(g.t1);
    if (g.t2) g.t2 = term(g.t2);
    if (g.s1) g.s1 = set(g.s1);
    if (g.s2) g.s2 = set(g.s2);
    if (!g.c1.empty()) g.c1 = name(g.c1);
    if (!g.c2.empty()) g.c2 = name(g.c2);
    if (g.a) g.a = formula(g.a);
    if (g.b) g.b = formula(g.b);
    return mk(std::move(g));
  }
};

Sort sort_of_free(const Formula& f, const std::string& v, Sort fallback) {
  for (const auto& b : free_vars(f))
    if (b.name == v) return b.sort;
  return fallback;
}

}  // namespace

FormulaPtr substitute(const FormulaPtr& f, const Binder& v, const Replacement& r) {
  if (v.sort == Sort::First) {
    if (!std::holds_alternative<TermPtr>(r))
      throw SortError("first-order variable " + v.name + " needs a term");
  } else if (!std::holds_alternative<std::string>(r)) {
    throw SortError("variable " + v.name + " of sort " + std::string(sort_keyword(v.sort)) +
                    " needs a variable of the same sort");
  }
  if (!occurs_free(*f, v.name)) return f;
  if (sort_of_free(*f, v.name, v.sort) != v.sort)
    throw SortError("variable " + v.name + " occurs with a different sort");
  NameSupply supply;
  supply.reserve(*f);
  Subst s;
  s.supply = &supply;
  if (v.sort == Sort::First) {
    auto t = std::get<TermPtr>(r);
    s.terms[v.name] = t;
    std::set<std::string> ns;
    collect_names(*t, ns);
    for (auto& n : ns) {
      s.replacement_frees.insert(n);
      supply.reserve(n);
    }
  } else {
    const auto& n = std::get<std::string>(r);
    s.names[v.name] = n;
    s.replacement_frees.insert(n);
    supply.reserve(n);
  }
  return s.formula(f);
}

FormulaPtr instantiate(const Abstraction& abs, const std::vector<Replacement>& args) {
  if (args.size() != abs.holes.size())
    throw SortError("abstraction expects " + std::to_string(abs.holes.size()) + " arguments");
  NameSupply supply;
  supply.reserve(*abs.body);
  Subst s;
  s.supply = &supply;
  for (size_t i = 0; i < args.size(); ++i) {
    const auto& h = abs.holes[i];
    if (h.sort == Sort::First) {
      if (!std::holds_alternative<TermPtr>(args[i]))
        throw SortError("hole " + h.name + " needs a term");
      auto t = std::get<TermPtr>(args[i]);
      s.terms[h.name] = t;
      std::set<std::string> ns;
      collect_names(*t, ns);
      for (auto& n : ns) {
        s.replacement_frees.insert(n);
        supply.reserve(n);
      }
    } else {
      if (!std::holds_alternative<std::string>(args[i]))
        throw SortError("hole " + h.name + " needs a variable");
      const auto& n = std::get<std::string>(args[i]);
      s.names[h.name] = n;
      s.replacement_frees.insert(n);
      supply.reserve(n);
    }
    if (sort_of_free(*abs.body, h.name, h.sort) != h.sort)
      throw SortError("hole " + h.name + " occurs with a different sort");
  }
  return s.formula(abs.body);
}

// ---------------------------------------------------------------------------
// alpha equivalence

namespace {

struct AlphaEnv {
  std::vector<std::pair<std::string, std::string>> stack;

  // -1 when free; otherwise binding depth from the outside
  int index(const std::string& n, bool left) const {
    for (int i = static_cast<int>(stack.size()) - 1; i >= 0; --i)
      if ((left ? stack[i].first : stack[i].second) == n) return i;
    return -1;
  }
  bool same(const std::string& a, const std::string& b) const {
    int i = index(a, true), j = index(b, false);
    if (i != j) return false;
    return i >= 0 || a == b;
  }

  bool term(const Term& a, const Term& b) const {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case Term::Kind::Var: return same(a.name, b.name);
      case Term::Kind::Zero: return true;
      case Term::Kind::Succ: return term(*a.lhs, *b.lhs);
      default: return term(*a.lhs, *b.lhs) && term(*a.rhs, *b.rhs);
    }
  }

  bool set(const SetTerm& a, const SetTerm& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case SetTerm::Kind::Var: return same(a.name, b.name);
      case SetTerm::Kind::Slice:
      case SetTerm::Kind::Bracket: return same(a.name, b.name) && term(*a.index, *b.index);
      case SetTerm::Kind::Builder: {
        stack.emplace_back(a.name, b.name);
        bool r = formula(*a.body, *b.body);
        stack.pop_back();
        return r;
      }
    }
    return false;
  }

  bool opt_set(const SetTermPtr& a, const SetTermPtr& b) {
    if (!a || !b) return !a && !b;
    return set(*a, *b);
  }

  bool formula(const Formula& a, const Formula& b) {
    if (a.kind != b.kind) return false;
    using K = Formula::Kind;
    switch (a.kind) {
      case K::Eq: return term(*a.t1, *b.t1) && term(*a.t2, *b.t2);
      case K::In1: return term(*a.t1, *b.t1) && set(*a.s1, *b.s1);
      case K::In2: return set(*a.s1, *b.s1) && same(a.c1, b.c1);
      case K::Prec: case K::Eq2: case K::InStar: case K::EqStar:
        return set(*a.s1, *b.s1) && set(*a.s2, *b.s2);
      case K::SubStar:
        return set(*a.s1, *b.s1) && opt_set(a.s2, b.s2) &&
               (a.s2 || same(a.c1, b.c1));
      case K::Eq3: return same(a.c1, b.c1) && same(a.c2, b.c2);
      case K::Bot: return true;
      case K::Not: return formula(*a.a, *b.a);
      case K::And: case K::Or: case K::Implies: case K::Iff:
        return formula(*a.a, *b.a) && formula(*a.b, *b.b);
      case K::ForAll: case K::Exists: case K::BoundedAll: case K::BoundedEx: {
        if (a.bound.sort != b.bound.sort || a.bound_rel != b.bound_rel) return false;
        if (!opt_set(a.s2, b.s2)) return false;
        stack.emplace_back(a.bound.name, b.bound.name);
        bool r = formula(*a.a, *b.a);
        stack.pop_back();
        return r;
      }
    }
    return false;
  }
};

}  // namespace

bool alpha_equal(const Formula& a, const Formula& b) {
  AlphaEnv env;
  return env.formula(a, b);
}
bool alpha_equal(const FormulaPtr& a, const FormulaPtr& b) { return alpha_equal(*a, *b); }
bool term_equal(const Term& a, const Term& b) {
  AlphaEnv env;
  return env.term(a, b);
}

// ---------------------------------------------------------------------------
// expansion

bool is_core(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::Eq: return true;
    case K::In1: return f.s1->kind == SetTerm::Kind::Var;
    case K::In2: return f.s1->kind == SetTerm::Kind::Var;
    case K::Prec: return f.s1->kind == SetTerm::Kind::Var && f.s2->kind == SetTerm::Kind::Var;
    case K::Not: return is_core(*f.a);
    case K::And: case K::Or: case K::Implies: return is_core(*f.a) && is_core(*f.b);
    case K::ForAll: case K::Exists: return is_core(*f.a);
    default: return false;
  }
}

namespace {

struct Expander {
  NameSupply supply;

  // t in S, with builder membership beta-reduced
  FormulaPtr member(const TermPtr& t, const SetTermPtr& s) {
    switch (s->kind) {
      case SetTerm::Kind::Var: return in1(t, s);
      case SetTerm::Kind::Slice: return in1(pair_term(s->index, t), s->name);
      case SetTerm::Kind::Bracket:
        return conj(in1(pair_term(s->index, zero()), s->name),
                    in1(pair_term(s->index, succ(t)), s->name));
      case SetTerm::Kind::Builder:
        return run(substitute(s->body, Binder{s->name, Sort::First}, t));
    }
    return nullptr;
  }

  FormulaPtr iff_core(FormulaPtr a, FormulaPtr b) {
    return conj(implies(a, b), implies(b, a));
  }

  FormulaPtr eq2_core(const SetTermPtr& a, const SetTermPtr& b) {
    std::string m = supply.fresh("m");
    return forall(Sort::First, m, iff_core(member(var(m), a), member(var(m), b)));
  }

  // Names a non-variable set term: returns the variable and the defining
  // constraint to conjoin under a fresh existential.
  FormulaPtr with_named(const SetTermPtr& s,
                        const std::function<FormulaPtr(const std::string&)>& k) {
    if (s->kind == SetTerm::Kind::Var) return k(s->name);
    std::string x = supply.fresh("X");
    return exists(Sort::Second, x, conj(eq2_core(set_var(x), s), k(x)));
  }

  FormulaPtr in_star_core(const SetTermPtr& y, const SetTermPtr& x) {
    return with_named(x, [&](const std::string& xv) {
      std::string n = supply.fresh("n");
      return exists(Sort::First, n,
                    conj(in1(pair_term(var(n), zero()), xv), eq2_core(y, bracket(xv, var(n)))));
    });
  }

  FormulaPtr run(const FormulaPtr& f) {
    using K = Formula::Kind;
    switch (f->kind) {
      case K::Eq: return f;
      case K::In1:
        if (f->s1->kind == SetTerm::Kind::Builder)
          return with_named(f->s1, [&](const std::string& x) { return in1(f->t1, x); });
        return member(f->t1, f->s1);
      case K::In2:
        return with_named(f->s1, [&](const std::string& x) { return in2(x, f->c1); });
      case K::Prec:
        return with_named(f->s1, [&](const std::string& x) {
          return with_named(f->s2, [&](const std::string& y) { return prec(x, y); });
        });
      case K::Not: return neg(run(f->a));
      case K::And: return conj(run(f->a), run(f->b));
      case K::Or: return disj(run(f->a), run(f->b));
      case K::Implies: return implies(run(f->a), run(f->b));
      case K::ForAll: return forall(f->bound.sort, f->bound.name, run(f->a));
      case K::Exists: return exists(f->bound.sort, f->bound.name, run(f->a));
      case K::Bot: return eq(zero(), succ(zero()));
      case K::Iff: return iff_core(run(f->a), run(f->b));
      case K::Eq2: return eq2_core(f->s1, f->s2);
      case K::Eq3: {
        std::string x = supply.fresh("X");
        return forall(Sort::Second, x, iff_core(in2(x, f->c1), in2(x, f->c2)));
      }
      case K::InStar: return in_star_core(f->s1, f->s2);
      case K::SubStar: {
        std::string z = supply.fresh("Z");
        FormulaPtr rhs = f->s2 ? in_star_core(set_var(z), f->s2) : in2(z, f->c1);
        return forall(Sort::Second, z, implies(in_star_core(set_var(z), f->s1), rhs));
      }
      case K::EqStar:
        return conj(run(sub_star(f->s1, f->s2)), run(sub_star(f->s2, f->s1)));
      case K::BoundedAll:
      case K::BoundedEx: {
        const auto& y = f->bound.name;
        FormulaPtr rel = f->bound_rel == Formula::Bound::Prec
                             ? run(prec(set_var(y), f->s2))
                             : in_star_core(set_var(y), f->s2);
        FormulaPtr body = run(f->a);
        if (f->kind == K::BoundedAll) return forall(Sort::Second, y, implies(rel, body));
        return exists(Sort::Second, y, conj(rel, body));
      }
    }
    return f;
  }
};

}  // namespace

FormulaPtr expand(const FormulaPtr& f) {
  if (is_core(*f)) return f;
  Expander e;
  e.supply.reserve(*f);
  return e.run(f);
}

bool is_arithmetic(const FormulaPtr& f) {
  std::function<bool(const Formula&)> walk = [&](const Formula& g) {
    switch (g.kind) {
      case Formula::Kind::ForAll:
      case Formula::Kind::Exists:
        return g.bound.sort == Sort::First && walk(*g.a);
      case Formula::Kind::Not: return walk(*g.a);
      case Formula::Kind::And:
      case Formula::Kind::Or:
      case Formula::Kind::Implies: return walk(*g.a) && walk(*g.b);
      default: return true;
    }
  };
  return walk(*expand(f));
}

bool is_strictly_positive(const FormulaPtr& f0, const std::string& x) {
  auto f = expand(f0);
  std::function<bool(const Formula&)> sp = [&](const Formula& g) -> bool {
    using K = Formula::Kind;
    switch (g.kind) {
      case K::Eq: return true;
      case K::In1: return g.s1->name == x;
      case K::In2:
      case K::Prec: return false;
      case K::And:
      case K::Or: return sp(*g.a) && sp(*g.b);
      case K::Implies: return !occurs_free(*g.a, x) && sp(*g.a) && sp(*g.b);
      case K::Not: return !occurs_free(*g.a, x) && sp(*g.a);
      case K::ForAll:
      case K::Exists: return g.bound.sort == Sort::First && sp(*g.a);
      default: return false;
    }
  };
  return sp(*f);
}

FormulaPtr positive_substitute(const FormulaPtr& f0, const std::string& x,
                               const Abstraction& theta) {
  if (!is_strictly_positive(f0, x))
    throw std::invalid_argument("formula is not strictly positive in " + x);
  if (theta.holes.size() != 1 || theta.holes[0].sort != Sort::First)
    throw std::invalid_argument("theta must have one first-order hole");
  auto f = expand(f0);

  std::set<std::string> theta_free;
  for (const auto& b : free_vars(*theta.body))
    if (b.name != theta.holes[0].name) theta_free.insert(b.name);
  NameSupply supply;
  supply.reserve(*f);
  supply.reserve(*theta.body);

  std::function<FormulaPtr(const FormulaPtr&)> go = [&](const FormulaPtr& g) -> FormulaPtr {
    using K = Formula::Kind;
    switch (g->kind) {
      case K::In1:
        if (g->s1->name == x) return instantiate(theta, {g->t1});
        return g;
      case K::Eq: return g;
      case K::Not: return neg(go(g->a));
      case K::And: return conj(go(g->a), go(g->b));
      case K::Or: return disj(go(g->a), go(g->b));
      case K::Implies: return implies(go(g->a), go(g->b));
      case K::ForAll:
      case K::Exists: {
        std::string b = g->bound.name;
        FormulaPtr body = g->a;
        if (theta_free.count(b)) {
          std::string nb = supply.fresh(b);
          body = substitute(body, g->bound, var(nb));
          b = nb;
        }
        body = go(body);
        return g->kind == K::ForAll ? forall(Sort::First, b, body) : exists(Sort::First, b, body);
      }
      default: return g;
    }
  };
  return go(f);
}

}  // namespace cmr::syntax
