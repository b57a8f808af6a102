#include "cmr/realcheck.hpp"

#include <cmath>
#include <json.hpp>

namespace cmr::realcheck {

using namespace pca;
using FK = Formula::Kind;
using syntax::Sort;

Env::Env() : prec_interp(app(K(), num(0))) {}

namespace {

CombPtr singleton(unsigned k) { return compile(lam("x", app(CASES(), {num(1), num(0), vref("x"), num(k)}))); }

}  // namespace

std::vector<CombPtr> default_set_samples() {
  auto zero_or_one = compile(lam("x", app(CASES(), {num(1), app(CASES(), {num(1), num(0), vref("x"), num(1)}),
                                                    vref("x"), num(0)})));
  return {app(K(), num(0)), app(K(), num(1)), singleton(0), singleton(1), zero_or_one};
}

std::vector<CombPtr> default_class_samples() {
  return {app(K(), num(0)), app(K(), num(1)), compile(lam("X", app(vref("X"), num(0))))};
}

std::string_view verdict_name(Verdict3::Kind k) {
  switch (k) {
    case Verdict3::Kind::Yes: return "yes";
    case Verdict3::Kind::No: return "no";
    case Verdict3::Kind::Unknown: return "unknown";
  }
  return "?";
}

Nat eval_term(const syntax::Term& t, const std::map<std::string, Nat>& numbers) {
  using TK = syntax::Term::Kind;
  switch (t.kind) {
    case TK::Var: {
      auto it = numbers.find(t.name);
      if (it == numbers.end()) throw std::invalid_argument("unbound variable " + t.name);
      return it->second;
    }
    case TK::Zero: return 0;
    case TK::Succ: return eval_term(*t.lhs, numbers) + 1;
    case TK::Add: return eval_term(*t.lhs, numbers) + eval_term(*t.rhs, numbers);
    case TK::Mul: return eval_term(*t.lhs, numbers) * eval_term(*t.rhs, numbers);
    case TK::Pair: return coding::pair(eval_term(*t.lhs, numbers), eval_term(*t.rhs, numbers));
  }
  return 0;
}

namespace {

using TV = Truth::Value;

struct J {
  Verdict3::Kind kind;
  bool exact;
  std::string reason;
};

J yes(bool exact) { return {Verdict3::Kind::Yes, exact, ""}; }
J no(bool exact, std::string why) { return {Verdict3::Kind::No, exact, std::move(why)}; }
J unknown(std::string why) { return {Verdict3::Kind::Unknown, false, std::move(why)}; }

// Ordered conjunction: first No, else first Unknown, else Yes.
J combine_all(const std::vector<J>& js, bool exact_if_yes) {
  for (const auto& j : js)
    if (j.kind == Verdict3::Kind::No) return j;
  for (const auto& j : js)
    if (j.kind == Verdict3::Kind::Unknown) return j;
  bool ex = exact_if_yes;
  for (const auto& j : js) ex = ex && j.exact;
  return yes(ex);
}

Truth T(TV v, bool e) { return {v, e}; }

Truth t_not(Truth a) {
  if (a.value == TV::True) return T(TV::False, a.exact);
  if (a.value == TV::False) return T(TV::True, a.exact);
  return a;
}

Truth t_and(Truth a, Truth b) {
  if (a.value == TV::False || b.value == TV::False) {
    bool ex = (a.value == TV::False && a.exact) || (b.value == TV::False && b.exact);
    return T(TV::False, ex);
  }
  if (a.value == TV::True && b.value == TV::True) return T(TV::True, a.exact && b.exact);
  return T(TV::Unknown, false);
}

Truth t_or(Truth a, Truth b) { return t_not(t_and(t_not(a), t_not(b))); }

bool is_atom(const Formula& f) {
  return f.kind == FK::Eq || f.kind == FK::In1 || f.kind == FK::In2 || f.kind == FK::Prec;
}

// Realisers of these carry no data, so one constant realiser serves every
// instance.
bool data_free(const Formula& f) {
  switch (f.kind) {
    case FK::And: return data_free(*f.a) && data_free(*f.b);
    case FK::Implies: return data_free(*f.b);
    case FK::ForAll: return data_free(*f.a);
    case FK::Or:
    case FK::Exists: return false;
    default: return true;
  }
}

CombPtr data_free_realiser(const Formula& f) {
  switch (f.kind) {
    case FK::And: return app(P(), {data_free_realiser(*f.a), data_free_realiser(*f.b)});
    case FK::Implies: return app(K(), data_free_realiser(*f.b));
    case FK::ForAll: return app(K(), data_free_realiser(*f.a));
    default: return num(0);
  }
}

class Checker {
 public:
  Checker(const Bounds& b) : b_(b) {
    ro_.fuel = b.fuel;
    ro_.search_bound = Nat(b.N);
  }

  std::uint64_t used = 0;
  bool truncated = false;
  std::uint64_t bound() const { return b_.N; }

  Outcome eval(const CombPtr& t) {
    auto o = reduce(t, ro_);
    used += o.steps;
    truncated = truncated || o.search_truncated;
    return o;
  }

  // Strict numeral, pairs coded.
  std::optional<Nat> numeral(const CombPtr& t, std::string& why) {
    auto o = eval(app(PRED(), app(SUCC(), t)));
    if (!o.converged()) {
      why = std::string(status_name(o.status)) + ": " + o.desc;
      return std::nullopt;
    }
    return o.value->num;
  }

  // --- truth ---------------------------------------------------------------

  Truth atom(const Formula& f, const Env& env) {
    CombPtr probe;
    switch (f.kind) {
      case FK::Eq:
        return T(eval_term(*f.t1, env.numbers) == eval_term(*f.t2, env.numbers) ? TV::True : TV::False, true);
      case FK::In1: probe = app(lookup(env, f.s1->name), num(eval_term(*f.t1, env.numbers))); break;
      case FK::In2: probe = app(lookup(env, f.c1), lookup(env, f.s1->name)); break;
      case FK::Prec:
        probe = app(env.prec_interp, app(P(), {lookup(env, f.s1->name), lookup(env, f.s2->name)}));
        break;
      default: throw std::logic_error("atom: not an atom");
    }
    std::string why;
    auto n = numeral(probe, why);
    if (!n) return T(TV::Unknown, false);
    return T(*n == 1 ? TV::True : TV::False, true);
  }

  Truth truth(const Formula& f, const Env& env) {
    if (is_atom(f)) return atom(f, env);
    switch (f.kind) {
      case FK::And: return t_and(truth(*f.a, env), truth(*f.b, env));
      case FK::Or: return t_or(truth(*f.a, env), truth(*f.b, env));
      case FK::Not: return t_not(truth(*f.a, env));
      case FK::Implies: return t_or(t_not(truth(*f.a, env)), truth(*f.b, env));
      case FK::ForAll:
      case FK::Exists: {
        // forall: an exact counterexample decides; exists dually
        const bool all = f.kind == FK::ForAll;
        const TV decisive = all ? TV::False : TV::True;
        bool exact_hit = false, loose_hit = false, unknown_seen = false;
        for_each_instance(f, env, [&](const Env& e) {
          Truth t = truth(*f.a, e);
          if (t.value == TV::Unknown) unknown_seen = true;
          if (t.value == decisive) (t.exact ? exact_hit : loose_hit) = true;
          return !exact_hit;
        });
        if (exact_hit) return T(decisive, true);
        if (loose_hit) return T(decisive, false);
        if (unknown_seen) return T(TV::Unknown, false);
        return T(all ? TV::True : TV::False, false);
      }
      default: throw std::logic_error("truth: formula is not core");
    }
  }

  // --- canonical realisers -------------------------------------------------

  std::optional<CombPtr> synth(const Formula& f, const Env& env) {
    if (truth(f, env).value != TV::True) return std::nullopt;
    if (is_atom(f)) return num(0);
    switch (f.kind) {
      case FK::And: {
        auto a = synth(*f.a, env);
        auto b = synth(*f.b, env);
        if (!a || !b) return std::nullopt;
        return app(P(), {*a, *b});
      }
      case FK::Or: {
        if (auto a = synth(*f.a, env)) return app(P(), {num(0), *a});
        if (auto b = synth(*f.b, env)) return app(P(), {num(1), *b});
        return std::nullopt;
      }
      case FK::Not: return num(0);
      case FK::Implies: {
        if (truth(*f.a, env).value == TV::False) return app(K(), num(0));
        if (auto b = synth(*f.b, env)) return app(K(), *b);
        return std::nullopt;
      }
      case FK::ForAll:
        if (data_free(*f.a)) return app(K(), data_free_realiser(*f.a));
        return std::nullopt;
      case FK::Exists: {
        std::optional<CombPtr> out;
        for_each_instance(f, env, [&](const Env& e) {
          if (auto s = synth(*f.a, e)) {
            out = app(P(), {value_of_binder(f.bound, e), *s});
            return false;
          }
          return true;
        });
        return out;
      }
      default: return std::nullopt;
    }
  }

  // --- realisability -------------------------------------------------------

  // d must denote an element before any clause applies.
  J rz(const CombPtr& d, const Formula& f, const Env& env, bool top) {
    auto o = eval(d);
    if (!o.converged()) return unknown(std::string(status_name(o.status)) + ": " + o.desc);
    const CombPtr v = o.value;
    if (is_atom(f)) {
      Truth t = atom(f, env);
      if (t.value == TV::True) return yes(true);
      if (t.value == TV::False) return no(true, "false atom " + syntax::print(f));
      return unknown("undecided atom " + syntax::print(f));
    }
    switch (f.kind) {
      case FK::And: {
        J a = rz(app(P0(), v), *f.a, env, false);
        J b = rz(app(P1(), v), *f.b, env, false);
        return combine_all({a, b}, true);
      }
      case FK::Or: {
        std::string why;
        auto tag = numeral(app(P0(), v), why);
        if (!tag) return unknown("disjunction tag: " + why);
        if (*tag > 1) return no(true, "disjunction tag " + coding::to_string(*tag));
        return rz(app(P1(), v), *tag == 0 ? *f.a : *f.b, env, false);
      }
      case FK::Not: {
        Truth t = truth(*f.a, env);
        if (t.value == TV::False) return yes(t.exact);
        if (t.value == TV::True) return no(t.exact, "negated formula holds");
        return unknown("negation undecided");
      }
      case FK::Implies: {
        Truth ta = truth(*f.a, env);
        if (ta.value == TV::False) return yes(ta.exact);
        auto cand = synth(*f.a, env);
        if (!cand) return unknown("no candidate realiser for the antecedent");
        J ca = rz(*cand, *f.a, env, false);
        if (ca.kind != Verdict3::Kind::Yes) return unknown("candidate realiser rejected");
        J r = rz(app(v, *cand), *f.b, env, false);
        if (r.kind == Verdict3::Kind::No) r.exact = r.exact && ca.exact && ta.exact;
        if (r.kind == Verdict3::Kind::Yes) r.exact = false;
        return r;
      }
      case FK::ForAll: {
        std::vector<Env> insts;
        std::vector<CombPtr> args;
        for_each_instance(f, env, [&](const Env& e) {
          insts.push_back(e);
          args.push_back(value_of_binder(f.bound, e));
          return true;
        });
        std::vector<J> res(insts.size());
        if (top && b_.parallel && insts.size() > 1) {
          std::vector<std::uint64_t> u(insts.size());
          std::vector<char> tr(insts.size());
#pragma omp parallel for schedule(dynamic)
          for (long i = 0; i < static_cast<long>(insts.size()); ++i) {
            Checker c(b_);
            res[i] = c.rz(app(v, args[i]), *f.a, insts[i], false);
            u[i] = c.used;
            tr[i] = c.truncated;
          }
          for (size_t i = 0; i < insts.size(); ++i) {
            used += u[i];
            truncated = truncated || tr[i];
          }
        } else {
          for (size_t i = 0; i < insts.size(); ++i) res[i] = rz(app(v, args[i]), *f.a, insts[i], false);
        }
        return combine_all(res, false);
      }
      case FK::Exists: {
        Env e = env;
        if (f.bound.sort == Sort::First) {
          std::string why;
          auto w = numeral(app(P0(), v), why);
          if (!w) return unknown("witness: " + why);
          e.numbers[f.bound.name] = *w;
        } else {
          auto wo = eval(app(P0(), v));
          if (!wo.converged()) return unknown("witness: " + wo.desc);
          J sane = membership_sanity(wo.value, f.bound.sort);
          if (sane.kind != Verdict3::Kind::Yes) return sane;
          e.assignments[f.bound.name] = wo.value;
        }
        return rz(app(P1(), v), *f.a, e, false);
      }
      default: throw std::logic_error("realizes: formula is not core");
    }
  }

  // The value standing for a binder in an instance env.
  CombPtr value_of_binder(const syntax::Binder& bd, const Env& e) {
    if (bd.sort == Sort::First) return num(e.numbers.at(bd.name));
    return e.assignments.at(bd.name);
  }

  // Calls k(env') for every tested instance of the quantifier `f`; stops
  // when k returns false.
  template <class Fn>
  void for_each_instance(const Formula& f, const Env& env, Fn&& k) {
    Env e = env;
    if (f.bound.sort == Sort::First) {
      for (std::uint64_t n = 0; n < b_.N; ++n) {
        e.numbers[f.bound.name] = n;
        if (!k(static_cast<const Env&>(e))) return;
      }
      return;
    }
    e.numbers.erase(f.bound.name);
    const auto& pool = f.bound.sort == Sort::Second ? b_.set_samples : b_.class_samples;
    for (const auto& s : pool) {
      e.assignments[f.bound.name] = s;
      if (!k(static_cast<const Env&>(e))) return;
    }
  }

 private:
  CombPtr lookup(const Env& env, const std::string& name) {
    auto it = env.assignments.find(name);
    if (it == env.assignments.end()) throw std::invalid_argument("unassigned variable " + name);
    return it->second;
  }

  // A set witness must answer 0 or 1 on tested numerals; a class witness on
  // the set samples.
  J membership_sanity(const CombPtr& w, Sort s) {
    std::vector<CombPtr> probes;
    if (s == Sort::Second)
      for (std::uint64_t n = 0; n < b_.N; ++n) probes.push_back(num(n));
    else
      probes = b_.set_samples;
    for (const auto& p : probes) {
      std::string why;
      auto r = numeral(app(w, p), why);
      if (!r) return unknown("witness membership: " + why);
      if (*r > 1) return no(true, "witness membership value " + coding::to_string(*r));
    }
    return yes(true);
  }

  const Bounds& b_;
  ReduceOptions ro_;
};

Verdict3 finish(const J& j) {
  if (j.kind == Verdict3::Kind::No && !j.exact)
    return {Verdict3::Kind::Unknown, "refutation depends on the bounds: " + j.reason};
  return {j.kind, j.kind == Verdict3::Kind::Yes ? "" : j.reason};
}

}  // namespace

Truth truth(const FormulaPtr& f, const Env& env, const Bounds& b) {
  Checker c(b);
  return c.truth(*syntax::expand(f), env);
}

std::optional<CombPtr> canonical_realiser(const FormulaPtr& f, const Env& env, const Bounds& b) {
  Checker c(b);
  return c.synth(*syntax::expand(f), env);
}

Verdict3 realizes(const CombPtr& d, const FormulaPtr& f, const Env& env, const Bounds& b,
                  std::uint64_t& fuel_used) {
  Checker c(b);
  J j = c.rz(d, *syntax::expand(f), env, true);
  fuel_used = c.used;
  return finish(j);
}

Verdict3 realizes(const CombPtr& d, const FormulaPtr& f, const Env& env, const Bounds& b) {
  std::uint64_t u = 0;
  return realizes(d, f, env, b, u);
}

std::variant<Nat, CombPtr> witness(const CombPtr& d, const FormulaPtr& f, const Bounds& b) {
  auto g = syntax::expand(f);
  if (g->kind != FK::Exists) throw WitnessError("not an existential formula");
  Checker c(b);
  if (g->bound.sort == Sort::First) {
    std::string why;
    auto w = c.numeral(app(P0(), d), why);
    if (!w) throw WitnessError("witness did not evaluate to a numeral: " + why);
    return *w;
  }
  auto o = c.eval(app(P0(), d));
  if (!o.converged()) throw WitnessError("witness did not evaluate: " + o.desc);
  return o.value;
}

std::string Report::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["verdict"] = verdict_name(verdict.kind);
  j["reason"] = verdict.reason;
  auto ws = nlohmann::ordered_json::array();
  for (const auto& w : witnesses) ws.push_back({{"path", w.path}, {"kind", w.kind}, {"value", w.value}});
  j["witnesses"] = ws;
  j["fuel_used"] = fuel_used;
  j["bounds"] = {{"N", N}, {"fuel", fuel}};
  j["notes"] = notes;
  return j.dump();
}

namespace {

// A set witness shown by its members below N.
std::string members(Checker& c, const CombPtr& set) {
  std::string out = "{";
  bool first = true;
  for (std::uint64_t n = 0; n < c.bound(); ++n) {
    std::string why;
    auto r = c.numeral(app(set, num(n)), why);
    if (!r) return out + (first ? "" : ",") + "?}";
    if (*r == 1) {
      out += (first ? "" : ",") + std::to_string(n);
      first = false;
    }
  }
  return out + "}";
}

// Records witnesses and disjunct tags of a closed formula, descending
// through conjunctions, disjunctions and existentials.
void collect_witnesses(Checker& c, const CombPtr& d, const Formula& f, const Env& env, const std::string& path,
                       std::vector<WitnessRecord>& out) {
  auto sub = [&](const char* step) { return path == "/" ? "/" + std::string(step) : path + "/" + step; };
  if (f.kind != FK::And && f.kind != FK::Or && f.kind != FK::Exists) return;
  auto o = c.eval(d);
  if (!o.converged()) return;
  const auto& v = o.value;
  std::string why;
  switch (f.kind) {
    case FK::And:
      collect_witnesses(c, app(P0(), v), *f.a, env, sub("and0"), out);
      collect_witnesses(c, app(P1(), v), *f.b, env, sub("and1"), out);
      break;
    case FK::Or: {
      auto tag = c.numeral(app(P0(), v), why);
      if (!tag || *tag > 1) return;
      out.push_back({path, "or", coding::to_string(*tag)});
      collect_witnesses(c, app(P1(), v), *tag == 0 ? *f.a : *f.b, env, sub("or"), out);
      break;
    }
    case FK::Exists: {
      Env e = env;
      if (f.bound.sort == Sort::First) {
        auto w = c.numeral(app(P0(), v), why);
        if (!w) return;
        out.push_back({path, "exists", coding::to_string(*w)});
        e.numbers[f.bound.name] = *w;
      } else {
        auto wo = c.eval(app(P0(), v));
        if (!wo.converged()) return;
        out.push_back({path, "exists", f.bound.sort == Sort::Second ? members(c, wo.value) : print(wo.value)});
        e.assignments[f.bound.name] = wo.value;
      }
      collect_witnesses(c, app(P1(), v), *f.a, e, sub("ex"), out);
      break;
    }
    default: break;
  }
}

}  // namespace

Report check_theorem(const kernel::Proof& p, kernel::Theory th, const Env& env, const Bounds& b) {
  extractor::Options opts;
  opts.prec_interp = env.prec_interp;
  auto ex = extractor::extract(p, th, opts);
  Report rep;
  rep.N = b.N;
  rep.fuel = b.fuel;
  if (ex.uses_placeholder()) {
    rep.verdict = {Verdict3::Kind::Unknown, "nonconstructive stand-in"};
    rep.notes.push_back("the realiser depends on a global well-ordering axiom");
    return rep;
  }
  const auto& last = ex.final_line();
  const auto f = syntax::expand(kernel::core_formula(p.lines.back()));

  // parameter assignments: product of per-variable ranges, kept near 512
  std::vector<std::vector<std::pair<syntax::Binder, std::variant<Nat, CombPtr>>>> tuples{{}};
  size_t k1 = 0;
  for (const auto& bd : last.layout) k1 += bd.sort == Sort::First;
  std::uint64_t range = b.N;
  if (k1 > 0) {
    auto cap = static_cast<std::uint64_t>(std::floor(std::pow(512.0, 1.0 / static_cast<double>(k1)) + 1e-9));
    range = std::max<std::uint64_t>(1, std::min(b.N, cap));
    rep.notes.push_back("free number variables range over n < " + std::to_string(range));
  }
  for (const auto& bd : last.layout) {
    std::vector<std::variant<Nat, CombPtr>> vals;
    if (bd.sort == Sort::First) {
      if (auto it = env.numbers.find(bd.name); it != env.numbers.end())
        vals.push_back(it->second);
      else
        for (std::uint64_t n = 0; n < range; ++n) vals.push_back(Nat(n));
    } else if (auto it = env.assignments.find(bd.name); it != env.assignments.end()) {
      vals.push_back(it->second);
    } else {
      for (const auto& s : bd.sort == Sort::Second ? b.set_samples : b.class_samples) vals.push_back(s);
    }
    decltype(tuples) next;
    for (const auto& t : tuples)
      for (const auto& v : vals) {
        auto u = t;
        u.push_back({bd, v});
        next.push_back(std::move(u));
      }
    tuples = std::move(next);
  }

  auto run_one = [&](const auto& tuple, bool top, Checker& c) -> J {
    Env e = env;
    std::vector<CombPtr> items;
    for (const auto& [bd, val] : tuple) {
      if (bd.sort == Sort::First) {
        e.numbers[bd.name] = std::get<Nat>(val);
        items.push_back(num(std::get<Nat>(val)));
      } else {
        e.assignments[bd.name] = std::get<CombPtr>(val);
        items.push_back(std::get<CombPtr>(val));
      }
    }
    CombPtr d = app(last.compiled, extractor::tuple_term(items));
    auto o = c.eval(d);
    if (!o.converged()) return unknown(std::string(status_name(o.status)) + ": " + o.desc);
    return c.rz(o.value, *f, e, top);
  };

  std::vector<J> res(tuples.size());
  bool truncated = false;
  if (tuples.size() == 1) {
    Checker c(b);
    res[0] = run_one(tuples[0], true, c);
    rep.fuel_used = c.used;
    truncated = c.truncated;
    if (last.layout.empty() && res[0].kind == Verdict3::Kind::Yes) {
      Checker w(b);
      collect_witnesses(w, app(last.compiled, num(0)), *f, env, "/", rep.witnesses);
    }
  } else {
    std::vector<std::uint64_t> u(tuples.size());
    std::vector<char> tr(tuples.size());
#pragma omp parallel for schedule(dynamic) if (b.parallel)
    for (long i = 0; i < static_cast<long>(tuples.size()); ++i) {
      Checker c(b);
      res[i] = run_one(tuples[i], false, c);
      u[i] = c.used;
      tr[i] = c.truncated;
    }
    for (size_t i = 0; i < tuples.size(); ++i) {
      rep.fuel_used += u[i];
      truncated = truncated || tr[i];
    }
  }
  rep.verdict = finish(combine_all(res, false));
  if (truncated) rep.notes.push_back("a bounded search stopped at N");
  return rep;
}

}  // namespace cmr::realcheck
