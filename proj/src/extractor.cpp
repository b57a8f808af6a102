#include "cmr/extractor.hpp"

#include <algorithm>
#include <functional>
#include <json.hpp>

namespace cmr::extractor {

using namespace pca;
using kernel::Param;
using kernel::SchemeId;
using syntax::Formula;
using syntax::Sort;

std::vector<Binder> parameter_layout(const Formula& f) {
  auto fv = syntax::free_vars(f);
  std::vector<Binder> out;
  for (Sort s : {Sort::First, Sort::Second, Sort::Third})
    for (const auto& b : fv)
      if (b.sort == s) out.push_back(b);
  return out;
}

CombPtr tuple_term(const std::vector<CombPtr>& items) {
  if (items.empty()) return num(0);
  CombPtr acc = items.back();
  for (size_t i = items.size() - 1; i-- > 0;) acc = app(P(), {items[i], acc});
  return acc;
}

CombPtr tuple_access(const CombPtr& p, size_t i, size_t k) {
  CombPtr cur = p;
  for (size_t j = 0; j < i; ++j) cur = app(P1(), cur);
  if (i + 1 < k) cur = app(P0(), cur);
  return cur;
}

CombPtr default_value(Sort s) { return s == Sort::First ? num(0) : app(K(), num(0)); }

CombPtr add_comb() {
  // add a b = b if a = 0 else succ (add (a-1) b)
  static const CombPtr c = compile(app(
      FIX(), lam("r", lam("a", lam("b", app(CASES(), {vref("b"),
                                                      app(SUCC(), app(vref("r"), {app(PRED(), vref("a")), vref("b")})),
                                                      vref("a"), num(0)}))))));
  return c;
}

CombPtr mul_comb() {
  // mul a b = 0 if a = 0 else add b (mul (a-1) b)
  static const CombPtr c = compile(app(
      FIX(), lam("r", lam("a", lam("b", app(CASES(), {num(0),
                                                      app(add_comb(), {vref("b"), app(vref("r"), {app(PRED(), vref("a")), vref("b")})}),
                                                      vref("a"), num(0)}))))));
  return c;
}

namespace {

long index_of(const std::vector<Binder>& layout, const std::string& name) {
  for (size_t i = 0; i < layout.size(); ++i)
    if (layout[i].name == name) return static_cast<long>(i);
  return -1;
}

CombPtr access_var(const std::vector<Binder>& layout, const CombPtr& p, const std::string& name, Sort s) {
  long i = index_of(layout, name);
  if (i < 0) return default_value(s);
  return tuple_access(p, static_cast<size_t>(i), layout.size());
}

}  // namespace

CombPtr compile_term(const syntax::Term& t, const std::vector<Binder>& layout, const CombPtr& p) {
  using TK = syntax::Term::Kind;
  if (auto k = syntax::numeral_value(t)) return num(*k);
  switch (t.kind) {
    case TK::Var: return access_var(layout, p, t.name, Sort::First);
    case TK::Zero: return num(0);
    case TK::Succ: return app(SUCC(), compile_term(*t.lhs, layout, p));
    case TK::Add: return app(add_comb(), {compile_term(*t.lhs, layout, p), compile_term(*t.rhs, layout, p)});
    case TK::Mul: return app(mul_comb(), {compile_term(*t.lhs, layout, p), compile_term(*t.rhs, layout, p)});
    case TK::Pair: return app(P(), {compile_term(*t.lhs, layout, p), compile_term(*t.rhs, layout, p)});
  }
  return num(0);
}

Options::Options() : prec_interp(app(K(), num(0))) {}

bool is_placeholder_scheme(SchemeId id) { return kernel::scheme_info(id).family == kernel::Family::Gwo; }

CombPtr trivial_realiser(const Formula& f) {
  using FK = Formula::Kind;
  int counter = 0;
  std::function<CombPtr(const Formula&)> go = [&](const Formula& g) -> CombPtr {
    switch (g.kind) {
      case FK::Eq:
      case FK::In1:
      case FK::In2:
      case FK::Prec:
      case FK::Not: return num(0);
      case FK::And: return app(P(), {go(*g.a), go(*g.b)});
      case FK::Implies: {
        std::string e = "e" + std::to_string(counter++);
        const auto bk = g.b->kind;
        bool atomic = bk == FK::Eq || bk == FK::In1 || bk == FK::In2 || bk == FK::Prec;
        return lam(e, atomic ? vref(e) : go(*g.b));
      }
      case FK::ForAll: return lam(g.bound.name, go(*g.a));
      default: throw std::logic_error("trivial_realiser: formula is not of the expected shape");
    }
  };
  return go(f);
}

CombPtr adapt(const std::vector<Binder>& source, const CombPtr& p, const std::vector<Binder>& target,
              const std::vector<std::pair<std::string, CombPtr>>& extra) {
  if (extra.empty() && source == target) return p;
  std::vector<CombPtr> items;
  for (const auto& b : target) {
    auto it = std::find_if(extra.begin(), extra.end(), [&](const auto& e) { return e.first == b.name; });
    if (it != extra.end())
      items.push_back(it->second);
    else
      items.push_back(access_var(source, p, b.name, b.sort));
  }
  return tuple_term(items);
}

CombPtr rule_mp(const CombPtr& e, const CombPtr& f, const std::vector<Binder>& concl,
                const std::vector<Binder>& ante, const std::vector<Binder>& imp) {
  auto p = vref("p");
  return lam("p", app(app(f, adapt(concl, p, imp)), app(e, adapt(concl, p, ante))));
}

CombPtr rule_all_gen(const CombPtr& f, const std::string& x, const std::vector<Binder>& concl,
                     const std::vector<Binder>& prem) {
  auto p = vref("p");
  return lam("p", lam("d", lam("n", app(app(f, adapt(concl, p, prem, {{x, vref("n")}})), vref("d")))));
}

CombPtr rule_ex_gen(const CombPtr& f, const std::string& x, const std::vector<Binder>& concl,
                    const std::vector<Binder>& prem) {
  auto p = vref("p");
  auto d = vref("d");
  return lam("p", lam("d", app(app(f, adapt(concl, p, prem, {{x, app(P0(), d)}})), app(P1(), d))));
}

// ---------------------------------------------------------------------------

namespace {

// 1 - b for b in {0, 1}
CombPtr one_minus(const CombPtr& b) { return app(CASES(), {num(0), num(1), b, num(1)}); }

const syntax::TermPtr& term_param(const Param& p) { return std::get<syntax::TermPtr>(p); }
const std::string& var_param(const Param& p) { return std::get<std::string>(p); }

}  // namespace

CombPtr realiser_for_axiom(SchemeId id, const std::vector<Param>& params, const syntax::FormulaPtr& instance,
                           const Options& opts) {
  using S = SchemeId;
  const auto layout = parameter_layout(*instance);
  const CombPtr p = vref("p");
  auto e = vref("e"), f = vref("f"), g = vref("g"), n = vref("n");
  auto L = [](const std::string& v, CombPtr body) { return lam(v, std::move(body)); };
  auto body = [&]() -> CombPtr {
    switch (id) {
      case S::ImpK: return L("e", L("f", e));
      case S::ImpS: return L("f", L("g", L("e", app(app(g, e), app(f, e)))));
      case S::AndIntro: return L("e", L("f", app(P(), {e, f})));
      case S::AndElimL: return L("e", app(P0(), e));
      case S::AndElimR: return L("e", app(P1(), e));
      case S::OrIntroL: return L("e", app(P(), {num(0), e}));
      case S::OrIntroR: return L("e", app(P(), {num(1), e}));
      case S::OrElim:
        return L("f", L("g", L("n", app(CASES(), {app(f, app(P1(), n)), app(g, app(P1(), n)), app(P0(), n), num(0)}))));
      case S::NegIntro: return L("f", L("g", num(0)));
      case S::ExFalso: return L("e", L("f", num(0)));
      case S::ExistsIntro:
      case S::ForallElim: {
        const auto& abs = std::get<syntax::Abstraction>(params[0]);
        const Sort s = abs.holes[0].sort;
        CombPtr t = s == Sort::First ? compile_term(*term_param(params[1]), layout, p)
                                     : access_var(layout, p, var_param(params[1]), s);
        if (id == S::ExistsIntro) return L("e", app(P(), {t, e}));
        return L("f", app(f, t));
      }
      case S::EqRefl: return num(0);
      case S::EqSubst: return L("e", app(P1(), e));
      case S::PaSuccNonzero:
      case S::PaSuccInj:
      case S::PaAddZero:
      case S::PaAddSucc:
      case S::PaMulZero:
      case S::PaMulSucc:
      case S::PaPair:
      case S::ExtClass:
      case S::ExtPrec: return trivial_realiser(*instance);
      case S::Induction: {
        // g 0 = c0, g (k+1) = c1 k (g k)
        auto c = vref("c"), r = vref("r"), k = vref("k");
        auto pk = app(PRED(), k);
        return L("c", app(FIX(), L("r", L("k", app(CASES(), {app(P0(), c), app(app(P1(), c), {pk, app(r, pk)}), k, num(0)})))));
      }
      case S::Recursion: {
        // g 0 = x, g (k+1) = (f k (g k))_0; z <a,b> = g a b
        auto x = vref("x"), r = vref("r"), k = vref("k");
        auto pk = app(PRED(), k);
        auto gt = app(FIX(), L("r", L("k", app(CASES(), {x, app(P0(), app(f, {pk, app(r, pk)})), k, num(0)}))));
        auto z = L("k", app(gt, {app(P0(), k), app(P1(), k)}));
        auto eqr = L("m", app(P(), {L("a", vref("a")), L("a", vref("a"))}));
        auto m0 = L("m", app(P(), {L("a", vref("a")), L("a", vref("a"))}));
        auto gn = app(gt, n);
        auto step = L("n", app(P(), {gn, app(P(), {eqr, app(P(), {app(gt, app(SUCC(), n)),
                                                                   app(P(), {eqr, app(P1(), app(f, {n, gn}))})})})}));
        return L("f", L("x", app(P(), {z, app(P(), {m0, step})})));
      }
      case S::CompSet:
      case S::CompClass: {
        auto chi = L("n", one_minus(app(P0(), app(f, n))));
        auto both = L("n", app(P(), {L("a", app(P1(), app(f, n))), L("a", vref("a"))}));
        return L("f", app(P(), {chi, both}));
      }
      case S::DecEq:
        return app(CASES(), {app(P(), {num(0), num(0)}), app(P(), {num(1), num(0)}),
                             compile_term(*term_param(params[0]), layout, p),
                             compile_term(*term_param(params[1]), layout, p)});
      case S::DecIn1: {
        auto set = access_var(layout, p, var_param(params[1]), Sort::Second);
        return app(P(), {one_minus(app(set, compile_term(*term_param(params[0]), layout, p))), num(0)});
      }
      case S::DecIn2: {
        auto set = access_var(layout, p, var_param(params[0]), Sort::Second);
        auto cls = access_var(layout, p, var_param(params[1]), Sort::Third);
        return app(P(), {one_minus(app(cls, set)), num(0)});
      }
      case S::Lpo: {
        auto m = vref("m");
        auto hit = app(P(), {num(1), app(P(), {m, app(P1(), app(f, m))})});
        auto none = app(P(), {num(0), L("n", app(P1(), app(f, n)))});
        auto pick = L("m", app(CASES(), {hit, none, app(P0(), app(f, m)), num(1)}));
        return L("f", app(pick, app(MU(), L("n", app(P0(), app(f, n))))));
      }
      case S::DecPrec: {
        auto x = vref("x"), y = vref("y");
        return L("x", L("y", app(P(), {one_minus(app(opts.prec_interp, app(P(), {x, y}))), num(0)})));
      }
      case S::W1Irrefl:
      case S::W1Trans:
      case S::W1Total:
      case S::W2:
      case S::W2Prime:
      case S::W3: return L("e", e);
    }
    throw std::logic_error("realiser_for_axiom: unknown scheme");
  }();
  return lam("p", body);
}

// ---------------------------------------------------------------------------

std::string Extraction::trace_json(bool compiled) const {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  const auto& last = final_line();
  j["term"] = print(compiled ? last.compiled : last.lam_form);
  j["compiled"] = compiled;
  auto trace = nlohmann::ordered_json::array();
  auto ph = nlohmann::ordered_json::array();
  for (size_t i = 0; i < lines.size(); ++i) {
    const auto& l = lines[i];
    nlohmann::ordered_json row;
    row["line"] = i;
    auto lay = nlohmann::ordered_json::array();
    for (const auto& b : l.layout) lay.push_back(b.name);
    row["layout"] = lay;
    row["placeholder"] = l.placeholder;
    row["size"] = pca::size(l.compiled);
    trace.push_back(row);
    if (l.placeholder) ph.push_back(i);
  }
  j["trace"] = trace;
  j["placeholders"] = ph;
  return j.dump();
}

Extraction extract(const kernel::Proof& p, kernel::Theory th, const Options& opts) {
  auto v = kernel::check_proof(p, th);
  if (!v.accepted) throw ExtractError("proof rejected at line " + std::to_string(v.bad_line) + ": " + v.reason);
  using JK = kernel::Justification::Kind;
  Extraction out;
  std::vector<syntax::FormulaPtr> core;
  for (const auto& line : p.lines) {
    core.push_back(kernel::core_formula(line));
    const auto& fm = core.back();
    LineRealiser lr;
    lr.layout = parameter_layout(*fm);
    const auto& j = line.just;
    auto build = [&](bool compiled) -> CombPtr {
      auto cited = [&](long k) { return compiled ? out.lines[k].compiled : out.lines[k].lam_form; };
      switch (j.kind) {
        case JK::Axiom: return realiser_for_axiom(*j.scheme, j.params, fm, opts);
        case JK::MP: return rule_mp(cited(j.i), cited(j.j), lr.layout, out.lines[j.i].layout, out.lines[j.j].layout);
        case JK::AllGen: return rule_all_gen(cited(j.i), j.var, lr.layout, out.lines[j.i].layout);
        case JK::ExGen: return rule_ex_gen(cited(j.i), j.var, lr.layout, out.lines[j.i].layout);
      }
      return num(0);
    };
    lr.lam_form = build(false);
    lr.compiled = compile(build(true));
    switch (j.kind) {
      case JK::Axiom: lr.placeholder = is_placeholder_scheme(*j.scheme); break;
      case JK::MP: lr.placeholder = out.lines[j.i].placeholder || out.lines[j.j].placeholder; break;
      default: lr.placeholder = out.lines[j.i].placeholder;
    }
    out.lines.push_back(std::move(lr));
  }
  return out;
}

}  // namespace cmr::extractor
