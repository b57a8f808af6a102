// Acceptance suite: one line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "cmr/cli.hpp"
#include "cmr/coding.hpp"
#include "cmr/extractor.hpp"
#include "cmr/kernel.hpp"
#include "cmr/ordinals.hpp"
#include "cmr/pca.hpp"
#include "cmr/realcheck.hpp"
#include "cmr/sexpr.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
namespace pca = cmr::pca;
namespace kernel = cmr::kernel;
namespace sx = cmr::syntax;
using cmr::Nat;

namespace {

struct Result {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

// Records the first few failures and counts the rest.
struct Failures {
  size_t count = 0;
  std::vector<std::string> first;
  void add(std::string what) {
    if (count++ < 3) first.push_back(std::move(what));
  }
  std::string summary() const {
    std::string s = std::to_string(count) + " failure(s)";
    for (const auto& f : first) s += "; " + f;
    return s;
  }
};

// ---------------------------------------------------------------------------

Result pairing() {
  auto t0 = std::chrono::steady_clock::now();
  Failures bad;
  for (std::uint64_t m = 0; m <= 1000; ++m)
    for (std::uint64_t n = 0; n <= 1000; ++n) {
      Nat k = cmr::coding::pair(m, n);
      if (k != oracle::pair(m, n)) bad.add("pair(" + std::to_string(m) + "," + std::to_string(n) + ")");
      auto [a, b] = cmr::coding::unpair(k);
      if (a != m || b != n) bad.add("unpair(pair(" + std::to_string(m) + "," + std::to_string(n) + "))");
    }
  const std::uint64_t limit = 100000;
  auto walk = oracle::diagonal_walk(limit);
  for (std::uint64_t k = 0; k <= limit; ++k) {
    auto [a, b] = cmr::coding::unpair(k);
    if (a != walk[k].first || b != walk[k].second) bad.add("unpair(" + std::to_string(k) + ")");
    if (cmr::coding::pair(a, b) != k) bad.add("pair(unpair(" + std::to_string(k) + "))");
  }
  // (m+n)(m+n+1)/2 + m at a few points
  if (cmr::coding::pair(0, 1) != 1 || cmr::coding::pair(1, 0) != 2 || cmr::coding::pair(3, 4) != 31)
    bad.add("formula values");
  const double t = seconds_since(t0);
  if (t >= 5.0) bad.add("took " + std::to_string(t) + " s");
  return {bad.count == 0, bad.count ? bad.summary() : "1002001 pairs and 100001 codes"};
}

// ---------------------------------------------------------------------------
// random closed combinator terms

using pca::CombPtr;

struct TermGen {
  std::mt19937_64 g{20240601};
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(g); }

  // numeric expression over the given variables
  CombPtr expr(const std::vector<std::string>& vars, int depth) {
    using namespace pca;
    if (depth == 0 || pick(4) == 0) {
      if (!vars.empty() && pick(3) > 0) return vref(vars[pick(static_cast<int>(vars.size()))]);
      return num(pick(6));
    }
    switch (pick(5)) {
      case 0: return app(SUCC(), expr(vars, depth - 1));
      case 1: return app(PRED(), expr(vars, depth - 1));
      case 2:
        return app(CASES(), {expr(vars, depth - 1), expr(vars, depth - 1), expr(vars, depth - 1),
                             expr(vars, depth - 1)});
      case 3: return app(P0(), app(P(), {expr(vars, depth - 1), expr(vars, depth - 1)}));
      default: return app(P1(), app(P(), {expr(vars, depth - 1), expr(vars, depth - 1)}));
    }
  }

  CombPtr unary() { return pca::compile(pca::lam("x", expr({"x"}, 3))); }
  CombPtr binary() { return pca::compile(pca::lam("x", pca::lam("y", expr({"x", "y"}, 3)))); }

  CombPtr value() {
    using namespace pca;
    switch (pick(5)) {
      case 0:
      case 1: return num(pick(1000));
      case 2: return app(P(), {num(pick(50)), num(pick(50))});
      case 3: return unary();
      default: return app(K(), num(pick(10)));
    }
  }

  // recursive definitions whose recursion is on a numeral argument
  CombPtr functional() {
    using namespace pca;
    const auto c = num(pick(5));
    CombPtr rec = app(vref("r"), app(PRED(), vref("x")));
    switch (pick(3)) {
      case 0: rec = app(SUCC(), rec); break;
      case 1: rec = app(P0(), app(P(), {rec, num(7)})); break;
      default: break;
    }
    return compile(lam("r", lam("x", app(CASES(), {c, rec, vref("x"), num(0)}))));
  }
};

CombPtr omega() {
  using namespace pca;
  CombPtr i = app(S(), {K(), K()});
  CombPtr w = app(S(), {i, i});
  return app(w, w);
}

Result pca_laws() {
  using namespace pca;
  auto t0 = std::chrono::steady_clock::now();
  TermGen gen;
  Failures bad;
  const std::uint64_t fuel = 200000;
  const int reps = 1000;
  auto value_of = [&](const CombPtr& t) { return reduce(t, fuel); };

  for (int i = 0; i < reps; ++i) {
    CombPtr a = gen.value();
    CombPtr b = gen.pick(4) == 0 ? omega() : gen.value();
    auto lhs = value_of(app(K(), {a, b}));
    auto rhs = value_of(a);
    if (!lhs.converged() || !rhs.converged() || !structurally_equal(lhs.value, rhs.value) ||
        lhs.steps != rhs.steps + 1)
      bad.add("K law on " + print(a));
  }
  for (int i = 0; i < reps; ++i) {
    CombPtr a = gen.binary(), b = gen.unary(), c = num(gen.pick(40));
    auto lhs = value_of(app(S(), {a, b, c}));
    auto rhs = value_of(app(app(a, c), app(b, c)));
    if (lhs.status != rhs.status || (lhs.converged() && (lhs.numeral() != rhs.numeral() ||
                                                         lhs.steps != rhs.steps + 1)))
      bad.add("S law on " + print(a) + " " + print(b));
  }
  for (int i = 0; i < reps; ++i) {
    CombPtr a = gen.value(), b = gen.value();
    auto l = value_of(app(P0(), app(P(), {a, b})));
    auto r = value_of(app(P1(), app(P(), {a, b})));
    auto va = value_of(a), vb = value_of(b);
    if (!l.converged() || !r.converged() || !structurally_equal(l.value, va.value) ||
        !structurally_equal(r.value, vb.value))
      bad.add("projection of a pair");
    // a numeral is read as a code
    const std::uint64_t k = std::uniform_int_distribution<std::uint64_t>(0, 5000000)(gen.g);
    auto k0 = value_of(app(P0(), num(k))).numeral();
    auto k1 = value_of(app(P1(), num(k))).numeral();
    if (!k0 || !k1 || oracle::pair(static_cast<std::uint64_t>(*k0), static_cast<std::uint64_t>(*k1)) != k)
      bad.add("projection of code " + std::to_string(k));
  }
  for (int i = 0; i < reps; ++i) {
    CombPtr m = gen.expr({}, 3), n = gen.expr({}, 3);
    const auto x = num(100 + gen.pick(100)), y = num(300 + gen.pick(100));
    auto mv = value_of(m).numeral(), nv = value_of(n).numeral();
    auto out = value_of(app(CASES(), {x, y, m, n}));
    if (!mv || !nv || !out.converged() || out.numeral() != (*mv == *nv ? x->num : y->num))
      bad.add("CASES on " + print(m) + " " + print(n));
  }
  for (int i = 0; i < reps; ++i) {
    CombPtr f = gen.functional();
    CombPtr x = num(gen.pick(30));
    auto lhs = value_of(app(FIX(), {f, x}));
    auto rhs = value_of(app(f, {app(FIX(), f), x}));
    if (!lhs.converged() || !rhs.converged() || lhs.numeral() != rhs.numeral() ||
        lhs.steps != rhs.steps + 1)
      bad.add("FIX law on " + print(f) + " " + print(x));
  }
  const double t = seconds_since(t0);
  if (t >= 10.0) bad.add("took " + std::to_string(t) + " s");
  return {bad.count == 0, bad.count ? bad.summary() : "5 laws x 1000 instances"};
}

// ---------------------------------------------------------------------------

struct LambdaGen {
  std::mt19937_64 g{777};
  int counter = 0;
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(g); }
  std::string fresh(const char* base) { return base + std::to_string(counter++); }

  using L = oracle::LPtr;
  using K = oracle::LTerm::Kind;

  L leaf(const std::vector<std::string>& nums) {
    if (!nums.empty() && pick(3) > 0) return oracle::lvar(nums[pick(static_cast<int>(nums.size()))]);
    return oracle::lnum(pick(5));
  }

  // A term of numeric type; rarely an ill-typed one that gets stuck.
  L num_term(int d, std::vector<std::string> nums, std::vector<std::string> funs) {
    using namespace oracle;
    if (d <= 1) return leaf(nums);
    if (pick(40) == 0) return lapp(lnum(pick(3)), leaf(nums));
    const int choice = pick(funs.empty() ? 7 : 8);
    switch (choice) {
      case 0: return lapp(lconst(K::Succ), num_term(d - 1, nums, funs));
      case 1: return lapp(lconst(K::Pred), num_term(d - 1, nums, funs));
      case 2: {
        L t = lconst(K::Cases);
        for (int i = 0; i < 4; ++i) t = lapp(t, num_term(d - 1, nums, funs));
        return t;
      }
      case 3: {
        if (d < 3) return leaf(nums);
        L p = lapp(lapp(lconst(K::Pair), num_term(d - 2, nums, funs)), num_term(d - 2, nums, funs));
        return lapp(lconst(pick(2) ? K::Fst : K::Snd), p);
      }
      case 4: {
        // (\y. body) arg
        if (d < 3) return leaf(nums);
        auto y = fresh("y");
        auto inner = nums;
        inner.push_back(y);
        return lapp(llam(y, num_term(d - 2, inner, funs)), num_term(d - 1, nums, funs));
      }
      case 5: {
        // (\f. body using f) (\z. e)
        if (d < 3) return leaf(nums);
        auto f = fresh("f"), z = fresh("z");
        auto inner = funs;
        inner.push_back(f);
        auto zs = nums;
        zs.push_back(z);
        return lapp(llam(f, num_term(d - 2, nums, inner)), llam(z, num_term(d - 2, zs, funs)));
      }
      case 6: return leaf(nums);
      default: return lapp(oracle::lvar(funs[pick(static_cast<int>(funs.size()))]), num_term(d - 1, nums, funs));
    }
  }
};

// Pinned bound on compiled steps against direct substitution steps.
constexpr std::uint64_t kInflationFactor = 8;
constexpr std::uint64_t kInflationSlack = 64;

Result bracket_abstraction() {
  using namespace pca;
  LambdaGen gen;
  Failures bad;
  int compared = 0, skipped = 0;
  double worst = 0;
  for (int i = 0; i < 500; ++i) {
    const int k = 1 + gen.pick(3);
    std::vector<std::string> xs;
    for (int j = 0; j < k; ++j) xs.push_back(gen.fresh("x"));
    oracle::LPtr body = gen.num_term(4, xs, {});
    oracle::LPtr term = body;
    for (int j = k; j-- > 0;) term = oracle::llam(xs[j], term);
    if (oracle::depth(term) > 5) {
      bad.add("generator exceeded depth 5: " + oracle::show(term));
      continue;
    }
    std::vector<std::uint64_t> args;
    oracle::LPtr applied = term;
    CombPtr compiled = compile(oracle::to_comb(term));
    CombPtr capplied = compiled;
    for (int j = 0; j < k; ++j) {
      args.push_back(static_cast<std::uint64_t>(gen.pick(7)));
      applied = oracle::lapp(applied, oracle::lnum(args.back()));
      capplied = app(capplied, num(args.back()));
    }
    auto direct = oracle::evaluate(applied, 10000);
    if (!direct.converged || !direct.value) {
      ++skipped;
      continue;
    }
    ++compared;
    auto o = reduce(capplied, 10000000);
    if (!o.converged() || o.numeral() != Nat(*direct.value)) {
      bad.add(oracle::show(applied) + " gave " + std::string(status_name(o.status)));
      continue;
    }
    worst = std::max(worst, static_cast<double>(o.steps) / static_cast<double>(std::max<std::uint64_t>(1, direct.steps)));
    if (o.steps > kInflationFactor * direct.steps + kInflationSlack)
      bad.add("inflation " + std::to_string(o.steps) + " vs " + std::to_string(direct.steps) + " on " +
              oracle::show(applied));
  }
  if (compared < 400) bad.add("only " + std::to_string(compared) + " terms converged");
  std::ostringstream d;
  d << compared << " compared, " << skipped << " stuck, worst step ratio " << worst;
  return {bad.count == 0, bad.count ? bad.summary() : d.str()};
}

// ---------------------------------------------------------------------------

Result realiser_goldens() {
  using kernel::SchemeId;
  const fs::path dir = fs::path(CMR_GOLDEN_DIR) / "realisers";
  Failures bad;
  int checked = 0;
  auto expect = [&](const std::string& name, const CombPtr& got) {
    auto want = trim(slurp(dir / (name + ".txt")));
    ++checked;
    if (want.empty()) bad.add("missing golden " + name);
    else if (pca::print(got) != want) bad.add(name + ": " + pca::print(got));
  };
  auto F = [](const char* s) { return sx::parse_formula(s); };
  auto abs = [](const char* s) {
    sx::FormulaParser fp;
    return fp.abstraction(cmr::sexpr::read_one(s));
  };
  auto axiom = [&](SchemeId id, std::vector<kernel::Param> ps) {
    auto inst = kernel::instantiate_axiom(id, ps);
    expect(std::string(kernel::scheme_info(id).name), cmr::extractor::realiser_for_axiom(id, ps, inst));
  };
  kernel::Param a = F("(= 0 0)"), b = F("(= 1 1)"), c = F("(= 2 2)");
  axiom(SchemeId::ImpK, {a, b});
  axiom(SchemeId::ImpS, {a, b, c});
  axiom(SchemeId::AndIntro, {a, b});
  axiom(SchemeId::AndElimL, {a, b});
  axiom(SchemeId::AndElimR, {a, b});
  axiom(SchemeId::OrIntroL, {a, b});
  axiom(SchemeId::OrIntroR, {a, b});
  axiom(SchemeId::OrElim, {a, b, c});
  axiom(SchemeId::NegIntro, {a, b});
  axiom(SchemeId::ExistsIntro, {abs("(abs-n n (= n 3))"), sx::parse_term("3")});
  axiom(SchemeId::ForallElim, {abs("(abs-n n (= n n))"), sx::parse_term("x")});
  axiom(SchemeId::EqRefl, {sx::parse_term("x")});
  axiom(SchemeId::EqSubst, {sx::parse_term("x"), sx::parse_term("y"), abs("(abs-n h (= h 0))")});

  using cmr::extractor::rule_all_gen;
  using cmr::extractor::rule_ex_gen;
  using cmr::extractor::rule_mp;
  std::vector<sx::Binder> m{{"m", sx::Sort::First}}, mx{{"m", sx::Sort::First}, {"x", sx::Sort::First}};
  expect("mp", rule_mp(pca::vref("e"), pca::vref("f"), m, m, m));
  expect("gen-all", rule_all_gen(pca::vref("f"), "x", m, mx));
  expect("gen-ex", rule_ex_gen(pca::vref("f"), "x", m, mx));
  return {bad.count == 0, bad.count ? bad.summary() : std::to_string(checked) + " goldens"};
}

// ---------------------------------------------------------------------------

struct CorpusEntry {
  std::string name;
  kernel::Proof proof;
  kernel::Theory theory;
};

std::vector<CorpusEntry> load_corpus() {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(cmr::cli::corpus_dir()))
    if (e.path().extension() == ".proof") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<CorpusEntry> out;
  for (const auto& f : files) {
    auto p = kernel::parse_proof(slurp(f));
    auto th = p.theory.value_or(kernel::Theory::CM);
    out.push_back({f.stem().string(), std::move(p), th});
  }
  return out;
}

Result corpus_end_to_end() {
  auto t0 = std::chrono::steady_clock::now();
  Failures bad;
  auto corpus = load_corpus();
  for (const auto& c : corpus) {
    auto v = kernel::check_proof(c.proof, c.theory);
    if (!v.accepted) {
      bad.add(c.name + " rejected: " + v.reason);
      continue;
    }
    cmr::realcheck::Bounds b;
    b.N = 50;
    b.fuel = 1000000;
    auto r = cmr::realcheck::check_theorem(c.proof, c.theory, {}, b);
    if (!r.verdict.yes()) bad.add(c.name + ": " + r.verdict.reason);
  }
  const double t = seconds_since(t0);
  if (t >= 60.0) bad.add("took " + std::to_string(t) + " s");
  if (corpus.empty()) bad.add("empty corpus");
  std::ostringstream d;
  d << corpus.size() << " proofs Yes in " << t << " s";
  return {bad.count == 0, bad.count ? bad.summary() : d.str()};
}

// ---------------------------------------------------------------------------

struct WitnessWalk {
  Failures& bad;
  std::string name;
  int exists = 0, ors = 0;
  std::vector<std::pair<std::string, std::uint64_t>> nums;
  std::vector<std::pair<std::string, CombPtr>> sets;

  CombPtr value(const CombPtr& t) {
    auto o = pca::reduce(t, 1000000);
    if (!o.converged()) throw std::runtime_error("did not converge: " + o.desc);
    return o.value;
  }
  std::uint64_t number(const CombPtr& t) {
    auto o = pca::reduce(pca::app(pca::PRED(), pca::app(pca::SUCC(), t)), 1000000);
    auto n = o.numeral();
    if (!o.converged() || !n) throw std::runtime_error("not a numeral");
    return static_cast<std::uint64_t>(*n);
  }
  bool true_here(const sx::FormulaPtr& f) { return oracle::arith_truth(f, nums, sets, 50); }

  void walk(const CombPtr& d, const sx::FormulaPtr& f) {
    using K = sx::Formula::Kind;
    switch (f->kind) {
      case K::And:
        walk(pca::app(pca::P0(), d), f->a);
        walk(pca::app(pca::P1(), d), f->b);
        return;
      case K::Or: {
        ++ors;
        auto tag = number(pca::app(pca::P0(), d));
        if (tag > 1) {
          bad.add(name + ": tag " + std::to_string(tag));
          return;
        }
        const auto& chosen = tag == 0 ? f->a : f->b;
        if (!true_here(chosen)) bad.add(name + ": tag selects a false disjunct");
        walk(pca::app(pca::P1(), d), chosen);
        return;
      }
      case K::Exists: {
        ++exists;
        if (f->bound.sort == sx::Sort::First) {
          auto w = number(pca::app(pca::P0(), d));
          nums.push_back({f->bound.name, w});
          if (!true_here(f->a)) bad.add(name + ": witness " + std::to_string(w) + " fails the matrix");
          walk(pca::app(pca::P1(), d), f->a);
          nums.pop_back();
        } else if (f->bound.sort == sx::Sort::Second) {
          sets.push_back({f->bound.name, value(pca::app(pca::P0(), d))});
          if (!true_here(f->a)) bad.add(name + ": set witness fails the matrix");
          sets.pop_back();
        }
        return;
      }
      default: return;
    }
  }
};

Result witness_extraction() {
  Failures bad;
  int exists = 0, ors = 0, proofs = 0;
  for (const auto& c : load_corpus()) {
    auto th = sx::expand(kernel::theorem_of(c.proof));
    if (!sx::free_vars(*th).empty()) continue;
    auto ex = cmr::extractor::extract(c.proof, c.theory);
    WitnessWalk w{bad, c.name};
    try {
      w.walk(pca::app(ex.final_line().compiled, pca::num(0)), th);
    } catch (const std::exception& e) {
      bad.add(c.name + ": " + e.what());
    }
    if (w.exists + w.ors) ++proofs;
    exists += w.exists;
    ors += w.ors;
  }
  if (exists == 0 || ors == 0) bad.add("corpus lacks an existential or a disjunction");
  std::ostringstream d;
  d << proofs << " proofs, " << exists << " witnesses, " << ors << " tags";
  return {bad.count == 0, bad.count ? bad.summary() : d.str()};
}

// ---------------------------------------------------------------------------
// Closed first-order formulas of quantifier depth <= 2. Implications only
// take quantifier-free antecedents and negation only applies to atoms.

std::vector<oracle::OFormPtr> qf_over(const std::vector<oracle::OFormPtr>& atoms) {
  using namespace oracle;
  std::vector<OFormPtr> out = atoms;
  for (const auto& a : atoms) out.push_back(onot(a));
  for (const auto& a : atoms)
    for (const auto& b : atoms) {
      out.push_back(oand(a, b));
      out.push_back(oor(a, b));
      out.push_back(oimp(a, b));
    }
  return out;
}

std::vector<oracle::OFormPtr> formula_family() {
  using namespace oracle;
  auto x = ovar("x"), y = ovar("y");
  std::vector<OFormPtr> closed{oeq(olit(0), olit(0)), oeq(olit(1), olit(0))};
  std::vector<OFormPtr> ax{oeq(x, olit(0)), oeq(x, olit(2)), oeq(osucc(x), olit(3)), oeq(oadd(x, x), olit(4))};
  std::vector<OFormPtr> axy{oeq(x, y), oeq(osucc(x), y), oeq(oadd(x, y), olit(3)), oeq(y, olit(0))};
  auto q = [](int which, const std::string& v, OFormPtr body) { return which ? oex(v, body) : oall(v, body); };

  std::vector<OFormPtr> out = qf_over(closed);
  auto qx = qf_over(ax);
  auto qxy = qf_over(axy);
  std::vector<OFormPtr> depth1;
  for (int i = 0; i < 2; ++i)
    for (const auto& m : qx) depth1.push_back(q(i, "x", m));
  out.insert(out.end(), depth1.begin(), depth1.end());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (const auto& m : qxy) out.push_back(q(i, "x", q(j, "y", m)));
  // mixed shapes: A(x) -> Qy B(x,y), A(x) and/or Qy B(x,y), closed A -> Qx B(x)
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (const auto& a : ax)
        for (const auto& b : axy) {
          out.push_back(q(i, "x", oimp(a, q(j, "y", b))));
          out.push_back(q(i, "x", oor(a, q(j, "y", b))));
          out.push_back(q(i, "x", oand(a, q(j, "y", b))));
        }
  for (const auto& a : closed)
    for (int i = 0; i < 2; ++i)
      for (const auto& b : ax) out.push_back(oimp(a, q(i, "x", b)));
  // binary combinations of one-quantifier atoms
  std::vector<OFormPtr> small;
  for (int i = 0; i < 2; ++i)
    for (const auto& a : ax) small.push_back(q(i, "x", a));
  for (const auto& a : small)
    for (const auto& b : small) {
      out.push_back(oand(a, b));
      out.push_back(oor(a, b));
    }
  return out;
}

std::vector<CombPtr> junk_terms() {
  using namespace pca;
  auto c = [](const char* s) { return compile(parse(s)); };
  return {num(0),
          num(1),
          num(7),
          app(P(), {num(0), num(0)}),
          app(P(), {num(1), num(0)}),
          app(P(), {num(2), num(0)}),
          app(P(), {num(3), app(P(), {num(0), num(0)})}),
          app(K(), num(0)),
          app(K(), app(P(), {num(1), num(0)})),
          app(K(), app(P(), {num(0), app(P(), {num(0), num(0)})})),
          app(S(), {K(), K()}),
          c("(lam n (P n 0))"),
          c("(lam n (P (SUCC n) 0))"),
          c("(lam n (P (CASES 0 1 n 0) 0))"),
          c("(lam n (lam m (P m 0)))"),
          c("(lam n (P 2 (P n 0)))"),
          omega()};
}

Result oracle_equivalence() {
  using cmr::realcheck::Verdict3;
  oracle::Bounded ob;
  ob.N = 5;
  ob.fuel = 100000;
  cmr::realcheck::Bounds rb;
  rb.N = 5;
  rb.fuel = 100000;
  auto forms = formula_family();
  auto junk = junk_terms();
  std::vector<CombPtr> standards;
  for (const auto& f : forms)
    if (auto s = oracle::standard_realiser(f, {}, ob)) standards.push_back(*s);
  std::mt19937 g(99);
  Failures bad;
  size_t pairs = 0, yes = 0, no = 0, undef = 0;
  for (const auto& f : forms) {
    std::vector<CombPtr> cands = junk;
    if (auto s = oracle::standard_realiser(f, {}, ob)) cands.push_back(*s);
    for (int i = 0; i < 6; ++i) cands.push_back(standards[g() % standards.size()]);
    auto sf = oracle::to_syntax(f);
    for (const auto& d : cands) {
      auto want = oracle::realises(d, f, {}, ob);
      auto got = cmr::realcheck::realizes(d, sf, {}, rb);
      ++pairs;
      const bool agree = (want == oracle::Rz::Realises && got.yes()) || (want == oracle::Rz::Fails && got.no()) ||
                         (want == oracle::Rz::Undefined && got.unknown());
      (want == oracle::Rz::Realises ? yes : want == oracle::Rz::Fails ? no : undef)++;
      if (!agree)
        bad.add(oracle::show(f) + " with " + pca::print(d) + ": oracle " + oracle::rz_name(want) + ", realizes " +
                std::string(cmr::realcheck::verdict_name(got.kind)) + " " + got.reason);
    }
  }
  std::ostringstream d;
  d << forms.size() << " formulas, " << pairs << " pairs (" << yes << " realise, " << no << " fail, " << undef
    << " undefined)";
  return {bad.count == 0, bad.count ? bad.summary() : d.str()};
}

// ---------------------------------------------------------------------------

namespace ord = cmr::ordinals;

ord::Ord random_normal(std::mt19937& g, int depth) {
  std::uniform_int_distribution<int> pick(0, 3);
  ord::Ord out;
  const int terms = 1 + pick(g) % 3;
  for (int i = 0; i < terms; ++i) {
    ord::Ord part = depth == 0 || pick(g) == 0 ? ord::finite(static_cast<std::uint64_t>(1 + pick(g)))
                                                : ord::phi(random_normal(g, depth - 1), random_normal(g, depth - 1),
                                                           static_cast<std::uint64_t>(1 + pick(g) % 2));
    out.terms.insert(out.terms.end(), part.terms.begin(), part.terms.end());
  }
  return ord::normalize(out);
}

Result veblen() {
  Failures bad;
  std::mt19937 g(4242);
  std::vector<ord::Ord> pool;
  for (int i = 0; i < 400; ++i) pool.push_back(random_normal(g, 3));
  std::uniform_int_distribution<size_t> any(0, pool.size() - 1);
  auto C = [](const ord::Ord& x, const ord::Ord& y) { return ord::ord_cmp(x, y); };
  using ord::Cmp;
  for (int i = 0; i < 10000; ++i) {
    const auto& x = pool[any(g)];
    const auto& y = pool[any(g)];
    Cmp c = C(x, y), d = C(y, x);
    const bool mirrored = (c == Cmp::Less && d == Cmp::Greater) || (c == Cmp::Greater && d == Cmp::Less) ||
                          (c == Cmp::Equal && d == Cmp::Equal);
    if (!mirrored) bad.add("antisymmetry/totality on " + ord::print(x) + " " + ord::print(y));
    if ((c == Cmp::Equal) != (ord::print(x) == ord::print(y))) bad.add("equality is not identity");
  }
  for (int i = 0; i < 10000; ++i) {
    const ord::Ord* t[3] = {&pool[any(g)], &pool[any(g)], &pool[any(g)]};
    int perm[3] = {0, 1, 2};
    do {
      const auto &a = *t[perm[0]], &b = *t[perm[1]], &c = *t[perm[2]];
      if (C(a, b) != Cmp::Greater && C(b, c) != Cmp::Greater) {
        Cmp ac = C(a, c);
        if (ac == Cmp::Greater || (ac == Cmp::Equal && (C(a, b) == Cmp::Less || C(b, c) == Cmp::Less)))
          bad.add("transitivity on " + ord::print(a) + " " + ord::print(b) + " " + ord::print(c));
      }
    } while (std::next_permutation(perm, perm + 3));
  }

  // every CNF below omega^4 with coefficients <= 3
  std::vector<std::pair<oracle::Cnf, ord::Ord>> all;
  for (int code = 0; code < 256; ++code) {
    oracle::Cnf v{static_cast<std::uint64_t>(code & 3), static_cast<std::uint64_t>((code >> 2) & 3),
                  static_cast<std::uint64_t>((code >> 4) & 3), static_cast<std::uint64_t>((code >> 6) & 3)};
    auto o = ord::normalize(ord::parse(oracle::cnf_text(v)));
    if (ord::print(o) != oracle::cnf_text(v)) bad.add("CNF text does not round-trip: " + oracle::cnf_text(v));
    all.push_back({v, o});
  }
  for (const auto& [u, x] : all)
    for (const auto& [v, y] : all) {
      const int want = oracle::cnf_cmp(u, v);
      const Cmp got = C(x, y);
      if ((want < 0) != (got == Cmp::Less) || (want == 0) != (got == Cmp::Equal))
        bad.add("CNF order " + oracle::cnf_text(u) + " vs " + oracle::cnf_text(v));
    }
  // normalize against ordinal addition of powers in arbitrary order
  for (int i = 0; i < 10000; ++i) {
    oracle::Cnf want;
    std::string text = "(sum";
    const int n = 1 + static_cast<int>(g() % 6);
    for (int j = 0; j < n; ++j) {
      const size_t e = g() % 4;
      want = oracle::cnf_add_power(want, e, 1);
      text += e == 0 ? " 1" : " (phi 0 " + std::to_string(e) + ")";
    }
    text += ")";
    auto got = ord::print(ord::normalize(ord::parse(text)));
    if (got != oracle::cnf_text(want)) bad.add("normalize " + text + " gave " + got);
  }

  auto O = [](const char* s) { return ord::normalize(ord::parse(s)); };
  if (C(O("(phi 0 0)"), O("(phi 1 0)")) != Cmp::Less) bad.add("phi(0,0) < phi(1,0)");
  if (ord::print(ord::normalize(ord::parse("(phi 0 (phi 1 0))"))) != "(phi 1 0)")
    bad.add("normalize(phi(0, phi(1,0))) = phi(1,0)");
  return {bad.count == 0, bad.count ? bad.summary() : "10^4 pairs, 10^4 triples, 65536 CNF pairs, 10^4 sums"};
}

// ---------------------------------------------------------------------------

Result kleene_brouwer() {
  auto t0 = std::chrono::steady_clock::now();
  Failures bad;
  auto trees = oracle::all_trees(6, 3);
  for (const auto& nodes : trees) {
    ord::FinTree t(nodes.begin(), nodes.end());
    if (ord::kb_sort(t) != oracle::kb_brute(nodes)) {
      std::string s;
      for (const auto& n : nodes) s += ord::print_seq(n);
      bad.add("tree " + s);
    }
  }
  const double t = seconds_since(t0);
  if (t >= 30.0) bad.add("took " + std::to_string(t) + " s");
  return {bad.count == 0, bad.count ? bad.summary() : std::to_string(trees.size()) + " trees"};
}

// ---------------------------------------------------------------------------

Result kernel_negatives() {
  Failures bad;
  int n = 0;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(fs::path(CMR_TEST_DATA) / "negative"))
    if (e.path().extension() == ".proof") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    const std::string text = slurp(f);
    std::istringstream head(text.substr(0, text.find('\n')));
    std::string semi, tag, code;
    long line = -2;
    head >> semi >> tag >> code >> line;
    if (tag != "expect") {
      bad.add(f.filename().string() + ": no expectation");
      continue;
    }
    ++n;
    auto p = kernel::parse_proof(text);
    auto v = kernel::check_proof(p, p.theory.value_or(kernel::Theory::CM));
    if (v.accepted || v.reason_code != code || v.bad_line != line)
      bad.add(f.filename().string() + ": got " + (v.accepted ? "accept" : v.reason_code) + " at " +
              std::to_string(v.bad_line));
  }
  if (n != 20) bad.add(std::to_string(n) + " proofs instead of 20");
  return {bad.count == 0, bad.count ? bad.summary() : std::to_string(n) + " proofs rejected as expected"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Result()> run;
  };
  const std::vector<Criterion> all{
      {1, "pairing", pairing},
      {2, "pca laws", pca_laws},
      {3, "bracket abstraction", bracket_abstraction},
      {4, "realiser goldens", realiser_goldens},
      {5, "corpus end to end", corpus_end_to_end},
      {6, "witness extraction", witness_extraction},
      {7, "realisability oracle", oracle_equivalence},
      {8, "veblen comparison", veblen},
      {9, "kleene-brouwer", kleene_brouwer},
      {10, "kernel negatives", kernel_negatives},
  };
  int failed = 0;
  for (const auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double t = seconds_since(t0);
    if (!r.pass) ++failed;
    std::printf("[%s] %2d %-22s %s (%.2f s)\n", r.pass ? "PASS" : "FAIL", c.id, c.name, r.detail.c_str(), t);
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", all.size() - static_cast<size_t>(failed), all.size());
  return failed ? 1 : 0;
}
