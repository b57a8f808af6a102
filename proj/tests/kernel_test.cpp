#include <doctest.h>

#include "cmr/kernel.hpp"

using namespace cmr::kernel;
using namespace cmr::syntax;

namespace {
FormulaPtr P(const char* s) { return parse_formula(s); }

Verdict check(const char* text, Theory th = Theory::CM) { return check_proof(parse_proof(text), th); }

// A sample argument list for every scheme, used for sort spot-checks.
std::vector<Param> sample_params(const SchemeInfo& info) {
  FormulaParser fp;
  std::vector<Param> out;
  std::optional<Sort> last;
  for (const auto& ps : info.params) {
    switch (ps.kind) {
      case ParamKind::Formula: out.push_back(P("(in1 n X)")); break;
      case ParamKind::Term: out.push_back(parse_term("(+ k 1)")); break;
      case ParamKind::SetVar: out.push_back(std::string(out.size() % 2 ? "U" : "V")); break;
      case ParamKind::ClassVar: out.push_back(std::string("C")); break;
      case ParamKind::AnyHole:
        out.push_back(fp.abstraction(cmr::sexpr::read_one("(abs-n x (= x y))")));
        last = Sort::First;
        break;
      case ParamKind::Witness: out.push_back(parse_term("(s y)")); break;
      case ParamKind::Hole: {
        std::string src = "(abs (";
        const char* names[] = {"h0", "H1", "H2"};
        for (size_t i = 0; i < ps.holes.size(); ++i)
          src += std::string("(") + names[i] + " " + std::string(sort_keyword(ps.holes[i])) + ")";
        src += ") ";
        std::string body = "(= 0 0)";
        for (size_t i = 0; i < ps.holes.size(); ++i) {
          if (ps.holes[i] == Sort::First) body = "(and (= h0 h0) " + body + ")";
          if (ps.holes[i] == Sort::Second)
            body = std::string("(and (in1 0 ") + names[i] + ") " + body + ")";
        }
        src += body + ")";
        out.push_back(fp.abstraction(cmr::sexpr::read_one(src)));
        break;
      }
    }
  }
  return out;
}
}  // namespace

TEST_CASE("scheme table covers every id once") {
  const auto& t = scheme_table();
  for (size_t i = 0; i < t.size(); ++i) {
    CHECK(static_cast<size_t>(t[i].id) == i);
    CHECK(scheme_by_name(t[i].name) == t[i].id);
  }
  int logical = 0;
  for (const auto& s : t)
    if (s.family == Family::Logical && !s.supplement) ++logical;
  CHECK(logical == 13);
  CHECK(scheme_info(SchemeId::ExFalso).supplement);
}

TEST_CASE("instantiate: induction") {
  FormulaParser fp;
  auto a = fp.abstraction(cmr::sexpr::read_one("(abs-n n (= n n))"));
  auto inst = instantiate_axiom(SchemeId::Induction, {a});
  auto want = P("(-> (and (= 0 0) (forall-n n (-> (= n n) (= (s n) (s n))))) (forall-n n (= n n)))");
  CHECK(alpha_equal(inst, want));
}

TEST_CASE("instantiate: atomic decidability") {
  auto inst = instantiate_axiom(SchemeId::DecEq, {zero(), zero()});
  CHECK(alpha_equal(inst, P("(or (= 0 0) (not (= 0 0)))")));
}

TEST_CASE("instantiate: countable initial segments") {
  auto inst = instantiate_axiom(SchemeId::W3, {});
  auto want = expand(P("(forall-s X (exists-s Z (forall-s Y (-> (prec Y X) (exists-n n (eq2 Y (slice Z n)))))))"));
  CHECK(alpha_equal(inst, want));
}

TEST_CASE("instantiate: arity and sort errors") {
  CHECK_THROWS_AS(instantiate_axiom(SchemeId::ImpK, {P("(= 0 0)")}), SchemeError);
  try {
    instantiate_axiom(SchemeId::W2Prime, {zero()});
    FAIL("expected sort mismatch");
  } catch (const SchemeError& e) {
    CHECK(e.code == "sort-mismatch");
  }
  try {
    instantiate_axiom(SchemeId::W2Prime, {});
  } catch (const SchemeError& e) {
    CHECK(e.code == "axiom-arity");
  }
  auto ok = instantiate_axiom(SchemeId::W2Prime, {std::string("C")});
  CHECK(free_vars(*ok) == std::vector<Binder>{{"C", Sort::Third}});
}

TEST_CASE("every scheme instance is sort-correct") {
  for (const auto& info : scheme_table()) {
    auto params = sample_params(info);
    FormulaPtr inst;
    REQUIRE_NOTHROW(inst = instantiate_axiom(info.id, params));
    CHECK(is_core(*inst));
    // re-parsing the printed instance performs full sort checking
    Declarations d;
    for (const auto& b : free_vars(*inst)) d[b.name] = b.sort;
    FormulaPtr back;
    CHECK_NOTHROW(back = parse_formula(print(*inst), d));
    if (back) CHECK(alpha_equal(back, inst));
  }
}

TEST_CASE("check: single atomic decidability line") {
  auto v = check("(proof (line (or (= 0 0) (not (= 0 0))) (axiom dec-eq 0 0)))");
  CHECK(v.accepted);
}

const char* kMpProof = R"(
(proof
  (line (-> (= (+ 0 0) 0) (-> (= 1 1) (= (+ 0 0) 0))) (axiom imp-k (= (+ 0 0) 0) (= 1 1)))
  (line (forall-n n (= (+ n 0) n)) (axiom pa-add-zero))
  (line (-> (forall-n n (= (+ n 0) n)) (= (+ 0 0) 0)) (axiom forall-elim (abs-n n (= (+ n 0) n)) 0))
  (line (= (+ 0 0) 0) (mp 1 2))
  (line (-> (= 1 1) (= (+ 0 0) 0)) (mp 3 0)))
)";

TEST_CASE("check: MP chain and theorem_of") {
  auto p = parse_proof(kMpProof);
  auto v = check_proof(p, Theory::CM);
  CHECK_MESSAGE(v.accepted, v.reason);
  CHECK(alpha_equal(theorem_of(p), P("(-> (= 1 1) (= (+ 0 0) 0))")));

  // prefix closure
  for (size_t k = 1; k <= p.lines.size(); ++k) {
    Proof q = p;
    q.lines.resize(k);
    CHECK(check_proof(q, Theory::CM).accepted);
  }
  CHECK(check_proof(p, Theory::CM_GWO).accepted);
}

TEST_CASE("check: generalisation side conditions") {
  auto v = check(R"(
(proof
  (line (-> (= n 0) (-> (= 1 1) (= n 0))) (axiom imp-k (= n 0) (= 1 1)))
  (line (-> (= n 0) (forall-n n (-> (= 1 1) (= n 0)))) (gen-all 0 n))))");
  CHECK_FALSE(v.accepted);
  CHECK(v.bad_line == 1);
  CHECK(v.reason_code == "gen-side-condition");

  auto ok = check(R"(
(proof
  (line (-> (= 0 0) (-> (= n n) (= 0 0))) (axiom imp-k (= 0 0) (= n n)))
  (line (-> (= 0 0) (forall-n n (-> (= n n) (= 0 0)))) (gen-all 0 n))))");
  CHECK_MESSAGE(ok.accepted, ok.reason);

  auto ex = check(R"(
(proof
  (line (-> (= n 0) (-> (= 1 1) (= n 0))) (axiom imp-k (= n 0) (= 1 1)))
  (line (-> (exists-n n (= n 0)) (-> (= 1 1) (= n 0))) (gen-ex 0 n))))");
  CHECK(ex.reason_code == "gen-side-condition");
}

TEST_CASE("check: GWO schemes need the GWO theory") {
  const char* text = "(proof (line (forall-s X (not (prec X X))) (axiom w1-irrefl)))";
  auto cm = check(text, Theory::CM);
  CHECK_FALSE(cm.accepted);
  CHECK(cm.reason_code == "theory");
  CHECK(check(text, Theory::CM_GWO).accepted);
}

TEST_CASE("check: reason codes") {
  CHECK(check("(proof (line (= 0 0) (mp 0 0)))").reason_code == "bad-citation");
  CHECK(check("(proof (line (= 0 0) (axiom nope)))").reason_code == "axiom-unknown");
  CHECK(check("(proof (line (= 0 0) (axiom eq-refl)))").reason_code == "axiom-arity");
  CHECK(check("(proof (line (= 0 0) (axiom eq-refl 1)))").reason_code == "axiom-mismatch");
  CHECK(check("(proof (line (= 0 0) (axiom eq-refl X)))").reason_code == "sort-mismatch");
  CHECK(check(R"((proof (line (= 0 0) (axiom eq-refl 0))
                        (line (= 1 1) (axiom eq-refl 1))
                        (line (= 1 1) (mp 0 1))))")
            .reason_code == "mp-not-implication");
  auto empty = check_proof(Proof{}, Theory::CM);
  CHECK_FALSE(empty.accepted);
  CHECK_THROWS(theorem_of(Proof{}));
}

TEST_CASE("verdict json") {
  auto v = check("(proof (line (= 0 0) (mp 0 0)))");
  CHECK(v.to_json() ==
        R"({"schema":1,"status":"reject","bad_line":0,"reason":"mp must cite earlier lines","reason_code":"bad-citation"})");
}

TEST_CASE("parse_proof: malformed input throws") {
  CHECK_THROWS_AS(parse_proof("(proof (line (= 0 0)))"), cmr::ParseError);
  CHECK_THROWS_AS(parse_proof("(prof)"), cmr::ParseError);
  CHECK_THROWS_AS(parse_proof("(proof (line (= 0 0) (mp a 0)))"), cmr::ParseError);
  auto p = parse_proof("(declare Y set) (theory cm-gwo) (proof (line (in1 0 Y) (axiom w3)))");
  CHECK(p.theory == Theory::CM_GWO);
  CHECK(p.decls.at("Y") == Sort::Second);
}
