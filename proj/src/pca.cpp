#include "cmr/pca.hpp"

#include <algorithm>
#include <functional>

#include "cmr/parse.hpp"
#include "cmr/sexpr.hpp"

namespace cmr::pca {

namespace {
CombPtr constant(Comb::Kind k) {
  auto c = std::make_shared<Comb>();
  c->kind = k;
  return c;
}
}  // namespace

#define CMR_CONST(NAME, KIND)                       \
  CombPtr NAME() {                                  \
    static const CombPtr c = constant(Comb::Kind::KIND); \
    return c;                                       \
  }
CMR_CONST(K, K)
CMR_CONST(S, S)
CMR_CONST(SUCC, Succ)
CMR_CONST(PRED, Pred)
CMR_CONST(CASES, Cases)
CMR_CONST(P, P)
CMR_CONST(P0, P0)
CMR_CONST(P1, P1)
CMR_CONST(FIX, Fix)
CMR_CONST(MU, Mu)
#undef CMR_CONST

CombPtr num(const Nat& n) {
  static const CombPtr small[] = {
      [] { auto c = std::make_shared<Comb>(); c->kind = Comb::Kind::Num; c->num = 0; return c; }(),
      [] { auto c = std::make_shared<Comb>(); c->kind = Comb::Kind::Num; c->num = 1; return c; }(),
  };
  if (n == 0) return small[0];
  if (n == 1) return small[1];
  auto c = std::make_shared<Comb>();
  c->kind = Comb::Kind::Num;
  c->num = n;
  return c;
}

CombPtr app(CombPtr f, CombPtr a) {
  auto c = std::make_shared<Comb>();
  c->kind = Comb::Kind::App;
  c->open = f->open || a->open;
  c->fun = std::move(f);
  c->arg = std::move(a);
  return c;
}

CombPtr app(CombPtr f, std::initializer_list<CombPtr> args) {
  for (const auto& a : args) f = app(f, a);
  return f;
}

CombPtr lam(std::string x, CombPtr body) {
  auto c = std::make_shared<Comb>();
  c->kind = Comb::Kind::Lam;
  c->name = std::move(x);
  c->fun = std::move(body);
  c->open = true;
  return c;
}

CombPtr vref(std::string x) {
  auto c = std::make_shared<Comb>();
  c->kind = Comb::Kind::Var;
  c->name = std::move(x);
  c->open = true;
  return c;
}

int arity(Comb::Kind k) {
  switch (k) {
    case Comb::Kind::K: return 2;
    case Comb::Kind::S: return 3;
    case Comb::Kind::Succ: return 1;
    case Comb::Kind::Pred: return 1;
    case Comb::Kind::Cases: return 4;
    case Comb::Kind::P: return 2;
    case Comb::Kind::P0: return 1;
    case Comb::Kind::P1: return 1;
    case Comb::Kind::Fix: return 2;
    case Comb::Kind::Mu: return 1;
    default: return 0;
  }
}

bool is_compiled(const CombPtr& t) { return !t->open; }

bool occurs_free(const std::string& v, const CombPtr& t) {
  if (!t->open) return false;
  switch (t->kind) {
    case Comb::Kind::Var: return t->name == v;
    case Comb::Kind::Lam: return t->name != v && occurs_free(v, t->fun);
    case Comb::Kind::App: return occurs_free(v, t->fun) || occurs_free(v, t->arg);
    default: return false;
  }
}

bool structurally_equal(const CombPtr& a, const CombPtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Comb::Kind::Num: return a->num == b->num;
    case Comb::Kind::Var: return a->name == b->name;
    case Comb::Kind::Lam: return a->name == b->name && structurally_equal(a->fun, b->fun);
    case Comb::Kind::App: return structurally_equal(a->fun, b->fun) && structurally_equal(a->arg, b->arg);
    default: return true;
  }
}

size_t size(const CombPtr& t) {
  switch (t->kind) {
    case Comb::Kind::App: return size(t->fun) + size(t->arg);
    case Comb::Kind::Lam: return 1 + size(t->fun);
    default: return 1;
  }
}

// ---------------------------------------------------------------------------
// reduction

std::string_view status_name(Outcome::Status s) {
  switch (s) {
    case Outcome::Status::Converged: return "converged";
    case Outcome::Status::OutOfFuel: return "out-of-fuel";
    case Outcome::Status::Stuck: return "stuck";
  }
  return "?";
}

namespace {

// A value of the form P a b.
bool as_pair(const CombPtr& v, CombPtr& a, CombPtr& b) {
  if (v->kind != Comb::Kind::App || v->fun->kind != Comb::Kind::App) return false;
  if (v->fun->fun->kind != Comb::Kind::P) return false;
  a = v->fun->arg;
  b = v->arg;
  return true;
}

}  // namespace

std::optional<Nat> Outcome::numeral() const {
  if (!converged()) return std::nullopt;
  std::function<std::optional<Nat>(const CombPtr&)> go = [&](const CombPtr& v) -> std::optional<Nat> {
    if (v->kind == Comb::Kind::Num) return v->num;
    CombPtr a, b;
    if (as_pair(v, a, b)) {
      auto x = go(a);
      auto y = go(b);
      if (x && y) return coding::pair(*x, *y);
    }
    return std::nullopt;
  };
  return go(value);
}

namespace {

struct OutOfFuelSignal {};
struct StuckSignal {
  std::string desc;
};

class Machine {
 public:
  explicit Machine(const ReduceOptions& o) : opts_(o) {}

  std::uint64_t used() const { return used_; }
  bool truncated() const { return truncated_; }

  CombPtr whnf(const CombPtr& t) {
    DepthGuard guard(*this);
    CombPtr head = t;
    std::vector<CombPtr> args;  // back() is the next argument
    for (;;) {
      while (head->kind == Comb::Kind::App) {
        args.push_back(head->arg);
        head = head->fun;
      }
      const size_t k = args.size();
      auto take = [&] {
        CombPtr a = std::move(args.back());
        args.pop_back();
        return a;
      };
      switch (head->kind) {
        case Comb::Kind::Num:
          if (k == 0) return head;
          throw StuckSignal{"numeral " + coding::to_string(head->num) + " applied to an argument"};
        case Comb::Kind::Lam:
        case Comb::Kind::Var:
          throw StuckSignal{"uncompiled term"};
        case Comb::Kind::P:
          if (k <= 2) return rebuild(head, args);
          throw StuckSignal{"pair value applied to an argument"};
        default:
          if (static_cast<int>(k) < arity(head->kind)) return rebuild(head, args);
      }
      charge();
      switch (head->kind) {
        case Comb::Kind::K: {
          CombPtr a = take();
          take();
          head = a;
          break;
        }
        case Comb::Kind::S: {
          CombPtr a = take();
          CombPtr b = take();
          CombPtr c = take();
          args.push_back(app(b, c));
          args.push_back(c);
          head = a;
          break;
        }
        case Comb::Kind::Succ: head = num(numeral(take()) + 1); break;
        case Comb::Kind::Pred: {
          Nat n = numeral(take());
          head = num(n == 0 ? Nat(0) : Nat(n - 1));
          break;
        }
        case Comb::Kind::Cases: {
          CombPtr a = take();
          CombPtr b = take();
          Nat m = numeral(take());
          Nat n = numeral(take());
          head = m == n ? a : b;
          break;
        }
        case Comb::Kind::P0:
        case Comb::Kind::P1: {
          const bool first = head->kind == Comb::Kind::P0;
          CombPtr v = whnf(take());
          CombPtr a, b;
          if (as_pair(v, a, b)) {
            head = first ? a : b;
          } else if (v->kind == Comb::Kind::Num) {
            auto [x, y] = coding::unpair(v->num);
            head = num(first ? x : y);
          } else {
            throw StuckSignal{std::string(first ? "P0" : "P1") + " of a non-pair"};
          }
          break;
        }
        case Comb::Kind::Fix: {
          CombPtr f = take();
          CombPtr x = take();
          args.push_back(x);
          args.push_back(app(FIX(), f));
          head = f;
          break;
        }
        case Comb::Kind::Mu: {
          CombPtr f = take();
          for (Nat n = 0;; ++n) {
            if (opts_.search_bound && n >= *opts_.search_bound) {
              head = num(*opts_.search_bound);
              truncated_ = true;
              break;
            }
            if (numeral(app(f, num(n))) == 1) {
              head = num(n);
              break;
            }
          }
          break;
        }
        default:
          throw StuckSignal{"internal: unexpected head"};
      }
    }
  }

  Nat numeral(const CombPtr& t) {
    CombPtr v = whnf(t);
    if (v->kind == Comb::Kind::Num) return v->num;
    CombPtr a, b;
    if (as_pair(v, a, b)) {
      Nat x = numeral(a);
      Nat y = numeral(b);
      return coding::pair(x, y);
    }
    throw StuckSignal{"expected a numeral, found " + print(v)};
  }

 private:
  struct DepthGuard {
    Machine& m;
    explicit DepthGuard(Machine& mm) : m(mm) {
      if (++m.depth_ > m.opts_.max_depth) {
        --m.depth_;
        throw StuckSignal{"evaluation depth limit"};
      }
    }
    ~DepthGuard() { --m.depth_; }
  };

  void charge() {
    if (used_ >= opts_.fuel) throw OutOfFuelSignal{};
    ++used_;
  }

  static CombPtr rebuild(CombPtr head, const std::vector<CombPtr>& args) {
    for (auto it = args.rbegin(); it != args.rend(); ++it) head = app(head, *it);
    return head;
  }

  ReduceOptions opts_;
  std::uint64_t used_ = 0;
  int depth_ = 0;
  bool truncated_ = false;
};

}  // namespace

Outcome reduce(const CombPtr& t, const ReduceOptions& opts) {
  Outcome out;
  if (!is_compiled(t)) {
    out.status = Outcome::Status::Stuck;
    out.desc = "uncompiled term";
    return out;
  }
  Machine m(opts);
  try {
    out.value = m.whnf(t);
    out.status = Outcome::Status::Converged;
  } catch (const OutOfFuelSignal&) {
    out.status = Outcome::Status::OutOfFuel;
    out.desc = "fuel exhausted";
  } catch (const StuckSignal& s) {
    out.status = Outcome::Status::Stuck;
    out.desc = s.desc;
  }
  out.steps = m.used();
  out.search_truncated = m.truncated();
  return out;
}

Outcome reduce(const CombPtr& t, std::uint64_t fuel) {
  ReduceOptions o;
  o.fuel = fuel;
  return reduce(t, o);
}

Outcome mu_search(const CombPtr& f, std::uint64_t fuel) { return reduce(app(MU(), f), fuel); }

// ---------------------------------------------------------------------------
// bracket abstraction

namespace {

bool has_lam(const CombPtr& t) {
  if (!t->open) return false;
  if (t->kind == Comb::Kind::Lam) return true;
  if (t->kind == Comb::Kind::App) return has_lam(t->fun) || has_lam(t->arg);
  return false;
}

// v is abstracted from a lambda-free term
CombPtr abstract_flat(const std::string& v, const CombPtr& t) {
  if (t->kind == Comb::Kind::Var && t->name == v) return app(app(S(), K()), K());
  if (!occurs_free(v, t)) return app(K(), t);
  return app(app(S(), abstract_flat(v, t->fun)), abstract_flat(v, t->arg));
}

CombPtr eliminate(const CombPtr& t) {
  if (!has_lam(t)) return t;
  if (t->kind == Comb::Kind::Lam) return abstract_flat(t->name, eliminate(t->fun));
  return app(eliminate(t->fun), eliminate(t->arg));
}

}  // namespace

CombPtr bracket_abstract(const std::string& v, const CombPtr& t) { return abstract_flat(v, eliminate(t)); }

CombPtr compile(const CombPtr& t) {
  CombPtr out = eliminate(t);
  if (out->open) {
    std::string v;
    std::function<void(const CombPtr&)> find = [&](const CombPtr& u) {
      if (!v.empty() || !u->open) return;
      if (u->kind == Comb::Kind::Var) v = u->name;
      if (u->kind == Comb::Kind::App) {
        find(u->fun);
        find(u->arg);
      }
    };
    find(out);
    throw CompileError("free variable " + v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// text

namespace {

std::string_view const_name(Comb::Kind k) {
  switch (k) {
    case Comb::Kind::K: return "K";
    case Comb::Kind::S: return "S";
    case Comb::Kind::Succ: return "SUCC";
    case Comb::Kind::Pred: return "PRED";
    case Comb::Kind::Cases: return "CASES";
    case Comb::Kind::P: return "P";
    case Comb::Kind::P0: return "P0";
    case Comb::Kind::P1: return "P1";
    case Comb::Kind::Fix: return "FIX";
    case Comb::Kind::Mu: return "MU";
    default: return "";
  }
}

void print_to(const CombPtr& t, std::string& out) {
  switch (t->kind) {
    case Comb::Kind::Num:
      out += "(num " + coding::to_string(t->num) + ")";
      return;
    case Comb::Kind::Var:
      out += t->name;
      return;
    case Comb::Kind::Lam:
      out += "(lam " + t->name + " ";
      print_to(t->fun, out);
      out += ")";
      return;
    case Comb::Kind::App: {
      std::vector<CombPtr> spine;
      CombPtr h = t;
      while (h->kind == Comb::Kind::App) {
        spine.push_back(h->arg);
        h = h->fun;
      }
      out += "(";
      print_to(h, out);
      for (auto it = spine.rbegin(); it != spine.rend(); ++it) {
        out += " ";
        print_to(*it, out);
      }
      out += ")";
      return;
    }
    default:
      out += const_name(t->kind);
  }
}

CombPtr from_sexp(const sexpr::Sexp& s) {
  using sexpr::fail;
  if (s.atom) {
    static const std::pair<std::string_view, CombPtr (*)()> consts[] = {
        {"K", K}, {"S", S}, {"SUCC", SUCC}, {"PRED", PRED}, {"CASES", CASES},
        {"P", P}, {"P0", P0}, {"P1", P1},   {"FIX", FIX},   {"MU", MU}};
    for (const auto& [n, f] : consts)
      if (s.text == n) return f();
    if (!s.text.empty() && std::all_of(s.text.begin(), s.text.end(), [](char c) { return c >= '0' && c <= '9'; }))
      return num(coding::parse_nat(s.text));
    if (syntax::is_identifier(s.text)) return vref(s.text);
    fail(s, ParseError::Kind::Lexical, "bad combinator atom '" + s.text + "'");
  }
  if (s.items.empty()) fail(s, ParseError::Kind::Structure, "empty application");
  const std::string h(s.head());
  if (h == "num") {
    sexpr::expect_size(s, 2);
    if (!s[1].atom || s[1].text.find_first_not_of("0123456789") != std::string::npos || s[1].text.empty())
      fail(s[1], ParseError::Kind::Lexical, "numeral expected");
    return num(coding::parse_nat(s[1].text));
  }
  if (h == "lam") {
    sexpr::expect_size(s, 3);
    if (!s[1].atom || !syntax::is_identifier(s[1].text))
      fail(s[1], ParseError::Kind::Structure, "lambda binder must be an identifier");
    return lam(s[1].text, from_sexp(s[2]));
  }
  size_t first = h == "app" ? 1 : 0;
  if (s.size() - first < 1) fail(s, ParseError::Kind::Arity, "application needs a function");
  CombPtr f = from_sexp(s[first]);
  for (size_t i = first + 1; i < s.size(); ++i) f = app(f, from_sexp(s[i]));
  return f;
}

}  // namespace

std::string print(const CombPtr& t) {
  std::string out;
  print_to(t, out);
  return out;
}

CombPtr parse(std::string_view text) { return from_sexp(sexpr::read_one(text)); }

}  // namespace cmr::pca
