#pragma once

// Combinator terms with arithmetic constants, reduced by a fueled weak
// call-by-name machine with strict numeric argument positions.

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cmr/coding.hpp"

namespace cmr::pca {

struct Comb;
using CombPtr = std::shared_ptr<const Comb>;

struct Comb {
  enum class Kind { K, S, Num, Succ, Pred, Cases, P, P0, P1, Fix, Mu, App, Lam, Var };
  Kind kind;
  Nat num;           // Num
  std::string name;  // Lam binder, Var
  CombPtr fun;       // App function, Lam body
  CombPtr arg;       // App argument
  bool open = false; // contains Lam or Var somewhere
};

CombPtr K();
CombPtr S();
CombPtr num(const Nat& n);
CombPtr SUCC();
CombPtr PRED();
CombPtr CASES();
CombPtr P();
CombPtr P0();
CombPtr P1();
CombPtr FIX();
CombPtr MU();
CombPtr app(CombPtr f, CombPtr a);
CombPtr app(CombPtr f, std::initializer_list<CombPtr> args);
CombPtr lam(std::string x, CombPtr body);
CombPtr vref(std::string x);

/// Number of arguments a head constant consumes; 0 for Num/App/Lam/Var.
int arity(Comb::Kind k);

bool is_compiled(const CombPtr& t);
bool occurs_free(const std::string& v, const CombPtr& t);
bool structurally_equal(const CombPtr& a, const CombPtr& b);
size_t size(const CombPtr& t);

struct Outcome {
  enum class Status { Converged, OutOfFuel, Stuck };
  Status status = Status::Stuck;
  CombPtr value;
  std::uint64_t steps = 0;
  std::string desc;
  bool search_truncated = false;  // a bounded MU gave up at the bound

  bool converged() const { return status == Status::Converged; }
  /// The value as a numeral (pair values of numerals are coded).
  std::optional<Nat> numeral() const;
};

std::string_view status_name(Outcome::Status s);

struct ReduceOptions {
  std::uint64_t fuel = 1000000;
  /// When set, a search that finds nothing below the bound returns the bound.
  std::optional<Nat> search_bound;
  int max_depth = 4000;
};

/// Weak head reduction to a value. Rules, one fuel unit each:
///   K a b -> a;  S a b c -> a c (b c);  SUCC n -> n+1;  PRED n -> n-1 (0 stays 0);
///   CASES a b m n -> a if m = n else b;  P0/P1 <a,b> -> a / b;
///   P0/P1 k -> components of unpair(k);  FIX f x -> f (FIX f) x;
///   MU f -> least n with f n = 1.
/// P a b is a value; in numeric positions it is coded when a, b are numerals.
Outcome reduce(const CombPtr& t, const ReduceOptions& opts);
Outcome reduce(const CombPtr& t, std::uint64_t fuel);

/// Least n with f n = 1, charging every probe.
Outcome mu_search(const CombPtr& f, std::uint64_t fuel);

struct CompileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// lambda* v. t: SKK for v itself, K M when v is not free, S distribution
/// otherwise. Inner lambdas are eliminated first.
CombPtr bracket_abstract(const std::string& v, const CombPtr& t);

/// Eliminates every Lam; throws CompileError on a free variable.
CombPtr compile(const CombPtr& t);

/// Text syntax: K S SUCC PRED CASES P P0 P1 FIX MU, (num n), bare decimals,
/// (lam x t), (app t u), (t u ...), variables.
std::string print(const CombPtr& t);
CombPtr parse(std::string_view text);

}  // namespace cmr::pca
