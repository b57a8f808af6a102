#pragma once

// Proof-to-program compilation: every accepted proof line gets a realiser,
// a closed combinator term taking the tuple of values of the line's free
// variables.

#include <stdexcept>
#include <string>
#include <vector>

#include "cmr/kernel.hpp"
#include "cmr/pca.hpp"

namespace cmr::extractor {

using pca::CombPtr;
using syntax::Binder;

/// Free variables ordered first-sort, then second, then third; each group in
/// first-occurrence order.
std::vector<Binder> parameter_layout(const syntax::Formula& f);

/// Right-nested tuple of values; the empty tuple is 0.
CombPtr tuple_term(const std::vector<CombPtr>& items);

/// Component `i` of a tuple of `k` items held in `p`.
CombPtr tuple_access(const CombPtr& p, size_t i, size_t k);

/// Value standing in for a variable the realiser does not depend on.
CombPtr default_value(syntax::Sort s);

/// Closed combinators for PA addition and multiplication.
CombPtr add_comb();
CombPtr mul_comb();

/// Term computing the value of `t` from the tuple `p` laid out as `layout`.
CombPtr compile_term(const syntax::Term& t, const std::vector<Binder>& layout, const CombPtr& p);

struct Options {
  /// Interpretation r of the order relation, applied to a pair of sets.
  CombPtr prec_interp;
  Options();
};

/// True for schemes whose realiser is a flagged stand-in.
bool is_placeholder_scheme(kernel::SchemeId id);

/// Lambda-form realiser of an axiom instance. `instance` is the core
/// formula the kernel matched.
CombPtr realiser_for_axiom(kernel::SchemeId id, const std::vector<kernel::Param>& params,
                           const syntax::FormulaPtr& instance, const Options& opts = {});

/// Canonical realiser of a true formula built from atoms, and, ->, not and
/// universal quantifiers.
CombPtr trivial_realiser(const syntax::Formula& f);

/// Tuple for `target` built from a tuple `p` for `source`; `extra` binds
/// variables absent from `source`. Returns `p` itself when the layouts agree.
CombPtr adapt(const std::vector<Binder>& source, const CombPtr& p, const std::vector<Binder>& target,
              const std::vector<std::pair<std::string, CombPtr>>& extra = {});

// Rule templates. `e`, `f` are the realisers of the cited lines.
CombPtr rule_mp(const CombPtr& e, const CombPtr& f, const std::vector<Binder>& concl,
                const std::vector<Binder>& ante, const std::vector<Binder>& imp);
CombPtr rule_all_gen(const CombPtr& f, const std::string& x, const std::vector<Binder>& concl,
                     const std::vector<Binder>& prem);
CombPtr rule_ex_gen(const CombPtr& f, const std::string& x, const std::vector<Binder>& concl,
                    const std::vector<Binder>& prem);

struct LineRealiser {
  CombPtr lam_form;  // cited lines inlined as lambda-forms
  CombPtr compiled;  // closed S/K term
  std::vector<Binder> layout;
  bool placeholder = false;  // this line or a cited one uses a stand-in
};

struct Extraction {
  std::vector<LineRealiser> lines;

  const LineRealiser& final_line() const { return lines.back(); }
  bool uses_placeholder() const { return final_line().placeholder; }
  /// {"schema":1,"term":...,"compiled":bool,"trace":[...],"placeholders":[...]}
  std::string trace_json(bool compiled) const;
};

struct ExtractError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Throws ExtractError unless the proof is accepted under `th`.
Extraction extract(const kernel::Proof& p, kernel::Theory th, const Options& opts = {});

}  // namespace cmr::extractor
