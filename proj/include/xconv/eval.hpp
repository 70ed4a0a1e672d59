#pragma once

#include <optional>
#include <vector>

#include "xconv/formula.hpp"
#include "xconv/model.hpp"

namespace xconv {

/// Truth of f at w. Dynamic operators evaluate their body in the updated model;
/// a chain [o1][o2]...[ok] phi applies ok first and o1 last.
///
/// Throws UnknownWorld, UnknownAtom, and the errors of the model updates.
bool eval(const Model& m, const WorldId& w, const Formula& f);
bool eval(const Model& m, const WorldId& w, const PropFormula& f);

/// Canonically least ground t with p in E_i(t, w), if any.
std::optional<Term> can_justify(const Model& m, const WorldId& w, Agent i, const PropFormula& p);

/// Throws UnknownWorld unless w is a world of m.
void require_world(const Model& m, const WorldId& w);

/// (F -> G) in E_i(s,w) and F in E_i(t,w) but G not in E_i(s.t,w).
struct ClosureCounterexample {
  Agent agent;
  WorldId world;
  Term s;
  Term t;
  PropFormula antecedent;
  PropFormula consequent;
};

struct ValidityReport {
  std::size_t instances = 0;
  /// Descriptions of failed instances of [t]F -> B F, [t]F -> F and B F -> F.
  std::vector<std::string> jyb_failures;
  std::vector<std::string> factivity_failures;
  std::vector<std::string> reflexivity_failures;
  std::vector<ClosureCounterexample> closure_counterexamples;

  bool validities_hold() const {
    return jyb_failures.empty() && factivity_failures.empty() && reflexivity_failures.empty();
  }
};

/// Checks the validities over every world and every ground evidence entry of
/// m, and searches m for failures of closure under application.
ValidityReport check_validity_samples(const Model& m);

}  // namespace xconv
