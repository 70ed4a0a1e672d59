#pragma once

#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "xconv/conversation.hpp"
#include "xconv/dynamics.hpp"
#include "xconv/explanation.hpp"
#include "xconv/model.hpp"
#include "xconv/selection.hpp"

namespace xconv::testing {

using Rng = std::mt19937_64;

Model fixture(const std::string& name);
std::string fixture_path(const std::string& name);

PropFormula atom(const std::string& name);
PropFormula imp(const PropFormula& a, const PropFormula& b);
Term constant(const std::string& name);
Term app(const Term& f, const Term& a);

// ---- generators ----

std::vector<std::string> atom_names(std::size_t n);
PropFormula random_prop(Rng& rng, const std::vector<std::string>& atoms, int depth);
Term random_term(Rng& rng, const std::vector<std::string>& atoms, int depth, bool allow_vars);
/// Random explanation with pairwise distinct atom node formulas.
Explanation random_explanation(Rng& rng, const std::vector<std::string>& atoms, int max_depth);
BitTree random_monotone_bits(Rng& rng, const Explanation& e);

struct ModelShape {
  std::size_t max_worlds = 4;
  std::size_t atoms = 4;
  std::size_t max_entries = 8;
  double truth_bias = 0.75;
};

/// Random well-formed model. Evidence is ground and consistent with JYB;
/// entries are drawn from the parts of `hint` (hypotheses and curried steps)
/// as well as random formulas. The first world is "w0".
Model random_model(Rng& rng, const ModelShape& shape, const Explanation* hint = nullptr);

/// Adds agent 1's ground derived terms for the steps of e at w wherever that
/// keeps JYB intact.
Model with_explainer_steps(Model m, const WorldId& w, const Explanation& e);

/// Explains `hint` to the explainee at random worlds a few times so that
/// variable-bearing entries exist.
Model with_learning_history(Rng& rng, Model m, int rounds);

struct PlantedInstance {
  Model model;
  WorldId actual;
  PropFormula claim;
  Explanation planted;
};

/// A model where agent 1 is aware of `planted` (ground derived terms in E1)
/// and the explainee understands it at `actual`, plus decoy rules the
/// explainee may or may not know elsewhere.
PlantedInstance planted_instance(Rng& rng);

// ---- oracles (independent of the library's algorithms) ----

namespace oracle {

bool ground(const Term& t);
bool justifies(const Model& m, Agent i, const WorldId& w, const PropFormula& p);
std::vector<WorldId> successors(const Model& m, Agent i, const WorldId& w);
bool box_triangle(const Model& m, const WorldId& w, const PropFormula& p);
bool box_not_triangle(const Model& m, const WorldId& w, const PropFormula& p);
bool truth(const Model& m, const WorldId& w, const PropFormula& p);
Term derived_term(const Model& m, Agent i, const WorldId& w, const Explanation& node);
bool understands(const Model& m, const WorldId& w, const Explanation& e);
bool available(const Model& m, const WorldId& w, const Explanation& e);
std::set<PropFormula> uncertainty(const Model& m, const WorldId& w, const Explanation& e);
/// e1 strictly preferred to e2.
bool strictly_better(const Model& m, const WorldId& w, const Explanation& e1, const Explanation& e2);
std::set<Explanation> maxima(const Model& m, const WorldId& w, const std::set<Explanation>& xs);
Model restrict(const Model& m, const std::set<WorldId>& x);
/// All trees over `universe` with root `claim`, at most `max_depth` steps,
/// distinct node formulas, children ordered, fanout at most `max_fanout`.
std::vector<Explanation> all_trees(const std::vector<PropFormula>& universe, const PropFormula& claim,
                                   std::size_t max_depth, std::size_t max_fanout);

}  // namespace oracle

/// Counts validate_model failures across every update produced in a test run.
struct UpdateAudit {
  std::size_t checked = 0;
  std::vector<std::string> failures;
  void check(const Model& m, const std::string& where);
};

UpdateAudit& audit();

}  // namespace xconv::testing
