#include "xconv/derivation.hpp"

#include "xconv/error.hpp"
#include "xconv/eval.hpp"
#include "xconv/text.hpp"

namespace xconv {
namespace {

Term derive_node(const Model& m, const WorldId& w, const Explanation& node, Agent agent) {
  const auto premises = premise_claims(node);
  auto step = can_justify(m, w, agent, curried(premises, node.claim));
  if (!step) return Term::variable(node.claim, premises);
  Term t = *step;
  for (const auto& child : node.premises) {
    if (child.is_leaf()) {
      auto witness = can_justify(m, w, agent, child.claim);
      t = Term::apply(t, witness ? *witness : Term::variable(child.claim));
    } else {
      t = Term::apply(t, derive_node(m, w, child, agent));
    }
  }
  return t;
}

BitTree feedback_node(const Model& m, const WorldId& w, const Explanation& node) {
  BitTree b;
  if (node.is_leaf()) {
    b.bit = can_justify(m, w, Agent::Explainee, node.claim).has_value();
    return b;
  }
  for (const auto& child : node.premises) b.premises.push_back(feedback_node(m, w, child));
  b.bit = derive_node(m, w, node, Agent::Explainee).is_ground();
  return b;
}

}  // namespace

Term derive_term(const Model& m, const WorldId& w, const Explanation& e, const PropFormula& node,
                 Agent agent) {
  require_world(m, w);
  const auto* sub = find_node(e, node);
  if (sub == nullptr)
    throw Error(ErrorCode::NodeNotDerived, print(node) + " does not occur in " + print(e));
  if (sub->is_leaf())
    throw Error(ErrorCode::NodeNotDerived, print(node) + " is a hypothesis of " + print(e));
  return derive_node(m, w, *sub, agent);
}

bool understands(const Model& m, const WorldId& w, const Explanation& e) {
  return derive_term(m, w, e, e.claim).is_ground();
}

bool understands_oracle(const Model& m, const WorldId& w, const Explanation& e) {
  require_world(m, w);
  for (const auto& h : hypotheses(e))
    if (!can_justify(m, w, Agent::Explainee, h)) return false;
  for (const auto& g : derived(e))
    if (!can_justify(m, w, Agent::Explainee, curried(*premises_of(e, g), g))) return false;
  return true;
}

FeedbackRecord compute_feedback(const Model& m, const WorldId& w, const Explanation& e) {
  require_world(m, w);
  return {e, feedback_node(m, w, e)};
}

}  // namespace xconv
