#pragma once

#include "xconv/explanation.hpp"
#include "xconv/model.hpp"

namespace xconv {

/// Derived term of the derived formula `node` of e, built from agent i's
/// evidence at w.
///
/// For a node B with premises L: if some ground d justifies curried(L, B),
/// the result is d.t1...tn where each ti is the canonical ground witness of a
/// hypothesis premise (or x{A} when there is none) or the derived term of a
/// derived premise; otherwise it is x{B | L}. Every "some" picks the
/// canonically least witness, so the result is deterministic.
///
/// Throws NodeNotDerived when node is a hypothesis of e or does not occur in it.
Term derive_term(const Model& m, const WorldId& w, const Explanation& e, const PropFormula& node,
                 Agent agent = Agent::Explainee);

/// The explainee's derived term of the claim is ground.
bool understands(const Model& m, const WorldId& w, const Explanation& e);

/// Understanding decided directly from evidence: every hypothesis and every
/// curried deduction step of e has a ground witness. Never builds terms.
bool understands_oracle(const Model& m, const WorldId& w, const Explanation& e);

/// Truthful feedback at w: a hypothesis gets 1 iff the explainee can justify
/// it; a derived node gets 1 iff the explainee understands the subexplanation
/// rooted there. The result is monotone by construction.
FeedbackRecord compute_feedback(const Model& m, const WorldId& w, const Explanation& e);

}  // namespace xconv
