#pragma once

#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "xconv/explanation.hpp"
#include "xconv/model.hpp"

namespace xconv {

struct EvidenceEntry {
  Agent agent;
  Term term;
  WorldId world;
  PropFormula formula;

  friend bool operator==(const EvidenceEntry&, const EvidenceEntry&) = default;
};

/// One model update and what it changed.
struct TraceStep {
  enum class Kind { Explanation, Feedback };

  Kind kind;
  /// Hearing world for explanation updates; the actual world (if any) checked
  /// for truthfulness in feedback updates.
  WorldId world;
  std::variant<Explanation, FeedbackRecord> payload;
  std::vector<EvidenceEntry> added;
  std::vector<WorldId> removed_worlds;

  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

using UpdateTrace = std::vector<TraceStep>;

/// The explainee hears e at w: each derived formula F is added under its
/// derived term, then the derived term r of the claim is substituted for the
/// claim's open-assumption variables in every existing entry at w.
///
/// A variable counts as the claim's variable when its goal is the claim and its
/// premise set is empty or equals H(e). Only evidence at w changes; agent 1's
/// evidence and both relations are untouched.
Model learn_from_explanation(const Model& m, const WorldId& w, const Explanation& e,
                             TraceStep* trace = nullptr);

/// Restricts the model to the worlds in x.
/// Throws EmptyUpdate for an empty x and UnknownWorld for a stray id.
Model update_by_worlds(const Model& m, Agent i, const std::set<WorldId>& x);

/// How one node of a feedback record is read by the explainer.
enum class FeedbackCase {
  HypothesisJustified,    // U = worlds where the explainee can justify F
  HypothesisUnjustified,  // U = worlds where it cannot
  StepJustified,          // U = worlds where it can justify the curried step
  StepUnjustified,        // bit 0, all premises 1: U = worlds where it cannot
  Ignored,                // bit 0 with a premise at 0: nothing can be concluded
};

FeedbackCase classify(const FeedbackRecord& fb, const PropFormula& f);

/// U_F for node f evaluated in m; nullopt for ignored nodes.
std::optional<std::set<WorldId>> feedback_world_set(const Model& m, const FeedbackRecord& fb,
                                                    const PropFormula& f);

/// The explainer hears fb: the model is restricted by U_F for every node F in
/// post-order. When `actual` is given, a U_F that excludes it raises
/// UntruthfulFeedback.
Model learn_from_feedback(const Model& m, const FeedbackRecord& fb,
                          const std::optional<WorldId>& actual = std::nullopt, TraceStep* trace = nullptr);

/// Same as learn_from_feedback with an explicit node order.
Model learn_from_feedback_in_order(const Model& m, const FeedbackRecord& fb,
                                   const std::vector<PropFormula>& order,
                                   const std::optional<WorldId>& actual = std::nullopt,
                                   TraceStep* trace = nullptr);

/// Re-runs a recorded step on m and checks that it changes the same things.
/// Throws TraceMismatch otherwise.
Model replay_step(const Model& m, const TraceStep& step);

}  // namespace xconv
