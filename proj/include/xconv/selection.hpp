#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include "xconv/explanation.hpp"
#include "xconv/model.hpp"

namespace xconv {

struct SearchBounds {
  std::size_t max_depth = 5;
  std::size_t max_nodes = 24;

  /// Defaults, with max_nodes taken from XCONV_MAX_NODES when it is set.
  static SearchBounds from_env();
  static SearchBounds from_env(SearchBounds base);

  friend bool operator==(const SearchBounds&, const SearchBounds&) = default;
};

/// Throws InvalidExplanation unless both bounds are at least 1.
void validate_bounds(const SearchBounds& b);

/// Agent 1 ground-justifies every hypothesis and every derived formula (the
/// latter through its own derived term), and does not believe the explainee
/// certainly fails on any hypothesis or deduction step.
bool is_available(const Model& m, const WorldId& w, const Explanation& e);

struct Enumeration {
  std::set<Explanation> explanations;
  /// False when some candidate was cut off by the search bounds.
  bool complete = true;
};

/// Every explanation of `claim` within bounds that is available at w and,
/// when hyps is non-empty, has exactly hyps as its hypothesis set.
///
/// Candidates come from backward chaining over agent 1's ground evidence at w:
/// an entry A1 -> ... -> An -> G (read maximally, G not an implication) is a
/// step concluding G from A1..An; a formula with a ground witness may be a
/// leaf. Node formulas are pairwise distinct, so the search is finite.
Enumeration enumerate_available(const Model& m, const WorldId& w, const std::set<PropFormula>& hyps,
                                const PropFormula& claim, const SearchBounds& b);

/// Hypotheses and deduction steps of e that agent 1 is not sure the explainee
/// can justify.
std::set<PropFormula> uncertainty_set(const Model& m, const WorldId& w, const Explanation& e);

/// greater: e1 strictly preferred; equivalent: e1 and e2 rank the same.
/// Fewer uncertain parts wins, then fewer derived formulas.
std::weak_ordering prefer(const Model& m, const WorldId& w, const Explanation& e1, const Explanation& e2);

/// Nodes with bit 0 that are hypotheses or whose premises all have bit 1.
std::set<PropFormula> why_set(const FeedbackRecord& fb);

struct Round {
  Explanation explanation;
  FeedbackRecord feedback;

  friend bool operator==(const Round&, const Round&) = default;
};

/// A question followed by explanation/feedback rounds.
struct ConversationHistory {
  PropFormula question;
  std::vector<Round> rounds;

  /// The question and the first k rounds.
  ConversationHistory prefix(std::size_t k) const;

  friend bool operator==(const ConversationHistory&, const ConversationHistory&) = default;
};

/// Model after replaying every round of h on m0 at world w.
Model apply_history(const Model& m0, const WorldId& w, const ConversationHistory& h);

struct Selection {
  /// Maxima of the candidate set; empty when nothing is available.
  std::set<Explanation> best;
  std::size_t candidates = 0;
  bool complete = true;
};

/// Maxima under the preference among the explanations for the question and
/// for every formula in the why-set of the last feedback, all evaluated in the
/// model updated by the history.
Selection most_preferred(const Model& m0, const WorldId& w, const ConversationHistory& h, const SearchBounds& b);

/// Same, on an already updated model.
Selection most_preferred_in(const Model& updated, const WorldId& w, const PropFormula& question,
                            const std::optional<Round>& last, const SearchBounds& b);

}  // namespace xconv
