#pragma once

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "xconv/syntax.hpp"

namespace xconv {

/// A tree of propositional formulas. Leaves are hypotheses, internal nodes
/// are derived formulas, the root is the claim. Children are ordered; their
/// order is the premise order of the curried deduction step.
struct Explanation {
  PropFormula claim;
  std::vector<Explanation> premises;

  static Explanation leaf(PropFormula f) { return {std::move(f), {}}; }

  bool is_leaf() const { return premises.empty(); }

  friend bool operator==(const Explanation&, const Explanation&) = default;
  friend std::strong_ordering operator<=>(const Explanation& a, const Explanation& b);
};

/// Claims of the direct children.
std::vector<PropFormula> premise_claims(const Explanation& e);

/// Subtree rooted at f, or nullptr.
const Explanation* find_node(const Explanation& e, const PropFormula& f);

/// Pr(e, f): premises of f inside e; nullopt if f does not occur.
std::optional<std::vector<PropFormula>> premises_of(const Explanation& e, const PropFormula& f);

std::set<PropFormula> hypotheses(const Explanation& e);
std::set<PropFormula> derived(const Explanation& e);

/// Hypotheses in left-to-right leaf order.
std::vector<PropFormula> hypothesis_list(const Explanation& e);

/// All node formulas in post-order (children left to right, then the node).
std::vector<PropFormula> post_order(const Explanation& e);

std::size_t node_count(const Explanation& e);

/// Longest root-to-leaf path, counted in inference steps (a leaf has depth 0).
std::size_t depth(const Explanation& e);

/// Throws InvalidExplanation when a formula occurs at two nodes, or when
/// require_inference is set and the root is a bare hypothesis.
void validate_explanation(const Explanation& e, bool require_inference = true);

/// Bit tree with the same shape as its explanation.
struct BitTree {
  bool bit = false;
  std::vector<BitTree> premises;

  friend bool operator==(const BitTree&, const BitTree&) = default;
};

/// The explainee's feedback: one bit per node of an explanation.
struct FeedbackRecord {
  Explanation exp;
  BitTree bits;

  /// Bit recorded for node formula f. Throws MalformedFeedback if absent.
  bool bit_of(const PropFormula& f) const;
  bool all_ones() const;

  friend bool operator==(const FeedbackRecord&, const FeedbackRecord&) = default;
};

/// Problems with a feedback record, each naming the offending node path
/// (child indices from the root, e.g. "0/1"). Empty when well-formed.
std::vector<std::string> feedback_problems(const FeedbackRecord& fb);

/// Throws MalformedFeedback listing feedback_problems.
void validate_feedback(const FeedbackRecord& fb);

/// Bits listed in post-order, matching post_order(fb.exp).
std::vector<bool> bits_post_order(const BitTree& bits);

}  // namespace xconv
