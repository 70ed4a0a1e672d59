#pragma once

#include <memory>
#include <optional>

#include "xconv/explanation.hpp"
#include "xconv/syntax.hpp"

namespace xconv {

/// Formulas of the full language: propositional core, belief Box_i,
/// justification [t]_i P, "can justify" T_i P, and the two dynamic operators.
///
/// Implications whose sides are both propositional collapse into a single
/// Prop node, so every formula has one normal form. Just and Triangle carry
/// propositional bodies only.
class Formula {
 public:
  enum class Kind { Prop, Box, Just, Triangle, DynExp, DynFb, Implies };

  static Formula prop(PropFormula p);
  static Formula falsum() { return prop(PropFormula::falsum()); }
  static Formula box(Agent i, Formula body);
  static Formula just(Term t, Agent i, PropFormula body);
  static Formula triangle(Agent i, PropFormula body);
  /// [i: e] body. Only the explainee hears explanations.
  static Formula after_explanation(Agent i, Explanation e, Formula body);
  /// [j: fb] body. Only the explainer hears feedback.
  static Formula after_feedback(Agent j, FeedbackRecord fb, Formula body);
  static Formula implies(Formula a, Formula b);
  static Formula negation(Formula a) { return implies(std::move(a), falsum()); }

  Kind kind() const;
  bool is_prop() const { return kind() == Kind::Prop; }
  bool is_dynamic() const { return kind() == Kind::DynExp || kind() == Kind::DynFb; }

  const PropFormula& prop_body() const;  // Prop, Just, Triangle
  Agent agent() const;                   // Box, Just, Triangle, DynExp, DynFb
  const Term& term() const;              // Just
  const Formula& body() const;           // Box, DynExp, DynFb
  const Explanation& explanation() const;  // DynExp
  const FeedbackRecord& feedback() const;  // DynFb
  const Formula& lhs() const;            // Implies
  const Formula& rhs() const;            // Implies

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

}  // namespace xconv
