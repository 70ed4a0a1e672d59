#include "xconv/formula.hpp"

#include <cassert>

#include "xconv/error.hpp"

namespace xconv {

struct Formula::Node {
  Kind kind;
  Agent agent = Agent::Explainer;
  std::optional<PropFormula> prop{};
  std::optional<Term> term{};
  std::optional<Formula> lhs{};
  std::optional<Formula> rhs{};
  std::optional<Explanation> exp{};
  std::optional<FeedbackRecord> fb{};
};

Formula Formula::prop(PropFormula p) {
  Node n{Kind::Prop};
  n.prop = std::move(p);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::box(Agent i, Formula body) {
  Node n{Kind::Box, i};
  n.lhs = std::move(body);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::just(Term t, Agent i, PropFormula body) {
  Node n{Kind::Just, i};
  n.term = std::move(t);
  n.prop = std::move(body);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::triangle(Agent i, PropFormula body) {
  Node n{Kind::Triangle, i};
  n.prop = std::move(body);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::after_explanation(Agent i, Explanation e, Formula body) {
  if (i != Agent::Explainee)
    throw Error(ErrorCode::InvalidAgent, "only agent 2 hears explanations");
  Node n{Kind::DynExp, i};
  n.exp = std::move(e);
  n.lhs = std::move(body);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::after_feedback(Agent j, FeedbackRecord fb, Formula body) {
  if (j != Agent::Explainer) throw Error(ErrorCode::InvalidAgent, "only agent 1 hears feedback");
  Node n{Kind::DynFb, j};
  n.fb = std::move(fb);
  n.lhs = std::move(body);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::implies(Formula a, Formula b) {
  if (a.is_prop() && b.is_prop()) return prop(PropFormula::implies(a.prop_body(), b.prop_body()));
  Node n{Kind::Implies};
  n.lhs = std::move(a);
  n.rhs = std::move(b);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula::Kind Formula::kind() const { return node_->kind; }

const PropFormula& Formula::prop_body() const {
  assert(node_->prop);
  return *node_->prop;
}

Agent Formula::agent() const { return node_->agent; }

const Term& Formula::term() const {
  assert(node_->term);
  return *node_->term;
}

const Formula& Formula::body() const {
  assert(kind() == Kind::Box || is_dynamic());
  return *node_->lhs;
}

const Explanation& Formula::explanation() const {
  assert(node_->exp);
  return *node_->exp;
}

const FeedbackRecord& Formula::feedback() const {
  assert(node_->fb);
  return *node_->fb;
}

const Formula& Formula::lhs() const {
  assert(kind() == Kind::Implies);
  return *node_->lhs;
}

const Formula& Formula::rhs() const {
  assert(kind() == Kind::Implies);
  return *node_->rhs;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.agent == y.agent && x.prop == y.prop && x.term == y.term &&
         x.lhs == y.lhs && x.rhs == y.rhs && x.exp == y.exp && x.fb == y.fb;
}

}  // namespace xconv
