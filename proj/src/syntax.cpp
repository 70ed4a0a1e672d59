#include "xconv/syntax.hpp"

#include <cassert>
#include <optional>

#include "xconv/error.hpp"

namespace xconv {

Agent agent_from_index(int index) {
  if (index == 1) return Agent::Explainer;
  if (index == 2) return Agent::Explainee;
  throw Error(ErrorCode::InvalidAgent, "agent index must be 1 or 2, got " + std::to_string(index));
}

// ---------------------------------------------------------------------------
// PropFormula

struct PropFormula::Node {
  Kind kind;
  std::string name;
  std::optional<PropFormula> lhs;
  std::optional<PropFormula> rhs;
  std::size_t size;
};

PropFormula PropFormula::atom(std::string name) {
  return PropFormula(std::make_shared<const Node>(Node{Kind::Atom, std::move(name), {}, {}, 1}));
}

PropFormula PropFormula::falsum() {
  static const PropFormula bottom(std::make_shared<const Node>(Node{Kind::Falsum, {}, {}, {}, 1}));
  return bottom;
}

PropFormula PropFormula::implies(PropFormula antecedent, PropFormula consequent) {
  const std::size_t n = 1 + antecedent.size() + consequent.size();
  return PropFormula(std::make_shared<const Node>(
      Node{Kind::Implies, {}, std::move(antecedent), std::move(consequent), n}));
}

PropFormula::Kind PropFormula::kind() const { return node_->kind; }
const std::string& PropFormula::name() const { return node_->name; }

const PropFormula& PropFormula::antecedent() const {
  assert(is_implication());
  return *node_->lhs;
}

const PropFormula& PropFormula::consequent() const {
  assert(is_implication());
  return *node_->rhs;
}

std::size_t PropFormula::size() const { return node_->size; }

bool operator==(const PropFormula& a, const PropFormula& b) { return (a <=> b) == 0; }

std::strong_ordering operator<=>(const PropFormula& a, const PropFormula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
    case PropFormula::Kind::Atom:
      return a.name() <=> b.name();
    case PropFormula::Kind::Falsum:
      return std::strong_ordering::equal;
    case PropFormula::Kind::Implies:
      if (auto c = a.antecedent() <=> b.antecedent(); c != 0) return c;
      return a.consequent() <=> b.consequent();
  }
  return std::strong_ordering::equal;
}

PropFormula curried(std::span<const PropFormula> premises, const PropFormula& goal) {
  PropFormula out = goal;
  for (auto it = premises.rbegin(); it != premises.rend(); ++it) out = PropFormula::implies(*it, out);
  return out;
}

CurriedReading uncurry(const PropFormula& f) {
  CurriedReading r{{}, f};
  while (r.goal.is_implication()) {
    r.premises.push_back(r.goal.antecedent());
    PropFormula next = r.goal.consequent();
    r.goal = next;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Term

struct Term::Node {
  Kind kind;
  std::string name;
  std::optional<PropFormula> goal;
  std::vector<PropFormula> premises;
  std::optional<Term> fn;
  std::optional<Term> arg;
  bool ground;
  std::size_t size;
};

Term Term::constant(std::string name) {
  return Term(std::make_shared<const Node>(Node{Kind::Const, std::move(name), {}, {}, {}, {}, true, 1}));
}

Term Term::variable(PropFormula goal, std::vector<PropFormula> premises) {
  return Term(std::make_shared<const Node>(
      Node{Kind::Var, {}, std::move(goal), std::move(premises), {}, {}, false, 1}));
}

Term Term::apply(Term fn, Term arg) {
  const bool ground = fn.is_ground() && arg.is_ground();
  const std::size_t n = 1 + fn.size() + arg.size();
  return Term(std::make_shared<const Node>(
      Node{Kind::App, {}, {}, {}, std::move(fn), std::move(arg), ground, n}));
}

Term::Kind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }

const PropFormula& Term::goal() const {
  assert(is_var());
  return *node_->goal;
}

const std::vector<PropFormula>& Term::premises() const { return node_->premises; }

const Term& Term::fn() const {
  assert(is_app());
  return *node_->fn;
}

const Term& Term::arg() const {
  assert(is_app());
  return *node_->arg;
}

bool Term::is_ground() const { return node_->ground; }
std::size_t Term::size() const { return node_->size; }

bool Term::contains(const Term& sub) const {
  if (*this == sub) return true;
  if (!is_app() || size() <= sub.size()) return false;
  return fn().contains(sub) || arg().contains(sub);
}

bool operator==(const Term& a, const Term& b) { return (a <=> b) == 0; }

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
    case Term::Kind::Const:
      return a.name() <=> b.name();
    case Term::Kind::Var: {
      if (auto c = a.goal() <=> b.goal(); c != 0) return c;
      const auto& pa = a.premises();
      const auto& pb = b.premises();
      return std::lexicographical_compare_three_way(pa.begin(), pa.end(), pb.begin(), pb.end());
    }
    case Term::Kind::App:
      if (auto c = a.fn() <=> b.fn(); c != 0) return c;
      return a.arg() <=> b.arg();
  }
  return std::strong_ordering::equal;
}

Term substitute(const Term& s, const Term& x, const Term& r) {
  if (s == x) return r;
  if (!s.is_app() || s.is_ground()) return s;
  Term fn = substitute(s.fn(), x, r);
  Term arg = substitute(s.arg(), x, r);
  return Term::apply(std::move(fn), std::move(arg));
}

}  // namespace xconv
