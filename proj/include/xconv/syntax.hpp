#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace xconv {

/// The two agents. Index 1 always explains to index 2.
enum class Agent { Explainer = 1, Explainee = 2 };

inline int index_of(Agent a) { return static_cast<int>(a); }
inline std::size_t slot_of(Agent a) { return static_cast<std::size_t>(a) - 1; }
Agent agent_from_index(int index);

/// Propositional formula built from atoms, falsum and implication.
///
/// Nodes are immutable and shared, so copies are cheap. Equality and ordering
/// are structural; the order is Atom < Falsum < Implies, atoms by name,
/// implications lexicographically on (antecedent, consequent).
class PropFormula {
 public:
  enum class Kind { Atom, Falsum, Implies };

  /// Falsum.
  PropFormula() : PropFormula(falsum()) {}

  static PropFormula atom(std::string name);
  static PropFormula falsum();
  static PropFormula implies(PropFormula antecedent, PropFormula consequent);
  static PropFormula negation(PropFormula body) { return implies(std::move(body), falsum()); }

  Kind kind() const;
  bool is_atom() const { return kind() == Kind::Atom; }
  bool is_falsum() const { return kind() == Kind::Falsum; }
  bool is_implication() const { return kind() == Kind::Implies; }

  /// Atom name; empty for other kinds.
  const std::string& name() const;
  const PropFormula& antecedent() const;
  const PropFormula& consequent() const;

  std::size_t size() const;

  friend bool operator==(const PropFormula& a, const PropFormula& b);
  friend std::strong_ordering operator<=>(const PropFormula& a, const PropFormula& b);

 private:
  struct Node;
  explicit PropFormula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// A1 -> (A2 -> ... (An -> goal)). An empty premise list yields goal.
PropFormula curried(std::span<const PropFormula> premises, const PropFormula& goal);

/// Maximal right-nested reading of an implication chain: premises and the
/// non-implication tail. curried(result.premises, result.goal) == f.
struct CurriedReading {
  std::vector<PropFormula> premises;
  PropFormula goal;
};
CurriedReading uncurry(const PropFormula& f);

/// Justification term: constant, variable standing for an open assumption,
/// or application.
///
/// Var(goal, []) is the unjustified hypothesis x_goal; Var(goal, [p1..pn]) is
/// the unjustified deduction of goal from p1..pn. Canonical order:
/// Const < Var < App, then by name / (goal, premises) / (fn, arg).
class Term {
 public:
  enum class Kind { Const, Var, App };

  static Term constant(std::string name);
  static Term variable(PropFormula goal, std::vector<PropFormula> premises = {});
  static Term apply(Term fn, Term arg);

  Kind kind() const;
  bool is_const() const { return kind() == Kind::Const; }
  bool is_var() const { return kind() == Kind::Var; }
  bool is_app() const { return kind() == Kind::App; }

  const std::string& name() const;
  const PropFormula& goal() const;
  const std::vector<PropFormula>& premises() const;
  const Term& fn() const;
  const Term& arg() const;

  /// No Var node anywhere in the term.
  bool is_ground() const;
  bool contains(const Term& sub) const;
  std::size_t size() const;

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Replaces every occurrence of the variable x in s by r.
Term substitute(const Term& s, const Term& x, const Term& r);

}  // namespace xconv
