#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "xconv/syntax.hpp"

namespace xconv {

using WorldId = std::string;
using Relation = std::set<std::pair<WorldId, WorldId>>;
/// term -> formulas justified by it, at one world.
using EvidenceAt = std::map<Term, std::set<PropFormula>>;
using Evidence = std::map<WorldId, EvidenceAt>;

/// Multi-agent modular model: worlds, one accessibility relation and one
/// evidence function per agent, and a valuation.
///
/// All containers are ordered, so iteration (and therefore witness choice) is
/// deterministic. Maps only hold non-empty entries.
struct Model {
  std::set<std::string> atoms;
  std::set<WorldId> worlds;
  std::array<Relation, 2> relations;
  std::array<Evidence, 2> evidence;
  std::map<std::string, std::set<WorldId>> valuation;

  const Relation& relation(Agent i) const { return relations[slot_of(i)]; }
  Relation& relation(Agent i) { return relations[slot_of(i)]; }

  std::vector<WorldId> successors(Agent i, const WorldId& w) const;
  bool accessible(Agent i, const WorldId& from, const WorldId& to) const;

  /// Evidence of agent i at w; an empty map when there is none.
  const EvidenceAt& evidence_at(Agent i, const WorldId& w) const;
  bool has_evidence(Agent i, const Term& t, const WorldId& w, const PropFormula& f) const;
  /// Returns true when the entry was not present before.
  bool add_evidence(Agent i, const Term& t, const WorldId& w, const PropFormula& f);

  bool holds_atom(const std::string& atom, const WorldId& w) const;

  friend bool operator==(const Model&, const Model&) = default;
};

/// Reflexive-transitive closure of r over the given worlds.
Relation reflexive_transitive_closure(const Relation& r, const std::set<WorldId>& worlds);

struct Violation {
  enum class Kind {
    NoWorlds,
    DanglingWorld,   // relation, evidence or valuation names an unknown world
    UndeclaredAtom,  // evidence or valuation names an undeclared atom
    Reflexivity,
    Transitivity,
    JustificationYieldsBelief,
  };

  Kind kind;
  std::optional<Agent> agent;
  std::vector<WorldId> worlds;
  std::optional<Term> term;
  std::optional<PropFormula> formula;
  std::string message;
};

std::string_view to_string(Violation::Kind kind);

/// Every way m fails to be a well-formed model. Empty means well-formed.
std::vector<Violation> validate_model(const Model& m);

/// Atom names occurring in f.
void collect_atoms(const PropFormula& f, std::set<std::string>& out);

}  // namespace xconv
