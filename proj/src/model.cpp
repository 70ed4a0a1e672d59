#include "xconv/model.hpp"

#include "xconv/eval.hpp"
#include "xconv/text.hpp"

namespace xconv {

std::vector<WorldId> Model::successors(Agent i, const WorldId& w) const {
  std::vector<WorldId> out;
  const auto& r = relation(i);
  for (auto it = r.lower_bound({w, WorldId{}}); it != r.end() && it->first == w; ++it)
    out.push_back(it->second);
  return out;
}

bool Model::accessible(Agent i, const WorldId& from, const WorldId& to) const {
  return relation(i).contains({from, to});
}

const EvidenceAt& Model::evidence_at(Agent i, const WorldId& w) const {
  static const EvidenceAt empty;
  const auto& ev = evidence[slot_of(i)];
  auto it = ev.find(w);
  return it == ev.end() ? empty : it->second;
}

bool Model::has_evidence(Agent i, const Term& t, const WorldId& w, const PropFormula& f) const {
  const auto& at = evidence_at(i, w);
  auto it = at.find(t);
  return it != at.end() && it->second.contains(f);
}

bool Model::add_evidence(Agent i, const Term& t, const WorldId& w, const PropFormula& f) {
  return evidence[slot_of(i)][w][t].insert(f).second;
}

bool Model::holds_atom(const std::string& atom, const WorldId& w) const {
  auto it = valuation.find(atom);
  return it != valuation.end() && it->second.contains(w);
}

Relation reflexive_transitive_closure(const Relation& r, const std::set<WorldId>& worlds) {
  Relation out = r;
  for (const auto& w : worlds) out.insert({w, w});
  // Warshall over the world list; models are small.
  for (const auto& k : worlds)
    for (const auto& i : worlds) {
      if (!out.contains({i, k})) continue;
      for (const auto& j : worlds)
        if (out.contains({k, j})) out.insert({i, j});
    }
  return out;
}

void collect_atoms(const PropFormula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case PropFormula::Kind::Atom:
      out.insert(f.name());
      break;
    case PropFormula::Kind::Falsum:
      break;
    case PropFormula::Kind::Implies:
      collect_atoms(f.antecedent(), out);
      collect_atoms(f.consequent(), out);
      break;
  }
}

std::string_view to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::NoWorlds: return "no-worlds";
    case Violation::Kind::DanglingWorld: return "dangling-world";
    case Violation::Kind::UndeclaredAtom: return "undeclared-atom";
    case Violation::Kind::Reflexivity: return "reflexivity";
    case Violation::Kind::Transitivity: return "transitivity";
    case Violation::Kind::JustificationYieldsBelief: return "justification-yields-belief";
  }
  return "?";
}

namespace {

void check_references(const Model& m, std::vector<Violation>& out) {
  using K = Violation::Kind;
  for (Agent i : {Agent::Explainer, Agent::Explainee}) {
    for (const auto& [u, v] : m.relation(i))
      for (const auto& x : {u, v})
        if (!m.worlds.contains(x))
          out.push_back({K::DanglingWorld, i, {x}, {}, {},
                         "R" + std::to_string(index_of(i)) + " pair (" + u + "," + v +
                             ") names unknown world " + x});
    for (const auto& [w, entries] : m.evidence[slot_of(i)]) {
      if (!m.worlds.contains(w))
        out.push_back({K::DanglingWorld, i, {w}, {}, {}, "evidence at unknown world " + w});
      for (const auto& [t, fs] : entries)
        for (const auto& f : fs) {
          std::set<std::string> used;
          collect_atoms(f, used);
          for (const auto& a : used)
            if (!m.atoms.contains(a))
              out.push_back({K::UndeclaredAtom, i, {w}, t, f,
                             "evidence formula " + print(f) + " uses undeclared atom " + a});
        }
    }
  }
  for (const auto& [a, ws] : m.valuation) {
    if (!m.atoms.contains(a))
      out.push_back({K::UndeclaredAtom, {}, {}, {}, PropFormula::atom(a), "valuation of undeclared atom " + a});
    for (const auto& w : ws)
      if (!m.worlds.contains(w))
        out.push_back({K::DanglingWorld, {}, {w}, {}, {}, "valuation of " + a + " names unknown world " + w});
  }
}

bool references_ok(const std::vector<Violation>& vs) {
  for (const auto& v : vs)
    if (v.kind == Violation::Kind::DanglingWorld || v.kind == Violation::Kind::UndeclaredAtom) return false;
  return true;
}

}  // namespace

std::vector<Violation> validate_model(const Model& m) {
  using K = Violation::Kind;
  std::vector<Violation> out;
  if (m.worlds.empty()) {
    out.push_back({K::NoWorlds, {}, {}, {}, {}, "model has no worlds"});
    return out;
  }
  check_references(m, out);

  for (Agent i : {Agent::Explainer, Agent::Explainee}) {
    const std::string rel = "R" + std::to_string(index_of(i));
    for (const auto& w : m.worlds)
      if (!m.accessible(i, w, w)) out.push_back({K::Reflexivity, i, {w}, {}, {}, rel + " misses (" + w + "," + w + ")"});
    for (const auto& [u, v] : m.relation(i))
      for (const auto& x : m.successors(i, v))
        if (!m.accessible(i, u, x))
          out.push_back({K::Transitivity, i, {u, v, x}, {}, {},
                         rel + " has (" + u + "," + v + ") and (" + v + "," + x + ") but not (" + u + "," + x + ")"});
  }
  // Truth of evidence formulas is only meaningful over known atoms and worlds.
  if (!references_ok(out)) return out;

  for (Agent i : {Agent::Explainer, Agent::Explainee})
    for (const auto& [w, entries] : m.evidence[slot_of(i)])
      for (const auto& [t, fs] : entries) {
        if (!t.is_ground()) continue;
        for (const auto& f : fs)
          for (const auto& u : m.successors(i, w))
            if (!eval(m, u, f))
              out.push_back({K::JustificationYieldsBelief, i, {w, u}, t, f,
                             "[" + print(t) + "]" + std::to_string(index_of(i)) + " " + print(f) + " at " + w +
                                 " but " + print(f) + " fails at successor " + u});
      }
  return out;
}

}  // namespace xconv
