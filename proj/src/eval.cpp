#include "xconv/eval.hpp"

#include "xconv/dynamics.hpp"
#include "xconv/error.hpp"
#include "xconv/text.hpp"

namespace xconv {

void require_world(const Model& m, const WorldId& w) {
  if (!m.worlds.contains(w)) throw Error(ErrorCode::UnknownWorld, "unknown world '" + w + "'");
}

namespace {

bool eval_prop(const Model& m, const WorldId& w, const PropFormula& f) {
  switch (f.kind()) {
    case PropFormula::Kind::Atom:
      if (!m.atoms.contains(f.name())) throw Error(ErrorCode::UnknownAtom, "undeclared atom '" + f.name() + "'");
      return m.holds_atom(f.name(), w);
    case PropFormula::Kind::Falsum:
      return false;
    case PropFormula::Kind::Implies:
      return !eval_prop(m, w, f.antecedent()) || eval_prop(m, w, f.consequent());
  }
  return false;
}

void require_atoms(const Model& m, const PropFormula& f) {
  std::set<std::string> used;
  collect_atoms(f, used);
  for (const auto& a : used)
    if (!m.atoms.contains(a)) throw Error(ErrorCode::UnknownAtom, "undeclared atom '" + a + "'");
}

bool eval_at(const Model& m, const WorldId& w, const Formula& f);

// [o1][o2]...[ok] phi: ok is the first update, o1 the last.
bool eval_dynamic_chain(const Model& m, const WorldId& w, const Formula& f) {
  std::vector<const Formula*> chain;
  const Formula* body = &f;
  while (body->is_dynamic()) {
    chain.push_back(body);
    body = &body->body();
  }
  Model current = m;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    const Formula& op = **it;
    if (op.kind() == Formula::Kind::DynExp)
      current = learn_from_explanation(current, w, op.explanation());
    else
      current = learn_from_feedback(current, op.feedback(), w);
  }
  return eval_at(current, w, *body);
}

bool eval_at(const Model& m, const WorldId& w, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Prop:
      return eval_prop(m, w, f.prop_body());
    case Formula::Kind::Box:
      for (const auto& u : m.successors(f.agent(), w))
        if (!eval_at(m, u, f.body())) return false;
      return true;
    case Formula::Kind::Just:
      require_atoms(m, f.prop_body());
      return m.has_evidence(f.agent(), f.term(), w, f.prop_body());
    case Formula::Kind::Triangle:
      require_atoms(m, f.prop_body());
      return can_justify(m, w, f.agent(), f.prop_body()).has_value();
    case Formula::Kind::DynExp:
    case Formula::Kind::DynFb:
      return eval_dynamic_chain(m, w, f);
    case Formula::Kind::Implies:
      return !eval_at(m, w, f.lhs()) || eval_at(m, w, f.rhs());
  }
  return false;
}

}  // namespace

bool eval(const Model& m, const WorldId& w, const Formula& f) {
  require_world(m, w);
  return eval_at(m, w, f);
}

bool eval(const Model& m, const WorldId& w, const PropFormula& f) {
  require_world(m, w);
  return eval_prop(m, w, f);
}

std::optional<Term> can_justify(const Model& m, const WorldId& w, Agent i, const PropFormula& p) {
  for (const auto& [t, fs] : m.evidence_at(i, w))
    if (t.is_ground() && fs.contains(p)) return t;
  return std::nullopt;
}

ValidityReport check_validity_samples(const Model& m) {
  ValidityReport report;
  for (Agent i : {Agent::Explainer, Agent::Explainee}) {
    const std::string idx = std::to_string(index_of(i));
    for (const auto& [w, entries] : m.evidence[slot_of(i)]) {
      for (const auto& [t, fs] : entries) {
        if (!t.is_ground()) continue;
        for (const auto& f : fs) {
          ++report.instances;
          const auto just = Formula::just(t, i, f);
          const auto belief = Formula::box(i, Formula::prop(f));
          const std::string where = " at " + w;
          if (!eval(m, w, Formula::implies(just, belief)))
            report.jyb_failures.push_back(print(Formula::implies(just, belief)) + where);
          if (!eval(m, w, Formula::implies(just, Formula::prop(f))))
            report.factivity_failures.push_back(print(Formula::implies(just, Formula::prop(f))) + where);
          // Reflexivity instance at every world, not just where the entry lives.
          for (const auto& u : m.worlds)
            if (!eval(m, u, Formula::implies(belief, Formula::prop(f))))
              report.reflexivity_failures.push_back(print(Formula::implies(belief, Formula::prop(f))) + " at " + u);
        }
      }
      // Closure under application: (F -> G) under s and F under t without G under s.t.
      for (const auto& [s, s_fs] : entries)
        for (const auto& imp : s_fs) {
          if (!imp.is_implication()) continue;
          for (const auto& [t, t_fs] : entries)
            if (t_fs.contains(imp.antecedent()) &&
                !m.has_evidence(i, Term::apply(s, t), w, imp.consequent()))
              report.closure_counterexamples.push_back({i, w, s, t, imp.antecedent(), imp.consequent()});
        }
    }
  }
  return report;
}

}  // namespace xconv
