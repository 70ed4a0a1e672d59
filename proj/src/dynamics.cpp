#include "xconv/dynamics.hpp"

#include <algorithm>

#include "xconv/derivation.hpp"
#include "xconv/error.hpp"
#include "xconv/eval.hpp"
#include "xconv/text.hpp"

namespace xconv {
namespace {

void collect_vars(const Term& t, std::set<Term>& out) {
  if (t.is_ground()) return;
  if (t.is_var()) {
    out.insert(t);
    return;
  }
  collect_vars(t.fn(), out);
  collect_vars(t.arg(), out);
}

bool is_claim_variable(const Term& v, const PropFormula& claim, const std::set<PropFormula>& hyps) {
  if (v.goal() != claim) return false;
  if (v.premises().empty()) return true;
  return std::set<PropFormula>(v.premises().begin(), v.premises().end()) == hyps;
}

// New ground entries must satisfy JYB by construction; anything else is a bug.
void check_new_ground_entries(const Model& m, const std::vector<EvidenceEntry>& added) {
  for (const auto& e : added) {
    if (!e.term.is_ground()) continue;
    for (const auto& u : m.successors(e.agent, e.world))
      if (!eval(m, u, e.formula))
        throw Error(ErrorCode::Internal, "learning produced [" + print(e.term) + "]2 " + print(e.formula) +
                                             " at " + e.world + " although it fails at " + u);
  }
}

}  // namespace

Model learn_from_explanation(const Model& m, const WorldId& w, const Explanation& e, TraceStep* trace) {
  require_world(m, w);
  validate_explanation(e);
  Model out = m;
  std::vector<EvidenceEntry> added;
  auto add = [&](const Term& t, const PropFormula& f) {
    if (out.add_evidence(Agent::Explainee, t, w, f)) added.push_back({Agent::Explainee, t, w, f});
  };

  for (const auto& f : post_order(e)) {
    const auto* node = find_node(e, f);
    if (!node->is_leaf()) add(derive_term(m, w, e, f), f);
  }

  const Term r = derive_term(m, w, e, e.claim);
  const auto hyps = hypotheses(e);
  for (const auto& [s, fs] : m.evidence_at(Agent::Explainee, w)) {
    std::set<Term> vars;
    collect_vars(s, vars);
    for (const auto& x : vars) {
      if (!is_claim_variable(x, e.claim, hyps)) continue;
      const Term replaced = substitute(s, x, r);
      for (const auto& g : fs) add(replaced, g);
    }
  }

  check_new_ground_entries(out, added);
  if (trace) *trace = TraceStep{TraceStep::Kind::Explanation, w, e, std::move(added), {}};
  return out;
}

Model update_by_worlds(const Model& m, Agent /*i*/, const std::set<WorldId>& x) {
  if (x.empty()) throw Error(ErrorCode::EmptyUpdate, "update would remove every world");
  for (const auto& w : x) require_world(m, w);
  // R_i is cut to X x X; the other relation loses exactly the pairs whose
  // endpoints left W, which is the same restriction.
  Model out;
  out.atoms = m.atoms;
  out.worlds = x;
  for (std::size_t k = 0; k < 2; ++k) {
    for (const auto& [u, v] : m.relations[k])
      if (x.contains(u) && x.contains(v)) out.relations[k].insert({u, v});
    for (const auto& [w, entries] : m.evidence[k])
      if (x.contains(w)) out.evidence[k].emplace(w, entries);
  }
  for (const auto& [a, ws] : m.valuation) {
    std::set<WorldId> kept;
    for (const auto& w : ws)
      if (x.contains(w)) kept.insert(w);
    if (!kept.empty()) out.valuation.emplace(a, std::move(kept));
  }
  return out;
}

FeedbackCase classify(const FeedbackRecord& fb, const PropFormula& f) {
  const auto* node = find_node(fb.exp, f);
  if (node == nullptr) throw Error(ErrorCode::MalformedFeedback, print(f) + " is not a node of the explanation");
  const bool bit = fb.bit_of(f);
  if (node->is_leaf()) return bit ? FeedbackCase::HypothesisJustified : FeedbackCase::HypothesisUnjustified;
  if (bit) return FeedbackCase::StepJustified;
  for (const auto& p : node->premises)
    if (!fb.bit_of(p.claim)) return FeedbackCase::Ignored;
  return FeedbackCase::StepUnjustified;
}

std::optional<std::set<WorldId>> feedback_world_set(const Model& m, const FeedbackRecord& fb,
                                                    const PropFormula& f) {
  const auto kind = classify(fb, f);
  if (kind == FeedbackCase::Ignored) return std::nullopt;
  PropFormula target = f;
  if (kind == FeedbackCase::StepJustified || kind == FeedbackCase::StepUnjustified)
    target = curried(*premises_of(fb.exp, f), f);
  const bool want = kind == FeedbackCase::HypothesisJustified || kind == FeedbackCase::StepJustified;
  std::set<WorldId> u;
  for (const auto& w : m.worlds)
    if (can_justify(m, w, Agent::Explainee, target).has_value() == want) u.insert(w);
  return u;
}

Model learn_from_feedback_in_order(const Model& m, const FeedbackRecord& fb, const std::vector<PropFormula>& order,
                                   const std::optional<WorldId>& actual, TraceStep* trace) {
  validate_feedback(fb);
  if (actual) require_world(m, *actual);
  Model out = m;
  for (const auto& f : order) {
    auto u = feedback_world_set(out, fb, f);
    if (!u) continue;
    if (actual && !u->contains(*actual))
      throw Error(ErrorCode::UntruthfulFeedback, "feedback bit " + std::to_string(fb.bit_of(f)) + " on " + print(f) +
                                                     " is false at the actual world " + *actual);
    if (*u == out.worlds) continue;
    out = update_by_worlds(out, Agent::Explainer, *u);
  }
  if (trace) {
    std::vector<WorldId> removed;
    std::set_difference(m.worlds.begin(), m.worlds.end(), out.worlds.begin(), out.worlds.end(),
                        std::back_inserter(removed));
    *trace = TraceStep{TraceStep::Kind::Feedback, actual.value_or(WorldId{}), fb, {}, std::move(removed)};
  }
  return out;
}

Model learn_from_feedback(const Model& m, const FeedbackRecord& fb, const std::optional<WorldId>& actual,
                          TraceStep* trace) {
  return learn_from_feedback_in_order(m, fb, post_order(fb.exp), actual, trace);
}

Model replay_step(const Model& m, const TraceStep& step) {
  TraceStep again;
  Model out;
  if (step.kind == TraceStep::Kind::Explanation) {
    const auto* e = std::get_if<Explanation>(&step.payload);
    if (e == nullptr) throw Error(ErrorCode::TraceMismatch, "explanation step without an explanation");
    out = learn_from_explanation(m, step.world, *e, &again);
  } else {
    const auto* fb = std::get_if<FeedbackRecord>(&step.payload);
    if (fb == nullptr) throw Error(ErrorCode::TraceMismatch, "feedback step without a feedback record");
    std::optional<WorldId> actual;
    if (!step.world.empty()) actual = step.world;
    out = learn_from_feedback(m, *fb, actual, &again);
  }
  if (again != step) throw Error(ErrorCode::TraceMismatch, "replayed update does not match the recorded trace");
  return out;
}

}  // namespace xconv
