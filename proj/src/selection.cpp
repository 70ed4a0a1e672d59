#include "xconv/selection.hpp"

#include <cstdlib>
#include <map>
#include <string>

#include "xconv/derivation.hpp"
#include "xconv/dynamics.hpp"
#include "xconv/error.hpp"
#include "xconv/eval.hpp"
#include "xconv/formula.hpp"

namespace xconv {

SearchBounds SearchBounds::from_env() { return from_env(SearchBounds{}); }

SearchBounds SearchBounds::from_env(SearchBounds base) {
  if (const char* v = std::getenv("XCONV_MAX_NODES"); v != nullptr && *v != '\0') {
    try {
      base.max_nodes = std::stoul(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::Parse, std::string("XCONV_MAX_NODES is not a number: ") + v);
    }
  }
  return base;
}

void validate_bounds(const SearchBounds& b) {
  if (b.max_depth < 1 || b.max_nodes < 1)
    throw Error(ErrorCode::InvalidExplanation, "search bounds must be at least 1");
}

namespace {

bool believes_explainee_cannot(const Model& m, const WorldId& w, const PropFormula& p) {
  return eval(m, w, Formula::box(Agent::Explainer, Formula::negation(Formula::triangle(Agent::Explainee, p))));
}

bool believes_explainee_can(const Model& m, const WorldId& w, const PropFormula& p) {
  return eval(m, w, Formula::box(Agent::Explainer, Formula::triangle(Agent::Explainee, p)));
}

PropFormula step_of(const Explanation& e, const PropFormula& q) { return curried(*premises_of(e, q), q); }

struct Rule {
  std::vector<PropFormula> premises;
  friend auto operator<=>(const Rule&, const Rule&) = default;
};

class Enumerator {
 public:
  Enumerator(const Model& m, const WorldId& w, const SearchBounds& b) : m_(m), w_(w), bounds_(b) {
    for (const auto& [t, fs] : m.evidence_at(Agent::Explainer, w)) {
      if (!t.is_ground()) continue;
      for (const auto& f : fs) {
        auto reading = uncurry(f);
        if (!reading.premises.empty()) rules_[reading.goal].insert(Rule{std::move(reading.premises)});
      }
    }
  }

  std::vector<Explanation> trees(const PropFormula& claim) {
    std::set<PropFormula> path{claim};
    return expand(claim, bounds_.max_depth, path, bounds_.max_nodes, true);
  }

  bool complete() const { return complete_; }

 private:
  struct Option {
    Explanation tree;
    std::set<PropFormula> formulas;
    std::size_t size;
  };

  std::vector<Explanation> expand(const PropFormula& g, std::size_t depth_left, std::set<PropFormula>& path,
                                  std::size_t budget, bool root) {
    std::vector<Explanation> out;
    if (!root && can_justify(m_, w_, Agent::Explainer, g)) out.push_back(Explanation::leaf(g));
    auto it = rules_.find(g);
    if (it == rules_.end()) return out;
    for (const auto& rule : it->second) {
      if (!fresh(rule.premises, path)) continue;
      const std::size_t k = rule.premises.size();
      if (depth_left == 0 || budget < 1 + k) {
        complete_ = false;
        continue;
      }
      std::vector<std::vector<Option>> per_child;
      bool dead = false;
      for (const auto& p : rule.premises) {
        path.insert(p);
        auto subtrees = expand(p, depth_left - 1, path, budget - k, false);
        path.erase(p);
        if (subtrees.empty()) {
          dead = true;
          break;
        }
        std::vector<Option> opts;
        for (auto& t : subtrees) {
          auto fs = post_order(t);
          std::size_t n = fs.size();
          opts.push_back({std::move(t), std::set<PropFormula>(fs.begin(), fs.end()), n});
        }
        per_child.push_back(std::move(opts));
      }
      if (dead) continue;
      std::vector<Explanation> chosen;
      std::set<PropFormula> used;
      combine(g, per_child, 0, chosen, used, 1, budget, out);
    }
    return out;
  }

  static bool fresh(const std::vector<PropFormula>& premises, const std::set<PropFormula>& path) {
    std::set<PropFormula> seen;
    for (const auto& p : premises)
      if (path.contains(p) || !seen.insert(p).second) return false;
    return true;
  }

  void combine(const PropFormula& g, const std::vector<std::vector<Option>>& per_child, std::size_t idx,
               std::vector<Explanation>& chosen, std::set<PropFormula>& used, std::size_t size, std::size_t budget,
               std::vector<Explanation>& out) {
    if (idx == per_child.size()) {
      out.push_back(Explanation{g, chosen});
      return;
    }
    const std::size_t rest = per_child.size() - idx - 1;  // each later child needs one node at least
    for (const auto& opt : per_child[idx]) {
      if (size + opt.size + rest > budget) {
        complete_ = false;
        continue;
      }
      bool clash = false;
      for (const auto& f : opt.formulas)
        if (used.contains(f)) {
          clash = true;
          break;
        }
      if (clash) continue;
      used.insert(opt.formulas.begin(), opt.formulas.end());
      chosen.push_back(opt.tree);
      combine(g, per_child, idx + 1, chosen, used, size + opt.size, budget, out);
      chosen.pop_back();
      for (const auto& f : opt.formulas) used.erase(f);
    }
  }

  const Model& m_;
  const WorldId& w_;
  SearchBounds bounds_;
  std::map<PropFormula, std::set<Rule>> rules_;
  bool complete_ = true;
};

}  // namespace

bool is_available(const Model& m, const WorldId& w, const Explanation& e) {
  require_world(m, w);
  try {
    validate_explanation(e);
  } catch (const Error&) {
    return false;
  }
  const auto hyps = hypotheses(e);
  const auto ders = derived(e);
  for (const auto& p : hyps)
    if (!can_justify(m, w, Agent::Explainer, p)) return false;
  for (const auto& q : ders) {
    const Term s = derive_term(m, w, e, q, Agent::Explainer);
    if (!s.is_ground() || !m.has_evidence(Agent::Explainer, s, w, q)) return false;
  }
  for (const auto& p : hyps)
    if (believes_explainee_cannot(m, w, p)) return false;
  for (const auto& q : ders)
    if (believes_explainee_cannot(m, w, step_of(e, q))) return false;
  return true;
}

Enumeration enumerate_available(const Model& m, const WorldId& w, const std::set<PropFormula>& hyps,
                                const PropFormula& claim, const SearchBounds& b) {
  require_world(m, w);
  validate_bounds(b);
  Enumerator en(m, w, b);
  Enumeration out;
  for (auto& e : en.trees(claim)) {
    if (!hyps.empty() && hypotheses(e) != hyps) continue;
    if (is_available(m, w, e)) out.explanations.insert(std::move(e));
  }
  out.complete = en.complete();
  return out;
}

std::set<PropFormula> uncertainty_set(const Model& m, const WorldId& w, const Explanation& e) {
  std::set<PropFormula> out;
  for (const auto& p : hypotheses(e))
    if (!believes_explainee_can(m, w, p)) out.insert(p);
  for (const auto& q : derived(e))
    if (!believes_explainee_can(m, w, step_of(e, q))) out.insert(q);
  return out;
}

std::weak_ordering prefer(const Model& m, const WorldId& w, const Explanation& e1, const Explanation& e2) {
  const auto n1 = uncertainty_set(m, w, e1).size();
  const auto n2 = uncertainty_set(m, w, e2).size();
  if (n1 != n2) return n1 < n2 ? std::weak_ordering::greater : std::weak_ordering::less;
  const auto d1 = derived(e1).size();
  const auto d2 = derived(e2).size();
  if (d1 != d2) return d1 < d2 ? std::weak_ordering::greater : std::weak_ordering::less;
  return std::weak_ordering::equivalent;
}

std::set<PropFormula> why_set(const FeedbackRecord& fb) {
  validate_feedback(fb);
  std::set<PropFormula> out;
  for (const auto& f : post_order(fb.exp)) {
    if (fb.bit_of(f)) continue;
    const auto* node = find_node(fb.exp, f);
    bool premises_ok = true;
    for (const auto& p : node->premises) premises_ok = premises_ok && fb.bit_of(p.claim);
    if (node->is_leaf() || premises_ok) out.insert(f);
  }
  return out;
}

ConversationHistory ConversationHistory::prefix(std::size_t k) const {
  ConversationHistory h{question, {}};
  h.rounds.assign(rounds.begin(), rounds.begin() + static_cast<std::ptrdiff_t>(std::min(k, rounds.size())));
  return h;
}

Model apply_history(const Model& m0, const WorldId& w, const ConversationHistory& h) {
  Model m = m0;
  for (const auto& r : h.rounds) {
    m = learn_from_explanation(m, w, r.explanation);
    m = learn_from_feedback(m, r.feedback, w);
  }
  return m;
}

Selection most_preferred_in(const Model& updated, const WorldId& w, const PropFormula& question,
                            const std::optional<Round>& last, const SearchBounds& b) {
  Selection sel;
  std::set<Explanation> x;
  auto absorb = [&](Enumeration en) {
    sel.complete = sel.complete && en.complete;
    x.merge(en.explanations);
  };
  absorb(enumerate_available(updated, w, {}, question, b));
  if (last) {
    for (const auto& g : why_set(last->feedback)) {
      const auto pr = *premises_of(last->explanation, g);
      absorb(enumerate_available(updated, w, std::set<PropFormula>(pr.begin(), pr.end()), g, b));
    }
  }
  sel.candidates = x.size();
  if (x.empty()) return sel;

  // Maxima: smallest (|N|, |D|).
  std::map<Explanation, std::pair<std::size_t, std::size_t>> keys;
  std::pair<std::size_t, std::size_t> best{SIZE_MAX, SIZE_MAX};
  for (const auto& e : x) {
    auto key = std::make_pair(uncertainty_set(updated, w, e).size(), derived(e).size());
    keys.emplace(e, key);
    best = std::min(best, key);
  }
  for (const auto& [e, key] : keys)
    if (key == best) sel.best.insert(e);
  return sel;
}

Selection most_preferred(const Model& m0, const WorldId& w, const ConversationHistory& h, const SearchBounds& b) {
  const Model updated = apply_history(m0, w, h);
  std::optional<Round> last;
  if (!h.rounds.empty()) last = h.rounds.back();
  return most_preferred_in(updated, w, h.question, last, b);
}

}  // namespace xconv
