#include "support.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "xconv/derivation.hpp"
#include "xconv/document.hpp"
#include "xconv/text.hpp"

#ifndef XCONV_DATA_DIR
#error "XCONV_DATA_DIR must point at the fixture directory"
#endif

namespace xconv::testing {

std::string fixture_path(const std::string& name) { return std::string(XCONV_DATA_DIR) + "/" + name; }

Model fixture(const std::string& name) { return load_model_file(fixture_path(name)); }

PropFormula atom(const std::string& name) { return PropFormula::atom(name); }
PropFormula imp(const PropFormula& a, const PropFormula& b) { return PropFormula::implies(a, b); }
Term constant(const std::string& name) { return Term::constant(name); }
Term app(const Term& f, const Term& a) { return Term::apply(f, a); }

namespace {

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& xs) {
  return xs[std::uniform_int_distribution<std::size_t>(0, xs.size() - 1)(rng)];
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Explanation grow(Rng& rng, std::vector<std::string>& pool, const PropFormula& root, int depth, bool force_step) {
  Explanation e = Explanation::leaf(root);
  if (depth <= 0 || pool.empty() || !(force_step || coin(rng, 0.6))) return e;
  const std::size_t fanout = std::min<std::size_t>(pool.size(), coin(rng, 0.7) ? 1 : 2);
  for (std::size_t k = 0; k < fanout && !pool.empty(); ++k) {
    const auto name = pool.back();
    pool.pop_back();
    e.premises.push_back(grow(rng, pool, atom(name), depth - 1, false));
  }
  return e;
}

Explanation explanation_with_root(Rng& rng, std::vector<std::string> pool, const std::string& root, int max_depth) {
  std::erase(pool, root);
  std::shuffle(pool.begin(), pool.end(), rng);
  return grow(rng, pool, atom(root), max_depth, true);
}

void parts(const Explanation& e, std::vector<PropFormula>& out) {
  if (e.is_leaf()) {
    out.push_back(e.claim);
    return;
  }
  out.push_back(curried(premise_claims(e), e.claim));
  for (const auto& p : e.premises) parts(p, out);
}

std::vector<PropFormula> parts(const Explanation& e) {
  std::vector<PropFormula> out;
  parts(e, out);
  return out;
}

Model skeleton(Rng& rng, std::size_t nworlds, const std::vector<std::string>& atoms) {
  Model m;
  for (std::size_t k = 0; k < nworlds; ++k) m.worlds.insert("w" + std::to_string(k));
  m.atoms.insert(atoms.begin(), atoms.end());
  for (auto& rel : m.relations) {
    for (const auto& u : m.worlds)
      for (const auto& v : m.worlds)
        if (coin(rng, 0.3)) rel.insert({u, v});
    rel = reflexive_transitive_closure(rel, m.worlds);
  }
  return m;
}

}  // namespace

std::vector<std::string> atom_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back("p" + std::to_string(k));
  return out;
}

PropFormula random_prop(Rng& rng, const std::vector<std::string>& atoms, int depth) {
  if (depth <= 0 || coin(rng, 0.35)) return coin(rng, 0.08) ? PropFormula::falsum() : atom(pick(rng, atoms));
  return imp(random_prop(rng, atoms, depth - 1), random_prop(rng, atoms, depth - 1));
}

Term random_term(Rng& rng, const std::vector<std::string>& atoms, int depth, bool allow_vars) {
  if (depth <= 0 || coin(rng, 0.4)) {
    if (allow_vars && coin(rng, 0.3)) {
      std::vector<PropFormula> premises;
      for (std::size_t k = uniform(rng, 0, 2); k > 0; --k) premises.push_back(random_prop(rng, atoms, 1));
      return Term::variable(random_prop(rng, atoms, 2), premises);
    }
    static const std::vector<std::string> names = {"t", "s", "r", "dAB", "c_sick", "k0", "k1", "x", "xy"};
    return constant(pick(rng, names));
  }
  return app(random_term(rng, atoms, depth - 1, allow_vars), random_term(rng, atoms, depth - 1, allow_vars));
}

Explanation random_explanation(Rng& rng, const std::vector<std::string>& atoms, int max_depth) {
  return explanation_with_root(rng, atoms, pick(rng, atoms), max_depth);
}

BitTree random_monotone_bits(Rng& rng, const Explanation& e) {
  BitTree b;
  bool all = true;
  for (const auto& p : e.premises) {
    b.premises.push_back(random_monotone_bits(rng, p));
    all = all && b.premises.back().bit;
  }
  b.bit = all && coin(rng, 0.6);
  return b;
}

Model random_model(Rng& rng, const ModelShape& shape, const Explanation* hint) {
  auto names = atom_names(shape.atoms);
  std::vector<PropFormula> candidates;
  if (hint) {
    std::set<std::string> used;
    for (const auto& f : post_order(*hint)) collect_atoms(f, used);
    for (const auto& a : used)
      if (std::find(names.begin(), names.end(), a) == names.end()) names.push_back(a);
    candidates = parts(*hint);
  }
  Model m = skeleton(rng, uniform(rng, 1, shape.max_worlds), names);
  for (const auto& a : names)
    for (const auto& w : m.worlds)
      if (coin(rng, shape.truth_bias)) m.valuation[a].insert(w);

  static const std::vector<std::string> consts = {"k0", "k1", "k2", "k3", "k4"};
  const std::vector<WorldId> worlds(m.worlds.begin(), m.worlds.end());
  const std::size_t wanted = uniform(rng, 0, shape.max_entries);
  for (std::size_t tries = 0, added = 0; added < wanted && tries < 8 * shape.max_entries; ++tries) {
    const Agent i = coin(rng, 0.5) ? Agent::Explainer : Agent::Explainee;
    const WorldId& w = pick(rng, worlds);
    const PropFormula f = (!candidates.empty() && coin(rng, 0.7)) ? pick(rng, candidates) : random_prop(rng, names, 2);
    Term t = constant(pick(rng, consts));
    if (coin(rng, 0.2)) t = app(t, constant(pick(rng, consts)));
    bool ok = true;
    for (const auto& u : oracle::successors(m, i, w)) ok = ok && oracle::truth(m, u, f);
    if (!ok) continue;
    if (m.add_evidence(i, t, w, f)) ++added;
  }
  return m;
}

Model with_explainer_steps(Model m, const WorldId& w, const Explanation& e) {
  for (const auto& f : post_order(e)) {
    const auto* node = find_node(e, f);
    if (node->is_leaf()) continue;
    const Term t = oracle::derived_term(m, Agent::Explainer, w, *node);
    if (!oracle::ground(t)) continue;
    bool ok = true;
    for (const auto& u : oracle::successors(m, Agent::Explainer, w)) ok = ok && oracle::truth(m, u, f);
    if (ok) m.add_evidence(Agent::Explainer, t, w, f);
  }
  return m;
}

Model with_learning_history(Rng& rng, Model m, int rounds) {
  std::vector<std::string> names(m.atoms.begin(), m.atoms.end());
  const std::vector<WorldId> worlds(m.worlds.begin(), m.worlds.end());
  for (int k = 0; k < rounds; ++k) {
    const Explanation e = random_explanation(rng, names, 2);
    m = learn_from_explanation(m, pick(rng, worlds), e);
    audit().check(m, "learning history");
  }
  return m;
}

PlantedInstance planted_instance(Rng& rng) {
  const auto names = atom_names(uniform(rng, 5, 8));
  Model m = skeleton(rng, uniform(rng, 2, 4), names);
  for (const auto& a : names) m.valuation[a] = m.worlds;
  // The explainer cannot tell the worlds apart, so every part is uncertain
  // until feedback arrives.
  for (const auto& u : m.worlds)
    for (const auto& v : m.worlds) m.relations[0].insert({u, v});
  const WorldId actual = "w0";

  const auto claim_name = pick(rng, names);
  const Explanation planted = explanation_with_root(rng, names, claim_name, static_cast<int>(uniform(rng, 1, 3)));
  std::vector<Explanation> all = {planted};
  for (std::size_t k = uniform(rng, 1, 4); k > 0; --k)
    all.push_back(explanation_with_root(rng, names, claim_name, static_cast<int>(uniform(rng, 1, 3))));

  // Constants are named after the part so equal parts share a witness.
  std::map<PropFormula, Term> witness;
  auto term_for = [&](const PropFormula& f) {
    auto it = witness.find(f);
    if (it == witness.end()) it = witness.emplace(f, constant("k" + std::to_string(witness.size()))).first;
    return it->second;
  };
  for (const auto& e : all)
    for (const auto& f : parts(e)) m.add_evidence(Agent::Explainer, term_for(f), actual, f);
  for (const auto& e : all)
    for (const auto& f : derived(e)) m.add_evidence(Agent::Explainer, oracle::derived_term(m, Agent::Explainer, actual, *find_node(e, f)), actual, f);

  for (const auto& f : parts(planted)) m.add_evidence(Agent::Explainee, term_for(f), actual, f);
  for (const auto& w : m.worlds)
    for (std::size_t k = 0; k < all.size(); ++k)
      for (const auto& f : parts(all[k]))
        if (coin(rng, 0.5)) m.add_evidence(Agent::Explainee, term_for(f), w, f);
  return {std::move(m), actual, atom(claim_name), planted};
}

namespace oracle {

bool ground(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Const: return true;
    case Term::Kind::Var: return false;
    case Term::Kind::App: return ground(t.fn()) && ground(t.arg());
  }
  return false;
}

std::vector<WorldId> successors(const Model& m, Agent i, const WorldId& w) {
  std::vector<WorldId> out;
  for (const auto& u : m.worlds)
    if (m.relations[slot_of(i)].contains({w, u})) out.push_back(u);
  return out;
}

bool truth(const Model& m, const WorldId& w, const PropFormula& p) {
  switch (p.kind()) {
    case PropFormula::Kind::Atom: {
      const auto it = m.valuation.find(p.name());
      return it != m.valuation.end() && it->second.contains(w);
    }
    case PropFormula::Kind::Falsum: return false;
    case PropFormula::Kind::Implies: return !truth(m, w, p.antecedent()) || truth(m, w, p.consequent());
  }
  return false;
}

std::optional<Term> least_witness(const Model& m, Agent i, const WorldId& w, const PropFormula& p) {
  std::optional<Term> best;
  const auto ev = m.evidence[slot_of(i)].find(w);
  if (ev == m.evidence[slot_of(i)].end()) return best;
  for (const auto& [t, fs] : ev->second)
    if (ground(t) && fs.contains(p) && (!best || t < *best)) best = t;
  return best;
}

bool justifies(const Model& m, Agent i, const WorldId& w, const PropFormula& p) {
  return least_witness(m, i, w, p).has_value();
}

bool box_triangle(const Model& m, const WorldId& w, const PropFormula& p) {
  for (const auto& u : successors(m, Agent::Explainer, w))
    if (!justifies(m, Agent::Explainee, u, p)) return false;
  return true;
}

bool box_not_triangle(const Model& m, const WorldId& w, const PropFormula& p) {
  for (const auto& u : successors(m, Agent::Explainer, w))
    if (justifies(m, Agent::Explainee, u, p)) return false;
  return true;
}

Term derived_term(const Model& m, Agent i, const WorldId& w, const Explanation& node) {
  std::vector<PropFormula> premises;
  for (const auto& p : node.premises) premises.push_back(p.claim);
  const auto d = least_witness(m, i, w, curried(premises, node.claim));
  if (!d) return Term::variable(node.claim, premises);
  Term t = *d;
  for (const auto& p : node.premises) {
    if (p.is_leaf()) {
      const auto s = least_witness(m, i, w, p.claim);
      t = app(t, s ? *s : Term::variable(p.claim));
    } else {
      t = app(t, derived_term(m, i, w, p));
    }
  }
  return t;
}

bool understands(const Model& m, const WorldId& w, const Explanation& e) {
  return ground(derived_term(m, Agent::Explainee, w, e));
}

namespace {

void each_node(const Explanation& e, const std::function<void(const Explanation&)>& f) {
  f(e);
  for (const auto& p : e.premises) each_node(p, f);
}

}  // namespace

bool available(const Model& m, const WorldId& w, const Explanation& e) {
  bool ok = true;
  each_node(e, [&](const Explanation& n) {
    if (n.is_leaf()) {
      ok = ok && justifies(m, Agent::Explainer, w, n.claim) && !box_not_triangle(m, w, n.claim);
    } else {
      const Term s = derived_term(m, Agent::Explainer, w, n);
      ok = ok && ground(s) && m.has_evidence(Agent::Explainer, s, w, n.claim) &&
           !box_not_triangle(m, w, curried(premise_claims(n), n.claim));
    }
  });
  return ok;
}

std::set<PropFormula> uncertainty(const Model& m, const WorldId& w, const Explanation& e) {
  std::set<PropFormula> out;
  each_node(e, [&](const Explanation& n) {
    const PropFormula part = n.is_leaf() ? n.claim : curried(premise_claims(n), n.claim);
    if (!box_triangle(m, w, part)) out.insert(n.claim);
  });
  return out;
}

bool strictly_better(const Model& m, const WorldId& w, const Explanation& e1, const Explanation& e2) {
  const auto n1 = uncertainty(m, w, e1).size(), n2 = uncertainty(m, w, e2).size();
  if (n1 != n2) return n1 < n2;
  return derived(e1).size() < derived(e2).size();
}

std::set<Explanation> maxima(const Model& m, const WorldId& w, const std::set<Explanation>& xs) {
  std::set<Explanation> out;
  for (const auto& a : xs) {
    bool beaten = false;
    for (const auto& b : xs) beaten = beaten || strictly_better(m, w, b, a);
    if (!beaten) out.insert(a);
  }
  return out;
}

Model restrict(const Model& m, const std::set<WorldId>& x) {
  Model out;
  out.atoms = m.atoms;
  out.worlds = x;
  for (std::size_t k = 0; k < 2; ++k) {
    for (const auto& u : x)
      for (const auto& v : x)
        if (m.relations[k].contains({u, v})) out.relations[k].insert({u, v});
    for (const auto& u : x) {
      const auto it = m.evidence[k].find(u);
      if (it != m.evidence[k].end()) out.evidence[k][u] = it->second;
    }
  }
  for (const auto& a : m.atoms)
    for (const auto& u : x)
      if (truth(m, u, atom(a))) out.valuation[a].insert(u);
  return out;
}

namespace {

void trees(const std::vector<PropFormula>& universe, const PropFormula& f, std::size_t depth, std::size_t fanout,
           std::set<PropFormula>& path, std::vector<Explanation>& out) {
  out.push_back(Explanation::leaf(f));
  if (depth == 0) return;
  path.insert(f);
  std::vector<PropFormula> free;
  for (const auto& g : universe)
    if (!path.contains(g)) free.push_back(g);
  // children: ordered sequences of distinct formulas, each with its subtrees
  std::function<void(std::vector<PropFormula>&)> sequences = [&](std::vector<PropFormula>& seq) {
    if (!seq.empty()) {
      std::vector<std::vector<Explanation>> options;
      for (const auto& c : seq) {
        std::vector<Explanation> sub;
        trees(universe, c, depth - 1, fanout, path, sub);
        options.push_back(std::move(sub));
      }
      std::vector<std::size_t> idx(seq.size(), 0);
      while (true) {
        Explanation e{f, {}};
        for (std::size_t k = 0; k < seq.size(); ++k) e.premises.push_back(options[k][idx[k]]);
        out.push_back(std::move(e));
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == options[k].size()) idx[k++] = 0;
        if (k == idx.size()) break;
      }
    }
    if (seq.size() == fanout) return;
    for (const auto& g : free) {
      if (std::find(seq.begin(), seq.end(), g) != seq.end()) continue;
      seq.push_back(g);
      sequences(seq);
      seq.pop_back();
    }
  };
  std::vector<PropFormula> seq;
  sequences(seq);
  path.erase(f);
}

}  // namespace

std::vector<Explanation> all_trees(const std::vector<PropFormula>& universe, const PropFormula& claim,
                                   std::size_t max_depth, std::size_t max_fanout) {
  std::vector<Explanation> out;
  std::set<PropFormula> path;
  trees(universe, claim, max_depth, max_fanout, path, out);
  return out;
}

}  // namespace oracle

void UpdateAudit::check(const Model& m, const std::string& where) {
  ++checked;
  const auto v = validate_model(m);
  if (!v.empty()) failures.push_back(where + ": " + v.front().message);
}

UpdateAudit& audit() {
  static UpdateAudit instance;
  return instance;
}

}  // namespace xconv::testing
