#include <algorithm>

#include "doctest.h"
#include "support.hpp"
#include "xconv/derivation.hpp"
#include "xconv/dynamics.hpp"
#include "xconv/error.hpp"
#include "xconv/eval.hpp"
#include "xconv/text.hpp"

using namespace xconv;
using namespace xconv::testing;

TEST_CASE("learning adds derived terms and substitutes the claim's variable") {
  const Model m = fixture("example3.json");
  const auto e1 = parse_explanation("a / b / c");
  const auto e2 = parse_explanation("a / d / b");

  TraceStep trace;
  const Model m1 = learn_from_explanation(m, "w0", e1, &trace);
  CHECK(m1.has_evidence(Agent::Explainee, parse_term("dBC . x{b | a}"), "w0", atom("c")));
  CHECK(m1.has_evidence(Agent::Explainee, parse_term("x{b | a}"), "w0", atom("b")));
  CHECK(trace.added.size() == 2);
  CHECK(validate_model(m1).empty());

  const Model m2 = learn_from_explanation(m1, "w0", e2);
  CHECK(m2.has_evidence(Agent::Explainee, parse_term("dDB . (dAD . tA)"), "w0", atom("b")));
  CHECK(m2.has_evidence(Agent::Explainee, parse_term("dBC . (dDB . (dAD . tA))"), "w0", atom("c")));
  CHECK(m2.has_evidence(Agent::Explainee, parse_term("dDB . (dAD . tA)"), "w0", atom("b")));
  CHECK(validate_model(m2).empty());

  const auto q = Formula::after_explanation(
      Agent::Explainee, e2,
      Formula::after_explanation(Agent::Explainee, e1, parse_formula("[dBC . (dDB . (dAD . tA))]2 c")));
  CHECK(eval(m, "w0", q));
  // The other order does not connect the two explanations.
  const auto swapped = Formula::after_explanation(
      Agent::Explainee, e1,
      Formula::after_explanation(Agent::Explainee, e2, parse_formula("[dBC . (dDB . (dAD . tA))]2 c")));
  CHECK_FALSE(eval(m, "w0", swapped));
}

TEST_CASE("variables with other premise sets are left alone") {
  Model m = fixture("example3.json");
  m.add_evidence(Agent::Explainee, app(constant("k"), Term::variable(atom("b"), {atom("c")})), "w0", atom("a"));
  m.add_evidence(Agent::Explainee, app(constant("k"), Term::variable(atom("b"))), "w0", atom("d"));
  const Model out = learn_from_explanation(m, "w0", parse_explanation("a / d / b"));
  const Term r = parse_term("dDB . (dAD . tA)");
  CHECK(out.has_evidence(Agent::Explainee, app(constant("k"), r), "w0", atom("d")));
  CHECK_FALSE(out.has_evidence(Agent::Explainee, app(constant("k"), r), "w0", atom("a")));
}

TEST_CASE("learning leaves agent 1, relations and other worlds untouched") {
  Rng rng(9);
  for (int k = 0; k < 200; ++k) {
    const auto e = random_explanation(rng, atom_names(5), 3);
    const Model m = with_learning_history(rng, random_model(rng, {}, &e), 1);
    for (const auto& w : m.worlds) {
      const Model out = learn_from_explanation(m, w, e);
      CHECK(out.relations == m.relations);
      CHECK(out.evidence[0] == m.evidence[0]);
      CHECK(out.worlds == m.worlds);
      for (const auto& u : m.worlds)
        if (u != w) CHECK(out.evidence_at(Agent::Explainee, u) == m.evidence_at(Agent::Explainee, u));
      // evidence only grows
      for (const auto& [t, fs] : m.evidence_at(Agent::Explainee, w))
        for (const auto& f : fs) CHECK(out.has_evidence(Agent::Explainee, t, w, f));
      CHECK(validate_model(out).empty());
    }
  }
}

TEST_CASE("hearing an already understood explanation adds nothing new to belief") {
  const Model m = fixture("example1.json");
  const auto e = parse_explanation("a / b / c");
  const Model out = learn_from_explanation(m, "w0", e);
  CHECK(out.has_evidence(Agent::Explainee, parse_term("dBC . (dAB . tA)"), "w0", atom("c")));
  CHECK(out.relations == m.relations);
}

TEST_CASE("update by worlds matches direct restriction") {
  Rng rng(21);
  for (int k = 0; k < 200; ++k) {
    const Model m = random_model(rng, {});
    std::set<WorldId> x;
    for (const auto& w : m.worlds)
      if (rng() % 2) x.insert(w);
    if (x.empty()) {
      CHECK_THROWS_AS(update_by_worlds(m, Agent::Explainer, x), Error);
      continue;
    }
    const Model out = update_by_worlds(m, Agent::Explainer, x);
    CHECK(out == oracle::restrict(m, x));
    CHECK(validate_model(out).empty());
  }
  const Model m = fixture("example1.json");
  CHECK_THROWS_AS(update_by_worlds(m, Agent::Explainer, {"nowhere"}), Error);
}

TEST_CASE("feedback cases") {
  const auto e = parse_explanation("[a, b] / c / d");
  const FeedbackRecord fb{e, parse_bits("[1, 0] / 0 / 0")};
  CHECK(classify(fb, atom("a")) == FeedbackCase::HypothesisJustified);
  CHECK(classify(fb, atom("b")) == FeedbackCase::HypothesisUnjustified);
  CHECK(classify(fb, atom("c")) == FeedbackCase::Ignored);
  CHECK(classify(fb, atom("d")) == FeedbackCase::Ignored);
  const FeedbackRecord fb2{e, parse_bits("[1, 1] / 1 / 0")};
  CHECK(classify(fb2, atom("c")) == FeedbackCase::StepJustified);
  CHECK(classify(fb2, atom("d")) == FeedbackCase::StepUnjustified);
}

TEST_CASE("chatbot feedback 1/0/0 leaves only the actual world") {
  const Model m = fixture("chatbot.json");
  const auto e = parse_explanation("sick / fluid_loss / drink_water");
  const Model heard = learn_from_explanation(m, "w0", e);
  TraceStep trace;
  const Model out = learn_from_feedback(heard, {e, parse_bits("1/0/0")}, WorldId("w0"), &trace);
  CHECK(out.worlds == std::set<WorldId>{"w0"});
  CHECK(trace.removed_worlds == std::vector<WorldId>{"w1", "w2"});
  CHECK(eval(out, "w0", parse_formula("B1 T2 sick")));
  CHECK(eval(out, "w0", parse_formula("B1 ~T2 (sick -> fluid_loss)")));
  CHECK(eval(heard, "w0",
             Formula::after_feedback(Agent::Explainer, {e, parse_bits("1/0/0")},
                                     parse_formula("B1 ~T2 (sick -> fluid_loss)"))));
}

TEST_CASE("untruthful and malformed feedback") {
  const Model m = fixture("chatbot.json");
  const auto e = parse_explanation("sick / fluid_loss / drink_water");
  try {
    learn_from_feedback(m, {e, parse_bits("0/0/0")}, WorldId("w0"));
    FAIL("expected UntruthfulFeedback");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::UntruthfulFeedback);
  }
  try {
    learn_from_feedback(m, {e, parse_bits("0/1/0")}, std::nullopt);
    FAIL("expected MalformedFeedback");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::MalformedFeedback);
  }
  CHECK_THROWS_AS(learn_from_feedback(m, {e, parse_bits("1/0")}, std::nullopt), Error);
}

TEST_CASE("feedback outcomes hold after the update on random models") {
  Rng rng(33);
  int checked = 0;
  for (int k = 0; k < 300; ++k) {
    const auto e = random_explanation(rng, atom_names(5), 3);
    const Model m = random_model(rng, {}, &e);
    const std::vector<WorldId> ws(m.worlds.begin(), m.worlds.end());
    const WorldId actual = ws[rng() % ws.size()];
    const FeedbackRecord fb = compute_feedback(m, actual, e);
    const Model out = learn_from_feedback(m, fb, actual);
    REQUIRE(out.worlds.contains(actual));
    for (const auto& f : post_order(e)) {
      const auto kind = classify(fb, f);
      const auto* node = find_node(e, f);
      const PropFormula part = node->is_leaf() ? f : curried(premise_claims(*node), f);
      switch (kind) {
        case FeedbackCase::HypothesisJustified:
        case FeedbackCase::StepJustified: CHECK(oracle::box_triangle(out, actual, part)); break;
        case FeedbackCase::HypothesisUnjustified:
        case FeedbackCase::StepUnjustified: CHECK(oracle::box_not_triangle(out, actual, part)); break;
        case FeedbackCase::Ignored: break;
      }
      ++checked;
    }
  }
  CHECK(checked > 300);
}

TEST_CASE("order of the per-node updates does not matter") {
  Rng rng(44);
  for (int k = 0; k < 150; ++k) {
    const auto e = random_explanation(rng, atom_names(5), 3);
    const Model m = random_model(rng, {}, &e);
    const WorldId actual = *m.worlds.begin();
    const FeedbackRecord fb = compute_feedback(m, actual, e);
    auto order = post_order(e);
    std::shuffle(order.begin(), order.end(), rng);
    const Model a = learn_from_feedback_in_order(m, fb, order, actual, nullptr);
    std::shuffle(order.begin(), order.end(), rng);
    const Model b = learn_from_feedback_in_order(m, fb, order, actual, nullptr);
    CHECK(a == b);
    CHECK(a == learn_from_feedback(m, fb, actual));
  }
}

TEST_CASE("replaying a step reproduces it and rejects tampering") {
  const Model m = fixture("chatbot.json");
  const auto e = parse_explanation("sick / fluid_loss / drink_water");
  TraceStep step;
  const Model heard = learn_from_explanation(m, "w0", e, &step);
  CHECK(replay_step(m, step) == heard);
  TraceStep tampered = step;
  tampered.added.pop_back();
  CHECK_THROWS_AS(replay_step(m, tampered), Error);
}
