#include "doctest.h"
#include "support.hpp"
#include "xconv/document.hpp"
#include "xconv/eval.hpp"
#include "xconv/text.hpp"

using namespace xconv;
using namespace xconv::testing;

namespace {

json chatbot_doc() { return read_json_file(fixture_path("chatbot.json")); }

std::vector<std::string> diagnostics_of(const json& doc, const LoadOptions& opts = {}) {
  try {
    load_model(doc, opts);
  } catch (const ModelLoadError& e) {
    return e.diagnostics();
  }
  return {};
}

bool mentions(const std::vector<std::string>& ds, const std::string& needle) {
  for (const auto& d : ds)
    if (d.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("model documents round-trip and the digest is stable") {
  for (const auto* name : {"chatbot.json", "example1.json", "example3.json", "example4.json"}) {
    const Model m = fixture(name);
    const json doc = model_to_json(m);
    CHECK(load_model(doc) == m);
    CHECK(model_to_json(load_model(json::parse(doc.dump()))) == doc);
    CHECK(model_digest(m) == model_digest(load_model(doc)));
    CHECK(model_digest(m).size() == 64);
  }
  CHECK(model_digest(fixture("chatbot.json")) != model_digest(fixture("example1.json")));
}

TEST_CASE("random models round-trip") {
  Rng rng(12);
  for (int k = 0; k < 100; ++k) {
    const Model m = with_learning_history(rng, random_model(rng, {}), 2);
    CHECK(model_from_json(json::parse(model_to_json(m).dump())) == m);
  }
}

TEST_CASE("relations are closed unless strict") {
  const json doc = read_json_file(fixture_path("unclosed.json"));
  const Model m = load_model(doc);
  CHECK(m.relation(Agent::Explainer).contains({"w0", "w2"}));
  CHECK(m.relation(Agent::Explainee).contains({"w1", "w1"}));
  const auto ds = diagnostics_of(doc, {.strict = true});
  CHECK(mentions(ds, "relations.1"));
  CHECK(mentions(ds, "(w0,w2)"));
}

TEST_CASE("diagnostics are located") {
  json doc = chatbot_doc();
  doc["evidence"][3]["term"] = "c_sf . (";
  CHECK(mentions(diagnostics_of(doc), "evidence[3].term"));

  doc = chatbot_doc();
  doc["evidence"][0]["world"] = "nowhere";
  CHECK(mentions(diagnostics_of(doc), "evidence[0].world"));

  doc = chatbot_doc();
  doc["evidence"][1]["agent"] = 3;
  CHECK(mentions(diagnostics_of(doc), "evidence[1].agent"));

  doc = chatbot_doc();
  doc["version"] = 7;
  CHECK(mentions(diagnostics_of(doc), "version"));

  doc = chatbot_doc();
  doc["relations"]["2"].push_back({"w0", "w9"});
  CHECK(mentions(diagnostics_of(doc), "relations.2"));

  const auto jyb = diagnostics_of(read_json_file(fixture_path("jyb_violation.json")));
  CHECK(mentions(jyb, "justification-yields-belief"));
  CHECK_THROWS_AS(read_json_file(fixture_path("missing.json")), Error);
}

TEST_CASE("explanation, bits and feedback JSON accept both forms") {
  const auto e = parse_explanation("[a, b] / c / d");
  CHECK(explanation_from_json(explanation_to_json(e)) == e);
  CHECK(explanation_from_json(json("[a, b] / c / d")) == e);
  const auto bits = parse_bits("[1, 0] / 0 / 0");
  CHECK(bits_from_json(bits_to_json(bits)) == bits);
  CHECK(bits_from_json(json("[1, 0] / 0 / 0")) == bits);
  CHECK(bits_from_json(json::parse(R"({"bit": true, "premises": []})")) == parse_bits("1"));
  const FeedbackRecord fb{e, bits};
  CHECK(feedback_from_json(feedback_to_json(fb)) == fb);
  CHECK_THROWS_AS(bits_from_json(json::parse(R"({"bit": 2})")), Error);
}

TEST_CASE("structured queries") {
  const Model m = fixture("example3.json");
  const json q = {{"after_explanation", {{"agent", 2}, {"explanation", "a / d / b"}}},
                  {"formula",
                   {{"after_explanation", {{"agent", 2}, {"explanation", "a / b / c"}}},
                    {"formula", "[dBC . (dDB . (dAD . tA))]2 c"}}}};
  CHECK(eval(m, "w0", formula_from_json(q)));
  const json chat = {{"after_feedback",
                      {{"agent", 1}, {"feedback", {{"explanation", "sick / fluid_loss / drink_water"}, {"bits", "1/0/0"}}}}},
                     {"formula", "B1 ~T2 (sick -> fluid_loss)"}};
  CHECK(eval(fixture("chatbot.json"), "w0", formula_from_json(chat)));
  CHECK(formula_from_json(json("a -> b")) == parse_formula("a -> b"));
  CHECK_THROWS_AS(formula_from_json(json::parse(R"({"after_feedback": {"agent": 2, "feedback": {}}, "formula": "a"})")),
                  Error);
}

TEST_CASE("transcripts round-trip through JSON text") {
  const Model m = fixture("chatbot.json");
  SimulatedExplainee driver;
  const auto t = run_conversation(m, "w0", atom("drink_water"), {}, driver, 10);
  const json j = transcript_to_json(t);
  CHECK(j["model_digest"] == model_digest(m));
  CHECK(j["status"] == "JustifiedByExplainee");
  CHECK(j["rounds"].size() == 2);
  const Transcript back = transcript_from_json(json::parse(j.dump()));
  CHECK(back == t);
  CHECK(replay(m, back) == replay(m, t));

  Rng rng(4);
  for (int k = 0; k < 30; ++k) {
    const auto inst = planted_instance(rng);
    const auto u = run_conversation(inst.model, inst.actual, inst.claim, {4, 16}, driver, 20);
    CHECK(transcript_from_json(json::parse(transcript_to_json(u).dump())) == u);
  }
}
