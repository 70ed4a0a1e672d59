#include "xconv/document.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>

#include "xconv/text.hpp"

namespace xconv {
namespace {

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out = "model document rejected:";
  for (const auto& l : lines) out += "\n  " + l;
  return out;
}

/// Collects located diagnostics while walking a document.
class Diagnostics {
 public:
  template <typename F>
  auto at(const std::string& where, F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const Error& e) {
      lines_.push_back(where + ": " + e.what());
    } catch (const json::exception& e) {
      lines_.push_back(where + ": " + e.what());
    }
    return {};
  }

  void add(std::string line) { lines_.push_back(std::move(line)); }
  bool empty() const { return lines_.empty(); }
  const std::vector<std::string>& lines() const { return lines_; }

 private:
  std::vector<std::string> lines_;
};

const json& member(const json& doc, const char* key) {
  if (!doc.contains(key)) throw Error(ErrorCode::Parse, std::string("missing '") + key + "'");
  return doc.at(key);
}

}  // namespace

ModelLoadError::ModelLoadError(std::vector<std::string> diagnostics)
    : Error(ErrorCode::InvalidModel, join_lines(diagnostics)), diagnostics_(std::move(diagnostics)) {}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
}

json model_to_json(const Model& m) {
  json doc;
  doc["version"] = kDocumentVersion;
  doc["atoms"] = m.atoms;
  doc["worlds"] = m.worlds;
  json rel = json::object();
  for (Agent i : {Agent::Explainer, Agent::Explainee}) {
    json edges = json::array();
    for (const auto& [u, v] : m.relation(i)) edges.push_back({u, v});
    rel[std::to_string(index_of(i))] = std::move(edges);
  }
  doc["relations"] = std::move(rel);
  json ev = json::array();
  for (Agent i : {Agent::Explainer, Agent::Explainee})
    for (const auto& [w, entries] : m.evidence[slot_of(i)])
      for (const auto& [t, fs] : entries)
        for (const auto& f : fs)
          ev.push_back({{"agent", index_of(i)}, {"term", print(t)}, {"world", w}, {"formula", print(f)}});
  doc["evidence"] = std::move(ev);
  json val = json::object();
  for (const auto& [a, ws] : m.valuation)
    if (!ws.empty()) val[a] = ws;
  doc["valuation"] = std::move(val);
  return doc;
}

Model model_from_json(const json& doc, const LoadOptions& opts) {
  Diagnostics diag;
  Model m;
  if (!doc.is_object()) throw ModelLoadError({"document: expected a JSON object"});
  diag.at("version", [&] {
    const int v = member(doc, "version").get<int>();
    if (v != kDocumentVersion) throw Error(ErrorCode::Parse, "unsupported version " + std::to_string(v));
    return 0;
  });
  diag.at("atoms", [&] {
    for (const auto& a : member(doc, "atoms")) {
      const auto name = a.get<std::string>();
      const auto f = parse_prop(name);
      if (!f.is_atom()) throw Error(ErrorCode::Parse, "'" + name + "' is not an atom name");
      m.atoms.insert(name);
    }
    return 0;
  });
  diag.at("worlds", [&] {
    for (const auto& w : member(doc, "worlds")) m.worlds.insert(w.get<std::string>());
    return 0;
  });
  if (doc.contains("relations")) {
    const auto& rel = doc.at("relations");
    for (Agent i : {Agent::Explainer, Agent::Explainee}) {
      const std::string key = std::to_string(index_of(i));
      if (!rel.contains(key)) continue;
      const auto& edges = rel.at(key);
      for (std::size_t k = 0; k < edges.size(); ++k)
        diag.at("relations." + key + "[" + std::to_string(k) + "]", [&] {
          const auto u = edges.at(k).at(0).get<std::string>();
          const auto v = edges.at(k).at(1).get<std::string>();
          if (!m.worlds.contains(u) || !m.worlds.contains(v))
            throw Error(ErrorCode::UnknownWorld, "edge (" + u + "," + v + ") names an unknown world");
          m.relation(i).insert({u, v});
          return 0;
        });
      if (opts.strict) {
        const auto closed = reflexive_transitive_closure(m.relation(i), m.worlds);
        for (const auto& [u, v] : closed)
          if (!m.relation(i).contains({u, v}))
            diag.add("relations." + key + ": not reflexive-transitive, missing (" + u + "," + v + ")");
      }
    }
  }
  if (!opts.strict)
    for (Agent i : {Agent::Explainer, Agent::Explainee})
      m.relation(i) = reflexive_transitive_closure(m.relation(i), m.worlds);

  if (doc.contains("evidence")) {
    const auto& ev = doc.at("evidence");
    for (std::size_t k = 0; k < ev.size(); ++k) {
      const std::string where = "evidence[" + std::to_string(k) + "]";
      const auto& entry = ev.at(k);
      auto agent = diag.at(where + ".agent", [&] { return std::optional(agent_from_index(entry.at("agent").get<int>())); });
      auto term = diag.at(where + ".term", [&] { return std::optional(parse_term(entry.at("term").get<std::string>())); });
      auto world = diag.at(where + ".world", [&] {
        auto w = entry.at("world").get<std::string>();
        if (!m.worlds.contains(w)) throw Error(ErrorCode::UnknownWorld, "unknown world '" + w + "'");
        return std::optional(w);
      });
      auto formula = diag.at(where + ".formula", [&] {
        auto f = parse_prop(entry.at("formula").get<std::string>());
        std::set<std::string> used;
        collect_atoms(f, used);
        for (const auto& a : used)
          if (!m.atoms.contains(a)) throw Error(ErrorCode::UnknownAtom, "undeclared atom '" + a + "'");
        return std::optional(f);
      });
      if (agent && term && world && formula) m.add_evidence(*agent, *term, *world, *formula);
    }
  }
  if (doc.contains("valuation")) {
    for (const auto& [atom, ws] : doc.at("valuation").items())
      diag.at("valuation." + atom, [&] {
        if (!m.atoms.contains(atom)) throw Error(ErrorCode::UnknownAtom, "undeclared atom '" + atom + "'");
        std::set<WorldId> set;
        for (const auto& w : ws) {
          auto id = w.get<std::string>();
          if (!m.worlds.contains(id)) throw Error(ErrorCode::UnknownWorld, "unknown world '" + id + "'");
          set.insert(id);
        }
        if (!set.empty()) m.valuation[atom] = std::move(set);
        return 0;
      });
  }
  if (!diag.empty()) throw ModelLoadError(diag.lines());
  return m;
}

Model load_model(const json& doc, const LoadOptions& opts) {
  Model m = model_from_json(doc, opts);
  const auto violations = validate_model(m);
  if (!violations.empty()) {
    std::vector<std::string> lines;
    for (const auto& v : violations) lines.push_back(std::string(to_string(v.kind)) + ": " + v.message);
    throw ModelLoadError(std::move(lines));
  }
  return m;
}

Model load_model_file(const std::filesystem::path& path, const LoadOptions& opts) {
  return load_model(read_json_file(path), opts);
}

std::string model_digest(const Model& m) {
  const std::string canonical = model_to_json(m).dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(canonical.data(), canonical.size(), md, &len, EVP_sha256(), nullptr);
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

json explanation_to_json(const Explanation& e) {
  json premises = json::array();
  for (const auto& p : e.premises) premises.push_back(explanation_to_json(p));
  return {{"claim", print(e.claim)}, {"premises", std::move(premises)}};
}

Explanation explanation_from_json(const json& j) {
  if (j.is_string()) return parse_explanation(j.get<std::string>());
  Explanation e{parse_prop(member(j, "claim").get<std::string>()), {}};
  if (j.contains("premises"))
    for (const auto& p : j.at("premises")) e.premises.push_back(explanation_from_json(p));
  return e;
}

json bits_to_json(const BitTree& b) {
  json premises = json::array();
  for (const auto& p : b.premises) premises.push_back(bits_to_json(p));
  return {{"bit", b.bit ? 1 : 0}, {"premises", std::move(premises)}};
}

BitTree bits_from_json(const json& j) {
  if (j.is_string()) return parse_bits(j.get<std::string>());
  BitTree b;
  const auto& bit = member(j, "bit");
  if (bit.is_boolean()) {
    b.bit = bit.get<bool>();
  } else {
    const int v = bit.get<int>();
    if (v != 0 && v != 1) throw Error(ErrorCode::MalformedFeedback, "bit must be 0 or 1");
    b.bit = v == 1;
  }
  if (j.contains("premises"))
    for (const auto& p : j.at("premises")) b.premises.push_back(bits_from_json(p));
  return b;
}

json feedback_to_json(const FeedbackRecord& fb) {
  return {{"explanation", explanation_to_json(fb.exp)}, {"bits", bits_to_json(fb.bits)}};
}

FeedbackRecord feedback_from_json(const json& j) {
  return {explanation_from_json(member(j, "explanation")), bits_from_json(member(j, "bits"))};
}

Formula formula_from_json(const json& j) {
  if (j.is_string()) return parse_formula(j.get<std::string>());
  const Formula body = formula_from_json(member(j, "formula"));
  if (j.contains("after_explanation")) {
    const auto& op = j.at("after_explanation");
    return Formula::after_explanation(agent_from_index(op.value("agent", 2)),
                                      explanation_from_json(member(op, "explanation")), body);
  }
  if (j.contains("after_feedback")) {
    const auto& op = j.at("after_feedback");
    return Formula::after_feedback(agent_from_index(op.value("agent", 1)), feedback_from_json(member(op, "feedback")),
                                   body);
  }
  throw Error(ErrorCode::Parse, "formula object needs 'after_explanation' or 'after_feedback'");
}

namespace {

json entry_to_json(const EvidenceEntry& e) {
  return {{"agent", index_of(e.agent)}, {"term", print(e.term)}, {"world", e.world}, {"formula", print(e.formula)}};
}

EvidenceEntry entry_from_json(const json& j) {
  return {agent_from_index(j.at("agent").get<int>()), parse_term(j.at("term").get<std::string>()),
          j.at("world").get<std::string>(), parse_prop(j.at("formula").get<std::string>())};
}

}  // namespace

json transcript_to_json(const Transcript& t) {
  json rounds = json::array();
  for (std::size_t k = 0; k < t.history.rounds.size(); ++k) {
    const auto& r = t.history.rounds[k];
    json steps = json::array();
    if (k < t.traces.size())
      for (const auto& s : t.traces[k]) {
        json added = json::array();
        for (const auto& e : s.added) added.push_back(entry_to_json(e));
        steps.push_back({{"kind", s.kind == TraceStep::Kind::Explanation ? "explanation" : "feedback"},
                         {"world", s.world},
                         {"added", std::move(added)},
                         {"removed_worlds", s.removed_worlds}});
      }
    rounds.push_back({{"explanation", explanation_to_json(r.explanation)},
                      {"feedback", bits_to_json(r.feedback.bits)},
                      {"trace", std::move(steps)}});
  }
  return {{"version", kDocumentVersion},
          {"model_digest", t.model_digest},
          {"world", t.world},
          {"claim", print(t.history.question)},
          {"bounds", {{"max_depth", t.bounds.max_depth}, {"max_nodes", t.bounds.max_nodes}}},
          {"max_rounds", t.max_rounds},
          {"rounds", std::move(rounds)},
          {"status", std::string(to_string(t.status))},
          {"final_term", t.final_term ? json(print(*t.final_term)) : json(nullptr)}};
}

Transcript transcript_from_json(const json& j) {
  try {
    Transcript t;
    if (j.at("version").get<int>() != kDocumentVersion) throw Error(ErrorCode::Parse, "unsupported transcript version");
    t.model_digest = j.at("model_digest").get<std::string>();
    t.world = j.at("world").get<std::string>();
    t.history.question = parse_prop(j.at("claim").get<std::string>());
    t.bounds.max_depth = j.at("bounds").at("max_depth").get<std::size_t>();
    t.bounds.max_nodes = j.at("bounds").at("max_nodes").get<std::size_t>();
    t.max_rounds = j.at("max_rounds").get<std::size_t>();
    for (const auto& r : j.at("rounds")) {
      Explanation e = explanation_from_json(r.at("explanation"));
      FeedbackRecord fb{e, bits_from_json(r.at("feedback"))};
      UpdateTrace steps;
      for (const auto& s : r.at("trace")) {
        TraceStep step;
        const auto kind = s.at("kind").get<std::string>();
        if (kind == "explanation") {
          step.kind = TraceStep::Kind::Explanation;
          step.payload = e;
        } else if (kind == "feedback") {
          step.kind = TraceStep::Kind::Feedback;
          step.payload = fb;
        } else {
          throw Error(ErrorCode::Parse, "unknown trace step kind '" + kind + "'");
        }
        step.world = s.at("world").get<std::string>();
        for (const auto& a : s.at("added")) step.added.push_back(entry_from_json(a));
        step.removed_worlds = s.at("removed_worlds").get<std::vector<WorldId>>();
        steps.push_back(std::move(step));
      }
      t.history.rounds.push_back({std::move(e), std::move(fb)});
      t.traces.push_back(std::move(steps));
    }
    t.status = conversation_status_from_string(j.at("status").get<std::string>());
    if (!j.at("final_term").is_null()) t.final_term = parse_term(j.at("final_term").get<std::string>());
    return t;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("transcript: ") + e.what());
  }
}

}  // namespace xconv
