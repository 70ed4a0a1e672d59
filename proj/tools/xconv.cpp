#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "xconv/conversation.hpp"
#include "xconv/derivation.hpp"
#include "xconv/document.hpp"
#include "xconv/eval.hpp"
#include "xconv/selection.hpp"
#include "xconv/session.hpp"
#include "xconv/text.hpp"

namespace {

using namespace xconv;

constexpr int kDomainFailure = 1;
constexpr int kUsageError = 2;

Explanation load_explanation(const std::string& arg) {
  if (std::filesystem::exists(arg)) {
    Explanation e = explanation_from_json(read_json_file(arg));
    validate_explanation(e);
    return e;
  }
  Explanation e = parse_explanation(arg);
  validate_explanation(e);
  return e;
}

Formula load_query(const std::string& arg) {
  if (std::filesystem::exists(arg)) return formula_from_json(read_json_file(arg));
  try {
    return formula_from_json(json::parse(arg));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, std::string("--query: ") + e.what());
  }
}

void print_tree(std::ostream& out, const Explanation& e, bool fancy, const std::string& indent = "") {
  out << indent << (fancy ? pretty(e.claim) : print(e.claim)) << (e.is_leaf() ? "  (hypothesis)" : "") << '\n';
  for (const auto& p : e.premises) print_tree(out, p, fancy, indent + "  ");
}

std::string show(const Explanation& e, bool fancy) { return fancy ? pretty(e) : print(e); }

void print_transcript(std::ostream& out, const Transcript& t, bool fancy) {
  for (std::size_t k = 0; k < t.history.rounds.size(); ++k) {
    const auto& r = t.history.rounds[k];
    out << "round " << k + 1 << ": " << show(r.explanation, fancy) << "\n  feedback " << print(r.feedback.bits)
        << '\n';
  }
  out << "status: " << to_string(t.status) << '\n';
  if (t.final_term) out << "term: " << (fancy ? pretty(*t.final_term) : print(*t.final_term)) << '\n';
}

struct BoundFlags {
  std::optional<std::size_t> max_depth;
  std::optional<std::size_t> max_nodes;

  void attach(CLI::App* cmd) {
    cmd->add_option("--max-depth", max_depth, "Maximum inference steps along a path")->check(CLI::PositiveNumber);
    cmd->add_option("--max-nodes", max_nodes, "Maximum nodes per explanation")->check(CLI::PositiveNumber);
  }

  SearchBounds resolve() const {
    SearchBounds b = SearchBounds::from_env();
    if (max_depth) b.max_depth = *max_depth;
    if (max_nodes) b.max_nodes = *max_nodes;
    validate_bounds(b);
    return b;
  }
};

SessionServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conversational explanations over justification models"};
  app.require_subcommand(1);

  std::string model_path, world, formula_src, query_src, explanation_src, claim_src, hyps_src;
  std::string transcript_path, transcript_out, host = "127.0.0.1", cors_origin, persist_dir;
  bool strict = false, as_json = false, fancy = false, interactive = false;
  int port = 8080, agent_index = 2;
  std::size_t max_rounds = 32;
  BoundFlags bounds;

  auto add_model = [&](CLI::App* cmd) {
    cmd->add_option("model", model_path, "Model document")->required();
    cmd->add_flag("--strict", strict, "Reject relations that are not reflexive-transitive");
  };

  auto* validate = app.add_subcommand("validate", "Check a model document");
  add_model(validate);

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a formula at a world");
  add_model(eval_cmd);
  eval_cmd->add_option("--world", world)->required();
  auto* formula_opt = eval_cmd->add_option("--formula", formula_src, "Formula text");
  auto* query_opt = eval_cmd->add_option("--query", query_src, "Structured formula (JSON text or file)");
  formula_opt->excludes(query_opt);

  auto* derive = app.add_subcommand("derive", "Derived terms of an explanation");
  add_model(derive);
  derive->add_option("--world", world)->required();
  derive->add_option("--explanation", explanation_src, "Explanation file or text")->required();
  derive->add_option("--agent", agent_index)->check(CLI::IsMember({1, 2}));
  derive->add_flag("--json", as_json);

  auto* feedback = app.add_subcommand("feedback", "Truthful feedback of the model-resident explainee");
  add_model(feedback);
  feedback->add_option("--world", world)->required();
  feedback->add_option("--explanation", explanation_src, "Explanation file or text")->required();
  feedback->add_flag("--json", as_json);

  auto* enumerate = app.add_subcommand("enumerate", "Available explanations for a claim");
  add_model(enumerate);
  enumerate->add_option("--world", world)->required();
  enumerate->add_option("--claim", claim_src)->required();
  enumerate->add_option("--hyps", hyps_src, "Comma-separated hypotheses");
  enumerate->add_flag("--json", as_json);
  bounds.attach(enumerate);

  auto* converse = app.add_subcommand("converse", "Run a conversation");
  add_model(converse);
  converse->add_option("--world", world)->required();
  converse->add_option("--claim", claim_src)->required();
  converse->add_option("--max-rounds", max_rounds)->check(CLI::PositiveNumber);
  converse->add_flag("--interactive", interactive, "Read feedback bits from stdin");
  auto* json_flag = converse->add_flag("--json", as_json, "Print the transcript document");
  converse->add_flag("--pretty", fancy, "Unicode notation")->excludes(json_flag);
  converse->add_option("--transcript-out", transcript_out, "Also write the transcript here");
  bounds.attach(converse);

  auto* replay_cmd = app.add_subcommand("replay", "Verify a transcript against its model");
  add_model(replay_cmd);
  replay_cmd->add_option("--transcript", transcript_path)->required();

  auto* serve = app.add_subcommand("serve", "HTTP session service");
  serve->add_option("--port", port)->check(CLI::Range(0, 65535));
  serve->add_option("--host", host);
  serve->add_option("--model", model_path, "Default model for new sessions");
  serve->add_option("--cors-origin", cors_origin, "Allowed browser origin");
  serve->add_option("--persist-dir", persist_dir, "Write transcripts here");
  serve->add_option("--max-rounds", max_rounds)->check(CLI::PositiveNumber);
  bounds.attach(serve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  const LoadOptions load_opts{strict};
  try {
    if (*validate) {
      load_model_file(model_path, load_opts);
      return 0;
    }

    if (*eval_cmd) {
      const Model m = load_model_file(model_path, load_opts);
      if (formula_src.empty() && query_src.empty()) throw Error(ErrorCode::Parse, "eval needs --formula or --query");
      const Formula f = query_src.empty() ? parse_formula(formula_src) : load_query(query_src);
      std::cout << (eval(m, world, f) ? "true" : "false") << '\n';
      return 0;
    }

    if (*derive) {
      const Model m = load_model_file(model_path, load_opts);
      require_world(m, world);
      const Explanation e = load_explanation(explanation_src);
      const Agent agent = agent_from_index(agent_index);
      json out = json::array();
      for (const auto& f : post_order(e)) {
        if (find_node(e, f)->is_leaf()) continue;
        const Term t = derive_term(m, world, e, f, agent);
        if (as_json)
          out.push_back({{"formula", print(f)}, {"term", print(t)}, {"ground", t.is_ground()}});
        else
          std::cout << print(f) << '\t' << print(t) << '\n';
      }
      if (as_json) std::cout << out.dump(2) << '\n';
      return 0;
    }

    if (*feedback) {
      const Model m = load_model_file(model_path, load_opts);
      const FeedbackRecord fb = compute_feedback(m, world, load_explanation(explanation_src));
      if (as_json)
        std::cout << bits_to_json(fb.bits).dump(2) << '\n';
      else
        std::cout << print(fb.bits) << '\n';
      return 0;
    }

    if (*enumerate) {
      const Model m = load_model_file(model_path, load_opts);
      require_world(m, world);
      const PropFormula claim = parse_prop(claim_src);
      std::set<PropFormula> hyps;
      if (!hyps_src.empty()) {
        std::stringstream ss(hyps_src);
        for (std::string part; std::getline(ss, part, ',');) hyps.insert(parse_prop(part));
      }
      const auto found = enumerate_available(m, world, hyps, claim, bounds.resolve());
      json out = json::array();
      for (const auto& e : found.explanations) {
        const auto n = uncertainty_set(m, world, e).size();
        const auto d = derived(e).size();
        if (as_json)
          out.push_back({{"explanation", explanation_to_json(e)}, {"text", print(e)}, {"uncertain", n}, {"derived", d}});
        else
          std::cout << "N=" << n << " D=" << d << "  " << print(e) << '\n';
      }
      if (as_json)
        std::cout << json{{"complete", found.complete}, {"explanations", out}}.dump(2) << '\n';
      else if (!found.complete)
        std::cout << "(search truncated by bounds)\n";
      return found.explanations.empty() ? kDomainFailure : 0;
    }

    if (*converse) {
      const Model m = load_model_file(model_path, load_opts);
      const PropFormula claim = parse_prop(claim_src);
      Transcript t;
      if (interactive) {
        ExternalExplainee driver(
            [&](const Explanation& e) {
              std::cerr << "explanation:\n";
              print_tree(std::cerr, e, fancy, "  ");
              std::cerr << "bits (post-order of the text form, e.g. " << print(e) << ")> " << std::flush;
              std::string line;
              if (!std::getline(std::cin, line)) throw Error(ErrorCode::Parse, "no feedback on stdin");
              return parse_bits(line);
            },
            [](const std::string& reason) { std::cerr << "rejected: " << reason << '\n'; });
        // Each malformed answer is re-asked; a parse failure ends the run.
        t = run_conversation(m, world, claim, bounds.resolve(), driver, max_rounds, 16);
      } else {
        SimulatedExplainee driver;
        t = run_conversation(m, world, claim, bounds.resolve(), driver, max_rounds);
      }
      if (!transcript_out.empty()) std::ofstream(transcript_out) << transcript_to_json(t).dump(2) << '\n';
      if (as_json)
        std::cout << transcript_to_json(t).dump(2) << '\n';
      else
        print_transcript(std::cout, t, fancy);
      return t.status == ConversationStatus::JustifiedByExplainee ? 0 : kDomainFailure;
    }

    if (*replay_cmd) {
      const Model m = load_model_file(model_path, load_opts);
      const Transcript t = transcript_from_json(read_json_file(transcript_path));
      const Model end = replay(m, t);
      std::cout << "replayed " << t.history.rounds.size() << " rounds; " << end.worlds.size() << " worlds remain\n";
      return 0;
    }

    if (*serve) {
      SessionConfig config;
      config.bounds = bounds.resolve();
      config.max_rounds = max_rounds;
      if (!persist_dir.empty()) config.persist_dir = persist_dir;
      if (!model_path.empty()) config.default_model = model_to_json(load_model_file(model_path, load_opts));
      SessionStore store(config);
      SessionServer server(store, {host, port, cors_origin});
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "listening on " << host << ':' << port << '\n';
      if (!server.listen()) {
        std::cerr << "cannot listen on " << host << ':' << port << '\n';
        return kDomainFailure;
      }
      return 0;
    }
  } catch (const ModelLoadError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << d << '\n';
    return kDomainFailure;
  } catch (const Error& e) {
    std::cerr << to_string(e.code()) << ": " << e.what() << '\n';
    return e.code() == ErrorCode::Parse ? kUsageError : kDomainFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomainFailure;
  }
  return kUsageError;
}
