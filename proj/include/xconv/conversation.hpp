#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "xconv/dynamics.hpp"
#include "xconv/selection.hpp"

namespace xconv {

enum class ConversationStatus {
  InProgress,
  JustifiedByExplainee,
  ExplainerExhausted,
  BoundsReached,
  UntruthfulFeedbackDetected,
};

std::string_view to_string(ConversationStatus s);
ConversationStatus conversation_status_from_string(std::string_view s);
inline bool is_terminal(ConversationStatus s) { return s != ConversationStatus::InProgress; }

/// Everything needed to audit or replay a conversation.
struct Transcript {
  std::string model_digest;
  WorldId world;
  SearchBounds bounds;
  std::size_t max_rounds = 0;
  ConversationHistory history;
  /// Two steps per round: the explanation update, then the feedback update.
  std::vector<UpdateTrace> traces;
  ConversationStatus status = ConversationStatus::InProgress;
  std::optional<Term> final_term;

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

/// Supplies the explainee's feedback for each announced explanation.
class ExplaineeDriver {
 public:
  virtual ~ExplaineeDriver() = default;

  /// `current` is the model after the explainee heard e at `actual`.
  virtual FeedbackRecord respond(const Model& current, const WorldId& actual, const Explanation& e) = 0;

  /// The last response was malformed; respond() will be asked again.
  virtual void reject(const std::string& /*reason*/) {}
};

/// Answers with compute_feedback on the model-resident explainee.
class SimulatedExplainee : public ExplaineeDriver {
 public:
  FeedbackRecord respond(const Model& current, const WorldId& actual, const Explanation& e) override;
};

/// Answers through a callback, e.g. a terminal prompt or a network session.
class ExternalExplainee : public ExplaineeDriver {
 public:
  using Ask = std::function<BitTree(const Explanation&)>;
  using Reject = std::function<void(const std::string&)>;

  explicit ExternalExplainee(Ask ask, Reject on_reject = {}) : ask_(std::move(ask)), on_reject_(std::move(on_reject)) {}

  FeedbackRecord respond(const Model& current, const WorldId& actual, const Explanation& e) override;
  void reject(const std::string& reason) override;

 private:
  Ask ask_;
  Reject on_reject_;
};

/// Canonical order used to pick one explanation out of a maxima set: fewer
/// derived formulas first, then structural order.
bool canonical_less(const Explanation& a, const Explanation& b);

/// Stepwise conversation state shared by run_conversation and the session
/// service, so both produce identical transcripts.
class Conversation {
 public:
  Conversation(Model m0, WorldId actual, PropFormula claim, SearchBounds bounds, std::size_t max_rounds);

  /// Picks the next explanation and lets the explainee learn from it, or sets
  /// a terminal status. Only valid when nothing is pending.
  void select_next();

  /// Explainer learns from feedback on the pending explanation and checks for
  /// termination. Throws MalformedFeedback (state unchanged) for bad shapes.
  void submit_feedback(const BitTree& bits);

  ConversationStatus status() const { return transcript_.status; }
  const std::optional<Explanation>& pending() const { return pending_; }
  std::size_t round() const { return transcript_.history.rounds.size(); }
  const Transcript& transcript() const { return transcript_; }
  const Model& base_model() const { return m0_; }
  /// Model after every update so far, including the pending explanation.
  const Model& current_model() const { return current_; }
  const WorldId& actual() const { return transcript_.world; }

 private:
  void finish(ConversationStatus s);
  std::optional<Term> claim_witness() const;

  Model m0_;
  Model current_;
  Model before_pending_;
  Transcript transcript_;
  std::optional<Explanation> pending_;
  TraceStep pending_trace_;
  /// Explanations whose feedback did not change the model.
  std::set<Explanation> spent_;
};

/// Runs the whole loop with the given driver. Malformed responses are
/// rejected and re-requested up to `max_retries` times.
Transcript run_conversation(const Model& m, const WorldId& actual, const PropFormula& claim, const SearchBounds& b,
                            ExplaineeDriver& driver, std::size_t max_rounds, std::size_t max_retries = 3);

/// Reapplies every recorded update to m0. Throws TraceMismatch when the
/// transcript was not produced against m0.
Model replay(const Model& m0, const Transcript& t);

}  // namespace xconv
