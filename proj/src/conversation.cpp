#include "xconv/conversation.hpp"

#include <stdexcept>

#include "xconv/derivation.hpp"
#include "xconv/document.hpp"
#include "xconv/error.hpp"
#include "xconv/eval.hpp"

namespace xconv {

std::string_view to_string(ConversationStatus s) {
  switch (s) {
    case ConversationStatus::InProgress: return "InProgress";
    case ConversationStatus::JustifiedByExplainee: return "JustifiedByExplainee";
    case ConversationStatus::ExplainerExhausted: return "ExplainerExhausted";
    case ConversationStatus::BoundsReached: return "BoundsReached";
    case ConversationStatus::UntruthfulFeedbackDetected: return "UntruthfulFeedbackDetected";
  }
  return "?";
}

ConversationStatus conversation_status_from_string(std::string_view s) {
  for (auto st : {ConversationStatus::InProgress, ConversationStatus::JustifiedByExplainee,
                  ConversationStatus::ExplainerExhausted, ConversationStatus::BoundsReached,
                  ConversationStatus::UntruthfulFeedbackDetected})
    if (to_string(st) == s) return st;
  throw Error(ErrorCode::Parse, "unknown conversation status '" + std::string(s) + "'");
}

FeedbackRecord SimulatedExplainee::respond(const Model& current, const WorldId& actual, const Explanation& e) {
  return compute_feedback(current, actual, e);
}

FeedbackRecord ExternalExplainee::respond(const Model&, const WorldId&, const Explanation& e) {
  return {e, ask_(e)};
}

void ExternalExplainee::reject(const std::string& reason) {
  if (on_reject_) on_reject_(reason);
}

bool canonical_less(const Explanation& a, const Explanation& b) {
  const auto da = derived(a).size();
  const auto db = derived(b).size();
  if (da != db) return da < db;
  return a < b;
}

Conversation::Conversation(Model m0, WorldId actual, PropFormula claim, SearchBounds bounds, std::size_t max_rounds)
    : m0_(std::move(m0)), current_(m0_) {
  require_world(m0_, actual);
  eval(m0_, actual, claim);  // rejects undeclared atoms
  validate_bounds(bounds);
  transcript_.model_digest = model_digest(m0_);
  transcript_.world = std::move(actual);
  transcript_.bounds = bounds;
  transcript_.max_rounds = max_rounds;
  transcript_.history.question = std::move(claim);
}

void Conversation::finish(ConversationStatus s) {
  transcript_.status = s;
  pending_.reset();
}

std::optional<Term> Conversation::claim_witness() const {
  return can_justify(current_, actual(), Agent::Explainee, transcript_.history.question);
}

void Conversation::select_next() {
  if (is_terminal(status()) || pending_) throw std::logic_error("select_next: conversation is not awaiting a selection");
  if (round() >= transcript_.max_rounds) {
    finish(ConversationStatus::BoundsReached);
    return;
  }
  std::optional<Round> last;
  if (!transcript_.history.rounds.empty()) last = transcript_.history.rounds.back();
  const auto sel = most_preferred_in(current_, actual(), transcript_.history.question, last, transcript_.bounds);

  const Explanation* pick = nullptr;
  for (const auto& e : sel.best) {
    if (spent_.contains(e)) continue;
    if (pick == nullptr || canonical_less(e, *pick)) pick = &e;
  }
  if (pick == nullptr) {
    finish(sel.complete ? ConversationStatus::ExplainerExhausted : ConversationStatus::BoundsReached);
    return;
  }
  before_pending_ = current_;
  current_ = learn_from_explanation(current_, actual(), *pick, &pending_trace_);
  pending_ = *pick;
}

void Conversation::submit_feedback(const BitTree& bits) {
  if (!pending_) throw std::logic_error("submit_feedback: no explanation is pending");
  FeedbackRecord fb{*pending_, bits};
  validate_feedback(fb);

  TraceStep fb_trace;
  Model next;
  try {
    next = learn_from_feedback(current_, fb, actual(), &fb_trace);
  } catch (const Error& err) {
    if (err.code() != ErrorCode::UntruthfulFeedback) throw;
    transcript_.history.rounds.push_back({*pending_, fb});
    transcript_.traces.push_back({pending_trace_});
    finish(ConversationStatus::UntruthfulFeedbackDetected);
    return;
  }

  const Explanation announced = *pending_;
  transcript_.history.rounds.push_back({announced, fb});
  transcript_.traces.push_back({pending_trace_, fb_trace});
  if (fb_trace.removed_worlds.empty()) spent_.insert(announced);
  current_ = std::move(next);
  pending_.reset();

  if (fb.all_ones()) {
    if (auto witness = claim_witness()) {
      transcript_.final_term = *witness;
      if (announced.claim == transcript_.history.question) {
        const Term t = derive_term(before_pending_, actual(), announced, announced.claim);
        if (t.is_ground()) transcript_.final_term = t;
      }
      finish(ConversationStatus::JustifiedByExplainee);
      return;
    }
  }
  select_next();
}

Transcript run_conversation(const Model& m, const WorldId& actual, const PropFormula& claim, const SearchBounds& b,
                            ExplaineeDriver& driver, std::size_t max_rounds, std::size_t max_retries) {
  Conversation conv(m, actual, claim, b, max_rounds);
  conv.select_next();
  while (!is_terminal(conv.status())) {
    for (std::size_t attempt = 0;; ++attempt) {
      FeedbackRecord fb = driver.respond(conv.current_model(), conv.actual(), *conv.pending());
      const auto problems = feedback_problems(fb);
      if (problems.empty() && fb.exp == *conv.pending()) {
        conv.submit_feedback(fb.bits);
        break;
      }
      std::string reason = problems.empty() ? "feedback is for a different explanation" : problems.front();
      if (attempt >= max_retries) throw Error(ErrorCode::MalformedFeedback, "giving up on malformed feedback: " + reason);
      driver.reject(reason);
    }
  }
  return conv.transcript();
}

Model replay(const Model& m0, const Transcript& t) {
  if (!t.model_digest.empty() && t.model_digest != model_digest(m0))
    throw Error(ErrorCode::TraceMismatch, "transcript was recorded against a different model");
  if (t.traces.size() != t.history.rounds.size())
    throw Error(ErrorCode::TraceMismatch, "transcript has " + std::to_string(t.history.rounds.size()) +
                                              " rounds but " + std::to_string(t.traces.size()) + " traces");
  Model m = m0;
  for (std::size_t k = 0; k < t.traces.size(); ++k) {
    const auto& round = t.history.rounds[k];
    for (const auto& step : t.traces[k]) {
      const bool matches = step.kind == TraceStep::Kind::Explanation
                               ? std::get_if<Explanation>(&step.payload) && *std::get_if<Explanation>(&step.payload) == round.explanation
                               : std::get_if<FeedbackRecord>(&step.payload) && *std::get_if<FeedbackRecord>(&step.payload) == round.feedback;
      if (!matches) throw Error(ErrorCode::TraceMismatch, "trace of round " + std::to_string(k + 1) + " disagrees with the history");
      m = replay_step(m, step);
    }
  }
  return m;
}

}  // namespace xconv
