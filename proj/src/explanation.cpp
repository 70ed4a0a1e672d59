#include "xconv/explanation.hpp"

#include <algorithm>
#include <map>

#include "xconv/error.hpp"
#include "xconv/text.hpp"

namespace xconv {

std::strong_ordering operator<=>(const Explanation& a, const Explanation& b) {
  if (auto c = a.claim <=> b.claim; c != 0) return c;
  return std::lexicographical_compare_three_way(a.premises.begin(), a.premises.end(),
                                                b.premises.begin(), b.premises.end());
}

std::vector<PropFormula> premise_claims(const Explanation& e) {
  std::vector<PropFormula> out;
  out.reserve(e.premises.size());
  for (const auto& p : e.premises) out.push_back(p.claim);
  return out;
}

const Explanation* find_node(const Explanation& e, const PropFormula& f) {
  if (e.claim == f) return &e;
  for (const auto& p : e.premises)
    if (const auto* hit = find_node(p, f)) return hit;
  return nullptr;
}

std::optional<std::vector<PropFormula>> premises_of(const Explanation& e, const PropFormula& f) {
  const auto* node = find_node(e, f);
  if (node == nullptr) return std::nullopt;
  return premise_claims(*node);
}

namespace {

template <typename Visit>
void walk_post(const Explanation& e, Visit&& visit) {
  for (const auto& p : e.premises) walk_post(p, visit);
  visit(e);
}

}  // namespace

std::set<PropFormula> hypotheses(const Explanation& e) {
  std::set<PropFormula> out;
  walk_post(e, [&](const Explanation& n) {
    if (n.is_leaf()) out.insert(n.claim);
  });
  return out;
}

std::set<PropFormula> derived(const Explanation& e) {
  std::set<PropFormula> out;
  walk_post(e, [&](const Explanation& n) {
    if (!n.is_leaf()) out.insert(n.claim);
  });
  return out;
}

std::vector<PropFormula> hypothesis_list(const Explanation& e) {
  std::vector<PropFormula> out;
  walk_post(e, [&](const Explanation& n) {
    if (n.is_leaf() && std::find(out.begin(), out.end(), n.claim) == out.end()) out.push_back(n.claim);
  });
  return out;
}

std::vector<PropFormula> post_order(const Explanation& e) {
  std::vector<PropFormula> out;
  walk_post(e, [&](const Explanation& n) { out.push_back(n.claim); });
  return out;
}

std::size_t node_count(const Explanation& e) {
  std::size_t n = 1;
  for (const auto& p : e.premises) n += node_count(p);
  return n;
}

std::size_t depth(const Explanation& e) {
  std::size_t d = 0;
  for (const auto& p : e.premises) d = std::max(d, 1 + depth(p));
  return d;
}

void validate_explanation(const Explanation& e, bool require_inference) {
  if (require_inference && e.is_leaf())
    throw Error(ErrorCode::InvalidExplanation,
                "explanation of " + print(e.claim) + " has no inference step");
  std::map<PropFormula, int> seen;
  walk_post(e, [&](const Explanation& n) { ++seen[n.claim]; });
  for (const auto& [f, count] : seen)
    if (count > 1)
      throw Error(ErrorCode::InvalidExplanation,
                  "formula " + print(f) + " occurs at " + std::to_string(count) + " nodes");
}

bool FeedbackRecord::bit_of(const PropFormula& f) const {
  const auto formulas = post_order(exp);
  const auto flat = bits_post_order(bits);
  for (std::size_t i = 0; i < formulas.size() && i < flat.size(); ++i)
    if (formulas[i] == f) return flat[i];
  throw Error(ErrorCode::MalformedFeedback, "no feedback bit for " + print(f));
}

bool FeedbackRecord::all_ones() const {
  const auto flat = bits_post_order(bits);
  return std::all_of(flat.begin(), flat.end(), [](bool b) { return b; });
}

namespace {

void check_node(const Explanation& e, const BitTree& b, const std::string& path, bool parent_bit,
                bool has_parent, std::vector<std::string>& out) {
  const std::string where = path.empty() ? "root" : path;
  if (e.premises.size() != b.premises.size()) {
    out.push_back(where + ": expected " + std::to_string(e.premises.size()) + " premise bits, got " +
                  std::to_string(b.premises.size()));
    return;
  }
  if (has_parent && !b.bit && parent_bit)
    out.push_back(where + ": bit 0 below a node marked 1 (" + print(e.claim) + ")");
  for (std::size_t i = 0; i < e.premises.size(); ++i) {
    const std::string child = path.empty() ? std::to_string(i) : path + "/" + std::to_string(i);
    check_node(e.premises[i], b.premises[i], child, b.bit, true, out);
  }
}

void flatten(const BitTree& b, std::vector<bool>& out) {
  for (const auto& p : b.premises) flatten(p, out);
  out.push_back(b.bit);
}

}  // namespace

std::vector<std::string> feedback_problems(const FeedbackRecord& fb) {
  std::vector<std::string> out;
  check_node(fb.exp, fb.bits, "", false, false, out);
  return out;
}

void validate_feedback(const FeedbackRecord& fb) {
  const auto problems = feedback_problems(fb);
  if (problems.empty()) return;
  std::string msg = "malformed feedback:";
  for (const auto& p : problems) msg += " " + p + ";";
  throw Error(ErrorCode::MalformedFeedback, msg);
}

std::vector<bool> bits_post_order(const BitTree& bits) {
  std::vector<bool> out;
  flatten(bits, out);
  return out;
}

}  // namespace xconv
