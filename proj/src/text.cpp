#include "xconv/text.hpp"

#include <cctype>
#include <functional>

#include "xconv/error.hpp"

namespace xconv {
namespace {

// ---------------------------------------------------------------------------
// Parsing

class Cursor {
 public:
  explicit Cursor(std::string_view src) : src_(src) {}

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= src_.size();
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  bool match(std::string_view tok) {
    skip_ws();
    if (src_.substr(pos_, tok.size()) != tok) return false;
    pos_ += tok.size();
    return true;
  }

  void expect(std::string_view tok) {
    if (!match(tok)) fail("expected '" + std::string(tok) + "'");
  }

  /// [A-Za-z0-9_]+ without consuming; empty if none.
  std::string_view peek_word() {
    skip_ws();
    std::size_t end = pos_;
    while (end < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_')) ++end;
    return src_.substr(pos_, end - pos_);
  }

  std::string take_word() {
    auto w = peek_word();
    pos_ += w.size();
    return std::string(w);
  }

  std::size_t pos() const { return pos_; }

  [[noreturn]] void fail(const std::string& message) {
    skip_ws();
    std::string near = pos_ < src_.size() ? "'" + std::string(src_.substr(pos_, 12)) + "'" : "end of input";
    throw ParseError(pos_, message + " near " + near);
  }

  void finish() {
    if (!at_end()) fail("unexpected trailing input");
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
};

bool is_atom_name(std::string_view w) {
  return !w.empty() && std::islower(static_cast<unsigned char>(w[0])) && w != "false";
}

PropFormula prop_expr(Cursor& c);

PropFormula prop_unary(Cursor& c) {
  if (c.match("~")) return PropFormula::negation(prop_unary(c));
  if (c.match("(")) {
    auto f = prop_expr(c);
    c.expect(")");
    return f;
  }
  auto w = c.peek_word();
  if (w == "false") {
    c.take_word();
    return PropFormula::falsum();
  }
  if (is_atom_name(w)) return PropFormula::atom(c.take_word());
  c.fail("expected a propositional formula");
}

PropFormula prop_expr(Cursor& c) {
  auto lhs = prop_unary(c);
  if (c.match("->")) return PropFormula::implies(lhs, prop_expr(c));
  return lhs;
}

Term term_expr(Cursor& c);

Term term_primary(Cursor& c) {
  if (c.match("(")) {
    auto t = term_expr(c);
    c.expect(")");
    return t;
  }
  auto w = c.peek_word();
  if (w.empty() || std::isdigit(static_cast<unsigned char>(w[0]))) c.fail("expected a term");
  std::string name = c.take_word();
  if (name == "x" && c.match("{")) {
    auto goal = prop_expr(c);
    std::vector<PropFormula> premises;
    if (c.match("|")) {
      premises.push_back(prop_expr(c));
      while (c.match(",")) premises.push_back(prop_expr(c));
    }
    c.expect("}");
    return Term::variable(goal, std::move(premises));
  }
  return Term::constant(std::move(name));
}

Term term_expr(Cursor& c) {
  auto t = term_primary(c);
  while (c.match(".")) t = Term::apply(t, term_primary(c));
  return t;
}

Agent agent_digit(Cursor& c) {
  auto w = c.peek_word();
  if (w == "1" || w == "2") return agent_from_index(c.take_word()[0] - '0');
  c.fail("expected agent index 1 or 2");
}

Formula formula_expr(Cursor& c);

PropFormula prop_operand(Cursor& c, std::string_view op) {
  const auto at = c.pos();
  try {
    return prop_unary(c);
  } catch (const ParseError&) {
    throw ParseError(at, std::string(op) + " takes a propositional formula");
  }
}

Formula formula_unary(Cursor& c) {
  if (c.match("~")) return Formula::negation(formula_unary(c));
  if (c.match("(")) {
    auto f = formula_expr(c);
    c.expect(")");
    return f;
  }
  if (c.match("[")) {
    auto t = term_expr(c);
    c.expect("]");
    Agent i = agent_digit(c);
    return Formula::just(t, i, prop_operand(c, "justification"));
  }
  auto w = c.peek_word();
  if (w == "B1" || w == "B2") {
    c.take_word();
    return Formula::box(agent_from_index(w[1] - '0'), formula_unary(c));
  }
  if (w == "T1" || w == "T2") {
    c.take_word();
    return Formula::triangle(agent_from_index(w[1] - '0'), prop_operand(c, "T" + std::string(1, w[1])));
  }
  return Formula::prop(prop_unary(c));
}

Formula formula_expr(Cursor& c) {
  auto lhs = formula_unary(c);
  if (c.match("->")) return Formula::implies(lhs, formula_expr(c));
  return lhs;
}

// Shared tree grammar for explanations and bit trees.
template <typename Node, typename Label>
Node tree_expr(Cursor& c, const Label& label) {
  Node node;
  if (c.match("[")) {
    std::vector<Node> children;
    children.push_back(tree_expr<Node>(c, label));
    while (c.match(",")) children.push_back(tree_expr<Node>(c, label));
    c.expect("]");
    if (c.peek() != '/') c.fail("a premise list must be followed by '/' and a conclusion");
    node.premises = std::move(children);
    c.expect("/");
    label(c, node);
  } else {
    label(c, node);
  }
  while (c.match("/")) {
    Node parent;
    parent.premises.push_back(std::move(node));
    label(c, parent);
    node = std::move(parent);
  }
  return node;
}

// ---------------------------------------------------------------------------
// Printing

struct Symbols {
  std::string_view arrow, bottom, dot, box, tri;
  bool unicode;
};

constexpr Symbols kAscii{" -> ", "false", " . ", "B", "T", false};
constexpr Symbols kPretty{" → ", "⊥", "·", "□", "△", true};

std::string prop_text(const PropFormula& f, const Symbols& s);

std::string prop_operand_text(const PropFormula& f, const Symbols& s) {
  auto t = prop_text(f, s);
  return f.is_implication() ? "(" + t + ")" : t;
}

std::string prop_text(const PropFormula& f, const Symbols& s) {
  switch (f.kind()) {
    case PropFormula::Kind::Atom: return f.name();
    case PropFormula::Kind::Falsum: return std::string(s.bottom);
    case PropFormula::Kind::Implies:
      return prop_operand_text(f.antecedent(), s) + std::string(s.arrow) + prop_text(f.consequent(), s);
  }
  return {};
}

std::string term_text(const Term& t, const Symbols& s) {
  switch (t.kind()) {
    case Term::Kind::Const: return t.name();
    case Term::Kind::Var: {
      std::string out = "x{" + prop_text(t.goal(), s);
      for (std::size_t i = 0; i < t.premises().size(); ++i)
        out += (i == 0 ? " | " : ", ") + prop_text(t.premises()[i], s);
      return out + "}";
    }
    case Term::Kind::App: {
      auto arg = term_text(t.arg(), s);
      if (t.arg().is_app()) arg = "(" + arg + ")";
      return term_text(t.fn(), s) + std::string(s.dot) + arg;
    }
  }
  return {};
}

template <typename Node>
std::string tree_text(const Node& n, const std::function<std::string(const Node&)>& label,
                      std::string_view sep) {
  if (n.premises.empty()) return label(n);
  std::string head;
  if (n.premises.size() == 1) {
    head = tree_text(n.premises[0], label, sep);
  } else {
    head = "[";
    for (std::size_t i = 0; i < n.premises.size(); ++i)
      head += (i ? ", " : "") + tree_text(n.premises[i], label, sep);
    head += "]";
  }
  return head + std::string(sep) + label(n);
}

std::string expl_text(const Explanation& e, const Symbols& s) {
  return tree_text<Explanation>(e, [&](const Explanation& n) { return prop_text(n.claim, s); }, " / ");
}

bool is_implication(const Formula& f) {
  return f.kind() == Formula::Kind::Implies || (f.is_prop() && f.prop_body().is_implication());
}

std::string formula_text(const Formula& f, const Symbols& s);

std::string formula_operand_text(const Formula& f, const Symbols& s) {
  auto t = formula_text(f, s);
  return is_implication(f) ? "(" + t + ")" : t;
}

std::string formula_text(const Formula& f, const Symbols& s) {
  const std::string idx = f.kind() == Formula::Kind::Prop || f.kind() == Formula::Kind::Implies
                              ? std::string()
                              : std::to_string(index_of(f.agent()));
  switch (f.kind()) {
    case Formula::Kind::Prop: return prop_text(f.prop_body(), s);
    case Formula::Kind::Box: return std::string(s.box) + idx + " " + formula_operand_text(f.body(), s);
    case Formula::Kind::Triangle: return std::string(s.tri) + idx + " " + prop_operand_text(f.prop_body(), s);
    case Formula::Kind::Just: {
      auto head = s.unicode ? "⟦" + term_text(f.term(), s) + "⟧" : "[" + term_text(f.term(), s) + "]";
      return head + idx + " " + prop_operand_text(f.prop_body(), s);
    }
    case Formula::Kind::DynExp:
      return "[" + idx + ": " + expl_text(f.explanation(), s) + "] " + formula_operand_text(f.body(), s);
    case Formula::Kind::DynFb:
      return "[" + idx + ": " + print(f.feedback().bits) + " on " + expl_text(f.feedback().exp, s) + "] " +
             formula_operand_text(f.body(), s);
    case Formula::Kind::Implies:
      return formula_operand_text(f.lhs(), s) + std::string(s.arrow) + formula_text(f.rhs(), s);
  }
  return {};
}

}  // namespace

PropFormula parse_prop(std::string_view src) {
  Cursor c(src);
  auto f = prop_expr(c);
  c.finish();
  return f;
}

Formula parse_formula(std::string_view src) {
  Cursor c(src);
  auto f = formula_expr(c);
  c.finish();
  return f;
}

Term parse_term(std::string_view src) {
  Cursor c(src);
  auto t = term_expr(c);
  c.finish();
  return t;
}

Explanation parse_explanation(std::string_view src) {
  Cursor c(src);
  auto e = tree_expr<Explanation>(c, [](Cursor& cur, Explanation& n) { n.claim = prop_expr(cur); });
  c.finish();
  return e;
}

BitTree parse_bits(std::string_view src) {
  Cursor c(src);
  auto b = tree_expr<BitTree>(c, [](Cursor& cur, BitTree& n) {
    auto w = cur.peek_word();
    if (w != "0" && w != "1") cur.fail("expected bit 0 or 1");
    n.bit = cur.take_word() == "1";
  });
  c.finish();
  return b;
}

std::string print(const PropFormula& f) { return prop_text(f, kAscii); }
std::string print(const Term& t) { return term_text(t, kAscii); }
std::string print(const Formula& f) { return formula_text(f, kAscii); }
std::string print(const Explanation& e) { return expl_text(e, kAscii); }

std::string print(const BitTree& b) {
  return tree_text<BitTree>(b, [](const BitTree& n) { return std::string(n.bit ? "1" : "0"); }, "/");
}

std::string pretty(const PropFormula& f) { return prop_text(f, kPretty); }
std::string pretty(const Term& t) { return term_text(t, kPretty); }
std::string pretty(const Formula& f) { return formula_text(f, kPretty); }
std::string pretty(const Explanation& e) { return expl_text(e, kPretty); }

}  // namespace xconv
