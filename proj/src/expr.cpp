#include "mcbr24/expr.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

#include "mcbr24/errors.hpp"

namespace mcbr {

struct Expr::Node {
  std::int64_t value = 0;
  Op op = Op::kAdd;
  bool leaf = true;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

std::optional<Rational> apply(Op op, Rational lhs, Rational rhs) {
  switch (op) {
    case Op::kAdd: return lhs + rhs;
    case Op::kSub: return lhs - rhs;
    case Op::kMul: return lhs * rhs;
    case Op::kDiv: return divide(lhs, rhs);
  }
  return std::nullopt;
}

Expr Expr::number(std::int64_t value) {
  auto node = std::make_shared<Node>();
  node->value = value;
  return Expr(std::move(node));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  auto node = std::make_shared<Node>();
  node->leaf = false;
  node->op = op;
  node->lhs = std::move(lhs.node_);
  node->rhs = std::move(rhs.node_);
  return Expr(std::move(node));
}

bool Expr::is_number() const { return node_->leaf; }
std::int64_t Expr::value() const { return node_->value; }
Op Expr::op() const { return node_->op; }
Expr Expr::lhs() const { return Expr(node_->lhs); }
Expr Expr::rhs() const { return Expr(node_->rhs); }

std::optional<Rational> Expr::evaluate() const {
  if (is_number()) return Rational(value());
  const auto a = lhs().evaluate();
  if (!a) return std::nullopt;
  const auto b = rhs().evaluate();
  if (!b) return std::nullopt;
  return apply(op(), *a, *b);
}

std::vector<std::int64_t> Expr::leaves() const {
  std::vector<std::int64_t> out;
  std::vector<const Node*> stack{node_.get()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (n->leaf) {
      out.push_back(n->value);
    } else {
      stack.push_back(n->rhs.get());
      stack.push_back(n->lhs.get());
    }
  }
  return out;
}

namespace {

int precedence(Op op) { return (op == Op::kAdd || op == Op::kSub) ? 1 : 2; }

std::string op_text(Op op) { return std::string(" ") + static_cast<char>(op) + " "; }

}  // namespace

std::string Expr::to_string() const {
  if (is_number()) return std::to_string(value());
  const Expr l = lhs();
  const Expr r = rhs();
  std::string ls = l.to_string();
  std::string rs = r.to_string();
  const int p = precedence(op());
  if (!l.is_number() && precedence(l.op()) < p) ls = "(" + ls + ")";
  if (!r.is_number()) {
    const int rp = precedence(r.op());
    if (rp < p || (rp == p && (op() == Op::kSub || op() == Op::kDiv))) rs = "(" + rs + ")";
  }
  return ls + op_text(op()) + rs;
}

// ---------------------------------------------------------------------------
// Canonical form

namespace {

struct Canon {
  enum class Kind { kLeaf, kSum, kProduct } kind = Kind::kLeaf;
  std::int64_t value = 0;
  // (inverted, term): inverted means subtracted for sums, divisor for products.
  std::vector<std::pair<bool, Canon>> terms;
};

Canon canonicalize(const Expr& e) {
  if (e.is_number()) return Canon{Canon::Kind::kLeaf, e.value(), {}};
  const bool additive = e.op() == Op::kAdd || e.op() == Op::kSub;
  const Canon::Kind kind = additive ? Canon::Kind::kSum : Canon::Kind::kProduct;
  const bool invert_rhs = e.op() == Op::kSub || e.op() == Op::kDiv;

  Canon out;
  out.kind = kind;
  auto splice = [&](Canon child, bool inverted) {
    if (child.kind == kind) {
      for (auto& [inv, term] : child.terms) out.terms.emplace_back(inv != inverted, std::move(term));
    } else {
      out.terms.emplace_back(inverted, std::move(child));
    }
  };
  splice(canonicalize(e.lhs()), false);
  splice(canonicalize(e.rhs()), invert_rhs);
  return out;
}

std::string render(const Canon& c) {
  if (c.kind == Canon::Kind::kLeaf) return std::to_string(c.value);
  std::vector<std::string> plain;
  std::vector<std::string> inverted;
  for (const auto& [inv, term] : c.terms) {
    std::string s = render(term);
    // Sums never nest directly in sums, so only sums inside products need
    // parentheses.
    if (c.kind == Canon::Kind::kProduct && term.kind == Canon::Kind::kSum) s = "(" + s + ")";
    (inv ? inverted : plain).push_back(std::move(s));
  }
  std::sort(plain.begin(), plain.end());
  std::sort(inverted.begin(), inverted.end());
  const char* join_plain = c.kind == Canon::Kind::kSum ? " + " : " * ";
  const char* join_inv = c.kind == Canon::Kind::kSum ? " - " : " / ";
  std::string out;
  for (std::size_t i = 0; i < plain.size(); ++i) {
    if (i) out += join_plain;
    out += plain[i];
  }
  for (const auto& s : inverted) {
    out += out.empty() ? (c.kind == Canon::Kind::kSum ? "0 - " : "1 / ") : join_inv;
    out += s;
  }
  return out;
}

}  // namespace

std::string Expr::canonical() const { return render(canonicalize(*this)); }

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { kNumber, kOp, kLParen, kRParen, kEnd };

struct Token {
  Tok kind;
  std::int64_t number = 0;
  Op op = Op::kAdd;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto starts = [&](std::string_view s) { return text.substr(i, s.size()) == s; };
  while (i < text.size()) {
    const unsigned char ch = static_cast<unsigned char>(text[i]);
    if (std::isspace(ch)) {
      ++i;
    } else if (std::isdigit(ch)) {
      std::int64_t v = 0;
      std::size_t digits = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        if (++digits > 9) throw ExprParseError("number too long");
        v = v * 10 + (text[i] - '0');
        ++i;
      }
      out.push_back({Tok::kNumber, v});
    } else if (ch == '(') {
      out.push_back({Tok::kLParen});
      ++i;
    } else if (ch == ')') {
      out.push_back({Tok::kRParen});
      ++i;
    } else if (ch == '+' || ch == '-' || ch == '*' || ch == '/') {
      out.push_back({Tok::kOp, 0, static_cast<Op>(ch)});
      ++i;
    } else if (starts("\xC3\x97")) {  // ×
      out.push_back({Tok::kOp, 0, Op::kMul});
      i += 2;
    } else if (starts("\xC3\xB7")) {  // ÷
      out.push_back({Tok::kOp, 0, Op::kDiv});
      i += 2;
    } else if (starts("\xE2\x88\x92")) {  // − (minus sign)
      out.push_back({Tok::kOp, 0, Op::kSub});
      i += 3;
    } else {
      throw ExprParseError("unexpected character at offset " + std::to_string(i));
    }
  }
  out.push_back({Tok::kEnd});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Expr parse_all() {
    Expr e = parse_sum();
    if (peek().kind != Tok::kEnd) throw ExprParseError("trailing input");
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  Expr parse_sum() {
    Expr e = parse_product();
    while (peek().kind == Tok::kOp && precedence(peek().op) == 1) {
      const Op op = next().op;
      e = Expr::binary(op, e, parse_product());
    }
    return e;
  }

  Expr parse_product() {
    Expr e = parse_atom();
    while (peek().kind == Tok::kOp && precedence(peek().op) == 2) {
      const Op op = next().op;
      e = Expr::binary(op, e, parse_atom());
    }
    return e;
  }

  Expr parse_atom() {
    const Token& t = next();
    if (t.kind == Tok::kNumber) return Expr::number(t.number);
    if (t.kind == Tok::kLParen) {
      Expr e = parse_sum();
      if (next().kind != Tok::kRParen) throw ExprParseError("expected ')'");
      return e;
    }
    throw ExprParseError("expected a number or '('");
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr Expr::parse(std::string_view text) { return Parser(tokenize(text)).parse_all(); }

}  // namespace mcbr
