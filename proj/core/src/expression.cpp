#include "rftrap/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "rftrap/errors.hpp"

namespace rftrap {

namespace {

struct Token {
  enum class Type { number, ident, op, end };
  Type type = Type::end;
  std::string text;
  double value = 0.0;
  bool integral = false;  // literal had no '.' and no exponent part
  std::size_t position = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    current_ = Token{};
    current_.position = pos_;
    if (pos_ >= text_.size()) return;

    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      lex_number();
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
        ++end;
      current_.type = Token::Type::ident;
      current_.text = std::string(text_.substr(pos_, end - pos_));
      pos_ = end;
    } else if (std::string_view("+-*/^()").find(c) != std::string_view::npos) {
      current_.type = Token::Type::op;
      current_.text = std::string(1, c);
      ++pos_;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }
  }

  void lex_number() {
    std::size_t end = pos_;
    bool integral = true;
    auto digits = [&] {
      while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
    };
    digits();
    if (end < text_.size() && text_[end] == '.') {
      integral = false;
      ++end;
      digits();
    }
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t mark = end + 1;
      if (mark < text_.size() && (text_[mark] == '+' || text_[mark] == '-')) ++mark;
      if (mark < text_.size() && std::isdigit(static_cast<unsigned char>(text_[mark]))) {
        integral = false;
        end = mark;
        digits();
      }
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + end, v);
    if (ec != std::errc() || ptr != text_.data() + end)
      throw ParseError("malformed number", pos_);
    current_.type = Token::Type::number;
    current_.text = std::string(text_.substr(pos_, end - pos_));
    current_.value = v;
    current_.integral = integral;
    pos_ = end;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token current_;
};

ExprPtr make(Expr::Kind kind, std::size_t pos, ExprPtr lhs = nullptr, ExprPtr rhs = nullptr) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->position = pos;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    if (lex_.peek().type != Token::Type::end)
      throw ParseError("unexpected '" + lex_.peek().text + "'", lex_.peek().position);
    return e;
  }

 private:
  bool at_op(char op) const {
    const Token& t = lex_.peek();
    return t.type == Token::Type::op && t.text[0] == op;
  }

  void expect(char op) {
    if (!at_op(op)) {
      const Token& t = lex_.peek();
      throw ParseError(std::string("expected '") + op + "'" +
                           (t.type == Token::Type::end ? " before end of input"
                                                       : ", found '" + t.text + "'"),
                       t.position);
    }
    lex_.take();
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    while (at_op('+') || at_op('-')) {
      Token op = lex_.take();
      ExprPtr rhs = term();
      lhs = make(op.text[0] == '+' ? Expr::Kind::add : Expr::Kind::sub, op.position, lhs, rhs);
    }
    return lhs;
  }

  ExprPtr term() {
    ExprPtr lhs = factor();
    while (at_op('*') || at_op('/')) {
      Token op = lex_.take();
      ExprPtr rhs = factor();
      lhs = make(op.text[0] == '*' ? Expr::Kind::mul : Expr::Kind::div, op.position, lhs, rhs);
    }
    return lhs;
  }

  ExprPtr factor() {
    if (at_op('-') || at_op('+')) {
      Token op = lex_.take();
      ExprPtr operand = factor();
      return op.text[0] == '-' ? make(Expr::Kind::neg, op.position, operand) : operand;
    }
    ExprPtr b = base();
    if (at_op('^')) {
      Token caret = lex_.take();
      const Token& t = lex_.peek();
      if (t.type == Token::Type::op && t.text[0] == '-')
        throw ParseError("negative exponent", t.position);
      if (t.type != Token::Type::number)
        throw ParseError("exponent must be a nonnegative integer literal", t.position);
      if (!t.integral || t.value != std::floor(t.value) || t.value > 1000.0)
        throw ParseError("non-integer exponent '" + t.text + "'", t.position);
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::pow;
      e->position = caret.position;
      e->exponent = static_cast<unsigned>(t.value);
      e->lhs = b;
      lex_.take();
      return e;
    }
    return b;
  }

  ExprPtr base() {
    Token t = lex_.take();
    switch (t.type) {
      case Token::Type::end:
        throw ParseError("unexpected end of input", t.position);
      case Token::Type::number: {
        auto e = std::make_shared<Expr>();
        e->kind = Expr::Kind::number;
        e->position = t.position;
        e->number = t.value;
        return e;
      }
      case Token::Type::op:
        if (t.text[0] == '(') {
          ExprPtr inner = expr();
          expect(')');
          return inner;
        }
        throw ParseError("unexpected '" + t.text + "'", t.position);
      case Token::Type::ident:
        break;
    }
    if (t.text == "x") return make(Expr::Kind::var_x, t.position);
    if (t.text == "y") return make(Expr::Kind::var_y, t.position);
    if (t.text == "pi") return make(Expr::Kind::pi, t.position);
    if (t.text == "cos" || t.text == "sin") {
      expect('(');
      ExprPtr arg = expr();
      expect(')');
      return make(t.text == "cos" ? Expr::Kind::cos : Expr::Kind::sin, t.position, arg);
    }
    if (at_op('(')) throw ParseError("unknown function '" + t.text + "'", t.position);
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::param;
    e->position = t.position;
    e->name = t.text;
    return e;
  }

  Lexer lex_;
};

}  // namespace

ExprPtr parse_expression(std::string_view text) { return Parser(text).parse(); }

double evaluate(const Expr& e, const ParamMap& params, double x, double y) {
  auto sub = [&](const ExprPtr& p) { return evaluate(*p, params, x, y); };
  switch (e.kind) {
    case Expr::Kind::number: return e.number;
    case Expr::Kind::param: {
      auto it = params.find(e.name);
      if (it == params.end()) throw ParseError("unbound parameter '" + e.name + "'", e.position);
      return it->second;
    }
    case Expr::Kind::var_x: return x;
    case Expr::Kind::var_y: return y;
    case Expr::Kind::pi: return std::numbers::pi;
    case Expr::Kind::add: return sub(e.lhs) + sub(e.rhs);
    case Expr::Kind::sub: return sub(e.lhs) - sub(e.rhs);
    case Expr::Kind::mul: return sub(e.lhs) * sub(e.rhs);
    case Expr::Kind::div: return sub(e.lhs) / sub(e.rhs);
    case Expr::Kind::pow: return std::pow(sub(e.lhs), static_cast<double>(e.exponent));
    case Expr::Kind::neg: return -sub(e.lhs);
    case Expr::Kind::cos: return std::cos(sub(e.lhs));
    case Expr::Kind::sin: return std::sin(sub(e.lhs));
  }
  return 0.0;
}

double evaluate_expression(std::string_view text, const ParamMap& params, double x, double y) {
  return evaluate(*parse_expression(text), params, x, y);
}

}  // namespace rftrap
